//! JSON formats for tensors, families, fusion tensors, algebras, representations, groups and cocycles.
//!
//! Every decoder bounds the sizes it will allocate before touching the payload.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64};
use crate::models::group::{FiniteGroup, ThreeCocycle};
use crate::mpo_algebra::{fusion_residual, BasisElement, FusionSolution, FusionTable, MpoFamily};
use crate::prebialgebra::{PreBialgebra, Tensor3};
use crate::rep_theory::Representation;
use crate::tensor_core::MpoTensor;

/// Largest number of complex entries any decoded object may hold.
pub const MAX_ENTRIES: usize = 1 << 22;
/// Largest algebra dimension (λ is stored densely as n³ entries).
pub const MAX_ALGEBRA_DIM: usize = 128;
pub const MAX_GROUP_ORDER: usize = 64;

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn bounded(what: &str, dims: &[usize], cap: usize) -> Result<usize> {
    let mut total: usize = 1;
    for &d in dims {
        total = total.checked_mul(d).ok_or_else(|| input(format!("{what}: size overflows")))?;
    }
    if total > cap {
        return Err(Error::Size { what: "decoded entries", needed: total, cap });
    }
    Ok(total)
}

fn finite(re: f64, im: f64) -> Result<C64> {
    if re.is_finite() && im.is_finite() {
        Ok(C64::new(re, im))
    } else {
        Err(input("non-finite number"))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DenseJson {
    pub rows: usize,
    pub cols: usize,
    /// Row-major [re, im] pairs.
    pub data: Vec<[f64; 2]>,
}

impl DenseJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                data.push([m[(i, j)].re, m[(i, j)].im]);
            }
        }
        DenseJson { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let n = bounded("dense matrix", &[self.rows, self.cols], MAX_ENTRIES)?;
        if self.data.len() != n {
            return Err(input(format!("dense matrix {}x{} has {} entries", self.rows, self.cols, self.data.len())));
        }
        let vals = self.data.iter().map(|[r, i]| finite(*r, *i)).collect::<Result<Vec<_>>>()?;
        Ok(CMat::from_row_slice(self.rows, self.cols, &vals))
    }
}

fn vec_to_json(v: &CVec) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn vec_from_json(v: &[[f64; 2]], n: usize, what: &str) -> Result<CVec> {
    if v.len() != n {
        return Err(input(format!("{what} has length {}, expected {n}", v.len())));
    }
    Ok(CVec::from_vec(v.iter().map(|[r, i]| finite(*r, *i)).collect::<Result<Vec<_>>>()?))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MpoEntry {
    pub i: usize,
    pub j: usize,
    pub alpha: usize,
    pub beta: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MpoJson {
    #[serde(default)]
    pub name: Option<String>,
    pub d_out: usize,
    pub d_in: usize,
    pub bond: usize,
    pub entries: Vec<MpoEntry>,
}

impl MpoJson {
    pub fn from_tensor(t: &MpoTensor, name: Option<String>) -> Self {
        let mut entries = Vec::new();
        for i in 0..t.d_out() {
            for j in 0..t.d_in() {
                for a in 0..t.bond() {
                    for b in 0..t.bond() {
                        let v = t.entry(i, j, a, b);
                        if v.norm() != 0.0 {
                            entries.push(MpoEntry { i, j, alpha: a, beta: b, re: v.re, im: v.im });
                        }
                    }
                }
            }
        }
        MpoJson { name, d_out: t.d_out(), d_in: t.d_in(), bond: t.bond(), entries }
    }

    pub fn to_tensor(&self) -> Result<MpoTensor> {
        bounded("MPO tensor", &[self.d_out, self.d_in, self.bond, self.bond], MAX_ENTRIES)?;
        let mut t = MpoTensor::zeros(self.d_out, self.d_in, self.bond).map_err(|e| input(e.to_string()))?;
        for e in &self.entries {
            if e.i >= self.d_out || e.j >= self.d_in || e.alpha >= self.bond || e.beta >= self.bond {
                return Err(input(format!("entry ({}, {}, {}, {}) out of range", e.i, e.j, e.alpha, e.beta)));
            }
            let v = t.entry(e.i, e.j, e.alpha, e.beta) + finite(e.re, e.im)?;
            t.set(e.i, e.j, e.alpha, e.beta, v)?;
        }
        Ok(t)
    }
}

pub fn parse_mpo(s: &str) -> Result<MpoTensor> {
    serde_json::from_str::<MpoJson>(s)?.to_tensor()
}

pub fn mpo_to_json(t: &MpoTensor, name: Option<&str>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&MpoJson::from_tensor(t, name.map(String::from)))?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub mult: Vec<Vec<usize>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

impl GroupJson {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupJson { order: g.order(), mult: g.table().to_vec(), labels: Some(g.labels().to_vec()) }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.order == 0 || self.order > MAX_GROUP_ORDER {
            return Err(input(format!("group order must be in 1..={MAX_GROUP_ORDER}")));
        }
        if self.mult.len() != self.order {
            return Err(input("multiplication table has the wrong number of rows"));
        }
        let labels = match &self.labels {
            Some(l) => l.clone(),
            None => (0..self.order).map(|a| a.to_string()).collect(),
        };
        FiniteGroup::from_table(labels, self.mult.clone())
    }
}

pub fn parse_group(s: &str) -> Result<FiniteGroup> {
    serde_json::from_str::<GroupJson>(s)?.to_group()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleValue {
    pub g: usize,
    pub h: usize,
    pub k: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleJson {
    #[serde(default)]
    pub group: Option<GroupJson>,
    /// Unlisted triples default to 1.
    pub values: Vec<CocycleValue>,
    #[serde(default)]
    pub normalized: Option<bool>,
}

impl CocycleJson {
    pub fn from_cocycle(w: &ThreeCocycle) -> Self {
        let n = w.group().order();
        let mut values = Vec::new();
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let v = w.get(g, h, k);
                    if (v - crate::linalg::ONE).norm() > 0.0 {
                        values.push(CocycleValue { g, h, k, re: v.re, im: v.im });
                    }
                }
            }
        }
        CocycleJson { group: Some(GroupJson::from_group(w.group())), values, normalized: Some(w.normalized) }
    }

    /// Builds the cocycle over the embedded group, or over `fallback` when none is embedded.
    pub fn to_cocycle(&self, fallback: Option<&FiniteGroup>) -> Result<ThreeCocycle> {
        let g = match (&self.group, fallback) {
            (Some(gj), _) => gj.to_group()?,
            (None, Some(g)) => g.clone(),
            (None, None) => return Err(input("cocycle needs a group")),
        };
        let n = g.order();
        let mut vals = vec![crate::linalg::ONE; n * n * n];
        for v in &self.values {
            if v.g >= n || v.h >= n || v.k >= n {
                return Err(input(format!("cocycle index ({}, {}, {}) out of range", v.g, v.h, v.k)));
            }
            vals[(v.g * n + v.h) * n + v.k] = finite(v.re, v.im)?;
        }
        let w = ThreeCocycle::new(g, vals)?;
        if self.normalized == Some(true) && !w.normalized {
            return Err(input("cocycle is flagged normalized but ω(1,k,l) ≠ 1"));
        }
        Ok(w)
    }
}

pub fn parse_cocycle(s: &str, group: Option<&FiniteGroup>) -> Result<ThreeCocycle> {
    serde_json::from_str::<CocycleJson>(s)?.to_cocycle(group)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyJson {
    pub name: String,
    pub group: GroupJson,
    pub tensors: Vec<MpoJson>,
    pub basis: Vec<BasisElement>,
}

impl FamilyJson {
    pub fn from_family(f: &MpoFamily) -> Self {
        FamilyJson {
            name: f.name.clone(),
            group: GroupJson::from_group(f.group()),
            tensors: f.tensors().iter().map(|t| MpoJson::from_tensor(t, None)).collect(),
            basis: f.basis().to_vec(),
        }
    }

    pub fn to_family(&self) -> Result<MpoFamily> {
        let g = self.group.to_group()?;
        if self.tensors.len() != g.order() {
            return Err(input("one tensor per group element"));
        }
        bounded("family basis", &[self.basis.len()], MAX_ALGEBRA_DIM)?;
        let tensors = self.tensors.iter().map(|t| t.to_tensor()).collect::<Result<Vec<_>>>()?;
        MpoFamily::new(self.name.clone(), g, tensors, self.basis.clone())
    }
}

pub fn parse_family(s: &str) -> Result<MpoFamily> {
    serde_json::from_str::<FamilyJson>(s)?.to_family()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FusionJson {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub y: DenseJson,
    pub y_rinv: DenseJson,
    #[serde(default)]
    pub x: Option<DenseJson>,
}

impl FusionJson {
    pub fn from_solution(s: &FusionSolution) -> Self {
        FusionJson {
            a: s.a,
            b: s.b,
            c: s.c,
            y: DenseJson::from_matrix(&s.y),
            y_rinv: DenseJson::from_matrix(&s.y_rinv),
            x: s.x.as_ref().map(DenseJson::from_matrix),
        }
    }

    /// Decodes the matrices; the residual is left infinite until checked against a family.
    pub fn to_solution(&self) -> Result<FusionSolution> {
        let y = self.y.to_matrix()?;
        let y_rinv = self.y_rinv.to_matrix()?;
        if y_rinv.shape() != (y.ncols(), y.nrows()) {
            return Err(input("y_rinv must have the transposed shape of y"));
        }
        let x = self.x.as_ref().map(|x| x.to_matrix()).transpose()?;
        let x_inv = match &x {
            Some(m) => {
                if m.shape() != (y.ncols(), y.ncols()) {
                    return Err(input("x must be square with the row length of y"));
                }
                Some(crate::linalg::inverse(m).map_err(|_| input("x is singular"))?)
            }
            None => None,
        };
        Ok(FusionSolution { a: self.a, b: self.b, c: self.c, x, x_inv, y, y_rinv, residual: f64::INFINITY, from_hint: true })
    }
}

pub fn parse_fusion(s: &str) -> Result<FusionSolution> {
    serde_json::from_str::<FusionJson>(s)?.to_solution()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StarJson {
    pub matrix: DenseJson,
    #[serde(default = "default_true")]
    pub conjugate: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PreBialgebraJson {
    pub dim: usize,
    #[serde(default)]
    pub basis: Option<Vec<String>>,
    pub lambda: Vec<StructureEntry>,
    #[serde(rename = "coLambda", default)]
    pub co_lambda: Option<Vec<StructureEntry>>,
    #[serde(default)]
    pub unit: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub counit: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub star: Option<StarJson>,
}

fn tensor_entries(t: &Tensor3) -> Vec<StructureEntry> {
    t.entries().into_iter().map(|(i, j, k, v)| StructureEntry { i, j, k, re: v.re, im: v.im }).collect()
}

fn tensor_from_entries(n: usize, es: &[StructureEntry]) -> Result<Tensor3> {
    bounded("structure constants", &[es.len()], MAX_ENTRIES)?;
    let mut t = Tensor3::zeros(n);
    for e in es {
        if e.i >= n || e.j >= n || e.k >= n {
            return Err(input(format!("structure index ({}, {}, {}) out of range", e.i, e.j, e.k)));
        }
        t.add(e.i, e.j, e.k, finite(e.re, e.im)?);
    }
    Ok(t)
}

impl PreBialgebraJson {
    pub fn from_algebra(p: &PreBialgebra) -> Self {
        PreBialgebraJson {
            dim: p.dim(),
            basis: Some(p.labels().to_vec()),
            lambda: tensor_entries(p.mult()),
            co_lambda: p.comult().map(tensor_entries),
            unit: p.unit().map(vec_to_json),
            counit: p.counit().map(vec_to_json),
            star: p.star().map(|s| StarJson { matrix: DenseJson::from_matrix(s), conjugate: true }),
        }
    }

    pub fn to_algebra(&self) -> Result<PreBialgebra> {
        let n = self.dim;
        if n == 0 || n > MAX_ALGEBRA_DIM {
            return Err(input(format!("algebra dimension must be in 1..={MAX_ALGEBRA_DIM}")));
        }
        let labels = match &self.basis {
            Some(l) if l.len() == n => l.clone(),
            Some(_) => return Err(input("basis label count differs from dim")),
            None => (1..=n).map(|i| format!("e_{i}")).collect(),
        };
        let mult = tensor_from_entries(n, &self.lambda)?;
        let comult = self.co_lambda.as_ref().map(|c| tensor_from_entries(n, c)).transpose()?;
        let mut p = PreBialgebra::new(labels, mult, comult)?;
        if let Some(u) = &self.unit {
            p = p.with_unit(vec_from_json(u, n, "unit")?)?;
        }
        if let Some(e) = &self.counit {
            p = p.with_counit(vec_from_json(e, n, "counit")?)?;
        }
        if let Some(s) = &self.star {
            if !s.conjugate {
                return Err(input("only antilinear stars are supported"));
            }
            let m = s.matrix.to_matrix()?;
            if m.shape() != (n, n) {
                return Err(input("star matrix must be dim × dim"));
            }
            p = p.with_star(m)?;
        }
        Ok(p)
    }
}

pub fn parse_prebialgebra(s: &str) -> Result<PreBialgebra> {
    serde_json::from_str::<PreBialgebraJson>(s)?.to_algebra()
}

pub fn prebialgebra_to_json(p: &PreBialgebra) -> Result<String> {
    Ok(serde_json::to_string_pretty(&PreBialgebraJson::from_algebra(p))?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub dim: usize,
    pub matrices: Vec<DenseJson>,
}

impl RepresentationJson {
    pub fn from_rep(r: &Representation) -> Self {
        RepresentationJson { dim: r.dim(), matrices: r.matrices().iter().map(DenseJson::from_matrix).collect() }
    }

    pub fn to_rep(&self) -> Result<Representation> {
        if self.matrices.is_empty() {
            return Err(input("representation needs at least one matrix"));
        }
        bounded("representation", &[self.matrices.len(), self.dim, self.dim], MAX_ENTRIES)?;
        let ms = self.matrices.iter().map(|m| m.to_matrix()).collect::<Result<Vec<_>>>()?;
        if ms.iter().any(|m| m.shape() != (self.dim, self.dim)) {
            return Err(input(format!("every matrix must be {0}x{0}", self.dim)));
        }
        Representation::new(ms)
    }
}

pub fn parse_representation(s: &str) -> Result<Representation> {
    serde_json::from_str::<RepresentationJson>(s)?.to_rep()
}

/// A family with fusion tensors for every ordered pair, as written by the `fusion` command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FusionSetJson {
    pub family: FamilyJson,
    pub solutions: Vec<FusionJson>,
}

impl FusionSetJson {
    pub fn from_table(family: &MpoFamily, fusions: &FusionTable) -> Self {
        FusionSetJson { family: FamilyJson::from_family(family), solutions: fusions.values().map(FusionJson::from_solution).collect() }
    }

    /// Decodes the family and every solution, recomputing residuals against the family.
    pub fn to_table(&self) -> Result<(MpoFamily, FusionTable)> {
        let family = self.family.to_family()?;
        let g = family.group();
        let n = g.order();
        let mut fusions = FusionTable::new();
        for j in &self.solutions {
            let mut s = j.to_solution()?;
            if s.a >= n || s.b >= n || s.c != g.op(s.a, s.b) {
                return Err(input(format!("fusion ({}, {}) -> {} does not follow the group law", s.a, s.b, s.c)));
            }
            let (ta, tb, tc) = (family.tensor(s.a), family.tensor(s.b), family.tensor(s.c));
            let dab = ta.bond() * tb.bond();
            if s.y.shape() != (tc.bond(), dab) {
                return Err(input(format!("y for ({}, {}) must be {}x{dab}", s.a, s.b, tc.bond())));
            }
            bounded("fusion product", &[ta.d_out(), ta.d_in(), dab, dab], MAX_ENTRIES)?;
            if ta.d_in() != tb.d_out() {
                return Err(input("family tensors cannot be stacked"));
            }
            s.residual = fusion_residual(ta, tb, tc, &s.y, &s.y_rinv)?;
            if fusions.insert((s.a, s.b), s).is_some() {
                return Err(input("duplicate fusion solution"));
            }
        }
        if fusions.len() != n * n {
            return Err(input(format!("expected {} fusion solutions, found {}", n * n, fusions.len())));
        }
        Ok((family, fusions))
    }
}

pub fn parse_fusion_set(s: &str) -> Result<(MpoFamily, FusionTable)> {
    serde_json::from_str::<FusionSetJson>(s)?.to_table()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::czy;

    #[test]
    fn mpo_round_trip() {
        let t = czy::a0();
        let back = parse_mpo(&mpo_to_json(&t, Some("a0")).unwrap()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn fusion_set_round_trip() {
        let f = czy::family();
        let table = czy::fusions(1e-9).unwrap();
        let s = serde_json::to_string(&FusionSetJson::from_table(&f, &table)).unwrap();
        let (_, back) = parse_fusion_set(&s).unwrap();
        assert_eq!(back.len(), 4);
        assert!(back.values().all(|x| x.residual < 1e-9));
    }

    #[test]
    fn algebra_round_trip() {
        let p = czy::algebra();
        let q = parse_prebialgebra(&prebialgebra_to_json(&p).unwrap()).unwrap();
        assert_eq!(q.mult().max_diff(p.mult()), 0.0);
        assert_eq!(q.comult().unwrap().max_diff(p.comult().unwrap()), 0.0);
        assert_eq!(q.star(), p.star());
    }

    #[test]
    fn family_round_trip() {
        let f = czy::family();
        let s = serde_json::to_string(&FamilyJson::from_family(&f)).unwrap();
        assert_eq!(parse_family(&s).unwrap(), f);
    }

    #[test]
    fn cocycle_round_trip() {
        let w = ThreeCocycle::z2_nontrivial();
        let s = serde_json::to_string(&CocycleJson::from_cocycle(&w)).unwrap();
        assert_eq!(parse_cocycle(&s, None).unwrap(), w);
    }

    #[test]
    fn rejects_oversized_and_out_of_range() {
        let big = r#"{"d_out": 1000, "d_in": 1000, "bond": 1000, "entries": []}"#;
        assert!(matches!(parse_mpo(big), Err(Error::Size { .. })));
        let bad = r#"{"d_out": 2, "d_in": 2, "bond": 1, "entries": [{"i": 5, "j": 0, "alpha": 0, "beta": 0, "re": 1}]}"#;
        assert!(parse_mpo(bad).is_err());
        let g = r#"{"order": 2, "mult": [[0, 1], [1, 1]]}"#;
        assert!(parse_group(g).is_err());
    }
}
