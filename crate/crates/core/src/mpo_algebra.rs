//! Fusion tensors between stacked MPO tensors, associators and their cohomology classes, and
//! extraction of the multiplication / comultiplication of the boundary algebra.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64, ONE, RANK_RTOL, ZERO};
use crate::models::group::{cocycle_residual, FiniteGroup};
use crate::prebialgebra::{find_unit, PreBialgebra, Tensor3};
use crate::tensor_core::{mpo_close, mpo_vertical_product, Cap, MpoTensor};

/// Boundary basis element e_sector^{mn}, realized as the matrix |n⟩⟨m|.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisElement {
    pub sector: usize,
    pub m: usize,
    pub n: usize,
}

/// MPO tensors labelled by group elements plus the boundary basis spanning the independent sectors.
#[derive(Clone, Debug, PartialEq)]
pub struct MpoFamily {
    pub name: String,
    group: FiniteGroup,
    tensors: Vec<MpoTensor>,
    basis: Vec<BasisElement>,
}

impl MpoFamily {
    pub fn new(name: impl Into<String>, group: FiniteGroup, tensors: Vec<MpoTensor>, basis: Vec<BasisElement>) -> Result<Self> {
        if tensors.len() != group.order() {
            return Err(Error::Input(format!("{} tensors for a group of order {}", tensors.len(), group.order())));
        }
        let (d_out, d_in) = (tensors[0].d_out(), tensors[0].d_in());
        if tensors.iter().any(|t| t.d_out() != d_out || t.d_in() != d_in) {
            return Err(Error::Input("family tensors must share physical dimensions".into()));
        }
        if d_out != d_in {
            return Err(Error::Input("family tensors must be square in the physical indices".into()));
        }
        for b in &basis {
            let d = tensors.get(b.sector).map(|t| t.bond()).unwrap_or(0);
            if b.m >= d || b.n >= d {
                return Err(Error::Input(format!("basis element {b:?} out of range")));
            }
        }
        let mut sorted = basis.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != basis.len() || basis.is_empty() {
            return Err(Error::Input("boundary basis must be nonempty and duplicate free".into()));
        }
        Ok(Self { name: name.into(), group, tensors, basis })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn tensors(&self) -> &[MpoTensor] {
        &self.tensors
    }

    pub fn tensor(&self, a: usize) -> &MpoTensor {
        &self.tensors[a]
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn physical_dim(&self) -> usize {
        self.tensors[0].d_out()
    }

    pub fn index_of(&self, sector: usize, m: usize, n: usize) -> Option<usize> {
        self.basis.iter().position(|b| *b == BasisElement { sector, m, n })
    }

    /// |n⟩⟨m| in the bond space of the element's sector.
    pub fn boundary(&self, b: &BasisElement) -> CMat {
        let d = self.tensors[b.sector].bond();
        linalg::unit(d, b.n, b.m)
    }

    /// O^{(l)}(e_I).
    pub fn closed(&self, i: usize, l: usize, cap: Cap) -> Result<CMat> {
        let b = &self.basis[i];
        Ok(mpo_close(&self.tensors[b.sector], &self.boundary(b), l, cap)?.into_matrix())
    }

    /// Rank of {O^{(l)}(e_I)} as vectors.
    pub fn independence_rank(&self, l: usize, cap: Cap) -> Result<usize> {
        let cols: Vec<CMat> = (0..self.dim())
            .map(|i| self.closed(i, l, cap).map(|o| vectorize(&o)))
            .collect::<Result<_>>()?;
        Ok(linalg::rank(&linalg::hstack(&cols), RANK_RTOL))
    }

    /// The N=2 closed operators represent the algebra faithfully.
    pub fn is_faithful_at_two(&self, cap: Cap) -> Result<bool> {
        Ok(self.independence_rank(2, cap)? == self.dim())
    }

    pub fn labels(&self) -> Vec<String> {
        (1..=self.dim()).map(|i| format!("e_{i}")).collect()
    }
}

fn vectorize(m: &CMat) -> CMat {
    CMat::from_iterator(m.len(), 1, m.iter().copied())
}

/// X (A_a ∘ A_b) X⁻¹ = A_c ⊕ 0 with Y the leading D_c rows of X.
#[derive(Clone, Debug)]
pub struct FusionSolution {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub x: Option<CMat>,
    pub x_inv: Option<CMat>,
    pub y: CMat,
    pub y_rinv: CMat,
    /// max_{ik} ‖Y T^{ik} − A_c^{ik} Y‖ together with ‖Y Y_rinv − 𝟙‖.
    pub residual: f64,
    pub from_hint: bool,
}

impl FusionSolution {
    pub fn with_labels(mut self, a: usize, b: usize, c: usize) -> Self {
        self.a = a;
        self.b = b;
        self.c = c;
        self
    }

    /// Rescales Y by β and Y_rinv by 1/β.
    pub fn rescaled(&self, beta: C64) -> Self {
        let mut s = self.clone();
        s.y *= beta;
        s.y_rinv /= beta;
        if let (Some(x), Some(xi)) = (s.x.as_mut(), s.x_inv.as_mut()) {
            let dc = s.y.nrows();
            for r in 0..dc {
                let mut row = x.row_mut(r);
                row *= beta;
            }
            for c in 0..dc {
                let mut col = xi.column_mut(c);
                col /= beta;
            }
        }
        s
    }
}

/// Residual of Y T^{ik} = A_c^{ik} Y over all slices, and of Y Y_rinv = 𝟙.
pub fn fusion_residual(a: &MpoTensor, b: &MpoTensor, c: &MpoTensor, y: &CMat, y_rinv: &CMat) -> Result<f64> {
    let t = mpo_vertical_product(a, b)?;
    if y.shape() != (c.bond(), t.bond()) {
        return Ok(f64::INFINITY);
    }
    let mut r: f64 = 0.0;
    for i in 0..t.d_out() {
        for k in 0..t.d_in() {
            r = r.max(linalg::max_diff(&(y * t.slice(i, k)), &(c.slice(i, k) * y)));
        }
    }
    Ok(r.max(linalg::max_diff(&(y * y_rinv), &linalg::eye(y.nrows()))))
}

/// Solves for a fusion tensor Y_{a,b}: (A_a ∘ A_b) → A_c. A supplied X is verified and returned verbatim.
pub fn solve_fusion(a: &MpoTensor, b: &MpoTensor, c: &MpoTensor, hint: Option<&CMat>, tol: f64, seed: u64) -> Result<FusionSolution> {
    let t = mpo_vertical_product(a, b)?;
    if (t.d_out(), t.d_in()) != (c.d_out(), c.d_in()) {
        return Err(Error::Shape("target tensor has different physical dimensions".into()));
    }
    let dab = t.bond();
    let dc = c.bond();
    if dc > dab {
        return Err(Error::RankDeficient(format!("D_c = {dc} exceeds D_a·D_b = {dab}")));
    }
    if let Some(x) = hint {
        if x.shape() != (dab, dab) {
            return Err(Error::Shape(format!("hint X must be {dab}x{dab}")));
        }
        let x_inv = linalg::inverse(x)?;
        let zero = linalg::zeros(dab - dc, dab - dc);
        let mut r: f64 = 0.0;
        for (s, cs) in t.slices().iter().zip(c.slices()) {
            r = r.max(linalg::max_diff(&(x * s * &x_inv), &linalg::direct_sum(cs, &zero)));
        }
        if r > tol {
            return Err(Error::InconsistentFusion(format!("hint X fails X T X⁻¹ = A_c ⊕ 0 by {r:e}")));
        }
        let y = x.rows(0, dc).into_owned();
        let y_rinv = x_inv.columns(0, dc).into_owned();
        let residual = fusion_residual(a, b, c, &y, &y_rinv)?.max(r);
        return Ok(FusionSolution { a: 0, b: 0, c: 0, x: Some(x.clone()), x_inv: Some(x_inv), y, y_rinv, residual, from_hint: true });
    }
    let basis = linalg::intertwiners(t.slices(), c.slices(), RANK_RTOL)?;
    if basis.is_empty() {
        return Err(Error::NoFusion(format!("{dc}x{dab} intertwiners")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = None;
    for _ in 0..8 {
        let cand = linalg::gauge_fix(&linalg::random_combination(&basis, &mut rng));
        if linalg::rank(&cand, RANK_RTOL) == dc && linalg::condition_number(&cand) < 1e8 {
            y = Some(cand);
            break;
        }
    }
    let y = y.ok_or_else(|| Error::RankDeficient(format!("no full-row-rank element among {} intertwiners", basis.len())))?;
    let (x, x_inv) = complete_x(&t, &y);
    let y_rinv = match &x_inv {
        Some(xi) => xi.columns(0, dc).into_owned(),
        None => linalg::pinv(&y, 1e-12),
    };
    let residual = fusion_residual(a, b, c, &y, &y_rinv)?;
    if residual > tol {
        return Err(Error::Numerical(format!("solved fusion tensor has residual {residual:e}")));
    }
    Ok(FusionSolution { a: 0, b: 0, c: 0, x, x_inv, y, y_rinv, residual, from_hint: false })
}

/// Extends Y to an invertible X with rows from the common left kernel of the stacked slices.
fn complete_x(t: &MpoTensor, y: &CMat) -> (Option<CMat>, Option<CMat>) {
    let dab = t.bond();
    let stacked = linalg::hstack(t.slices());
    let kernel = linalg::null_space(&stacked.transpose(), RANK_RTOL);
    let mut rows = vec![y.clone()];
    let mut rank = y.nrows();
    for k in 0..kernel.ncols() {
        if rank == dab {
            break;
        }
        let z = CMat::from_iterator(1, dab, kernel.column(k).iter().cloned());
        let mut trial = rows.clone();
        trial.push(z.clone());
        if linalg::rank(&linalg::vstack(&trial), RANK_RTOL) > rank {
            rows = trial;
            rank += 1;
        }
    }
    if rank < dab {
        return (None, None);
    }
    let x = linalg::vstack(&rows);
    match linalg::inverse(&x) {
        Ok(xi) => (Some(x), Some(xi)),
        Err(_) => (None, None),
    }
}

/// Solved or hinted fusion tensors for every ordered pair of group elements.
pub type FusionTable = BTreeMap<(usize, usize), FusionSolution>;

pub fn solve_family_fusions(
    family: &MpoFamily,
    hint: &dyn Fn(usize, usize) -> Option<CMat>,
    tol: f64,
    seed: u64,
) -> Result<FusionTable> {
    let g = family.group();
    let mut out = BTreeMap::new();
    for a in 0..g.order() {
        for b in 0..g.order() {
            let c = g.op(a, b);
            let h = hint(a, b);
            let s = solve_fusion(family.tensor(a), family.tensor(b), family.tensor(c), h.as_ref(), tol, seed)
                .map_err(|e| match e {
                    Error::NoFusion(m) => Error::NoFusion(format!("({a},{b}): {m}")),
                    other => other,
                })?;
            out.insert((a, b), s.with_labels(a, b, c));
        }
    }
    Ok(out)
}

/// Cohomology class of a Z_n 3-cocycle, identified by I = ∏_j ω(1,j,1) = exp(2πi p/n).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CohomologyClass {
    pub n: usize,
    pub p: usize,
    pub invariant: C64,
}

impl CohomologyClass {
    pub fn is_trivial(&self) -> bool {
        self.p == 0
    }

    pub fn label(&self) -> String {
        match (self.n, self.p) {
            (_, 0) => "trivial".into(),
            (2, 1) => "nontrivial".into(),
            (n, p) => format!("nontrivial (p = {p} mod {n})"),
        }
    }
}

/// ω(a,b,c) table, raw from the fusion tensors and in normalized gauge.
#[derive(Clone, Debug)]
pub struct AssociatorTable {
    pub order: usize,
    pub raw: Vec<C64>,
    pub omega: Vec<C64>,
    pub residuals: Vec<f64>,
    pub class: Option<CohomologyClass>,
}

impl AssociatorTable {
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.order + b) * self.order + c
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> C64 {
        self.omega[self.idx(a, b, c)]
    }

    pub fn get_raw(&self, a: usize, b: usize, c: usize) -> C64 {
        self.raw[self.idx(a, b, c)]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// ω(a,b,c) from Y_{a+b,c}(Y_{a,b}⊗𝟙) = ω Y_{a,b+c}(𝟙⊗Y_{b,c}), compared on the bond subspace reached by the
/// triple product.
pub fn associator(family: &MpoFamily, fusions: &FusionTable, tol: f64) -> Result<AssociatorTable> {
    let g = family.group();
    let n = g.order();
    let mut raw = Vec::with_capacity(n * n * n);
    let mut residuals = Vec::with_capacity(n * n * n);
    let get = |a: usize, b: usize| {
        fusions.get(&(a, b)).ok_or_else(|| Error::Input(format!("missing fusion tensor Y_({a},{b})")))
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (ta, tb, tc) = (family.tensor(a), family.tensor(b), family.tensor(c));
                let (da, dc) = (ta.bond(), tc.bond());
                let l = &get(g.op(a, b), c)?.y * linalg::kron(&get(a, b)?.y, &linalg::eye(dc));
                let r = &get(a, g.op(b, c))?.y * linalg::kron(&linalg::eye(da), &get(b, c)?.y);
                let triple = mpo_vertical_product(&mpo_vertical_product(ta, tb)?, tc)?;
                let q = linalg::column_space(&linalg::hstack(triple.slices()), RANK_RTOL);
                let (lq, rq) = (&l * &q, &r * &q);
                let rr = linalg::inner(&rq, &rq);
                if rr.norm() < 1e-14 {
                    return Err(Error::InconsistentFusion(format!("({a},{b},{c}): right side vanishes")));
                }
                let w = linalg::inner(&rq, &lq) / rr;
                let res = linalg::frob(&(&lq - &rq * w)) / rr.norm().sqrt();
                if res > tol {
                    return Err(Error::InconsistentFusion(format!("({a},{b},{c}): sides not proportional, residual {res:e}")));
                }
                raw.push(w);
                residuals.push(res);
            }
        }
    }
    let omega = normalize_cocycle(&raw, g);
    let class = cocycle_class(&raw, g, tol.max(1e-9)).ok();
    Ok(AssociatorTable { order: n, raw, omega, residuals, class })
}

/// Applies the coboundary with β(e,c) = 1/ω(e,e,c), β(a,e) = ω(a,e,e), β = 1 elsewhere.
pub fn normalize_cocycle(raw: &[C64], g: &FiniteGroup) -> Vec<C64> {
    let n = g.order();
    let w = |a: usize, b: usize, c: usize| raw[(a * n + b) * n + c];
    let mut beta = vec![ONE; n * n];
    for c in 0..n {
        beta[c] = ONE / w(0, 0, c);
    }
    for a in 1..n {
        beta[a * n] = w(a, 0, 0);
    }
    let db = crate::models::group::coboundary(&beta, g);
    raw.iter().zip(db).map(|(x, d)| x * d).collect()
}

/// Class of ω in H^3(Z_n, U(1)) via the coboundary-invariant product ∏_j ω(1,j,1).
pub fn cocycle_class(omega: &[C64], g: &FiniteGroup, tol: f64) -> Result<CohomologyClass> {
    let n = g.order();
    if omega.len() != n * n * n {
        return Err(Error::Input(format!("associator table needs {} entries", n * n * n)));
    }
    let r = cocycle_residual(omega, g);
    if r > tol * (1.0 + omega.iter().fold(0.0f64, |m, z| m.max(z.norm()))).powi(3) {
        return Err(Error::NotACocycle(r));
    }
    let n = g
        .cyclic_order()
        .ok_or_else(|| Error::Precondition("cohomology class is only implemented for cyclic groups".into()))?;
    if n == 1 {
        return Ok(CohomologyClass { n, p: 0, invariant: ONE });
    }
    let inv: C64 = (0..n).map(|j| omega[(n + j) * n + 1]).product();
    let turns = inv.arg() / (2.0 * std::f64::consts::PI) * n as f64;
    let p = (turns.round() as i64).rem_euclid(n as i64) as usize;
    let expected = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * p as f64 / n as f64);
    if (inv - expected).norm() > 1e-6 {
        return Err(Error::Numerical(format!("invariant {inv} is not an n-th root of unity")));
    }
    Ok(CohomologyClass { n, p, invariant: inv })
}

/// λ from both the fusion-tensor formula and products of the N=2 closed operators.
#[derive(Clone, Debug)]
pub struct MultiplicationReport {
    pub lambda: Tensor3,
    pub lambda_operators: Tensor3,
    pub discrepancy: f64,
    pub operator_residual: f64,
}

/// e_a^{mn}·e_b^{pq} = Σ_{rs} [Y(e⊗e)Y_rinv]_{sr} e_{ab}^{rs}, cross-checked at N = 2.
pub fn extract_multiplication(family: &MpoFamily, fusions: &FusionTable, tol: f64, cap: Cap) -> Result<MultiplicationReport> {
    let g = family.group();
    let dim = family.dim();
    let mut lambda = Tensor3::zeros(dim);
    for (i, bi) in family.basis().iter().enumerate() {
        for (j, bj) in family.basis().iter().enumerate() {
            let s = fusions
                .get(&(bi.sector, bj.sector))
                .ok_or_else(|| Error::Input(format!("missing fusion tensor Y_({},{})", bi.sector, bj.sector)))?;
            let c = g.op(bi.sector, bj.sector);
            let m = &s.y * linalg::kron(&family.boundary(bi), &family.boundary(bj)) * &s.y_rinv;
            for (k, bk) in family.basis().iter().enumerate() {
                if bk.sector == c {
                    lambda.set(i, j, k, m[(bk.n, bk.m)]);
                }
            }
        }
    }
    let (lambda_operators, operator_residual) = lambda_from_operators(family, 2, cap)?;
    if operator_residual > tol {
        return Err(Error::ExtractionInconsistency(operator_residual));
    }
    let discrepancy = lambda.max_diff(&lambda_operators);
    if discrepancy > tol {
        return Err(Error::ExtractionInconsistency(discrepancy));
    }
    Ok(MultiplicationReport { lambda: lambda.chop(1e-13), lambda_operators: lambda_operators.chop(1e-13), discrepancy, operator_residual })
}

/// Expands O^{(l)}(e_I)O^{(l)}(e_J) in the closed operators by least squares; returns λ and the worst residual.
pub fn lambda_from_operators(family: &MpoFamily, l: usize, cap: Cap) -> Result<(Tensor3, f64)> {
    let dim = family.dim();
    let ops: Vec<CMat> = (0..dim).map(|i| family.closed(i, l, cap)).collect::<Result<_>>()?;
    operator_lambda(&ops)
}

/// λ with O_I O_J = Σ_K λ_IJ^K O_K for linearly independent operators.
pub fn operator_lambda(ops: &[CMat]) -> Result<(Tensor3, f64)> {
    let dim = ops.len();
    let v = linalg::hstack(&ops.iter().map(vectorize).collect::<Vec<_>>());
    if linalg::rank(&v, RANK_RTOL) < dim {
        return Err(Error::DegenerateAlgebra("closed operators are linearly dependent".into()));
    }
    let vp = linalg::pinv(&v, 1e-12);
    let mut lambda = Tensor3::zeros(dim);
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let p = vectorize(&(&ops[i] * &ops[j]));
            let x = &vp * &p;
            worst = worst.max(linalg::max_diff(&(&v * &x), &p));
            for k in 0..dim {
                lambda.set(i, j, k, x[(k, 0)]);
            }
        }
    }
    Ok((lambda, worst))
}

/// Δ(e_a^{mn}) = Σ_p e_a^{mp} ⊗ e_a^{pn} over valid pairs, verified at (l1, l2) = (1,1) and (2,2).
pub fn extract_comultiplication(family: &MpoFamily, tol: f64, cap: Cap) -> Result<Tensor3> {
    let dim = family.dim();
    let mut comult = Tensor3::zeros(dim);
    for (i, b) in family.basis().iter().enumerate() {
        let d = family.tensor(b.sector).bond();
        for p in 0..d {
            if let (Some(j), Some(k)) = (family.index_of(b.sector, b.m, p), family.index_of(b.sector, p, b.n)) {
                comult.add(i, j, k, ONE);
            }
        }
    }
    let r = comultiplication_residual(family, &comult, &[(1, 1), (2, 2)], cap)?;
    if r > tol {
        return Err(Error::Mask(r));
    }
    Ok(comult)
}

/// max over I and (l1,l2) of ‖O^{(l1+l2)}(e_I) − Σ Λ O^{(l1)}(e_J) ⊗ O^{(l2)}(e_K)‖.
pub fn comultiplication_residual(family: &MpoFamily, comult: &Tensor3, lengths: &[(usize, usize)], cap: Cap) -> Result<f64> {
    let dim = family.dim();
    let mut worst: f64 = 0.0;
    for &(l1, l2) in lengths {
        let o1: Vec<CMat> = (0..dim).map(|i| family.closed(i, l1, cap)).collect::<Result<_>>()?;
        let o2: Vec<CMat> = (0..dim).map(|i| family.closed(i, l2, cap)).collect::<Result<_>>()?;
        for i in 0..dim {
            let lhs = family.closed(i, l1 + l2, cap)?;
            let mut rhs = linalg::zeros(lhs.nrows(), lhs.ncols());
            for j in 0..dim {
                for k in 0..dim {
                    let c = comult.get(i, j, k);
                    if c != ZERO {
                        rhs += linalg::kron(&o1[j], &o2[k]) * c;
                    }
                }
            }
            worst = worst.max(linalg::max_diff(&lhs, &rhs));
        }
    }
    Ok(worst)
}

/// Assembles the pre-bialgebra of a family: λ (cross-checked), Δ (mask-verified) and the unit if one exists.
pub fn family_prebialgebra(family: &MpoFamily, fusions: &FusionTable, tol: f64, cap: Cap) -> Result<PreBialgebra> {
    let m = extract_multiplication(family, fusions, tol, cap)?;
    let d = extract_comultiplication(family, tol, cap)?;
    let p = PreBialgebra::new(family.labels(), m.lambda, Some(d))?;
    match find_unit(&p, tol)? {
        Some(u) => p.with_unit(u.map(|z| if z.norm() < 1e-13 { ZERO } else { z })),
        None => Ok(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;

    fn onsite_z2() -> MpoFamily {
        let x = MpoTensor::from_slices(2, 2, vec![linalg::zeros(1, 1), linalg::eye(1), linalg::eye(1), linalg::zeros(1, 1)]).unwrap();
        let basis = vec![BasisElement { sector: 0, m: 0, n: 0 }, BasisElement { sector: 1, m: 0, n: 0 }];
        MpoFamily::new("onsite-z2", FiniteGroup::cyclic(2), vec![MpoTensor::identity(2), x], basis).unwrap()
    }

    #[test]
    fn identity_fusion_is_trivial() {
        let f = onsite_z2();
        let fus = solve_family_fusions(&f, &|_, _| None, 1e-9, 0).unwrap();
        for s in fus.values() {
            assert_eq!(s.y.shape(), (1, 1));
        }
        let w = associator(&f, &fus, 1e-9).unwrap();
        assert!(w.omega.iter().all(|z| (z - ONE).norm() < 1e-12));
        assert!(w.class.unwrap().is_trivial());
    }

    #[test]
    fn onsite_algebra_is_group_algebra() {
        let f = onsite_z2();
        let fus = solve_family_fusions(&f, &|_, _| None, 1e-9, 0).unwrap();
        let p = family_prebialgebra(&f, &fus, 1e-9, Cap::default()).unwrap();
        assert!((p.product(&p.basis(1), &p.basis(1)) - p.basis(0)).camax() < 1e-12);
        assert!(p.unit().is_some());
    }

    #[test]
    fn class_of_coboundary_is_trivial() {
        let g = FiniteGroup::cyclic(2);
        let beta = vec![re(2.0), C64::new(0.3, 0.4), ONE, C64::new(0.0, -1.0)];
        let db = crate::models::group::coboundary(&beta, &g);
        assert!(cocycle_class(&db, &g, 1e-9).unwrap().is_trivial());
    }

    #[test]
    fn class_detects_nontrivial() {
        let g = FiniteGroup::cyclic(2);
        let mut w = vec![ONE; 8];
        w[7] = -ONE;
        let c = cocycle_class(&w, &g, 1e-9).unwrap();
        assert_eq!((c.p, c.label().as_str()), (1, "nontrivial"));
        w[3] = -ONE;
        assert!(matches!(cocycle_class(&w, &g, 1e-9), Err(Error::NotACocycle(_))));
    }
}
