//! Pre-bialgebras by structure constants: axioms, duality, unitization, basis change, star and weak Hopf checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, C64, ONE, ZERO};

/// Dense n×n×n array of structure constants, entry (i, j, k).
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n * n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> C64) -> Self {
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t.data[(i * n + j) * n + k] = f(i, j, k);
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: C64) {
        self.data[(i * self.n + j) * self.n + k] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, k: usize, v: C64) {
        self.data[(i * self.n + j) * self.n + k] += v;
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// Nonzero entries as (i, j, k, value).
    pub fn entries(&self) -> Vec<(usize, usize, usize, C64)> {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != ZERO)
            .map(|(f, v)| (f / (n * n), (f / n) % n, f % n, *v))
            .collect()
    }

    /// The n×n matrix obtained by fixing the first index.
    pub fn first_slice(&self, i: usize) -> CMat {
        CMat::from_fn(self.n, self.n, |j, k| self.get(i, j, k))
    }

    /// Rounds tiny entries to zero.
    pub fn chop(&self, eps: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| if z.norm() < eps { ZERO } else { *z }).collect() }
    }
}

/// Finite-dimensional pre-bialgebra given by structure constants.
///
/// Multiplication: e_I e_J = Σ_K mult(I,J,K) e_K. Comultiplication: Δ(e_I) = Σ_{JK} comult(I,J,K) e_J ⊗ e_K.
/// Star: e_I* = Σ_J star[(I,J)] e_J, extended antilinearly.
#[derive(Clone, Debug, PartialEq)]
pub struct PreBialgebra {
    labels: Vec<String>,
    mult: Tensor3,
    comult: Option<Tensor3>,
    unit: Option<CVec>,
    counit: Option<CVec>,
    star: Option<CMat>,
}

impl PreBialgebra {
    pub fn new(labels: Vec<String>, mult: Tensor3, comult: Option<Tensor3>) -> Result<Self> {
        let n = mult.dim();
        if labels.len() != n {
            return Err(Error::Shape(format!("{} labels for dimension {n}", labels.len())));
        }
        if comult.as_ref().is_some_and(|c| c.dim() != n) {
            return Err(Error::Shape("comultiplication dimension differs".into()));
        }
        Ok(Self { labels, mult, comult, unit: None, counit: None, star: None })
    }

    pub fn with_unit(mut self, u: CVec) -> Result<Self> {
        self.check_len(u.len())?;
        self.unit = Some(u);
        Ok(self)
    }

    pub fn with_counit(mut self, e: CVec) -> Result<Self> {
        self.check_len(e.len())?;
        self.counit = Some(e);
        Ok(self)
    }

    pub fn with_star(mut self, s: CMat) -> Result<Self> {
        if s.shape() != (self.dim(), self.dim()) {
            return Err(Error::Shape("star matrix must be n×n".into()));
        }
        self.star = Some(s);
        Ok(self)
    }

    pub fn without_comult(mut self) -> Self {
        self.comult = None;
        self
    }

    fn check_len(&self, l: usize) -> Result<()> {
        if l != self.dim() {
            return Err(Error::Shape(format!("vector of length {l} for dimension {}", self.dim())));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.mult.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mult(&self) -> &Tensor3 {
        &self.mult
    }

    pub fn comult(&self) -> Option<&Tensor3> {
        self.comult.as_ref()
    }

    pub fn unit(&self) -> Option<&CVec> {
        self.unit.as_ref()
    }

    pub fn counit(&self) -> Option<&CVec> {
        self.counit.as_ref()
    }

    pub fn star(&self) -> Option<&CMat> {
        self.star.as_ref()
    }

    pub fn basis(&self, i: usize) -> CVec {
        let mut v = CVec::zeros(self.dim());
        v[i] = ONE;
        v
    }

    pub fn product(&self, x: &CVec, y: &CVec) -> CVec {
        self.left_matrix(x) * y
    }

    /// Matrix of y ↦ x·y on coordinates.
    pub fn left_matrix(&self, x: &CVec) -> CMat {
        let n = self.dim();
        let mut m = linalg::zeros(n, n);
        for (i, j, k, v) in self.mult.entries() {
            if x[i] != ZERO {
                m[(k, j)] += x[i] * v;
            }
        }
        m
    }

    /// Matrix of x ↦ x·y on coordinates.
    pub fn right_matrix(&self, y: &CVec) -> CMat {
        let n = self.dim();
        let mut m = linalg::zeros(n, n);
        for (i, j, k, v) in self.mult.entries() {
            if y[j] != ZERO {
                m[(k, i)] += y[j] * v;
            }
        }
        m
    }

    /// Δ(x) as the coefficient matrix C with Δ(x) = Σ C[j,k] e_j ⊗ e_k.
    pub fn coproduct(&self, x: &CVec) -> Option<CMat> {
        let c = self.comult.as_ref()?;
        let n = self.dim();
        let mut m = linalg::zeros(n, n);
        for (i, j, k, v) in c.entries() {
            m[(j, k)] += x[i] * v;
        }
        Some(m)
    }

    pub fn apply_star(&self, x: &CVec) -> Option<CVec> {
        let s = self.star.as_ref()?;
        Some(s.transpose() * x.map(|z| z.conj()))
    }
}

/// One named residual with its verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self { name: name.into(), residual, pass: residual <= tol }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StructureClass {
    AlgebraOnly,
    PreBialgebra,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<Check>,
    pub class: StructureClass,
    pub unital: bool,
    pub counital: bool,
}

impl AxiomReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn associativity_residual(l: &Tensor3) -> f64 {
    let n = l.dim();
    let e = l.entries();
    // (e_I e_J) e_K and e_I (e_J e_K) expanded into (I,J,K,M)
    let mut lhs = vec![ZERO; n * n * n * n];
    let mut rhs = vec![ZERO; n * n * n * n];
    for &(i, j, m, a) in &e {
        for k in 0..n {
            for o in 0..n {
                let b = l.get(m, k, o);
                if b != ZERO {
                    lhs[((i * n + j) * n + k) * n + o] += a * b;
                }
            }
        }
    }
    for &(j, k, m, a) in &e {
        for i in 0..n {
            for o in 0..n {
                let b = l.get(i, m, o);
                if b != ZERO {
                    rhs[((i * n + j) * n + k) * n + o] += a * b;
                }
            }
        }
    }
    lhs.iter().zip(&rhs).fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
}

/// Δ²(e_I) as (Δ⊗id)Δ and (id⊗Δ)Δ, flattened (I,a,b,c).
fn double_coproducts(c: &Tensor3) -> (Vec<C64>, Vec<C64>) {
    let n = c.dim();
    let e = c.entries();
    let mut left = vec![ZERO; n * n * n * n];
    let mut right = vec![ZERO; n * n * n * n];
    for &(i, j, k, v) in &e {
        for a in 0..n {
            for b in 0..n {
                let w = c.get(j, a, b);
                if w != ZERO {
                    left[((i * n + a) * n + b) * n + k] += v * w;
                }
                let w = c.get(k, a, b);
                if w != ZERO {
                    right[((i * n + j) * n + a) * n + b] += v * w;
                }
            }
        }
    }
    (left, right)
}

fn coassociativity_residual(c: &Tensor3) -> f64 {
    let (l, r) = double_coproducts(c);
    l.iter().zip(&r).fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
}

/// Product in A⊗A of two coefficient matrices.
fn tensor_product(p: &PreBialgebra, x: &CMat, y: &CMat) -> CMat {
    let n = p.dim();
    let l = p.mult();
    let mut out = linalg::zeros(n, n);
    let ex: Vec<(usize, usize, C64)> =
        (0..n).flat_map(|a| (0..n).map(move |c| (a, c))).filter(|&(a, c)| x[(a, c)] != ZERO).map(|(a, c)| (a, c, x[(a, c)])).collect();
    let ey: Vec<(usize, usize, C64)> =
        (0..n).flat_map(|b| (0..n).map(move |d| (b, d))).filter(|&(b, d)| y[(b, d)] != ZERO).map(|(b, d)| (b, d, y[(b, d)])).collect();
    for &(a, c, u) in &ex {
        for &(b, d, v) in &ey {
            for s in 0..n {
                let ls = l.get(a, b, s);
                if ls == ZERO {
                    continue;
                }
                for t in 0..n {
                    let lt = l.get(c, d, t);
                    if lt != ZERO {
                        out[(s, t)] += u * v * ls * lt;
                    }
                }
            }
        }
    }
    out
}

fn multiplicativity_residual(p: &PreBialgebra) -> f64 {
    let n = p.dim();
    let deltas: Vec<CMat> = (0..n).map(|i| p.coproduct(&p.basis(i)).expect("comult present")).collect();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let prod = p.product(&p.basis(i), &p.basis(j));
            let lhs = p.coproduct(&prod).expect("comult present");
            let rhs = tensor_product(p, &deltas[i], &deltas[j]);
            worst = worst.max(linalg::max_diff(&lhs, &rhs));
        }
    }
    worst
}

fn unit_residual(p: &PreBialgebra, u: &CVec) -> f64 {
    let n = p.dim();
    let l = p.left_matrix(u);
    let r = p.right_matrix(u);
    linalg::max_diff(&l, &linalg::eye(n)).max(linalg::max_diff(&r, &linalg::eye(n)))
}

fn counit_residual(p: &PreBialgebra, eps: &CVec) -> f64 {
    let n = p.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let d = p.coproduct(&p.basis(i)).expect("comult present");
        let left = d.transpose() * eps; // Σ_j ε_j C[j,k]
        let right = &d * eps;
        let e = p.basis(i);
        worst = worst.max((left - &e).camax()).max((right - e).camax());
    }
    worst
}

/// Residuals of involution, anti-multiplicativity and (if present) Δ∘* = (*⊗*)∘Δ.
fn star_residuals(p: &PreBialgebra) -> Vec<(String, f64)> {
    let n = p.dim();
    let mut out = Vec::new();
    let mut inv: f64 = 0.0;
    let mut anti: f64 = 0.0;
    let mut coh: f64 = 0.0;
    for i in 0..n {
        let e = p.basis(i);
        let s = p.apply_star(&e).expect("star present");
        inv = inv.max((p.apply_star(&s).expect("star") - &e).camax());
        for j in 0..n {
            let ej = p.basis(j);
            let lhs = p.apply_star(&p.product(&e, &ej)).expect("star");
            let rhs = p.product(&p.apply_star(&ej).expect("star"), &s);
            anti = anti.max((lhs - rhs).camax());
        }
        if let Some(d) = p.coproduct(&e) {
            let lhs = p.coproduct(&s).expect("comult");
            let st = p.star().expect("star");
            // (*⊗*)(Σ C[a,b] e_a⊗e_b) = Σ conj(C[a,b]) e_a*⊗e_b*
            let rhs = st.transpose() * d.map(|z| z.conj()) * st;
            coh = coh.max(linalg::max_diff(&lhs, &rhs));
        }
    }
    out.push(("star involution".to_string(), inv));
    out.push(("star anti-multiplicative".to_string(), anti));
    if p.comult().is_some() {
        out.push(("star cohomomorphism".to_string(), coh));
    }
    out
}

/// Per-axiom residuals and classification.
pub fn check_axioms(p: &PreBialgebra, tol: f64) -> AxiomReport {
    let mut checks = vec![Check::new("associativity", associativity_residual(p.mult()), tol)];
    let mut class = StructureClass::AlgebraOnly;
    if let Some(c) = p.comult() {
        checks.push(Check::new("coassociativity", coassociativity_residual(c), tol));
        checks.push(Check::new("multiplicativity", multiplicativity_residual(p), tol));
        if checks.iter().all(|c| c.pass) {
            class = StructureClass::PreBialgebra;
        }
    }
    let mut unital = false;
    if let Some(u) = p.unit() {
        let c = Check::new("unit", unit_residual(p, u), tol);
        unital = c.pass;
        checks.push(c);
    }
    let mut counital = false;
    if let (Some(e), Some(_)) = (p.counit(), p.comult()) {
        let c = Check::new("counit", counit_residual(p, e), tol);
        counital = c.pass;
        checks.push(c);
    }
    if p.star().is_some() {
        for (name, r) in star_residuals(p) {
            checks.push(Check::new(name, r, tol));
        }
    }
    AxiomReport { checks, class, unital, counital }
}

fn dual_label(l: &str) -> String {
    if let Some(rest) = l.strip_prefix("e_") {
        format!("e^{rest}")
    } else if let Some(rest) = l.strip_prefix("e^") {
        format!("e_{rest}")
    } else if let Some(rest) = l.strip_prefix('*') {
        rest.to_string()
    } else {
        format!("*{l}")
    }
}

/// The dual pre-bialgebra on the dual basis {e^I}. Star is not carried over.
pub fn dual(p: &PreBialgebra) -> Result<PreBialgebra> {
    let c = p
        .comult()
        .ok_or_else(|| Error::Structure("dual needs a comultiplication".into()))?;
    let n = p.dim();
    let mult = Tensor3::from_fn(n, |i, j, k| c.get(k, i, j));
    let comult = Tensor3::from_fn(n, |i, j, k| p.mult().get(j, k, i));
    let labels = p.labels().iter().map(|l| dual_label(l)).collect();
    let mut d = PreBialgebra::new(labels, mult, Some(comult))?;
    d.unit = p.counit.clone();
    d.counit = p.unit.clone();
    Ok(d)
}

/// Solves u·e_I = e_I·u = e_I. None if inconsistent; error if the solution is not unique.
pub fn find_unit(p: &PreBialgebra, tol: f64) -> Result<Option<CVec>> {
    let n = p.dim();
    // unknown u_J: Σ_J u_J λ(J,I,K) = δ_IK and Σ_J u_J λ(I,J,K) = δ_IK
    let mut sys = linalg::zeros(2 * n * n, n);
    let mut rhs = linalg::zeros(2 * n * n, 1);
    for i in 0..n {
        for k in 0..n {
            let r = i * n + k;
            for j in 0..n {
                sys[(r, j)] = p.mult().get(j, i, k);
                sys[(n * n + r, j)] = p.mult().get(i, j, k);
            }
            if i == k {
                rhs[(r, 0)] = ONE;
                rhs[(n * n + r, 0)] = ONE;
            }
        }
    }
    let (x, res) = linalg::lstsq(&sys, &rhs);
    if res > tol {
        return Ok(None);
    }
    let nullity = n - linalg::rank(&sys, linalg::RANK_RTOL);
    if nullity > 0 {
        return Err(Error::DegenerateAlgebra(format!("unit equations have a {nullity}-dimensional solution space")));
    }
    Ok(Some(x.column(0).into_owned()))
}

/// Solves (ε⊗id)Δ = id = (id⊗ε)Δ. None if inconsistent; error without a comultiplication.
pub fn find_counit(p: &PreBialgebra, tol: f64) -> Result<Option<CVec>> {
    let c = p.comult().ok_or_else(|| Error::Structure("counit needs a comultiplication".into()))?;
    let n = p.dim();
    let mut sys = linalg::zeros(2 * n * n, n);
    let mut rhs = linalg::zeros(2 * n * n, 1);
    for i in 0..n {
        for k in 0..n {
            let r = i * n + k;
            for j in 0..n {
                sys[(r, j)] = c.get(i, j, k);
                sys[(n * n + r, j)] = c.get(i, k, j);
            }
            if i == k {
                rhs[(r, 0)] = ONE;
                rhs[(n * n + r, 0)] = ONE;
            }
        }
    }
    let (x, res) = linalg::lstsq(&sys, &rhs);
    if res > tol {
        return Ok(None);
    }
    Ok(Some(x.column(0).into_owned()))
}

/// Formal unitization: adjoins e^0 as the last basis element. Comultiplication and counit are dropped.
pub fn unitize(p: &PreBialgebra) -> PreBialgebra {
    let n = p.dim();
    let m = n + 1;
    let mut mult = Tensor3::zeros(m);
    for (i, j, k, v) in p.mult().entries() {
        mult.set(i, j, k, v);
    }
    for i in 0..m {
        mult.add(n, i, i, ONE);
        if i != n {
            mult.add(i, n, i, ONE);
        }
    }
    let mut labels = p.labels().to_vec();
    labels.push("e^0".into());
    let mut u = CVec::zeros(m);
    u[n] = ONE;
    let star = p.star().map(|s| {
        let mut t = linalg::zeros(m, m);
        t.view_mut((0, 0), (n, n)).copy_from(s);
        t[(n, n)] = ONE;
        t
    });
    PreBialgebra { labels, mult, comult: None, unit: Some(u), counit: None, star }
}

/// Rewrites structure in the basis f_I = Σ_J R[I,J] e_J. Returns the new structure and cond(R).
pub fn change_basis(p: &PreBialgebra, r: &CMat) -> Result<(PreBialgebra, f64)> {
    let n = p.dim();
    if r.shape() != (n, n) {
        return Err(Error::Shape("basis change must be n×n".into()));
    }
    let ri = linalg::inverse(r)?;
    let cond = linalg::condition_number(r);
    let l = p.mult();
    let mut mult = Tensor3::zeros(n);
    for (a, b, c, v) in l.entries() {
        for i in 0..n {
            if r[(i, a)] == ZERO {
                continue;
            }
            for j in 0..n {
                if r[(j, b)] == ZERO {
                    continue;
                }
                for k in 0..n {
                    mult.add(i, j, k, r[(i, a)] * r[(j, b)] * ri[(c, k)] * v);
                }
            }
        }
    }
    let comult = p.comult().map(|c| {
        let mut out = Tensor3::zeros(n);
        for (kk, ii, jj, v) in c.entries() {
            for k in 0..n {
                if r[(k, kk)] == ZERO {
                    continue;
                }
                for i in 0..n {
                    if ri[(ii, i)] == ZERO {
                        continue;
                    }
                    for j in 0..n {
                        out.add(k, i, j, r[(k, kk)] * ri[(ii, i)] * ri[(jj, j)] * v);
                    }
                }
            }
        }
        out
    });
    let unit = p.unit().map(|u| ri.transpose() * u);
    let counit = p.counit().map(|e| r * e);
    let star = p.star().map(|s| r.map(|z| z.conj()) * s * &ri);
    let q = PreBialgebra { labels: (0..n).map(|i| format!("f_{}", i + 1)).collect(), mult, comult, unit, counit, star };
    Ok((q, cond))
}

/// Counit and antipode of a weak Hopf algebra; antipode acts on coordinates as a column matrix.
#[derive(Clone, Debug)]
pub struct WeakHopfData {
    pub counit: CVec,
    pub antipode: CMat,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakHopfReport {
    pub checks: Vec<Check>,
    /// Residuals of the antipode identities in the source-target-swapped form; informational only.
    pub swapped_form: Vec<Check>,
}

impl WeakHopfReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Full weak Hopf axiom residuals. Fails (with infinite residual) the pieces whose data is missing.
pub fn check_weak_hopf(p: &PreBialgebra, w: &WeakHopfData, tol: f64) -> WeakHopfReport {
    let n = p.dim();
    let (Some(unit), Some(_)) = (p.unit(), p.comult()) else {
        return WeakHopfReport {
            checks: vec![Check::new("unital and comultiplication present", f64::INFINITY, tol)],
            swapped_form: vec![],
        };
    };
    let eps = &w.counit;
    let s = &w.antipode;
    let lam = p.mult();
    let delta: Vec<CMat> = (0..n).map(|i| p.coproduct(&p.basis(i)).expect("comult")).collect();
    // E2[x,a] = ε(e_x e_a)
    let e2 = CMat::from_fn(n, n, |x, a| (0..n).map(|k| lam.get(x, a, k) * eps[k]).sum());
    let mut checks = Vec::new();

    let mut counit_res: f64 = 0.0;
    for (i, d) in delta.iter().enumerate() {
        let e = p.basis(i);
        counit_res = counit_res.max((d.transpose() * eps - &e).camax()).max((d * eps - e).camax());
    }
    checks.push(Check::new("counit", counit_res, tol));

    // ε(xyz) = ε(x y_(1)) ε(y_(2) z) = ε(x y_(2)) ε(y_(1) z)
    let mut wc: f64 = 0.0;
    for y in 0..n {
        let xy_z = CMat::from_fn(n, n, |x, z| (0..n).map(|k| lam.get(x, y, k) * e2[(k, z)]).sum());
        let a = &e2 * &delta[y] * &e2;
        let b = &e2 * delta[y].transpose() * &e2;
        wc = wc.max(linalg::max_diff(&xy_z, &a)).max(linalg::max_diff(&xy_z, &b));
    }
    checks.push(Check::new("counit weak comultiplicativity", wc, tol));

    let d1 = p.coproduct(unit).expect("comult");
    // Δ²(1) versus (Δ(1)⊗1)(1⊗Δ(1)) and (1⊗Δ(1))(Δ(1)⊗1), indices (a,K,d)
    let mut uw: f64 = 0.0;
    for a in 0..n {
        for k in 0..n {
            for dd in 0..n {
                let lhs: C64 = (0..n).map(|j| d1[(j, dd)] * delta[j][(a, k)]).sum();
                let mut r1 = ZERO;
                let mut r2 = ZERO;
                for b in 0..n {
                    for c in 0..n {
                        let w = d1[(a, b)] * d1[(c, dd)];
                        if w != ZERO {
                            r1 += w * lam.get(b, c, k);
                            r2 += w * lam.get(c, b, k);
                        }
                    }
                }
                uw = uw.max((lhs - r1).norm()).max((lhs - r2).norm());
            }
        }
    }
    checks.push(Check::new("unit weak comultiplicativity", uw, tol));

    let sb = |j: usize| s.column(j).into_owned();
    let mut eps_t: f64 = 0.0;
    let mut eps_s: f64 = 0.0;
    let mut sw_t: f64 = 0.0;
    let mut sw_s: f64 = 0.0;
    let mut sss: f64 = 0.0;
    let mut anti_m: f64 = 0.0;
    let mut anti_c: f64 = 0.0;
    for i in 0..n {
        let d = &delta[i];
        let mut x1_sx2 = CVec::zeros(n);
        let mut sx1_x2 = CVec::zeros(n);
        for a in 0..n {
            for b in 0..n {
                if d[(a, b)] != ZERO {
                    x1_sx2 += p.product(&p.basis(a), &sb(b)) * d[(a, b)];
                    sx1_x2 += p.product(&sb(a), &p.basis(b)) * d[(a, b)];
                }
            }
        }
        // ε(1_(1)x) 1_(2) and 1_(1) ε(x 1_(2))
        let mut t = CVec::zeros(n);
        let mut so = CVec::zeros(n);
        for a in 0..n {
            for b in 0..n {
                if d1[(a, b)] != ZERO {
                    t[b] += d1[(a, b)] * e2[(a, i)];
                    so[a] += d1[(a, b)] * e2[(i, b)];
                }
            }
        }
        eps_t = eps_t.max((&x1_sx2 - &t).camax());
        eps_s = eps_s.max((&sx1_x2 - &so).camax());
        sw_t = sw_t.max((&sx1_x2 - &t).camax());
        sw_s = sw_s.max((&x1_sx2 - &so).camax());

        // S(x_(1)) x_(2) S(x_(3)) = S(x)
        let mut acc = CVec::zeros(n);
        for j in 0..n {
            for c in 0..n {
                let w = d[(j, c)];
                if w == ZERO {
                    continue;
                }
                let dj = &delta[j];
                for a in 0..n {
                    for b in 0..n {
                        if dj[(a, b)] != ZERO {
                            let ab = p.product(&sb(a), &p.basis(b));
                            acc += p.product(&ab, &sb(c)) * (w * dj[(a, b)]);
                        }
                    }
                }
            }
        }
        sss = sss.max((acc - sb(i)).camax());

        for j in 0..n {
            let lhs = s * p.product(&p.basis(i), &p.basis(j));
            let rhs = p.product(&sb(j), &sb(i));
            anti_m = anti_m.max((lhs - rhs).camax());
        }
        let lhs = p.coproduct(&sb(i)).expect("comult");
        // (S⊗S)Δ^op(x): coefficient [c,d] = Σ_ab Δ[a,b] S[c,b] S[d,a]
        let rhs = s * d.transpose() * s.transpose();
        anti_c = anti_c.max(linalg::max_diff(&lhs, &rhs));
    }
    checks.push(Check::new("antipode x1 S(x2) = eps(1_1 x) 1_2", eps_t, tol));
    checks.push(Check::new("antipode S(x1) x2 = 1_1 eps(x 1_2)", eps_s, tol));
    checks.push(Check::new("antipode S(x1) x2 S(x3) = S(x)", sss, tol));
    checks.push(Check::new("antipode anti-multiplicative", anti_m, tol));
    checks.push(Check::new("antipode anti-comultiplicative", anti_c, tol));
    let swapped_form = vec![
        Check::new("S(x1) x2 = eps(1_1 x) 1_2", sw_t, tol),
        Check::new("x1 S(x2) = 1_1 eps(x 1_2)", sw_s, tol),
    ];
    WeakHopfReport { checks, swapped_form }
}

/// Star axioms plus φ(x*) = φ(x)† for a candidate faithful representation (matrices per basis element).
pub fn check_star(p: &PreBialgebra, rep: &[CMat], tol: f64) -> AxiomReport {
    let mut checks = Vec::new();
    if p.star().is_none() || rep.len() != p.dim() {
        checks.push(Check::new("star present and representation sized", f64::INFINITY, tol));
        return AxiomReport { checks, class: StructureClass::AlgebraOnly, unital: false, counital: false };
    }
    for (name, r) in star_residuals(p) {
        checks.push(Check::new(name, r, tol));
    }
    let s = p.star().expect("checked");
    let mut worst: f64 = 0.0;
    for (i, ri) in rep.iter().enumerate() {
        let mut img = linalg::zeros(ri.nrows(), ri.ncols());
        for (j, rj) in rep.iter().enumerate() {
            img += rj * s[(i, j)];
        }
        worst = worst.max(linalg::max_diff(&img, &ri.adjoint()));
    }
    checks.push(Check::new("*-representation", worst, tol));
    AxiomReport { checks, class: StructureClass::AlgebraOnly, unital: p.unit().is_some(), counital: p.counit().is_some() }
}

/// Group algebra C[Z_n] with Δ(g) = g⊗g, ε(g) = 1, unit e_0, star g* = g⁻¹.
pub fn cyclic_group_algebra(n: usize) -> PreBialgebra {
    let mult = Tensor3::from_fn(n, |i, j, k| if (i + j) % n == k { ONE } else { ZERO });
    let comult = Tensor3::from_fn(n, |i, j, k| if i == j && j == k { ONE } else { ZERO });
    let labels = (0..n).map(|g| format!("g{g}")).collect();
    let mut star = linalg::zeros(n, n);
    for g in 0..n {
        star[(g, (n - g) % n)] = ONE;
    }
    PreBialgebra::new(labels, mult, Some(comult))
        .and_then(|p| p.with_unit(CVec::from_fn(n, |i, _| if i == 0 { ONE } else { ZERO })))
        .and_then(|p| p.with_counit(CVec::from_element(n, ONE)))
        .and_then(|p| p.with_star(star))
        .expect("consistent dimensions")
}

/// Antipode S(g) = g⁻¹ of C[Z_n].
pub fn cyclic_group_antipode(n: usize) -> CMat {
    CMat::from_fn(n, n, |k, j| if (j + k) % n == 0 { ONE } else { ZERO })
}

/// Full matrix algebra M_d with matrix units E_{ab} at index a*d+b; comultiplication omitted.
pub fn matrix_algebra(d: usize) -> PreBialgebra {
    let n = d * d;
    let mult = Tensor3::from_fn(n, |i, j, k| {
        let (a, b) = (i / d, i % d);
        let (c, e) = (j / d, j % d);
        if b == c && k == a * d + e {
            ONE
        } else {
            ZERO
        }
    });
    let labels = (0..n).map(|i| format!("E{}{}", i / d, i % d)).collect();
    let unit = CVec::from_fn(n, |i, _| if i / d == i % d { ONE } else { ZERO });
    let star = CMat::from_fn(n, n, |i, j| if j == (i % d) * d + i / d { ONE } else { ZERO });
    PreBialgebra::new(labels, mult, None)
        .and_then(|p| p.with_unit(unit))
        .and_then(|p| p.with_star(star))
        .expect("consistent dimensions")
}

/// Defining representation of [`matrix_algebra`].
pub fn matrix_algebra_defining_rep(d: usize) -> Vec<CMat> {
    (0..d * d).map(|i| linalg::unit(d, i / d, i % d)).collect()
}

/// Scalar multiple of the identity check helper used by reports.
pub fn is_identity(m: &CMat, tol: f64) -> bool {
    m.is_square() && linalg::max_diff(m, &linalg::eye(m.nrows())) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_algebra_is_hopf() {
        let p = cyclic_group_algebra(2);
        let r = check_axioms(&p, 1e-12);
        assert!(r.all_pass(), "{:?}", r.checks);
        assert_eq!(r.class, StructureClass::PreBialgebra);
        assert!(r.unital && r.counital);
        let w = WeakHopfData { counit: p.counit().unwrap().clone(), antipode: cyclic_group_antipode(2) };
        let h = check_weak_hopf(&p, &w, 1e-12);
        assert!(h.all_pass(), "{:?}", h.checks);
    }

    #[test]
    fn matrix_algebra_unit_and_star() {
        let p = matrix_algebra(2);
        let u = find_unit(&p, 1e-10).unwrap().unwrap();
        assert!((u - p.unit().unwrap()).camax() < 1e-12);
        let r = check_star(&p, &matrix_algebra_defining_rep(2), 1e-12);
        assert!(r.all_pass(), "{:?}", r.checks);
    }

    #[test]
    fn unitize_is_formal() {
        let p = matrix_algebra(2);
        let q = unitize(&p);
        assert_eq!(q.dim(), 5);
        assert!(check_axioms(&q, 1e-12).all_pass());
        let u = find_unit(&q, 1e-10).unwrap().unwrap();
        assert!((u - q.basis(4)).camax() < 1e-12);
    }

    #[test]
    fn identity_basis_change() {
        let p = cyclic_group_algebra(3);
        let (q, cond) = change_basis(&p, &linalg::eye(3)).unwrap();
        assert!((cond - 1.0).abs() < 1e-12);
        assert!(q.mult().max_diff(p.mult()) < 1e-15);
        assert!(q.comult().unwrap().max_diff(p.comult().unwrap()) < 1e-15);
    }

    #[test]
    fn singular_basis_change_errors() {
        let p = cyclic_group_algebra(2);
        assert!(change_basis(&p, &linalg::zeros(2, 2)).is_err());
    }

    #[test]
    fn counit_of_group_algebra() {
        let p = cyclic_group_algebra(3);
        let e = find_counit(&p, 1e-10).unwrap().unwrap();
        assert!((e - p.counit().unwrap()).camax() < 1e-12);
        assert!(find_counit(&matrix_algebra(2), 1e-10).is_err());
    }

    #[test]
    fn double_dual() {
        let p = cyclic_group_algebra(3);
        let dd = dual(&dual(&p).unwrap()).unwrap();
        assert_eq!(dd.labels(), p.labels());
        assert_eq!(dd.mult(), p.mult());
        assert_eq!(dd.comult(), p.comult());
        assert_eq!(dd.unit(), p.unit());
        assert_eq!(dd.counit(), p.counit());
    }
}
