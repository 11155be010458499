//! Numerical representation theory of finite-dimensional algebras given by structure constants.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, C64, RANK_RTOL, ZERO};
use crate::prebialgebra::{PreBialgebra, Tensor3};

/// Matrices ρ(e_I), one per basis element of the algebra it represents.
#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    matrices: Vec<CMat>,
    pub faithful: Option<bool>,
    pub irreducible: Option<bool>,
    pub indecomposable: Option<bool>,
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.matrices == other.matrices
    }
}

impl Representation {
    pub fn new(matrices: Vec<CMat>) -> Result<Self> {
        let dim = matrices.first().map_or(0, |m| m.nrows());
        if matrices.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::Shape("representation matrices must share a square shape".into()));
        }
        Ok(Self { dim, matrices, faithful: None, irreducible: None, indecomposable: None })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn matrix(&self, i: usize) -> &CMat {
        &self.matrices[i]
    }

    /// ρ(x) for coordinates x.
    pub fn eval(&self, x: &CVec) -> CMat {
        let mut m = linalg::zeros(self.dim, self.dim);
        for (xi, mi) in x.iter().zip(&self.matrices) {
            if *xi != ZERO {
                m += mi * *xi;
            }
        }
        m
    }

    /// Appends ρ(e^0) = 𝟙, for use over the unitized algebra.
    pub fn unitized(&self) -> Self {
        let mut m = self.matrices.clone();
        m.push(linalg::eye(self.dim));
        Self::new(m).expect("same shapes")
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Shape("direct sum of representations of different algebras".into()));
        }
        Self::new(self.matrices.iter().zip(&other.matrices).map(|(a, b)| linalg::direct_sum(a, b)).collect())
    }

    /// 𝟙_k ⊗ ρ.
    pub fn repeat(&self, k: usize) -> Self {
        Self::new(self.matrices.iter().map(|m| linalg::kron(&linalg::eye(k), m)).collect()).expect("same shapes")
    }

    /// T^{-1} ρ T, given T and its inverse.
    pub fn conjugate(&self, t: &CMat, t_inv: &CMat) -> Self {
        Self::new(self.matrices.iter().map(|m| t_inv * m * t).collect()).expect("same shapes")
    }

    /// Restriction to an invariant subspace with orthonormal basis columns `b`.
    pub fn restrict(&self, b: &CMat) -> Self {
        let bd = b.adjoint();
        Self::new(self.matrices.iter().map(|m| &bd * m * b).collect()).expect("same shapes")
    }

    /// Max over I,J of ‖ρ(e_I)ρ(e_J) − Σ_K λ_IJ^K ρ(e_K)‖.
    pub fn homomorphism_residual(&self, mult: &Tensor3) -> f64 {
        let n = mult.dim();
        if self.len() != n {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut rhs = linalg::zeros(self.dim, self.dim);
                for k in 0..n {
                    let c = mult.get(i, j, k);
                    if c != ZERO {
                        rhs += &self.matrices[k] * c;
                    }
                }
                worst = worst.max(linalg::max_diff(&(&self.matrices[i] * &self.matrices[j]), &rhs));
            }
        }
        worst
    }

    /// Faithful iff the matrices are linearly independent.
    pub fn check_faithful(&mut self) -> bool {
        let stacked = linalg::hstack(
            &self.matrices.iter().map(|m| CMat::from_iterator(m.len(), 1, m.iter().copied())).collect::<Vec<_>>(),
        );
        let f = linalg::rank(&stacked, RANK_RTOL) == self.len();
        self.faithful = Some(f);
        f
    }

    /// Irreducible iff the matrices (plus identity) generate the full matrix algebra.
    pub fn check_irreducible(&mut self) -> bool {
        let d = self.dim;
        let span = generated_algebra_dim(&self.matrices, d);
        let irr = d > 0 && span == d * d;
        self.irreducible = Some(irr);
        irr
    }
}

/// Dimension of the unital algebra generated by `mats`.
pub fn generated_algebra_dim(mats: &[CMat], d: usize) -> usize {
    let vecm = |m: &CMat| CMat::from_iterator(d * d, 1, m.iter().copied());
    let mut basis: Vec<CMat> = vec![linalg::eye(d)];
    let mut frontier: Vec<CMat> = vec![linalg::eye(d)];
    let mut rank = 1;
    while !frontier.is_empty() && rank < d * d {
        let mut next = Vec::new();
        for f in &frontier {
            for m in mats {
                let cand = m * f;
                let mut trial: Vec<CMat> = basis.iter().map(vecm).collect();
                trial.push(vecm(&cand));
                let r = linalg::rank(&linalg::hstack(&trial), 1e-10);
                if r > rank {
                    rank = r;
                    basis.push(cand.clone());
                    next.push(cand);
                }
            }
        }
        frontier = next;
    }
    rank
}

fn require_unit(alg: &PreBialgebra) -> Result<&CVec> {
    alg.unit().ok_or_else(|| Error::Precondition("algebra must be unital (unitize first)".into()))
}

/// Left regular representation L(e_I).
pub fn regular_representation(alg: &PreBialgebra) -> Result<Representation> {
    require_unit(alg)?;
    Representation::new((0..alg.dim()).map(|i| alg.left_matrix(&alg.basis(i))).collect())
}

/// Trace form G_IJ = Tr L(e_I e_J).
fn trace_form(alg: &PreBialgebra) -> CMat {
    let n = alg.dim();
    let tr: Vec<C64> = (0..n).map(|k| linalg::trace(&alg.left_matrix(&alg.basis(k)))).collect();
    CMat::from_fn(n, n, |i, j| (0..n).map(|k| alg.mult().get(i, j, k) * tr[k]).sum())
}

/// Basis (columns) of the Jacobson radical: trace-form kernel reduced to its largest two-sided ideal.
pub fn radical(alg: &PreBialgebra) -> Result<CMat> {
    require_unit(alg)?;
    let n = alg.dim();
    let mut r = linalg::null_space(&trace_form(alg).transpose(), RANK_RTOL);
    let scale = (0..n).map(|i| linalg::max_abs(&alg.left_matrix(&alg.basis(i)))).fold(1.0, f64::max);
    loop {
        if r.ncols() == 0 {
            return Ok(r);
        }
        // keep x ∈ span(r) with e_I x and x e_I in span(r) for all I
        let comp = linalg::complement(&r, n);
        if comp.ncols() == 0 {
            return Ok(r);
        }
        let proj = comp.adjoint();
        let mut rows = Vec::new();
        for i in 0..n {
            let e = alg.basis(i);
            rows.push(&proj * alg.left_matrix(&e) * &r);
            rows.push(&proj * alg.right_matrix(&e) * &r);
        }
        let ker = linalg::null_space_scaled(&linalg::vstack(&rows), RANK_RTOL, scale);
        if ker.ncols() == r.ncols() {
            return Ok(r);
        }
        r = linalg::column_space(&(&r * ker), RANK_RTOL);
    }
}

fn spectral_idempotents(alg: &PreBialgebra, a: &CVec, unit: &CVec) -> Result<Vec<CVec>> {
    let ev = linalg::eigenvalues(&alg.left_matrix(a))?;
    let scale = 1.0 + ev.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let clusters = linalg::cluster(&ev, 1e-6 * scale);
    let mus: Vec<C64> = clusters.iter().map(|c| c.0).collect();
    let mut out = Vec::with_capacity(mus.len());
    for (j, mj) in mus.iter().enumerate() {
        let mut p = unit.clone();
        for (l, ml) in mus.iter().enumerate() {
            if l != j {
                let f = (a - unit * *ml) / (mj - ml);
                p = alg.product(&p, &f);
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// Newton refinement e ← 3e² − 2e³ in the ambient algebra.
fn refine_idempotent(alg: &PreBialgebra, mut e: CVec) -> Result<CVec> {
    for _ in 0..64 {
        let e2 = alg.product(&e, &e);
        if (&e2 - &e).camax() < 1e-12 {
            return Ok(e);
        }
        let e3 = alg.product(&e2, &e);
        e = e2 * linalg::re(3.0) - e3 * linalg::re(2.0);
    }
    let e2 = alg.product(&e, &e);
    if (&e2 - &e).camax() < 1e-10 {
        return Ok(e);
    }
    Err(Error::Numerical("idempotent lifting did not converge in 64 iterations".into()))
}

/// Pairwise-orthogonal primitive idempotents summing to the unit, lifted from the semisimple quotient.
pub fn primitive_idempotents(alg: &PreBialgebra, seed: u64) -> Result<Vec<CVec>> {
    let unit = require_unit(alg)?.clone();
    let n = alg.dim();
    let rad = radical(alg)?;
    let c = linalg::complement(&rad, n);
    let k = c.ncols();
    let cd = c.adjoint();
    // quotient algebra on coordinates w.r.t. the columns of c
    let mut qmult = Tensor3::zeros(k);
    for a in 0..k {
        for b in 0..k {
            let prod = cd.clone() * alg.product(&c.column(a).into_owned(), &c.column(b).into_owned());
            for s in 0..k {
                qmult.set(a, b, s, prod[s]);
            }
        }
    }
    let qunit = &cd * &unit;
    let quotient = PreBialgebra::new((0..k).map(|i| format!("q{i}")).collect(), qmult, None)?.with_unit(qunit.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = CVec::from_fn(k, |_, _| linalg::random_c64(&mut rng));
    let qidem = spectral_idempotents(&quotient, &a, &qunit)?;
    let mut f = unit;
    let mut out = Vec::with_capacity(qidem.len());
    for (j, q) in qidem.iter().enumerate() {
        if j + 1 == qidem.len() {
            out.push(refine_idempotent(alg, f.clone())?);
            break;
        }
        let x = &c * q;
        let e = alg.product(&alg.product(&f, &x), &f);
        let e = refine_idempotent(alg, e)?;
        f -= &e;
        out.push(e);
    }
    Ok(out)
}

/// Basis (columns) of the center.
pub fn center(alg: &PreBialgebra) -> CMat {
    let n = alg.dim();
    let mut rows = Vec::new();
    for i in 0..n {
        let e = alg.basis(i);
        rows.push(alg.right_matrix(&e) - alg.left_matrix(&e));
    }
    let scale = rows.iter().map(linalg::max_abs).fold(1.0, f64::max);
    linalg::null_space_scaled(&linalg::vstack(&rows), RANK_RTOL, scale)
}

fn canonical_key(v: &CVec) -> Vec<(i64, i64)> {
    v.iter().map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)).collect()
}

/// Central primitive idempotents of a semisimple unital algebra, in canonical order.
pub fn central_idempotents(alg: &PreBialgebra, seed: u64) -> Result<Vec<CVec>> {
    let unit = require_unit(alg)?.clone();
    let z = center(alg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeff = CVec::from_fn(z.ncols(), |_, _| linalg::random_c64(&mut rng));
    let a = &z * coeff;
    let mut idem = spectral_idempotents(alg, &a, &unit)?;
    for e in idem.iter_mut() {
        *e = refine_idempotent(alg, e.clone())?;
    }
    idem.sort_by_key(|e| {
        let r = linalg::rank(&alg.left_matrix(e), RANK_RTOL);
        (r, canonical_key(e))
    });
    Ok(idem)
}

/// A summand class in a decomposition.
#[derive(Clone, Debug)]
pub struct Summand {
    pub label: Option<String>,
    pub rep: Representation,
    pub multiplicity: usize,
    /// Subspace basis (columns) of each copy inside the decomposed module.
    pub bases: Vec<CMat>,
}

#[derive(Clone, Debug)]
pub struct ModuleDecomposition {
    pub summands: Vec<Summand>,
    /// Invertible change of basis whose column blocks are the summand copies.
    pub intertwiner: CMat,
    /// Max off-block entry of P^{-1} ρ P.
    pub residual: f64,
}

impl ModuleDecomposition {
    pub fn total_dim(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity * s.rep.dim()).sum()
    }

    /// (label, multiplicity) pairs, unlabeled summands shown by dimension.
    pub fn signature(&self) -> Vec<(String, usize)> {
        let mut v: Vec<(String, usize)> = self
            .summands
            .iter()
            .map(|s| (s.label.clone().unwrap_or_else(|| format!("?dim{}", s.rep.dim())), s.multiplicity))
            .collect();
        v.sort();
        v
    }
}

/// Invertible T with T ρ1(e_I) = ρ2(e_I) T, if one exists.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub t: CMat,
    pub residual: f64,
}

pub fn module_isomorphic(r1: &Representation, r2: &Representation, seed: u64) -> Result<Option<Intertwiner>> {
    if r1.dim() != r2.dim() || r1.len() != r2.len() {
        return Ok(None);
    }
    if r1.dim() == 0 {
        return Ok(Some(Intertwiner { t: linalg::zeros(0, 0), residual: 0.0 }));
    }
    let basis = linalg::intertwiners(r1.matrices(), r2.matrices(), RANK_RTOL)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 {
        let t = linalg::random_combination(&basis, &mut rng);
        let t = &t / linalg::re(linalg::frob(&t));
        if linalg::condition_number(&t) < 1e8 {
            let residual = r1
                .matrices()
                .iter()
                .zip(r2.matrices())
                .map(|(a, b)| linalg::max_diff(&(&t * a), &(b * &t)))
                .fold(0.0, f64::max);
            return Ok(Some(Intertwiner { t, residual }));
        }
    }
    Ok(None)
}

/// Splits a module into indecomposable pieces: (basis columns in the original space, restricted rep).
fn split_module(rho: &Representation, rng: &mut ChaCha8Rng) -> Result<Vec<(CMat, Representation)>> {
    let d = rho.dim();
    if d <= 1 {
        return Ok(vec![(linalg::eye(d), rho.clone())]);
    }
    let end = linalg::intertwiners(rho.matrices(), rho.matrices(), RANK_RTOL)?;
    if end.len() <= 1 {
        return Ok(vec![(linalg::eye(d), rho.clone())]);
    }
    for _ in 0..3 {
        let t = linalg::random_combination(&end, rng);
        let ev = linalg::eigenvalues(&t)?;
        let scale = 1.0 + ev.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let clusters = linalg::cluster(&ev, 1e-5 * scale);
        if clusters.len() < 2 {
            continue;
        }
        let mut spaces = Vec::with_capacity(clusters.len());
        for (mu, m) in &clusters {
            let shifted = &t - linalg::eye(d) * *mu;
            let mut pw = linalg::eye(d);
            for _ in 0..*m {
                pw = &pw * &shifted;
            }
            let (v, worst) = linalg::smallest_right_vectors(&pw, *m);
            let norm = linalg::max_abs(&shifted).max(1.0).powi(*m as i32);
            if worst > 1e-6 * norm {
                return Err(Error::Numerical(format!("generalized eigenspace not resolved (σ = {worst:e})")));
            }
            spaces.push(v);
        }
        let p = linalg::hstack(&spaces);
        let p_inv = linalg::inverse(&p)?;
        let conj = rho.conjugate(&p, &p_inv);
        let mut out = Vec::new();
        let mut off = 0;
        for v in &spaces {
            let k = v.ncols();
            let sub = Representation::new(
                conj.matrices().iter().map(|m| m.view((off, off), (k, k)).into_owned()).collect(),
            )?;
            for (b, r) in split_module(&sub, rng)? {
                out.push((v * b, r));
            }
            off += k;
        }
        return Ok(out);
    }
    Ok(vec![(linalg::eye(d), rho.clone())])
}

/// Decomposes ρ into indecomposables via idempotents of End(ρ); identifies summands against `catalog`
/// in the given order.
pub fn decompose_module(
    rho: &Representation,
    catalog: &[(String, Representation)],
    seed: u64,
) -> Result<ModuleDecomposition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pieces = split_module(rho, &mut rng)?;
    let mut summands: Vec<Summand> = Vec::new();
    for (basis, mut rep) in pieces {
        rep.indecomposable = Some(true);
        let label = catalog
            .iter()
            .find(|(_, c)| module_isomorphic(&rep, c, seed).ok().flatten().is_some())
            .map(|(l, _)| l.clone());
        let existing = summands.iter_mut().find(|s| match (&s.label, &label) {
            (Some(a), Some(b)) => a == b,
            (None, None) => module_isomorphic(&rep, &s.rep, seed).ok().flatten().is_some(),
            _ => false,
        });
        match existing {
            Some(s) => {
                s.multiplicity += 1;
                s.bases.push(basis);
            }
            None => summands.push(Summand { label, rep, multiplicity: 1, bases: vec![basis] }),
        }
    }
    let cols: Vec<CMat> = summands.iter().flat_map(|s| s.bases.iter().cloned()).collect();
    let p = linalg::hstack(&cols);
    let residual = block_residual(rho, &p, &summands)?;
    Ok(ModuleDecomposition { summands, intertwiner: p, residual })
}

fn block_residual(rho: &Representation, p: &CMat, summands: &[Summand]) -> Result<f64> {
    let p_inv = linalg::inverse(p)?;
    let conj = rho.conjugate(p, &p_inv);
    let sizes: Vec<usize> = summands.iter().flat_map(|s| s.bases.iter().map(|b| b.ncols())).collect();
    let mut block_of = Vec::new();
    for (b, &s) in sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, s));
    }
    let mut worst: f64 = 0.0;
    for m in conj.matrices() {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if block_of[i] != block_of[j] {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Projective indecomposables A·E_a of the regular module.
#[derive(Clone, Debug)]
pub struct RegularDecomposition {
    pub idempotents: Vec<CVec>,
    /// Per idempotent: basis of A·E (columns of algebra coordinates) and the module.
    pub modules: Vec<(CMat, Representation)>,
    pub decomposition: ModuleDecomposition,
}

pub fn decompose_regular(alg: &PreBialgebra, seed: u64) -> Result<RegularDecomposition> {
    let reg = regular_representation(alg)?;
    let idempotents = primitive_idempotents(alg, seed)?;
    let mut modules = Vec::new();
    for e in &idempotents {
        let basis = linalg::column_space(&alg.right_matrix(e), RANK_RTOL);
        let mut rep = reg.restrict(&basis);
        rep.indecomposable = Some(true);
        modules.push((basis, rep));
    }
    let mut summands: Vec<Summand> = Vec::new();
    for (k, (basis, rep)) in modules.iter().enumerate() {
        let found = summands.iter_mut().find(|s| module_isomorphic(rep, &s.rep, seed).ok().flatten().is_some());
        match found {
            Some(s) => {
                s.multiplicity += 1;
                s.bases.push(basis.clone());
            }
            None => summands.push(Summand {
                label: Some(format!("P{k}")),
                rep: rep.clone(),
                multiplicity: 1,
                bases: vec![basis.clone()],
            }),
        }
    }
    let p = linalg::hstack(&summands.iter().flat_map(|s| s.bases.iter().cloned()).collect::<Vec<_>>());
    let residual = block_residual(&reg, &p, &summands)?;
    Ok(RegularDecomposition { idempotents, modules, decomposition: ModuleDecomposition { summands, intertwiner: p, residual } })
}

/// Basis (columns) of rad(A)·P inside the module space.
pub fn radical_subspace(alg: &PreBialgebra, p: &Representation) -> Result<CMat> {
    let rad = radical(alg)?;
    if rad.ncols() == 0 {
        return Ok(linalg::zeros(p.dim(), 0));
    }
    let imgs: Vec<CMat> = (0..rad.ncols()).map(|c| p.eval(&rad.column(c).into_owned())).collect();
    let scale = p.matrices().iter().map(linalg::max_abs).fold(1.0, f64::max);
    Ok(linalg::column_space_scaled(&linalg::hstack(&imgs), RANK_RTOL, scale))
}

/// The submodule rad(A)·P.
pub fn radical_submodule(alg: &PreBialgebra, p: &Representation) -> Result<Representation> {
    let w = radical_subspace(alg, p)?;
    Ok(p.restrict(&w))
}

/// P / rad(A)·P.
pub fn simple_quotient(alg: &PreBialgebra, p: &Representation) -> Result<Representation> {
    let w = radical_subspace(alg, p)?;
    let q = linalg::complement(&w, p.dim());
    if q.ncols() == 0 {
        return Err(Error::ZeroQuotient);
    }
    Ok(p.restrict(&q))
}

#[derive(Clone, Debug)]
pub struct Wedderburn {
    pub blocks: Vec<usize>,
    pub central_idempotents: Vec<CVec>,
    pub irreps: Vec<Representation>,
}

/// Block sizes, central idempotents and irreducible representations of a semisimple algebra.
pub fn wedderburn(alg: &PreBialgebra, seed: u64) -> Result<Wedderburn> {
    let rad = radical(alg)?;
    if rad.ncols() > 0 {
        return Err(Error::NotSemisimple(rad.ncols()));
    }
    let z = central_idempotents(alg, seed)?;
    let prim = primitive_idempotents(alg, seed)?;
    let reg = regular_representation(alg)?;
    let mut blocks = Vec::new();
    let mut irreps = Vec::new();
    for zc in &z {
        let e = prim
            .iter()
            .find(|e| (alg.product(zc, e) - *e).camax() < 1e-8)
            .ok_or_else(|| Error::Numerical("no primitive idempotent under a central idempotent".into()))?;
        let basis = linalg::column_space(&alg.right_matrix(e), RANK_RTOL);
        let mut rep = reg.restrict(&basis);
        rep.irreducible = Some(true);
        blocks.push(rep.dim());
        irreps.push(rep);
    }
    Ok(Wedderburn { blocks, central_idempotents: z, irreps })
}

/// (ρ1 ⊗ ρ2)∘Δ. Representations of a unitized algebra (one extra matrix) map e^0 to 𝟙.
pub fn tensor_representation(r1: &Representation, r2: &Representation, coalg: &PreBialgebra) -> Result<Representation> {
    let n = coalg.dim();
    let comult = coalg.comult().ok_or_else(|| Error::Structure("tensor product needs Δ".into()))?;
    if r1.len() != r2.len() || (r1.len() != n && r1.len() != n + 1) {
        return Err(Error::Pairing(format!("representations of length {} / {} for Δ of dimension {n}", r1.len(), r2.len())));
    }
    let d = r1.dim() * r2.dim();
    let mut mats = vec![linalg::zeros(d, d); n];
    for (i, j, k, v) in comult.entries() {
        mats[i] += linalg::kron(r1.matrix(j), r2.matrix(k)) * v;
    }
    if r1.len() == n + 1 {
        mats.push(linalg::eye(d));
    }
    Representation::new(mats)
}

/// Fusion multiplicities with derived left/right matrices and quantum dimensions.
#[derive(Clone, Debug, Serialize)]
pub struct FusionRing {
    pub labels: Vec<String>,
    /// n[a][b][c] = N^c_{ab}.
    pub n: Vec<Vec<Vec<u32>>>,
}

impl FusionRing {
    pub fn new(labels: Vec<String>, n: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        let r = labels.len();
        if n.len() != r || n.iter().any(|x| x.len() != r || x.iter().any(|y| y.len() != r)) {
            return Err(Error::Shape("fusion table must be r×r×r".into()));
        }
        Ok(Self { labels, n })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// (N_a)_{cb} = N^c_{ab}.
    pub fn left(&self, a: usize) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..r).map(|c| (0..r).map(|b| self.n[a][b][c] as i64).collect()).collect()
    }

    /// (Ñ_b)_{ca} = N^c_{ab}.
    pub fn right(&self, b: usize) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..r).map(|c| (0..r).map(|a| self.n[a][b][c] as i64).collect()).collect()
    }

    fn matmul(x: &[Vec<i64>], y: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let r = x.len();
        (0..r).map(|i| (0..r).map(|j| (0..r).map(|k| x[i][k] * y[k][j]).sum()).collect()).collect()
    }

    /// N_a N_b = Σ_c N^c_{ab} N_c, exactly.
    pub fn is_associative(&self) -> bool {
        let r = self.rank();
        for a in 0..r {
            for b in 0..r {
                let lhs = Self::matmul(&self.left(a), &self.left(b));
                let mut rhs = vec![vec![0i64; r]; r];
                for c in 0..r {
                    let nc = self.left(c);
                    for (i, row) in rhs.iter_mut().enumerate() {
                        for (j, v) in row.iter_mut().enumerate() {
                            *v += self.n[a][b][c] as i64 * nc[i][j];
                        }
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Ñ_c N_a = N_a Ñ_c for all a, c.
    pub fn left_right_commute(&self) -> bool {
        let r = self.rank();
        (0..r).all(|a| (0..r).all(|c| Self::matmul(&self.right(c), &self.left(a)) == Self::matmul(&self.left(a), &self.right(c))))
    }

    pub fn quantum_dims(&self) -> Result<Vec<f64>> {
        (0..self.rank())
            .map(|a| {
                let m = CMat::from_fn(self.rank(), self.rank(), |i, j| linalg::re(self.left(a)[i][j] as f64));
                linalg::spectral_radius(&m)
            })
            .collect()
    }

    pub fn fpdim(&self) -> Result<f64> {
        Ok(self.quantum_dims()?.iter().map(|d| d * d).sum())
    }
}

/// N^c_{ab} from traces of ρ_{a⊠b}(z_c), with integrality enforced.
pub fn fusion_multiplicities(alg: &PreBialgebra, w: &Wedderburn, labels: &[String]) -> Result<FusionRing> {
    let r = w.irreps.len();
    if labels.len() != r {
        return Err(Error::Shape("one label per irrep".into()));
    }
    let mut n = vec![vec![vec![0u32; r]; r]; r];
    for a in 0..r {
        for b in 0..r {
            let t = tensor_representation(&w.irreps[a], &w.irreps[b], alg)?;
            for c in 0..r {
                let tr = linalg::trace(&t.eval(&w.central_idempotents[c])).re / w.irreps[c].dim() as f64;
                let rounded = tr.round();
                if (tr - rounded).abs() > 1e-6 || rounded < 0.0 {
                    return Err(Error::InconsistentCoproduct(format!("N^{c}_{{{a}{b}}} = {tr} is not a nonnegative integer")));
                }
                n[a][b][c] = rounded as u32;
            }
        }
    }
    FusionRing::new(labels.to_vec(), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prebialgebra::{cyclic_group_algebra, matrix_algebra};

    #[test]
    fn matrix_algebra_regular_module() {
        let m2 = matrix_algebra(2);
        assert_eq!(radical(&m2).unwrap().ncols(), 0);
        let reg = decompose_regular(&m2, 0).unwrap();
        assert_eq!(reg.decomposition.summands.len(), 1);
        assert_eq!(reg.decomposition.summands[0].multiplicity, 2);
        assert_eq!(reg.decomposition.summands[0].rep.dim(), 2);
    }

    #[test]
    fn group_algebra_blocks_and_fusion() {
        let g = cyclic_group_algebra(2);
        let w = wedderburn(&g, 0).unwrap();
        assert_eq!(w.blocks, vec![1, 1]);
        let f = fusion_multiplicities(&g, &w, &["a".into(), "b".into()]).unwrap();
        // sign ⊗ sign = trivial; every row of N is a permutation
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(f.n[a][b].iter().sum::<u32>(), 1);
            }
        }
        assert!(f.is_associative() && f.left_right_commute());
        assert_eq!(f.quantum_dims().unwrap().iter().map(|d| d.round() as i64).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn trivial_algebra_idempotent() {
        let c = cyclic_group_algebra(1);
        let e = primitive_idempotents(&c, 0).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e[0][0] - linalg::ONE).norm() < 1e-12);
    }

    #[test]
    fn isomorphic_to_itself() {
        let g = cyclic_group_algebra(3);
        let reg = regular_representation(&g).unwrap();
        assert!(module_isomorphic(&reg, &reg, 0).unwrap().is_some());
    }
}
