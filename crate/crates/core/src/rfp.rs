//! MPO tensors from representation pairs, MPDO fixed-point tensors, vertical canonical forms and the
//! fusion criterion for renormalization fixed points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, C64, RANK_RTOL, ZERO};
use crate::prebialgebra::{check_weak_hopf, PreBialgebra, WeakHopfData};
use crate::rep_theory::{fusion_multiplicities, wedderburn, FusionRing, Representation, Wedderburn};
use crate::tensor_core::MpoTensor;

/// A^{ij}_{αβ} = Σ_I [φ(e_I)]_{ij} [ψ(e^I)]_{αβ}.
///
/// ψ may carry one extra matrix for the adjoined unit e^0 of A*_+; it must be the identity and does
/// not enter the sum.
pub fn build_mpo_tensor(phi: &Representation, psi: &Representation) -> Result<MpoTensor> {
    weighted_mpo_tensor(phi, psi, None)
}

fn weighted_mpo_tensor(phi: &Representation, psi: &Representation, weight: Option<&CMat>) -> Result<MpoTensor> {
    let n = phi.len();
    if psi.len() != n && psi.len() != n + 1 {
        return Err(Error::Pairing(format!("φ has {n} basis images, ψ has {}", psi.len())));
    }
    if psi.len() == n + 1 && !crate::prebialgebra::is_identity(psi.matrix(n), 1e-12) {
        return Err(Error::Pairing("ψ(e^0) must be the identity".into()));
    }
    let d = phi.dim();
    let bond = psi.dim();
    let mut slices = vec![linalg::zeros(bond, bond); d * d];
    for i in 0..n {
        let p = match weight {
            Some(b) => b * phi.matrix(i),
            None => phi.matrix(i).clone(),
        };
        for r in 0..d {
            for c in 0..d {
                let v = p[(r, c)];
                if v != ZERO {
                    slices[r * d + c] += psi.matrix(i) * v;
                }
            }
        }
    }
    MpoTensor::from_slices(d, d, slices)
}

/// Physical direct sum of tensors sharing a bond dimension.
pub fn physical_direct_sum(parts: &[MpoTensor]) -> Result<MpoTensor> {
    let bond = parts.first().ok_or_else(|| Error::Shape("empty direct sum".into()))?.bond();
    if parts.iter().any(|t| t.bond() != bond || t.d_in() != t.d_out()) {
        return Err(Error::Shape("summands need square physical legs and a common bond".into()));
    }
    let vs: Vec<Vec<CMat>> = parts.iter().map(|t| t.vertical_slices()).collect();
    let sum: Vec<CMat> =
        (0..bond * bond).map(|k| vs.iter().skip(1).fold(vs[0][k].clone(), |acc, v| linalg::direct_sum(&acc, &v[k]))).collect();
    MpoTensor::from_vertical_slices(bond, &sum)
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub transitive: bool,
    /// a ↦ a* with N_{a*} = N_aᵀ, when it exists.
    pub duals: Vec<Option<usize>>,
    pub failing: Vec<String>,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.failing.is_empty()
    }
}

/// Transitivity and dual-label conditions on a fusion ring.
pub fn check_ring_hypotheses(f: &FusionRing) -> TheoremReport {
    let r = f.rank();
    let mut failing = Vec::new();
    let mut transitive = true;
    for a in 0..r {
        for b in 0..r {
            let ok = (0..r).any(|c| (0..r).any(|d| f.n[a][c][d] > 0 && f.n[d][a][b] > 0));
            if !ok {
                transitive = false;
                failing.push(format!("transitivity fails for ({}, {})", f.labels[a], f.labels[b]));
            }
        }
    }
    let transpose = |m: Vec<Vec<i64>>| -> Vec<Vec<i64>> { (0..r).map(|i| (0..r).map(|j| m[j][i]).collect()).collect() };
    let duals: Vec<Option<usize>> = (0..r)
        .map(|a| {
            let t = transpose(f.left(a));
            (0..r).find(|&s| f.left(s) == t)
        })
        .collect();
    for (a, d) in duals.iter().enumerate() {
        if d.is_none() {
            failing.push(format!("no dual label for {}", f.labels[a]));
        }
    }
    TheoremReport { transitive, duals, failing }
}

/// Replaces computed irreps by given equivalent ones, matching each to the central idempotent it
/// represents as the identity.
pub fn align_irreps(w: &Wedderburn, irreps: &[Representation]) -> Result<Wedderburn> {
    if irreps.len() != w.irreps.len() {
        return Err(Error::Pairing(format!("{} irreps given, algebra has {}", irreps.len(), w.irreps.len())));
    }
    let mut out = Vec::with_capacity(irreps.len());
    for z in &w.central_idempotents {
        let hit = irreps
            .iter()
            .find(|r| crate::prebialgebra::is_identity(&r.eval(z), 1e-8))
            .ok_or_else(|| Error::Pairing("a given irrep matches no central idempotent".into()))?;
        out.push(hit.clone());
    }
    Ok(Wedderburn { blocks: out.iter().map(|r| r.dim()).collect(), central_idempotents: w.central_idempotents.clone(), irreps: out })
}

#[derive(Clone, Debug)]
pub struct RfpTensor {
    pub tensor: MpoTensor,
    pub ring: FusionRing,
    pub quantum_dims: Vec<f64>,
    pub fpdim: f64,
    pub weights: Vec<f64>,
    pub irreps: Vec<Representation>,
    pub hypotheses: TheoremReport,
}

/// M = ⊕_a (d_a / FPdim) Σ_I φ_a(e_I) ⊗ ψ(e^I) with irreps from the Wedderburn decomposition.
pub fn build_rfp_tensor(alg: &PreBialgebra, psi: &Representation, seed: u64) -> Result<RfpTensor> {
    let w = wedderburn(alg, seed)?;
    rfp_from_wedderburn(alg, &w, psi)
}

/// As [`build_rfp_tensor`] with explicitly chosen irreps (in the algebra's basis).
pub fn build_rfp_tensor_with(alg: &PreBialgebra, irreps: &[Representation], psi: &Representation, seed: u64) -> Result<RfpTensor> {
    let w = align_irreps(&wedderburn(alg, seed)?, irreps)?;
    rfp_from_wedderburn(alg, &w, psi)
}

fn rfp_from_wedderburn(alg: &PreBialgebra, w: &Wedderburn, psi: &Representation) -> Result<RfpTensor> {
    let labels: Vec<String> = (0..w.irreps.len()).map(|a| format!("phi_{}", a + 1)).collect();
    let ring = fusion_multiplicities(alg, w, &labels)?;
    let hypotheses = check_ring_hypotheses(&ring);
    if !hypotheses.pass() {
        return Err(Error::Precondition(hypotheses.failing.join("; ")));
    }
    let quantum_dims = ring.quantum_dims()?;
    let fpdim = ring.fpdim()?;
    let weights: Vec<f64> = quantum_dims.iter().map(|d| d / fpdim).collect();
    let parts = w
        .irreps
        .iter()
        .zip(&weights)
        .map(|(phi, &wt)| Ok(build_mpo_tensor(phi, psi)?.scaled(linalg::re(wt))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RfpTensor { tensor: physical_direct_sum(&parts)?, ring, quantum_dims, fpdim, weights, irreps: w.irreps.clone(), hypotheses })
}

fn with_adjoints(vs: &[CMat]) -> Vec<CMat> {
    vs.iter().cloned().chain(vs.iter().map(|v| v.adjoint())).collect()
}

/// Orthonormal bases of the minimal invariant subspaces of a *-closed matrix family, from the
/// eigenspaces of a random Hermitian element of its commutant.
fn split_blocks(vs: &[CMat], rng: &mut ChaCha8Rng) -> Result<Vec<CMat>> {
    let d = vs[0].nrows();
    let fam = with_adjoints(vs);
    let comm = linalg::intertwiners(&fam, &fam, RANK_RTOL)?;
    if comm.len() <= 1 {
        return Ok(vec![linalg::eye(d)]);
    }
    let mut h = linalg::zeros(d, d);
    for c in &comm {
        let r: f64 = rng.random_range(-1.0..1.0);
        h += (c + c.adjoint()) * linalg::re(r);
    }
    let (vals, vecs) = linalg::hermitian_eigen(&h);
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=d {
        if k == d || (vals[k] - vals[k - 1]).abs() > 1e-8 * scale {
            out.push(vecs.columns(start, k - start).into_owned());
            start = k;
        }
    }
    Ok(out)
}

fn restrict(vs: &[CMat], q: &CMat) -> Vec<CMat> {
    vs.iter().map(|v| q.adjoint() * v * q).collect()
}

/// Spectral radius of Σ_k V_k ⊗ conj(V_k).
pub fn transfer_radius(vs: &[CMat]) -> Result<f64> {
    let d = vs[0].nrows();
    let mut t = linalg::zeros(d * d, d * d);
    for v in vs {
        t += linalg::kron(v, &v.conjugate());
    }
    linalg::spectral_radius(&t)
}

/// Unitary X with X a_k X† = b_k, if the families are equivalent.
fn match_family(a: &[CMat], b: &[CMat], tol: f64) -> Result<Option<CMat>> {
    if a[0].nrows() != b[0].nrows() {
        return Ok(None);
    }
    let xs = linalg::intertwiners(a, b, RANK_RTOL)?;
    let Some(x) = xs.into_iter().next() else { return Ok(None) };
    let s = (x.adjoint() * &x).trace().re / x.nrows() as f64;
    if s <= 0.0 {
        return Ok(None);
    }
    let x = x * linalg::re(1.0 / s.sqrt());
    let res = a.iter().zip(b).map(|(p, q)| linalg::max_diff(&(&x * p * x.adjoint()), q)).fold(0.0, f64::max);
    let unit = linalg::max_diff(&(x.adjoint() * &x), &linalg::eye(x.nrows()));
    Ok((res < tol && unit < tol).then_some(x))
}

#[derive(Clone, Debug)]
pub struct CanonicalBlock {
    /// Diagonal of μ_a, one entry per copy.
    pub mu: Vec<f64>,
    /// Normalized normal tensor M_a.
    pub tensor: MpoTensor,
}

impl CanonicalBlock {
    pub fn mass(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn physical_dim(&self) -> usize {
        self.tensor.d_out()
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub bond: usize,
    pub physical_dim: usize,
    /// Isometry U with U M_(αβ) U† = ⊕_a μ_a ⊗ M_(αβ),a.
    pub u: CMat,
    pub blocks: Vec<CanonicalBlock>,
    /// max over slices of |U† (⊕ μ⊗M_a) U − M| and |U M U† − ⊕ μ⊗M_a|.
    pub residual: f64,
    pub normal_residual: f64,
}

fn block_target(blocks: &[CanonicalBlock], k: usize) -> CMat {
    let mut out = linalg::zeros(0, 0);
    for b in blocks {
        let v = &b.tensor.vertical_slices()[k];
        for &m in &b.mu {
            out = linalg::direct_sum(&out, &(v * linalg::re(m)));
        }
    }
    out
}

struct Decomposition {
    /// (representative normalized family, copies as (scale, isometry columns)).
    classes: Vec<(Vec<CMat>, Vec<(f64, CMat)>)>,
}

fn decompose_family(vs: &[CMat], rng: &mut ChaCha8Rng, tol: f64) -> Result<Decomposition> {
    let qs = split_blocks(vs, rng)?;
    let total = transfer_radius(vs)?.max(f64::MIN_POSITIVE);
    let mut classes: Vec<(Vec<CMat>, Vec<(f64, CMat)>)> = Vec::new();
    for q in qs {
        let f = restrict(vs, &q);
        let r = transfer_radius(&f)?;
        if r <= 1e-20 * total {
            continue;
        }
        let c = r.sqrt();
        let n: Vec<CMat> = f.iter().map(|m| m * linalg::re(1.0 / c)).collect();
        let mut placed = false;
        for (rep, copies) in classes.iter_mut() {
            if let Some(x) = match_family(rep, &n, tol)? {
                copies.push((c, &q * x));
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push((n, vec![(c, q)]));
        }
    }
    Ok(Decomposition { classes })
}

/// Vertical canonical form of an MPDO tensor: splits the physical space into normal blocks.
pub fn vertical_canonical_form(m: &MpoTensor, seed: u64, tol: f64) -> Result<CanonicalForm> {
    if m.d_in() != m.d_out() {
        return Err(Error::Shape("MPDO tensor needs square physical legs".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vs = m.vertical_slices();
    let mut dec = decompose_family(&vs, &mut rng, tol)?;
    dec.classes.sort_by(|a, b| {
        let ma: f64 = a.1.iter().map(|c| c.0).sum();
        let mb: f64 = b.1.iter().map(|c| c.0).sum();
        a.0[0].nrows().cmp(&b.0[0].nrows()).then(mb.total_cmp(&ma))
    });
    let mut rows = Vec::new();
    let mut blocks = Vec::new();
    let mut normal_residual: f64 = 0.0;
    for (rep, copies) in &dec.classes {
        let da = rep[0].nrows();
        let gen = crate::rep_theory::generated_algebra_dim(rep, da);
        normal_residual = normal_residual.max((da * da - gen) as f64);
        normal_residual = normal_residual.max((transfer_radius(rep)? - 1.0).abs());
        for (_, q) in copies {
            rows.push(q.adjoint());
        }
        blocks.push(CanonicalBlock { mu: copies.iter().map(|c| c.0).collect(), tensor: MpoTensor::from_vertical_slices(m.bond(), rep)? });
    }
    let u = if rows.is_empty() { linalg::zeros(0, m.d_out()) } else { linalg::vstack(&rows) };
    let mut residual: f64 = 0.0;
    for (k, v) in vs.iter().enumerate() {
        let t = block_target(&blocks, k);
        if t.nrows() == 0 {
            residual = residual.max(linalg::max_abs(v));
            continue;
        }
        residual = residual.max(linalg::max_diff(&(&u * v * u.adjoint()), &t));
        residual = residual.max(linalg::max_diff(&(u.adjoint() * &t * &u), v));
    }
    Ok(CanonicalForm { bond: m.bond(), physical_dim: m.d_out(), u, blocks, residual, normal_residual })
}

/// Vertical slices of the horizontally concatenated pair M_a M_b.
fn concatenate(a: &MpoTensor, b: &MpoTensor) -> Vec<CMat> {
    let d = a.bond();
    let va = a.vertical_slices();
    let vb = b.vertical_slices();
    let mut out = Vec::with_capacity(d * d);
    for al in 0..d {
        for ga in 0..d {
            let mut acc = linalg::zeros(a.d_out() * b.d_out(), a.d_in() * b.d_in());
            for be in 0..d {
                acc += linalg::kron(&va[al * d + be], &vb[be * d + ga]);
            }
            out.push(acc);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PairFusion {
    pub a: usize,
    pub b: usize,
    /// χ_{a,b,c} diagonal for every c (empty when N^c_{ab} = 0).
    pub chi: Vec<Vec<f64>>,
    #[serde(skip)]
    pub w: CMat,
    pub isometry_residual: f64,
    pub fusion_residual: f64,
    /// Dimension of the nonzero part of M_a M_b that matches no block of the canonical form.
    pub unmatched_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RfpReport {
    pub pairs: Vec<PairFusion>,
    pub masses: Vec<f64>,
    pub m_consistency: f64,
    pub canonical_residual: f64,
    pub is_rfp: bool,
}

impl RfpReport {
    pub fn max_isometry_residual(&self) -> f64 {
        self.pairs.iter().map(|p| p.isometry_residual).fold(0.0, f64::max)
    }

    pub fn max_fusion_residual(&self) -> f64 {
        self.pairs.iter().map(|p| p.fusion_residual).fold(0.0, f64::max)
    }

    /// True when every χ_{a,b,c} is a multiple of the identity.
    pub fn chi_scalar(&self, tol: f64) -> bool {
        self.pairs.iter().all(|p| p.chi.iter().all(|c| c.iter().all(|x| (x - c[0]).abs() < tol)))
    }
}

/// Checks the fusion criterion: isometries W_ab with W_ab (M_a M_b) W_ab† = ⊕_c χ_abc ⊗ M_c.
pub fn verify_rfp(cf: &CanonicalForm, seed: u64, tol: f64) -> Result<RfpReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = cf.blocks.len();
    let reps: Vec<Vec<CMat>> = cf.blocks.iter().map(|b| b.tensor.vertical_slices()).collect();
    let masses: Vec<f64> = cf.blocks.iter().map(|b| b.mass()).collect();
    let mut pairs = Vec::new();
    let mut ok = cf.residual < tol;
    let mut predicted = vec![0.0; r];
    for a in 0..r {
        for b in 0..r {
            let v = concatenate(&cf.blocks[a].tensor, &cf.blocks[b].tensor);
            let dec = decompose_family(&v, &mut rng, tol)?;
            let mut chi = vec![Vec::new(); r];
            let mut cols: Vec<Vec<CMat>> = vec![Vec::new(); r];
            let mut unmatched = 0;
            for (rep, copies) in &dec.classes {
                let mut hit = None;
                for (c, target) in reps.iter().enumerate() {
                    if let Some(x) = match_family(target, rep, tol)? {
                        hit = Some((c, x));
                        break;
                    }
                }
                match hit {
                    Some((c, x)) => {
                        for (s, q) in copies {
                            chi[c].push(*s);
                            cols[c].push(q * &x);
                        }
                    }
                    None => unmatched += copies.len() * rep[0].nrows(),
                }
            }
            let rows: Vec<CMat> = cols.iter().flatten().map(|q| q.adjoint()).collect();
            let d2 = v[0].nrows();
            let w = if rows.is_empty() { linalg::zeros(0, d2) } else { linalg::vstack(&rows) };
            let isometry_residual = if w.nrows() == 0 { 0.0 } else { linalg::max_diff(&(&w * w.adjoint()), &linalg::eye(w.nrows())) };
            let mut fusion_residual: f64 = 0.0;
            for (k, vk) in v.iter().enumerate() {
                let mut t = linalg::zeros(0, 0);
                for c in 0..r {
                    for s in &chi[c] {
                        t = linalg::direct_sum(&t, &(&reps[c][k] * linalg::re(*s)));
                    }
                }
                let back = if t.nrows() == 0 { linalg::zeros(d2, d2) } else { w.adjoint() * &t * &w };
                fusion_residual = fusion_residual.max(linalg::max_diff(&back, vk));
                if t.nrows() > 0 {
                    fusion_residual = fusion_residual.max(linalg::max_diff(&(&w * vk * w.adjoint()), &t));
                }
            }
            for c in 0..r {
                predicted[c] += chi[c].iter().sum::<f64>() * masses[a] * masses[b];
            }
            ok &= unmatched == 0 && isometry_residual < tol && fusion_residual < tol;
            pairs.push(PairFusion { a, b, chi, w, isometry_residual, fusion_residual, unmatched_dim: unmatched });
        }
    }
    let m_consistency = masses.iter().zip(&predicted).map(|(m, p)| (m - p).abs()).fold(0.0, f64::max);
    ok &= m_consistency < tol;
    Ok(RfpReport { pairs, masses, m_consistency, canonical_residual: cf.residual, is_rfp: ok })
}

#[derive(Clone, Debug)]
pub struct PositivityReport {
    /// x = Σ_I Tr[ψ(e^I)] e_I.
    pub x: CVec,
    pub min_eigenvalue: f64,
    pub witness: Option<CVec>,
    /// |y y* − x| for the returned witness.
    pub witness_residual: f64,
}

/// |y y* − x| in the algebra.
pub fn witness_residual(alg: &PreBialgebra, y: &CVec, x: &CVec) -> Result<f64> {
    let ys = alg.apply_star(y).ok_or_else(|| Error::Structure("algebra has no star".into()))?;
    Ok((alg.product(y, &ys) - x).camax())
}

/// Writes x = y y* through a faithful *-representation φ: y = φ⁻¹(φ(x)^{1/2}).
pub fn check_positivity(alg: &PreBialgebra, psi: &Representation, phi: &Representation, tol: f64) -> Result<PositivityReport> {
    let n = alg.dim();
    if psi.len() < n || phi.len() != n {
        return Err(Error::Pairing("representations do not match the algebra dimension".into()));
    }
    let x = CVec::from_fn(n, |i, _| linalg::trace(psi.matrix(i)));
    let xs = alg.apply_star(&x).ok_or_else(|| Error::Structure("algebra has no star".into()))?;
    let herm = (&xs - &x).camax();
    if herm > tol {
        return Err(Error::Structure(format!("x is not self-adjoint: {herm:e}")));
    }
    for i in 0..n {
        let si = alg.apply_star(&alg.basis(i)).expect("star present");
        if linalg::max_diff(&phi.eval(&si), &phi.matrix(i).adjoint()) > tol {
            return Err(Error::Structure("φ is not a *-representation".into()));
        }
    }
    let p = phi.eval(&x);
    let (vals, _) = linalg::hermitian_eigen(&((&p + p.adjoint()) * linalg::re(0.5)));
    let min_eigenvalue = vals.first().copied().unwrap_or(0.0);
    if min_eigenvalue < -tol {
        return Ok(PositivityReport { x, min_eigenvalue, witness: None, witness_residual: f64::INFINITY });
    }
    let s = linalg::hermitian_fn(&p, |v| linalg::re(v.max(0.0).sqrt()));
    let d = phi.dim();
    let basis = CMat::from_fn(d * d, n, |r, c| phi.matrix(c)[(r / d, r % d)]);
    let rhs = CMat::from_fn(d * d, 1, |r, _| s[(r / d, r % d)]);
    let (y, _) = linalg::lstsq(&basis, &rhs);
    let y = y.column(0).into_owned();
    let res = witness_residual(alg, &y, &x)?;
    Ok(PositivityReport { x, min_eigenvalue, witness: (res < tol.max(1e-9)).then_some(y), witness_residual: res })
}

#[derive(Clone, Debug)]
pub struct WhaRfpData {
    /// ω(e_I) for the canonical regular element.
    pub omega: CVec,
    pub quantum_dims: Vec<f64>,
    pub fpdim: f64,
    pub b_omega: CMat,
    pub boundary: CMat,
    pub tensor: MpoTensor,
    pub weight_residual: f64,
    pub boundary_residual: f64,
}

/// Solves Tr(X m_I) = v_I for the least-norm X.
fn trace_solve(ms: &[CMat], v: &CVec) -> (CMat, f64) {
    let d = ms[0].nrows();
    let a = CMat::from_fn(ms.len(), d * d, |i, k| ms[i][(k % d, k / d)]);
    let rhs = CMat::from_column_slice(v.len(), 1, v.as_slice());
    let (x, res) = linalg::lstsq(&a, &rhs);
    (CMat::from_fn(d, d, |r, c| x[(r * d + c, 0)]), res)
}

/// RFP tensor of a weak Hopf algebra: Σ_I [b(ω) φ(e_I)]_{ij} [ψ(e^I)]_{αβ} with boundary B(x).
pub fn wha_rfp_tensor(
    alg: &PreBialgebra,
    w: &WeakHopfData,
    phi: &Representation,
    psi: &Representation,
    x: &CVec,
    tol: f64,
    seed: u64,
) -> Result<WhaRfpData> {
    let report = check_weak_hopf(alg, w, tol);
    if !report.all_pass() {
        let bad: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        return Err(Error::Precondition(format!("weak Hopf axioms fail: {}", bad.join(", "))));
    }
    let n = alg.dim();
    if phi.len() != n || psi.len() != n {
        return Err(Error::Pairing("φ and ψ must have one image per basis element".into()));
    }
    let wd = wedderburn(alg, seed)?;
    let labels: Vec<String> = (0..wd.irreps.len()).map(|a| format!("phi_{}", a + 1)).collect();
    let ring = fusion_multiplicities(alg, &wd, &labels)?;
    let quantum_dims = ring.quantum_dims()?;
    let fpdim = ring.fpdim()?;
    let omega = CVec::from_fn(n, |i, _| {
        wd.irreps.iter().zip(&quantum_dims).map(|(r, d)| linalg::trace(r.matrix(i)) * (d / fpdim)).sum::<C64>()
    });
    let (b_omega, weight_residual) = trace_solve(phi.matrices(), &omega);
    let (boundary, boundary_residual) = trace_solve(psi.matrices(), x);
    if weight_residual > tol || boundary_residual > tol {
        return Err(Error::Singular(format!(
            "degenerate representation: weight residual {weight_residual:e}, boundary residual {boundary_residual:e}"
        )));
    }
    let tensor = weighted_mpo_tensor(phi, psi, Some(&b_omega))?;
    Ok(WhaRfpData { omega, quantum_dims, fpdim, b_omega, boundary, tensor, weight_residual, boundary_residual })
}

/// Faithful representation as the direct sum of all irreps.
pub fn faithful_representation(alg: &PreBialgebra, seed: u64) -> Result<Representation> {
    let w = wedderburn(alg, seed)?;
    let mut it = w.irreps.into_iter();
    let first = it.next().ok_or_else(|| Error::DegenerateAlgebra("no irreps".into()))?;
    it.try_fold(first, |acc, r| acc.direct_sum(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::czy;
    use crate::tensor_core::{mpdo_contract, mpo_close, Cap};

    #[test]
    fn reconstructs_czy_tensors() {
        assert!(build_mpo_tensor(&czy::phi1(), &czy::psi_s2()).unwrap().max_diff(&czy::a1()) < 1e-14);
        assert!(build_mpo_tensor(&czy::phi1(), &czy::psi_p0()).unwrap().max_diff(&czy::a0()) < 1e-14);
        assert!(build_mpo_tensor(&czy::phi1(), &czy::psi_p0().unitized()).unwrap().max_diff(&czy::a0()) < 1e-14);
    }

    #[test]
    fn s1_gives_identity_mpo() {
        let t = build_mpo_tensor(&czy::phi1(), &czy::psi_s1()).unwrap();
        assert_eq!(t.bond(), 1);
        for n in 2..=4 {
            let o = mpo_close(&t, &linalg::eye(1), n, Cap::default()).unwrap();
            assert!(linalg::max_diff(o.matrix(), &linalg::eye(1 << n)) < 1e-14);
        }
    }

    #[test]
    fn pairing_mismatch() {
        let short = Representation::new(vec![linalg::eye(1); 3]).unwrap();
        assert!(matches!(build_mpo_tensor(&czy::phi1(), &short), Err(Error::Pairing(_))));
    }

    #[test]
    fn transitivity_counterexample() {
        let n = vec![vec![vec![1, 0]; 2]; 2];
        let f = FusionRing::new(vec!["0".into(), "1".into()], n).unwrap();
        let r = check_ring_hypotheses(&f);
        assert!(!r.transitive);
        assert!(!r.pass());
    }

    #[test]
    fn group_ring_passes() {
        let mut n = vec![vec![vec![0u32; 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                n[a][b][(a + b) % 3] = 1;
            }
        }
        let f = FusionRing::new(vec!["0".into(), "1".into(), "2".into()], n).unwrap();
        let r = check_ring_hypotheses(&f);
        assert!(r.pass());
        assert_eq!(r.duals, vec![Some(0), Some(2), Some(1)]);
    }

    #[test]
    fn single_normal_block() {
        let t = czy::a1();
        let cf = vertical_canonical_form(&t, 0, 1e-9).unwrap();
        assert_eq!(cf.blocks.len(), 1);
        assert_eq!(cf.blocks[0].mu.len(), 1);
        assert!(cf.residual < 1e-10);
    }

    #[test]
    fn product_state_is_rfp() {
        let m = MpoTensor::from_slices(2, 2, vec![linalg::eye(1) * linalg::re(0.5), linalg::zeros(1, 1), linalg::zeros(1, 1), linalg::eye(1) * linalg::re(0.5)]).unwrap();
        let cf = vertical_canonical_form(&m, 0, 1e-9).unwrap();
        let r = verify_rfp(&cf, 0, 1e-9).unwrap();
        assert!(r.is_rfp, "{r:?}");
    }

    #[test]
    fn czy_rfp_small_bond() {
        let psi = czy::psi_s1().direct_sum(&czy::psi_s2()).unwrap();
        let rfp = build_rfp_tensor_with(&czy::algebra(), &[czy::phi1(), czy::phi2()], &psi, 0).unwrap();
        assert_eq!((rfp.tensor.d_out(), rfp.tensor.bond()), (4, 3));
        for w in &rfp.weights {
            assert!((w - 0.25).abs() < 1e-12);
        }
        let cf = vertical_canonical_form(&rfp.tensor, 0, 1e-9).unwrap();
        assert_eq!(cf.blocks.len(), 2);
        let r = verify_rfp(&cf, 0, 1e-9).unwrap();
        assert!(r.is_rfp, "{r:?}");
        assert!(r.chi_scalar(1e-9));
        let rho = mpdo_contract(&rfp.tensor, 2, Cap::default()).unwrap();
        assert!((linalg::trace(rho.matrix()).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_tensor_not_rfp() {
        let psi = czy::psi_s1().direct_sum(&czy::psi_s2()).unwrap();
        let mut t = build_rfp_tensor_with(&czy::algebra(), &[czy::phi1(), czy::phi2()], &psi, 0).unwrap().tensor;
        let v = t.entry(0, 1, 0, 0) + linalg::re(0.01);
        t.set(0, 1, 0, 0, v).unwrap();
        let cf = vertical_canonical_form(&t, 0, 1e-9).unwrap();
        assert!(!verify_rfp(&cf, 0, 1e-9).unwrap().is_rfp);
    }

    #[test]
    fn positivity_witness() {
        let psi = czy::psi_s1().direct_sum(&czy::psi_s2()).unwrap();
        let phi = czy::phi1().direct_sum(&czy::phi2()).unwrap();
        let r = check_positivity(&czy::algebra(), &psi, &phi, 1e-10).unwrap();
        assert!((r.x.clone() - czy::element(&[(2, 1.0), (4, 1.0), (7, 1.0)])).camax() < 1e-14);
        assert!(r.witness.is_some());
        assert!(r.witness_residual < 1e-12);
    }

    fn wha_case(w: &crate::models::ThreeCocycle) -> (WhaRfpData, PreBialgebra) {
        let g = crate::models::group_prebialgebra(w).unwrap();
        let alg = g.untwisted.clone();
        let phi = Representation::new(g.natural_rep.clone()).unwrap();
        let dual = crate::prebialgebra::dual(&alg).unwrap();
        let psi = faithful_representation(&dual, 0).unwrap();
        let unit = alg.unit().unwrap().clone();
        (wha_rfp_tensor(&alg, &g.weak_hopf, &phi, &psi, &unit, 1e-9, 0).unwrap(), alg)
    }

    #[test]
    fn wha_rfp_z2_positive_and_fixed_point() {
        let (data, _) = wha_case(&crate::models::ThreeCocycle::z2_nontrivial());
        for n in 2..=3 {
            let rho = mpo_close(&data.tensor, &data.boundary, n, Cap::default()).unwrap();
            let m = rho.matrix();
            assert!(linalg::max_diff(m, &m.adjoint()) < 1e-10);
            let (vals, _) = linalg::hermitian_eigen(m);
            assert!(vals[0] > -1e-10, "N={n}: {}", vals[0]);
        }
        let cf = vertical_canonical_form(&data.tensor, 0, 1e-9).unwrap();
        let r = verify_rfp(&cf, 0, 1e-9).unwrap();
        assert!(r.is_rfp, "{r:?}");
    }

    #[test]
    fn wha_trivial_group() {
        let w = crate::models::ThreeCocycle::trivial(crate::models::FiniteGroup::cyclic(1));
        let (data, _) = wha_case(&w);
        assert_eq!(data.quantum_dims, vec![1.0]);
        assert!(crate::prebialgebra::is_identity(&(data.b_omega.clone() * linalg::re(1.0 / data.b_omega[(0, 0)].re)), 1e-12));
    }
}
