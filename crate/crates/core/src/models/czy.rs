//! The CZY example: MPO tensors A_0, A_1, the explicit X_{a,b}, the boundary algebra and its representations.

use crate::error::Result;
use crate::linalg::{self, real_matrix, CMat, C64, ONE, ZERO};
use crate::models::group::FiniteGroup;
use crate::mpo_algebra::{solve_family_fusions, BasisElement, FusionTable, MpoFamily};
use crate::prebialgebra::{PreBialgebra, Tensor3};
use crate::rep_theory::Representation;
use crate::tensor_core::MpoTensor;

fn e(r: usize, c: usize) -> CMat {
    linalg::unit(2, r, c)
}

fn z() -> CMat {
    real_matrix(&[&[1.0, 0.0], &[0.0, -1.0]])
}

pub fn a1() -> MpoTensor {
    let zero = linalg::zeros(2, 2);
    let a01 = real_matrix(&[&[1.0, 1.0], &[0.0, 0.0]]);
    let a10 = real_matrix(&[&[0.0, 0.0], &[-1.0, 1.0]]);
    MpoTensor::from_slices(2, 2, vec![zero.clone(), a01, a10, zero]).expect("fixed shapes")
}

pub fn a0() -> MpoTensor {
    let zero = linalg::zeros(3, 3);
    let a00 = real_matrix(&[&[0.0, -1.0, 1.0], &[0.0, 1.0, -1.0], &[0.0, 0.0, 0.0]]);
    let a11 = real_matrix(&[&[0.0, 1.0, 1.0], &[0.0, 1.0, 1.0], &[0.0, 0.0, 0.0]]);
    MpoTensor::from_slices(2, 2, vec![a00, zero.clone(), zero, a11]).expect("fixed shapes")
}

/// e_1..e_8 = e_0^{12}, e_0^{13}, e_0^{22}, e_0^{23}, e_1^{11}, e_1^{12}, e_1^{21}, e_1^{22} (stored zero-based).
pub fn basis() -> Vec<BasisElement> {
    [(0, 0, 1), (0, 0, 2), (0, 1, 1), (0, 1, 2), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)]
        .into_iter()
        .map(|(sector, m, n)| BasisElement { sector, m, n })
        .collect()
}

pub fn family() -> MpoFamily {
    MpoFamily::new("czy", FiniteGroup::cyclic(2), vec![a0(), a1()], basis()).expect("fixture is consistent")
}

/// The explicit similarity matrices X_{a,b}.
pub fn x_fixture(a: usize, b: usize) -> CMat {
    match (a, b) {
        (1, 1) => {
            real_matrix(&[&[0.0, 1.0, 1.0, 0.0], &[0.0, -1.0, 1.0, 0.0], &[-1.0, 0.0, 0.0, 1.0], &[-1.0, 0.0, 0.0, -1.0]])
                * linalg::re(std::f64::consts::FRAC_1_SQRT_2)
        }
        (0, 1) => real_matrix(&[
            &[0.0, 0.0, 1.0, 0.0, 0.0, -1.0],
            &[0.0, 0.0, 0.0, 1.0, -1.0, 0.0],
            &[0.0, 1.0, 0.0, -1.0, 0.0, 0.0],
            &[-1.0, 0.0, -1.0, 0.0, 0.0, -1.0],
            &[0.0, -1.0, 0.0, 1.0, -2.0, 0.0],
            &[-1.0, 0.0, -1.0, 0.0, 0.0, 2.0],
        ]),
        (1, 0) => real_matrix(&[
            &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0],
            &[1.0, -1.0, 0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, -1.0, -1.0, 0.0],
            &[1.0, -1.0, 0.0, 0.0, 0.0, -2.0],
            &[0.0, 0.0, 2.0, 1.0, 1.0, 0.0],
        ]),
        (0, 0) => real_matrix(&[
            &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 2.0],
            &[0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 2.0, 0.0],
            &[2.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, -4.0],
            &[0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            &[0.0, -2.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 0.0, -2.0, 0.0, 2.0, 0.0],
            &[2.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 2.0],
        ]),
        _ => panic!("CZY sectors are 0 and 1"),
    }
}

/// Fusion tensors from the explicit X's.
pub fn fusions(tol: f64) -> Result<FusionTable> {
    solve_family_fusions(&family(), &|a, b| Some(x_fixture(a, b)), tol, 0)
}

// e_I e_J in units of 1/2, row-major over (I, J)
const LAMBDA_HALVES: [[i8; 8]; 64] = [
    // e1
    [0, 0, 2, 0, 0, 0, 0, 0],
    [0, 0, 0, 2, 0, 0, 0, 0],
    [2, 0, 0, 0, 0, 0, 0, 0],
    [0, 2, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, -2, 0, 0, 0],
    [0, 0, 0, 0, 0, -2, 0, 0],
    [0, 0, 0, 0, 0, 0, 2, 0],
    [0, 0, 0, 0, 0, 0, 0, 2],
    // e2
    [0, 0, 0, 2, 0, 0, 0, 0],
    [0, 0, 2, 0, 0, 0, 0, 0],
    [0, 2, 0, 0, 0, 0, 0, 0],
    [2, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 2, 0, 0],
    [0, 0, 0, 0, 2, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, -2],
    [0, 0, 0, 0, 0, 0, -2, 0],
    // e3
    [2, 0, 0, 0, 0, 0, 0, 0],
    [0, 2, 0, 0, 0, 0, 0, 0],
    [0, 0, 2, 0, 0, 0, 0, 0],
    [0, 0, 0, 2, 0, 0, 0, 0],
    [0, 0, 0, 0, 2, 0, 0, 0],
    [0, 0, 0, 0, 0, 2, 0, 0],
    [0, 0, 0, 0, 0, 0, 2, 0],
    [0, 0, 0, 0, 0, 0, 0, 2],
    // e4
    [0, 2, 0, 0, 0, 0, 0, 0],
    [2, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 2, 0, 0, 0, 0],
    [0, 0, 2, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, -2, 0, 0],
    [0, 0, 0, 0, -2, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, -2],
    [0, 0, 0, 0, 0, 0, -2, 0],
    // e5
    [0, 0, 0, 0, 2, 0, 0, 0],
    [0, 0, 0, 0, 0, 2, 0, 0],
    [0, 0, 0, 0, 2, 0, 0, 0],
    [0, 0, 0, 0, 0, 2, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [0, -1, 0, 1, 0, 0, 0, 0],
    [-1, 0, 1, 0, 0, 0, 0, 0],
    // e6
    [0, 0, 0, 0, 0, 2, 0, 0],
    [0, 0, 0, 0, 2, 0, 0, 0],
    [0, 0, 0, 0, 0, 2, 0, 0],
    [0, 0, 0, 0, 2, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, -1, 0, 0, 0, 0, 0],
    [0, 1, 0, -1, 0, 0, 0, 0],
    // e7
    [0, 0, 0, 0, 0, 0, -2, 0],
    [0, 0, 0, 0, 0, 0, 0, -2],
    [0, 0, 0, 0, 0, 0, 2, 0],
    [0, 0, 0, 0, 0, 0, 0, 2],
    [0, -1, 0, -1, 0, 0, 0, 0],
    [-1, 0, -1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    // e8
    [0, 0, 0, 0, 0, 0, 0, -2],
    [0, 0, 0, 0, 0, 0, -2, 0],
    [0, 0, 0, 0, 0, 0, 0, 2],
    [0, 0, 0, 0, 0, 0, 2, 0],
    [1, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
];

/// The tabulated multiplication of A.
pub fn lambda_table() -> Tensor3 {
    Tensor3::from_fn(8, |i, j, k| linalg::re(LAMBDA_HALVES[i * 8 + j][k] as f64 / 2.0))
}

/// Δ(e_a^{mn}) = Σ_p e_a^{mp} ⊗ e_a^{pn} over valid pairs.
pub fn comult_table() -> Tensor3 {
    let b = basis();
    let idx = |s: usize, m: usize, n: usize| b.iter().position(|x| *x == BasisElement { sector: s, m, n });
    let mut t = Tensor3::zeros(8);
    for (i, x) in b.iter().enumerate() {
        for p in 0..3 {
            if let (Some(j), Some(k)) = (idx(x.sector, x.m, p), idx(x.sector, p, x.n)) {
                t.add(i, j, k, ONE);
            }
        }
    }
    t
}

/// e_5* = e_8, e_6* = −e_7, e_I* = e_I for I ≤ 4.
pub fn star_matrix() -> CMat {
    let mut s = linalg::zeros(8, 8);
    for i in 0..4 {
        s[(i, i)] = ONE;
    }
    s[(4, 7)] = ONE;
    s[(7, 4)] = ONE;
    s[(5, 6)] = -ONE;
    s[(6, 5)] = -ONE;
    s
}

pub fn algebra() -> PreBialgebra {
    let mut u = crate::linalg::CVec::zeros(8);
    u[2] = ONE;
    PreBialgebra::new((1..=8).map(|i| format!("e_{i}")).collect(), lambda_table(), Some(comult_table()))
        .and_then(|p| p.with_unit(u))
        .and_then(|p| p.with_star(star_matrix()))
        .expect("fixture is consistent")
}

/// The tabulated closed two-site operators O^{(2)}(e_I).
pub fn two_site_operators() -> Vec<CMat> {
    let x = real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let id = linalg::eye(2);
    let xx = linalg::kron(&x, &x);
    let diag = |d: [f64; 4]| CMat::from_diagonal(&crate::linalg::CVec::from_iterator(4, d.iter().map(|&v| linalg::re(v))));
    vec![
        -linalg::kron(&z(), &id),
        linalg::kron(&z(), &z()),
        linalg::kron(&id, &id),
        -linalg::kron(&id, &z()),
        diag([1.0, -1.0, 0.0, 0.0]) * &xx,
        diag([1.0, 1.0, 0.0, 0.0]) * &xx,
        diag([0.0, 0.0, -1.0, -1.0]) * &xx,
        diag([0.0, 0.0, -1.0, 1.0]) * &xx,
    ]
}

pub fn phi1() -> Representation {
    let mz = -z();
    let id = linalg::eye(2);
    Representation::new(vec![mz.clone(), id.clone(), id, mz, e(0, 1), e(0, 1), -e(1, 0), e(1, 0)]).expect("fixed shapes")
}

pub fn phi2() -> Representation {
    let id = linalg::eye(2);
    Representation::new(vec![-z(), -id.clone(), id, z(), -e(0, 1), e(0, 1), -e(1, 0), -e(1, 0)]).expect("fixed shapes")
}

fn dual_rep(d: usize, entries: &[(usize, CMat)]) -> Representation {
    let mut m = vec![linalg::zeros(d, d); 8];
    for (i, x) in entries {
        m[*i] = x.clone();
    }
    Representation::new(m).expect("fixed shapes")
}

/// ψ_{P_0}: e^1 ↦ E_01, e^2 ↦ E_02, e^3 ↦ E_11, e^4 ↦ E_12 on C^3.
pub fn psi_p0() -> Representation {
    dual_rep(3, &[(0, linalg::unit(3, 0, 1)), (1, linalg::unit(3, 0, 2)), (2, linalg::unit(3, 1, 1)), (3, linalg::unit(3, 1, 2))])
}

pub fn psi_p1() -> Representation {
    dual_rep(2, &[(0, e(0, 1)), (2, e(1, 1))])
}

pub fn psi_p2() -> Representation {
    dual_rep(2, &[(4, e(0, 0)), (5, e(0, 1)), (6, e(1, 0)), (7, e(1, 1))])
}

pub fn psi_s0() -> Representation {
    dual_rep(1, &[])
}

pub fn psi_s1() -> Representation {
    dual_rep(1, &[(2, linalg::eye(1))])
}

pub fn psi_s2() -> Representation {
    psi_p2()
}

/// Labelled catalog over the unitized dual, simples first.
pub fn dual_catalog() -> Vec<(String, Representation)> {
    vec![
        ("S0".into(), psi_s0().unitized()),
        ("S1".into(), psi_s1().unitized()),
        ("S2".into(), psi_s2().unitized()),
        ("P0".into(), psi_p0().unitized()),
        ("P1".into(), psi_p1().unitized()),
        ("P2".into(), psi_p2().unitized()),
    ]
}

/// Basis change f_I = Σ_J R_IJ e_J onto matrix units of M_2 ⊕ M_2.
pub fn r_matrix() -> CMat {
    real_matrix(&[
        &[-1.0, 1.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 2.0, 2.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -2.0, 2.0],
        &[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        &[-1.0, -1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, -2.0, 2.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -2.0, -2.0],
        &[1.0, -1.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0],
    ]) * linalg::re(0.25)
}

/// Structure constants of M_2 ⊕ M_2 on matrix units, f_{4a + 2r + c} = E^{(a)}_{rc}.
pub fn m2_plus_m2() -> Tensor3 {
    let idx = |a: usize, r: usize, c: usize| 4 * a + 2 * r + c;
    let mut t = Tensor3::zeros(8);
    for a in 0..2 {
        for r in 0..2 {
            for s in 0..2 {
                for c in 0..2 {
                    t.set(idx(a, r, s), idx(a, s, c), idx(a, r, c), ONE);
                }
            }
        }
    }
    t
}

/// Integer map e_I ↦ Σ_a T_Ia b_a onto the Z_2 twisted group algebra (b index g·4 + k·2 + h).
pub fn group_isomorphism() -> CMat {
    real_matrix(&[
        &[-1.0, -1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        &[1.0, -1.0, -1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        &[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        &[-1.0, 1.0, -1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 1.0],
        &[0.0, 0.0, 0.0, 0.0, -1.0, -1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
    ])
}

/// Residuals of T as an algebra map, coalgebra map and unit map between two pre-bialgebras.
pub fn isomorphism_residuals(p: &PreBialgebra, q: &PreBialgebra, t: &CMat) -> (f64, f64, f64) {
    let n = p.dim();
    let mut mult: f64 = 0.0;
    let mut comult: f64 = 0.0;
    let img = |i: usize| -> crate::linalg::CVec { t.row(i).transpose().into_owned() };
    for i in 0..n {
        for j in 0..n {
            let lhs = t.transpose() * p.product(&p.basis(i), &p.basis(j));
            let rhs = q.product(&img(i), &img(j));
            mult = mult.max((lhs - rhs).camax());
        }
        if let (Some(dp), Some(dq)) = (p.coproduct(&p.basis(i)), q.coproduct(&img(i))) {
            let lhs = t.transpose() * dp * t;
            comult = comult.max(linalg::max_diff(&lhs, &dq));
        }
    }
    let unit = match (p.unit(), q.unit()) {
        (Some(u), Some(v)) => (t.transpose() * u - v).camax(),
        _ => f64::INFINITY,
    };
    (mult, comult, unit)
}

/// Coordinates with only the listed entries nonzero.
pub fn element(entries: &[(usize, f64)]) -> crate::linalg::CVec {
    let mut v = crate::linalg::CVec::from_element(8, ZERO);
    for &(i, x) in entries {
        v[i] = C64::new(x, 0.0);
    }
    v
}

/// Outcome of rebuilding the CZY MPOs from the Z_2 group-cocycle pre-bialgebra.
#[derive(Clone, Debug)]
pub struct ReconstructionReport {
    /// φ_1 transported along T, as a representation of the group algebra.
    pub phi_residual: f64,
    /// Transported ψ_{P_0} and ψ_{S_2}, as representations of the unitized dual.
    pub psi_residual: f64,
    /// Largest difference between closed operators of the rebuilt and fixture families for N ≤ n_max.
    pub closure_residual: f64,
    pub class: Option<crate::mpo_algebra::CohomologyClass>,
    pub associator_residual: f64,
}

/// Transports φ_1, ψ_{P_0}, ψ_{S_2} through T onto the group pre-bialgebra (A, Δ), rebuilds the
/// MPO tensors, closes them and recomputes the associator class from solver fusion tensors.
pub fn reconstruct_from_group(n_max: usize, tol: f64, cap: crate::tensor_core::Cap) -> Result<ReconstructionReport> {
    use crate::models::group::{group_prebialgebra, ThreeCocycle};
    use crate::prebialgebra::{dual, unitize};
    let g = group_prebialgebra(&ThreeCocycle::z2_nontrivial())?;
    let ag = &g.twisted;
    let t = group_isomorphism();
    let t_inv = linalg::inverse(&t)?;
    let phi = phi1();
    let phi_g = Representation::new(
        (0..8).map(|a| (0..8).fold(linalg::zeros(2, 2), |acc, i| acc + phi.matrix(i) * t_inv[(a, i)])).collect(),
    )?;
    let transport = |psi: &Representation| -> Result<Representation> {
        let d = psi.dim();
        let mut m: Vec<CMat> = (0..8).map(|a| (0..8).fold(linalg::zeros(d, d), |acc, j| acc + psi.matrix(j) * t[(j, a)])).collect();
        m.push(linalg::eye(d));
        Representation::new(m)
    };
    let dual_plus = unitize(&dual(ag)?);
    let psi_p0 = transport(&psi_p0())?;
    let psi_s2 = transport(&psi_s2())?;
    let phi_residual = phi_g.homomorphism_residual(ag.mult());
    let psi_residual = psi_p0.homomorphism_residual(dual_plus.mult()).max(psi_s2.homomorphism_residual(dual_plus.mult()));
    let t0 = crate::rfp::build_mpo_tensor(&phi_g, &psi_p0)?;
    let t1 = crate::rfp::build_mpo_tensor(&phi_g, &psi_s2)?;
    let rebuilt = MpoFamily::new("czy-from-group", FiniteGroup::cyclic(2), vec![t0, t1], basis())?;
    let fixture = family();
    let mut closure_residual: f64 = 0.0;
    for l in 1..=n_max {
        for i in 0..8 {
            closure_residual = closure_residual.max(linalg::max_diff(&rebuilt.closed(i, l, cap)?, &fixture.closed(i, l, cap)?));
        }
    }
    let fusions = solve_family_fusions(&rebuilt, &|_, _| None, tol, 0)?;
    let assoc = crate::mpo_algebra::associator(&rebuilt, &fusions, tol)?;
    Ok(ReconstructionReport { phi_residual, psi_residual, closure_residual, class: assoc.class, associator_residual: assoc.max_residual() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_core::{mpo_close, Cap};

    #[test]
    fn tabulated_two_site_operators_match_closure() {
        let f = family();
        for (i, o) in two_site_operators().iter().enumerate() {
            assert!(linalg::max_diff(&f.closed(i, 2, Cap::default()).unwrap(), o) < 1e-14, "e{}", i + 1);
        }
    }

    #[test]
    fn squared_symmetry_is_identity() {
        for n in 2..=6 {
            let o = mpo_close(&a0(), &linalg::unit(3, 1, 1), n, Cap::default()).unwrap();
            assert!(linalg::max_diff(o.matrix(), &linalg::eye(1 << n)) < 1e-14);
        }
    }

    #[test]
    fn irreps_are_representations() {
        let l = lambda_table();
        assert!(phi1().homomorphism_residual(&l) < 1e-14);
        assert!(phi2().homomorphism_residual(&l) < 1e-14);
    }

    #[test]
    fn dual_reps_are_representations() {
        let ad = crate::prebialgebra::dual(&algebra()).unwrap();
        for (name, r) in dual_catalog() {
            let u = crate::prebialgebra::unitize(&ad);
            assert!(r.homomorphism_residual(u.mult()) < 1e-14, "{name}");
        }
    }

    #[test]
    fn r_gives_matrix_units() {
        let (f, _) = crate::prebialgebra::change_basis(&algebra(), &r_matrix()).unwrap();
        assert!(f.mult().max_diff(&m2_plus_m2()) < 1e-14);
    }

    #[test]
    fn group_reconstruction_matches_fixture() {
        let r = reconstruct_from_group(4, 1e-9, Cap::default()).unwrap();
        assert!(r.phi_residual < 1e-12 && r.psi_residual < 1e-12, "{r:?}");
        assert!(r.closure_residual < 1e-12);
        assert!(!r.class.unwrap().is_trivial());
    }
}
