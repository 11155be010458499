//! Qubit chains: Paulis, CZ/CNOT, the Levin-Gu, H_2 and XX Hamiltonians and their U(1) charges.
//!
//! Sites are 0-indexed and site 0 is the most significant tensor factor.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, C64, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMat {
        let m = |a: C64, b: C64, c: C64, d: C64| CMat::from_row_slice(2, 2, &[a, b, c, d]);
        match self {
            Pauli::I => m(ONE, ZERO, ZERO, ONE),
            Pauli::X => m(ZERO, ONE, ONE, ZERO),
            Pauli::Y => m(ZERO, -I, I, ZERO),
            Pauli::Z => m(ONE, ZERO, ZERO, -ONE),
        }
    }
}

pub fn hadamard() -> CMat {
    linalg::real_matrix(&[&[1.0, 1.0], &[1.0, -1.0]]) * linalg::re(std::f64::consts::FRAC_1_SQRT_2)
}

/// Tensor product of single-site operators placed on the given sites.
pub fn site_ops(n: usize, ops: &[(usize, CMat)]) -> CMat {
    let mut factors = vec![linalg::eye(2); n];
    for (s, op) in ops {
        factors[*s] = &factors[*s] * op;
    }
    linalg::kron_all(&factors)
}

pub fn pauli_string(n: usize, ops: &[(usize, Pauli)]) -> CMat {
    let v: Vec<(usize, CMat)> = ops.iter().map(|&(s, p)| (s, p.matrix())).collect();
    site_ops(n, &v)
}

fn bit(x: usize, n: usize, s: usize) -> usize {
    (x >> (n - 1 - s)) & 1
}

/// Controlled-Z between sites i and j (diagonal).
pub fn cz(n: usize, i: usize, j: usize) -> CMat {
    let dim = 1 << n;
    CMat::from_diagonal(&CVec::from_fn(dim, |x, _| if bit(x, n, i) & bit(x, n, j) == 1 { -ONE } else { ONE }))
}

/// CNOT with control c and target t.
pub fn cnot(n: usize, c: usize, t: usize) -> CMat {
    let dim = 1 << n;
    let mut m = linalg::zeros(dim, dim);
    for x in 0..dim {
        let y = if bit(x, n, c) == 1 { x ^ (1 << (n - 1 - t)) } else { x };
        m[(y, x)] = ONE;
    }
    m
}

fn product(n: usize, ms: impl IntoIterator<Item = CMat>) -> CMat {
    ms.into_iter().fold(linalg::eye(1 << n), |acc, m| acc * m)
}

/// ∏ CZ_{i,i+1} over the periodic chain.
pub fn cz_ring(n: usize) -> CMat {
    product(n, (0..n).map(|i| cz(n, i, (i + 1) % n)))
}

/// U_CZY = ∏ CZ_{i,i+1} ∏ Z_i X_i.
pub fn u_czy(n: usize) -> CMat {
    let zx = Pauli::Z.matrix() * Pauli::X.matrix();
    cz_ring(n) * site_ops(n, &(0..n).map(|i| (i, zx.clone())).collect::<Vec<_>>())
}

/// U_CZX = ∏ CZ_{i,i+1} ∏ X_i.
pub fn u_czx(n: usize) -> CMat {
    cz_ring(n) * pauli_string(n, &(0..n).map(|i| (i, Pauli::X)).collect::<Vec<_>>())
}

/// U = ∏_{pairs} CZ_{2i-1, 2i} X_{2i-1}, pairing odd sites with their right neighbour.
pub fn u_lg_to_h2(n: usize) -> CMat {
    product(n, (1..=n / 2).map(|i| cz(n, 2 * i - 1, (2 * i) % n) * pauli_string(n, &[(2 * i - 1, Pauli::X)])))
}

/// Hadamards on odd sites followed by X, Z, Y on sites 4i, 4i+2, 4i+3.
pub fn u_tilde(n: usize) -> CMat {
    let h: Vec<(usize, CMat)> = (0..n).filter(|s| s % 2 == 1).map(|s| (s, hadamard())).collect();
    let mut paulis = Vec::new();
    for i in 0..n / 4 {
        paulis.extend([(4 * i, Pauli::X), (4 * i + 2, Pauli::Z), (4 * i + 3, Pauli::Y)]);
    }
    site_ops(n, &h) * pauli_string(n, &paulis)
}

/// The unitary as printed: Hadamards on odd sites, X on sites 4i and 4i+1.
pub fn u_tilde_as_printed(n: usize) -> CMat {
    let h: Vec<(usize, CMat)> = (0..n).filter(|s| s % 2 == 1).map(|s| (s, hadamard())).collect();
    let mut paulis = Vec::new();
    for i in 0..n / 4 {
        paulis.extend([(4 * i, Pauli::X), (4 * i + 1, Pauli::X)]);
    }
    site_ops(n, &h) * pauli_string(n, &paulis)
}

/// u = exp(iπZ/4).
pub fn u_phase() -> CMat {
    let w = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    CMat::from_diagonal(&CVec::from_vec(vec![w, w.conj()]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    LevinGu,
    H2,
    Xx,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "levin_gu" | "levin-gu" | "lg" => Ok(Model::LevinGu),
            "h2" => Ok(Model::H2),
            "xx" => Ok(Model::Xx),
            other => Err(Error::Parameter(format!("unknown model {other}"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::LevinGu => "levin_gu",
            Model::H2 => "h2",
            Model::Xx => "xx",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SpinChainOperator {
    pub n: usize,
    pub matrix: CMat,
    pub label: String,
}

impl SpinChainOperator {
    pub fn new(n: usize, matrix: CMat, label: impl Into<String>) -> Result<Self> {
        if matrix.shape() != (1 << n, 1 << n) {
            return Err(Error::Shape(format!("operator on {n} sites must be {0}x{0}", 1 << n)));
        }
        Ok(SpinChainOperator { n, matrix, label: label.into() })
    }

    pub fn hermitian_residual(&self) -> f64 {
        linalg::max_diff(&self.matrix, &self.matrix.adjoint())
    }
}

pub fn hamiltonian(model: Model, n: usize) -> Result<SpinChainOperator> {
    if n < 3 {
        return Err(Error::Parameter(format!("periodic chain needs N >= 3, got {n}")));
    }
    if n > 14 {
        return Err(Error::Size { what: "dense Hamiltonian sites", needed: n, cap: 14 });
    }
    use Pauli::*;
    let dim = 1 << n;
    let mut h = linalg::zeros(dim, dim);
    for i in 0..n {
        let l = (i + n - 1) % n;
        let r = (i + 1) % n;
        match model {
            Model::LevinGu => {
                h += pauli_string(n, &[(i, X)]);
                h -= pauli_string(n, &[(l, Z), (i, X), (r, Z)]);
            }
            Model::H2 => {
                h += pauli_string(n, &[(i, X), (r, Z)]);
                h -= pauli_string(n, &[(i, Z), (r, X)]);
            }
            Model::Xx => {
                h += pauli_string(n, &[(i, X), (r, X)]);
                h += pauli_string(n, &[(i, Z), (r, Z)]);
            }
        }
    }
    SpinChainOperator::new(n, h, model.to_string())
}

#[derive(Debug, Clone)]
pub struct Charges {
    pub q_m: SpinChainOperator,
    pub q_w: SpinChainOperator,
    pub q_m_tilde: SpinChainOperator,
    pub q_w_tilde: SpinChainOperator,
    /// Largest of the four commutator norms with the respective Hamiltonians.
    pub commutator_residual: f64,
}

fn zz_sum(n: usize) -> CMat {
    let dim = 1 << n;
    let mut s = linalg::zeros(dim, dim);
    for i in 0..n {
        s += pauli_string(n, &[(i, Pauli::Z), ((i + 1) % n, Pauli::Z)]);
    }
    s
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Q_M, Q_W commute with H_2 and Q̃_M, Q̃_W with the Levin-Gu Hamiltonian.
pub fn charges(n: usize, tol: f64) -> Result<Charges> {
    if !n.is_multiple_of(2) || n < 4 {
        return Err(Error::Parameter(format!("charges need even N >= 4, got {n}")));
    }
    use Pauli::*;
    let dim = 1 << n;
    let id = linalg::eye(dim);
    let quarter = linalg::re(0.25);
    let mut ysum = linalg::zeros(dim, dim);
    for i in 0..n {
        ysum += pauli_string(n, &[(i, Y)]);
    }
    let q_m = ysum * linalg::re(0.5);
    let zz = zz_sum(n);
    let q_w = &id * linalg::re(n as f64 / 4.0) + &zz * quarter;
    let mut qmt = linalg::zeros(dim, dim);
    for i in 1..=n / 2 {
        let (a, b) = (2 * i - 1, (2 * i) % n);
        qmt += pauli_string(n, &[(a, Z), (b, Y)]);
        qmt -= pauli_string(n, &[(a, Y), (b, Z)]);
    }
    let q_m_tilde = qmt * linalg::re(0.5);
    let q_w_tilde = &id * linalg::re(n as f64 / 4.0) - &zz * quarter;

    let h2 = hamiltonian(Model::H2, n)?.matrix;
    let hlg = hamiltonian(Model::LevinGu, n)?.matrix;
    let res = [
        linalg::max_abs(&commutator(&h2, &q_m)),
        linalg::max_abs(&commutator(&h2, &q_w)),
        linalg::max_abs(&commutator(&hlg, &q_m_tilde)),
        linalg::max_abs(&commutator(&hlg, &q_w_tilde)),
    ];
    let worst = res.iter().cloned().fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::Model(format!("charge does not commute with its Hamiltonian: {worst:e}")));
    }
    Ok(Charges {
        q_m: SpinChainOperator::new(n, q_m, "Q_M")?,
        q_w: SpinChainOperator::new(n, q_w, "Q_W")?,
        q_m_tilde: SpinChainOperator::new(n, q_m_tilde, "Q~_M")?,
        q_w_tilde: SpinChainOperator::new(n, q_w_tilde, "Q~_W")?,
        commutator_residual: worst,
    })
}

/// exp(iπQ) for a Hermitian charge.
pub fn z2_from_charge(q: &SpinChainOperator) -> CMat {
    linalg::expi_hermitian(&q.matrix, std::f64::consts::PI)
}

/// Residuals of the unitary-equivalence and charge identities at size n.
#[derive(Debug, Clone, Default)]
pub struct EquivalenceResiduals {
    pub lg_to_h2: f64,
    pub h2_to_xx: Option<f64>,
    pub h2_to_xx_as_printed: Option<f64>,
    pub exp_q_m: f64,
    pub exp_q_w: f64,
    pub u_czy_factorization: f64,
    pub z2_commutator: f64,
    pub generator_commutator: f64,
}

pub fn equivalence_residuals(n: usize, tol: f64) -> Result<EquivalenceResiduals> {
    let hlg = hamiltonian(Model::LevinGu, n)?.matrix;
    let h2 = hamiltonian(Model::H2, n)?.matrix;
    let u = u_lg_to_h2(n);
    let lg_to_h2 = linalg::max_diff(&(u.adjoint() * &hlg * &u), &h2);
    let (h2_to_xx, h2_to_xx_as_printed) = if n.is_multiple_of(4) {
        let hxx = hamiltonian(Model::Xx, n)?.matrix;
        let ut = u_tilde(n);
        let up = u_tilde_as_printed(n);
        (
            Some(linalg::max_diff(&(ut.adjoint() * &h2 * &ut), &hxx)),
            Some(linalg::max_diff(&(up.adjoint() * &h2 * &up), &hxx)),
        )
    } else {
        (None, None)
    };
    let q = charges(n, tol)?;
    let em = z2_from_charge(&q.q_m_tilde);
    let ew = z2_from_charge(&q.q_w_tilde);
    let all_x = pauli_string(n, &(0..n).map(|i| (i, Pauli::X)).collect::<Vec<_>>());
    let zs = site_ops(n, &(0..n).map(|i| (i, Pauli::Z.matrix())).collect::<Vec<_>>());
    Ok(EquivalenceResiduals {
        lg_to_h2,
        h2_to_xx,
        h2_to_xx_as_printed,
        exp_q_m: linalg::max_diff(&em, &all_x),
        exp_q_w: linalg::max_diff(&ew, &(cz_ring(n) * zs)),
        u_czy_factorization: linalg::max_diff(&(&ew * &em), &u_czy(n)),
        z2_commutator: linalg::max_abs(&commutator(&em, &ew)),
        generator_commutator: linalg::max_abs(&commutator(&q.q_m_tilde.matrix, &q.q_w_tilde.matrix)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::czy;
    use crate::tensor_core::{mpo_close, Cap};

    #[test]
    fn xx_matches_direct_sum() {
        let x = Pauli::X.matrix();
        let z = Pauli::Z.matrix();
        let id = linalg::eye(2);
        let mut h = linalg::zeros(16, 16);
        for i in 0..4 {
            for p in [&x, &z] {
                let mut f = vec![id.clone(); 4];
                f[i] = p.clone();
                f[(i + 1) % 4] = p.clone();
                h += linalg::kron_all(&f);
            }
        }
        assert!(linalg::max_diff(&hamiltonian(Model::Xx, 4).unwrap().matrix, &h) < 1e-14);
    }

    #[test]
    fn small_chain_rejected() {
        assert!(matches!(hamiltonian(Model::LevinGu, 2), Err(Error::Parameter(_))));
    }

    #[test]
    fn czy_mpo_closes_to_u_czy() {
        for n in 2..=6 {
            let o = mpo_close(&czy::a1(), &linalg::eye(2), n, Cap::default()).unwrap();
            assert!(linalg::max_diff(o.matrix(), &u_czy(n)) < 1e-13, "N={n}");
        }
    }

    #[test]
    fn identities_at_four_sites() {
        let r = equivalence_residuals(4, 1e-10).unwrap();
        assert!(r.lg_to_h2 < 1e-10);
        assert!(r.exp_q_m < 1e-10 && r.exp_q_w < 1e-10);
        assert!(r.u_czy_factorization < 1e-10);
        assert!(r.z2_commutator < 1e-10);
        assert!(r.generator_commutator > 1e-3);
    }

    #[test]
    fn hamiltonians_hermitian() {
        for m in [Model::LevinGu, Model::H2, Model::Xx] {
            assert!(hamiltonian(m, 5).unwrap().hermitian_residual() < 1e-15);
        }
    }
}
