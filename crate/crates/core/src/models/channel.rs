//! Kraus channels relating ρ_CZY to the double-semion boundary state.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::models::spin::{self, u_czx, u_czy, u_phase};

#[derive(Debug, Clone)]
pub struct QuantumChannel {
    kraus: Vec<CMat>,
    d_in: usize,
    d_out: usize,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::Shape("channel needs at least one Kraus operator".into()))?;
        let (d_out, d_in) = first.shape();
        if kraus.iter().any(|k| k.shape() != (d_out, d_in)) {
            return Err(Error::Shape("Kraus operators must share a shape".into()));
        }
        Ok(QuantumChannel { kraus, d_in, d_out })
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// max |Σ K†K − 𝟙|.
    pub fn trace_preserving_residual(&self) -> f64 {
        let s = self.kraus.iter().fold(linalg::zeros(self.d_in, self.d_in), |acc, k| acc + k.adjoint() * k);
        linalg::max_diff(&s, &linalg::eye(self.d_in))
    }

    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::Shape(format!("channel input must be {0}x{0}", self.d_in)));
        }
        Ok(self.kraus.iter().fold(linalg::zeros(self.d_out, self.d_out), |acc, k| acc + k * rho * k.adjoint()))
    }

    /// Channel on n copies, Kraus set of all Kronecker products.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        let mut ks = vec![linalg::eye(1)];
        for _ in 0..n {
            ks = ks.iter().flat_map(|a| self.kraus.iter().map(move |k| linalg::kron(a, k))).collect();
        }
        QuantumChannel::new(ks)
    }
}

fn ket(b: usize) -> CMat {
    let mut v = linalg::zeros(2, 1);
    v[(b, 0)] = linalg::ONE;
    v
}

/// E(ρ) = CNOT(ρ ⊗ |0⟩⟨0|)CNOT, one Kraus operator CNOT(𝟙 ⊗ |0⟩).
pub fn encoder() -> QuantumChannel {
    let k = spin::cnot(2, 0, 1) * linalg::kron(&linalg::eye(2), &ket(0));
    QuantumChannel::new(vec![k]).expect("fixed shape")
}

/// R(ρ) = Tr_2[CNOT ρ CNOT].
pub fn recovery() -> QuantumChannel {
    let cx = spin::cnot(2, 0, 1);
    let ks = (0..2).map(|m| linalg::kron(&linalg::eye(2), &ket(m).adjoint()) * &cx).collect();
    QuantumChannel::new(ks).expect("fixed shape")
}

/// u on even sites and u† on odd sites when N ≡ 2 mod 4, u everywhere otherwise.
pub fn phase_layer(n: usize) -> CMat {
    let u = u_phase();
    let alternating = n % 4 == 2;
    let fs: Vec<CMat> = (0..n).map(|i| if alternating && i % 2 == 1 { u.adjoint() } else { u.clone() }).collect();
    linalg::kron_all(&fs)
}

pub fn rho_czy(n: usize) -> CMat {
    let dim = 1 << n;
    (linalg::eye(dim) + u_czy(n)) * linalg::re(1.0 / dim as f64)
}

pub fn rho_czx(n: usize) -> CMat {
    let dim = 1 << n;
    (linalg::eye(dim) + u_czx(n)) * linalg::re(1.0 / dim as f64)
}

#[derive(Debug, Clone)]
pub struct ChannelReport {
    pub n: usize,
    pub alternating_phase: bool,
    /// |E^{⊗N}(u ρ_CZY u†) − E^{⊗N}(ρ_CZX)|.
    pub forward: f64,
    /// |u† R^{⊗N}(ρ_bdy) u − ρ_CZY|.
    pub recovery: f64,
    /// |u ρ_CZY u† − ρ_CZX|.
    pub u_relation: f64,
    pub encoder_tp: f64,
    pub recovery_tp: f64,
    pub pass: bool,
}

pub fn semion_channel_check(n: usize, tol: f64) -> Result<ChannelReport> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Parameter(format!("channel check needs even N, got {n}")));
    }
    if n > 5 {
        return Err(Error::Size { what: "semion channel sites", needed: n, cap: 5 });
    }
    let u = phase_layer(n);
    let rho = rho_czy(n);
    let rotated = &u * &rho * u.adjoint();
    let e = encoder().tensor_power(n)?;
    let r = recovery().tensor_power(n)?;
    let bdy = e.apply(&rho_czx(n))?;
    let forward = linalg::max_diff(&e.apply(&rotated)?, &bdy);
    let back = u.adjoint() * r.apply(&bdy)? * &u;
    let recovery_res = linalg::max_diff(&back, &rho);
    let u_relation = linalg::max_diff(&rotated, &rho_czx(n));
    let encoder_tp = encoder().trace_preserving_residual();
    let recovery_tp = recovery().trace_preserving_residual();
    let pass = forward < tol && recovery_res < tol && encoder_tp == 0.0 && recovery_tp == 0.0;
    Ok(ChannelReport {
        n,
        alternating_phase: n % 4 == 2,
        forward,
        recovery: recovery_res,
        u_relation,
        encoder_tp,
        recovery_tp,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kraus_sets_trace_preserving() {
        assert_eq!(encoder().trace_preserving_residual(), 0.0);
        assert_eq!(recovery().trace_preserving_residual(), 0.0);
    }

    #[test]
    fn recovery_inverts_encoder() {
        let rho = rho_czy(2);
        let back = recovery().tensor_power(2).unwrap().apply(&encoder().tensor_power(2).unwrap().apply(&rho).unwrap()).unwrap();
        assert!(linalg::max_diff(&back, &rho) < 1e-15);
    }

    #[test]
    fn four_sites() {
        let r = semion_channel_check(4, 1e-10).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.u_relation < 1e-12);
    }

    #[test]
    fn two_sites_alternating() {
        let r = semion_channel_check(2, 1e-10).unwrap();
        assert!(r.alternating_phase);
        assert!(r.pass, "{r:?}");
    }
}
