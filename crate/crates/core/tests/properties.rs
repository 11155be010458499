use proptest::prelude::*;

use mposym::io;
use mposym::linalg::{self, CMat, C64};
use mposym::models::czy;
use mposym::models::group::{coboundary, ThreeCocycle};
use mposym::mpo_algebra::{associator, cocycle_class};
use mposym::prebialgebra as pb;
use mposym::rep_theory as rt;
use mposym::MpoTensor;

fn c64() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn phase() -> impl Strategy<Value = C64> {
    (0.0f64..std::f64::consts::TAU).prop_map(|t| C64::from_polar(1.0, t))
}

/// 3·𝟙 plus a perturbation of norm at most n/2, so well conditioned.
fn near_identity(n: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec(c64(), n * n).prop_map(move |v| CMat::from_vec(n, n, v) * linalg::re(0.5) + linalg::eye(n) * linalg::re(3.0))
}

fn mpo_tensor() -> impl Strategy<Value = MpoTensor> {
    (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(d_out, d_in, bond)| {
        prop::collection::vec(c64(), d_out * d_in * bond * bond).prop_map(move |v| {
            let slices = v.chunks(bond * bond).map(|c| CMat::from_vec(bond, bond, c.to_vec())).collect();
            MpoTensor::from_slices(d_out, d_in, slices).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn axioms_survive_basis_change(r in near_identity(8)) {
        let (b, _) = pb::change_basis(&czy::algebra(), &r).unwrap();
        let rep = pb::check_axioms(&b, 1e-9);
        for c in rep.checks.iter().filter(|c| !c.name.starts_with("star")) {
            prop_assert!(c.residual < 1e-9, "{} residual {}", c.name, c.residual);
        }
    }

    #[test]
    fn group_algebra_axioms_survive_basis_change(r in near_identity(3)) {
        let (b, _) = pb::change_basis(&pb::cyclic_group_algebra(3), &r).unwrap();
        prop_assert!(pb::check_axioms(&b, 1e-9).all_pass());
        prop_assert!(pb::find_unit(&b, 1e-9).unwrap().is_some());
    }

    #[test]
    fn omega_gauge_invariant(betas in prop::collection::vec((0.5f64..2.0, phase()), 4)) {
        let family = czy::family();
        let base = czy::fusions(1e-9).unwrap();
        let t0 = associator(&family, &base, 1e-9).unwrap();
        let scaled = base
            .iter()
            .zip(&betas)
            .map(|((k, s), (m, p))| (*k, s.rescaled(p * *m)))
            .collect();
        let t1 = associator(&family, &scaled, 1e-9).unwrap();
        let d = t0.omega.iter().zip(&t1.omega).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(d < 1e-9, "omega moved by {d}");
        prop_assert_eq!(t0.class.map(|c| c.p), t1.class.map(|c| c.p));
    }

    #[test]
    fn class_invariant_under_coboundary(n in 2usize..5, p in 0usize..5, beta in prop::collection::vec(phase(), 25)) {
        let p = p % n;
        let w = ThreeCocycle::zn(n, p);
        let g = w.group().clone();
        let db = coboundary(&beta[..n * n], &g);
        let twisted: Vec<C64> = w.values().iter().zip(&db).map(|(a, b)| a * b).collect();
        let c = cocycle_class(&twisted, &g, 1e-9).unwrap();
        prop_assert_eq!(c.p, p);
    }

    #[test]
    fn tensor_product_dims_conserved(i in 0usize..5, j in 0usize..5, seed in 0u64..8) {
        let d = pb::dual(&czy::algebra()).unwrap();
        let cat = mposym::report::fusion_catalog();
        let t = rt::tensor_representation(&cat[i].1, &cat[j].1, &d).unwrap();
        prop_assert_eq!(t.dim(), cat[i].1.dim() * cat[j].1.dim());
        let dec = rt::decompose_module(&t, &cat, seed).unwrap();
        prop_assert_eq!(dec.total_dim(), t.dim());
    }

    #[test]
    fn mpo_json_round_trip(t in mpo_tensor()) {
        let s = io::mpo_to_json(&t, Some("t")).unwrap();
        let back = io::parse_mpo(&s).unwrap();
        prop_assert!(back.max_diff(&t) <= 1e-15);
    }

    #[test]
    fn algebra_json_round_trip(r in near_identity(3)) {
        let (b, _) = pb::change_basis(&pb::cyclic_group_algebra(3), &r).unwrap();
        let back = io::parse_prebialgebra(&io::prebialgebra_to_json(&b).unwrap()).unwrap();
        prop_assert!(back.mult().max_diff(b.mult()) <= 1e-12);
    }

    #[test]
    fn parsers_reject_garbage_without_panicking(s in ".{0,200}") {
        let _ = io::parse_mpo(&s);
        let _ = io::parse_group(&s);
        let _ = io::parse_cocycle(&s, None);
        let _ = io::parse_family(&s);
        let _ = io::parse_fusion(&s);
        let _ = io::parse_prebialgebra(&s);
        let _ = io::parse_representation(&s);
    }
}

#[test]
fn reports_deterministic() {
    let cfg = mposym::report::RunConfig::default();
    let a = serde_json::to_string(&mposym::report::reproduce(&cfg, Some("1,4,5")).unwrap()).unwrap();
    let b = serde_json::to_string(&mposym::report::reproduce(&cfg, Some("1,4,5")).unwrap()).unwrap();
    assert_eq!(a, b);
}
