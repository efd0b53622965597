use approx::assert_relative_eq;
use clone_invert::analytic::{
    bogoliubov_coeffs, clone_number, clones_at_witness_level, entanglement_threshold,
    mean_photon_final, sensitivity, witness, witness_from_clones, witness_mismatch, Provenance,
};
use clone_invert::ExperimentParams;
use proptest::prelude::*;

fn p(e1: f64, e2: f64, e3: f64, g: f64) -> ExperimentParams {
    ExperimentParams::matched(e1, e2, e3, g).unwrap()
}

fn scale(params: &ExperimentParams) -> f64 {
    1.0 + clone_number(params).unwrap().n_clones
}

#[test]
fn lossless_chain_is_the_identity() {
    for g in [0.0, 0.5, 1.0, 3.0, 8.0] {
        let q = p(1.0, 1.0, 1.0, g);
        assert_eq!(witness(&q).unwrap(), 2.0);
        assert_eq!(mean_photon_final(&q).unwrap(), 1.0);
    }
}

#[test]
fn mismatch_formula_is_flagged_as_a_claim() {
    let q = ExperimentParams::new(0.8, 0.98, 0.8, 1.0, 1.1).unwrap();
    let m = witness_mismatch(&q).unwrap();
    assert_eq!(m.provenance, Provenance::LeadingOrderClaim);
    assert_relative_eq!(m.witness, 1.2039328689426618, max_relative = 1e-12);
}

#[test]
fn huge_gain_overflows_cleanly() {
    assert!(witness(&p(0.9, 0.9, 0.9, 800.0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn transform_is_canonical(e1 in 0.0f64..=1.0, e2 in 0.0f64..=1.0, e3 in 0.0f64..=1.0, g in 0.0f64..4.0) {
        let c = bogoliubov_coeffs(&p(e1, e2, e3, g)).unwrap();
        let size = 1.0 + c.c_mid_cosh.powi(2) + c.c_mid_sinh.powi(2);
        prop_assert!((c.commutator() - 1.0).abs() <= 1e-12 * size);
    }

    #[test]
    fn witness_never_exceeds_pure_loss_value(e1 in 0.0f64..=1.0, e2 in 0.0f64..=1.0, e3 in 0.0f64..=1.0, g in 0.0f64..4.0) {
        let w = witness(&p(e1, e2, e3, g)).unwrap();
        prop_assert!(w <= 2.0 * e1 * e2 * e3 + 1e-15);
    }

    #[test]
    fn witness_does_not_grow_with_gain(e1 in 0.0f64..=1.0, e2 in 0.0f64..=1.0, e3 in 0.0f64..=1.0, g in 0.0f64..3.0, dg in 0.0f64..1.0) {
        let lo = witness(&p(e1, e2, e3, g)).unwrap();
        let hi = witness(&p(e1, e2, e3, g + dg)).unwrap();
        prop_assert!(hi <= lo + 1e-12 * scale(&p(e1, e2, e3, g + dg)));
    }

    #[test]
    fn witness_is_linear_in_final_transmission(e1 in 0.0f64..=1.0, e2 in 0.0f64..=1.0, e3 in 0.0f64..=1.0, g in 0.0f64..3.0) {
        let full = witness(&p(e1, e2, 1.0, g)).unwrap();
        let part = witness(&p(e1, e2, e3, g)).unwrap();
        prop_assert!((part - e3 * full).abs() <= 1e-12 * scale(&p(e1, e2, 1.0, g)));
    }

    #[test]
    fn witness_through_clone_number(e1 in 0.01f64..=1.0, e2 in 0.0f64..=1.0, e3 in 0.0f64..=1.0, g in 0.0f64..3.0) {
        let q = p(e1, e2, e3, g);
        let n = clone_number(&q).unwrap().n_clones;
        let direct = witness(&q).unwrap();
        let via = witness_from_clones(e1, e2, e3, n).unwrap();
        prop_assert!((direct - via).abs() <= 1e-12 * scale(&q));
    }

    #[test]
    fn sensitivity_matches_finite_difference(e1 in 0.0f64..=1.0, e2 in 0.1f64..0.9, e3 in 0.0f64..=1.0, g in 0.0f64..2.0) {
        let h = 1e-5;
        let fd = (witness(&p(e1, e2 + h, e3, g)).unwrap() - witness(&p(e1, e2 - h, e3, g)).unwrap()) / (2.0 * h);
        let s = sensitivity(&p(e1, e2, e3, g)).unwrap();
        let closed = 2.0 * (e1 + g.sinh().powi(2)) * e3;
        prop_assert!((s - closed).abs() <= 1e-12 * scale(&p(e1, e2, e3, g)));
        prop_assert!((s - fd).abs() <= 1e-6 * scale(&p(e1, e2, e3, g)));
    }

    #[test]
    fn clone_level_round_trip(e1 in 0.05f64..=1.0, e2 in 0.0f64..0.999, e3 in 0.05f64..=1.0, w in -1.0f64..2.0) {
        if let Ok(n) = clones_at_witness_level(e1, e2, e3, w) {
            prop_assert!(n >= e1);
            let back = witness_from_clones(e1, e2, e3, n).unwrap();
            prop_assert!((back - w).abs() <= 1e-10 * (1.0 + n));
        }
    }

    #[test]
    fn threshold_is_the_zero_of_the_witness(e1 in 0.05f64..=1.0, e3 in 0.05f64..=1.0, g in 0.01f64..3.0) {
        let t = entanglement_threshold(e1, g).unwrap();
        prop_assert!((0.0..1.0).contains(&t));
        let w = witness(&p(e1, t, e3, g)).unwrap();
        prop_assert!(w.abs() <= 1e-12 * scale(&p(e1, t, e3, g)));
    }
}
