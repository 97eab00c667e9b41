use nalgebra::DMatrix;
use proptest::prelude::*;
use rhlab::homogeneous::{
    both_signs, extension_conditions, extension_ricci, flat_plane_identity_data, hyperbolic_line_data, target_ricci,
    ExtensionData,
};
use rhlab::Error;

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

/// Data whose Ricci candidate is the target for `epsilon`.
fn consistent(entries: &[f64], skew: &[f64], m: usize, epsilon: f64) -> ExtensionData {
    let b = DMatrix::from_fn(m, m, |i, j| entries[i * m + j]);
    let s = &b + b.transpose();
    let c = DMatrix::from_fn(m, m, |i, j| skew[i * m + j]);
    let a = &c - c.transpose();
    let mut d =
        ExtensionData { s_mat: rows(&s), a_mat: rows(&a), ric_n: vec![vec![0.0; m]; m], div_s: vec![0.0; m], epsilon };
    let t = target_ricci(&d.matrices().unwrap());
    let sym = (&t + t.transpose()) / 2.0;
    d.ric_n = rows(&sym);
    d
}

proptest! {
    #[test]
    fn the_target_ricci_passes_for_its_sign_only(
        m in 1usize..4,
        entries in proptest::collection::vec(-2.0..2.0f64, 9),
        sign in prop_oneof![Just(-1.0), Just(1.0)],
    ) {
        let zero = vec![0.0; 9];
        let d = consistent(&entries, &zero, m, sign);
        prop_assume!(d.matrices().map(|x| x.s.norm() > 0.1).unwrap_or(false));
        let c = extension_conditions(&d).unwrap();
        prop_assert!(c.passed, "res_ric {}", c.res_ric);
        let other = extension_conditions(&d.with_epsilon(-sign)).unwrap();
        prop_assert!((other.res_ric - 2.0).abs() < 1e-9);
    }

    #[test]
    fn conditions_are_scale_invariant(
        entries in proptest::collection::vec(-2.0..2.0f64, 4),
        skew in proptest::collection::vec(-1.0..1.0f64, 4),
        lambda in 0.1..10.0f64,
    ) {
        let d = consistent(&entries, &skew, 2, -1.0);
        prop_assume!(d.matrices().map(|x| x.s.norm() > 0.1).unwrap_or(false));
        let c = extension_conditions(&d).unwrap();
        let cl = extension_conditions(&d.scaled(lambda)).unwrap();
        prop_assert_eq!(c.passed, cl.passed);
        prop_assert!((lambda * cl.alpha - c.alpha).abs() < 1e-12);
        prop_assert!((cl.res_ric - c.res_ric).abs() < 1e-9);
    }
}

#[test]
fn hyperbolic_line_gives_the_hyperbolic_plane() {
    let d = hyperbolic_line_data();
    let [neg, pos] = both_signs(&d).unwrap();
    assert!(neg.passed && !pos.passed);
    assert_eq!(neg.alpha, -1.0);
    let r = extension_ricci(&d, neg.alpha).unwrap();
    assert_eq!(r.ambient_scal, -2.0);
    assert_eq!(r.mu_coefficient, 0.0);
    assert!(r.equation_residual < 1e-10);
}

#[test]
fn flat_identity_fails_by_two_minus_root_two_over_root_two() {
    let c = extension_conditions(&flat_plane_identity_data()).unwrap();
    assert!(!c.passed);
    assert_eq!(c.res_div, 0.0);
    let expected = (2.0 - 2f64.sqrt()) / 2.0 * 2f64.sqrt();
    assert!((c.res_ric - expected).abs() < 1e-14);
}

#[test]
fn nonzero_divergence_fails() {
    let mut d = hyperbolic_line_data();
    d.div_s = vec![1e-6];
    let c = extension_conditions(&d).unwrap();
    assert!(!c.passed);
    assert_eq!(c.res_div, 1e-6);
}

#[test]
fn malformed_data_is_rejected() {
    let mut d = flat_plane_identity_data();
    d.a_mat = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
    assert!(matches!(extension_conditions(&d), Err(Error::BadParams(m)) if m.contains("skew")));
    let mut d = flat_plane_identity_data();
    d.s_mat.pop();
    assert!(matches!(extension_conditions(&d), Err(Error::BadParams(_))));
    let d = hyperbolic_line_data().with_epsilon(0.5);
    assert!(matches!(extension_conditions(&d), Err(Error::BadParams(_))));
    let d = hyperbolic_line_data().scaled(0.0);
    assert_eq!(extension_conditions(&d), Err(Error::ZeroSymmetricPart));
}
