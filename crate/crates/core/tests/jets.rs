use proptest::prelude::*;
use rhlab::Jet;

/// `f(x, y) = sin(x y) + exp(x) / (1 + y²)` on jets.
fn f_jet(x: &[Jet]) -> Jet {
    (&x[0] * &x[1]).sin() + x[0].exp() / (x[1].sq() + 1.0)
}

fn f_num(x: f64, y: f64) -> f64 {
    (x * y).sin() + x.exp() / (1.0 + y * y)
}

fn jet_at(x: f64, y: f64, order: usize) -> Jet {
    f_jet(&Jet::seed(&[x, y], order))
}

proptest! {
    #[test]
    fn first_partials_match_central_differences(x in -1.5..1.5f64, y in -1.5..1.5f64) {
        let j = jet_at(x, y, 3);
        let h = 1e-5;
        let fx = (f_num(x + h, y) - f_num(x - h, y)) / (2.0 * h);
        let fy = (f_num(x, y + h) - f_num(x, y - h)) / (2.0 * h);
        prop_assert!((j.partial(&[0]) - fx).abs() < 1e-8);
        prop_assert!((j.partial(&[1]) - fy).abs() < 1e-8);
    }

    #[test]
    fn second_partials_match_central_differences(x in -1.5..1.5f64, y in -1.5..1.5f64) {
        let j = jet_at(x, y, 3);
        let h = 1e-4;
        let fxx = (f_num(x + h, y) - 2.0 * f_num(x, y) + f_num(x - h, y)) / (h * h);
        let fxy = (f_num(x + h, y + h) - f_num(x + h, y - h) - f_num(x - h, y + h) + f_num(x - h, y - h)) / (4.0 * h * h);
        prop_assert!((j.partial(&[0, 0]) - fxx).abs() < 1e-5);
        prop_assert!((j.partial(&[0, 1]) - fxy).abs() < 1e-5);
    }

    #[test]
    fn third_partials_match_differences_of_second(x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let h = 1e-5;
        let d = (jet_at(x + h, y, 3).partial(&[0, 1]) - jet_at(x - h, y, 3).partial(&[0, 1])) / (2.0 * h);
        prop_assert!((jet_at(x, y, 3).partial(&[0, 0, 1]) - d).abs() < 1e-7);
    }

    #[test]
    fn derivative_tensors_are_symmetric(x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let j = jet_at(x, y, 4);
        prop_assert_eq!(j.partial(&[0, 1]), j.partial(&[1, 0]));
        prop_assert_eq!(j.partial(&[0, 1, 1]), j.partial(&[1, 0, 1]));
        prop_assert_eq!(j.partial(&[0, 0, 1, 1]), j.partial(&[1, 1, 0, 0]));
    }

    #[test]
    fn inverse_functions_round_trip(x in 0.2..3.0f64, y in -1.0..1.0f64) {
        let v = Jet::seed(&[x, y], 4);
        let g = &v[0] * v[1].exp();
        for (k, back) in [g.ln().exp(), g.sqrt().sq(), g.recip().recip(), g.powf(2.5).powf(0.4)].iter().enumerate() {
            for (a, b) in back.coefficients().iter().zip(g.coefficients()) {
                prop_assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()), "case {k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn chain_rule_for_diff(x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let j = jet_at(x, y, 4);
        let dx = j.diff(0);
        prop_assert_eq!(dx.order(), 3);
        prop_assert!((dx.partial(&[1, 1]) - j.partial(&[0, 1, 1])).abs() < 1e-12);
        prop_assert!((dx.value() - j.partial(&[0])).abs() < 1e-14);
    }
}

#[test]
fn hyperbolic_identity_holds_to_fourth_order() {
    let v = Jet::seed(&[0.7], 4);
    let one = v[0].cosh().sq() - v[0].sinh().sq();
    assert!((one.value() - 1.0).abs() < 1e-14);
    assert!(one.coefficients()[1..].iter().all(|c| c.abs() < 1e-13));
}

#[test]
fn taylor_coefficients_of_exp() {
    let e = Jet::seed(&[0.0], 4)[0].exp();
    let expected = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
    for (a, b) in e.coefficients().iter().zip(expected) {
        assert!((a - b).abs() < 1e-15);
    }
    assert_eq!(e.partial(&[0, 0, 0, 0]), 1.0);
}
