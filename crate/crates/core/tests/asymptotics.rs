mod common;

use common::expected_closed_forms;
use diagasym::asymptotics::{
    check_aperiodic, check_isolation_identity, check_minimality_samples, evaluate_partials, growth_rate,
    hessian_quantities, leading_constant, leading_constant_with_precision, ratio_diagnostics, verify_on_variety,
    verify_smooth_point,
};
use diagasym::series::{cubical_series, polynomial::kernel_factor};
use rug::float::Constant;
use rug::{Float, Integer, Rational};

#[test]
fn exact_smooth_point_identities() {
    for d in 3..=10usize {
        let e = expected_closed_forms(d as i64);
        assert_eq!(verify_on_variety(d).unwrap(), 0, "S(c), d={d}");
        let p = evaluate_partials(d).unwrap();
        assert_eq!(p.dh, e.dh, "dH, d={d}");
        assert_eq!(p.ddh, e.ddh, "ddH, d={d}");
        assert_eq!(p.d1dh, e.d1dh, "d1dH, d={d}");
        let h = hessian_quantities(d).unwrap();
        assert_eq!(h.q, e.q, "q, d={d}");
        assert_eq!(h.det_g, e.det_g, "det g, d={d}");
        let form = leading_constant(d).unwrap();
        assert_eq!(form.l0, e.l0, "L0, d={d}");
        assert_eq!(form.growth, growth_rate(d));
        assert_eq!(form.poly_exponent, Rational::from((1 - d as i64, 2)));
    }
}

#[test]
fn constant_for_three_dimensions() {
    let prec = 256;
    let pi = Float::with_val(prec, Constant::Pi);
    let target = Float::with_val(prec, 2) / (pi * Float::with_val(prec, 3).sqrt());
    let form = leading_constant_with_precision(3, prec).unwrap();
    let diff = Float::with_val(prec, &form.constant_float - &target).abs();
    let bits = -(diff.log2().to_f64() - target.log2().to_f64());
    assert!(bits >= 150.0, "{bits} bits");
    assert_eq!(form.l0, Rational::from((4, 3)));
    assert_eq!(form.growth, 8);
}

#[test]
fn full_reports_pass() {
    for d in [3, 4, 5, 8] {
        let r = verify_smooth_point(d, 200, 1, 256).unwrap();
        assert!(r.all_passed(), "d={d}: {:?}", r.failures());
        let j = r.to_json();
        assert_eq!(j["d"], d);
        assert!(j["dH"].as_str().unwrap().contains('/'));
    }
    assert!(verify_smooth_point(2, 10, 0, 256).is_err());
}

#[test]
fn structural_checks() {
    for d in 3..=7 {
        assert!(check_aperiodic(&kernel_factor(d)).unwrap(), "d={d}");
        let iso = check_isolation_identity(d).unwrap();
        assert!(iso.holds(), "d={d}");
    }
    let a = check_minimality_samples(4, 300, 9).unwrap();
    let b = check_minimality_samples(4, 300, 9).unwrap();
    assert!(a.all_passed());
    assert_eq!(a.max_value, b.max_value);
    assert!(a.max_value < 1);
}

#[test]
fn ratios_approach_one() {
    let c3 = cubical_series(3, 60).unwrap();
    let t = ratio_diagnostics(&c3, 3).unwrap();
    assert!(t.consistent());
    assert!(t.final_deviation() < 0.1);
    // Ratios increase towards 1 from below over the tail.
    let tail: Vec<f64> = t.rows[30..].iter().map(|r| r.ratio.to_f64()).collect();
    assert!(tail.windows(2).all(|w| w[0] < w[1] && w[1] < 1.0));

    // A series with the wrong growth is flagged.
    let wrong: Vec<Integer> = (0..40).map(|n| Integer::from(Integer::u_pow_u(9, n))).collect();
    assert!(ratio_diagnostics(&wrong, 3).unwrap().mismatch());
    assert!(ratio_diagnostics(&c3[..5], 3).is_err());
}
