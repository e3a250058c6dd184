use rotwave_core::sweeps::{
    admissible_epsilon, asymptotic_slope_fit, boundary_concentration_exponent, fit_points, riemannian_concentration_exponent,
    supercritical_alpha_sweep, SweepRow, SweepTable,
};
use rotwave_core::Error;

#[test]
fn fit_recovers_power_law() {
    let xs = [0.4, 0.3, 0.2, 0.1, 0.05];
    let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(0.7)).collect();
    let fit = fit_points(&xs, &ys).unwrap();
    assert!((fit.slope - 0.7).abs() < 1e-12);
    assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
    assert!(fit.max_residual < 1e-12);
    assert!(matches!(fit_points(&xs[..2], &ys[..2]), Err(Error::TooFewRows(2))));
    assert!(matches!(fit_points(&xs, &[1.0, -1.0, 1.0, 1.0, 1.0]), Err(Error::SignViolation)));
}

#[test]
fn asymptotic_fit_drops_largest_parameter() {
    let rows = [0.1, 0.2, 0.3, 0.4]
        .iter()
        .map(|&x: &f64| SweepRow { param: x, value: if x == 0.4 { 100.0 } else { x * x }, aux: vec![] })
        .collect();
    let t = SweepTable::new("lambda", "t", &[], rows).unwrap();
    let fit = asymptotic_slope_fit(&t).unwrap();
    assert_eq!(fit.rows, 3);
    assert!((fit.slope - 2.0).abs() < 1e-12);
}

#[test]
fn exponents() {
    assert!((boundary_concentration_exponent(2, 12.0) - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(boundary_concentration_exponent(2, 10.0), 0.0);
    assert!((riemannian_concentration_exponent(2, 2.0, 8.0) - 0.25).abs() < 1e-15);
    assert_eq!(riemannian_concentration_exponent(2, 2.0, 6.0), 0.0);
    // At s = 1 the Riemannian scaling is the flat one with λ replaced by λ².
    for p in [4.0, 10.0, 12.0, 20.0] {
        let flat = boundary_concentration_exponent(2, p);
        let riem = riemannian_concentration_exponent(2, 1.0, p);
        assert!((flat - 2.0 * riem).abs() < 1e-14);
    }
}

#[test]
fn supercritical_values_turn_negative() {
    for (alpha, dim) in [(1.5, 2), (2.0, 3)] {
        let t = supercritical_alpha_sweep(alpha, &[4, 8, 16, 32], dim, 0.0, 4.0, 2048).unwrap();
        let v = t.values();
        assert!(v.windows(2).all(|w| w[1] < w[0]));
        assert!(*v.last().unwrap() < 0.0);
        for r in &t.rows[1..] {
            assert!((r.aux[1] - 4.0).abs() < 1e-9);
        }
    }
    assert!(admissible_epsilon(1.0, 2).is_err());
}

#[test]
fn tables_require_monotone_parameters() {
    let row = |p: f64| SweepRow { param: p, value: 1.0, aux: vec![] };
    assert!(SweepTable::new("x", "t", &[], vec![row(1.0), row(2.0), row(3.0)]).is_ok());
    assert!(SweepTable::new("x", "t", &[], vec![row(3.0), row(2.0)]).is_ok());
    assert!(SweepTable::new("x", "t", &[], vec![row(1.0), row(1.0)]).is_err());
    assert!(SweepTable::new("x", "t", &[], vec![row(1.0), row(3.0), row(2.0)]).is_err());
    assert!(SweepTable::new("x", "t", &["a"], vec![row(1.0)]).is_err());
}
