use rotwave_core::discretize::build_radial_grid;
use rotwave_core::halfspace::{
    critical_threshold_report, minimize_halfspace, threshold_factor, HalfPlaneGrid, HalfSpaceOptions,
};
use rotwave_core::{DomainSpec, Error};
use std::sync::Arc;

#[test]
fn subcritical_exponent_converges() {
    let grid = HalfPlaneGrid::new(2.0, 2.0, 24, 24, 1.0).unwrap();
    let opts = HalfSpaceOptions { p: Some(6.0), ..HalfSpaceOptions::default() };
    let min = minimize_halfspace(&grid, &opts).unwrap();
    assert!(min.converged);
    assert!(min.report.value > 0.0 && min.report.p == 6.0);
}

#[test]
fn larger_box_gives_smaller_bound() {
    // Same cell size, so the small box's grid functions embed in the big one.
    let opts = HalfSpaceOptions::default();
    let small = minimize_halfspace(&HalfPlaneGrid::new(1.0, 1.0, 16, 16, 1.0).unwrap(), &opts).unwrap();
    let big = minimize_halfspace(&HalfPlaneGrid::new(2.0, 2.0, 32, 32, 1.0).unwrap(), &opts).unwrap();
    assert!(big.report.value <= small.report.value * (1.0 + 1e-8), "{} vs {}", big.report.value, small.report.value);
}

#[test]
fn threshold_report() {
    let ball = Arc::new(build_radial_grid(&DomainSpec::FlatDisk, 128).unwrap());
    let hp = HalfPlaneGrid::new(2.0, 2.0, 32, 32, 1.0).unwrap();
    let opts = HalfSpaceOptions::default();
    let err = critical_threshold_report(-6.0, ball.clone(), 0, &hp, None, &opts).unwrap_err();
    assert!(matches!(err, Error::MassBelowSpectralBound { .. }));
    let rep = critical_threshold_report(-5.68, ball, 0, &hp, None, &opts).unwrap();
    assert!(rep.satisfied);
    assert_eq!(rep.factor, threshold_factor());
    assert!((rep.rhs - rep.factor * rep.s1_upper).abs() < 1e-12 * rep.rhs);
    let bad = HalfPlaneGrid::new(2.0, 2.0, 32, 32, 2.0).unwrap();
    let ball = Arc::new(build_radial_grid(&DomainSpec::FlatDisk, 64).unwrap());
    assert!(critical_threshold_report(1.0, ball, 0, &bad, None, &opts).is_err());
}
