use proptest::prelude::*;
use rotwave_core::discretize::{lp_norm, to_modes, to_physical, ModeField, RadialGrid};
use rotwave_core::forms::rayleigh_quotient;
use rotwave_core::{ProblemSpec, RiemannianProfile};
use std::f64::consts::PI;
use std::sync::Arc;

fn grid(n: usize) -> Arc<RadialGrid> {
    Arc::new(RadialGrid::new(0.0, 1.0, n, RiemannianProfile::Flat).unwrap())
}

fn field(n: usize, k_max: usize, coeffs: &[f64]) -> ModeField {
    let len = n * (2 * k_max + 1);
    ModeField::from_coeffs(grid(n), k_max, coeffs.iter().cycle().take(len).copied().collect()).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 8..64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modes_survive_physical_round_trip(c in coeffs(), n in 2usize..24, k_max in 0usize..7, extra in 1usize..9) {
        let u = field(n, k_max, &c);
        let m_theta = 2 * k_max + extra;
        let back = to_modes(&to_physical(&u, m_theta).unwrap(), k_max).unwrap();
        let scale = u.coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in u.coeffs().iter().zip(back.coeffs()) {
            prop_assert!((a - b).abs() <= 1e-13 * scale.max(1.0));
        }
    }

    #[test]
    fn parseval(c in coeffs(), n in 2usize..24, k_max in 0usize..7) {
        let u = field(n, k_max, &c);
        let g = &u.grid;
        let h = 1.0 / n as f64;
        let mut expected = 0.0;
        for slot in 0..u.slots() {
            let norm = if slot == 0 { 2.0 * PI } else { PI };
            for (j, w) in g.weights().iter().enumerate() {
                expected += norm * h * w * u.slot(slot)[j].powi(2);
            }
        }
        let got = lp_norm(&u, 2.0).unwrap().powi(2);
        prop_assert!((got - expected).abs() <= 1e-12 * expected.max(1e-300));
    }

    #[test]
    fn quotient_is_homogeneous(
        c in coeffs(),
        scale in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0],
        alpha in 0.0f64..1.0,
        m in -2.0f64..20.0,
        p in 2.0f64..8.0,
    ) {
        let u = field(16, 3, &c);
        prop_assume!(!u.is_zero());
        let spec = ProblemSpec::disk(alpha, m, p).unwrap();
        let base = rayleigh_quotient(&u, &spec).unwrap().value;
        let tol = 1e-11 * base.abs().max(1.0);
        prop_assert!((rayleigh_quotient(&u.scaled(scale), &spec).unwrap().value - base).abs() <= tol);
    }

    /// The angular rule has M = 4(2K+1) points, so the L^p integral is
    /// invariant under rotations by multiples of 2π/M for every p, and under
    /// all rotations when |u|^p is a trigonometric polynomial of degree < M.
    #[test]
    fn quotient_is_rotation_invariant(
        c in coeffs(),
        steps in 0usize..200,
        beta in 0.0f64..(2.0 * PI),
        alpha in 0.0f64..1.0,
        m in -2.0f64..20.0,
        p in 2.0f64..8.0,
        even in prop::sample::select(vec![2.0f64, 4.0]),
    ) {
        let k_max = 3;
        let u = field(16, k_max, &c);
        prop_assume!(!u.is_zero());
        let grid_step = 2.0 * PI / (4 * (2 * k_max + 1)) as f64;
        for (p, beta) in [(p, steps as f64 * grid_step), (even, beta)] {
            let spec = ProblemSpec::disk(alpha, m, p).unwrap();
            let base = rayleigh_quotient(&u, &spec).unwrap().value;
            let tol = 1e-11 * base.abs().max(1.0);
            prop_assert!((rayleigh_quotient(&u.rotated(beta), &spec).unwrap().value - base).abs() <= tol);
        }
    }
}
