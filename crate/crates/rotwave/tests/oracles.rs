//! Core results against reference computations that share no code with it.

use rotwave::oracle;
use rotwave_core::discretize::{build_radial_grid, ModeField};
use rotwave_core::forms::{quotient_gradient, rayleigh_quotient};
use rotwave_core::profile::{Bump, Profile1D};
use rotwave_core::solver::{lambda1, linearized_operator, radial_solution, SolveOptions};
use rotwave_core::sweeps::{ConcentrationProfile, RiemannianConcentration};
use rotwave_core::{DomainSpec, ProblemParams, ProblemSpec, RiemannianProfile};
use std::f64::consts::PI;
use std::sync::Arc;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn disk_lambda1_converges_to_bessel_zero() {
    let exact = oracle::disk_lambda1();
    let mut errors = Vec::new();
    for n in [256, 512, 1024, 2048] {
        let grid = build_radial_grid(&DomainSpec::FlatDisk, n).unwrap();
        let rep = lambda1(&ProblemSpec::disk(0.0, 0.0, 2.0).unwrap(), &grid, 4).unwrap();
        assert_eq!(rep.argmin_mode, 0);
        errors.push((rep.lambda1 - exact).abs());
    }
    assert!(errors[3] < 1e-4, "{errors:?}");
    // Second order: halving h quarters the error.
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..4.5).contains(&ratio), "{errors:?}");
    }
}

#[test]
fn annulus_lambda1_against_ql_and_bessel() {
    let r0 = 0.5;
    let domain = DomainSpec::Annulus { inner_radius: r0 };
    let spec = ProblemSpec::new(domain, ProblemParams::planar(0.0, 0.0, 2.0)).unwrap();
    let bessel = oracle::annulus_lambda1(r0);

    let n = 4096;
    let grid = build_radial_grid(&domain, n).unwrap();
    let core = lambda1(&spec, &grid, 0).unwrap().lambda1;
    assert!(rel(core, bessel) < 1e-6, "{core} vs {bessel}");

    // Same stencil assembled independently, lowest eigenvalue by QL.
    let n = 512;
    let grid = build_radial_grid(&domain, n).unwrap();
    let core = lambda1(&spec, &grid, 0).unwrap().lambda1;
    let (diag, off, _) = oracle::annulus_linearization(r0, 0.0, 3.0, &vec![0.0; n]);
    let h = (1.0 - r0) / n as f64;
    let mass: Vec<f64> = grid.nodes().iter().map(|r| h * r).collect();
    let ql = oracle::generalized_lowest(&diag, &off, &mass);
    assert!(rel(core, ql) < 1e-10, "{core} vs {ql}");
}

#[test]
fn annulus_linearization_matches_independent_stencil() {
    let domain = DomainSpec::Annulus { inner_radius: 0.9 };
    let grid = build_radial_grid(&domain, 256).unwrap();
    let (u0, _) = radial_solution(&grid, 2, 0.0, 3.0, &SolveOptions::default()).unwrap();
    let (d, o, w) = linearized_operator(&grid, 2, 0.0, 3.0, &u0);
    let (d2, o2, w2) = oracle::annulus_linearization(0.9, 0.0, 3.0, &u0);
    for (a, b) in d.iter().zip(&d2).chain(o.iter().zip(&o2)).chain(w.iter().zip(&w2)) {
        assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{a} vs {b}");
    }
    let mu = oracle::generalized_lowest(&d, &o, &w);
    let mu2 = oracle::generalized_lowest(&d2, &o2, &w2);
    assert!(rel(mu, mu2) < 1e-10);
}

#[test]
fn gradient_matches_finite_differences_at_alpha_one() {
    let grid = Arc::new(build_radial_grid(&DomainSpec::FlatDisk, 48).unwrap());
    let k_max = 4;
    let spec = ProblemSpec::disk(1.0, 1.5, 4.0).unwrap();
    let u = ModeField::from_fn(grid.clone(), k_max, |r, t| {
        (1.0 - r * r) * (1.0 + 0.4 * r * t.cos() + 0.2 * r * r * (2.0 * t).sin() + 0.1 * r.powi(3) * (3.0 * t).cos())
    });
    let grad = quotient_gradient(&u, &spec).unwrap();
    for (i, dir) in [(0usize, 1.0f64), (1, -0.5), (2, 0.25)] {
        let d = ModeField::from_fn(grid.clone(), k_max, |r, t| {
            dir * (1.0 - r) * r.powi(i as i32) * ((i as f64) * t).cos()
        });
        let f = |x: &[f64]| {
            let field = ModeField::from_coeffs(grid.clone(), k_max, x.to_vec()).unwrap();
            rayleigh_quotient(&field, &spec).unwrap().value
        };
        let fd = oracle::central_difference(f, u.coeffs(), d.coeffs(), 1e-6);
        assert!(rel(grad.dot(&d), fd) < 1e-6, "{} vs {fd}", grad.dot(&d));
    }
}

/// Midpoint sum of `f` over the rectangle `[a, b] × [c, d]`.
fn midpoint_2d<F: Fn(f64, f64) -> f64>(f: F, (a, b): (f64, f64), (c, d): (f64, f64), n: usize) -> f64 {
    let (hx, hy) = ((b - a) / n as f64, (d - c) / n as f64);
    let mut sum = 0.0;
    for i in 0..n {
        let x = a + (i as f64 + 0.5) * hx;
        for j in 0..n {
            sum += f(x, c + (j as f64 + 0.5) * hy);
        }
    }
    sum * hx * hy
}

#[test]
fn concentration_quotient_against_cartesian_quadrature() {
    let f = Bump::new(0.05, 0.45).unwrap();
    let g = Bump::new(-1.5, 1.5).unwrap();
    let prof = ConcentrationProfile { f: &f, g: &g, nodes: 4096 };
    for (lambda, m, p) in [(0.4, 0.0, 12.0), (0.25, 3.0, 6.0)] {
        let (l2, l3) = (lambda * lambda, lambda * lambda * lambda);
        // u(x) = f((x₁ + 1)/λ²) g(x₂/λ³) with the chain rule written out.
        let parts = |x1: f64, x2: f64| {
            let (y1, y2) = ((x1 + 1.0) / l2, x2 / l3);
            let u = f.value(y1) * g.value(y2);
            let u1 = f.derivative(y1) * g.value(y2) / l2;
            let u2 = f.value(y1) * g.derivative(y2) / l3;
            let ut = x1 * u2 - x2 * u1;
            (u, u1 * u1 + u2 * u2 - ut * ut)
        };
        let bx = (0.05 * l2 - 1.0, 0.45 * l2 - 1.0);
        let by = (-1.5 * l3, 1.5 * l3);
        let num = midpoint_2d(|a, b| {
            let (u, e) = parts(a, b);
            e + m * u * u
        }, bx, by, 1200);
        let lp = midpoint_2d(|a, b| parts(a, b).0.abs().powf(p), bx, by, 1200);
        let oracle_value = num / lp.powf(2.0 / p);
        let value = prof.quotient(lambda, m, p).unwrap();
        assert!(rel(value, oracle_value) < 1e-7, "lambda {lambda}: {value} vs {oracle_value}");
    }
}

#[test]
fn hemisphere_quotient_against_polar_quadrature() {
    let a = Bump::new(0.05, 0.45).unwrap();
    let b = Bump::new(-1.0, 1.0).unwrap();
    let conc = RiemannianConcentration { profile: RiemannianProfile::Hemisphere, a: &a, b: &b, nodes: 4096 };
    for (lambda, m, p) in [(0.4, 0.0, 8.0), (0.2, 2.0, 5.0)] {
        let mu = lambda * lambda;
        // ψ(r) = sin(πr/2); the metric gradient squared minus the rotation term.
        let parts = |r: f64, t: f64| {
            let psi = (0.5 * PI * r).sin();
            let s = (1.0 - r) / lambda;
            let u = a.value(s) * b.value(t / mu);
            let ur = -a.derivative(s) * b.value(t / mu) / lambda;
            let ut = a.value(s) * b.derivative(t / mu) / mu;
            (u, psi, ur * ur + (1.0 / (psi * psi) - 1.0) * ut * ut)
        };
        let br = (1.0 - 0.45 * lambda, 1.0 - 0.05 * lambda);
        let bt = (-mu, mu);
        let num = midpoint_2d(|r, t| {
            let (u, psi, e) = parts(r, t);
            (e + m * u * u) * psi
        }, br, bt, 1200);
        let lp = midpoint_2d(|r, t| {
            let (u, psi, _) = parts(r, t);
            u.abs().powf(p) * psi
        }, br, bt, 1200);
        let oracle_value = num / lp.powf(2.0 / p);
        let value = conc.quotient(lambda, m, p).unwrap();
        assert!(rel(value, oracle_value) < 1e-7, "lambda {lambda}: {value} vs {oracle_value}");
    }
}
