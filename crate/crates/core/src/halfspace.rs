//! The degenerate quotient on the half-plane {x₁ > 0},
//!
//! ```text
//! S_s = inf ∫ (|∂₁u|² + κ x₁^s |∂₂u|²) / (∫ |u|^p)^{2/p},   p = 2_s* = (8 + 2s)/s,
//! ```
//!
//! on truncated boxes (0, L) × (−M, M) with Dirichlet data, plus the
//! closed-form separable path used for the scaling laws.

use crate::discretize::RadialGrid;
use crate::error::{invalid, Error, Result};
use crate::exponents::critical_exponent_2s;
use crate::forms::rayleigh_quotient;
use crate::problem::ProblemSpec;
use crate::profile::Profile1D;
use crate::quadrature::midpoint;
use crate::solver::{first_eigenfunction, minimize, solve_ground_state, FixedPointProblem, SolveOptions};
use crate::tridiag::SymTridiag;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Staggered grid on (0, L) × (−M, M). Samples are stored with x₂ running
/// fastest: `u[i * ny + j] = u(x₁_i, x₂_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneGrid {
    pub l: f64,
    pub m: f64,
    pub nx: usize,
    pub ny: usize,
    pub s: f64,
}

impl HalfPlaneGrid {
    pub fn new(l: f64, m: f64, nx: usize, ny: usize, s: f64) -> Result<Self> {
        if !(l > 0.0 && m > 0.0) {
            return Err(invalid("box extents L and M must be positive"));
        }
        if nx < 2 || ny < 2 {
            return Err(invalid("half-plane grid needs at least 2 nodes per direction"));
        }
        if !(s > 0.0) {
            return Err(invalid("degeneracy exponent s must be positive"));
        }
        Ok(HalfPlaneGrid { l, m, nx, ny, s })
    }

    pub fn hx(&self) -> f64 {
        self.l / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        2.0 * self.m / self.ny as f64
    }

    pub fn x1(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.hx()
    }

    pub fn x2(&self, j: usize) -> f64 {
        -self.m + (j as f64 + 0.5) * self.hy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Samples a function of (x₁, x₂) at the nodes.
    pub fn sample<F: Fn(f64, f64) -> f64>(&self, f: F) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.nx {
            for j in 0..self.ny {
                out.push(f(self.x1(i), self.x2(j)));
            }
        }
        out
    }

    /// `2_s*` in the plane.
    pub fn critical_exponent(&self) -> f64 {
        critical_exponent_2s(2, self.s).expect("s > 0")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceQuotientReport {
    /// ∫ |∂₁u|² + κ x₁^s |∂₂u|²
    pub numerator: f64,
    /// ‖u‖_p²
    pub denominator: f64,
    pub value: f64,
    pub kappa_weight: f64,
    pub p: f64,
}

/// Largest admissible ratio between the outermost ring of samples and the
/// maximum. On a staggered grid the first node sits half a cell inside the
/// boundary, so a Dirichlet function only has to be small there.
pub const BOUNDARY_RATIO: f64 = 0.25;

fn check_boundary(samples: &[f64], grid: &HalfPlaneGrid) -> Result<()> {
    let max = samples.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if max == 0.0 {
        return Err(Error::ZeroField);
    }
    let mut edge = 0.0f64;
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            if i == 0 || i + 1 == grid.nx || j == 0 || j + 1 == grid.ny {
                edge = edge.max(samples[i * grid.ny + j].abs());
            }
        }
    }
    if edge > BOUNDARY_RATIO * max {
        return Err(Error::BoundaryNotVanishing(edge / max));
    }
    Ok(())
}

/// `(∫|∂₁u|², ∫x₁^s|∂₂u|²)` with ghost values mirroring zero boundary data.
fn gradient_parts(samples: &[f64], grid: &HalfPlaneGrid) -> (f64, f64) {
    let (nx, ny) = (grid.nx, grid.ny);
    let (hx, hy) = (grid.hx(), grid.hy());
    let u = |i: usize, j: usize| samples[i * ny + j];
    let mut d1 = 0.0;
    for j in 0..ny {
        d1 += 2.0 * (u(0, j).powi(2) + u(nx - 1, j).powi(2));
        for i in 1..nx {
            d1 += (u(i, j) - u(i - 1, j)).powi(2);
        }
    }
    let mut d2 = 0.0;
    for i in 0..nx {
        let mut row = 2.0 * (u(i, 0).powi(2) + u(i, ny - 1).powi(2));
        for j in 1..ny {
            row += (u(i, j) - u(i, j - 1)).powi(2);
        }
        d2 += grid.x1(i).powf(grid.s) * row;
    }
    (d1 * hy / hx, d2 * hx / hy)
}

fn lp_sum(samples: &[f64], grid: &HalfPlaneGrid, p: f64) -> f64 {
    samples.iter().map(|v| v.abs().powf(p)).sum::<f64>() * grid.hx() * grid.hy()
}

/// Quotient of grid samples. `p` defaults to `2_s*`.
pub fn halfspace_quotient(
    samples: &[f64],
    grid: &HalfPlaneGrid,
    kappa_weight: f64,
    p: Option<f64>,
) -> Result<HalfSpaceQuotientReport> {
    if samples.len() != grid.len() {
        return Err(Error::GridMismatch("sample count differs from the half-plane grid".into()));
    }
    if !(kappa_weight > 0.0) {
        return Err(invalid("kappa weight must be positive"));
    }
    check_boundary(samples, grid)?;
    let p = p.unwrap_or_else(|| grid.critical_exponent());
    let (d1, d2) = gradient_parts(samples, grid);
    let numerator = d1 + kappa_weight * d2;
    let denominator = lp_sum(samples, grid, p).powf(2.0 / p);
    Ok(HalfSpaceQuotientReport { numerator, denominator, value: numerator / denominator, kappa_weight, p })
}

/// The box quotient as a fixed-point problem. Linear solves diagonalize the
/// x₂ direction with the sine basis `sin(πk(j + ½)/ny)`, which is exact for
/// the staggered Dirichlet stencil, and solve one tridiagonal system in x₁
/// per sine mode.
struct BoxProblem {
    grid: HalfPlaneGrid,
    p: f64,
    kappa: f64,
    /// Orthonormal sine basis, `basis[j * ny + k]`.
    basis: Vec<f64>,
    /// x₁ systems per sine mode.
    systems: Vec<SymTridiag>,
    ones: Vec<f64>,
    mass: Vec<f64>,
}

impl BoxProblem {
    fn new(grid: HalfPlaneGrid, kappa: f64, p: f64) -> Self {
        let (nx, ny) = (grid.nx, grid.ny);
        let (hx, hy) = (grid.hx(), grid.hy());
        let norm = (2.0 / ny as f64).sqrt();
        let mut basis = vec![0.0; ny * ny];
        for j in 0..ny {
            for k in 0..ny {
                let kk = (k + 1) as f64;
                let mut v = norm * (PI * kk * (j as f64 + 0.5) / ny as f64).sin();
                if k + 1 == ny {
                    v /= 2.0f64.sqrt();
                }
                basis[j * ny + k] = v;
            }
        }
        let weights: Vec<f64> = (0..nx).map(|i| grid.x1(i).powf(grid.s)).collect();
        let systems = (0..ny)
            .map(|k| {
                let ev = 4.0 * (PI * (k + 1) as f64 / (2.0 * ny as f64)).sin().powi(2);
                let mut diag = vec![2.0 * hy / hx; nx];
                diag[0] += hy / hx;
                diag[nx - 1] += hy / hx;
                for i in 0..nx {
                    diag[i] += kappa * hx / hy * ev * weights[i];
                }
                SymTridiag::new(diag, vec![-hy / hx; nx - 1])
            })
            .collect();
        let n = nx * ny;
        BoxProblem {
            grid,
            p,
            kappa,
            basis,
            systems,
            ones: vec![1.0; n],
            mass: vec![hx * hy; n],
        }
    }

    /// Row-wise product with the sine basis (or its transpose).
    fn transform(&self, x: &mut [f64], transpose: bool) {
        let ny = self.grid.ny;
        let mut row = vec![0.0; ny];
        for i in 0..self.grid.nx {
            let src = &x[i * ny..(i + 1) * ny];
            for (k, out) in row.iter_mut().enumerate() {
                *out = if transpose {
                    (0..ny).map(|j| self.basis[j * ny + k] * src[j]).sum()
                } else {
                    (0..ny).map(|j| self.basis[k * ny + j] * src[j]).sum()
                };
            }
            x[i * ny..(i + 1) * ny].copy_from_slice(&row);
        }
    }
}

impl FixedPointProblem for BoxProblem {
    fn len(&self) -> usize {
        self.mass.len()
    }

    fn p(&self) -> f64 {
        self.p
    }

    fn energy(&self, x: &[f64]) -> f64 {
        let (d1, d2) = gradient_parts(x, &self.grid);
        d1 + self.kappa * d2
    }

    fn load(&self, x: &[f64], b: &mut [f64]) -> f64 {
        let w = self.mass[0];
        let mut integral = 0.0;
        for (bi, v) in b.iter_mut().zip(x) {
            let g = v.abs().powf(self.p - 2.0) * v;
            integral += w * g * v;
            *bi = w * g;
        }
        integral
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let (hx, hy) = (self.grid.hx(), self.grid.hy());
        let (a, b) = (hy / hx, self.kappa * hx / hy);
        for i in 0..nx {
            let w = b * self.grid.x1(i).powf(self.grid.s);
            for j in 0..ny {
                let u = x[i * ny + j];
                let left = if i > 0 { x[(i - 1) * ny + j] } else { -u };
                let right = if i + 1 < nx { x[(i + 1) * ny + j] } else { -u };
                let down = if j > 0 { x[i * ny + j - 1] } else { -u };
                let up = if j + 1 < ny { x[i * ny + j + 1] } else { -u };
                out[i * ny + j] = a * (2.0 * u - left - right) + w * (2.0 * u - down - up);
            }
        }
    }

    fn solve(&self, rhs: &mut [f64]) -> Result<()> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        self.transform(rhs, true);
        let mut col = vec![0.0; nx];
        let mut work = Vec::with_capacity(nx);
        for k in 0..ny {
            for i in 0..nx {
                col[i] = rhs[i * ny + k];
            }
            self.systems[k].solve_in_place(&mut col, &mut work)?;
            for i in 0..nx {
                rhs[i * ny + k] = col[i];
            }
        }
        self.transform(rhs, false);
        Ok(())
    }

    fn block_weights(&self) -> &[f64] {
        &self.ones
    }

    fn mass(&self) -> &[f64] {
        &self.mass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceOptions {
    pub kappa_weight: f64,
    /// Exponent override; `2_s*` when absent.
    pub p: Option<f64>,
    pub tol_quotient: f64,
    pub tol_residual: f64,
    pub max_iter: usize,
}

impl Default for HalfSpaceOptions {
    fn default() -> Self {
        HalfSpaceOptions { kappa_weight: 1.0, p: None, tol_quotient: 1e-9, tol_residual: 1e-5, max_iter: 5000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpaceMinimum {
    pub report: HalfSpaceQuotientReport,
    pub samples: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Upper bound for `S_s` from the box minimization, started from the
/// product of first sine arches.
pub fn minimize_halfspace(grid: &HalfPlaneGrid, opts: &HalfSpaceOptions) -> Result<HalfSpaceMinimum> {
    if grid.ny < grid.nx {
        return Err(invalid("the grid must resolve the anisotropy: ny >= nx"));
    }
    let p = opts.p.unwrap_or_else(|| grid.critical_exponent());
    if !(p > 2.0) {
        return Err(invalid("p must exceed 2"));
    }
    let prob = BoxProblem::new(*grid, opts.kappa_weight, p);
    let start = grid.sample(|x1, x2| {
        (PI * x1 / grid.l).sin() * (0.5 * PI * x2 / grid.m).cos()
    });
    let solve_opts = SolveOptions {
        tol_quotient: opts.tol_quotient,
        tol_residual: opts.tol_residual,
        max_iter: opts.max_iter,
        ..SolveOptions::default()
    };
    let out = minimize(&prob, start, &solve_opts)?;
    let samples: Vec<f64> = out.x.iter().map(|v| v.abs()).collect();
    let (d1, d2) = gradient_parts(&samples, grid);
    let numerator = d1 + opts.kappa_weight * d2;
    let denominator = lp_sum(&samples, grid, p).powf(2.0 / p);
    let report = HalfSpaceQuotientReport {
        numerator,
        denominator,
        value: numerator / denominator,
        kappa_weight: opts.kappa_weight,
        p,
    };
    Ok(HalfSpaceMinimum { report, samples, iterations: out.iterations, converged: out.converged })
}

/// `v(x) = u(λx₁, λ^{1+s/2}x₂)` by bilinear interpolation, with odd
/// reflection across the box boundary.
pub fn anisotropic_rescale(samples: &[f64], grid: &HalfPlaneGrid, lambda: f64) -> Result<Vec<f64>> {
    if samples.len() != grid.len() {
        return Err(Error::GridMismatch("sample count differs from the half-plane grid".into()));
    }
    if !(lambda > 0.0) {
        return Err(invalid("lambda must be positive"));
    }
    let mu = lambda.powf(1.0 + grid.s / 2.0);
    let (nx, ny) = (grid.nx, grid.ny);
    let max = samples.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    // Every point of the support must be the image of a point in the box.
    for i in 0..nx {
        for j in 0..ny {
            if samples[i * ny + j].abs() > 1e-12 * max
                && (grid.x1(i) > lambda * grid.l || grid.x2(j).abs() > mu * grid.m)
            {
                return Err(Error::SupportEscape("rescaled support leaves the box".into()));
            }
        }
    }
    let at = |i: isize, j: isize| -> f64 {
        let reflect = |k: isize, n: usize| -> Option<(usize, f64)> {
            if k >= 0 && (k as usize) < n {
                Some((k as usize, 1.0))
            } else if k == -1 {
                Some((0, -1.0))
            } else if k == n as isize {
                Some((n - 1, -1.0))
            } else {
                None
            }
        };
        match (reflect(i, nx), reflect(j, ny)) {
            (Some((a, sa)), Some((b, sb))) => sa * sb * samples[a * ny + b],
            _ => 0.0,
        }
    };
    let (hx, hy) = (grid.hx(), grid.hy());
    Ok(grid.sample(|x1, x2| {
        let fx = lambda * x1 / hx - 0.5;
        let fy = (mu * x2 + grid.m) / hy - 0.5;
        let (i0, j0) = (fx.floor(), fy.floor());
        let (tx, ty) = (fx - i0, fy - j0);
        let (i0, j0) = (i0 as isize, j0 as isize);
        (1.0 - tx) * (1.0 - ty) * at(i0, j0)
            + tx * (1.0 - ty) * at(i0 + 1, j0)
            + (1.0 - tx) * ty * at(i0, j0 + 1)
            + tx * ty * at(i0 + 1, j0 + 1)
    }))
}

/// `x ↦ f(factor · x)`.
#[derive(Debug, Clone, Copy)]
pub struct Dilated<P> {
    pub inner: P,
    pub factor: f64,
}

impl<P: Profile1D> Profile1D for Dilated<P> {
    fn support(&self) -> (f64, f64) {
        let (a, b) = self.inner.support();
        (a / self.factor, b / self.factor)
    }

    fn value(&self, x: f64) -> f64 {
        self.inner.value(self.factor * x)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.factor * self.inner.derivative(self.factor * x)
    }
}

/// Closed-form separable test function `u(x₁, x₂) = f(x₁) g(x₂)` with `f`
/// supported in x₁ > 0.
#[derive(Clone, Copy)]
pub struct SeparableHalfPlane<'a> {
    pub f: &'a dyn Profile1D,
    pub g: &'a dyn Profile1D,
    pub nodes: usize,
}

/// One-dimensional integrals behind the separable quotient.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SeparableIntegrals {
    f_grad: f64,
    f_weighted: f64,
    f_p: f64,
    g_l2: f64,
    g_grad: f64,
    g_p: f64,
}

impl<'a> SeparableHalfPlane<'a> {
    fn integrals(&self, s: f64, p: f64) -> Result<SeparableIntegrals> {
        let (a, b) = self.f.support();
        if a < 0.0 {
            return Err(Error::SupportEscape("f must be supported in x1 > 0".into()));
        }
        let (c, d) = self.g.support();
        let n = self.nodes;
        Ok(SeparableIntegrals {
            f_grad: midpoint(a, b, n, |x| self.f.derivative(x).powi(2)),
            f_weighted: midpoint(a, b, n, |x| x.powf(s) * self.f.value(x).powi(2)),
            f_p: midpoint(a, b, n, |x| self.f.value(x).abs().powf(p)),
            g_l2: midpoint(c, d, n, |x| self.g.value(x).powi(2)),
            g_grad: midpoint(c, d, n, |x| self.g.derivative(x).powi(2)),
            g_p: midpoint(c, d, n, |x| self.g.value(x).abs().powf(p)),
        })
    }

    pub fn quotient(&self, s: f64, kappa: f64, p: f64) -> Result<HalfSpaceQuotientReport> {
        let q = self.integrals(s, p)?;
        let numerator = q.f_grad * q.g_l2 + kappa * q.f_weighted * q.g_grad;
        let denominator = (q.f_p * q.g_p).powf(2.0 / p);
        Ok(HalfSpaceQuotientReport { numerator, denominator, value: numerator / denominator, kappa_weight: kappa, p })
    }

    /// Quotient of `u(λx₁, λ^{1+s/2}x₂)`, integrated directly over the
    /// rescaled profiles.
    pub fn rescaled_quotient(&self, lambda: f64, s: f64, kappa: f64, p: f64) -> Result<HalfSpaceQuotientReport> {
        let f = Dilated { inner: DynProfile(self.f), factor: lambda };
        let g = Dilated { inner: DynProfile(self.g), factor: lambda.powf(1.0 + s / 2.0) };
        SeparableHalfPlane { f: &f, g: &g, nodes: self.nodes }.quotient(s, kappa, p)
    }

    /// Minimum over vertical stretches `u(x₁, x₂/t)` of the κ-weighted
    /// quotient, by golden-section search in log t on quadratures of the
    /// stretched profiles.
    pub fn min_over_stretches(&self, s: f64, kappa: f64, p: f64) -> Result<f64> {
        let eval = |log_t: f64| -> Result<f64> {
            let g = Dilated { inner: DynProfile(self.g), factor: (-log_t).exp() };
            Ok(SeparableHalfPlane { f: self.f, g: &g, nodes: self.nodes }.quotient(s, kappa, p)?.value)
        };
        let (mut a, mut b) = (-12.0f64, 12.0f64);
        let phi = 0.5 * (5.0f64.sqrt() - 1.0);
        let mut x1 = b - phi * (b - a);
        let mut x2 = a + phi * (b - a);
        let (mut f1, mut f2) = (eval(x1)?, eval(x2)?);
        for _ in 0..200 {
            if b - a < 1e-10 {
                break;
            }
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = eval(x1)?;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = eval(x2)?;
            }
        }
        Ok(f1.min(f2))
    }
}

/// Borrowed trait object as a sized profile.
#[derive(Clone, Copy)]
struct DynProfile<'a>(&'a dyn Profile1D);

impl Profile1D for DynProfile<'_> {
    fn support(&self) -> (f64, f64) {
        self.0.support()
    }

    fn value(&self, x: f64) -> f64 {
        self.0.value(x)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.0.derivative(x)
    }
}

/// `λ^{(2/p)(N+s/2) − (2N+s−4)/2}` at N = 2: the factor by which the
/// quotient changes under the anisotropic rescaling.
pub fn rescaling_factor(lambda: f64, s: f64, p: f64) -> f64 {
    let n = 2.0;
    lambda.powf((2.0 / p) * (n + s / 2.0) - (2.0 * n + s - 4.0) / 2.0)
}

/// `2^{1/2 − 1/2₁*}` in the plane.
pub fn threshold_factor() -> f64 {
    2.0f64.powf(0.5 - 1.0 / critical_exponent_2s(2, 1.0).expect("valid"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub m: f64,
    pub lambda1: f64,
    /// `R_{1,m,2₁*}(φ₁)`.
    pub c_phi1: f64,
    /// Best solver value at α = 1, p = 2₁*, when the solve succeeded.
    pub c_solver: Option<f64>,
    pub c_upper: f64,
    pub s1_upper: f64,
    pub factor: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Compares the ball level at α = 1, p = 2₁* with `2^{1/2−1/2₁*} S₁`. Both
/// sides are upper bounds, so this is an indicator only.
pub fn critical_threshold_report(
    m: f64,
    ball_grid: Arc<RadialGrid>,
    k_max: usize,
    halfplane_grid: &HalfPlaneGrid,
    solve: Option<&SolveOptions>,
    hs_opts: &HalfSpaceOptions,
) -> Result<ThresholdReport> {
    let p = critical_exponent_2s(2, 1.0)?;
    let (lambda1, phi) = first_eigenfunction(&ball_grid)?;
    if m <= -lambda1 {
        return Err(Error::MassBelowSpectralBound { m, bound: -lambda1 });
    }
    let spec = ProblemSpec::disk(1.0, m, p)?;
    let field = crate::discretize::ModeField::radial(ball_grid.clone(), 0, &phi)?;
    let c_phi1 = rayleigh_quotient(&field, &spec)?.value;
    let c_solver = match solve {
        Some(opts) => solve_ground_state(&spec, ball_grid, k_max, opts).ok().map(|r| r.c_value),
        None => None,
    };
    let c_upper = c_solver.map_or(c_phi1, |c| c.min(c_phi1));
    if halfplane_grid.s != 1.0 {
        return Err(invalid("the threshold compares against S_1; use s = 1"));
    }
    let hs = minimize_halfspace(halfplane_grid, &HalfSpaceOptions { p: None, ..hs_opts.clone() })?;
    let factor = threshold_factor();
    let rhs = factor * hs.report.value;
    Ok(ThresholdReport {
        m,
        lambda1,
        c_phi1,
        c_solver,
        c_upper,
        s1_upper: hs.report.value,
        factor,
        rhs,
        satisfied: c_upper < rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Bump;

    #[test]
    fn positive_and_homogeneous() {
        let g = HalfPlaneGrid::new(2.0, 1.0, 32, 32, 1.0).unwrap();
        let u = g.sample(|x1, x2| x1 * (2.0 - x1) * (1.0 - x2 * x2) * (x2 + 1.5));
        let a = halfspace_quotient(&u, &g, 1.0, None).unwrap();
        assert!(a.value > 0.0 && a.p == 10.0);
        let u7: Vec<f64> = u.iter().map(|v| 7.0 * v).collect();
        let b = halfspace_quotient(&u7, &g, 1.0, None).unwrap();
        assert!((a.value / b.value - 1.0).abs() < 1e-13);
        let flat = vec![1.0; g.len()];
        assert!(matches!(halfspace_quotient(&flat, &g, 1.0, None), Err(Error::BoundaryNotVanishing(_))));
    }

    #[test]
    fn sine_solve_inverts_apply() {
        let g = HalfPlaneGrid::new(3.0, 2.0, 12, 16, 1.5).unwrap();
        let prob = BoxProblem::new(g, 1.7, 10.0);
        let x: Vec<f64> = (0..g.len()).map(|i| ((i * 37 % 11) as f64 - 5.0) / 3.0).collect();
        let mut y = vec![0.0; g.len()];
        prob.apply(&x, &mut y);
        prob.solve(&mut y).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-11);
        }
        let e: f64 = {
            let mut ax = vec![0.0; g.len()];
            prob.apply(&x, &mut ax);
            x.iter().zip(&ax).map(|(a, b)| a * b).sum()
        };
        assert!((e / prob.energy(&x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn translation_by_whole_cells() {
        let g = HalfPlaneGrid::new(2.0, 2.0, 16, 32, 1.0).unwrap();
        let f = |x1: f64, x2: f64| {
            let b = Bump { lo: 0.1, hi: 1.5 };
            let c = Bump { lo: -1.0, hi: 0.5 };
            b.value(x1) * c.value(x2)
        };
        let u = g.sample(f);
        let shift = 4.0 * g.hy();
        let v = g.sample(|x1, x2| f(x1, x2 - shift));
        let a = halfspace_quotient(&u, &g, 1.0, None).unwrap().value;
        let b = halfspace_quotient(&v, &g, 1.0, None).unwrap().value;
        assert!((a / b - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bilinear_identity() {
        let g = HalfPlaneGrid::new(2.0, 2.0, 16, 16, 1.0).unwrap();
        let u = g.sample(|x1, x2| Bump { lo: 0.2, hi: 1.2 }.value(x1) * Bump { lo: -0.5, hi: 0.5 }.value(x2));
        let v = anisotropic_rescale(&u, &g, 1.0).unwrap();
        assert!(u.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-14));
        assert!(matches!(anisotropic_rescale(&u, &g, 0.5), Err(Error::SupportEscape(_))));
        assert!(anisotropic_rescale(&u, &g, 2.0).is_ok());
    }

    #[test]
    fn factor_values() {
        assert!((threshold_factor() - 1.319507910772894).abs() < 1e-12);
        assert_eq!(rescaling_factor(2.0, 1.0, 10.0), 1.0);
    }
}
