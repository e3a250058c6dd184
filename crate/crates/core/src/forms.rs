//! Per-mode quadratic forms of −Δ + α²∂θ² + m, the Rayleigh quotient with
//! its gradient and Euler–Lagrange residual, and separable polar test
//! functions in general dimension.
//!
//! For a field with coefficient vector `c_s` in slot `s` (angular index k)
//! the numerator of the quotient is `Σ_s w_s c_sᵀ S_k c_s` with angular
//! weights `w_0 = 2π`, `w_k = π`. `S_k` is the symmetric tridiagonal energy
//! matrix of
//!
//! ```text
//! Q_k(f) = ∫ (|f'|² + [1/ψ² − α²] k² f² + m f²) ψ dr
//! ```
//!
//! built from face fluxes on the staggered grid, with ghost values
//! mirroring a Dirichlet condition at r = 1 (and at the inner radius of an
//! annulus) and no flux through the center.

use crate::discretize::{
    lp_integral, AngularModeSet, AngularTransform, ModeField, RadialGrid,
};
use crate::error::{invalid, Error, Result};
use crate::problem::{DomainSpec, ProblemParams, ProblemSpec};
use crate::profile::{Profile1D, RiemannianProfile};
use crate::quadrature::{midpoint, midpoint_nodes};
use crate::tridiag::SymTridiag;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Radial operator of one angular mode.
#[derive(Debug, Clone)]
pub struct ModeOperator {
    pub k: usize,
    pub alpha: f64,
    pub m: f64,
    /// Matrix of `∫ (|f'|² + k² f²/ψ²) ψ dr`.
    pub gradient: SymTridiag,
    /// Full energy matrix `S_k`, including the angular and mass parts.
    pub energy: SymTridiag,
    /// Mass-matrix diagonal `h ψ(r_j)`.
    pub mass: Vec<f64>,
    /// `k² (1/ψ(r_j)² − α²)`.
    pub potential: Vec<f64>,
}

impl ModeOperator {
    /// Stencil `(sub, diag, super)` of `M⁻¹ S_k`, the finite-difference form
    /// of `−(1/ψ)(ψ f')' + [1/ψ² − α²] k² f + m f`.
    pub fn operator_coefficients(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.mass.len();
        let diag = (0..n).map(|j| self.energy.diag[j] / self.mass[j]).collect();
        let sub = (1..n).map(|j| self.energy.off[j - 1] / self.mass[j]).collect();
        let sup = (0..n - 1).map(|j| self.energy.off[j] / self.mass[j]).collect();
        (sub, diag, sup)
    }

    /// Symmetric similarity `M^{-1/2} S_k M^{-1/2}`, whose eigenvalues are
    /// those of the mode operator.
    pub fn normalized(&self) -> SymTridiag {
        let s: Vec<f64> = self.mass.iter().map(|w| 1.0 / w.sqrt()).collect();
        let diag = self.energy.diag.iter().zip(&s).map(|(d, a)| d * a * a).collect();
        let off = self
            .energy
            .off
            .iter()
            .enumerate()
            .map(|(j, o)| o * s[j] * s[j + 1])
            .collect();
        SymTridiag::new(diag, off)
    }
}

/// Builds the tridiagonal energy matrix for mode `k`.
pub fn assemble_mode_operator(
    grid: &RadialGrid,
    profile: RiemannianProfile,
    k: usize,
    alpha: f64,
    m: f64,
) -> Result<ModeOperator> {
    if grid.profile != profile {
        return Err(Error::GridMismatch("grid was built for a different profile".into()));
    }
    if !(alpha >= 0.0) || !m.is_finite() {
        return Err(invalid("alpha must be nonnegative and m finite"));
    }
    let n = grid.len();
    let h = grid.h;
    let faces = grid.face_weights();
    let kk = (k * k) as f64;
    let mass: Vec<f64> = grid.weights().iter().map(|w| h * w).collect();
    let potential: Vec<f64> =
        grid.weights().iter().map(|w| kk * (1.0 / (w * w) - alpha * alpha)).collect();

    let mut gdiag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    for i in 1..n {
        let c = faces[i] / h;
        gdiag[i - 1] += c;
        gdiag[i] += c;
        off[i - 1] = -c;
    }
    gdiag[n - 1] += 2.0 * faces[n] / h;
    if grid.has_inner_boundary() {
        gdiag[0] += 2.0 * faces[0] / h;
    }
    for (j, w) in grid.weights().iter().enumerate() {
        gdiag[j] += kk * h / w;
    }
    let gradient = SymTridiag::new(gdiag.clone(), off.clone());
    let ediag = gdiag
        .iter()
        .zip(&mass)
        .map(|(g, mj)| g + (m - alpha * alpha * kk) * mj)
        .collect();
    let energy = SymTridiag::new(ediag, off);
    Ok(ModeOperator { k, alpha, m, gradient, energy, mass, potential })
}

/// Numerator parts, L^p denominator and value of the Rayleigh quotient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientBreakdown {
    /// ∫ |∇u|²
    pub dirichlet: f64,
    /// α² ∫ |∂θ u|²
    pub angular: f64,
    /// m ∫ u²
    pub mass: f64,
    /// ‖u‖_p²
    pub denom: f64,
    pub value: f64,
}

impl QuotientBreakdown {
    pub fn numerator(&self) -> f64 {
        self.dirichlet - self.angular + self.mass
    }
}

/// Discrete Euler–Lagrange residual of `(−Δ + α²∂θ² + m)u = |u|^{p−2}u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// L² norm of `(A + m)u − |u|^{p−2}u` over the resolved modes.
    pub absolute: f64,
    /// `absolute / ‖|u|^{p−2}u‖₂`.
    pub scaled: f64,
}

/// Checks that a grid discretizes the domain of `spec`.
pub fn check_grid(spec: &ProblemSpec, grid: &RadialGrid) -> Result<()> {
    let (lo, hi) = spec.domain.radial_interval();
    if grid.profile != spec.domain.profile() || grid.r_lo != lo || grid.r_hi != hi {
        return Err(Error::GridMismatch("grid does not match the problem domain".into()));
    }
    Ok(())
}

/// The discrete quotient for a fixed (spec, grid, K): mode operators and
/// transform tables are built once and shared by every evaluation.
#[derive(Debug, Clone)]
pub struct DiscreteForm {
    pub spec: ProblemSpec,
    pub grid: Arc<RadialGrid>,
    pub k_max: usize,
    operators: Vec<ModeOperator>,
    transform: AngularTransform,
}

impl DiscreteForm {
    pub fn new(spec: ProblemSpec, grid: Arc<RadialGrid>, k_max: usize) -> Result<Self> {
        Self::with_angles(spec, grid, k_max, AngularModeSet { k_max }.oversampled_angles())
    }

    pub fn with_angles(
        spec: ProblemSpec,
        grid: Arc<RadialGrid>,
        k_max: usize,
        m_theta: usize,
    ) -> Result<Self> {
        check_grid(&spec, &grid)?;
        Self::build(spec, grid, k_max, m_theta)
    }

    /// Form on an arbitrary radial grid, for example a disk of radius other
    /// than 1. The domain recorded in `spec` is then only nominal.
    pub fn on_grid(params: ProblemParams, grid: Arc<RadialGrid>, k_max: usize) -> Result<Self> {
        let spec = ProblemSpec { domain: DomainSpec::FlatDisk, params };
        Self::build(spec, grid, k_max, AngularModeSet { k_max }.oversampled_angles())
    }

    fn build(spec: ProblemSpec, grid: Arc<RadialGrid>, k_max: usize, m_theta: usize) -> Result<Self> {
        spec.params.validate()?;
        if spec.params.dim != 2 {
            return Err(invalid("full fields are planar; use separable_polar_quotient for N >= 3"));
        }
        let prm = spec.params;
        let operators = (0..=k_max)
            .map(|k| assemble_mode_operator(&grid, grid.profile, k, prm.alpha, prm.m))
            .collect::<Result<Vec<_>>>()?;
        let transform = AngularTransform::new(k_max, m_theta)?;
        Ok(DiscreteForm { spec, grid, k_max, operators, transform })
    }

    pub fn operator(&self, k: usize) -> &ModeOperator {
        &self.operators[k]
    }

    pub fn transform(&self) -> &AngularTransform {
        &self.transform
    }

    pub fn zeros(&self) -> ModeField {
        ModeField::zeros(self.grid.clone(), self.k_max)
    }

    fn check(&self, field: &ModeField) -> Result<()> {
        if field.k_max() != self.k_max || *field.grid != *self.grid {
            return Err(Error::GridMismatch("field layout differs from the form".into()));
        }
        if field.is_zero() {
            return Err(Error::ZeroField);
        }
        Ok(())
    }

    /// `Σ_s w_s c_sᵀ S_k c_s`, the quotient numerator.
    pub fn energy(&self, field: &ModeField) -> f64 {
        (0..field.slots())
            .map(|s| {
                let op = &self.operators[AngularModeSet::mode_of(s)];
                AngularModeSet::angular_norm(s) * op.energy.quadratic_form(field.slot(s))
            })
            .sum()
    }

    /// Numerator carried by each angular index k = 0..=K.
    pub fn mode_energies(&self, field: &ModeField) -> Vec<f64> {
        let mut out = vec![0.0; self.k_max + 1];
        for s in 0..field.slots() {
            let k = AngularModeSet::mode_of(s);
            out[k] += AngularModeSet::angular_norm(s)
                * self.operators[k].energy.quadratic_form(field.slot(s));
        }
        out
    }

    fn physical(&self, field: &ModeField) -> Vec<f64> {
        let mut values = vec![0.0; field.n() * self.transform.m_theta];
        self.transform.to_physical_into(field, &mut values);
        values
    }

    /// ∫ |u|^p on the oversampled grid.
    pub fn lp_integral(&self, field: &ModeField) -> f64 {
        let values = self.physical(field);
        lp_integral(&self.grid, &values, self.transform.m_theta, self.spec.params.p)
    }

    pub fn breakdown(&self, field: &ModeField) -> Result<QuotientBreakdown> {
        self.check(field)?;
        let prm = self.spec.params;
        let (mut dirichlet, mut angular, mut l2) = (0.0, 0.0, 0.0);
        for s in 0..field.slots() {
            let k = AngularModeSet::mode_of(s);
            let w = AngularModeSet::angular_norm(s);
            let op = &self.operators[k];
            let c = field.slot(s);
            let weighted: f64 = c.iter().zip(&op.mass).map(|(x, mj)| x * x * mj).sum();
            dirichlet += w * op.gradient.quadratic_form(c);
            angular += w * (k * k) as f64 * weighted;
            l2 += w * weighted;
        }
        let denom = self.lp_integral(field).powf(2.0 / prm.p);
        let angular = prm.alpha * prm.alpha * angular;
        let mass = prm.m * l2;
        let value = (dirichlet - angular + mass) / denom;
        Ok(QuotientBreakdown { dirichlet, angular, mass, denom, value })
    }

    /// Load vector `b_s = w_s M ĝ_s` of `g = |u|^{q−2}u` where `ĝ` is the
    /// truncated angular projection. Also returns ∫|u|^q.
    pub fn nonlinear_load(&self, field: &ModeField, q: f64) -> (ModeField, f64) {
        let m_theta = self.transform.m_theta;
        let dtheta = 2.0 * PI / m_theta as f64;
        let mut values = self.physical(field);
        let mut integral = 0.0;
        for (j, w) in self.grid.weights().iter().enumerate() {
            let scale = self.grid.h * w * dtheta;
            let row = &mut values[j * m_theta..(j + 1) * m_theta];
            let mut acc = 0.0;
            for v in row.iter_mut() {
                let a = v.abs();
                let g = if q == 2.0 { *v } else if q == 4.0 { a * a * *v } else { a.powf(q - 2.0) * *v };
                acc += g * *v;
                *v = g * scale;
            }
            integral += acc * scale;
        }
        let mut load = self.zeros();
        self.transform.inner_products_into(&values, field.n(), load.coeffs_mut());
        (load, integral)
    }

    /// Gradient of the quotient with respect to the mode coefficients.
    pub fn gradient(&self, field: &ModeField) -> Result<ModeField> {
        let q = self.breakdown(field)?;
        let p = self.spec.params.p;
        let (load, integral) = self.nonlinear_load(field, p);
        let factor = 2.0 * q.value * integral.powf(2.0 / p - 1.0);
        let mut grad = self.zeros();
        let mut tmp = vec![0.0; field.n()];
        for s in 0..field.slots() {
            let op = &self.operators[AngularModeSet::mode_of(s)];
            op.energy.apply(field.slot(s), &mut tmp);
            let w = AngularModeSet::angular_norm(s);
            let b = load.slot(s);
            for (j, g) in grad.slot_mut(s).iter_mut().enumerate() {
                *g = (2.0 * w * tmp[j] - factor * b[j]) / q.denom;
            }
        }
        Ok(grad)
    }

    /// Residual of the equation for the field taken as given (no rescaling).
    pub fn residual(&self, field: &ModeField) -> Result<ResidualReport> {
        self.check(field)?;
        let (load, _) = self.nonlinear_load(field, self.spec.params.p);
        let mut tmp = vec![0.0; field.n()];
        let (mut res2, mut rhs2) = (0.0, 0.0);
        for s in 0..field.slots() {
            let op = &self.operators[AngularModeSet::mode_of(s)];
            let w = AngularModeSet::angular_norm(s);
            op.energy.apply(field.slot(s), &mut tmp);
            for ((t, b), mass) in tmp.iter().zip(load.slot(s)).zip(&op.mass) {
                // Sc − w⁻¹b is M times the pointwise residual.
                let g = b / w;
                let r = t - g;
                res2 += w * r * r / mass;
                rhs2 += w * g * g / mass;
            }
        }
        let absolute = res2.sqrt();
        let scaled = if rhs2 > 0.0 { absolute / rhs2.sqrt() } else { f64::INFINITY };
        Ok(ResidualReport { absolute, scaled })
    }
}

pub fn rayleigh_quotient(field: &ModeField, spec: &ProblemSpec) -> Result<QuotientBreakdown> {
    DiscreteForm::new(*spec, field.grid.clone(), field.k_max())?.breakdown(field)
}

pub fn quotient_gradient(field: &ModeField, spec: &ProblemSpec) -> Result<ModeField> {
    DiscreteForm::new(*spec, field.grid.clone(), field.k_max())?.gradient(field)
}

pub fn euler_lagrange_residual(field: &ModeField, spec: &ProblemSpec) -> Result<ResidualReport> {
    DiscreteForm::new(*spec, field.grid.clone(), field.k_max())?.residual(field)
}

/// Separable test function `φ(r) ψ(ϑ₁)⋯ψ(ϑ_{N−2}) sin(kθ)` in N-dimensional
/// polar coordinates.
pub struct SeparablePolar<'a> {
    pub dim: usize,
    pub radial: &'a dyn Profile1D,
    /// Profile in each polar angle ϑ_i ∈ (0, π); ignored when N = 2.
    pub polar: Option<&'a dyn Profile1D>,
    pub k: usize,
    pub alpha: f64,
    pub m: f64,
    pub p: f64,
    /// Midpoint nodes per one-dimensional integral.
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparableBreakdown {
    /// k-independent part of the gradient energy.
    pub c: f64,
    /// `∫ (g_{N−1}/r² − α²) |∂θ u|² g`; negative where rotation dominates.
    pub angular: f64,
    pub mass: f64,
    pub numerator: f64,
    pub denom: f64,
    pub value: f64,
}

/// `∫₀^{2π} |sin θ|^p dθ`.
fn sine_power_integral(p: f64) -> f64 {
    midpoint(0.0, 2.0 * PI, 1 << 14, |t| t.sin().abs().powf(p))
}

pub fn separable_polar_quotient(t: &SeparablePolar<'_>) -> Result<SeparableBreakdown> {
    if t.dim < 2 {
        return Err(invalid("dimension must be at least 2"));
    }
    if t.k == 0 {
        return Err(invalid("separable polar test functions need k >= 1"));
    }
    if !(t.p >= 2.0) || t.nodes == 0 {
        return Err(invalid("p must be at least 2 and nodes positive"));
    }
    let (a, b) = t.radial.support();
    if a < 0.0 || b > 1.0 {
        return Err(Error::SupportEscape("radial profile must live in [0, 1]".into()));
    }
    let n = t.nodes;
    let nm1 = (t.dim - 1) as i32;
    let rad = |f: &dyn Fn(f64) -> f64| midpoint(a, b, n, f);
    let r_grad = rad(&|r| t.radial.derivative(r).powi(2) * r.powi(nm1));
    let r_l2 = rad(&|r| t.radial.value(r).powi(2) * r.powi(nm1));
    let r_inv = rad(&|r| t.radial.value(r).powi(2) * r.powi(nm1 - 2));
    let r_p = rad(&|r| t.radial.value(r).abs().powf(t.p) * r.powi(nm1));

    // For each polar index i = 1..N−2, with weight sin^{N−1−i}:
    // (∫ψ², ∫ψ'², ∫ψ²/sin², ∫|ψ|^p).
    let mut polar = Vec::new();
    if t.dim > 2 {
        let prof = t.polar.ok_or_else(|| invalid("N >= 3 needs a polar-angle profile"))?;
        let (lo, hi) = prof.support();
        if lo < 0.0 || hi > PI {
            return Err(Error::SupportEscape("polar profile must live in [0, π]".into()));
        }
        for i in 1..=t.dim - 2 {
            let e = (t.dim - 1 - i) as i32;
            let mut acc = [0.0; 4];
            for x in midpoint_nodes(lo, hi, n) {
                let (v, d, sn) = (prof.value(x), prof.derivative(x), x.sin());
                let w = sn.powi(e);
                acc[0] += v * v * w;
                acc[1] += d * d * w;
                acc[2] += v * v * w / (sn * sn);
                acc[3] += v.abs().powf(t.p) * w;
            }
            let dx = (hi - lo) / n as f64;
            polar.push(acc.map(|x| x * dx));
        }
    }
    let prod = |f: &dyn Fn(usize, &[f64; 4]) -> f64| -> f64 {
        polar.iter().enumerate().map(|(i, q)| f(i, q)).product()
    };
    let a_all = prod(&|_, q| q[0]);
    let inv_all = prod(&|_, q| q[2]);
    let p_all = prod(&|_, q| q[3]);
    let mut polar_grad = 0.0;
    for i in 0..polar.len() {
        polar_grad += prod(&|j, q| if j < i { q[2] } else if j == i { q[1] } else { q[0] });
    }

    let theta_l2 = PI;
    let theta_grad = (t.k * t.k) as f64 * PI;
    let c = theta_l2 * (r_grad * a_all + r_inv * polar_grad);
    let angular = theta_grad * (r_inv * inv_all - t.alpha * t.alpha * r_l2 * a_all);
    let mass = t.m * theta_l2 * r_l2 * a_all;
    let numerator = c + angular + mass;
    let denom = (r_p * p_all * sine_power_integral(t.p)).powf(2.0 / t.p);
    Ok(SeparableBreakdown { c, angular, mass, numerator, denom, value: numerator / denom })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(n: usize) -> Arc<RadialGrid> {
        Arc::new(RadialGrid::new(0.0, 1.0, n, RiemannianProfile::Flat).unwrap())
    }

    #[test]
    fn potentials() {
        let g = disk(64);
        let a = assemble_mode_operator(&g, RiemannianProfile::Flat, 0, 0.0, 0.0).unwrap();
        let b = assemble_mode_operator(&g, RiemannianProfile::Flat, 0, 0.9, 0.0).unwrap();
        assert_eq!(a.energy, b.energy);
        let op = assemble_mode_operator(&g, RiemannianProfile::Flat, 1, 1.0, 0.0).unwrap();
        for (r, v) in g.nodes().iter().zip(&op.potential) {
            assert!((v - (1.0 / (r * r) - 1.0)).abs() < 1e-12 && *v >= 0.0);
        }
        let mid = RadialGrid::new(0.5, 1.0, 1, RiemannianProfile::Flat).unwrap();
        let op3 = assemble_mode_operator(&mid, RiemannianProfile::Flat, 2, 0.5, 0.0).unwrap();
        assert!((op3.potential[0] - 4.0 * (1.0 / 0.5625 - 0.25)).abs() < 1e-12);
        assert!(assemble_mode_operator(&g, RiemannianProfile::Hemisphere, 0, 0.0, 0.0).is_err());
    }

    #[test]
    fn symmetric_after_similarity() {
        let g = disk(32);
        let op = assemble_mode_operator(&g, RiemannianProfile::Flat, 3, 0.7, 2.0).unwrap();
        let (sub, _, sup) = op.operator_coefficients();
        for j in 0..31 {
            let lhs = sup[j] * op.mass[j];
            let rhs = sub[j] * op.mass[j + 1];
            assert!((lhs - rhs).abs() < 1e-13 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn radial_quotient_ignores_alpha() {
        let g = disk(128);
        let u = ModeField::from_fn(g, 4, |r, _| (1.0 - r * r) * (1.0 + r));
        let a = rayleigh_quotient(&u, &ProblemSpec::disk(0.0, 1.0, 4.0).unwrap()).unwrap();
        let b = rayleigh_quotient(&u, &ProblemSpec::disk(1.0, 1.0, 4.0).unwrap()).unwrap();
        assert_eq!(a.value, b.value);
        let c = rayleigh_quotient(&u.scaled(3.0), &ProblemSpec::disk(1.0, 1.0, 4.0).unwrap())
            .unwrap();
        assert!((c.value / b.value - 1.0).abs() < 1e-13);
        assert!((b.value * b.denom - b.numerator()).abs() < 1e-12 * b.numerator().abs());
    }

    #[test]
    fn numerator_is_second_order() {
        // u = (1 − r²) r cos θ: ∫|∇u|² = π (∫ (u_r² + u²/r²) r dr) = π·(2/3)
        let spec = ProblemSpec::disk(0.0, 0.0, 2.0).unwrap();
        let err = |n: usize| {
            let u = ModeField::from_fn(disk(n), 2, |r, t| (1.0 - r * r) * r * t.cos());
            (rayleigh_quotient(&u, &spec).unwrap().dirichlet - 2.0 * PI / 3.0).abs()
        };
        let ratio = err(64) / err(128);
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn euler_identity_and_homogeneity() {
        let spec = ProblemSpec::disk(0.6, 1.5, 3.5).unwrap();
        let u = ModeField::from_fn(disk(48), 3, |r, t| {
            (1.0 - r * r) * (1.0 + 0.3 * r * t.cos() + 0.2 * r * r * (2.0 * t).sin())
        });
        let g = quotient_gradient(&u, &spec).unwrap();
        let q = rayleigh_quotient(&u, &spec).unwrap();
        assert!(g.dot(&u).abs() < 1e-10 * q.value.abs());
        let g3 = quotient_gradient(&u.scaled(3.0), &spec).unwrap();
        for (a, b) in g.coeffs().iter().zip(g3.coeffs()) {
            assert!((a / 3.0 - b).abs() < 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn rotation_invariance() {
        let spec = ProblemSpec::disk(0.8, 0.0, 4.0).unwrap();
        let u = ModeField::from_fn(disk(64), 4, |r, t| {
            (1.0 - r) * (1.0 + r * t.cos() + 0.5 * r * r * (3.0 * t).sin())
        });
        let q = rayleigh_quotient(&u, &spec).unwrap().value;
        let q2 = rayleigh_quotient(&u.rotated(0.37), &spec).unwrap().value;
        assert!((q - q2).abs() < 1e-12 * q.abs());
    }

    #[test]
    fn residual_of_linear_eigenfunction() {
        let g = disk(256);
        let op = assemble_mode_operator(&g, RiemannianProfile::Flat, 0, 0.0, 0.0).unwrap();
        let sym = op.normalized();
        let lam = sym.lowest_eigenvalue(1e-15, 200).unwrap();
        let v = sym.eigenvector(lam, 4).unwrap();
        let f: Vec<f64> = v.iter().zip(&op.mass).map(|(x, w)| x / w.sqrt()).collect();
        let u = ModeField::radial(g, 2, &f).unwrap();
        let spec = ProblemSpec::disk(0.3, 1.0 - lam, 2.0).unwrap();
        let r = euler_lagrange_residual(&u, &spec).unwrap();
        assert!(r.scaled < 1e-9, "{r:?}");
        let w = ModeField::from_fn(u.grid.clone(), 2, |r, t| (1.0 - r) * (2.0 + t.sin()));
        assert!(euler_lagrange_residual(&w, &spec).unwrap().scaled > 1e-3);
    }

    #[test]
    fn separable_matches_mode_field() {
        use crate::profile::Bump;
        let bump = Bump::new(0.2, 0.9).unwrap();
        let t = SeparablePolar {
            dim: 2, radial: &bump, polar: None, k: 1, alpha: 0.0, m: 0.0, p: 2.0, nodes: 4096,
        };
        let sep = separable_polar_quotient(&t).unwrap();
        let spec = ProblemSpec::new(DomainSpec::FlatDisk, ProblemParams::planar(0.0, 0.0, 2.0))
            .unwrap();
        let value = |n: usize| {
            let g = disk(n);
            let vals: Vec<f64> = g.nodes().iter().map(|&r| bump.value(r)).collect();
            let mut u = ModeField::zeros(g, 1);
            u.slot_mut(2).copy_from_slice(&vals);
            rayleigh_quotient(&u, &spec).unwrap().value
        };
        // Richardson extrapolation removes the O(h²) term of the stencil.
        let (a, b) = (value(2048), value(4096));
        let extrapolated = (4.0 * b - a) / 3.0;
        assert!((extrapolated / sep.value - 1.0).abs() < 1e-8, "{extrapolated} {}", sep.value);
    }

    #[test]
    fn separable_nonnegative_at_rest_in_three_dimensions() {
        use crate::profile::Bump;
        let phi = Bump::new(0.3, 0.95).unwrap();
        let psi = Bump::new(1.0, 2.1).unwrap();
        for k in [1, 3, 9] {
            let t = SeparablePolar {
                dim: 3, radial: &phi, polar: Some(&psi), k, alpha: 0.0, m: 0.0, p: 3.0, nodes: 2048,
            };
            assert!(separable_polar_quotient(&t).unwrap().value > 0.0);
        }
    }
}
