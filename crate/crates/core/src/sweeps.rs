//! Parameter sweeps and log-log slope fits.
//!
//! The concentration sweeps evaluate quotients of rescaled separable test
//! functions by products of one-dimensional quadratures, so no grid error
//! enters the fitted exponents.

use crate::discretize::RadialGrid;
use crate::error::{invalid, Error, Result};
use crate::exponents::critical_exponent_2s;
use crate::forms::{separable_polar_quotient, SeparablePolar};
use crate::problem::{ProblemParams, ProblemSpec};
use crate::profile::{Bump, Profile1D, RiemannianProfile};
use crate::quadrature::midpoint_nodes;
use crate::solver::{solve_ground_state, Classification, GroundStateReport, SolveOptions};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub value: f64,
    pub aux: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub param: String,
    /// Operation that produced `value`.
    pub provenance: String,
    pub aux_names: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Rows must have strictly monotone parameters and `aux_names.len()`
    /// auxiliary columns.
    pub fn new(param: &str, provenance: &str, aux_names: &[&str], rows: Vec<SweepRow>) -> Result<Self> {
        if rows.iter().any(|r| r.aux.len() != aux_names.len()) {
            return Err(invalid("every row needs one entry per aux column"));
        }
        let increasing = rows.windows(2).all(|w| w[1].param > w[0].param);
        let decreasing = rows.windows(2).all(|w| w[1].param < w[0].param);
        if !(increasing || decreasing) {
            return Err(invalid("sweep parameters must be strictly monotone"));
        }
        Ok(SweepTable {
            param: param.to_string(),
            provenance: provenance.to_string(),
            aux_names: aux_names.iter().map(|s| s.to_string()).collect(),
            rows,
        })
    }

    pub fn params(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.param).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest |residual| of the least-squares line in log-log coordinates.
    pub max_residual: f64,
    pub rows: usize,
}

/// Least squares of `log value` against `log param`.
pub fn slope_fit(table: &SweepTable) -> Result<SlopeFit> {
    fit_points(&table.params(), &table.values())
}

/// Fit without the row of largest parameter, which lies furthest from the
/// small-λ regime the predicted exponents describe.
pub fn asymptotic_slope_fit(table: &SweepTable) -> Result<SlopeFit> {
    let largest = table.params().into_iter().fold(f64::NEG_INFINITY, f64::max);
    let (params, values): (Vec<f64>, Vec<f64>) =
        table.rows.iter().filter(|r| r.param != largest).map(|r| (r.param, r.value)).unzip();
    fit_points(&params, &values)
}

pub fn fit_points(params: &[f64], values: &[f64]) -> Result<SlopeFit> {
    let n = params.len();
    if n < 3 {
        return Err(Error::TooFewRows(n));
    }
    if values.iter().any(|&v| !(v > 0.0)) || params.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::SignViolation);
    }
    let xs: Vec<f64> = params.iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|y| y.ln()).collect();
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(invalid("fit needs distinct parameters"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    Ok(SlopeFit { slope, intercept, max_residual, rows: n })
}

/// `(p(2N−3) − (4N+2))/p`.
pub fn boundary_concentration_exponent(dim: usize, p: f64) -> f64 {
    let n = dim as f64;
    (p * (2.0 * n - 3.0) - (4.0 * n + 2.0)) / p
}

/// `N + s/2 − 2 − (2N+s)/p`.
pub fn riemannian_concentration_exponent(dim: usize, s: f64, p: f64) -> f64 {
    let n = dim as f64;
    n + s / 2.0 - 2.0 - (2.0 * n + s) / p
}

/// Half-plane profile `v(y₁, y₂) = f(y₁) g(y₂)` pulled back to the disk by
/// `x = (λ²y₁ − 1, λ³y₂)`.
#[derive(Clone, Copy)]
pub struct ConcentrationProfile<'a> {
    pub f: &'a dyn Profile1D,
    pub g: &'a dyn Profile1D,
    pub nodes: usize,
}

impl ConcentrationProfile<'_> {
    fn check_support(&self, lambda: f64) -> Result<()> {
        let (a, b) = self.f.support();
        let (c, d) = self.g.support();
        if a < 0.0 {
            return Err(Error::SupportEscape("f must be supported in y1 > 0".into()));
        }
        let l2 = lambda * lambda;
        let y2 = c.abs().max(d.abs());
        for y1 in [a, b] {
            let x1 = l2 * y1 - 1.0;
            let x2 = l2 * lambda * y2;
            if x1 * x1 + x2 * x2 >= 1.0 {
                return Err(Error::SupportEscape("pulled-back support leaves the disk".into()));
            }
        }
        Ok(())
    }

    /// `R_{1,m,p}(v ∘ τ_λ)` on the unit disk.
    pub fn quotient(&self, lambda: f64, m: f64, p: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return Err(invalid("lambda must be positive"));
        }
        self.check_support(lambda)?;
        let n = self.nodes;
        let moments = |prof: &dyn Profile1D| -> [f64; 7] {
            let (lo, hi) = prof.support();
            let dx = (hi - lo) / n as f64;
            let mut acc = [0.0; 7];
            for x in midpoint_nodes(lo, hi, n) {
                let (v, d) = (prof.value(x), prof.derivative(x));
                acc[0] += v * v;
                acc[1] += d * d;
                acc[2] += x * v * v;
                acc[3] += x * x * v * v;
                acc[4] += x * x * d * d;
                acc[5] += x * v * d;
                acc[6] += v.abs().powf(p);
            }
            acc.map(|a| a * dx)
        };
        let f = moments(self.f);
        let g = moments(self.g);
        let l2 = lambda * lambda;
        // With x₁ = λ²y₁ − 1, x₂ = λ³y₂ and dx = λ⁵dy:
        // |∇u|² − |∂θu|² = λ⁻⁴(v₁² + 2y₁v₂²) − λ⁻²y₁²v₂² + 2(λ²y₁ − 1)λ⁻²y₂v₁v₂ − λ²y₂²v₁².
        // ∫ f f' = 0, so the cross term keeps only its y₁ f f' part.
        let leading = f[1] * g[0] + 2.0 * f[2] * g[1];
        let cross = 2.0 * f[5] * g[5];
        let energy = leading / (l2 * l2) - f[3] * g[1] / l2 + cross - l2 * f[1] * g[3];
        let jac = l2 * l2 * lambda;
        let numerator = jac * (energy + m * f[0] * g[0]);
        let denom = (jac * f[6] * g[6]).powf(2.0 / p);
        Ok(numerator / denom)
    }
}

pub fn default_concentration_profiles() -> (Bump, Bump) {
    (Bump { lo: 0.05, hi: 0.45 }, Bump { lo: -1.5, hi: 1.5 })
}

/// Quotient of boundary-concentrating test functions on the flat disk at
/// α = 1 for each λ.
pub fn boundary_concentration_sweep(p: f64, m: f64, lambdas: &[f64], nodes: usize) -> Result<SweepTable> {
    let (f, g) = default_concentration_profiles();
    let prof = ConcentrationProfile { f: &f, g: &g, nodes };
    let rows = lambdas
        .iter()
        .map(|&l| Ok(SweepRow { param: l, value: prof.quotient(l, m, p)?, aux: vec![] }))
        .collect::<Result<Vec<_>>>()?;
    SweepTable::new("lambda", "boundary_concentration", &[], rows)
}

/// `u(r, θ) = a((1 − r)/λ) b(θ/λ^{1+s/2})` on a rotationally symmetric
/// model, with `a` supported at positive distance from the boundary.
#[derive(Clone, Copy)]
pub struct RiemannianConcentration<'a> {
    pub profile: RiemannianProfile,
    pub a: &'a dyn Profile1D,
    pub b: &'a dyn Profile1D,
    pub nodes: usize,
}

impl RiemannianConcentration<'_> {
    /// `R^M_{1,m,p}(u_λ)` in two dimensions.
    pub fn quotient(&self, lambda: f64, m: f64, p: f64) -> Result<f64> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(invalid("lambda must lie in (0, 1)"));
        }
        self.profile.validate()?;
        let (lo, hi) = self.a.support();
        if lo < 0.0 || lambda * hi >= 0.5 {
            return Err(Error::SupportEscape("radial support must stay in (1/2, 1)".into()));
        }
        let s = self.profile.degeneracy_exponent();
        let mu = lambda.powf(1.0 + s / 2.0);
        let (c, d) = self.b.support();
        if mu * c.abs().max(d.abs()) >= PI {
            return Err(Error::SupportEscape("angular support exceeds (-π, π)".into()));
        }
        let n = self.nodes;
        // t = (1 − r)/λ.
        let dt = (hi - lo) / n as f64;
        let mut r = [0.0; 4];
        for t in midpoint_nodes(lo, hi, n) {
            let dist = lambda * t;
            let psi = 1.0 - self.profile.boundary_defect(dist);
            let (v, dv) = (self.a.value(t), self.a.derivative(t));
            // 1/ψ² − 1 without cancellation.
            let defect = self.profile.boundary_defect(dist);
            let excess = defect * (2.0 - defect) / (psi * psi);
            r[0] += dv * dv * psi;
            r[1] += excess * v * v * psi;
            r[2] += v * v * psi;
            r[3] += v.abs().powf(p) * psi;
        }
        let r = r.map(|x| x * dt);
        let (c, d) = self.b.support();
        let dphi = (d - c) / n as f64;
        let mut a = [0.0; 3];
        for x in midpoint_nodes(c, d, n) {
            let (v, dv) = (self.b.value(x), self.b.derivative(x));
            a[0] += v * v;
            a[1] += dv * dv;
            a[2] += v.abs().powf(p);
        }
        let a = a.map(|x| x * dphi);
        let jac = lambda * mu;
        let energy = r[0] * a[0] / (lambda * lambda) + r[1] * a[1] / (mu * mu) + m * r[2] * a[0];
        Ok(jac * energy / (jac * r[3] * a[2]).powf(2.0 / p))
    }
}

pub fn riemannian_concentration_sweep(
    profile: RiemannianProfile,
    p: f64,
    m: f64,
    lambdas: &[f64],
    nodes: usize,
) -> Result<SweepTable> {
    let a = Bump { lo: 0.05, hi: 0.45 };
    let b = Bump { lo: -1.0, hi: 1.0 };
    let conc = RiemannianConcentration { profile, a: &a, b: &b, nodes };
    let rows = lambdas
        .iter()
        .map(|&l| Ok(SweepRow { param: l, value: conc.quotient(l, m, p)?, aux: vec![] }))
        .collect::<Result<Vec<_>>>()?;
    SweepTable::new("lambda", "riemannian_concentration", &[], rows)
}

/// Largest ε in {2⁻¹, …, 2⁻²⁰} with `α² − g_{N−1}/r² ≥ ε` and `g ≥ 1/2`
/// on `(1 − ε, 1) × (π/2 − ε, π/2 + ε)^{N−2}`.
pub fn admissible_epsilon(alpha: f64, dim: usize) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(invalid("the supercritical sweep needs alpha > 1"));
    }
    if dim < 2 {
        return Err(invalid("dimension must be at least 2"));
    }
    let polar = (dim - 2) as i32;
    // Σ_{i=1}^{N−2} (N−1−i): total power of sin in g.
    let g_power = (1..=dim.saturating_sub(2)).map(|i| (dim - 1 - i) as i32).sum::<i32>();
    for j in 1..=20 {
        let eps = 0.5f64.powi(j);
        let r = 1.0 - eps;
        let sin_min = eps.cos();
        let g_min = r.powi(dim as i32 - 1) * sin_min.powi(g_power);
        let coeff_max = 1.0 / (r * r * sin_min.powi(2 * polar));
        if alpha * alpha - coeff_max >= eps && g_min >= 0.5 {
            return Ok(eps);
        }
    }
    Err(Error::NoAdmissibleEpsilon(alpha))
}

/// Quotients of `φ(r) ψ(ϑ₁)⋯ψ(ϑ_{N−2}) sin(kθ)` for each k. The aux
/// columns hold `d(k) = c − numerator + mass` and `d(k)/d(k_prev)`.
pub fn supercritical_alpha_sweep(alpha: f64, ks: &[usize], dim: usize, m: f64, p: f64, nodes: usize) -> Result<SweepTable> {
    let eps = admissible_epsilon(alpha, dim)?;
    let radial = Bump { lo: 1.0 - eps, hi: 1.0 };
    let polar = Bump { lo: FRAC_PI_2 - eps, hi: FRAC_PI_2 + eps };
    let mut rows = Vec::with_capacity(ks.len());
    let mut prev: Option<f64> = None;
    for &k in ks {
        let b = separable_polar_quotient(&SeparablePolar {
            dim,
            radial: &radial,
            polar: if dim > 2 { Some(&polar) } else { None },
            k,
            alpha,
            m,
            p,
            nodes,
        })?;
        let d = -b.angular;
        let ratio = prev.map_or(f64::NAN, |q| d / q);
        prev = Some(d);
        rows.push(SweepRow { param: k as f64, value: b.value, aux: vec![d, ratio, eps] });
    }
    SweepTable::new("k", "separable_polar_quotient", &["d_k", "d_ratio", "epsilon"], rows)
}

/// Classification as a number for table columns.
pub fn classification_code(c: Classification) -> f64 {
    match c {
        Classification::Radial => 0.0,
        Classification::Marginal => 0.5,
        Classification::Nonradial => 1.0,
    }
}

fn solver_row(param: f64, rep: &GroundStateReport) -> SweepRow {
    let gap = (rep.radial_c - rep.c_value) / rep.radial_c.abs();
    SweepRow {
        param,
        value: rep.c_value,
        aux: vec![rep.radial_c, gap, rep.nonradial_energy(), classification_code(rep.classification)],
    }
}

pub const SOLVER_AUX: [&str; 4] = ["radial_c", "gap", "nonradial_energy", "nonradial"];

/// Ground state of `template` with α replaced.
pub fn alpha_point(template: &ProblemSpec, alpha: f64, grid: Arc<RadialGrid>, k_max: usize, opts: &SolveOptions) -> Result<SweepRow> {
    let spec = template.with_params(ProblemParams { alpha, ..template.params })?;
    Ok(solver_row(alpha, &solve_ground_state(&spec, grid, k_max, opts)?))
}

/// Ground state of `template` with m replaced.
pub fn m_point(template: &ProblemSpec, m: f64, grid: Arc<RadialGrid>, k_max: usize, opts: &SolveOptions) -> Result<SweepRow> {
    let spec = template.with_params(ProblemParams { m, ..template.params })?;
    Ok(solver_row(m, &solve_ground_state(&spec, grid, k_max, opts)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSweep {
    pub table: SweepTable,
    /// Nonincreasing within the slack.
    pub monotone: bool,
    /// Largest increase `C(α_{i+1}) − C(α_i)` relative to `C(α_i)`.
    pub worst_increase: f64,
    /// Last Radial α and first Nonradial α when the verdict flips.
    pub flip: Option<(f64, f64)>,
}

pub const MONOTONE_SLACK: f64 = 1e-9;

pub fn analyse_alpha_table(table: SweepTable) -> AlphaSweep {
    let mut worst = f64::NEG_INFINITY;
    for w in table.rows.windows(2) {
        worst = worst.max((w[1].value - w[0].value) / w[0].value.abs());
    }
    let monotone = table.rows.len() < 2 || worst <= MONOTONE_SLACK;
    let flip = table
        .rows
        .windows(2)
        .find(|w| w[0].aux[3] == 0.0 && w[1].aux[3] == 1.0)
        .map(|w| (w[0].param, w[1].param));
    AlphaSweep { table, monotone, worst_increase: worst, flip }
}

pub fn alpha_sweep(
    template: &ProblemSpec,
    alphas: &[f64],
    grid: Arc<RadialGrid>,
    k_max: usize,
    opts: &SolveOptions,
) -> Result<AlphaSweep> {
    if alphas.iter().any(|a| !(0.0..=1.0).contains(a)) || alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("alphas must increase within [0, 1]"));
    }
    let rows = alphas
        .iter()
        .map(|&a| alpha_point(template, a, grid.clone(), k_max, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(analyse_alpha_table(SweepTable::new("alpha", "solve_ground_state", &SOLVER_AUX, rows)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MSweep {
    pub table: SweepTable,
    pub first_nonradial: Option<f64>,
    /// Observation only: once Nonradial, later samples stay Nonradial.
    pub verdicts_monotone: bool,
}

pub fn analyse_m_table(table: SweepTable) -> MSweep {
    let codes: Vec<f64> = table.rows.iter().map(|r| r.aux[3]).collect();
    let first = table.rows.iter().find(|r| r.aux[3] == 1.0).map(|r| r.param);
    let verdicts_monotone = codes.windows(2).all(|w| !(w[0] == 1.0 && w[1] != 1.0));
    MSweep { table, first_nonradial: first, verdicts_monotone }
}

pub fn m_sweep(
    template: &ProblemSpec,
    ms: &[f64],
    grid: Arc<RadialGrid>,
    k_max: usize,
    opts: &SolveOptions,
) -> Result<MSweep> {
    if ms.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("masses must increase"));
    }
    let rows = ms
        .iter()
        .map(|&m| m_point(template, m, grid.clone(), k_max, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(analyse_m_table(SweepTable::new("m", "solve_ground_state", &SOLVER_AUX, rows)?))
}

/// `2_s*` in the plane, the exponent at which the Riemannian slope vanishes.
pub fn planar_critical(s: f64) -> Result<f64> {
    critical_exponent_2s(2, s)
}
