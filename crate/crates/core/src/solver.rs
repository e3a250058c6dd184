//! λ₁, radial and full ground states, symmetry classification, the annulus
//! second-variation test and the rescaling check.
//!
//! Minimization starts from the normalized fixed point `S x⁺ = M |u|^{p−2}u`
//! followed by L^p normalization. That map is a unit gradient step on the
//! quotient preconditioned by the energy matrix `S`. The iteration adds
//! Polak–Ribière momentum to the preconditioned gradient and a line search
//! whose first trial is the relaxed fixed-point step, so that large mass
//! parameters, where the spectrum of `S` clusters, stay affordable. Accepted
//! iterates never increase the quotient beyond rounding.

use crate::discretize::{AngularModeSet, ModeField, RadialGrid};
use crate::error::{invalid, Error, Result};
use crate::exponents::critical_exponent_2s;
use crate::forms::{assemble_mode_operator, DiscreteForm, QuotientBreakdown};
use crate::problem::{DomainSpec, ProblemParams, ProblemSpec};
use crate::tridiag::SymTridiag;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Initial guess of one minimization run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "snake_case")]
pub enum StartKind {
    RadialBump,
    /// Radial bump times `1 + δ cos θ`.
    BrokenBump(f64),
    Random(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol_quotient: f64,
    pub tol_residual: f64,
    pub max_iter: usize,
    pub starts: Vec<StartKind>,
    pub damping: f64,
    pub tol_break: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol_quotient: 1e-10,
            tol_residual: 1e-7,
            max_iter: 5000,
            starts: vec![StartKind::RadialBump, StartKind::BrokenBump(0.2), StartKind::Random(1)],
            damping: 1.0,
            tol_break: 1e-6,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_quotient > 0.0 && self.tol_residual > 0.0 && self.tol_break > 0.0) {
            return Err(invalid("tolerances must be positive"));
        }
        if self.starts.is_empty() {
            return Err(invalid("at least one start is required"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(invalid("damping must lie in (0, 1]"));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub lambda1: f64,
    pub argmin_mode: usize,
    /// Smallest eigenvalue of each mode k = 0..=K.
    pub per_mode_minima: Vec<f64>,
    pub n: usize,
    pub k_max: usize,
}

/// Smallest eigenvalue of the mode-k operator with m = 0.
fn mode_eigenpair(grid: &RadialGrid, k: usize, alpha: f64) -> Result<(f64, Vec<f64>)> {
    let op = assemble_mode_operator(grid, grid.profile, k, alpha, 0.0)?;
    let (lam, v) = op.normalized().lowest_eigenpair()?;
    let f = v.iter().zip(&op.mass).map(|(x, w)| x / w.sqrt()).collect();
    Ok((lam, f))
}

pub fn lambda1(spec: &ProblemSpec, grid: &RadialGrid, k_max: usize) -> Result<EigenReport> {
    crate::forms::check_grid(spec, grid)?;
    let per_mode_minima = (0..=k_max)
        .map(|k| mode_eigenpair(grid, k, spec.params.alpha).map(|x| x.0))
        .collect::<Result<Vec<_>>>()?;
    let mut argmin_mode = 0;
    for (k, v) in per_mode_minima.iter().enumerate() {
        if *v < per_mode_minima[argmin_mode] {
            argmin_mode = k;
        }
    }
    Ok(EigenReport {
        lambda1: per_mode_minima[argmin_mode],
        argmin_mode,
        per_mode_minima,
        n: grid.len(),
        k_max,
    })
}

/// First Dirichlet eigenvalue of the radial operator and its eigenfunction
/// (positive, unit L² norm on the domain).
pub fn first_eigenfunction(grid: &RadialGrid) -> Result<(f64, Vec<f64>)> {
    let (lam, mut f) = mode_eigenpair(grid, 0, 0.0)?;
    let l2: f64 = f.iter().zip(grid.weights()).map(|(x, w)| 2.0 * PI * grid.h * w * x * x).sum();
    f.iter_mut().for_each(|x| *x /= l2.sqrt());
    Ok((lam, f))
}

fn check_mass(grid: &RadialGrid, m: f64) -> Result<f64> {
    let (lam, _) = mode_eigenpair(grid, 0, 0.0)?;
    if m <= -lam {
        return Err(Error::MassBelowSpectralBound { m, bound: -lam });
    }
    Ok(lam)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Radial,
    Nonradial,
    Marginal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StartOutcome {
    pub start: StartKind,
    pub c_value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct GroundStateReport {
    /// L^p-normalized minimizer.
    pub field: ModeField,
    pub c_value: f64,
    pub breakdown: QuotientBreakdown,
    /// Share of the numerator carried by each k = 0..=K.
    pub mode_energy: Vec<f64>,
    pub classification: Classification,
    /// Radial level C_{0,m,p} on the same grid.
    pub radial_c: f64,
    pub iterations: usize,
    /// Scaled Euler–Lagrange residual of the natural-scale solution.
    pub residual: f64,
    /// False when the winner is an unconverged start whose quotient beats
    /// every converged one.
    pub converged: bool,
    pub start: StartKind,
    pub starts: Vec<StartOutcome>,
}

impl GroundStateReport {
    pub fn nonradial_energy(&self) -> f64 {
        self.mode_energy.iter().skip(1).sum()
    }

    pub fn summary(&self) -> GroundStateSummary {
        GroundStateSummary {
            c_value: self.c_value,
            radial_c: self.radial_c,
            breakdown: self.breakdown,
            mode_energy: self.mode_energy.clone(),
            nonradial_energy: self.nonradial_energy(),
            classification: self.classification,
            iterations: self.iterations,
            residual: self.residual,
            converged: self.converged,
            start: self.start,
            starts: self.starts.clone(),
            n: self.field.n(),
            k_max: self.field.k_max(),
        }
    }
}

/// Serializable part of a [`GroundStateReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateSummary {
    pub c_value: f64,
    pub radial_c: f64,
    pub breakdown: QuotientBreakdown,
    pub mode_energy: Vec<f64>,
    pub nonradial_energy: f64,
    pub classification: Classification,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub start: StartKind,
    pub starts: Vec<StartOutcome>,
    pub n: usize,
    pub k_max: usize,
}

/// A quadratic energy `Σ_i w_i (x, Sx)` over blocks and a load map
/// `x ↦ b` with `∫|x|^p` such that stationary points satisfy
/// `S x = R P^{2/p−1} b`.
pub(crate) trait FixedPointProblem {
    fn len(&self) -> usize;
    fn p(&self) -> f64;
    fn energy(&self, x: &[f64]) -> f64;
    fn load(&self, x: &[f64], b: &mut [f64]) -> f64;
    fn apply(&self, x: &[f64], out: &mut [f64]);
    fn solve(&self, rhs: &mut [f64]) -> Result<()>;
    /// Block weight `w_i` of every entry.
    fn block_weights(&self) -> &[f64];
    /// Mass-matrix diagonal of every entry.
    fn mass(&self) -> &[f64];
}

/// Relative increase of the quotient attributed to rounding in the L^p sum.
const MONOTONE_SLACK: f64 = 1e-11;

pub(crate) struct Outcome {
    pub(crate) x: Vec<f64>,
    pub(crate) c: f64,
    pub(crate) iterations: usize,
    pub(crate) residual: f64,
    pub(crate) converged: bool,
}

fn scaled_residual<P: FixedPointProblem>(prob: &P, x: &[f64], b: &[f64], c: f64, tmp: &mut [f64]) -> f64 {
    prob.apply(x, tmp);
    let (mut r2, mut g2) = (0.0, 0.0);
    for i in 0..x.len() {
        let dw = prob.block_weights()[i] / prob.mass()[i];
        let g = c * b[i];
        r2 += dw * (tmp[i] - g) * (tmp[i] - g);
        g2 += dw * g * g;
    }
    if g2 > 0.0 {
        (r2 / g2).sqrt()
    } else {
        f64::INFINITY
    }
}

/// Evaluates a candidate: normalizes it in place and returns its quotient.
fn normalize_candidate<P: FixedPointProblem>(prob: &P, x: &mut [f64], b: &mut [f64]) -> Result<f64> {
    let p = prob.p();
    let integral = prob.load(x, b);
    if !(integral > 0.0) || !integral.is_finite() {
        return Err(Error::ZeroField);
    }
    let e = prob.energy(x);
    let sx = integral.powf(-1.0 / p);
    let sb = integral.powf(-(p - 1.0) / p);
    x.iter_mut().for_each(|v| *v *= sx);
    b.iter_mut().for_each(|v| *v *= sb);
    Ok(e / integral.powf(2.0 / p))
}

struct Candidate {
    x: Vec<f64>,
    b: Vec<f64>,
    c: f64,
}

fn evaluate<P: FixedPointProblem>(prob: &P, x: &[f64], d: &[f64], t: f64) -> Option<Candidate> {
    let mut cand: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + t * di).collect();
    let mut cb = vec![0.0; x.len()];
    let c = normalize_candidate(prob, &mut cand, &mut cb).ok()?;
    Some(Candidate { x: cand, b: cb, c })
}

/// Step along `d` from the normalized `x`: a unit trial step refined by the
/// quadratic model built from `φ(0)`, `φ'(0)` and `φ(t0)`, or doubled while
/// the quotient keeps decreasing when the model has no minimum.
fn line_search<P: FixedPointProblem>(
    prob: &P,
    x: &[f64],
    d: &[f64],
    c: f64,
    slope: f64,
    t0: f64,
) -> Option<Candidate> {
    let mut best = evaluate(prob, x, d, t0).map(|cand| (t0, cand));
    if let Some((t, cand)) = &best {
        let curvature = (cand.c - c - slope * t) / (t * t);
        if curvature > 0.0 {
            let t_star = (-slope / (2.0 * curvature)).min(64.0 * t);
            if (t_star / t - 1.0).abs() > 0.05 {
                if let Some(other) = evaluate(prob, x, d, t_star) {
                    if other.c < cand.c {
                        best = Some((t_star, other));
                    }
                }
            }
        } else if cand.c < c {
            let mut t = *t;
            loop {
                t *= 2.0;
                match evaluate(prob, x, d, t) {
                    Some(next) if next.c < best.as_ref().map_or(f64::INFINITY, |b| b.1.c) && t <= 1024.0 => {
                        best = Some((t, next));
                    }
                    _ => break,
                }
            }
        }
    }
    // Backtrack if the unit step and its refinements did not descend.
    let mut t = t0;
    for _ in 0..40 {
        if let Some((_, cand)) = &best {
            if cand.c <= c + MONOTONE_SLACK * c.abs() {
                break;
            }
        }
        t *= 0.5;
        best = evaluate(prob, x, d, t).map(|cand| (t, cand));
    }
    best.map(|b| b.1).filter(|cand| cand.c <= c + MONOTONE_SLACK * c.abs())
}

pub(crate) fn minimize<P: FixedPointProblem>(prob: &P, x0: Vec<f64>, opts: &SolveOptions) -> Result<Outcome> {
    let n = prob.len();
    let mut x = x0;
    let mut b = vec![0.0; n];
    let mut c = normalize_candidate(prob, &mut x, &mut b)?;
    let mut sx = vec![0.0; n];
    let mut rel = f64::INFINITY;
    let mut prev: Option<(Vec<f64>, Vec<f64>, f64)> = None; // (z, d, ⟨g, z⟩)
    let mut residual;
    for it in 0..opts.max_iter {
        // r = Sx − cb, g = W r, z = S⁻¹ r = x − c S⁻¹ b.
        prob.apply(&x, &mut sx);
        let w = prob.block_weights();
        let r: Vec<f64> = sx.iter().zip(&b).map(|(a, bi)| a - c * bi).collect();
        residual = scaled_residual(prob, &x, &b, c, &mut sx);
        if rel < opts.tol_quotient && residual < opts.tol_residual {
            return Ok(Outcome { x, c, iterations: it, residual, converged: true });
        }
        let mut z = r.clone();
        prob.solve(&mut z)?;
        let gz: f64 = (0..n).map(|i| w[i] * r[i] * z[i]).sum();
        let mut d: Vec<f64> = z.iter().map(|v| -v).collect();
        if let Some((z_old, d_old, gz_old)) = &prev {
            let num: f64 = (0..n).map(|i| w[i] * r[i] * (z[i] - z_old[i])).sum();
            let beta = (num / gz_old).max(0.0);
            if beta > 0.0 && beta.is_finite() {
                for i in 0..n {
                    d[i] += beta * d_old[i];
                }
            }
        }
        let mut slope: f64 = 2.0 * (0..n).map(|i| w[i] * r[i] * d[i]).sum::<f64>();
        if !(slope < 0.0) {
            d = z.iter().map(|v| -v).collect();
            slope = -2.0 * gz;
        }
        let mut step = line_search(prob, &x, &d, c, slope, opts.damping);
        if step.is_none() && prev.is_some() {
            d = z.iter().map(|v| -v).collect();
            step = line_search(prob, &x, &d, c, -2.0 * gz, opts.damping);
        }
        match step {
            Some(cand) => {
                rel = (c - cand.c).abs() / cand.c.abs().max(f64::MIN_POSITIVE);
                x = cand.x;
                b = cand.b;
                c = cand.c;
                prev = Some((z, d, gz));
            }
            None => {
                // No descent is possible at working precision.
                let converged = residual < opts.tol_residual;
                return Ok(Outcome { x, c, iterations: it, residual, converged });
            }
        }
    }
    let residual = scaled_residual(prob, &x, &b, c, &mut sx);
    let converged = rel < opts.tol_quotient && residual < opts.tol_residual;
    Ok(Outcome { x, c, iterations: opts.max_iter, residual, converged })
}

/// The full planar problem in mode space.
struct ModeProblem<'a> {
    form: &'a DiscreteForm,
    weights: Vec<f64>,
    mass: Vec<f64>,
}

impl<'a> ModeProblem<'a> {
    fn new(form: &'a DiscreteForm) -> Self {
        let n = form.grid.len();
        let slots = 2 * form.k_max + 1;
        let mut weights = Vec::with_capacity(n * slots);
        let mut mass = Vec::with_capacity(n * slots);
        for s in 0..slots {
            weights.extend(core::iter::repeat_n(AngularModeSet::angular_norm(s), n));
            mass.extend_from_slice(&form.operator(AngularModeSet::mode_of(s)).mass);
        }
        ModeProblem { form, weights, mass }
    }

    fn field(&self, x: Vec<f64>) -> ModeField {
        ModeField::from_coeffs(self.form.grid.clone(), self.form.k_max, x).expect("layout")
    }
}

impl FixedPointProblem for ModeProblem<'_> {
    fn len(&self) -> usize {
        self.weights.len()
    }

    fn p(&self) -> f64 {
        self.form.spec.params.p
    }

    fn energy(&self, x: &[f64]) -> f64 {
        let n = self.form.grid.len();
        (0..2 * self.form.k_max + 1)
            .map(|s| {
                let op = self.form.operator(AngularModeSet::mode_of(s));
                AngularModeSet::angular_norm(s) * op.energy.quadratic_form(&x[s * n..(s + 1) * n])
            })
            .sum()
    }

    fn load(&self, x: &[f64], b: &mut [f64]) -> f64 {
        let field = self.field(x.to_vec());
        let (load, integral) = self.form.nonlinear_load(&field, self.p());
        for (i, v) in load.coeffs().iter().enumerate() {
            b[i] = v / self.weights[i];
        }
        integral
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.form.grid.len();
        for s in 0..2 * self.form.k_max + 1 {
            let op = self.form.operator(AngularModeSet::mode_of(s));
            op.energy.apply(&x[s * n..(s + 1) * n], &mut out[s * n..(s + 1) * n]);
        }
    }

    fn solve(&self, rhs: &mut [f64]) -> Result<()> {
        let n = self.form.grid.len();
        let mut work = Vec::with_capacity(n);
        for s in 0..2 * self.form.k_max + 1 {
            let op = self.form.operator(AngularModeSet::mode_of(s));
            op.energy.solve_in_place(&mut rhs[s * n..(s + 1) * n], &mut work)?;
        }
        Ok(())
    }

    fn block_weights(&self) -> &[f64] {
        &self.weights
    }

    fn mass(&self) -> &[f64] {
        &self.mass
    }
}

/// Surface area of the unit sphere in R^dim.
fn sphere_area(dim: usize) -> f64 {
    // Γ(dim/2) by recurrence from Γ(1) = 1 and Γ(1/2) = √π.
    let (mut gamma, mut x) = if dim.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = dim as f64 / 2.0;
    while x < target {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(target) / gamma
}

/// Radial functions in dimension N on a radial grid, measure
/// `|S^{N−1}| ψ^{N−1} dr`.
struct RadialProblem {
    energy: SymTridiag,
    weights: Vec<f64>,
    mass: Vec<f64>,
    omega: f64,
    p: f64,
}

impl RadialProblem {
    fn new(grid: &RadialGrid, dim: usize, m: f64, p: f64) -> Self {
        let n = grid.len();
        let e = (dim - 1) as i32;
        let h = grid.h;
        let faces: Vec<f64> = grid.face_weights().iter().map(|w| w.powi(e)).collect();
        let mass: Vec<f64> = grid.weights().iter().map(|w| h * w.powi(e)).collect();
        let mut diag: Vec<f64> = mass.iter().map(|w| m * w).collect();
        let mut off = vec![0.0; n - 1];
        for i in 1..n {
            let c = faces[i] / h;
            diag[i - 1] += c;
            diag[i] += c;
            off[i - 1] = -c;
        }
        diag[n - 1] += 2.0 * faces[n] / h;
        if grid.has_inner_boundary() {
            diag[0] += 2.0 * faces[0] / h;
        }
        let omega = sphere_area(dim);
        RadialProblem { energy: SymTridiag::new(diag, off), weights: vec![omega; n], mass, omega, p }
    }
}

impl FixedPointProblem for RadialProblem {
    fn len(&self) -> usize {
        self.mass.len()
    }

    fn p(&self) -> f64 {
        self.p
    }

    fn energy(&self, x: &[f64]) -> f64 {
        self.omega * self.energy.quadratic_form(x)
    }

    fn load(&self, x: &[f64], b: &mut [f64]) -> f64 {
        let mut integral = 0.0;
        for i in 0..x.len() {
            let a = x[i].abs();
            let g = if self.p == 2.0 { x[i] } else { a.powf(self.p - 2.0) * x[i] };
            integral += self.omega * self.mass[i] * g * x[i];
            b[i] = self.mass[i] * g;
        }
        integral
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.energy.apply(x, out)
    }

    fn solve(&self, rhs: &mut [f64]) -> Result<()> {
        let mut work = Vec::with_capacity(rhs.len());
        self.energy.solve_in_place(rhs, &mut work)
    }

    fn block_weights(&self) -> &[f64] {
        &self.weights
    }

    fn mass(&self) -> &[f64] {
        &self.mass
    }
}

fn radial_bump(grid: &RadialGrid) -> Vec<f64> {
    let (lo, hi) = (grid.r_lo, grid.r_hi);
    grid.nodes()
        .iter()
        .map(|&r| {
            let t = (r - lo) / (hi - lo);
            if grid.has_inner_boundary() {
                (PI * t).sin()
            } else {
                (0.5 * PI * t).cos()
            }
        })
        .collect()
}

fn initial_field(grid: &Arc<RadialGrid>, k_max: usize, start: StartKind) -> ModeField {
    let bump = radial_bump(grid);
    let mut field = ModeField::zeros(grid.clone(), k_max);
    field.slot_mut(0).copy_from_slice(&bump);
    match start {
        StartKind::RadialBump => {}
        StartKind::BrokenBump(delta) => {
            if k_max >= 1 {
                for (v, b) in field.slot_mut(1).iter_mut().zip(&bump) {
                    *v = delta * b;
                }
            }
        }
        StartKind::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for s in 0..field.slots() {
                let k = AngularModeSet::mode_of(s) as f64;
                let amp = 1.0 / (1.0 + k);
                for (v, b) in field.slot_mut(s).iter_mut().zip(&bump) {
                    *v = amp * b * (rng.gen::<f64>() - 0.5 + if s == 0 { 1.0 } else { 0.0 });
                }
            }
        }
    }
    field
}

fn check_exponent(params: &ProblemParams) -> Result<()> {
    params.validate_for_solve()?;
    if params.alpha > 1.0 {
        return Err(invalid("the quotient is unbounded below for alpha > 1"));
    }
    if params.alpha == 1.0 && params.dim == 2 {
        let crit = critical_exponent_2s(2, 1.0)?;
        if params.p > crit {
            return Err(Error::ExponentOutOfRange {
                p: params.p,
                reason: "p must not exceed 2_1* = 10 when alpha = 1".into(),
            });
        }
    }
    Ok(())
}

fn run_starts(
    form: &DiscreteForm,
    opts: &SolveOptions,
    starts: &[StartKind],
) -> Result<(ModeField, Outcome, StartKind, Vec<StartOutcome>)> {
    let prob = ModeProblem::new(form);
    let mut best: Option<(Outcome, StartKind)> = None;
    // Lowest unconverged start: still an admissible test function, so its
    // quotient bounds the level from above.
    let mut witness: Option<(Outcome, StartKind)> = None;
    let mut outcomes = Vec::new();
    let mut last_err = None;
    for &start in starts {
        let x0 = initial_field(&form.grid, form.k_max, start).coeffs().to_vec();
        match minimize(&prob, x0, opts) {
            Ok(out) => {
                outcomes.push(StartOutcome {
                    start,
                    c_value: out.c,
                    converged: out.converged,
                    iterations: out.iterations,
                    residual: out.residual,
                });
                let better = match &best {
                    None => out.converged,
                    Some((b, _)) => out.converged && out.c < b.c - 1e-12 * b.c.abs(),
                };
                if better {
                    best = Some((out, start));
                } else if !out.converged && witness.as_ref().is_none_or(|(w, _)| out.c < w.c) {
                    witness = Some((out, start));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    if let (Some((b, _)), Some((w, _))) = (&best, &witness) {
        if w.c < b.c * (1.0 - opts.tol_break) {
            best = witness;
        }
    }
    match best {
        Some((out, start)) => {
            let mut field = prob.field(out.x.clone());
            if field.slot(0).iter().sum::<f64>() < 0.0 {
                field = field.scaled(-1.0);
            }
            Ok((field, out, start, outcomes))
        }
        None => Err(last_err.unwrap_or(Error::NoConvergence {
            iterations: opts.max_iter,
            what: String::from("no start converged"),
        })),
    }
}

fn report(
    form: &DiscreteForm,
    field: ModeField,
    out: Outcome,
    start: StartKind,
    starts: Vec<StartOutcome>,
    radial_c: Option<f64>,
    tol_break: f64,
) -> Result<GroundStateReport> {
    let breakdown = form.breakdown(&field)?;
    let energies = form.mode_energies(&field);
    let total: f64 = energies.iter().sum();
    let mode_energy = energies.iter().map(|e| e / total).collect();
    let mut rep = GroundStateReport {
        field,
        c_value: breakdown.value,
        breakdown,
        mode_energy,
        classification: Classification::Radial,
        radial_c: radial_c.unwrap_or(breakdown.value),
        iterations: out.iterations,
        residual: out.residual,
        converged: out.converged,
        start,
        starts,
    };
    if radial_c.is_some() {
        rep.classification = classify_values(rep.radial_c, rep.c_value, rep.nonradial_energy(), tol_break);
    }
    Ok(rep)
}

/// Minimizes over radial functions (the k = 0 subspace).
pub fn solve_radial_ground_state(
    spec: &ProblemSpec,
    grid: Arc<RadialGrid>,
    opts: &SolveOptions,
) -> Result<GroundStateReport> {
    opts.validate()?;
    check_exponent(&spec.params)?;
    check_mass(&grid, spec.params.m)?;
    let form = DiscreteForm::new(*spec, grid, 0)?;
    let (field, out, start, starts) = run_starts(&form, opts, &[StartKind::RadialBump])?;
    report(&form, field, out, start, starts, None, opts.tol_break)
}

/// Minimizes over all modes |k| ≤ K from every configured start and
/// classifies the winner against the radial minimum.
pub fn solve_ground_state(
    spec: &ProblemSpec,
    grid: Arc<RadialGrid>,
    k_max: usize,
    opts: &SolveOptions,
) -> Result<GroundStateReport> {
    opts.validate()?;
    check_exponent(&spec.params)?;
    check_mass(&grid, spec.params.m)?;
    let radial = solve_radial_ground_state(spec, grid.clone(), opts)?;
    let form = DiscreteForm::new(*spec, grid, k_max)?;
    let (field, out, start, starts) = run_starts(&form, opts, &opts.starts)?;
    report(&form, field, out, start, starts, Some(radial.c_value), opts.tol_break)
}

fn classify_values(radial_c: f64, full_c: f64, nonradial_energy: f64, tol_break: f64) -> Classification {
    let gap = (radial_c - full_c) / radial_c.abs();
    if gap > tol_break && nonradial_energy > tol_break {
        Classification::Nonradial
    } else if gap < tol_break / 10.0 && nonradial_energy < tol_break / 10.0 {
        Classification::Radial
    } else {
        Classification::Marginal
    }
}

pub fn classify_symmetry(
    full: &GroundStateReport,
    radial: &GroundStateReport,
    tol_break: f64,
) -> Classification {
    classify_values(radial.c_value, full.c_value, full.nonradial_energy(), tol_break)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondVariationReport {
    /// Natural-scale radial solution at the grid nodes.
    pub radial_solution: Vec<f64>,
    pub radial_c: f64,
    pub mu1: f64,
    pub indicator: f64,
    pub certified_nonradial: bool,
}

/// Tolerance below zero required before the indicator certifies.
pub const TOL_INDICATOR: f64 = 1e-9;

/// Natural-scale positive radial solution of `−Δu + mu = |u|^{p−2}u` in
/// dimension `dim`, together with the radial level.
pub fn radial_solution(
    grid: &RadialGrid,
    dim: usize,
    m: f64,
    p: f64,
    opts: &SolveOptions,
) -> Result<(Vec<f64>, f64)> {
    let prob = RadialProblem::new(grid, dim, m, p);
    let out = minimize(&prob, radial_bump(grid), opts)?;
    if !out.converged {
        return Err(Error::NoConvergence { iterations: out.iterations, what: "radial solution".into() });
    }
    let sign = if out.x.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let scale = if p > 2.0 { out.c.powf(1.0 / (p - 2.0)) } else { 1.0 };
    Ok((out.x.iter().map(|v| sign * scale * v).collect(), out.c))
}

/// Weighted eigenvalue μ₁ of the linearization at the radial solution of
/// an annulus, with the indicator `μ₁ + (N−1) − r²α²`.
pub fn annulus_second_variation(
    spec: &ProblemSpec,
    grid: &RadialGrid,
    opts: &SolveOptions,
) -> Result<SecondVariationReport> {
    let r0 = match spec.domain {
        DomainSpec::Annulus { inner_radius } => inner_radius,
        _ => return Err(invalid("the second-variation test needs an annulus")),
    };
    crate::forms::check_grid(spec, grid)?;
    let prm = spec.params;
    if prm.m < 0.0 {
        return Err(invalid("the annulus criterion assumes m >= 0"));
    }
    let (u0, c) = radial_solution(grid, prm.dim, prm.m, prm.p, opts)?;
    let (diag, off, weight) = linearized_operator(grid, prm.dim, prm.m, prm.p, &u0);
    let s: Vec<f64> = weight.iter().map(|w| 1.0 / w.sqrt()).collect();
    let sym = SymTridiag::new(
        diag.iter().zip(&s).map(|(d, a)| d * a * a).collect(),
        off.iter().enumerate().map(|(j, o)| o * s[j] * s[j + 1]).collect(),
    );
    let (mu1, _) = sym.lowest_eigenpair()?;
    let indicator = mu1 + (prm.dim - 1) as f64 - r0 * r0 * prm.alpha * prm.alpha;
    Ok(SecondVariationReport {
        radial_solution: u0,
        radial_c: c,
        mu1,
        indicator,
        certified_nonradial: prm.p > 2.0 && indicator < -TOL_INDICATOR,
    })
}

/// Matrix `(diag, off)` of `−(r^{N−1}w')' + r^{N−1}(m − (p−1)|u₀|^{p−2})w`
/// and the diagonal of the weight `r^{N−3}`, both in quadrature form.
pub fn linearized_operator(
    grid: &RadialGrid,
    dim: usize,
    m: f64,
    p: f64,
    u0: &[f64],
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let RadialProblem { energy, mass, .. } = RadialProblem::new(grid, dim, m, p);
    let mut diag = energy.diag;
    for (j, d) in diag.iter_mut().enumerate() {
        *d -= (p - 1.0) * u0[j].abs().powf(p - 2.0) * mass[j];
    }
    let weight = grid
        .nodes()
        .iter()
        .zip(&mass)
        .map(|(r, w)| w / (r * r))
        .collect();
    (diag, energy.off, weight)
}

/// `2 − N + 2N/p`.
pub fn rescaling_exponent(dim: usize, p: f64) -> f64 {
    2.0 - dim as f64 + 2.0 * dim as f64 / p
}

/// Smooth nonradial test function supported in the unit disk.
fn rescale_test_function(r: f64, theta: f64) -> f64 {
    if r >= 1.0 {
        return 0.0;
    }
    let q = 1.0 - r * r;
    q * q * q * (1.0 + 0.5 * r * theta.cos() + 0.3 * r * r * (2.0 * theta).sin())
}

/// Both sides of the rescaling rule for `u_ε(x) = u(εx)` in the plane: the
/// quotient of `u_ε` on `B_{1/ε}` with angular weight `α²ε²` and mass 1,
/// and `ε^{2−N+2N/p} R_{α,1/ε²,p}(u)` on the unit disk. The large disk
/// uses `n/ε` nodes so that both grids share the same cell size.
pub fn rescale_equivalence_check(alpha: f64, eps: f64, p: f64, n: usize) -> Result<(f64, f64)> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid("eps must lie in (0, 1]"));
    }
    let k_max = 2;
    let flat = crate::profile::RiemannianProfile::Flat;
    let small = Arc::new(RadialGrid::new(0.0, 1.0, n, flat)?);
    let u = ModeField::from_fn(small.clone(), k_max, rescale_test_function);
    let params = ProblemParams::planar(alpha, 1.0 / (eps * eps), p);
    let rhs_form = DiscreteForm::on_grid(params, small, k_max)?;
    let rhs = eps.powf(rescaling_exponent(2, p)) * rhs_form.breakdown(&u)?.value;

    let n_big = (n as f64 / eps).round() as usize;
    let big = Arc::new(RadialGrid::new(0.0, 1.0 / eps, n_big, flat)?);
    let u_eps = ModeField::from_fn(big.clone(), k_max, |r, t| rescale_test_function(eps * r, t));
    let params = ProblemParams::planar(alpha * eps, 1.0, p);
    let lhs = DiscreteForm::on_grid(params, big, k_max)?.breakdown(&u_eps)?.value;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::RiemannianProfile;

    fn disk(n: usize) -> Arc<RadialGrid> {
        Arc::new(RadialGrid::new(0.0, 1.0, n, RiemannianProfile::Flat).unwrap())
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn classification_thresholds() {
        assert_eq!(classify_values(3.0, 3.0, 0.0, 1e-6), Classification::Radial);
        assert_eq!(classify_values(1.0, 0.95, 0.4, 1e-6), Classification::Nonradial);
        assert_eq!(classify_values(1.0, 1.0 - 2e-11, 1e-12, 1e-6), Classification::Radial);
        assert_eq!(classify_values(1.0, 1.0 - 5e-7, 1e-12, 1e-6), Classification::Marginal);
    }

    #[test]
    fn linear_limit_is_the_eigenvalue() {
        let g = disk(256);
        let spec = ProblemSpec::disk(0.0, 0.0, 2.0).unwrap();
        let rep = solve_radial_ground_state(&spec, g.clone(), &SolveOptions::default()).unwrap();
        let (lam, f) = first_eigenfunction(&g).unwrap();
        assert!((rep.c_value / lam - 1.0).abs() < 1e-8);
        let u = rep.field.slot(0);
        let ratio = u[0] / f[0];
        assert!(u.iter().zip(&f).all(|(a, b)| (a - ratio * b).abs() < 1e-6 * ratio.abs()));
    }

    #[test]
    fn mass_bound_rejected() {
        let spec = ProblemSpec::disk(0.5, -10.0, 4.0).unwrap();
        let err = solve_ground_state(&spec, disk(64), 4, &SolveOptions::default()).unwrap_err();
        assert!(matches!(err, Error::MassBelowSpectralBound { .. }));
    }

    #[test]
    fn rescaling_identity_at_eps_one() {
        let (l, r) = rescale_equivalence_check(0.7, 1.0, 4.0, 128).unwrap();
        assert!((l / r - 1.0).abs() < 1e-12);
        assert_eq!(rescaling_exponent(2, 4.0), 1.0);
    }
}
