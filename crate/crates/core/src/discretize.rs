//! Staggered radial grids, angular Fourier mode sets and the transforms
//! between mode space and the tensor (r, θ) grid.
//!
//! A field is stored as real coefficient functions on the radial nodes,
//! `u(r, θ) = a₀(r) + Σ_{k=1}^{K} [a_k(r) cos kθ + b_k(r) sin kθ]`. Slot 0
//! holds `a₀`, slot `2k − 1` holds `a_k` and slot `2k` holds `b_k`.

use crate::error::{invalid, Error, Result};
use crate::problem::DomainSpec;
use crate::profile::RiemannianProfile;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// Angular oversampling factor relative to 2K + 1 used whenever the
/// nonlinearity or an L^p norm is evaluated.
pub const OVERSAMPLING: usize = 4;

/// Uniform staggered grid `r_j = r_lo + (j + ½) h` with the metric profile
/// sampled at nodes and faces.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub r_lo: f64,
    pub r_hi: f64,
    pub h: f64,
    pub profile: RiemannianProfile,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    face_weights: Vec<f64>,
}

impl RadialGrid {
    /// Grid on an arbitrary interval. `build_radial_grid` is the checked
    /// entry point for the standard domains.
    pub fn new(r_lo: f64, r_hi: f64, n: usize, profile: RiemannianProfile) -> Result<Self> {
        if n == 0 {
            return Err(invalid("radial grid needs at least one node"));
        }
        if !(r_hi > r_lo) || r_lo < 0.0 {
            return Err(invalid("radial interval must satisfy 0 <= r_lo < r_hi"));
        }
        profile.validate()?;
        let h = (r_hi - r_lo) / n as f64;
        let nodes: Vec<f64> = (0..n).map(|j| r_lo + (j as f64 + 0.5) * h).collect();
        let weights: Vec<f64> = nodes.iter().map(|&r| profile.psi(r)).collect();
        let face_weights = (0..=n)
            .map(|j| if j == 0 && r_lo == 0.0 { 0.0 } else { profile.psi(r_lo + j as f64 * h) })
            .collect();
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(invalid("metric profile must be positive at every node"));
        }
        Ok(RadialGrid { r_lo, r_hi, h, profile, nodes, weights, face_weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// ψ(r_j).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// ψ at the n + 1 cell faces; the face at the origin carries weight 0.
    pub fn face_weights(&self) -> &[f64] {
        &self.face_weights
    }

    /// Quadrature weights `h ψ(r_j)^{dim−1}` of the radial measure.
    pub fn measure(&self, dim: usize) -> Vec<f64> {
        self.weights.iter().map(|&w| self.h * w.powi(dim as i32 - 1)).collect()
    }

    /// Whether the inner end is a Dirichlet boundary rather than the center.
    pub fn has_inner_boundary(&self) -> bool {
        self.r_lo > 0.0
    }
}

pub fn build_radial_grid(domain: &DomainSpec, n: usize) -> Result<RadialGrid> {
    if n < 8 {
        return Err(invalid("radial grid needs n >= 8"));
    }
    domain.validate()?;
    let (lo, hi) = domain.radial_interval();
    RadialGrid::new(lo, hi, n, domain.profile())
}

/// Angular modes k ∈ {−K, …, K} in real cosine/sine storage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngularModeSet {
    pub k_max: usize,
}

impl AngularModeSet {
    pub fn slots(&self) -> usize {
        2 * self.k_max + 1
    }

    /// Angular index of a storage slot.
    pub fn mode_of(slot: usize) -> usize {
        slot.div_ceil(2)
    }

    /// ∫₀^{2π} of the squared basis function of a slot.
    pub fn angular_norm(slot: usize) -> f64 {
        if slot == 0 {
            2.0 * PI
        } else {
            PI
        }
    }

    /// Default oversampled number of angles.
    pub fn oversampled_angles(&self) -> usize {
        OVERSAMPLING * self.slots()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeField {
    pub grid: Arc<RadialGrid>,
    pub modes: AngularModeSet,
    coeffs: Vec<f64>,
}

impl ModeField {
    pub fn zeros(grid: Arc<RadialGrid>, k_max: usize) -> Self {
        let modes = AngularModeSet { k_max };
        let coeffs = vec![0.0; modes.slots() * grid.len()];
        ModeField { grid, modes, coeffs }
    }

    pub fn from_coeffs(grid: Arc<RadialGrid>, k_max: usize, coeffs: Vec<f64>) -> Result<Self> {
        let modes = AngularModeSet { k_max };
        if coeffs.len() != modes.slots() * grid.len() {
            return Err(Error::GridMismatch("coefficient array has the wrong length".into()));
        }
        Ok(ModeField { grid, modes, coeffs })
    }

    /// A radial field `u(r, θ) = f(r_j)`.
    pub fn radial(grid: Arc<RadialGrid>, k_max: usize, values: &[f64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch("radial profile length differs from grid".into()));
        }
        let mut f = Self::zeros(grid, k_max);
        f.slot_mut(0).copy_from_slice(values);
        Ok(f)
    }

    /// Samples a closed-form function of (r, θ) and keeps modes |k| ≤ K.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(grid: Arc<RadialGrid>, k_max: usize, f: F) -> Self {
        let modes = AngularModeSet { k_max };
        let m_theta = modes.oversampled_angles();
        let n = grid.len();
        let mut values = Vec::with_capacity(n * m_theta);
        for &r in grid.nodes() {
            for i in 0..m_theta {
                values.push(f(r, 2.0 * PI * i as f64 / m_theta as f64));
            }
        }
        let phys = PhysicalField { grid, m_theta, values };
        AngularTransform::new(k_max, m_theta).expect("oversampled grid").to_modes(&phys)
    }

    pub fn n(&self) -> usize {
        self.grid.len()
    }

    pub fn k_max(&self) -> usize {
        self.modes.k_max
    }

    pub fn slots(&self) -> usize {
        self.modes.slots()
    }

    pub fn slot(&self, s: usize) -> &[f64] {
        let n = self.n();
        &self.coeffs[s * n..(s + 1) * n]
    }

    pub fn slot_mut(&mut self, s: usize) -> &mut [f64] {
        let n = self.n();
        &mut self.coeffs[s * n..(s + 1) * n]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// `a_k` (k ≥ 0).
    pub fn cos_mode(&self, k: usize) -> &[f64] {
        self.slot(if k == 0 { 0 } else { 2 * k - 1 })
    }

    /// `b_k` (k ≥ 1).
    pub fn sin_mode(&self, k: usize) -> &[f64] {
        assert!(k >= 1, "there is no sine coefficient for k = 0");
        self.slot(2 * k)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|x| *x *= c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&x| x == 0.0)
    }

    /// Euclidean inner product of coefficient vectors.
    pub fn dot(&self, other: &ModeField) -> f64 {
        self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| a * b).sum()
    }

    /// Rotation by `beta`: u(r, θ) ↦ u(r, θ − β).
    pub fn rotated(&self, beta: f64) -> Self {
        let mut out = self.clone();
        for k in 1..=self.k_max() {
            let (s, c) = (k as f64 * beta).sin_cos();
            let n = self.n();
            for j in 0..n {
                let a = self.coeffs[(2 * k - 1) * n + j];
                let b = self.coeffs[2 * k * n + j];
                out.coeffs[(2 * k - 1) * n + j] = a * c - b * s;
                out.coeffs[2 * k * n + j] = a * s + b * c;
            }
        }
        out
    }

    pub fn same_layout(&self, other: &ModeField) -> bool {
        self.k_max() == other.k_max() && (Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid)
    }
}

/// Samples on the tensor grid (r_j, θ_i), θ_i = 2πi/M, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    pub grid: Arc<RadialGrid>,
    pub m_theta: usize,
    pub values: Vec<f64>,
}

impl PhysicalField {
    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.m_theta..(j + 1) * self.m_theta]
    }

    pub fn angle(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.m_theta as f64
    }
}

/// Precomputed trigonometric tables for a (K, M) pair.
#[derive(Debug, Clone)]
pub struct AngularTransform {
    pub k_max: usize,
    pub m_theta: usize,
    /// `table[i * slots + s]` is the slot-`s` basis function at θ_i.
    table: Vec<f64>,
}

impl AngularTransform {
    pub fn new(k_max: usize, m_theta: usize) -> Result<Self> {
        let slots = 2 * k_max + 1;
        if m_theta < slots {
            return Err(Error::Undersampled { m_theta, k_max });
        }
        let mut table = Vec::with_capacity(m_theta * slots);
        for i in 0..m_theta {
            let theta = 2.0 * PI * i as f64 / m_theta as f64;
            table.push(1.0);
            for k in 1..=k_max {
                let (s, c) = (k as f64 * theta).sin_cos();
                table.push(c);
                table.push(s);
            }
        }
        Ok(AngularTransform { k_max, m_theta, table })
    }

    /// Table with the default oversampling for `k_max`.
    pub fn oversampled(k_max: usize) -> Self {
        Self::new(k_max, OVERSAMPLING * (2 * k_max + 1)).expect("oversampled grid")
    }

    fn slots(&self) -> usize {
        2 * self.k_max + 1
    }

    pub fn to_physical(&self, field: &ModeField) -> Result<PhysicalField> {
        if field.k_max() != self.k_max {
            return Err(Error::GridMismatch("mode count differs from transform".into()));
        }
        let mut values = vec![0.0; field.n() * self.m_theta];
        self.to_physical_into(field, &mut values);
        Ok(PhysicalField { grid: field.grid.clone(), m_theta: self.m_theta, values })
    }

    /// Hot-path variant writing into a caller buffer of length n·M.
    pub fn to_physical_into(&self, field: &ModeField, out: &mut [f64]) {
        let n = field.n();
        let slots = self.slots();
        let mut local = vec![0.0; slots];
        for j in 0..n {
            for (s, c) in local.iter_mut().enumerate() {
                *c = field.coeffs[s * n + j];
            }
            let row = &mut out[j * self.m_theta..(j + 1) * self.m_theta];
            for (i, v) in row.iter_mut().enumerate() {
                let t = &self.table[i * slots..(i + 1) * slots];
                *v = t.iter().zip(local.iter()).map(|(a, b)| a * b).sum();
            }
        }
    }

    /// Raw angular inner products `Σ_i v(r_j, θ_i) φ_s(θ_i)` for every slot.
    pub fn inner_products_into(&self, values: &[f64], n: usize, out: &mut [f64]) {
        let slots = self.slots();
        let mut local = vec![0.0; slots];
        for j in 0..n {
            local.iter_mut().for_each(|x| *x = 0.0);
            let row = &values[j * self.m_theta..(j + 1) * self.m_theta];
            for (i, &v) in row.iter().enumerate() {
                let t = &self.table[i * slots..(i + 1) * slots];
                for (acc, b) in local.iter_mut().zip(t.iter()) {
                    *acc += v * b;
                }
            }
            for (s, c) in local.iter().enumerate() {
                out[s * n + j] = *c;
            }
        }
    }

    /// Discrete Fourier analysis truncated to |k| ≤ K.
    pub fn to_modes(&self, phys: &PhysicalField) -> ModeField {
        let n = phys.grid.len();
        let mut field = ModeField::zeros(phys.grid.clone(), self.k_max);
        self.inner_products_into(&phys.values, n, &mut field.coeffs);
        let m = self.m_theta as f64;
        for s in 0..self.slots() {
            let scale = if s == 0 { 1.0 / m } else { 2.0 / m };
            field.slot_mut(s).iter_mut().for_each(|x| *x *= scale);
        }
        field
    }
}

pub fn to_physical(field: &ModeField, m_theta: usize) -> Result<PhysicalField> {
    AngularTransform::new(field.k_max(), m_theta)?.to_physical(field)
}

pub fn to_modes(phys: &PhysicalField, k_max: usize) -> Result<ModeField> {
    Ok(AngularTransform::new(k_max, phys.m_theta)?.to_modes(phys))
}

/// `∫ |u|^p ψ dr dθ` from physical samples.
pub(crate) fn lp_integral(grid: &RadialGrid, values: &[f64], m_theta: usize, p: f64) -> f64 {
    let dtheta = 2.0 * PI / m_theta as f64;
    let mut total = 0.0;
    for (j, w) in grid.weights().iter().enumerate() {
        let row = &values[j * m_theta..(j + 1) * m_theta];
        let s: f64 = if p == 2.0 {
            row.iter().map(|v| v * v).sum()
        } else {
            row.iter().map(|v| v.abs().powf(p)).sum()
        };
        total += grid.h * w * dtheta * s;
    }
    total
}

/// ‖u‖_p over the domain with measure ψ(r) dr dθ, evaluated on the
/// oversampled angular grid.
pub fn lp_norm(field: &ModeField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(invalid("p must be at least 1"));
    }
    let transform = AngularTransform::oversampled(field.k_max());
    let phys = transform.to_physical(field)?;
    Ok(lp_integral(&field.grid, &phys.values, phys.m_theta, p).powf(1.0 / p))
}

pub fn normalize_lp(field: &ModeField, p: f64) -> Result<ModeField> {
    if field.is_zero() {
        return Err(Error::ZeroField);
    }
    let norm = lp_norm(field, p)?;
    Ok(field.scaled(1.0 / norm))
}
