//! Radial metric profiles ψ and compactly supported 1D test profiles.

use crate::error::{invalid, Result};
use core::f64::consts::{FRAC_PI_2, PI};
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

/// The warping function ψ of a rotationally symmetric metric
/// `dr² + ψ(r)² dΘ²` on the unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum RiemannianProfile {
    /// ψ(r) = r.
    Flat,
    /// ψ(r) = sin(πr/2), so 1 − ψ(r) ≍ (1 − r)².
    Hemisphere,
    /// ψ(r) = 1 − c₁(1 − r)^s with 0 < c₁ ≤ 1. For s = 1, c₁ = 1 this is the
    /// flat disk.
    PowerCusp { s: f64, c1: f64 },
}

impl RiemannianProfile {
    pub fn validate(&self) -> Result<()> {
        if let RiemannianProfile::PowerCusp { s, c1 } = *self {
            if !(s > 0.0) {
                return Err(invalid("power cusp exponent s must be positive"));
            }
            if !(c1 > 0.0 && c1 <= 1.0) {
                return Err(invalid("power cusp constant c1 must lie in (0, 1]"));
            }
        }
        Ok(())
    }

    pub fn psi(&self, r: f64) -> f64 {
        match *self {
            RiemannianProfile::Flat => r,
            RiemannianProfile::Hemisphere => (FRAC_PI_2 * r).sin(),
            RiemannianProfile::PowerCusp { s, c1 } => 1.0 - c1 * (1.0 - r).powf(s),
        }
    }

    pub fn psi_prime(&self, r: f64) -> f64 {
        match *self {
            RiemannianProfile::Flat => 1.0,
            RiemannianProfile::Hemisphere => FRAC_PI_2 * (FRAC_PI_2 * r).cos(),
            RiemannianProfile::PowerCusp { s, c1 } => c1 * s * (1.0 - r).powf(s - 1.0),
        }
    }

    /// `1 − ψ(r) = ψ_def(1 − r)` evaluated directly from the distance to the
    /// boundary, avoiding cancellation when r is close to 1.
    pub fn boundary_defect(&self, dist: f64) -> f64 {
        match *self {
            RiemannianProfile::Flat => dist,
            RiemannianProfile::Hemisphere => {
                let half = 0.25 * PI * dist;
                2.0 * half.sin() * half.sin()
            }
            RiemannianProfile::PowerCusp { s, c1 } => c1 * dist.powf(s),
        }
    }

    /// Degeneracy exponent s and constants c₁ ≤ c₂ with
    /// c₁(1−r)^s ≤ 1 − ψ(r) ≤ c₂(1−r)^s on (0, 1).
    pub fn two_sided_constants(&self) -> (f64, f64, f64) {
        match *self {
            RiemannianProfile::Flat => (1.0, 1.0, 1.0),
            RiemannianProfile::Hemisphere => (2.0, 0.5, PI * PI / 8.0),
            RiemannianProfile::PowerCusp { s, c1 } => (s, c1, c1),
        }
    }

    pub fn degeneracy_exponent(&self) -> f64 {
        self.two_sided_constants().0
    }
}

/// A compactly supported one-dimensional profile with a closed-form
/// derivative.
pub trait Profile1D {
    fn support(&self) -> (f64, f64);
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
}

/// The smooth bump `exp(−1/(1−t²))` mapped affinely onto `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub lo: f64,
    pub hi: f64,
}

impl Bump {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(invalid("bump support must have hi > lo"));
        }
        Ok(Bump { lo, hi })
    }

    fn local(&self, x: f64) -> (f64, f64) {
        let half = 0.5 * (self.hi - self.lo);
        ((x - 0.5 * (self.hi + self.lo)) / half, half)
    }
}

impl Profile1D for Bump {
    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn value(&self, x: f64) -> f64 {
        let (t, _) = self.local(x);
        if t.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - t * t)).exp()
        }
    }

    fn derivative(&self, x: f64) -> f64 {
        let (t, half) = self.local(x);
        if t.abs() >= 1.0 {
            0.0
        } else {
            let q = 1.0 - t * t;
            (-1.0 / q).exp() * (-2.0 * t / (q * q)) / half
        }
    }
}

/// One arch of a sine on `(lo, hi)`: `sin(π (x − lo)/(hi − lo))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SineArch {
    pub lo: f64,
    pub hi: f64,
}

impl Profile1D for SineArch {
    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn value(&self, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        (PI * (x - self.lo) / (self.hi - self.lo)).sin()
    }

    fn derivative(&self, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        let w = self.hi - self.lo;
        PI / w * (PI * (x - self.lo) / w).cos()
    }
}
