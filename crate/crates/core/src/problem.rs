//! Problem identity: the domain together with (N, α, m, p).

use crate::error::{invalid, Result};
use crate::exponents::sobolev_exponent;
use crate::profile::RiemannianProfile;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub dim: usize,
    pub alpha: f64,
    pub m: f64,
    pub p: f64,
}

impl ProblemParams {
    /// Parameters in the plane, the setting of every full 2D solve.
    pub fn planar(alpha: f64, m: f64, p: f64) -> Self {
        ProblemParams { dim: 2, alpha, m, p }
    }

    /// Checks N ≥ 2, α ≥ 0 and p ≥ 2. The linear case p = 2 is accepted
    /// because several consistency checks run through it.
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(invalid("dimension must be at least 2"));
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(invalid("alpha must be finite and nonnegative"));
        }
        if !self.m.is_finite() {
            return Err(invalid("m must be finite"));
        }
        if !(self.p >= 2.0) || !self.p.is_finite() {
            return Err(invalid("p must be finite and at least 2"));
        }
        Ok(())
    }

    /// Additionally requires p < 2* when N ≥ 3, as needed for a full solve.
    pub fn validate_for_solve(&self) -> Result<()> {
        self.validate()?;
        if !sobolev_exponent(self.dim)?.exceeds(self.p) {
            return Err(invalid("p must lie below the Sobolev exponent 2N/(N-2)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "domain", rename_all = "snake_case")]
pub enum DomainSpec {
    FlatDisk,
    Annulus { inner_radius: f64 },
    Riemannian { profile: RiemannianProfile },
}

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DomainSpec::FlatDisk => Ok(()),
            DomainSpec::Annulus { inner_radius } => {
                if inner_radius > 0.0 && inner_radius < 1.0 {
                    Ok(())
                } else {
                    Err(invalid("annulus inner radius must lie in (0, 1)"))
                }
            }
            DomainSpec::Riemannian { profile } => profile.validate(),
        }
    }

    pub fn radial_interval(&self) -> (f64, f64) {
        match *self {
            DomainSpec::Annulus { inner_radius } => (inner_radius, 1.0),
            _ => (0.0, 1.0),
        }
    }

    pub fn profile(&self) -> RiemannianProfile {
        match *self {
            DomainSpec::Riemannian { profile } => profile,
            _ => RiemannianProfile::Flat,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub domain: DomainSpec,
    pub params: ProblemParams,
}

impl ProblemSpec {
    pub fn new(domain: DomainSpec, params: ProblemParams) -> Result<Self> {
        domain.validate()?;
        params.validate()?;
        Ok(ProblemSpec { domain, params })
    }

    pub fn disk(alpha: f64, m: f64, p: f64) -> Result<Self> {
        Self::new(DomainSpec::FlatDisk, ProblemParams::planar(alpha, m, p))
    }

    pub fn with_params(&self, params: ProblemParams) -> Result<Self> {
        Self::new(self.domain, params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ProblemSpec::disk(0.5, 0.0, 4.0).is_ok());
        assert!(ProblemSpec::disk(-0.1, 0.0, 4.0).is_err());
        assert!(ProblemSpec::disk(0.5, 0.0, 1.5).is_err());
        let annulus = DomainSpec::Annulus { inner_radius: 1.0 };
        assert!(ProblemSpec::new(annulus, ProblemParams::planar(0.0, 0.0, 3.0)).is_err());
        let p3 = ProblemParams { dim: 3, alpha: 0.0, m: 0.0, p: 6.0 };
        assert!(p3.validate().is_ok());
        assert!(p3.validate_for_solve().is_err());
        let p3 = ProblemParams { p: 5.9, ..p3 };
        assert!(p3.validate_for_solve().is_ok());
    }
}
