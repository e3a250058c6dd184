//! Closed-form exponents and the explicit annulus criterion.

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// The Sobolev exponent 2* = 2N/(N−2), which is unbounded in dimension two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum SobolevExponent {
    Finite(f64),
    Unbounded,
}

impl SobolevExponent {
    /// Whether `p` lies strictly below the exponent.
    pub fn exceeds(&self, p: f64) -> bool {
        match *self {
            SobolevExponent::Finite(v) => p < v,
            SobolevExponent::Unbounded => true,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            SobolevExponent::Finite(v) => Some(v),
            SobolevExponent::Unbounded => None,
        }
    }
}

/// The anisotropic critical exponent 2_s* = (4N + 2s)/(2N − 4 + s).
pub fn critical_exponent_2s(dim: usize, s: f64) -> Result<f64> {
    if dim < 2 {
        return Err(invalid("dimension must be at least 2"));
    }
    if !(s > 0.0) {
        return Err(invalid("degeneracy exponent s must be positive"));
    }
    let n = dim as f64;
    Ok((4.0 * n + 2.0 * s) / (2.0 * n - 4.0 + s))
}

pub fn sobolev_exponent(dim: usize) -> Result<SobolevExponent> {
    match dim {
        0 | 1 => Err(invalid("dimension must be at least 2")),
        2 => Ok(SobolevExponent::Unbounded),
        _ => {
            let n = dim as f64;
            Ok(SobolevExponent::Finite(2.0 * n / (n - 2.0)))
        }
    }
}

/// κ(r, m) from the explicit symmetry-breaking criterion on the annulus
/// {r < |x| < 1}.
pub fn annulus_kappa(dim: usize, r: f64, m: f64) -> Result<f64> {
    if dim < 2 {
        return Err(invalid("dimension must be at least 2"));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid("inner radius must lie in (0, 1)"));
    }
    if !(m >= 0.0) {
        return Err(invalid("the annulus criterion needs m >= 0"));
    }
    let n = dim as f64;
    let thin = core::f64::consts::PI / (1.0 - r);
    let thin = thin * thin;
    let kappa = if dim == 2 {
        m * r * r + thin * r * r
    } else {
        let hardy = 0.25 * (n - 2.0) * (n - 2.0);
        m * r * r + hardy.max(thin * num_traits::Float::powi(r, dim as i32 - 1))
    };
    Ok(kappa)
}

/// (N − 1 − r²α²)/κ(r, m) + 2. Exponents strictly above this value force
/// every ground state on the annulus to be x₁-x₂-nonradial.
pub fn annulus_nonradial_p_threshold(dim: usize, r: f64, m: f64, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(invalid("alpha must lie in [0, 1)"));
    }
    let kappa = annulus_kappa(dim, r, m)?;
    Ok((dim as f64 - 1.0 - r * r * alpha * alpha) / kappa + 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn critical_exponent_values() {
        assert_eq!(critical_exponent_2s(2, 1.0).unwrap(), 10.0);
        assert!((critical_exponent_2s(3, 1.0).unwrap() - 14.0 / 3.0).abs() < 1e-14);
        assert_eq!(critical_exponent_2s(3, 2.0).unwrap(), 4.0);
        assert_eq!(critical_exponent_2s(2, 2.0).unwrap(), 6.0);
        assert!(critical_exponent_2s(1, 1.0).is_err());
        assert!(critical_exponent_2s(2, 0.0).is_err());
        assert!(critical_exponent_2s(2, -1.0).is_err());
    }

    #[test]
    fn sobolev_values() {
        assert_eq!(sobolev_exponent(2).unwrap(), SobolevExponent::Unbounded);
        assert_eq!(sobolev_exponent(3).unwrap(), SobolevExponent::Finite(6.0));
        assert_eq!(sobolev_exponent(4).unwrap(), SobolevExponent::Finite(4.0));
        assert!(sobolev_exponent(1).is_err());
        assert!(SobolevExponent::Unbounded.exceeds(1e300));
        assert!(!SobolevExponent::Finite(6.0).exceeds(6.0));
    }

    #[test]
    fn kappa_values() {
        assert!((annulus_kappa(2, 0.5, 0.0).unwrap() - PI * PI).abs() < 1e-12);
        assert!((annulus_kappa(3, 0.5, 0.0).unwrap() - PI * PI).abs() < 1e-12);
        let k = annulus_kappa(2, 0.9, 0.0).unwrap();
        assert!((k - 81.0 * PI * PI).abs() < 1e-9);
        assert!((k - 799.44).abs() < 0.01);
        assert!(annulus_kappa(2, 0.5, -1.0).is_err());
        assert!(annulus_kappa(2, 1.0, 0.0).is_err());
    }

    #[test]
    fn threshold_values() {
        let t = annulus_nonradial_p_threshold(2, 0.5, 0.0, 0.5).unwrap();
        assert!((t - (2.0 + 0.9375 / (PI * PI))).abs() < 1e-14);
        assert!((t - 2.0950).abs() < 1e-4);
        let t = annulus_nonradial_p_threshold(2, 0.9, 0.0, 0.5).unwrap();
        assert!((t - 2.0010).abs() < 1e-4);
        let t = annulus_nonradial_p_threshold(3, 0.5, 0.0, 0.0).unwrap();
        assert!((t - (2.0 + 2.0 / (PI * PI))).abs() < 1e-14);
        assert!((t - 2.2026).abs() < 1e-4);
    }
}
