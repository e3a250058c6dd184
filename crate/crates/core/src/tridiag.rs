//! Symmetric tridiagonal matrices: direct solves, Sturm-sequence bisection
//! for the lowest eigenvalue and inverse iteration for its eigenvector.

use crate::error::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        debug_assert_eq!(off.len() + 1, diag.len().max(1));
        SymTridiag { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `y = T x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off[i] * x[i + 1];
            }
            y[i] = v;
        }
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let n = self.len();
        let mut acc = 0.0;
        for i in 0..n {
            acc += self.diag[i] * x[i] * x[i];
            if i + 1 < n {
                acc += 2.0 * self.off[i] * x[i] * x[i + 1];
            }
        }
        acc
    }

    /// Solves `(T − shift I) x = rhs` in place by Gaussian elimination
    /// without pivoting. Fails on a vanishing pivot. `work` holds the pivots.
    pub fn solve_shifted_in_place(&self, shift: f64, rhs: &mut [f64], work: &mut Vec<f64>) -> Result<()> {
        let n = self.len();
        work.clear();
        let mut pivot = self.diag[0] - shift;
        for i in 0..n {
            if i > 0 {
                let c = self.off[i - 1] / pivot;
                pivot = self.diag[i] - shift - c * self.off[i - 1];
                rhs[i] -= c * rhs[i - 1];
            }
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::InvalidParameter(format!("singular tridiagonal pivot at row {i}")));
            }
            work.push(pivot);
        }
        rhs[n - 1] /= work[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = (rhs[i] - self.off[i] * rhs[i + 1]) / work[i];
        }
        Ok(())
    }

    pub fn solve_in_place(&self, rhs: &mut [f64], work: &mut Vec<f64>) -> Result<()> {
        self.solve_shifted_in_place(0.0, rhs, work)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            let prev = if q == 0.0 { f64::EPSILON * (b2.abs() + 1.0) } else { q };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { b2 / prev };
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut rad = 0.0;
            if i > 0 {
                rad += self.off[i - 1].abs();
            }
            if i + 1 < n {
                rad += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - rad);
            hi = hi.max(self.diag[i] + rad);
        }
        (lo, hi)
    }

    /// The smallest eigenvalue, bisected to a relative width of `rel_tol`.
    pub fn lowest_eigenvalue(&self, rel_tol: f64, max_iter: usize) -> Result<f64> {
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        for _ in 0..max_iter {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= rel_tol * mid.abs().max(1e-300) || hi - lo <= 4.0 * f64::EPSILON * scale {
                return Ok(mid);
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::NoConvergence { iterations: max_iter, what: "eigenvalue bisection".into() })
    }

    /// Lowest eigenpair: bisection, inverse iteration, then the Rayleigh
    /// quotient of the vector as the refined eigenvalue.
    pub fn lowest_eigenpair(&self) -> Result<(f64, Vec<f64>)> {
        let estimate = self.lowest_eigenvalue(1e-15, 400)?;
        let v = self.eigenvector(estimate, 3)?;
        Ok((self.quadratic_form(&v), v))
    }

    /// Eigenvector for an eigenvalue estimate by inverse iteration, normalized
    /// to unit Euclidean length with a positive entry of largest modulus.
    pub fn eigenvector(&self, eigenvalue: f64, iterations: usize) -> Result<Vec<f64>> {
        let n = self.len();
        let (glo, ghi) = self.gershgorin();
        let spread = (ghi - glo).abs().max(1.0);
        let shift = eigenvalue - 1e-10 * spread;
        let mut v = vec![1.0; n];
        let mut work = Vec::with_capacity(2 * n);
        for _ in 0..iterations.max(1) {
            self.solve_shifted_in_place(shift, &mut v, &mut work)?;
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(Error::NoConvergence { iterations, what: "inverse iteration".into() });
            }
            v.iter_mut().for_each(|x| *x /= norm);
        }
        let imax = (0..n).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap_or(0);
        if v[imax] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn laplacian(n: usize) -> SymTridiag {
        SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn lowest_eigenvalue_of_discrete_laplacian() {
        let n = 50;
        let t = laplacian(n);
        let exact = 2.0 - 2.0 * (PI / (n as f64 + 1.0)).cos();
        let got = t.lowest_eigenvalue(1e-14, 500).unwrap();
        assert!((got - exact).abs() < 1e-14);
        assert_eq!(t.count_below(exact * 1.0001), 1);
        let v = t.eigenvector(got, 3).unwrap();
        for (i, x) in v.iter().enumerate() {
            let e = (PI * (i as f64 + 1.0) / (n as f64 + 1.0)).sin() * (2.0 / (n as f64 + 1.0)).sqrt();
            assert!((x - e).abs() < 1e-9);
        }
    }

    #[test]
    fn solve_roundtrip() {
        let t = SymTridiag::new(vec![4.0, 5.0, 6.0, 7.0], vec![1.0, -2.0, 0.5]);
        let x = [1.0, -2.0, 3.0, 0.25];
        let mut b = [0.0; 4];
        t.apply(&x, &mut b);
        let mut work = Vec::new();
        t.solve_in_place(&mut b, &mut work).unwrap();
        for (a, e) in b.iter().zip(x.iter()) {
            assert!((a - e).abs() < 1e-14);
        }
    }
}
