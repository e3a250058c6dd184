//! Reference computations that share no code with the solver: Bessel
//! series, an implicit-shift QL eigensolver and finite differences.

use std::f64::consts::PI;

/// `J₀(x)` by its power series. Accurate to rounding for `|x| ≲ 12`.
pub fn bessel_j0(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// `Y₀(x)` from `(2/π)(ln(x/2) + γ) J₀(x) + (2/π) Σ (−1)^{k+1} H_k (x²/4)^k/(k!)²`.
pub fn bessel_y0(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        let add = -term * harmonic;
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1e-300) && k > 5 {
            break;
        }
    }
    2.0 / PI * (((0.5 * x).ln() + EULER_GAMMA) * bessel_j0(x) + sum)
}

/// Root of `f` in `[a, b]` by bisection, assuming a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// First positive zero of `J₀`, `j₀,₁ ≈ 2.404826`.
pub fn bessel_j0_first_zero() -> f64 {
    bisect(bessel_j0, 2.0, 3.0)
}

/// First Dirichlet eigenvalue of the flat unit disk, `j₀,₁²`.
pub fn disk_lambda1() -> f64 {
    bessel_j0_first_zero().powi(2)
}

/// First radial Dirichlet eigenvalue of the annulus `r0 < |x| < 1`: the
/// smallest `k²` with `J₀(k r0) Y₀(k) = J₀(k) Y₀(k r0)`.
pub fn annulus_lambda1(r0: f64) -> f64 {
    let f = |k: f64| bessel_j0(k * r0) * bessel_y0(k) - bessel_j0(k) * bessel_y0(k * r0);
    // The first root lies near π/(1 − r0); scan for the first sign change.
    let step = 0.01 * PI / (1.0 - r0);
    let mut a = step;
    while f(a).signum() == f(a + step).signum() {
        a += step;
    }
    bisect(f, a, a + step).powi(2)
}

/// All eigenvalues of the symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e`, ascending, by implicit-shift QL.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1));
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 60, "QL iteration did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    d
}

/// Smallest eigenvalue of `A v = μ W v` with `A` symmetric tridiagonal and
/// `W` a positive diagonal.
pub fn generalized_lowest(diag: &[f64], off: &[f64], weight: &[f64]) -> f64 {
    let s: Vec<f64> = weight.iter().map(|w| 1.0 / w.sqrt()).collect();
    let d: Vec<f64> = diag.iter().zip(&s).map(|(a, b)| a * b * b).collect();
    let e: Vec<f64> = off.iter().enumerate().map(|(j, o)| o * s[j] * s[j + 1]).collect();
    tridiagonal_eigenvalues(&d, &e)[0]
}

/// Linearization of `−Δu + mu = |u|^{p−2}u` at the radial profile `u0`
/// on the annulus `(r0, 1)` in the plane, assembled on staggered nodes with
/// mirrored ghost values at both walls. Returns `(diag, off, weight)` for
/// the weight `1/r²` in the measure `r dr`.
pub fn annulus_linearization(r0: f64, m: f64, p: f64, u0: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = u0.len();
    let h = (1.0 - r0) / n as f64;
    let node = |j: usize| r0 + (j as f64 + 0.5) * h;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    let mut weight = vec![0.0; n];
    for j in 0..n {
        let r = node(j);
        let left = r - 0.5 * h;
        let right = r + 0.5 * h;
        // Face fluxes; a wall face sees the ghost value −u, doubling its weight.
        let wl = if j == 0 { 2.0 * left } else { left };
        let wr = if j + 1 == n { 2.0 * right } else { right };
        diag[j] = (wl + wr) / h + h * r * (m - (p - 1.0) * u0[j].abs().powf(p - 2.0));
        if j + 1 < n {
            off[j] = -right / h;
        }
        weight[j] = h / r;
    }
    (diag, off, weight)
}

/// Central difference `(f(x + h d) − f(x − h d)) / 2h`.
pub fn central_difference<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], d: &[f64], h: f64) -> f64 {
    let plus: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + h * b).collect();
    let minus: Vec<f64> = x.iter().zip(d).map(|(a, b)| a - h * b).collect();
    (f(&plus) - f(&minus)) / (2.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_values() {
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_y0(1.0) - 0.088_256_964_215_676_96).abs() < 1e-14);
        assert!((bessel_j0_first_zero() - 2.404_825_557_695_773).abs() < 1e-14);
    }

    #[test]
    fn ql_matches_closed_form() {
        // Second-difference matrix: 2 − 2cos(kπ/(n+1)).
        let n = 50;
        let ev = tridiagonal_eigenvalues(&vec![2.0; n], &vec![-1.0; n - 1]);
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-12);
        }
    }
}
