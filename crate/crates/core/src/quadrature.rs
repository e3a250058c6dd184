//! Composite midpoint quadrature on intervals.

/// Midpoint nodes `lo + (j + ½) h`, `h = (hi − lo)/n`.
pub fn midpoint_nodes(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    let h = (hi - lo) / n as f64;
    (0..n).map(move |j| lo + (j as f64 + 0.5) * h)
}

/// ∫_lo^hi f by the composite midpoint rule with `n` cells.
pub fn midpoint<F: FnMut(f64) -> f64>(lo: f64, hi: f64, n: usize, f: F) -> f64 {
    let h = (hi - lo) / n as f64;
    midpoint_nodes(lo, hi, n).map(f).sum::<f64>() * h
}
