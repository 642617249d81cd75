//! Parameter grids used by the sweeps.

use alloc::vec::Vec;

use crate::math;

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive (`lo > 0`).
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (math::ln(lo), math::ln(hi));
    let mut out: Vec<f64> = linspace(a, b, n).into_iter().map(math::exp).collect();
    if let Some(first) = out.first_mut() {
        *first = lo;
    }
    if n > 1 {
        out[n - 1] = hi;
    }
    out
}

/// Default grid for the maximum-power search over the final depth.
pub fn default_max_power_grid() -> Vec<f64> {
    logspace(0.5, 500.0, 200)
}
