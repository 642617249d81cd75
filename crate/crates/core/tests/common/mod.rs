#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=n {
                    let kf = k as f64;
                    let q2 = ((2.0 * kf - 1.0) * z * q1 - (kf - 1.0) * q0) / kf;
                    q0 = q1;
                    q1 = q2;
                }
                let d = n as f64 * (z * q1 - q0) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * d * d);
                break;
            }
        }
    }
    (x, w)
}

/// Composite Gauss-Legendre quadrature, 16 nodes per panel.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre(16);
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            s += wi * f(mid + 0.5 * h * xi);
        }
    }
    0.5 * h * s
}

/// Normalized sine mode `n` (1-based) on `[-L/2, L/2]`.
pub fn sine_mode(n: usize, x: f64, box_length: f64) -> f64 {
    (2.0 / box_length).sqrt() * (n as f64 * PI * (x + 0.5 * box_length) / box_length).sin()
}

/// Lattice profile for `M` wells in a box of length `M pi`.
pub fn lattice(x: f64, wells: usize) -> f64 {
    let phase = if wells % 2 == 0 { 0.0 } else { 0.5 * PI };
    (x + phase).cos().powi(2)
}

fn sturm_count(diag: &[f64], off2: f64, x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        q = d - x - if i == 0 { 0.0 } else { off2 / q };
        if q == 0.0 {
            q = 1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `count` eigenvalues of `-u'' + V cos^2 u` on the box by second-order
/// finite differences with `points` interior nodes, via Sturm bisection.
pub fn fd_eigenvalues(wells: usize, depth: f64, points: usize, count: usize) -> Vec<f64> {
    let l = wells as f64 * PI;
    let h = l / (points + 1) as f64;
    let diag: Vec<f64> = (1..=points)
        .map(|i| 2.0 / (h * h) + depth * lattice(-0.5 * l + i as f64 * h, wells))
        .collect();
    let off2 = 1.0 / (h * h * h * h);
    let hi0 = diag.iter().cloned().fold(f64::MIN, f64::max) + 4.0 / (h * h);
    (0..count)
        .map(|k| {
            let (mut lo, mut hi) = (-1.0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(&diag, off2, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Richardson-extrapolated finite-difference eigenvalues (fourth order).
pub fn fd_eigenvalues_extrapolated(wells: usize, depth: f64, points: usize, count: usize) -> Vec<f64> {
    let coarse = fd_eigenvalues(wells, depth, points, count);
    let fine = fd_eigenvalues(wells, depth, 2 * points + 1, count);
    coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect()
}

/// Thermal energies at unit filling with the whole gas weighted band by band
/// with Boltzmann factors of the band-centre energies. Returns the lattice
/// energy and the energy after carrying the weights to the free box.
pub fn band_canonical_energies(lattice_levels: &[f64], wells: usize, temperature: f64) -> (f64, f64) {
    let bands = lattice_levels.len() / wells;
    let centre: Vec<f64> = (0..bands)
        .map(|m| lattice_levels[m * wells..(m + 1) * wells].iter().sum::<f64>() / wells as f64)
        .collect();
    let w: Vec<f64> = centre.iter().map(|e| (-(e - centre[0]) / temperature).exp()).collect();
    let z: f64 = w.iter().sum();
    let n = wells as f64;
    let mut lattice = 0.0;
    let mut free = 0.0;
    for m in 0..bands {
        let p = w[m] / z;
        lattice += p * n * centre[m];
        let band_box: f64 = (m * wells + 1..=(m + 1) * wells).map(|k| (k as f64 / n).powi(2)).sum();
        free += p * band_box;
    }
    (lattice, free)
}
