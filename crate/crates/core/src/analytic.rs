//! Closed forms for deep lattices at low temperature.
//!
//! Each deep well is treated as a harmonic oscillator with frequency
//! `2 sqrt(V_f)` plus a first-order quartic correction. Thermal sums use the
//! harmonic partition function `Z = csch(theta)/2`, `theta = sqrt(V_f)/T_H`.
//! These serve as independent oracles for the numerical pipeline.

use crate::error::{Error, Result};
use crate::math::{coth, csch, sqrt};

/// Depth from which the deep-lattice forms are considered applicable.
pub const DEEP_LATTICE_THRESHOLD: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeepLatticeParams {
    pub v_f: f64,
    pub t_hot: f64,
    pub particles: usize,
}

impl DeepLatticeParams {
    pub fn new(v_f: f64, t_hot: f64, particles: usize) -> Self {
        Self {
            v_f,
            t_hot,
            particles,
        }
    }

    /// `theta = sqrt(V_f) / T_H`.
    pub fn theta(&self) -> f64 {
        sqrt(self.v_f) / self.t_hot
    }

    /// Gap between the two lowest site levels, `2 sqrt(V_f) - 1`.
    pub fn gap(&self) -> f64 {
        2.0 * sqrt(self.v_f) - 1.0
    }

    pub fn is_deep(&self) -> bool {
        self.v_f >= DEEP_LATTICE_THRESHOLD
    }

    pub fn is_cold(&self) -> bool {
        self.theta() > 1.0
    }

    pub fn in_regime(&self) -> bool {
        self.is_deep() && self.is_cold()
    }
}

/// Site level `n` of a deep well: harmonic term plus quartic correction.
pub fn site_energy(n: usize, v_f: f64) -> f64 {
    let n1 = (n + 1) as f64;
    (n as f64 + 0.5) * 2.0 * sqrt(v_f) + 0.25 * (2.0 * n1 - 2.0 * n1 * n1 - 1.0)
}

/// Harmonic partition function `sum_n exp(-(2n+1) theta) = csch(theta)/2`.
pub fn harmonic_partition(theta: f64) -> f64 {
    0.5 * csch(theta)
}

/// Partition function built from the corrected site levels.
pub fn alt_partition_correction(v_f: f64, t_hot: f64) -> f64 {
    let theta = sqrt(v_f) / t_hot;
    let c = coth(theta);
    0.5 * csch(theta) + theta * c * c * csch(theta) / (8.0 * sqrt(v_f))
}

/// Stroke-boundary energies of a cycle `0 -> V_f` with `T_C = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEnergies {
    /// `<H_0(0)>`
    pub ground_box: f64,
    /// `<H_0(V_f)>`
    pub ground_lattice: f64,
    /// `<H_TH(V_f)>`
    pub thermal_lattice: f64,
    /// `<H_TH(0)>`
    pub thermal_box: f64,
}

impl ClosedFormEnergies {
    pub fn work_compression(&self) -> f64 {
        self.ground_lattice - self.ground_box
    }

    pub fn work_expansion(&self) -> f64 {
        self.thermal_box - self.thermal_lattice
    }

    pub fn heat_hot(&self) -> f64 {
        self.thermal_lattice - self.ground_lattice
    }

    pub fn work_output(&self) -> f64 {
        -(self.work_compression() + self.work_expansion())
    }

    pub fn efficiency(&self) -> f64 {
        self.work_output() / self.heat_hot()
    }
}

/// Unit-filling energies of `N` particles.
pub fn mb_energies(p: &DeepLatticeParams) -> ClosedFormEnergies {
    let n = p.particles as f64;
    let theta = p.theta();
    let c = coth(theta);
    let s = csch(theta);
    ClosedFormEnergies {
        ground_box: (n + 1.0) * (2.0 * n + 1.0) / (6.0 * n),
        ground_lattice: n * (sqrt(p.v_f) - 0.25),
        thermal_lattice: n * (sqrt(p.v_f) * c - 0.25 * c * c),
        thermal_box: (1.0 + 2.0 * n * n + 3.0 * n * c + 3.0 * n * n * s * s) / (6.0 * n),
    }
}

/// Single-particle (one-well) energies.
pub fn sqhe_energies(v_f: f64, t_hot: f64) -> ClosedFormEnergies {
    let p = DeepLatticeParams::new(v_f, t_hot, 1);
    let c = coth(p.theta());
    ClosedFormEnergies {
        ground_box: 1.0,
        ground_lattice: sqrt(v_f) - 0.25,
        thermal_lattice: sqrt(v_f) * c - 0.25 * c * c,
        thermal_box: 0.5 * c * (1.0 + c),
    }
}

/// Total box energy of band `m` when each band holds `N` particles.
pub fn band_energy(m: usize, particles: usize) -> f64 {
    let n = particles as f64;
    let m = m as f64;
    (1.0 + 3.0 * n * (2.0 * m + 1.0) + 2.0 * n * n * (3.0 * m * m + 3.0 * m + 1.0)) / (6.0 * n)
}

/// Closed-form ratio estimate and its validity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub value: f64,
    pub denominator: f64,
    pub in_regime: bool,
}

impl RatioEstimate {
    /// The expression is only meaningful for a positive denominator.
    pub fn is_valid(&self) -> bool {
        self.denominator > 0.0
    }
}

/// `eta* = P* ~ 1 + (1 - 1/N) / (Delta - 3/2 [coth(theta) + 1])`.
pub fn ratio_approximation(p: &DeepLatticeParams) -> RatioEstimate {
    let n = p.particles as f64;
    let denominator = p.gap() - 1.5 * (coth(p.theta()) + 1.0);
    RatioEstimate {
        value: 1.0 + (1.0 - 1.0 / n) / denominator,
        denominator,
        in_regime: p.in_regime(),
    }
}

/// Large-`M`, zero-temperature limit of `eta(2M)/eta(1)` at double filling.
pub fn double_filling_ratio(v_f: f64) -> Result<f64> {
    let gap = 2.0 * sqrt(v_f) - 1.0;
    if !(gap > 3.0) {
        return Err(Error::OutOfRegime("double filling limit needs a gap above 3"));
    }
    Ok((1.0 - 4.0 / (gap - 1.0)) / (1.0 - 3.0 / gap))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn site_levels() {
        assert!((site_energy(0, 49.0) - (7.0 - 0.25)).abs() < 1e-14);
        assert!((site_energy(1, 25.0) - site_energy(0, 25.0) - 9.0).abs() < 1e-13);
        assert!((site_energy(0, 100.0) - 9.75).abs() < 1e-14);
    }

    #[test]
    fn single_particle_box_ground_state() {
        assert_eq!(mb_energies(&DeepLatticeParams::new(200.0, 5.0, 1)).ground_box, 1.0);
        assert_eq!(sqhe_energies(200.0, 5.0).ground_box, 1.0);
    }

    #[test]
    fn zero_temperature_limits() {
        let p = DeepLatticeParams::new(100.0, 1e-3, 30);
        let e = mb_energies(&p);
        assert!((e.thermal_lattice - e.ground_lattice).abs() < 1e-12);
        let s = sqhe_energies(100.0, 1e-3);
        assert!((s.thermal_box - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_particle_forms_coincide() {
        // the N = 1 many-body forms reduce to the single-well forms
        for &(v, t) in &[(50.0, 2.0), (200.0, 5.0), (30.0, 10.0)] {
            let a = mb_energies(&DeepLatticeParams::new(v, t, 1));
            let b = sqhe_energies(v, t);
            assert!((a.thermal_box - b.thermal_box).abs() < 1e-12);
            assert!((a.thermal_lattice - b.thermal_lattice).abs() < 1e-12);
        }
    }

    #[test]
    fn ratio_values() {
        assert_eq!(ratio_approximation(&DeepLatticeParams::new(200.0, 5.0, 1)).value, 1.0);
        let r = ratio_approximation(&DeepLatticeParams::new(200.0, 5.0, 100));
        assert!(r.in_regime && r.is_valid());
        assert!((r.value - 1.0407847916088857).abs() < 1e-12);
        // asymptote 1 + 1/(Delta - 3) exceeds one above V_f = 4
        let big = ratio_approximation(&DeepLatticeParams::new(4.5, 1e-4, 1_000_000));
        assert!(big.value > 1.0);
    }

    #[test]
    fn invalid_denominator_is_flagged() {
        let r = ratio_approximation(&DeepLatticeParams::new(2.0, 5.0, 10));
        assert!(!r.is_valid());
        assert!(!r.in_regime);
    }

    #[test]
    fn double_filling_values() {
        assert!(double_filling_ratio(9.0).unwrap().abs() < 1e-15);
        assert!((double_filling_ratio(25.0).unwrap() - 0.75).abs() < 1e-15);
        assert!(double_filling_ratio(4.0).is_err());
        for v in [5.0, 10.0, 50.0, 500.0] {
            assert!(double_filling_ratio(v).unwrap() < 1.0);
        }
    }

    #[test]
    fn corrected_partition_function() {
        let t = 5.0;
        let v = 25.0;
        let z = harmonic_partition(sqrt(v) / t);
        assert!(alt_partition_correction(v, t) > z);
        let far = alt_partition_correction(1e12, 1e6);
        assert!((far - harmonic_partition(1.0)).abs() < 1e-5);
    }

    #[test]
    fn band_energy_sums_to_box_levels() {
        // band m holds box levels mN+1 ..= (m+1)N with energies (k/N)^2
        for n in [1usize, 4, 25] {
            for m in 0..4 {
                let nf = n as f64;
                let direct: f64 = (m * n + 1..=(m + 1) * n).map(|k| (k as f64 / nf).powi(2)).sum();
                assert!((band_energy(m, n) - direct).abs() < 1e-10 * direct);
            }
        }
    }
}
