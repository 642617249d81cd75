//! Fermi-Dirac statistics of the mapped gas.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Residual target for `sum f - N` in the chemical-potential search.
pub const PARTICLE_TOLERANCE: f64 = 1e-12;

/// Half-width of the search bracket around the spectrum, in units of `T`.
const BRACKET_WIDTH: f64 = 50.0;

/// `1 / (exp((E - mu)/T) + 1)`, evaluated without overflow. At `T = 0` this is
/// the step function with `1/2` exactly at `E = mu`.
pub fn fermi_factor(energy: f64, mu: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return if energy < mu {
            1.0
        } else if energy > mu {
            0.0
        } else {
            0.5
        };
    }
    let x = (energy - mu) / temperature;
    if x > 0.0 {
        let e = math::exp(-x);
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + math::exp(x))
    }
}

pub fn occupations(energies: &[f64], mu: f64, temperature: f64) -> Vec<f64> {
    energies
        .iter()
        .map(|&e| fermi_factor(e, mu, temperature))
        .collect()
}

fn particle_count(energies: &[f64], mu: f64, temperature: f64) -> (f64, f64) {
    let mut count = 0.0;
    let mut slope = 0.0;
    for &e in energies {
        let f = fermi_factor(e, mu, temperature);
        count += f;
        slope += f * (1.0 - f);
    }
    (count, slope / temperature)
}

/// Root of `sum_n f_n(mu) = N` for `T > 0`.
///
/// Safeguarded Newton iteration inside the bracket
/// `[E_0 - 50 T, E_max + 50 T]`, falling back to bisection.
pub fn chemical_potential(energies: &[f64], particles: usize, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidTemperatures {
            cold: temperature,
            hot: temperature,
        });
    }
    if particles > energies.len() {
        return Err(Error::InsufficientStates {
            requested: particles,
            available: energies.len(),
        });
    }
    let n = particles as f64;
    let emin = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let emax = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut lo = emin - BRACKET_WIDTH * temperature;
    let mut hi = emax + BRACKET_WIDTH * temperature;
    let (g_lo, _) = particle_count(energies, lo, temperature);
    let (g_hi, _) = particle_count(energies, hi, temperature);
    if g_lo - n > PARTICLE_TOLERANCE || n - g_hi > PARTICLE_TOLERANCE {
        return Err(Error::BracketFailure { lo, hi });
    }

    let mut mu = if particles == 0 {
        lo
    } else if particles < energies.len() {
        0.5 * (energies[particles - 1] + energies[particles])
    } else {
        emax
    };
    mu = mu.clamp(lo, hi);

    for _ in 0..400 {
        let (count, slope) = particle_count(energies, mu, temperature);
        let g = count - n;
        if g.abs() <= PARTICLE_TOLERANCE {
            return Ok(mu);
        }
        if g > 0.0 {
            hi = mu;
        } else {
            lo = mu;
        }
        if hi - lo <= 4.0 * f64::EPSILON * mu.abs().max(1.0) {
            return Ok(mu);
        }
        let newton = mu - g / slope;
        mu = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(mu)
}

/// `sum_n f_n E_n`.
pub fn ensemble_energy(energies: &[f64], occupations: &[f64]) -> f64 {
    assert_eq!(energies.len(), occupations.len(), "occupation/spectrum length mismatch");
    energies.iter().zip(occupations).map(|(e, f)| e * f).sum()
}

/// Energy after carrying `occupations` unchanged onto `target` (rank by rank).
pub fn adiabatic_energy(occupations: &[f64], target: &[f64]) -> f64 {
    ensemble_energy(target, occupations)
}

/// `-sum [f ln f + (1-f) ln(1-f)]` with `0 ln 0 = 0`.
pub fn entropy(occupations: &[f64]) -> f64 {
    let h = |p: f64| if p > 0.0 { -p * math::ln(p) } else { 0.0 };
    occupations.iter().map(|&f| h(f) + h(1.0 - f)).sum()
}

/// Occupations of a fixed particle number at temperature `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    temperature: f64,
    chemical_potential: Option<f64>,
    occupations: Vec<f64>,
    particles: usize,
}

impl Ensemble {
    /// Thermal occupations of `energies` (ascending). `T = 0` gives the exact
    /// step filling of the lowest `N` levels.
    pub fn thermal(energies: &[f64], particles: usize, temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidTemperatures {
                cold: temperature,
                hot: temperature,
            });
        }
        if particles > energies.len() {
            return Err(Error::InsufficientStates {
                requested: particles,
                available: energies.len(),
            });
        }
        if temperature == 0.0 {
            let mut occupations = vec![0.0; energies.len()];
            occupations[..particles].iter_mut().for_each(|f| *f = 1.0);
            let chemical_potential = (particles > 0 && particles < energies.len())
                .then(|| 0.5 * (energies[particles - 1] + energies[particles]));
            return Ok(Self {
                temperature,
                chemical_potential,
                occupations,
                particles,
            });
        }
        let mu = chemical_potential(energies, particles, temperature)?;
        Ok(Self {
            temperature,
            chemical_potential: Some(mu),
            occupations: occupations(energies, mu, temperature),
            particles,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn chemical_potential(&self) -> Option<f64> {
        self.chemical_potential
    }

    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn energy(&self, energies: &[f64]) -> f64 {
        ensemble_energy(energies, &self.occupations)
    }

    pub fn entropy(&self) -> f64 {
        entropy(&self.occupations)
    }
}
