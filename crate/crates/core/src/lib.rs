//! Quantum Otto engine with a Tonks-Girardeau working medium.
//!
//! The gas is treated through the Bose-Fermi mapping: every observable used
//! here (energies, heats, works) follows from single-particle eigenstates of a
//! hard-wall box with a superimposed optical lattice `V0 cos^2(k0 x + phi)`,
//! filled with Fermi-Dirac occupations.
//!
//! Units: recoil energy `E_R = hbar^2 k0^2 / 2m = 1`, `k0 = 1`, `hbar = 1`.
//! Temperatures are in `E_R / k_B` and internal times in `hbar / E_R`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod config;
pub mod cycle;
mod error;
pub mod grid;
mod math;
pub mod propagate;
pub mod spectral;
pub mod sta;
pub mod thermo;

pub use config::SystemConfig;
pub use cycle::{CycleEnergies, CycleMode, CycleParams, CycleRecord, RatioRecord};
pub use error::{Error, Result};
pub use propagate::{DtControl, PropagationResult, Ramp, RampKind};
pub use spectral::Spectrum;
pub use thermo::Ensemble;
