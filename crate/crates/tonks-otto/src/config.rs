//! Run configuration: TOML sections, then command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tonks_otto_core::config::DEFAULT_BASIS_MULTIPLIER;
use tonks_otto_core::cycle::CycleParams;
use tonks_otto_core::grid::default_max_power_grid;
use tonks_otto_core::propagate::{DtControl, RampKind};
use tonks_otto_core::sta::StaOptions;
use tonks_otto_core::SystemConfig;

use crate::error::{CliError, CliResult};
use crate::grid_spec::{de_counts, de_grid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemSection,
    pub cycle: CycleSection,
    pub numerics: NumericsSection,
    pub spectrum: SpectrumSection,
    pub adiabatic: AdiabaticSection,
    pub dynamics: DynamicsSection,
    pub sta: StaSection,
    pub oracle: OracleSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub wells: usize,
    pub particles: usize,
    /// Box sine modes per well.
    pub basis_mult: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CycleSection {
    pub v_i: f64,
    pub v_f: f64,
    pub t_cold: f64,
    pub t_hot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsSection {
    /// `fixed` or `converged`.
    pub dt_policy: String,
    pub dt: f64,
    pub rel_tol: f64,
    pub max_halvings: u32,
    pub sta_grid_points: usize,
    pub sta_kinetic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    #[serde(deserialize_with = "de_grid")]
    pub depths: Vec<f64>,
    /// Levels written per depth; 0 writes the whole basis.
    pub states: usize,
    pub vectors: bool,
    pub convergence: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdiabaticSection {
    /// Particle numbers for the filling sweep at fixed `M`.
    #[serde(deserialize_with = "de_counts")]
    pub fillings: Vec<usize>,
    /// `N = M` values for the size scaling.
    #[serde(deserialize_with = "de_counts")]
    pub scaling: Vec<usize>,
    #[serde(deserialize_with = "de_grid")]
    pub v_i_grid: Vec<f64>,
    #[serde(deserialize_with = "de_grid")]
    pub v_f_grid: Vec<f64>,
    pub max_power: bool,
    #[serde(deserialize_with = "de_grid")]
    pub max_power_grid: Vec<f64>,
    /// Shared cycle time for reported adiabatic powers.
    pub nominal_cycle_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsSection {
    /// Ramp times in units of `2 pi hbar / E_R`.
    #[serde(deserialize_with = "de_grid")]
    pub tf: Vec<f64>,
    /// Particle numbers; empty means `system.particles`.
    #[serde(deserialize_with = "de_counts")]
    pub particles: Vec<usize>,
    /// Write per-state propagation tables for every run.
    pub write_states: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaSection {
    /// Any of `reference`, `averaged`, `targeted`.
    pub kinds: Vec<String>,
    #[serde(deserialize_with = "de_grid")]
    pub tf: Vec<f64>,
    pub ramp_points: usize,
    /// Optional `(t, V)` CSV files driving a custom cycle.
    pub ramp_up: Option<PathBuf>,
    pub ramp_down: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSection {
    /// `N = M` values compared against the closed forms.
    #[serde(deserialize_with = "de_counts")]
    pub particles: Vec<usize>,
    #[serde(deserialize_with = "de_grid")]
    pub gap_depths: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            system: SystemSection::default(),
            cycle: CycleSection::default(),
            numerics: NumericsSection::default(),
            spectrum: SpectrumSection::default(),
            adiabatic: AdiabaticSection::default(),
            dynamics: DynamicsSection::default(),
            sta: StaSection::default(),
            oracle: OracleSection::default(),
            output: OutputSection::default(),
        }
    }
}

impl Default for SystemSection {
    fn default() -> Self {
        Self {
            wells: 30,
            particles: 30,
            basis_mult: DEFAULT_BASIS_MULTIPLIER,
        }
    }
}

impl Default for CycleSection {
    fn default() -> Self {
        Self {
            v_i: 0.0,
            v_f: 25.0,
            t_cold: 0.0,
            t_hot: 5.0,
        }
    }
}

impl Default for NumericsSection {
    fn default() -> Self {
        let o = StaOptions::default();
        Self {
            dt_policy: "converged".into(),
            dt: 0.02,
            rel_tol: 1e-6,
            max_halvings: 10,
            sta_grid_points: o.grid_points,
            sta_kinetic: o.kinetic,
        }
    }
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            depths: vec![0.0, 5.0, 25.0],
            states: 0,
            vectors: false,
            convergence: true,
        }
    }
}

impl Default for AdiabaticSection {
    fn default() -> Self {
        Self {
            fillings: Vec::new(),
            scaling: Vec::new(),
            v_i_grid: Vec::new(),
            v_f_grid: Vec::new(),
            max_power: false,
            max_power_grid: default_max_power_grid(),
            nominal_cycle_time: 1.0,
        }
    }
}

impl Default for DynamicsSection {
    fn default() -> Self {
        Self {
            tf: vec![2.0],
            particles: Vec::new(),
            write_states: false,
        }
    }
}

impl Default for StaSection {
    fn default() -> Self {
        Self {
            kinds: vec!["reference".into(), "averaged".into(), "targeted".into()],
            tf: vec![5.0, 10.0, 15.0],
            ramp_points: 1001,
            ramp_up: None,
            ramp_down: None,
        }
    }
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            particles: vec![10, 50, 100],
            gap_depths: vec![0.5, 1.0, 50.0, 100.0, 200.0],
        }
    }
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn system(&self) -> CliResult<SystemConfig> {
        self.system_with(self.system.wells, self.system.particles)
    }

    pub fn system_with(&self, wells: usize, particles: usize) -> CliResult<SystemConfig> {
        Ok(SystemConfig::with_basis_multiplier(wells, particles, self.system.basis_mult)?)
    }

    pub fn cycle_params(&self) -> CliResult<CycleParams> {
        let c = &self.cycle;
        Ok(CycleParams::new(c.v_i, c.v_f, c.t_cold, c.t_hot)?)
    }

    pub fn dt_control(&self) -> CliResult<DtControl> {
        let n = &self.numerics;
        if !(n.dt > 0.0 && n.dt.is_finite()) {
            return Err(CliError::config("numerics.dt must be positive"));
        }
        match n.dt_policy.as_str() {
            "fixed" => Ok(DtControl::Fixed { dt: n.dt }),
            "converged" => {
                if !(n.rel_tol > 0.0) {
                    return Err(CliError::config("numerics.rel_tol must be positive"));
                }
                Ok(DtControl::Converged {
                    initial_dt: n.dt,
                    rel_tol: n.rel_tol,
                    max_halvings: n.max_halvings,
                })
            }
            other => Err(CliError::config(format!("unknown dt_policy '{other}'"))),
        }
    }

    pub fn sta_options(&self) -> StaOptions {
        StaOptions {
            grid_points: self.numerics.sta_grid_points,
            kinetic: self.numerics.sta_kinetic,
            ..StaOptions::default()
        }
    }

    pub fn sta_kinds(&self) -> CliResult<Vec<RampKind>> {
        self.sta.kinds.iter().map(|k| parse_kind(k)).collect()
    }

    pub fn dynamics_particles(&self) -> Vec<usize> {
        if self.dynamics.particles.is_empty() {
            vec![self.system.particles]
        } else {
            self.dynamics.particles.clone()
        }
    }

    /// Checks that do not need any numerics.
    pub fn validate(&self) -> CliResult<()> {
        self.system()?;
        self.cycle_params()?;
        self.dt_control()?;
        self.sta_kinds()?;
        for &t in self.dynamics.tf.iter().chain(&self.sta.tf) {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::config(format!("ramp time must be positive, got {t}")));
            }
        }
        if self.spectrum.depths.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
            return Err(CliError::config("spectrum depths must be non-negative"));
        }
        if !(self.adiabatic.nominal_cycle_time > 0.0) {
            return Err(CliError::config("adiabatic.nominal_cycle_time must be positive"));
        }
        if self.sta.ramp_points < 2 {
            return Err(CliError::config("sta.ramp_points must be at least 2"));
        }
        if self.sta.ramp_up.is_some() != self.sta.ramp_down.is_some() {
            return Err(CliError::config("sta.ramp_up and sta.ramp_down must be given together"));
        }
        Ok(())
    }
}

pub fn parse_kind(name: &str) -> CliResult<RampKind> {
    match name {
        "reference" | "lambda" => Ok(RampKind::Reference),
        "averaged" => Ok(RampKind::StaAveraged),
        "targeted" => Ok(RampKind::StaTargeted),
        other => Err(CliError::config(format!("unknown ramp kind '{other}'"))),
    }
}

pub fn kind_name(kind: RampKind) -> &'static str {
    match kind {
        RampKind::Reference => "reference",
        RampKind::StaAveraged => "averaged",
        RampKind::StaTargeted => "targeted",
        RampKind::Custom => "custom",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_grid_strings() {
        let c = RunConfig::from_toml(
            "[system]\nwells = 4\nparticles = 3\n[spectrum]\ndepths = \"lin:0:10:3\"\n[dynamics]\nparticles = \"2..4\"\n",
        )
        .unwrap();
        assert_eq!(c.system.wells, 4);
        assert_eq!(c.system.basis_mult, DEFAULT_BASIS_MULTIPLIER);
        assert_eq!(c.spectrum.depths, vec![0.0, 5.0, 10.0]);
        assert_eq!(c.dynamics.particles, vec![2, 3, 4]);
        c.validate().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml("[system]\nwels = 4\n").is_err());
        assert!(RunConfig::from_toml("[nope]\n").is_err());
    }

    #[test]
    fn invalid_values_are_config_errors() {
        let mut c = RunConfig::default();
        c.cycle.t_cold = 9.0;
        assert_eq!(c.validate().unwrap_err().exit_code(), 2);
        let mut c = RunConfig::default();
        c.numerics.dt_policy = "adaptive".into();
        assert_eq!(c.validate().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn round_trips_through_toml() {
        let c = RunConfig::default();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), c);
    }
}
