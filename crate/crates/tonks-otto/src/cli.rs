use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::commands;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::grid_spec::{parse, parse_counts};
use crate::output::Output;

const CONFIG_HELP: &str = "\
Config file (TOML). Sections and keys, with defaults:
  [system]    wells = 30, particles = 30, basis_mult = 24
  [cycle]     v_i = 0, v_f = 25, t_cold = 0, t_hot = 5
  [numerics]  dt_policy = \"converged\" | \"fixed\", dt = 0.02, rel_tol = 1e-6,
              max_halvings = 10, sta_grid_points = 4096, sta_kinetic = 1
  [spectrum]  depths = [0, 5, 25], states = 0 (all), vectors = false, convergence = true
  [adiabatic] fillings = [], scaling = [], v_i_grid = [], v_f_grid = [],
              max_power = false, max_power_grid = \"log:0.5:500:200\", nominal_cycle_time = 1
  [dynamics]  tf = [2], particles = [] (system.particles), write_states = false
  [sta]       kinds = [\"reference\", \"averaged\", \"targeted\"], tf = [5, 10, 15],
              ramp_points = 1001, ramp_up = PATH, ramp_down = PATH
  [oracle]    particles = [10, 50, 100], gap_depths = [0.5, 1, 50, 100, 200]
  [output]    dir = \"out\"
Grids accept arrays or specs: \"1,2,5\", \"lin:LO:HI:N\", \"log:LO:HI:N\", \"A..B\" (inclusive).
Ramp times t_f are in units of 2 pi hbar / E_R; ramp files use hbar / E_R.
Flags override file values.";

#[derive(Debug, Parser)]
#[command(name = "tonks-otto", version, about = "Quantum Otto engine of a Tonks-Girardeau gas in a lattice", after_help = CONFIG_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Single-particle spectra, band gaps and basis convergence per depth.
    Spectrum,
    /// Reversible cycles, filling and size sweeps, depth grids, max power.
    Adiabatic,
    /// Finite-time cycles with the reference ramp and irreversible work.
    Dynamics,
    /// Shortcut-to-adiabaticity ramps and the cycles they drive.
    Sta,
    /// Numerical pipeline next to the deep-lattice closed forms.
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Adiabatic => "adiabatic",
            Command::Dynamics => "dynamics",
            Command::Sta => "sta",
            Command::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Default, Clone, Args)]
pub struct Overrides {
    /// TOML config file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Wells M.
    #[arg(short = 'M', long, global = true)]
    pub wells: Option<usize>,
    /// Particles N.
    #[arg(short = 'N', long, global = true)]
    pub particles: Option<usize>,
    /// Sine modes per well.
    #[arg(long, global = true)]
    pub basis_mult: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub vi: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub vf: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tc: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub th: Option<f64>,
    /// Ramp times (grid spec) in units of 2 pi hbar / E_R, for dynamics and sta.
    #[arg(long, global = true, value_name = "GRID")]
    pub tf: Option<String>,
    /// Fixed time step in hbar / E_R (switches the policy to fixed).
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Spectrum depths (grid spec).
    #[arg(long, global = true, value_name = "GRID")]
    pub depths: Option<String>,
    /// Filling sweep particle numbers (grid spec).
    #[arg(long, global = true, value_name = "GRID")]
    pub fillings: Option<String>,
    /// N = M values for the size scaling (grid spec).
    #[arg(long, global = true, value_name = "GRID")]
    pub scaling: Option<String>,
    #[arg(long, global = true, value_name = "GRID")]
    pub vi_grid: Option<String>,
    #[arg(long, global = true, value_name = "GRID")]
    pub vf_grid: Option<String>,
    /// Final-depth grid for the maximum-power search; enables it.
    #[arg(long, global = true, value_name = "GRID")]
    pub max_power_grid: Option<String>,
    /// Search for efficiency at maximum power.
    #[arg(long, global = true)]
    pub max_power: bool,
    /// Particle numbers for dynamics (grid spec).
    #[arg(long, global = true, value_name = "GRID")]
    pub dyn_particles: Option<String>,
    /// Ramp kinds for sta, comma separated.
    #[arg(long, global = true, value_name = "LIST")]
    pub kinds: Option<String>,
    /// N = M values for the oracle tables (grid spec).
    #[arg(long, global = true, value_name = "GRID")]
    pub oracle_particles: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    pub ramp_up: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub ramp_down: Option<PathBuf>,
    /// Export eigenvectors with the spectra.
    #[arg(long, global = true)]
    pub vectors: bool,
    /// Write per-state propagation tables in dynamics.
    #[arg(long, global = true)]
    pub write_states: bool,
}

impl Overrides {
    pub fn apply(&self, c: &mut RunConfig) -> CliResult<()> {
        fn set<T: Clone>(dst: &mut T, v: &Option<T>) {
            if let Some(v) = v {
                *dst = v.clone();
            }
        }
        set(&mut c.system.wells, &self.wells);
        set(&mut c.system.particles, &self.particles);
        set(&mut c.system.basis_mult, &self.basis_mult);
        set(&mut c.cycle.v_i, &self.vi);
        set(&mut c.cycle.v_f, &self.vf);
        set(&mut c.cycle.t_cold, &self.tc);
        set(&mut c.cycle.t_hot, &self.th);
        if let Some(dt) = self.dt {
            c.numerics.dt_policy = "fixed".into();
            c.numerics.dt = dt;
        }
        if let Some(s) = &self.tf {
            let g = parse(s)?;
            c.dynamics.tf = g.clone();
            c.sta.tf = g;
        }
        if let Some(s) = &self.depths {
            c.spectrum.depths = parse(s)?;
        }
        if let Some(s) = &self.fillings {
            c.adiabatic.fillings = parse_counts(s)?;
        }
        if let Some(s) = &self.scaling {
            c.adiabatic.scaling = parse_counts(s)?;
        }
        if let Some(s) = &self.vi_grid {
            c.adiabatic.v_i_grid = parse(s)?;
        }
        if let Some(s) = &self.vf_grid {
            c.adiabatic.v_f_grid = parse(s)?;
        }
        if let Some(s) = &self.max_power_grid {
            c.adiabatic.max_power_grid = parse(s)?;
            c.adiabatic.max_power = true;
        }
        c.adiabatic.max_power |= self.max_power;
        if let Some(s) = &self.dyn_particles {
            c.dynamics.particles = parse_counts(s)?;
        }
        if let Some(s) = &self.kinds {
            c.sta.kinds = s.split(',').map(|k| k.trim().to_string()).collect();
        }
        if let Some(s) = &self.oracle_particles {
            c.oracle.particles = parse_counts(s)?;
        }
        if self.ramp_up.is_some() {
            c.sta.ramp_up = self.ramp_up.clone();
        }
        if self.ramp_down.is_some() {
            c.sta.ramp_down = self.ramp_down.clone();
        }
        c.spectrum.vectors |= self.vectors;
        c.dynamics.write_states |= self.write_states;
        set(&mut c.output.dir, &self.out);
        Ok(())
    }

    /// File values first, then flags.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        self.apply(&mut c)?;
        c.validate()?;
        Ok(c)
    }
}

/// Runs one subcommand and returns the files written, in order.
pub fn run(cli: &Cli) -> CliResult<Vec<String>> {
    let cfg = cli.overrides.resolve()?;
    execute(cli.command, &cfg)
}

pub fn execute(command: Command, cfg: &RunConfig) -> CliResult<Vec<String>> {
    let mut out = Output::new(&cfg.output.dir, command.name(), cfg)?;
    let summary = match command {
        Command::Spectrum => commands::spectrum::run(cfg, &mut out)?,
        Command::Adiabatic => commands::adiabatic::run(cfg, &mut out)?,
        Command::Dynamics => commands::dynamics::run(cfg, &mut out)?,
        Command::Sta => commands::sta::run(cfg, &mut out)?,
        Command::Oracle => commands::oracle::run(cfg, &mut out)?,
    };
    out.finish(json!(summary))
}
