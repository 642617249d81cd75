//! Otto cycle bookkeeping: works, heats, efficiency, power and the
//! many-body / single-particle performance ratios.
//!
//! Strokes: compression `V_i -> V_f` at `T_C` occupations, hot isochore at
//! `V_f`, expansion `V_f -> V_i` at `T_H` occupations, cold isochore at `V_i`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::math;
use crate::propagate::RampKind;
use crate::spectral::{self, ChainLayout};
use crate::thermo::Ensemble;

/// Endpoint depths and bath temperatures of a cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleParams {
    pub v_i: f64,
    pub v_f: f64,
    pub t_cold: f64,
    pub t_hot: f64,
}

impl CycleParams {
    pub fn new(v_i: f64, v_f: f64, t_cold: f64, t_hot: f64) -> Result<Self> {
        let p = Self {
            v_i,
            v_f,
            t_cold,
            t_hot,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.v_i, self.v_f] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::NegativeDepth(v));
            }
        }
        let temps_ok = self.t_cold.is_finite()
            && self.t_hot.is_finite()
            && self.t_cold >= 0.0
            && self.t_hot > self.t_cold;
        if !temps_ok {
            return Err(Error::InvalidTemperatures {
                cold: self.t_cold,
                hot: self.t_hot,
            });
        }
        Ok(())
    }

    /// Carnot efficiency `1 - T_C / T_H`.
    pub fn carnot(&self) -> f64 {
        1.0 - self.t_cold / self.t_hot
    }

    /// Curzon-Ahlborn efficiency `1 - sqrt(T_C / T_H)`.
    pub fn curzon_ahlborn(&self) -> f64 {
        curzon_ahlborn(self.t_cold, self.t_hot)
    }
}

pub fn curzon_ahlborn(t_cold: f64, t_hot: f64) -> f64 {
    1.0 - math::sqrt(t_cold / t_hot)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleMode {
    Adiabatic,
    FiniteTime(RampKind),
}

/// The four ensemble energies at the stroke boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleEnergies {
    /// `<H_TC(V_i)>`: thermal, start of compression.
    pub cold_initial: f64,
    /// `<H_TC(V_f)>`: end of compression.
    pub cold_final: f64,
    /// `<H_TH(V_f)>`: thermal, start of expansion.
    pub hot_final: f64,
    /// `<H_TH(V_i)>`: end of expansion.
    pub hot_initial: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleRecord {
    pub particles: usize,
    pub wells: usize,
    pub params: CycleParams,
    pub energies: CycleEnergies,
    /// Cycle time in `hbar / E_R`, if one was assigned.
    pub duration: Option<f64>,
    pub mode: CycleMode,
}

impl CycleRecord {
    pub fn work_compression(&self) -> f64 {
        self.energies.cold_final - self.energies.cold_initial
    }

    pub fn work_expansion(&self) -> f64 {
        self.energies.hot_initial - self.energies.hot_final
    }

    pub fn heat_hot(&self) -> f64 {
        self.energies.hot_final - self.energies.cold_final
    }

    pub fn heat_cold(&self) -> f64 {
        self.energies.cold_initial - self.energies.hot_initial
    }

    /// `W_ext = -(W_C + W_H)`.
    pub fn work_output(&self) -> f64 {
        -(self.work_compression() + self.work_expansion())
    }

    pub fn work_per_particle(&self) -> f64 {
        self.work_output() / self.particles as f64
    }

    /// `W_ext / Q_H`; `None` when no heat is absorbed from the hot bath.
    pub fn efficiency(&self) -> Option<f64> {
        let q = self.heat_hot();
        (q > 0.0).then(|| self.work_output() / q)
    }

    pub fn power(&self) -> Option<f64> {
        self.duration.map(|t| self.work_output() / t)
    }

    /// Positive work output beyond rounding of the heat flows, and heat
    /// taken from the hot bath.
    pub fn is_engine(&self) -> bool {
        let noise = 1e-12 * (self.heat_hot().abs() + self.heat_cold().abs());
        self.work_output() > noise && self.heat_hot() > 0.0
    }

    /// `W_C + Q_H + W_H + Q_C`, zero up to rounding.
    pub fn first_law_residual(&self) -> f64 {
        self.work_compression() + self.heat_hot() + self.work_expansion() + self.heat_cold()
    }
}

/// Many-body over single-particle performance.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRecord {
    pub particles: usize,
    pub wells: usize,
    pub params: CycleParams,
    pub eta_star: Option<f64>,
    pub power_star: Option<f64>,
    /// Both cycles extract work.
    pub engine: bool,
}

/// `eta* = eta(N)/eta(1)`, `P* = P(N)/(N P(1))`.
///
/// Without durations the powers are taken with a common cycle time, so
/// `P* = W_ext(N) / (N W_ext(1))`.
pub fn performance_ratios(many: &CycleRecord, single: &CycleRecord) -> Result<RatioRecord> {
    if many.params != single.params {
        return Err(Error::InvalidConfig("ratio requires identical cycle parameters"));
    }
    let w1 = single.work_output();
    if !(w1 > 0.0) {
        return Err(Error::UndefinedRatio(w1));
    }
    let n = many.particles as f64;
    let eta_star = match (many.efficiency(), single.efficiency()) {
        (Some(a), Some(b)) if b > 0.0 => Some(a / b),
        _ => None,
    };
    let power_star = match (many.power(), single.power()) {
        (Some(a), Some(b)) => Some(a / (n * b)),
        _ => Some(many.work_output() / (n * w1)),
    };
    Ok(RatioRecord {
        particles: many.particles,
        wells: many.wells,
        params: many.params,
        eta_star,
        power_star,
        engine: many.is_engine() && single.is_engine(),
    })
}

/// Energies of an adiabatic cycle given the two spectra. Occupations are
/// frozen during the work strokes and carried by rank.
pub fn adiabatic_energies(
    initial: &[f64],
    fin: &[f64],
    particles: usize,
    params: &CycleParams,
) -> Result<CycleEnergies> {
    params.validate()?;
    let cold = Ensemble::thermal(initial, particles, params.t_cold)?;
    let hot = Ensemble::thermal(fin, particles, params.t_hot)?;
    Ok(CycleEnergies {
        cold_initial: cold.energy(initial),
        cold_final: cold.energy(fin),
        hot_final: hot.energy(fin),
        hot_initial: hot.energy(initial),
    })
}

fn adiabatic_record(
    initial: &[f64],
    fin: &[f64],
    particles: usize,
    wells: usize,
    params: &CycleParams,
    duration: Option<f64>,
) -> Result<CycleRecord> {
    Ok(CycleRecord {
        particles,
        wells,
        params: *params,
        energies: adiabatic_energies(initial, fin, particles, params)?,
        duration,
        mode: CycleMode::Adiabatic,
    })
}

/// Reversible cycle between `V_i` and `V_f`. `nominal_duration` only sets
/// the reported power.
pub fn adiabatic_cycle(
    config: &SystemConfig,
    params: &CycleParams,
    nominal_duration: Option<f64>,
) -> Result<CycleRecord> {
    params.validate()?;
    let layout = ChainLayout::new(config);
    let initial = spectral::energies_with(&layout, params.v_i)?;
    let fin = spectral::energies_with(&layout, params.v_f)?;
    adiabatic_record(
        &initial,
        &fin,
        config.particles(),
        config.wells(),
        params,
        nominal_duration,
    )
}

/// Adiabatic many-body cycle, the matching single-well cycle and their ratios.
pub fn adiabatic_comparison(
    config: &SystemConfig,
    params: &CycleParams,
) -> Result<(CycleRecord, CycleRecord, Result<RatioRecord>)> {
    let many = adiabatic_cycle(config, params, None)?;
    let single = adiabatic_cycle(&SystemConfig::single_well_like(config), params, None)?;
    let ratios = performance_ratios(&many, &single);
    Ok((many, single, ratios))
}

/// One adiabatic cycle per particle number, sharing the two spectra.
pub fn sweep_filling(
    config: &SystemConfig,
    params: &CycleParams,
    particles: &[usize],
) -> Result<Vec<CycleRecord>> {
    params.validate()?;
    let layout = ChainLayout::new(config);
    let initial = spectral::energies_with(&layout, params.v_i)?;
    let fin = spectral::energies_with(&layout, params.v_f)?;
    particles
        .iter()
        .map(|&n| adiabatic_record(&initial, &fin, n, config.wells(), params, None))
        .collect()
}

struct SpectrumCache {
    layout: ChainLayout,
    cache: BTreeMap<u64, Vec<f64>>,
}

impl SpectrumCache {
    fn new(config: &SystemConfig) -> Self {
        Self {
            layout: ChainLayout::new(config),
            cache: BTreeMap::new(),
        }
    }

    fn get(&mut self, depth: f64) -> Result<Vec<f64>> {
        if let Some(e) = self.cache.get(&depth.to_bits()) {
            return Ok(e.clone());
        }
        let e = spectral::energies_with(&self.layout, depth)?;
        self.cache.insert(depth.to_bits(), e.clone());
        Ok(e)
    }
}

/// Ratio records on the `V_i x V_f` grid, row-major in `V_i`. Cells that
/// are not engines on both sides are returned with `engine = false`.
pub fn sweep_depths(
    config: &SystemConfig,
    vi_grid: &[f64],
    vf_grid: &[f64],
    t_cold: f64,
    t_hot: f64,
) -> Result<Vec<RatioRecord>> {
    let single_cfg = SystemConfig::single_well_like(config);
    let mut many_cache = SpectrumCache::new(config);
    let mut single_cache = SpectrumCache::new(&single_cfg);
    let mut out = Vec::with_capacity(vi_grid.len() * vf_grid.len());
    for &v_i in vi_grid {
        for &v_f in vf_grid {
            let params = CycleParams::new(v_i, v_f, t_cold, t_hot)?;
            let many = adiabatic_record(
                &many_cache.get(v_i)?,
                &many_cache.get(v_f)?,
                config.particles(),
                config.wells(),
                &params,
                None,
            )?;
            let single =
                adiabatic_record(&single_cache.get(v_i)?, &single_cache.get(v_f)?, 1, 1, &params, None)?;
            let ratio = performance_ratios(&many, &single).unwrap_or(RatioRecord {
                particles: many.particles,
                wells: many.wells,
                params,
                eta_star: None,
                power_star: None,
                engine: false,
            });
            out.push(ratio);
        }
    }
    Ok(out)
}

/// Maximum-power operating point found on a grid of final depths.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxPowerPoint {
    pub efficiency: f64,
    pub v_f: f64,
    pub work_output: f64,
    pub curzon_ahlborn: f64,
    pub grid_points: usize,
}

/// Efficiency at the final depth that maximizes the adiabatic power. All
/// cycles share one nominal duration, so power is maximized through `W_ext`.
pub fn efficiency_at_max_power(
    config: &SystemConfig,
    v_i: f64,
    t_cold: f64,
    t_hot: f64,
    vf_grid: &[f64],
) -> Result<MaxPowerPoint> {
    let layout = ChainLayout::new(config);
    let initial = spectral::energies_with(&layout, v_i)?;
    let mut best: Option<(f64, CycleRecord)> = None;
    for &v_f in vf_grid {
        let params = CycleParams::new(v_i, v_f, t_cold, t_hot)?;
        let fin = spectral::energies_with(&layout, v_f)?;
        let rec = adiabatic_record(&initial, &fin, config.particles(), config.wells(), &params, None)?;
        if !rec.is_engine() {
            continue;
        }
        let w = rec.work_output();
        if best.as_ref().map_or(true, |(bw, _)| w > *bw) {
            best = Some((w, rec));
        }
    }
    let (work_output, rec) = best.ok_or(Error::NoEngineRegion)?;
    Ok(MaxPowerPoint {
        efficiency: rec.efficiency().unwrap_or(0.0),
        v_f: rec.params.v_f,
        work_output,
        curzon_ahlborn: curzon_ahlborn(t_cold, t_hot),
        grid_points: vf_grid.len(),
    })
}
