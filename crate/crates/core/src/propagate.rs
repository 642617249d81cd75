//! Finite-time work strokes: unitary evolution of single-particle states
//! through a lattice ramp, non-adiabatic energies and irreversible work.
//!
//! States are propagated in the fixed sine basis. Because `H(t) = D + V(t) P`
//! keeps the chain structure of [`ChainLayout`] at every instant, each
//! eigenstate stays on its chain and a Crank-Nicolson step reduces to a
//! complex tridiagonal solve.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::config::SystemConfig;
use crate::cycle::{self, CycleEnergies, CycleMode, CycleParams, CycleRecord, RatioRecord};
use crate::error::{Error, Result};
use crate::spectral::{self, Chain, ChainEigenpair, ChainLayout};
use crate::sta::{self, StaOptions};
use crate::thermo::Ensemble;

/// Ramp times are quoted in units of `2 pi hbar / E_R`.
pub fn paper_time_to_internal(t: f64) -> f64 {
    t * TAU
}

pub fn internal_time_to_paper(t: f64) -> f64 {
    t / TAU
}

/// Largest tolerated `| |psi|^2 - 1 |` after a stroke.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-8;

/// States with a smaller occupation are carried adiabatically instead of
/// being propagated.
pub const OCCUPATION_CUTOFF: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RampKind {
    /// `V_i + (V_f - V_i) lambda(t)` with the quintic smoothstep.
    Reference,
    StaAveraged,
    StaTargeted,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// `lambda(s) = s^3 [1 + 3(1-s) + 6(1-s)^2] = 10 s^3 - 15 s^4 + 6 s^5`.
pub fn lambda(s: f64) -> f64 {
    let u = 1.0 - s;
    s * s * s * (1.0 + 3.0 * u + 6.0 * u * u)
}

pub fn lambda_ramp(t: f64, t_f: f64, v_i: f64, v_f: f64) -> Result<f64> {
    if !(t >= 0.0 && t <= t_f) {
        return Err(Error::TimeOutOfRange { t, duration: t_f });
    }
    Ok(v_i + (v_f - v_i) * lambda(t / t_f))
}

#[derive(Debug, Clone, PartialEq)]
enum Schedule {
    Lambda,
    Constant,
    Samples { times: Vec<f64>, depths: Vec<f64> },
}

/// Lattice-depth schedule over `[0, duration]` (internal time units).
///
/// `start_depth` and `end_depth` are the nominal endpoints: the initial states
/// are eigenstates at `start_depth` and final energies are measured with the
/// Hamiltonian at `end_depth`, whatever the schedule does in between.
#[derive(Debug, Clone, PartialEq)]
pub struct Ramp {
    kind: RampKind,
    duration: f64,
    start_depth: f64,
    end_depth: f64,
    schedule: Schedule,
}

fn check_duration(duration: f64) -> Result<()> {
    if duration.is_finite() && duration > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidRamp("duration must be positive"))
    }
}

fn check_endpoint(v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeDepth(v))
    }
}

impl Ramp {
    pub fn reference(start_depth: f64, end_depth: f64, duration: f64) -> Result<Self> {
        check_duration(duration)?;
        check_endpoint(start_depth)?;
        check_endpoint(end_depth)?;
        Ok(Self {
            kind: RampKind::Reference,
            duration,
            start_depth,
            end_depth,
            schedule: Schedule::Lambda,
        })
    }

    pub fn constant(depth: f64, duration: f64) -> Result<Self> {
        check_duration(duration)?;
        check_endpoint(depth)?;
        Ok(Self {
            kind: RampKind::Custom,
            duration,
            start_depth: depth,
            end_depth: depth,
            schedule: Schedule::Constant,
        })
    }

    /// Piecewise-linear schedule through `(times, depths)`. Times must start
    /// at zero and increase strictly; the last one sets the duration.
    pub fn from_samples(
        kind: RampKind,
        start_depth: f64,
        end_depth: f64,
        times: Vec<f64>,
        depths: Vec<f64>,
    ) -> Result<Self> {
        check_endpoint(start_depth)?;
        check_endpoint(end_depth)?;
        if times.len() < 2 || times.len() != depths.len() {
            return Err(Error::InvalidRamp("need at least two (t, V) samples of equal length"));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidRamp("samples must start at t = 0"));
        }
        if !times.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidRamp("sample times must increase strictly"));
        }
        if !depths.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidRamp("sample depths must be finite"));
        }
        let duration = *times.last().unwrap();
        check_duration(duration)?;
        Ok(Self {
            kind,
            duration,
            start_depth,
            end_depth,
            schedule: Schedule::Samples { times, depths },
        })
    }

    /// Samples with the nominal endpoints taken from the first and last depth.
    pub fn from_samples_inferred(times: Vec<f64>, depths: Vec<f64>) -> Result<Self> {
        let (a, b) = match (depths.first(), depths.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Error::InvalidRamp("empty samples")),
        };
        Self::from_samples(RampKind::Custom, a, b, times, depths)
    }

    pub fn with_kind(mut self, kind: RampKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn kind(&self) -> RampKind {
        self.kind
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn start_depth(&self) -> f64 {
        self.start_depth
    }

    pub fn end_depth(&self) -> f64 {
        self.end_depth
    }

    pub fn direction(&self) -> Direction {
        if self.end_depth >= self.start_depth {
            Direction::Up
        } else {
            Direction::Down
        }
    }

    pub fn is_flat(&self) -> bool {
        match &self.schedule {
            Schedule::Constant => true,
            Schedule::Lambda => self.start_depth == self.end_depth,
            Schedule::Samples { depths, .. } => {
                depths.iter().all(|&v| v == self.start_depth) && self.end_depth == self.start_depth
            }
        }
    }

    pub fn depth_at(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= self.duration) {
            return Err(Error::TimeOutOfRange {
                t,
                duration: self.duration,
            });
        }
        Ok(self.depth_unchecked(t))
    }

    fn depth_unchecked(&self, t: f64) -> f64 {
        match &self.schedule {
            Schedule::Constant => self.start_depth,
            Schedule::Lambda => {
                self.start_depth + (self.end_depth - self.start_depth) * lambda(t / self.duration)
            }
            Schedule::Samples { times, depths } => {
                let j = times.partition_point(|&x| x <= t);
                if j == 0 {
                    return depths[0];
                }
                if j >= times.len() {
                    return depths[depths.len() - 1];
                }
                let (t0, t1) = (times[j - 1], times[j]);
                let w = (t - t0) / (t1 - t0);
                depths[j - 1] + w * (depths[j] - depths[j - 1])
            }
        }
    }

    /// `(t, V)` on `points` evenly spaced times, or the stored samples.
    pub fn sampled(&self, points: usize) -> (Vec<f64>, Vec<f64>) {
        if let Schedule::Samples { times, depths } = &self.schedule {
            return (times.clone(), depths.clone());
        }
        let times = crate::grid::linspace(0.0, self.duration, points.max(2));
        let depths = times.iter().map(|&t| self.depth_unchecked(t)).collect();
        (times, depths)
    }
}

/// Time-step policy for a stroke.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtControl {
    /// Single run with this step (rounded down so it divides the duration).
    Fixed { dt: f64 },
    /// Halve the step until the final energies change by less than `rel_tol`.
    Converged {
        initial_dt: f64,
        rel_tol: f64,
        max_halvings: u32,
    },
}

impl Default for DtControl {
    fn default() -> Self {
        DtControl::Converged {
            initial_dt: 0.02,
            rel_tol: 1e-6,
            max_halvings: 10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolvedState {
    /// Rank of the initial eigenstate.
    pub index: usize,
    pub chain: usize,
    /// Coefficients in chain order.
    pub coefficients: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct PropagationResult {
    pub indices: Vec<usize>,
    /// `<psi_n(t_f)| H(t_f) |psi_n(t_f)>`.
    pub e_na: Vec<f64>,
    /// Eigenvalue of the same rank at the final depth.
    pub e_ad: Vec<f64>,
    pub norm_drift: Vec<f64>,
    pub dt: f64,
    pub steps: usize,
    pub states: Vec<EvolvedState>,
    layout: ChainLayout,
}

impl PropagationResult {
    pub fn delta_e(&self) -> Vec<f64> {
        self.e_na.iter().zip(&self.e_ad).map(|(a, b)| a - b).collect()
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.norm_drift.iter().copied().fold(0.0, f64::max)
    }

    /// Evolved state `i` (position in `indices`) in the dense sine basis.
    pub fn dense_state(&self, i: usize) -> Vec<Complex64> {
        let st = &self.states[i];
        let mut out = vec![Complex64::new(0.0, 0.0); self.layout.basis_size()];
        for (&n, &c) in self.layout.chains()[st.chain].modes().iter().zip(&st.coefficients) {
            out[n - 1] = c;
        }
        out
    }

    /// `max |<psi_i|psi_j> - delta_ij|` over the evolved states.
    pub fn gram_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.states.iter().enumerate() {
            for (j, b) in self.states.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                let ov = if a.chain == b.chain {
                    a.coefficients
                        .iter()
                        .zip(&b.coefficients)
                        .map(|(x, y)| x.conj() * y)
                        .sum::<Complex64>()
                } else {
                    Complex64::new(0.0, 0.0)
                };
                worst = worst.max(crate::math::sqrt((ov - target).norm_sqr()));
            }
        }
        worst
    }
}

/// Per-chain Crank-Nicolson stepper with the potential taken at mid-step.
struct ChainStepper<'a> {
    chain: &'a Chain,
    diag: Vec<f64>,
    off: Vec<f64>,
    c_prime: Vec<Complex64>,
    inv_denom: Vec<Complex64>,
    rhs: Vec<Complex64>,
}

impl<'a> ChainStepper<'a> {
    fn new(chain: &'a Chain) -> Self {
        let s = chain.len();
        Self {
            chain,
            diag: vec![0.0; s],
            off: vec![0.0; s.saturating_sub(1)],
            c_prime: vec![Complex64::new(0.0, 0.0); s],
            inv_denom: vec![Complex64::new(0.0, 0.0); s],
            rhs: vec![Complex64::new(0.0, 0.0); s],
        }
    }

    /// Set up `(1 + i h H)` for `H = D + V P` and `h = dt/2`.
    fn factor(&mut self, depth: f64, h: f64) {
        let kin = self.chain.kinetic();
        let pd = self.chain.potential_diagonal();
        let po = self.chain.potential_off_diagonal();
        for j in 0..self.diag.len() {
            self.diag[j] = kin[j] + depth * pd[j];
        }
        for j in 0..self.off.len() {
            self.off[j] = depth * po[j];
        }
        let s = self.diag.len();
        let mut prev_c = Complex64::new(0.0, 0.0);
        for j in 0..s {
            let b = Complex64::new(1.0, h * self.diag[j]);
            let a = if j > 0 {
                Complex64::new(0.0, h * self.off[j - 1])
            } else {
                Complex64::new(0.0, 0.0)
            };
            let denom = b - a * prev_c;
            let inv = denom.inv();
            self.inv_denom[j] = inv;
            let c = if j + 1 < s {
                Complex64::new(0.0, h * self.off[j])
            } else {
                Complex64::new(0.0, 0.0)
            };
            prev_c = c * inv;
            self.c_prime[j] = prev_c;
        }
    }

    fn step(&mut self, psi: &mut [Complex64], h: f64) {
        let s = psi.len();
        for j in 0..s {
            let mut hpsi = psi[j] * self.diag[j];
            if j > 0 {
                hpsi += psi[j - 1] * self.off[j - 1];
            }
            if j + 1 < s {
                hpsi += psi[j + 1] * self.off[j];
            }
            self.rhs[j] = psi[j] - Complex64::new(0.0, h) * hpsi;
        }
        // forward sweep
        let mut prev = Complex64::new(0.0, 0.0);
        for j in 0..s {
            let a = if j > 0 {
                Complex64::new(0.0, h * self.off[j - 1])
            } else {
                Complex64::new(0.0, 0.0)
            };
            prev = (self.rhs[j] - a * prev) * self.inv_denom[j];
            psi[j] = prev;
        }
        for j in (0..s.saturating_sub(1)).rev() {
            let next = psi[j + 1];
            psi[j] -= self.c_prime[j] * next;
        }
    }
}

fn chain_energy(chain: &Chain, depth: f64, psi: &[Complex64]) -> f64 {
    let d = chain.diagonal(depth);
    let o = chain.off_diagonal(depth);
    let mut e = 0.0;
    for j in 0..psi.len() {
        e += d[j] * psi[j].norm_sqr();
        if j + 1 < psi.len() {
            e += 2.0 * o[j] * (psi[j].conj() * psi[j + 1]).re;
        }
    }
    e
}

struct FixedRun {
    states: Vec<EvolvedState>,
    e_na: Vec<f64>,
    norm_drift: Vec<f64>,
    dt: f64,
    steps: usize,
}

fn run_fixed(
    layout: &ChainLayout,
    ramp: &Ramp,
    initial: &[(usize, &ChainEigenpair)],
    dt: f64,
) -> FixedRun {
    let steps = (crate::math::ceil(ramp.duration / dt) as usize).max(1);
    let dt = ramp.duration / steps as f64;
    let h = 0.5 * dt;
    let flat = ramp.is_flat();
    let midpoints: Vec<f64> = (0..steps)
        .map(|k| ramp.depth_unchecked((k as f64 + 0.5) * dt))
        .collect();

    let mut states: Vec<EvolvedState> = initial
        .iter()
        .map(|(idx, p)| EvolvedState {
            index: *idx,
            chain: p.chain,
            coefficients: p.vector.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        })
        .collect();

    let mut by_chain: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, st) in states.iter().enumerate() {
        by_chain.entry(st.chain).or_default().push(i);
    }

    for (&c, members) in &by_chain {
        let chain = &layout.chains()[c];
        let mut stepper = ChainStepper::new(chain);
        for (k, &depth) in midpoints.iter().enumerate() {
            if k == 0 || !flat {
                stepper.factor(depth, h);
            }
            for &i in members {
                stepper.step(&mut states[i].coefficients, h);
            }
        }
    }

    let end = ramp.end_depth;
    let mut e_na = Vec::with_capacity(states.len());
    let mut norm_drift = Vec::with_capacity(states.len());
    for st in &states {
        let chain = &layout.chains()[st.chain];
        e_na.push(chain_energy(chain, end, &st.coefficients));
        let norm: f64 = st.coefficients.iter().map(|c| c.norm_sqr()).sum();
        norm_drift.push((norm - 1.0).abs());
    }
    FixedRun {
        states,
        e_na,
        norm_drift,
        dt,
        steps,
    }
}

fn max_relative_change(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// Evolve the eigenstates of rank `indices` at the ramp's start depth.
pub fn evolve_states(
    config: &SystemConfig,
    ramp: &Ramp,
    indices: &[usize],
    dt: DtControl,
) -> Result<PropagationResult> {
    let layout = ChainLayout::new(config);
    let start = layout.eigenpairs(ramp.start_depth, true)?;
    let end = spectral::energies_with(&layout, ramp.end_depth)?;
    evolve_with(&layout, &start, &end, ramp, indices, dt)
}

fn evolve_with(
    layout: &ChainLayout,
    start: &[ChainEigenpair],
    end: &[f64],
    ramp: &Ramp,
    indices: &[usize],
    dt: DtControl,
) -> Result<PropagationResult> {
    if let Some(&bad) = indices.iter().find(|&&i| i >= start.len()) {
        return Err(Error::InsufficientStates {
            requested: bad + 1,
            available: start.len(),
        });
    }
    let initial: Vec<(usize, &ChainEigenpair)> = indices.iter().map(|&i| (i, &start[i])).collect();

    let run = match dt {
        DtControl::Fixed { dt } => {
            if !(dt > 0.0) {
                return Err(Error::InvalidRamp("time step must be positive"));
            }
            run_fixed(layout, ramp, &initial, dt)
        }
        DtControl::Converged {
            initial_dt,
            rel_tol,
            max_halvings,
        } => {
            if !(initial_dt > 0.0) {
                return Err(Error::InvalidRamp("time step must be positive"));
            }
            let mut prev = run_fixed(layout, ramp, &initial, initial_dt);
            let mut achieved = f64::INFINITY;
            let mut done = false;
            for _ in 0..max_halvings {
                let next = run_fixed(layout, ramp, &initial, 0.5 * prev.dt);
                achieved = max_relative_change(&prev.e_na, &next.e_na);
                prev = next;
                if achieved < rel_tol {
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(Error::StepRefinement {
                    tol: rel_tol,
                    achieved,
                });
            }
            prev
        }
    };

    let drift = run.norm_drift.iter().copied().fold(0.0, f64::max);
    if drift > NORM_DRIFT_TOLERANCE {
        return Err(Error::NormDrift(drift));
    }
    Ok(PropagationResult {
        indices: indices.to_vec(),
        e_ad: indices.iter().map(|&i| end[i]).collect(),
        e_na: run.e_na,
        norm_drift: run.norm_drift,
        dt: run.dt,
        steps: run.steps,
        states: run.states,
        layout: layout.clone(),
    })
}

/// `sum_n f_n (E_NA[n] - E_AD[n])` over the evolved states. `occupations`
/// is indexed by rank.
pub fn irreversible_work(result: &PropagationResult, occupations: &[f64]) -> f64 {
    result
        .indices
        .iter()
        .zip(result.e_na.iter().zip(&result.e_ad))
        .map(|(&i, (na, ad))| occupations[i] * (na - ad))
        .sum()
}

/// Per-state excess energy after a stroke.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcessProfile {
    /// `(rank, E_NA - E_AD)`.
    pub rows: Vec<(usize, f64)>,
    /// Rank with the largest excess energy.
    pub argmax: Option<usize>,
}

pub fn excess_energy_profile(result: &PropagationResult) -> ExcessProfile {
    let rows: Vec<(usize, f64)> = result.indices.iter().copied().zip(result.delta_e()).collect();
    let argmax = rows
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .filter(|r| r.1 > 0.0)
        .map(|r| r.0);
    ExcessProfile { rows, argmax }
}

/// Outcome of one non-adiabatic work stroke.
#[derive(Debug, Clone)]
pub struct StrokeOutcome {
    pub result: PropagationResult,
    pub occupations: Vec<f64>,
    pub irreversible_work: f64,
    /// Ensemble energy at the end of the stroke.
    pub final_energy: f64,
}

#[derive(Debug, Clone)]
pub struct FiniteTimeCycle {
    pub record: CycleRecord,
    pub compression: StrokeOutcome,
    pub expansion: StrokeOutcome,
}

fn stroke(
    layout: &ChainLayout,
    start: &[ChainEigenpair],
    end: &[f64],
    ramp: &Ramp,
    ensemble: &Ensemble,
    dt: DtControl,
) -> Result<StrokeOutcome> {
    let f = ensemble.occupations();
    let indices: Vec<usize> = (0..f.len()).filter(|&i| f[i] > OCCUPATION_CUTOFF).collect();
    let result = evolve_with(layout, start, end, ramp, &indices, dt)?;
    let mut final_energy = 0.0;
    let mut evolved = vec![false; f.len()];
    for (&i, &e) in result.indices.iter().zip(&result.e_na) {
        final_energy += f[i] * e;
        evolved[i] = true;
    }
    for i in (0..f.len()).filter(|&i| !evolved[i]) {
        final_energy += f[i] * end[i];
    }
    Ok(StrokeOutcome {
        irreversible_work: irreversible_work(&result, f),
        occupations: f.to_vec(),
        final_energy,
        result,
    })
}

/// Otto cycle with finite-time work strokes driven by `up` (`V_i -> V_f`)
/// and `down` (`V_f -> V_i`). Thermalization is instantaneous, so the cycle
/// time is the sum of the two ramp durations.
pub fn finite_time_cycle_with(
    config: &SystemConfig,
    params: &CycleParams,
    up: &Ramp,
    down: &Ramp,
    dt: DtControl,
) -> Result<FiniteTimeCycle> {
    params.validate()?;
    if up.start_depth != params.v_i
        || up.end_depth != params.v_f
        || down.start_depth != params.v_f
        || down.end_depth != params.v_i
    {
        return Err(Error::InvalidRamp("ramp endpoints do not match the cycle depths"));
    }
    let layout = ChainLayout::new(config);
    let at_initial = layout.eigenpairs(params.v_i, true)?;
    let at_final = layout.eigenpairs(params.v_f, true)?;
    let e_i: Vec<f64> = at_initial.iter().map(|p| p.energy).collect();
    let e_f: Vec<f64> = at_final.iter().map(|p| p.energy).collect();

    let cold = Ensemble::thermal(&e_i, config.particles(), params.t_cold)?;
    let hot = Ensemble::thermal(&e_f, config.particles(), params.t_hot)?;

    let compression = stroke(&layout, &at_initial, &e_f, up, &cold, dt)?;
    let expansion = stroke(&layout, &at_final, &e_i, down, &hot, dt)?;

    let record = CycleRecord {
        particles: config.particles(),
        wells: config.wells(),
        params: *params,
        energies: CycleEnergies {
            cold_initial: cold.energy(&e_i),
            cold_final: compression.final_energy,
            hot_final: hot.energy(&e_f),
            hot_initial: expansion.final_energy,
        },
        duration: Some(up.duration + down.duration),
        mode: CycleMode::FiniteTime(up.kind),
    };
    Ok(FiniteTimeCycle {
        record,
        compression,
        expansion,
    })
}

/// Ramps for both strokes of the given kind, each lasting `duration`.
pub fn build_ramps(
    config: &SystemConfig,
    params: &CycleParams,
    duration: f64,
    kind: RampKind,
    options: &StaOptions,
) -> Result<(Ramp, Ramp)> {
    match kind {
        RampKind::Reference => Ok((
            Ramp::reference(params.v_i, params.v_f, duration)?,
            Ramp::reference(params.v_f, params.v_i, duration)?,
        )),
        RampKind::StaAveraged => Ok((
            sta::sta_ramp_averaged(config, params.v_i, params.v_f, duration, options)?.ramp,
            sta::sta_ramp_averaged(config, params.v_f, params.v_i, duration, options)?.ramp,
        )),
        RampKind::StaTargeted => Ok((
            sta::sta_ramp_targeted(config, params.v_i, params.v_f, duration, options)?.ramp,
            sta::sta_ramp_targeted(config, params.v_f, params.v_i, duration, options)?.ramp,
        )),
        RampKind::Custom => Err(Error::InvalidRamp("custom ramps must be supplied explicitly")),
    }
}

/// Finite-time cycle where each stroke lasts `duration` (internal units).
pub fn finite_time_cycle(
    config: &SystemConfig,
    params: &CycleParams,
    duration: f64,
    kind: RampKind,
    dt: DtControl,
) -> Result<FiniteTimeCycle> {
    let (up, down) = build_ramps(config, params, duration, kind, &StaOptions::default())?;
    finite_time_cycle_with(config, params, &up, &down, dt)
}

/// Finite-time many-body cycle against the single-well cycle driven by the
/// reference ramp over the same stroke time.
pub fn finite_time_comparison(
    config: &SystemConfig,
    params: &CycleParams,
    duration: f64,
    kind: RampKind,
    dt: DtControl,
) -> Result<(FiniteTimeCycle, FiniteTimeCycle, Result<RatioRecord>)> {
    let many = finite_time_cycle(config, params, duration, kind, dt)?;
    let single = finite_time_cycle(
        &SystemConfig::single_well_like(config),
        params,
        duration,
        RampKind::Reference,
        dt,
    )?;
    let ratios = cycle::performance_ratios(&many.record, &single.record);
    Ok((many, single, ratios))
}
