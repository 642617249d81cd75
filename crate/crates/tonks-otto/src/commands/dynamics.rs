use rayon::prelude::*;
use serde_json::json;
use tonks_otto_core::cycle::{self, performance_ratios};
use tonks_otto_core::propagate::{
    finite_time_cycle, paper_time_to_internal, FiniteTimeCycle, RampKind,
};
use tonks_otto_core::SystemConfig;

use crate::config::{kind_name, RunConfig};
use crate::error::CliResult;
use crate::output::{cycle_row, propagation_rows, tag, Cell, Output, CYCLE_HEADER, PROPAGATION_HEADER};

pub const FINITE_TIME_EXTRA: [&str; 6] = ["t_f", "ramp", "W_irr_up", "W_irr_down", "eta_over_eta_AD", "dt"];

pub fn finite_time_header() -> Vec<&'static str> {
    let mut h = CYCLE_HEADER.to_vec();
    h.extend(FINITE_TIME_EXTRA);
    h
}

/// Standard cycle columns followed by the finite-time extras.
pub fn finite_time_row(
    c: &FiniteTimeCycle,
    single: &FiniteTimeCycle,
    eta_ad: Option<f64>,
    tf_paper: f64,
    kind: &str,
) -> Vec<Cell> {
    let ratio = performance_ratios(&c.record, &single.record).ok();
    let mut row = cycle_row(&c.record, ratio.as_ref(), 1.0);
    let eta_ratio = match (c.record.efficiency(), eta_ad) {
        (Some(a), Some(b)) => Some(a / b),
        _ => None,
    };
    row.extend([
        Cell::from(tf_paper),
        kind.into(),
        c.compression.irreversible_work.into(),
        c.expansion.irreversible_work.into(),
        eta_ratio.into(),
        c.compression.result.dt.max(c.expansion.result.dt).into(),
    ]);
    row
}

struct Job {
    particles: usize,
    tf: f64,
}

/// Finite-time cycles driven by the reference ramp over particle numbers and
/// ramp times, with irreversible work on both strokes.
pub fn run(cfg: &RunConfig, out: &mut Output) -> CliResult<serde_json::Value> {
    let params = cfg.cycle_params()?;
    let dt = cfg.dt_control()?;
    let wells = cfg.system.wells;
    let jobs: Vec<Job> = cfg
        .dynamics_particles()
        .into_iter()
        .flat_map(|n| cfg.dynamics.tf.iter().map(move |&tf| Job { particles: n, tf }))
        .collect();

    let single_cfg = SystemConfig::single_well_like(&cfg.system()?);
    let singles: Vec<CliResult<FiniteTimeCycle>> = cfg
        .dynamics
        .tf
        .par_iter()
        .map(|&tf| Ok(finite_time_cycle(&single_cfg, &params, paper_time_to_internal(tf), RampKind::Reference, dt)?))
        .collect();
    let singles = singles.into_iter().collect::<CliResult<Vec<_>>>()?;

    let runs: Vec<CliResult<(FiniteTimeCycle, Option<f64>)>> = jobs
        .par_iter()
        .map(|job| {
            let sys = cfg.system_with(wells, job.particles)?;
            let c = finite_time_cycle(&sys, &params, paper_time_to_internal(job.tf), RampKind::Reference, dt)?;
            let ad = cycle::adiabatic_cycle(&sys, &params, None)?.efficiency();
            Ok((c, ad))
        })
        .collect();
    let runs = runs.into_iter().collect::<CliResult<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(runs.len());
    let mut max_drift = 0.0f64;
    for (job, (c, ad)) in jobs.iter().zip(&runs) {
        let k = cfg.dynamics.tf.iter().position(|&t| t == job.tf).unwrap();
        rows.push(finite_time_row(c, &singles[k], *ad, job.tf, kind_name(RampKind::Reference)));
        max_drift = max_drift
            .max(c.compression.result.max_norm_drift())
            .max(c.expansion.result.max_norm_drift());
        if cfg.dynamics.write_states {
            for (stroke, s) in [("up", &c.compression), ("down", &c.expansion)] {
                let name = format!("propagation_N{}_tf{}_{stroke}", job.particles, tag(job.tf));
                out.table(
                    &name,
                    &PROPAGATION_HEADER,
                    &propagation_rows(&s.result),
                    json!({ "particles": job.particles, "t_f": job.tf, "stroke": stroke, "steps": s.result.steps, "dt": s.result.dt }),
                )?;
            }
        }
    }
    out.table(
        "dynamics",
        &finite_time_header(),
        &rows,
        json!({
            "ramp": kind_name(RampKind::Reference),
            "t_f_units": "2 pi hbar / E_R",
            "power": "W_ext / (2 t_f) with t_f in hbar / E_R",
            "eta_star_reference": "single well driven by the reference ramp with the same t_f",
        }),
    )?;
    Ok(json!({ "runs": rows.len(), "max_norm_drift": max_drift }))
}
