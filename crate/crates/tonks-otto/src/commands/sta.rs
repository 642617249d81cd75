use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use tonks_otto_core::cycle::{self, CycleParams};
use tonks_otto_core::propagate::{
    finite_time_cycle, finite_time_cycle_with, internal_time_to_paper, paper_time_to_internal,
    FiniteTimeCycle, Ramp, RampKind,
};
use tonks_otto_core::sta::{self, StaOptions, StaRamp};
use tonks_otto_core::SystemConfig;

use super::dynamics::{finite_time_header, finite_time_row};
use crate::config::{kind_name, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{propagation_rows, tag, Cell, Output, PROPAGATION_HEADER};

struct Built {
    up: Ramp,
    down: Ramp,
    info: Value,
}

fn sta_info(r: &StaRamp) -> Value {
    json!({ "degenerate": r.degenerate, "singular_points": r.singular.len() })
}

fn build(
    system: &SystemConfig,
    params: &CycleParams,
    duration: f64,
    kind: RampKind,
    opts: &StaOptions,
) -> CliResult<Built> {
    let (a, b) = (params.v_i, params.v_f);
    let pair = |f: &dyn Fn(f64, f64) -> tonks_otto_core::Result<StaRamp>| -> CliResult<Built> {
        let up = f(a, b)?;
        let down = f(b, a)?;
        Ok(Built {
            info: json!({ "up": sta_info(&up), "down": sta_info(&down) }),
            up: up.ramp,
            down: down.ramp,
        })
    };
    match kind {
        RampKind::Reference => Ok(Built {
            up: Ramp::reference(a, b, duration)?,
            down: Ramp::reference(b, a, duration)?,
            info: Value::Null,
        }),
        RampKind::StaAveraged => pair(&|s, e| sta::sta_ramp_averaged(system, s, e, duration, opts)),
        RampKind::StaTargeted => pair(&|s, e| sta::sta_ramp_targeted(system, s, e, duration, opts)),
        RampKind::Custom => Err(CliError::config("custom ramps come from sta.ramp_up / sta.ramp_down")),
    }
}

/// Reads a two-column `(t, V)` CSV with a header; times in `hbar / E_R`.
/// The first and last depths must match `start` and `end` to 1e-8.
pub fn read_ramp(path: &Path, start: f64, end: f64) -> CliResult<Ramp> {
    let csv_err = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let (mut times, mut depths) = (Vec::new(), Vec::new());
    for rec in reader.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != 2 {
            return Err(CliError::config(format!("{}: expected two columns (t, V)", path.display())));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("{}: bad number '{s}'", path.display())))
        };
        times.push(parse(&rec[0])?);
        depths.push(parse(&rec[1])?);
    }
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-8 * b.abs().max(1.0);
    match (depths.first(), depths.last()) {
        (Some(&a), Some(&b)) if close(a, start) && close(b, end) => {}
        _ => {
            return Err(CliError::config(format!(
                "{}: ramp must run from V = {start} to V = {end}",
                path.display()
            )))
        }
    }
    Ok(Ramp::from_samples(RampKind::Custom, start, end, times, depths)?)
}

fn ramp_rows(r: &Ramp, points: usize) -> Vec<Vec<Cell>> {
    let (t, v) = r.sampled(points);
    t.into_iter().zip(v).map(|(t, v)| vec![t.into(), v.into()]).collect()
}

struct Run {
    tf: f64,
    kind: RampKind,
    built: Built,
    cycle: FiniteTimeCycle,
}

/// STA ramp construction and STA-driven cycles, with the reference ramp and
/// optional imported ramps for comparison.
pub fn run(cfg: &RunConfig, out: &mut Output) -> CliResult<Value> {
    let system = cfg.system()?;
    let params = cfg.cycle_params()?;
    let dt = cfg.dt_control()?;
    let opts = cfg.sta_options();
    let kinds = cfg.sta_kinds()?;
    let single_cfg = SystemConfig::single_well_like(&system);
    let tfs = &cfg.sta.tf;

    let singles: Vec<CliResult<FiniteTimeCycle>> = tfs
        .par_iter()
        .map(|&tf| Ok(finite_time_cycle(&single_cfg, &params, paper_time_to_internal(tf), RampKind::Reference, dt)?))
        .collect();
    let singles = singles.into_iter().collect::<CliResult<Vec<_>>>()?;

    let jobs: Vec<(usize, RampKind)> = (0..tfs.len())
        .flat_map(|k| kinds.iter().map(move |&kind| (k, kind)))
        .collect();
    let runs: Vec<CliResult<Run>> = jobs
        .par_iter()
        .map(|&(k, kind)| {
            let built = build(&system, &params, paper_time_to_internal(tfs[k]), kind, &opts)?;
            let cycle = finite_time_cycle_with(&system, &params, &built.up, &built.down, dt)?;
            Ok(Run {
                tf: tfs[k],
                kind,
                built,
                cycle,
            })
        })
        .collect();
    let runs = runs.into_iter().collect::<CliResult<Vec<_>>>()?;

    let adiabatic = cycle::adiabatic_comparison(&system, &params)?;
    let eta_ad = adiabatic.0.efficiency();
    let eta_star_ad = adiabatic.2.ok().and_then(|r| r.eta_star);

    let mut rows = Vec::new();
    let mut ramps = Vec::new();
    for (run, &(k, _)) in runs.iter().zip(&jobs) {
        let name = kind_name(run.kind);
        rows.push(finite_time_row(&run.cycle, &singles[k], eta_ad, run.tf, name));
        let suffix = format!("{name}_tf{}", tag(run.tf));
        for (stroke, ramp) in [("up", &run.built.up), ("down", &run.built.down)] {
            out.table(
                &format!("ramp_{suffix}_{stroke}"),
                &["t", "V"],
                &ramp_rows(ramp, cfg.sta.ramp_points),
                json!({ "kind": name, "t_f": run.tf, "stroke": stroke, "t_units": "hbar / E_R" }),
            )?;
        }
        out.table(
            &format!("excess_{suffix}"),
            &PROPAGATION_HEADER,
            &propagation_rows(&run.cycle.compression.result),
            json!({ "kind": name, "t_f": run.tf, "stroke": "up" }),
        )?;
        ramps.push(json!({ "kind": name, "t_f": run.tf, "sta": run.built.info }));
    }

    if let (Some(up), Some(down)) = (&cfg.sta.ramp_up, &cfg.sta.ramp_down) {
        let up = read_ramp(up, params.v_i, params.v_f)?;
        let down = read_ramp(down, params.v_f, params.v_i)?;
        if up.duration() != down.duration() {
            return Err(CliError::config("imported ramps must have equal durations"));
        }
        let tf = internal_time_to_paper(up.duration());
        let c = finite_time_cycle_with(&system, &params, &up, &down, dt)?;
        let single = finite_time_cycle(&single_cfg, &params, up.duration(), RampKind::Reference, dt)?;
        rows.push(finite_time_row(&c, &single, eta_ad, tf, kind_name(RampKind::Custom)));
        out.table(
            "excess_custom",
            &PROPAGATION_HEADER,
            &propagation_rows(&c.compression.result),
            json!({ "kind": "custom", "t_f": tf, "stroke": "up" }),
        )?;
    }

    out.table(
        "sta",
        &finite_time_header(),
        &rows,
        json!({
            "strokes": "STA ramps drive both strokes; the down ramp swaps the endpoint depths",
            "targeted_rank": sta::targeted_rank(system.wells()),
            "averaged_ranks": format!("0..{}", system.wells()),
            "kinetic_coefficient": opts.kinetic,
            "grid_points": opts.grid_points,
            "eta_star_reference": "single well driven by the reference ramp with the same t_f",
            "eta_star_adiabatic": eta_star_ad,
            "ramps": ramps,
        }),
    )?;
    Ok(json!({ "runs": rows.len(), "eta_star_adiabatic": eta_star_ad }))
}
