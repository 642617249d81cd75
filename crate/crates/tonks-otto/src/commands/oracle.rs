use rayon::prelude::*;
use serde_json::{json, Value};
use tonks_otto_core::analytic::{self, DeepLatticeParams};
use tonks_otto_core::cycle::{self, CycleParams};
use tonks_otto_core::spectral;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Output};

fn row(n: usize, name: &str, numeric: Option<f64>, closed: f64, in_regime: bool) -> Vec<Cell> {
    let dev = numeric.map(|x| (x - closed).abs() / closed.abs());
    vec![n.into(), name.into(), numeric.into(), closed.into(), dev.into(), in_regime.into()]
}

fn compare(cfg: &RunConfig, n: usize, params: &CycleParams) -> CliResult<Vec<Vec<Cell>>> {
    let sys = cfg.system_with(n, n)?;
    let (many, single, ratio) = cycle::adiabatic_comparison(&sys, params)?;
    let p = DeepLatticeParams::new(params.v_f, params.t_hot, n);
    let regime = p.in_regime();
    let mb = analytic::mb_energies(&p);
    let sq = analytic::sqhe_energies(params.v_f, params.t_hot);
    let est = analytic::ratio_approximation(&p);
    let ratio = ratio.ok();
    let e = &many.energies;
    let s = &single.energies;
    Ok(vec![
        row(n, "mb_ground_box", Some(e.cold_initial), mb.ground_box, regime),
        row(n, "mb_ground_lattice", Some(e.cold_final), mb.ground_lattice, regime),
        row(n, "mb_thermal_lattice", Some(e.hot_final), mb.thermal_lattice, regime),
        row(n, "mb_thermal_box", Some(e.hot_initial), mb.thermal_box, regime),
        row(n, "sq_ground_lattice", Some(s.cold_final), sq.ground_lattice, regime),
        row(n, "sq_thermal_lattice", Some(s.hot_final), sq.thermal_lattice, regime),
        row(n, "sq_thermal_box", Some(s.hot_initial), sq.thermal_box, regime),
        row(n, "eta_star", ratio.as_ref().and_then(|r| r.eta_star), est.value, regime && est.is_valid()),
        row(n, "P_star", ratio.as_ref().and_then(|r| r.power_star), est.value, regime && est.is_valid()),
    ])
}

/// Numerical pipeline next to the deep-lattice closed forms.
pub fn run(cfg: &RunConfig, out: &mut Output) -> CliResult<Value> {
    let params = cfg.cycle_params()?;
    if params.v_i != 0.0 || params.t_cold != 0.0 {
        return Err(CliError::config("closed forms need cycle.v_i = 0 and cycle.t_cold = 0"));
    }
    let tables: Vec<CliResult<Vec<Vec<Cell>>>> =
        cfg.oracle.particles.par_iter().map(|&n| compare(cfg, n, &params)).collect();
    let mut rows = Vec::new();
    for t in tables {
        rows.extend(t?);
    }
    out.table(
        "oracle",
        &["N", "quantity", "numeric", "closed_form", "rel_dev", "in_regime"],
        &rows,
        json!({
            "filling": "N = M",
            "v_f": params.v_f,
            "t_hot": params.t_hot,
            "note": "the thermal closed forms weight whole bands with Boltzmann factors; the pipeline uses Fermi-Dirac occupations at fixed N",
        }),
    )?;

    let system = cfg.system()?;
    let gaps: Vec<CliResult<Vec<Cell>>> = cfg
        .oracle
        .gap_depths
        .par_iter()
        .map(|&v| {
            let e = spectral::energies(&system, v)?;
            let gap = spectral::band_gap(&e, system.wells())?;
            Ok(vec![
                v.into(),
                gap.into(),
                (2.0 * v.sqrt() - 1.0).into(),
                (0.5 * v).into(),
            ])
        })
        .collect();
    let gaps = gaps.into_iter().collect::<CliResult<Vec<_>>>()?;
    out.table(
        "gap_oracle",
        &["V", "band_gap", "deep_asymptote", "shallow_asymptote"],
        &gaps,
        json!({ "wells": system.wells(), "deep": "2 sqrt(V) - 1", "shallow": "V / 2" }),
    )?;

    let double = match analytic::double_filling_ratio(params.v_f) {
        Ok(limit) => {
            let m = system.wells();
            let (_, _, r) = cycle::adiabatic_comparison(&cfg.system_with(m, 2 * m)?, &params)?;
            json!({
                "wells": m,
                "closed_form_large_theta": limit,
                "numeric_at_t_hot": r.ok().and_then(|r| r.eta_star),
            })
        }
        Err(e) => json!({ "skipped": e.to_string() }),
    };
    Ok(json!({ "rows": rows.len(), "double_filling": double }))
}
