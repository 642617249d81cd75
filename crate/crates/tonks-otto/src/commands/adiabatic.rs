use rayon::prelude::*;
use serde_json::json;
use tonks_otto_core::analytic::{ratio_approximation, DeepLatticeParams};
use tonks_otto_core::cycle::{self, performance_ratios, CycleRecord};
use tonks_otto_core::spectral;
use tonks_otto_core::thermo::Ensemble;
use tonks_otto_core::SystemConfig;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{cycle_row, Cell, Output, CYCLE_HEADER};

fn ensemble_rows(energies: &[f64], ens: &Ensemble) -> Vec<Vec<Cell>> {
    energies
        .iter()
        .zip(ens.occupations())
        .enumerate()
        .map(|(i, (&e, &f))| vec![i.into(), e.into(), f.into()])
        .collect()
}

/// Reversible cycles: single run, filling sweep, size scaling, depth grid and
/// efficiency at maximum power.
pub fn run(cfg: &RunConfig, out: &mut Output) -> CliResult<serde_json::Value> {
    let system = cfg.system()?;
    let params = cfg.cycle_params()?;
    let tau = cfg.adiabatic.nominal_cycle_time;
    let power_note = json!({ "nominal_cycle_time": tau, "power": "W_ext / nominal_cycle_time" });

    let many = cycle::adiabatic_cycle(&system, &params, Some(tau))?;
    let single = cycle::adiabatic_cycle(&SystemConfig::single_well_like(&system), &params, Some(tau))?;
    let ratio = performance_ratios(&many, &single).ok();
    out.table(
        "cycle",
        &CYCLE_HEADER,
        &[cycle_row(&many, ratio.as_ref(), tau), cycle_row(&single, None, tau)],
        json!({ "rows": ["many-body", "single well"], "power": power_note }),
    )?;

    let e_i = spectral::energies(&system, params.v_i)?;
    let e_f = spectral::energies(&system, params.v_f)?;
    let cold = Ensemble::thermal(&e_i, system.particles(), params.t_cold)?;
    let hot = Ensemble::thermal(&e_f, system.particles(), params.t_hot)?;
    let head = ["index", "energy", "occupation"];
    out.table(
        "ensemble_cold",
        &head,
        &ensemble_rows(&e_i, &cold),
        json!({ "depth": params.v_i, "temperature": params.t_cold, "chemical_potential": cold.chemical_potential() }),
    )?;
    out.table(
        "ensemble_hot",
        &head,
        &ensemble_rows(&e_f, &hot),
        json!({ "depth": params.v_f, "temperature": params.t_hot, "chemical_potential": hot.chemical_potential() }),
    )?;

    if !cfg.adiabatic.fillings.is_empty() {
        let records = cycle::sweep_filling(&system, &params, &cfg.adiabatic.fillings)?;
        let rows: Vec<Vec<Cell>> = records
            .iter()
            .map(|r| {
                let with_time = CycleRecord {
                    duration: Some(tau),
                    ..r.clone()
                };
                cycle_row(&with_time, performance_ratios(&with_time, &single).ok().as_ref(), tau)
            })
            .collect();
        out.table("filling", &CYCLE_HEADER, &rows, json!({ "power": power_note }))?;
    }

    if !cfg.adiabatic.scaling.is_empty() {
        let rows: Vec<CliResult<Vec<Cell>>> = cfg
            .adiabatic
            .scaling
            .par_iter()
            .map(|&n| {
                let sys = cfg.system_with(n, n)?;
                let many = cycle::adiabatic_cycle(&sys, &params, Some(tau))?;
                let ratio = performance_ratios(&many, &single).ok();
                let estimate = ratio_approximation(&DeepLatticeParams::new(params.v_f, params.t_hot, n));
                let mut row = cycle_row(&many, ratio.as_ref(), tau);
                row.push(estimate.value.into());
                row.push(estimate.in_regime.into());
                Ok(row)
            })
            .collect();
        let rows = rows.into_iter().collect::<CliResult<Vec<_>>>()?;
        let mut head = CYCLE_HEADER.to_vec();
        head.extend(["ratio_closed_form", "closed_form_in_regime"]);
        out.table("scaling", &head, &rows, json!({ "filling": "N = M", "power": power_note }))?;
    }

    if !cfg.adiabatic.v_i_grid.is_empty() && !cfg.adiabatic.v_f_grid.is_empty() {
        let a = &cfg.adiabatic;
        let ratios = cycle::sweep_depths(&system, &a.v_i_grid, &a.v_f_grid, params.t_cold, params.t_hot)?;
        let rows: Vec<Vec<Cell>> = ratios
            .iter()
            .map(|r| {
                vec![
                    r.params.v_i.into(),
                    r.params.v_f.into(),
                    r.eta_star.into(),
                    r.power_star.into(),
                    r.engine.into(),
                ]
            })
            .collect();
        out.table(
            "depth_grid",
            &["V_i", "V_f", "eta_star", "P_star", "engine_flag"],
            &rows,
            json!({ "order": "row-major in V_i", "t_cold": params.t_cold, "t_hot": params.t_hot }),
        )?;
    }

    if cfg.adiabatic.max_power {
        let grid = &cfg.adiabatic.max_power_grid;
        let pt = cycle::efficiency_at_max_power(&system, params.v_i, params.t_cold, params.t_hot, grid)?;
        out.table(
            "max_power",
            &["V_i", "T_C", "T_H", "V_f_opt", "eta", "W_ext", "eta_CA", "grid_points"],
            &[vec![
                params.v_i.into(),
                params.t_cold.into(),
                params.t_hot.into(),
                pt.v_f.into(),
                pt.efficiency.into(),
                pt.work_output.into(),
                pt.curzon_ahlborn.into(),
                pt.grid_points.into(),
            ]],
            json!({
                "v_f_grid": {
                    "min": grid.iter().cloned().fold(f64::INFINITY, f64::min),
                    "max": grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                    "points": grid.len(),
                },
            }),
        )?;
    }

    Ok(json!({
        "eta": many.efficiency(),
        "eta_star": ratio.as_ref().and_then(|r| r.eta_star),
        "engine": many.is_engine(),
    }))
}
