use serde_json::json;
use tonks_otto_core::spectral::{self, ChainLayout};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{tag, Cell, Output};

/// Single-particle spectra per depth, band gaps and the basis-doubling check.
pub fn run(cfg: &RunConfig, out: &mut Output) -> CliResult<serde_json::Value> {
    let system = cfg.system()?;
    let layout = ChainLayout::new(&system);
    let m = system.wells();
    let mut gaps = Vec::new();
    for &depth in &cfg.spectrum.depths {
        let pairs = layout.eigenpairs(depth, cfg.spectrum.vectors)?;
        let keep = match cfg.spectrum.states {
            0 => pairs.len(),
            n => n.min(pairs.len()),
        };
        let rows: Vec<Vec<Cell>> = pairs[..keep]
            .iter()
            .enumerate()
            .map(|(i, p)| vec![i.into(), p.energy.into()])
            .collect();
        let energies: Vec<f64> = pairs.iter().map(|p| p.energy).collect();
        let gap = spectral::band_gap(&energies, m).ok();
        let report = if cfg.spectrum.convergence {
            Some(spectral::convergence_report(&system, depth)?)
        } else {
            None
        };
        let meta = json!({
            "depth": depth,
            "basis_size": system.basis_size(),
            "band_gap": gap,
            "convergence": report.map(|r| json!({
                "doubled_basis_size": r.doubled_basis_size,
                "states_compared": r.states_compared,
                "max_relative_change": r.max_relative_change,
            })),
        });
        let name = format!("spectrum_V{}", tag(depth));
        out.table(&name, &["index", "energy"], &rows, meta)?;
        if cfg.spectrum.vectors {
            let vectors: Vec<Vec<f64>> = pairs[..keep]
                .iter()
                .map(|p| layout.to_dense(p.chain, &p.vector))
                .collect();
            let meta = json!({
                "depth": depth,
                "layout": "row i holds the coefficients of level i on sine modes 1..K",
            });
            out.matrix(&format!("{name}_vectors"), &vectors, meta)?;
        }
        gaps.push(vec![
            Cell::from(depth),
            gap.into(),
            report.map(|r| r.max_relative_change).into(),
        ]);
    }
    out.table(
        "gaps",
        &["V", "band_gap", "basis_doubling_change"],
        &gaps,
        json!({ "band_gap": "E[M] - E[M-1], 0-based" }),
    )?;
    Ok(json!({ "depths": cfg.spectrum.depths.len() }))
}
