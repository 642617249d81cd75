//! CSV tables with JSON sidecars.
//!
//! Floats are written with 17 significant digits in exponent form; missing
//! values are `NaN`. Nothing time- or host-dependent is written, so equal
//! configs give byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use tonks_otto_core::cycle::{CycleRecord, RatioRecord};
use tonks_otto_core::propagate::PropagationResult;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Float(x) => float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Float(x.unwrap_or(f64::NAN))
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Int(b as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

pub fn float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:.16e}")
    }
}

/// Short, filename-safe rendering of a parameter value.
pub fn tag(x: f64) -> String {
    format!("{x}").replace('-', "m")
}

pub struct Output {
    dir: PathBuf,
    subcommand: &'static str,
    config: Value,
    files: Vec<String>,
}

impl Output {
    pub fn new(dir: &Path, subcommand: &'static str, config: &RunConfig) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            subcommand,
            config: serde_json::to_value(config).expect("config serializes"),
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|source| CliError::Io { path, source })?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn sidecar(&mut self, name: &str, metadata: Value) -> CliResult<()> {
        let doc = json!({
            "program": "tonks-otto",
            "version": VERSION,
            "subcommand": self.subcommand,
            "file": name,
            "config": self.config,
            "metadata": metadata,
        });
        let stem = name.rsplit_once('.').map_or(name, |(s, _)| s);
        let text = serde_json::to_string_pretty(&doc).expect("json serializes") + "\n";
        self.write(&format!("{stem}.json"), text.as_bytes())
    }

    /// `name.csv` plus `name.json`.
    pub fn table(&mut self, name: &str, header: &[&str], rows: &[Vec<Cell>], metadata: Value) -> CliResult<()> {
        let file = format!("{name}.csv");
        let path = self.dir.join(&file);
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |source| CliError::Csv {
            path: path.clone(),
            source,
        };
        w.write_record(header).map_err(csv_err)?;
        for row in rows {
            debug_assert_eq!(row.len(), header.len());
            w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io {
            path: path.clone(),
            source: e.into_error(),
        })?;
        self.write(&file, &bytes)?;
        self.sidecar(&file, metadata)
    }

    /// Whitespace-separated matrix, one row per line.
    pub fn matrix(&mut self, name: &str, rows: &[Vec<f64>], metadata: Value) -> CliResult<()> {
        let file = format!("{name}.txt");
        let mut text = String::new();
        for row in rows {
            let line: Vec<String> = row.iter().map(|&x| float(x)).collect();
            text.push_str(&line.join(" "));
            text.push('\n');
        }
        self.write(&file, text.as_bytes())?;
        self.sidecar(&file, metadata)
    }

    /// Run summary listing every file written.
    pub fn finish(mut self, metadata: Value) -> CliResult<Vec<String>> {
        let files = self.files.clone();
        self.sidecar("run", json!({ "files": files, "summary": metadata }))?;
        Ok(self.files)
    }
}

pub const CYCLE_HEADER: [&str; 16] = [
    "N", "M", "V_i", "V_f", "T_C", "T_H", "W_C", "W_H", "Q_C", "Q_H", "W_ext", "eta", "P", "eta_star",
    "P_star", "engine_flag",
];

/// One cycle row. Records without a duration report power over `nominal_time`.
pub fn cycle_row(rec: &CycleRecord, ratio: Option<&RatioRecord>, nominal_time: f64) -> Vec<Cell> {
    let p = &rec.params;
    let power = rec.power().unwrap_or(rec.work_output() / nominal_time);
    vec![
        rec.particles.into(),
        rec.wells.into(),
        p.v_i.into(),
        p.v_f.into(),
        p.t_cold.into(),
        p.t_hot.into(),
        rec.work_compression().into(),
        rec.work_expansion().into(),
        rec.heat_cold().into(),
        rec.heat_hot().into(),
        rec.work_output().into(),
        rec.efficiency().into(),
        power.into(),
        ratio.and_then(|r| r.eta_star).into(),
        ratio.and_then(|r| r.power_star).into(),
        rec.is_engine().into(),
    ]
}

pub const PROPAGATION_HEADER: [&str; 5] = ["n", "E_AD", "E_NA", "dE", "norm_drift"];

pub fn propagation_rows(res: &PropagationResult) -> Vec<Vec<Cell>> {
    let de = res.delta_e();
    (0..res.indices.len())
        .map(|i| {
            vec![
                res.indices[i].into(),
                res.e_ad[i].into(),
                res.e_na[i].into(),
                de[i].into(),
                res.norm_drift[i].into(),
            ]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_keeps_seventeen_digits() {
        assert_eq!(float(0.1), "1.0000000000000001e-1");
        assert_eq!(float(-2.5), "-2.5000000000000000e0");
        assert_eq!(float(f64::NAN), "NaN");
        for x in [std::f64::consts::PI, 1e-300, 123456.789] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn tags_are_filename_safe() {
        assert_eq!(tag(25.0), "25");
        assert_eq!(tag(0.5), "0.5");
        assert_eq!(tag(-1.0), "m1");
    }
}
