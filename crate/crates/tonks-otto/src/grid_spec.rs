//! Grid specifications shared by the config file and the command line.
//!
//! Accepted forms:
//! - `1,2.5,10` explicit list
//! - `lin:LO:HI:N` N evenly spaced points, endpoints included
//! - `log:LO:HI:N` N log-spaced points, endpoints included
//! - `A..B` or `A..=B` inclusive integer range

use serde::{Deserialize, Deserializer};
use tonks_otto_core::grid::{linspace, logspace};

use crate::error::{CliError, CliResult};

pub fn parse(spec: &str) -> CliResult<Vec<f64>> {
    let spec = spec.trim();
    let bad = || CliError::config(format!("bad grid spec '{spec}'"));
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(rest) = spec.strip_prefix("lin:").or_else(|| spec.strip_prefix("log:")) {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if n == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(bad());
        }
        if spec.starts_with("lin:") {
            return Ok(linspace(lo, hi, n));
        }
        if lo <= 0.0 || hi <= 0.0 {
            return Err(CliError::config(format!("log grid needs positive bounds: '{spec}'")));
        }
        return Ok(logspace(lo, hi, n));
    }
    if let Some((a, b)) = spec.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b < a {
            return Err(bad());
        }
        return Ok((a..=b).map(|x| x as f64).collect());
    }
    spec.split(',')
        .map(|s| {
            let x: f64 = s.trim().parse().map_err(|_| bad())?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(bad())
            }
        })
        .collect()
}

pub fn parse_counts(spec: &str) -> CliResult<Vec<usize>> {
    to_counts(&parse(spec)?)
}

pub fn to_counts(values: &[f64]) -> CliResult<Vec<usize>> {
    values
        .iter()
        .map(|&x| {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(CliError::config(format!("expected a non-negative integer, got {x}")))
            }
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw<T> {
    List(Vec<T>),
    Spec(String),
}

/// Deserialize either an array or a grid spec string.
pub fn de_grid<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
    match Raw::<f64>::deserialize(d)? {
        Raw::List(v) => Ok(v),
        Raw::Spec(s) => parse(&s).map_err(serde::de::Error::custom),
    }
}

pub fn de_counts<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
    match Raw::<usize>::deserialize(d)? {
        Raw::List(v) => Ok(v),
        Raw::Spec(s) => parse_counts(&s).map_err(serde::de::Error::custom),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse("1, 2.5,10").unwrap(), vec![1.0, 2.5, 10.0]);
        assert_eq!(parse("lin:0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        let g = parse("log:1:100:3").unwrap();
        assert_eq!((g[0], g[2]), (1.0, 100.0));
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert_eq!(parse_counts("2..=4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_counts("2..4").unwrap(), vec![2, 3, 4]);
        assert!(parse("").unwrap().is_empty());
    }

    #[test]
    fn rejects_garbage() {
        for s in ["lin:0:1", "log:0:1:4", "a,b", "5..2", "nan", "lin:0:1:0"] {
            assert!(parse(s).is_err(), "{s}");
        }
        assert!(parse_counts("1.5").is_err());
    }
}
