//! Shortcut-to-adiabaticity ramps from a one-parameter variational family.
//!
//! The trial state interpolates between the initial and final eigenstates,
//! `psi(eps) = [(1-eps) psi_I + eps psi_F] / sqrt(D(eps))`, with
//! `eps(t)` the quintic smoothstep. Writing `xi^2 = <x^2>`, `alpha = <P>` and
//! `beta = <(d psi/dx)^2>` along the family, the driving depth is
//!
//! `V = -[dxi^2/deps (b' + 4 k b^2) + k dbeta/deps] / (dalpha/deps)`,
//! `b = d(xi^2)/dt / (8 k xi^2)`,
//!
//! for `H = -k d^2/dx^2 + V P`. Recoil units give `k = 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::grid::linspace;
use crate::propagate::{lambda, Ramp, RampKind};
use crate::spectral::{potential_element, ChainLayout};

/// Kinetic coefficient `hbar^2 / 2m` in recoil units.
pub const RECOIL_KINETIC: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaOptions {
    pub grid_points: usize,
    pub kinetic: f64,
    /// `|dalpha/deps|` below this marks a singular sample.
    pub singular_threshold: f64,
    pub max_singular_fraction: f64,
}

impl Default for StaOptions {
    fn default() -> Self {
        Self {
            grid_points: 4096,
            kinetic: RECOIL_KINETIC,
            singular_threshold: 1e-10,
            max_singular_fraction: 0.05,
        }
    }
}

/// `eps(s)` and its first two time derivatives for `s = t / t_f`.
pub fn smoothstep_eps(t: f64, duration: f64) -> (f64, f64, f64) {
    let s = (t / duration).clamp(0.0, 1.0);
    let s2 = s * s;
    let d1 = 30.0 * (s2 - 2.0 * s2 * s + s2 * s2) / duration;
    let d2 = (60.0 * s - 180.0 * s2 + 120.0 * s2 * s) / (duration * duration);
    (lambda(s), d1, d2)
}

/// `<n| x^2 |m>` for 1-based sine modes, `x` measured from the box centre.
pub fn position_squared_element(m: usize, n: usize, box_length: f64) -> f64 {
    let l2 = box_length * box_length;
    let pi2 = core::f64::consts::PI * core::f64::consts::PI;
    if m == n {
        let nf = n as f64;
        l2 * (1.0 / 12.0 - 1.0 / (2.0 * nf * nf * pi2))
    } else if (m + n) % 2 == 1 {
        0.0
    } else {
        let (mf, nf) = (m as f64, n as f64);
        let d = mf * mf - nf * nf;
        8.0 * l2 * mf * nf / (pi2 * d * d)
    }
}

/// Symmetric pair moments `[II, IF, FF]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMoment {
    pub ii: f64,
    pub if_: f64,
    pub ff: f64,
}

impl PairMoment {
    /// `Q(eps) = (1-eps)^2 A_II + eps^2 A_FF + 2 eps (1-eps) A_IF` and derivatives.
    fn quadratic(&self, e: f64) -> (f64, f64, f64) {
        let u = 1.0 - e;
        let q = u * u * self.ii + e * e * self.ff + 2.0 * e * u * self.if_;
        let q1 = -2.0 * u * self.ii + 2.0 * e * self.ff + 2.0 * (1.0 - 2.0 * e) * self.if_;
        let q2 = 2.0 * self.ii + 2.0 * self.ff - 4.0 * self.if_;
        (q, q1, q2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaMoments {
    /// `<psi_I|psi_F>`, made non-negative by the sign choice of `psi_F`.
    pub overlap: f64,
    pub position_squared: PairMoment,
    pub potential: PairMoment,
    pub kinetic: PairMoment,
}

/// Value, first and second `eps` derivatives of a moment along the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interpolated {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

fn sparse(v: &[f64]) -> Vec<(usize, f64)> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, &c)| (i + 1, c))
        .collect()
}

fn bilinear(a: &[(usize, f64)], b: &[(usize, f64)], el: impl Fn(usize, usize) -> f64) -> f64 {
    let mut s = 0.0;
    for &(m, cm) in a {
        for &(n, cn) in b {
            s += cm * cn * el(m, n);
        }
    }
    s
}

/// Moments of two normalized states given as dense sine-basis vectors.
pub fn sta_moments(initial: &[f64], fin: &[f64], config: &SystemConfig) -> Result<StaMoments> {
    let k = config.basis_size();
    if initial.len() != k || fin.len() != k {
        return Err(Error::InvalidConfig("state length differs from the basis size"));
    }
    let a = sparse(initial);
    let mut b = sparse(fin);
    let mut overlap: f64 = initial.iter().zip(fin).map(|(x, y)| x * y).sum();
    if overlap < 0.0 {
        b.iter_mut().for_each(|p| p.1 = -p.1);
        overlap = -overlap;
    }
    let l = config.box_length();
    let wells = config.wells();
    let x2 = |m: usize, n: usize| position_squared_element(m, n, l);
    let pot = |m: usize, n: usize| potential_element(m, n, wells);
    let kin = |m: usize, n: usize| if m == n { config.mode_energy(m) } else { 0.0 };
    let pair = |el: &dyn Fn(usize, usize) -> f64| PairMoment {
        ii: bilinear(&a, &a, el),
        if_: bilinear(&a, &b, el),
        ff: bilinear(&b, &b, el),
    };
    Ok(StaMoments {
        overlap,
        position_squared: pair(&x2),
        potential: pair(&pot),
        kinetic: pair(&kin),
    })
}

impl StaMoments {
    /// Normalization `D(eps)` of the unnormalized interpolant and derivatives.
    fn norm(&self, e: f64) -> (f64, f64, f64) {
        PairMoment {
            ii: 1.0,
            if_: self.overlap,
            ff: 1.0,
        }
        .quadratic(e)
    }

    /// `Q/D` for `moment` with analytic derivatives.
    pub fn interpolate(&self, moment: &PairMoment, e: f64) -> Result<Interpolated> {
        let (d, d1, d2) = self.norm(e);
        if !(d > 1e-14) {
            return Err(Error::DegenerateInterpolation(d));
        }
        let (q, q1, q2) = moment.quadratic(e);
        Ok(Interpolated {
            value: q / d,
            d1: (q1 * d - q * d1) / (d * d),
            d2: q2 / d - 2.0 * q1 * d1 / (d * d) - q * d2 / (d * d) + 2.0 * q * d1 * d1 / (d * d * d),
        })
    }
}

/// Chirp `b = d(xi^2)/dt / (8 k xi^2)` and its time derivative.
pub fn chirp(moments: &StaMoments, eps: (f64, f64, f64), kinetic: f64) -> Result<(f64, f64)> {
    let (e, de, dde) = eps;
    let x = moments.interpolate(&moments.position_squared, e)?;
    let c = 1.0 / (8.0 * kinetic);
    let rate = x.d1 * de;
    let b = c * rate / x.value;
    let db = c * ((x.d2 * de * de + x.d1 * dde) / x.value - rate * rate / (x.value * x.value));
    Ok((b, db))
}

/// Depth on the variational trajectory at one instant, with `dalpha/deps`.
pub fn sta_depth(moments: &StaMoments, eps: (f64, f64, f64), kinetic: f64) -> Result<(f64, f64)> {
    let e = eps.0;
    let (b, db) = chirp(moments, eps, kinetic)?;
    let x = moments.interpolate(&moments.position_squared, e)?;
    let a = moments.interpolate(&moments.potential, e)?;
    let k = moments.interpolate(&moments.kinetic, e)?;
    let v = -(x.d1 * (db + 4.0 * kinetic * b * b) + kinetic * k.d1) / a.d1;
    Ok((v, a.d1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaRamp {
    pub ramp: Ramp,
    /// Initial and final states coincide; the ramp holds the start depth.
    pub degenerate: bool,
    /// Grid indices patched by interpolation.
    pub singular: Vec<usize>,
}

/// Patch singular samples with the quadratic through the three nearest
/// regular samples.
fn patch_singular(times: &[f64], depths: &mut [f64], singular: &[bool]) {
    let regular: Vec<usize> = (0..depths.len()).filter(|&i| !singular[i]).collect();
    if regular.len() < 3 {
        return;
    }
    for k in (0..depths.len()).filter(|&i| singular[i]) {
        let pos = regular.partition_point(|&j| j < k);
        let lo = pos.saturating_sub(2).min(regular.len() - 3);
        let mut best = lo;
        let dist = |s: usize| {
            (s..s + 3)
                .map(|i| regular[i].abs_diff(k))
                .max()
                .unwrap_or(usize::MAX)
        };
        for s in lo..=(lo + 2).min(regular.len() - 3) {
            if dist(s) < dist(best) {
                best = s;
            }
        }
        let idx = [regular[best], regular[best + 1], regular[best + 2]];
        let t = times[k];
        let mut v = 0.0;
        for a in 0..3 {
            let mut w = 1.0;
            for b in 0..3 {
                if a != b {
                    w *= (t - times[idx[b]]) / (times[idx[a]] - times[idx[b]]);
                }
            }
            v += w * depths[idx[a]];
        }
        depths[k] = v;
    }
}

/// Ramp that drives the rank-`state` eigenstate at `start_depth` into the
/// one at `end_depth` over `duration` (internal units).
pub fn sta_ramp_single(
    config: &SystemConfig,
    state: usize,
    start_depth: f64,
    end_depth: f64,
    duration: f64,
    options: &StaOptions,
) -> Result<StaRamp> {
    if options.grid_points < 512 {
        return Err(Error::InvalidRamp("STA ramps need at least 512 grid points"));
    }
    if !(options.kinetic > 0.0) {
        return Err(Error::InvalidRamp("kinetic coefficient must be positive"));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::InvalidRamp("duration must be positive"));
    }
    let layout = ChainLayout::new(config);
    let first = layout.eigenpairs(start_depth, true)?;
    let last = layout.eigenpairs(end_depth, true)?;
    if state >= first.len() {
        return Err(Error::InsufficientStates {
            requested: state + 1,
            available: first.len(),
        });
    }
    let psi_i = layout.to_dense(first[state].chain, &first[state].vector);
    let psi_f = layout.to_dense(last[state].chain, &last[state].vector);
    let moments = sta_moments(&psi_i, &psi_f, config)?;

    let times = linspace(0.0, duration, options.grid_points);
    let diff: f64 = psi_i
        .iter()
        .zip(&psi_f)
        .map(|(a, b)| (a.abs() - b.abs()).abs())
        .fold(0.0, f64::max);
    if diff < 1e-12 && (moments.overlap - 1.0).abs() < 1e-12 {
        let depths = vec![start_depth; times.len()];
        return Ok(StaRamp {
            ramp: Ramp::from_samples(RampKind::Custom, start_depth, end_depth, times, depths)?,
            degenerate: true,
            singular: Vec::new(),
        });
    }

    let mut depths = Vec::with_capacity(times.len());
    let mut flags = Vec::with_capacity(times.len());
    for &t in &times {
        let (v, slope) = sta_depth(&moments, smoothstep_eps(t, duration), options.kinetic)?;
        let bad = !(slope.abs() >= options.singular_threshold) || !v.is_finite();
        flags.push(bad);
        depths.push(if bad { 0.0 } else { v });
    }
    let singular: Vec<usize> = (0..flags.len()).filter(|&i| flags[i]).collect();
    if singular.len() as f64 > options.max_singular_fraction * times.len() as f64 {
        return Err(Error::StaRejected {
            singular: singular.len(),
            total: times.len(),
        });
    }
    patch_singular(&times, &mut depths, &flags);
    Ok(StaRamp {
        ramp: Ramp::from_samples(RampKind::Custom, start_depth, end_depth, times, depths)?,
        degenerate: false,
        singular,
    })
}

/// Pointwise mean of the single-state ramps for ranks `0..M`.
pub fn sta_ramp_averaged(
    config: &SystemConfig,
    start_depth: f64,
    end_depth: f64,
    duration: f64,
    options: &StaOptions,
) -> Result<StaRamp> {
    let m = config.wells();
    let mut sum: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut singular = Vec::new();
    let mut degenerate = true;
    for n in 0..m {
        let r = sta_ramp_single(config, n, start_depth, end_depth, duration, options)?;
        degenerate &= r.degenerate;
        singular.extend(r.singular.iter().copied());
        let (t, v) = r.ramp.sampled(options.grid_points);
        match &mut sum {
            None => sum = Some((t, v)),
            Some((_, acc)) => acc.iter_mut().zip(&v).for_each(|(a, b)| *a += b),
        }
    }
    let (times, mut depths) = sum.ok_or(Error::InvalidConfig("no wells"))?;
    depths.iter_mut().for_each(|v| *v /= m as f64);
    singular.sort_unstable();
    singular.dedup();
    Ok(StaRamp {
        ramp: Ramp::from_samples(RampKind::StaAveraged, start_depth, end_depth, times, depths)?,
        degenerate,
        singular,
    })
}

/// Rank driven by the targeted ramp: the second-highest state of the lowest
/// band, which carries the largest excess energy under the reference ramp.
/// The highest band state lies on the chain of mode `M` and stays nearly
/// adiabatic by itself.
pub fn targeted_rank(wells: usize) -> usize {
    wells.saturating_sub(2)
}

/// Single-state ramp for [`targeted_rank`].
pub fn sta_ramp_targeted(
    config: &SystemConfig,
    start_depth: f64,
    end_depth: f64,
    duration: f64,
    options: &StaOptions,
) -> Result<StaRamp> {
    let r = sta_ramp_single(
        config,
        targeted_rank(config.wells()),
        start_depth,
        end_depth,
        duration,
        options,
    )?;
    Ok(StaRamp {
        ramp: r.ramp.with_kind(RampKind::StaTargeted),
        ..r
    })
}
