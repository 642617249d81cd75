//! Single-particle Hamiltonian of the box + lattice in the hard-wall sine basis.
//!
//! Basis functions are `sqrt(2/L) sin(n pi (x + L/2) / L)`, `n = 1..=K`. With
//! the parity-dependent lattice phase, `cos^2(x + phi)` only couples modes with
//! `|m - n| = 2M` or `m + n = 2M`, so the Hamiltonian falls apart into
//! independent tridiagonal chains. [`ChainLayout`] exploits this; the dense
//! route ([`hamiltonian`] + [`diagonalize`]) is kept as an independent check.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// Coefficients smaller than this are skipped when fixing eigenvector signs.
const SIGN_THRESHOLD: f64 = 1e-8;

/// Element `<m| cos^2(x + phi) |n>` for 1-based sine modes.
pub fn potential_element(m: usize, n: usize, wells: usize) -> f64 {
    let two_m = 2 * wells;
    let mut p = if m == n { 0.5 } else { 0.0 };
    if m.abs_diff(n) == two_m {
        p += 0.25;
    }
    if m + n == two_m {
        p -= 0.25;
    }
    p
}

/// Dense `K x K` matrix of `cos^2(x + phi)` in the sine basis.
pub fn potential_matrix(config: &SystemConfig) -> DMatrix<f64> {
    let k = config.basis_size();
    let m = config.wells();
    DMatrix::from_fn(k, k, |i, j| potential_element(i + 1, j + 1, m))
}

fn check_depth(depth: f64) -> Result<()> {
    if depth.is_finite() && depth >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeDepth(depth))
    }
}

/// Dense Hamiltonian `diag((n/M)^2) + V0 P`.
pub fn hamiltonian(config: &SystemConfig, depth: f64) -> Result<DMatrix<f64>> {
    check_depth(depth)?;
    let mut h = potential_matrix(config) * depth;
    for n in 0..config.basis_size() {
        h[(n, n)] += config.mode_energy(n + 1);
    }
    Ok(h)
}

/// Flip `v` so that its first coefficient above the threshold (in the order
/// given by `rank`) is positive.
fn fix_sign_by<F: Fn(usize) -> usize>(v: &mut [f64], rank: F) {
    let lead = v
        .iter()
        .enumerate()
        .filter(|(_, c)| c.abs() > SIGN_THRESHOLD)
        .min_by_key(|(i, _)| rank(*i))
        .map(|(_, c)| *c);
    if matches!(lead, Some(c) if c < 0.0) {
        v.iter_mut().for_each(|c| *c = -*c);
    }
}

/// Eigenvalues and eigenvectors at one lattice depth.
///
/// `vectors` holds one column per state, expressed in the sine basis.
#[derive(Debug, Clone)]
pub struct Spectrum {
    depth: Option<f64>,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn depth(&self) -> Option<f64> {
        self.depth
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn state(&self, n: usize) -> Vec<f64> {
        self.vectors.column(n).iter().copied().collect()
    }

    /// `max |U^T U - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.vectors.transpose() * &self.vectors;
        let mut err: f64 = 0.0;
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((g[(i, j)] - target).abs());
            }
        }
        err
    }
}

/// Dense symmetric diagonalization, ascending, with the sign convention applied.
pub fn diagonalize(h: &DMatrix<f64>, n_states: usize) -> Result<Spectrum> {
    let k = h.nrows();
    if h.ncols() != k {
        return Err(Error::InvalidConfig("matrix must be square"));
    }
    if n_states > k {
        return Err(Error::InsufficientStates {
            requested: n_states,
            available: k,
        });
    }
    let mut asym: f64 = 0.0;
    for i in 0..k {
        for j in 0..i {
            asym = asym.max((h[(i, j)] - h[(j, i)]).abs());
        }
    }
    if asym > 0.0 {
        return Err(Error::NotSymmetric(asym));
    }
    let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, 100 * k.max(10))
        .ok_or(Error::EigenNoConvergence)?;
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut vectors = DMatrix::zeros(k, n_states);
    let mut energies = Vec::with_capacity(n_states);
    for (col, &src) in order.iter().take(n_states).enumerate() {
        energies.push(eig.eigenvalues[src]);
        let mut v: Vec<f64> = eig.eigenvectors.column(src).iter().copied().collect();
        fix_sign_by(&mut v, |i| i);
        vectors.set_column(col, &nalgebra::DVector::from_vec(v));
    }
    Ok(Spectrum {
        depth: None,
        energies,
        vectors,
    })
}

/// One irreducible tridiagonal block of the Hamiltonian.
#[derive(Debug, Clone)]
pub struct Chain {
    modes: Vec<usize>,
    kinetic: Vec<f64>,
    pot_diag: Vec<f64>,
    pot_off: Vec<f64>,
}

impl Chain {
    /// 1-based sine modes in chain order.
    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn diagonal(&self, depth: f64) -> Vec<f64> {
        self.kinetic
            .iter()
            .zip(&self.pot_diag)
            .map(|(k, p)| k + depth * p)
            .collect()
    }

    pub fn off_diagonal(&self, depth: f64) -> Vec<f64> {
        self.pot_off.iter().map(|p| depth * p).collect()
    }

    pub(crate) fn kinetic(&self) -> &[f64] {
        &self.kinetic
    }

    pub(crate) fn potential_diagonal(&self) -> &[f64] {
        &self.pot_diag
    }

    pub(crate) fn potential_off_diagonal(&self) -> &[f64] {
        &self.pot_off
    }

    fn eigen(&self, depth: f64) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let s = self.len();
        let d = self.diagonal(depth);
        let o = self.off_diagonal(depth);
        let mut h = DMatrix::zeros(s, s);
        for i in 0..s {
            h[(i, i)] = d[i];
            if i + 1 < s {
                h[(i, i + 1)] = o[i];
                h[(i + 1, i)] = o[i];
            }
        }
        let eig = SymmetricEigen::try_new(h, f64::EPSILON, 100 * s.max(10))
            .ok_or(Error::EigenNoConvergence)?;
        Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
    }
}

/// Eigenpair living on a single chain.
#[derive(Debug, Clone)]
pub struct ChainEigenpair {
    pub energy: f64,
    pub chain: usize,
    /// Coefficients in chain order; empty when only energies were requested.
    pub vector: Vec<f64>,
}

/// Partition of the sine modes into the tridiagonal chains of the Hamiltonian.
#[derive(Debug, Clone)]
pub struct ChainLayout {
    wells: usize,
    basis_size: usize,
    chains: Vec<Chain>,
    chain_of_mode: Vec<usize>,
    slot_of_mode: Vec<usize>,
}

impl ChainLayout {
    pub fn new(config: &SystemConfig) -> Self {
        let k = config.basis_size();
        let m = config.wells();
        let two_m = 2 * m;
        let neighbours = |n: usize| -> Vec<usize> {
            let mut out = Vec::with_capacity(2);
            if n + two_m <= k {
                out.push(n + two_m);
            }
            if n > two_m {
                out.push(n - two_m);
            }
            if n < two_m && n != m && two_m - n <= k {
                out.push(two_m - n);
            }
            out
        };

        let mut visited = vec![false; k + 1];
        let mut chains = Vec::new();
        for start in 1..=k {
            if visited[start] || neighbours(start).len() > 1 {
                continue;
            }
            let mut modes = vec![start];
            visited[start] = true;
            let mut prev = 0;
            let mut cur = start;
            loop {
                let next = neighbours(cur).into_iter().find(|&x| x != prev && !visited[x]);
                match next {
                    Some(nx) => {
                        visited[nx] = true;
                        modes.push(nx);
                        prev = cur;
                        cur = nx;
                    }
                    None => break,
                }
            }
            chains.push(modes);
        }
        debug_assert!(visited[1..].iter().all(|&v| v), "coupling graph must be a union of paths");

        let mut chain_of_mode = vec![usize::MAX; k + 1];
        let mut slot_of_mode = vec![usize::MAX; k + 1];
        let chains: Vec<Chain> = chains
            .into_iter()
            .enumerate()
            .map(|(c, modes)| {
                for (slot, &n) in modes.iter().enumerate() {
                    chain_of_mode[n] = c;
                    slot_of_mode[n] = slot;
                }
                let kinetic = modes.iter().map(|&n| config.mode_energy(n)).collect();
                let pot_diag = modes.iter().map(|&n| potential_element(n, n, m)).collect();
                let pot_off = modes
                    .windows(2)
                    .map(|w| potential_element(w[0], w[1], m))
                    .collect();
                Chain {
                    modes,
                    kinetic,
                    pot_diag,
                    pot_off,
                }
            })
            .collect();

        Self {
            wells: m,
            basis_size: k,
            chains,
            chain_of_mode,
            slot_of_mode,
        }
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn wells(&self) -> usize {
        self.wells
    }

    pub fn basis_size(&self) -> usize {
        self.basis_size
    }

    /// Chain index and position within it of a 1-based mode.
    pub fn locate(&self, mode: usize) -> (usize, usize) {
        (self.chain_of_mode[mode], self.slot_of_mode[mode])
    }

    /// All `K` eigenpairs in ascending energy. Ties are broken by the lowest
    /// mode of the chain so the order is reproducible.
    pub fn eigenpairs(&self, depth: f64, with_vectors: bool) -> Result<Vec<ChainEigenpair>> {
        check_depth(depth)?;
        let mut pairs = Vec::with_capacity(self.basis_size);
        for (c, chain) in self.chains.iter().enumerate() {
            let (vals, vecs) = chain.eigen(depth)?;
            for (j, &energy) in vals.iter().enumerate() {
                let vector = if with_vectors {
                    let mut v: Vec<f64> = vecs.column(j).iter().copied().collect();
                    fix_sign_by(&mut v, |i| chain.modes[i]);
                    v
                } else {
                    Vec::new()
                };
                pairs.push(ChainEigenpair {
                    energy,
                    chain: c,
                    vector,
                });
            }
        }
        pairs.sort_by(|a, b| match a.energy.total_cmp(&b.energy) {
            Ordering::Equal => self.chains[a.chain].modes[0].cmp(&self.chains[b.chain].modes[0]),
            o => o,
        });
        Ok(pairs)
    }

    /// Scatter a chain-local vector into a dense sine-basis vector.
    pub fn to_dense(&self, chain: usize, local: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.basis_size];
        for (&n, &c) in self.chains[chain].modes.iter().zip(local) {
            out[n - 1] = c;
        }
        out
    }
}

/// Ascending eigenvalues at `depth`, without eigenvectors.
pub fn energies(config: &SystemConfig, depth: f64) -> Result<Vec<f64>> {
    energies_with(&ChainLayout::new(config), depth)
}

pub fn energies_with(layout: &ChainLayout, depth: f64) -> Result<Vec<f64>> {
    Ok(layout
        .eigenpairs(depth, false)?
        .into_iter()
        .map(|p| p.energy)
        .collect())
}

/// Full spectrum at `depth` through the chain decomposition.
pub fn solve(config: &SystemConfig, depth: f64) -> Result<Spectrum> {
    let layout = ChainLayout::new(config);
    let pairs = layout.eigenpairs(depth, true)?;
    let k = layout.basis_size();
    let mut vectors = DMatrix::zeros(k, pairs.len());
    let mut energies = Vec::with_capacity(pairs.len());
    for (col, p) in pairs.iter().enumerate() {
        energies.push(p.energy);
        for (&n, &c) in layout.chains[p.chain].modes.iter().zip(&p.vector) {
            vectors[(n - 1, col)] = c;
        }
    }
    Ok(Spectrum {
        depth: Some(depth),
        energies,
        vectors,
    })
}

/// Gap above the lowest band: `E[M] - E[M-1]` (0-based).
pub fn band_gap(energies: &[f64], wells: usize) -> Result<f64> {
    if energies.len() <= wells || wells == 0 {
        return Err(Error::InsufficientStates {
            requested: wells + 1,
            available: energies.len(),
        });
    }
    Ok(energies[wells] - energies[wells - 1])
}

/// Basis-doubling check on the lowest `2M` eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub depth: f64,
    pub basis_size: usize,
    pub doubled_basis_size: usize,
    pub states_compared: usize,
    pub max_relative_change: f64,
}

pub fn convergence_report(config: &SystemConfig, depth: f64) -> Result<ConvergenceReport> {
    let doubled = SystemConfig::with_basis_size(
        config.wells(),
        config.particles(),
        2 * config.basis_size(),
    )?;
    let coarse = energies(config, depth)?;
    let fine = energies(&doubled, depth)?;
    let states = (2 * config.wells()).min(coarse.len());
    let max_relative_change = coarse
        .iter()
        .zip(&fine)
        .take(states)
        .map(|(a, b)| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Ok(ConvergenceReport {
        depth,
        basis_size: config.basis_size(),
        doubled_basis_size: doubled.basis_size(),
        states_compared: states,
        max_relative_change,
    })
}
