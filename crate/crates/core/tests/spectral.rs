mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use tonks_otto_core::spectral::{self, potential_element, ChainLayout};
use tonks_otto_core::SystemConfig;

use common::{fd_eigenvalues_extrapolated, integrate, lattice, sine_mode};

#[test]
fn potential_elements_match_quadrature() {
    for wells in [1usize, 2, 3, 10] {
        let l = wells as f64 * PI;
        let k = 64.min(8 * wells).max(16);
        let panels = 40 * wells;
        for m in 1..=k {
            for n in m..=k {
                let q = integrate(
                    |x| sine_mode(m, x, l) * sine_mode(n, x, l) * lattice(x, wells),
                    -0.5 * l,
                    0.5 * l,
                    panels,
                );
                let a = potential_element(m, n, wells);
                assert!((a - q).abs() < 1e-10, "M={wells} ({m},{n}): {a} vs {q}");
            }
        }
    }
}

#[test]
fn large_basis_elements_match_quadrature() {
    let wells = 2;
    let l = wells as f64 * PI;
    for (m, n) in [(1, 63), (60, 64), (3, 61), (33, 31), (64, 64)] {
        let q = integrate(
            |x| sine_mode(m, x, l) * sine_mode(n, x, l) * lattice(x, wells),
            -0.5 * l,
            0.5 * l,
            200,
        );
        assert!((potential_element(m, n, wells) - q).abs() < 1e-10);
    }
}

#[test]
fn energies_match_finite_difference_oracle() {
    for (wells, depth) in [(1usize, 7.0), (2, 10.0), (3, 25.0)] {
        let cfg = SystemConfig::new(wells, wells).unwrap();
        let e = spectral::energies(&cfg, depth).unwrap();
        let fd = fd_eigenvalues_extrapolated(wells, depth, 3000 * wells, 2 * wells);
        for (a, b) in e.iter().zip(&fd) {
            assert!((a - b).abs() < 1e-6 * b.abs().max(1.0), "M={wells}: {a} vs {b}");
        }
    }
}

#[test]
fn deep_well_ground_state_is_harmonic() {
    // single deep well: sqrt(V) - 1/4 up to O(V^-1/2)
    let cfg = SystemConfig::new(1, 1).unwrap();
    let e = spectral::energies(&cfg, 400.0).unwrap();
    assert!((e[0] - (20.0 - 0.25)).abs() < 0.02, "{}", e[0]);
}

#[test]
fn hellmann_feynman_slope() {
    let cfg = SystemConfig::with_basis_multiplier(3, 3, 16).unwrap();
    let v = 12.0;
    let s = spectral::solve(&cfg, v).unwrap();
    let p = spectral::potential_matrix(&cfg);
    let h = 1e-4;
    let up = spectral::energies(&cfg, v + h).unwrap();
    let down = spectral::energies(&cfg, v - h).unwrap();
    for n in 0..6 {
        let psi = s.state(n);
        let slope = quad_form(&p, &psi);
        let fd = (up[n] - down[n]) / (2.0 * h);
        assert!((slope - fd).abs() < 1e-7, "n={n}: {slope} vs {fd}");
    }
}

fn quad_form(p: &nalgebra::DMatrix<f64>, v: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..v.len() {
        for j in 0..v.len() {
            s += v[i] * p[(i, j)] * v[j];
        }
    }
    s
}

#[test]
fn gap_asymptotics() {
    let cfg = SystemConfig::new(100, 100).unwrap();
    for v in [50.0, 100.0, 200.0] {
        let gap = spectral::band_gap(&spectral::energies(&cfg, v).unwrap(), 100).unwrap();
        let model = 2.0 * v.sqrt() - 1.0;
        assert!((gap - model).abs() < 0.1 * model, "V={v}: {gap}");
    }
    for v in [0.5, 1.0] {
        let gap = spectral::band_gap(&spectral::energies(&cfg, v).unwrap(), 100).unwrap();
        assert!((gap - 0.5 * v).abs() < 0.25 * 0.5 * v, "V={v}: {gap}");
    }
}

#[test]
fn basis_doubling_at_default_size() {
    let cfg = SystemConfig::new(10, 10).unwrap();
    for v in [25.0, 200.0] {
        let r = spectral::convergence_report(&cfg, v).unwrap();
        assert!(r.max_relative_change < 1e-6, "V={v}: {}", r.max_relative_change);
    }
}

#[test]
fn dense_and_chain_spectra_agree() {
    let cfg = SystemConfig::with_basis_multiplier(4, 4, 10).unwrap();
    let h = spectral::hamiltonian(&cfg, 17.0).unwrap();
    let dense = spectral::diagonalize(&h, cfg.basis_size()).unwrap();
    let chain = spectral::energies(&cfg, 17.0).unwrap();
    for (a, b) in dense.energies().iter().zip(&chain) {
        assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
    }
    assert!(dense.orthonormality_error() < 1e-10);
}

#[test]
fn layout_partitions_modes() {
    let cfg = SystemConfig::with_basis_multiplier(7, 7, 8).unwrap();
    let layout = ChainLayout::new(&cfg);
    let mut seen = vec![false; cfg.basis_size()];
    for c in layout.chains() {
        for &m in c.modes() {
            assert!(!seen[m - 1]);
            seen[m - 1] = true;
        }
    }
    assert!(seen.iter().all(|&s| s));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn energies_rise_with_depth(wells in 1usize..6, v1 in 0.0f64..60.0, dv in 0.01f64..40.0) {
        let cfg = SystemConfig::with_basis_multiplier(wells, wells, 12).unwrap();
        let a = spectral::energies(&cfg, v1).unwrap();
        let b = spectral::energies(&cfg, v1 + dv).unwrap();
        for n in 0..4 * wells {
            prop_assert!(b[n] >= a[n] - 1e-10);
            // the lattice adds between 0 and V to every level
            prop_assert!(b[n] - a[n] <= dv + 1e-10);
        }
    }

    #[test]
    fn spectrum_is_sorted_and_orthonormal(wells in 1usize..5, v in 0.0f64..100.0) {
        let cfg = SystemConfig::with_basis_multiplier(wells, wells, 8).unwrap();
        let s = spectral::solve(&cfg, v).unwrap();
        prop_assert!(s.energies().windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(s.orthonormality_error() < 1e-10);
    }

    #[test]
    fn variational_upper_bound(wells in 1usize..5, v in 0.0f64..80.0) {
        // a smaller basis can only raise each level
        let small = SystemConfig::with_basis_multiplier(wells, wells, 6).unwrap();
        let big = SystemConfig::with_basis_multiplier(wells, wells, 12).unwrap();
        let a = spectral::energies(&small, v).unwrap();
        let b = spectral::energies(&big, v).unwrap();
        for n in 0..2 * wells {
            prop_assert!(a[n] >= b[n] - 1e-10 * b[n].abs().max(1.0));
        }
    }
}
