mod common;

use proptest::prelude::*;
use tonks_otto_core::analytic::{self, DeepLatticeParams};
use tonks_otto_core::cycle::{self, CycleParams};
use tonks_otto_core::thermo::{self, Ensemble};
use tonks_otto_core::{spectral, SystemConfig};

/// Chemical potential by a coarse scan for a sign change of `sum f - N`,
/// refined by plain bisection.
fn scan_mu(energies: &[f64], n: usize, t: f64) -> f64 {
    let excess = |mu: f64| -> f64 {
        energies
            .iter()
            .map(|&e| 1.0 / (((e - mu) / t).exp() + 1.0))
            .sum::<f64>()
            - n as f64
    };
    let lo0 = energies[0] - 60.0 * t;
    let hi0 = energies[energies.len() - 1] + 60.0 * t;
    let steps = 20_000;
    let h = (hi0 - lo0) / steps as f64;
    let mut lo = lo0;
    for k in 0..steps {
        let x = lo0 + (k + 1) as f64 * h;
        if excess(x) >= 0.0 {
            lo = x - h;
            break;
        }
    }
    let mut hi = lo + h;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn mu_agrees_with_scan_oracle() {
    let cfg = SystemConfig::new(6, 6).unwrap();
    for (v, t, n) in [(0.0, 0.3, 6), (10.0, 2.0, 6), (25.0, 5.0, 4), (50.0, 0.05, 9)] {
        let e = spectral::energies(&cfg, v).unwrap();
        let mu = thermo::chemical_potential(&e, n, t).unwrap();
        let oracle = scan_mu(&e, n, t);
        assert!((mu - oracle).abs() < 1e-9 * mu.abs().max(1.0), "{mu} vs {oracle}");
    }
}

#[test]
fn unit_filling_is_insulating_at_low_temperature() {
    // mu sits in the gap for N = M
    let cfg = SystemConfig::new(20, 20).unwrap();
    let e = spectral::energies(&cfg, 50.0).unwrap();
    let mu = thermo::chemical_potential(&e, 20, 0.05).unwrap();
    assert!(mu > e[19] && mu < e[20]);
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn ground_state_closed_forms_track_numerics() {
    let p = CycleParams::new(0.0, 200.0, 0.0, 5.0).unwrap();
    let cfg = SystemConfig::new(100, 100).unwrap();
    let (many, single, ratio) = cycle::adiabatic_comparison(&cfg, &p).unwrap();
    let cf = analytic::mb_energies(&DeepLatticeParams::new(200.0, 5.0, 100));
    assert!(rel(cf.ground_box, many.energies.cold_initial) < 1e-12);
    assert!(rel(cf.ground_lattice, many.energies.cold_final) < 0.01);
    let sq = analytic::sqhe_energies(200.0, 5.0);
    assert!(rel(sq.ground_box, single.energies.cold_initial) < 1e-12);
    assert!(rel(sq.ground_lattice, single.energies.cold_final) < 0.01);
    let approx = analytic::ratio_approximation(&DeepLatticeParams::new(200.0, 5.0, 100)).value;
    let r = ratio.unwrap();
    assert!(rel(r.eta_star.unwrap(), approx) < 0.01);
    assert!(rel(r.power_star.unwrap(), approx) < 0.01);
}

#[test]
fn thermal_closed_forms_match_band_canonical_weights() {
    for wells in [1usize, 100] {
        let cfg = SystemConfig::new(wells, wells).unwrap();
        let e = spectral::energies(&cfg, 200.0).unwrap();
        let (lattice, free) = common::band_canonical_energies(&e, wells, 5.0);
        let cf = analytic::mb_energies(&DeepLatticeParams::new(200.0, 5.0, wells));
        assert!(rel(cf.thermal_lattice, lattice) < 0.01, "M={wells}: {lattice}");
        assert!(rel(cf.thermal_box, free) < 0.01, "M={wells}: {free}");
    }
}

#[test]
fn fermi_dirac_hot_state_exceeds_boltzmann_forms() {
    // with the mean particle number fixed, Fermi-Dirac puts roughly exp(-theta)
    // rather than exp(-2 theta) into the first excited band
    let p = CycleParams::new(0.0, 200.0, 0.0, 5.0).unwrap();
    let single = cycle::adiabatic_cycle(&SystemConfig::new(1, 1).unwrap(), &p, None).unwrap();
    let sq = analytic::sqhe_energies(200.0, 5.0);
    assert!(single.energies.hot_final > 1.05 * sq.thermal_lattice);
    assert!(single.energies.hot_initial > 1.05 * sq.thermal_box);
}

#[test]
fn closed_form_cycle_reproduces_ratio_formula() {
    for (v, t, n) in [(200.0, 5.0, 100usize), (50.0, 2.0, 10), (400.0, 12.0, 33)] {
        let p = DeepLatticeParams::new(v, t, n);
        let mb = analytic::mb_energies(&p);
        let sq = analytic::sqhe_energies(v, t);
        let eta_star = mb.efficiency() / sq.efficiency();
        let p_star = mb.work_output() / (n as f64 * sq.work_output());
        let f = analytic::ratio_approximation(&p).value;
        assert!((eta_star - f).abs() < 1e-9);
        assert!((p_star - f).abs() < 1e-9);
    }
}

#[test]
fn unit_filling_maximises_output() {
    let cfg = SystemConfig::new(20, 20).unwrap();
    let p = CycleParams::new(0.0, 50.0, 0.0, 5.0).unwrap();
    let ns: Vec<usize> = (4..=24).collect();
    let rows = cycle::sweep_filling(&cfg, &p, &ns).unwrap();
    let best_eta = rows
        .iter()
        .max_by(|a, b| a.efficiency().unwrap().total_cmp(&b.efficiency().unwrap()))
        .unwrap();
    let best_w = rows
        .iter()
        .max_by(|a, b| a.work_per_particle().total_cmp(&b.work_per_particle()))
        .unwrap();
    assert_eq!(best_eta.particles, 20);
    assert_eq!(best_w.particles, 20);
}

#[test]
fn flat_cycle_produces_nothing() {
    let cfg = SystemConfig::new(4, 4).unwrap();
    let p = CycleParams::new(10.0, 10.0, 0.5, 3.0).unwrap();
    let r = cycle::adiabatic_cycle(&cfg, &p, None).unwrap();
    assert!(r.work_output().abs() < 1e-12);
    assert!(!r.is_engine());
}

#[test]
fn max_power_efficiency_stays_below_carnot() {
    let cfg = SystemConfig::with_basis_multiplier(5, 5, 12).unwrap();
    let grid = tonks_otto_core::grid::logspace(0.5, 500.0, 60);
    let pt = cycle::efficiency_at_max_power(&cfg, 0.0, 1.0, 5.0, &grid).unwrap();
    assert!(pt.efficiency > 0.0 && pt.efficiency < 0.8);
    assert!((pt.curzon_ahlborn - (1.0 - (0.2f64).sqrt())).abs() < 1e-15);
}

#[test]
fn depth_grid_is_row_major() {
    let cfg = SystemConfig::with_basis_multiplier(3, 3, 8).unwrap();
    let vi = [0.0, 2.0];
    let vf = [5.0, 10.0, 20.0];
    let rows = cycle::sweep_depths(&cfg, &vi, &vf, 0.1, 4.0).unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[1].params.v_i, 0.0);
    assert_eq!(rows[1].params.v_f, 10.0);
    assert_eq!(rows[3].params.v_i, 2.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mu_conserves_particles(wells in 1usize..8, v in 0.0f64..80.0, t in 0.01f64..20.0, fill in 0.1f64..1.5) {
        let cfg = SystemConfig::with_basis_multiplier(wells, wells, 12).unwrap();
        let e = spectral::energies(&cfg, v).unwrap();
        let n = ((fill * wells as f64).round() as usize).max(1);
        let ens = Ensemble::thermal(&e, n, t).unwrap();
        let total: f64 = ens.occupations().iter().sum();
        prop_assert!((total - n as f64).abs() < 1e-10);
        prop_assert!(ens.occupations().iter().all(|&f| (0.0..=1.0).contains(&f)));
    }

    #[test]
    fn first_law_and_carnot(
        wells in 1usize..12,
        fill in 0.1f64..1.0,
        v_i in 0.0f64..100.0,
        dv in 0.0f64..100.0,
        t_c in 0.0f64..20.0,
        dt in 0.01f64..20.0,
    ) {
        let n = ((fill * wells as f64).ceil() as usize).clamp(1, wells);
        let cfg = SystemConfig::with_basis_multiplier(wells, n, 12).unwrap();
        let p = CycleParams::new(v_i, (v_i + dv).min(100.0), t_c, t_c + dt).unwrap();
        let r = cycle::adiabatic_cycle(&cfg, &p, None).unwrap();
        prop_assert!(r.first_law_residual().abs() < 1e-10 * r.heat_hot().abs().max(1.0));
        if r.is_engine() {
            prop_assert!(r.efficiency().unwrap() <= p.carnot() + 1e-10);
        }
    }

    #[test]
    fn occupations_decrease_with_energy(t in 0.01f64..10.0) {
        let cfg = SystemConfig::with_basis_multiplier(4, 4, 8).unwrap();
        let e = spectral::energies(&cfg, 12.0).unwrap();
        let ens = Ensemble::thermal(&e, 4, t).unwrap();
        prop_assert!(ens.occupations().windows(2).all(|w| w[0] >= w[1]));
    }
}
