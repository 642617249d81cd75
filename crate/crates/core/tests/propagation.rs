use proptest::prelude::*;
use tonks_otto_core::cycle::CycleParams;
use tonks_otto_core::propagate::{
    self, evolve_states, finite_time_cycle, finite_time_cycle_with, irreversible_work, DtControl,
    Ramp, RampKind,
};
use tonks_otto_core::thermo::Ensemble;
use tonks_otto_core::{spectral, SystemConfig};

fn fixed(dt: f64) -> DtControl {
    DtControl::Fixed { dt }
}

#[test]
fn sudden_quench_limit() {
    // a ramp much faster than any level spacing leaves the state untouched,
    // so E_NA = <psi_i| H_f |psi_i>
    let cfg = SystemConfig::with_basis_multiplier(3, 3, 12).unwrap();
    let ramp = Ramp::reference(2.0, 30.0, 1e-7).unwrap();
    let res = evolve_states(&cfg, &ramp, &[0, 1, 2, 5], fixed(1e-8)).unwrap();
    let initial = spectral::solve(&cfg, 2.0).unwrap();
    let hf = spectral::hamiltonian(&cfg, 30.0).unwrap();
    for (i, &n) in res.indices.iter().enumerate() {
        let psi = initial.state(n);
        let mut e = 0.0;
        for a in 0..psi.len() {
            for b in 0..psi.len() {
                e += psi[a] * hf[(a, b)] * psi[b];
            }
        }
        assert!((res.e_na[i] - e).abs() < 1e-5 * e.abs(), "n={n}: {} vs {e}", res.e_na[i]);
    }
}

#[test]
fn slow_ramp_is_adiabatic() {
    let cfg = SystemConfig::with_basis_multiplier(2, 2, 12).unwrap();
    let ramp = Ramp::reference(0.0, 10.0, 400.0).unwrap();
    let res = evolve_states(&cfg, &ramp, &[0, 1], fixed(0.02)).unwrap();
    for d in res.delta_e() {
        assert!(d.abs() < 1e-4, "{d}");
    }
}

#[test]
fn flat_ramp_keeps_energies() {
    let cfg = SystemConfig::with_basis_multiplier(4, 4, 12).unwrap();
    let ramp = Ramp::constant(9.0, 20.0).unwrap();
    let res = evolve_states(&cfg, &ramp, &(0..8).collect::<Vec<_>>(), fixed(0.05)).unwrap();
    assert!(res.delta_e().iter().all(|d| d.abs() < 1e-10));
    assert!(res.max_norm_drift() < 1e-12);
}

#[test]
fn evolution_is_unitary() {
    let cfg = SystemConfig::with_basis_multiplier(3, 3, 12).unwrap();
    let ramp = Ramp::reference(0.0, 25.0, 6.0).unwrap();
    let idx: Vec<usize> = (0..12).collect();
    let res = evolve_states(&cfg, &ramp, &idx, fixed(0.01)).unwrap();
    assert!(res.max_norm_drift() < 1e-10);
    assert!(res.gram_deviation() < 1e-10);
    let dense = res.dense_state(3);
    let norm: f64 = dense.iter().map(|c| c.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-10);
}

#[test]
fn second_order_step_convergence() {
    let cfg = SystemConfig::with_basis_multiplier(5, 5, 12).unwrap();
    let ramp = Ramp::reference(0.0, 25.0, propagate::paper_time_to_internal(2.0)).unwrap();
    let idx: Vec<usize> = (0..5).collect();
    let e: Vec<Vec<f64>> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&dt| evolve_states(&cfg, &ramp, &idx, fixed(dt)).unwrap().e_na)
        .collect();
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let ratio = diff(&e[0], &e[1]) / diff(&e[1], &e[2]);
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn converged_policy_meets_tolerance() {
    let cfg = SystemConfig::with_basis_multiplier(3, 3, 12).unwrap();
    let ramp = Ramp::reference(0.0, 15.0, 10.0).unwrap();
    let res = evolve_states(&cfg, &ramp, &[0, 1, 2], DtControl::default()).unwrap();
    let finer = evolve_states(&cfg, &ramp, &[0, 1, 2], fixed(res.dt / 4.0)).unwrap();
    for (a, b) in res.e_na.iter().zip(&finer.e_na) {
        assert!((a - b).abs() / b.abs() < 1e-6);
    }
    let tight = DtControl::Converged {
        initial_dt: 0.5,
        rel_tol: 1e-14,
        max_halvings: 1,
    };
    assert!(evolve_states(&cfg, &ramp, &[0], tight).is_err());
}

#[test]
fn sampled_ramp_reproduces_reference() {
    let cfg = SystemConfig::with_basis_multiplier(3, 3, 12).unwrap();
    let reference = Ramp::reference(0.0, 20.0, 8.0).unwrap();
    let (t, v) = reference.sampled(4001);
    let custom = Ramp::from_samples_inferred(t, v).unwrap();
    assert_eq!(custom.kind(), RampKind::Custom);
    assert_eq!(custom.end_depth(), 20.0);
    let a = evolve_states(&cfg, &reference, &[0, 1, 2], fixed(0.005)).unwrap();
    let b = evolve_states(&cfg, &custom, &[0, 1, 2], fixed(0.005)).unwrap();
    for (x, y) in a.e_na.iter().zip(&b.e_na) {
        assert!((x - y).abs() < 1e-5 * y.abs());
    }
}

#[test]
fn finite_time_cycle_closes_first_law() {
    let cfg = SystemConfig::with_basis_multiplier(4, 4, 12).unwrap();
    let p = CycleParams::new(0.0, 25.0, 0.2, 5.0).unwrap();
    let c = finite_time_cycle(&cfg, &p, 10.0, RampKind::Reference, fixed(0.01)).unwrap();
    let r = &c.record;
    assert!(r.first_law_residual().abs() < 1e-10);
    assert_eq!(r.duration, Some(20.0));
    // extra work on the strokes shows up as lost output
    let ad = tonks_otto_core::cycle::adiabatic_cycle(&cfg, &p, None).unwrap();
    let lost = ad.work_output() - r.work_output();
    let irr = c.compression.irreversible_work + c.expansion.irreversible_work;
    assert!((lost - irr).abs() < 1e-9 * ad.work_output().abs().max(1.0));
}

#[test]
fn single_well_reference_at_same_time() {
    let cfg = SystemConfig::with_basis_multiplier(4, 4, 12).unwrap();
    let p = CycleParams::new(0.0, 25.0, 0.0, 5.0).unwrap();
    let (many, single, ratio) =
        propagate::finite_time_comparison(&cfg, &p, 12.0, RampKind::Reference, fixed(0.01)).unwrap();
    assert_eq!(single.record.particles, 1);
    assert_eq!(single.record.duration, many.record.duration);
    let r = ratio.unwrap();
    let expect = many.record.efficiency().unwrap() / single.record.efficiency().unwrap();
    assert!((r.eta_star.unwrap() - expect).abs() < 1e-14);
}

#[test]
fn explicit_ramps_must_match_cycle() {
    let cfg = SystemConfig::with_basis_multiplier(2, 2, 8).unwrap();
    let p = CycleParams::new(0.0, 5.0, 0.0, 1.0).unwrap();
    let up = Ramp::reference(0.0, 5.0, 2.0).unwrap();
    let down = Ramp::reference(5.0, 0.0, 3.0).unwrap();
    let c = finite_time_cycle_with(&cfg, &p, &up, &down, fixed(0.01)).unwrap();
    assert_eq!(c.record.duration, Some(5.0));
    assert!(finite_time_cycle_with(&cfg, &p, &down, &up, fixed(0.01)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn irreversible_work_is_passive(
        wells in 2usize..6,
        fill in 0.2f64..1.0,
        v_f in 1.0f64..40.0,
        tf in 0.5f64..12.0,
        t in 0.0f64..6.0,
    ) {
        let n = ((fill * wells as f64).ceil() as usize).clamp(1, wells);
        let cfg = SystemConfig::with_basis_multiplier(wells, n, 8).unwrap();
        let e = spectral::energies(&cfg, 0.0).unwrap();
        let ens = Ensemble::thermal(&e, n, t).unwrap();
        let idx: Vec<usize> = (0..e.len()).filter(|&i| ens.occupations()[i] > 1e-15).collect();
        let up = Ramp::reference(0.0, v_f, tf).unwrap();
        let res = evolve_states(&cfg, &up, &idx, fixed(0.02)).unwrap();
        prop_assert!(irreversible_work(&res, ens.occupations()) >= -1e-10);
        let e_f = spectral::energies(&cfg, v_f).unwrap();
        let hot = Ensemble::thermal(&e_f, n, t).unwrap();
        let idx: Vec<usize> = (0..e_f.len()).filter(|&i| hot.occupations()[i] > 1e-15).collect();
        let down = Ramp::reference(v_f, 0.0, tf).unwrap();
        let res = evolve_states(&cfg, &down, &idx, fixed(0.02)).unwrap();
        prop_assert!(irreversible_work(&res, hot.occupations()) >= -1e-10);
    }
}
