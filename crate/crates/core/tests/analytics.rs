use std::f64::consts::PI;

use blockade_core::amplitude::steady_amplitudes;
use blockade_core::blockade::*;
use blockade_core::hilbert::{excited_projector, make_space, number_operator, AtomLevel, DEFAULT_N_MAX};
use blockade_core::lindblad::{build_liouvillian, g2, mean_photon_number, photon_distribution, steady_state};
use blockade_core::model::*;
use blockade_core::{Complex64, I};
use proptest::prelude::*;

const FWD: DriveDirection = DriveDirection::Forward;
const BWD: DriveDirection = DriveDirection::Backward;

fn params() -> impl Strategy<Value = SystemParams> {
    (0.55..0.95f64, 0.3..1.2f64, 0.5..1.5f64, 0.5..2.0f64, 0.2..1.0f64, 0.005..0.02f64, 0.0..3e-4f64, -3.1..3.1f64)
        .prop_map(|(k1, gamma, g, dc, da, b_in, op, th)| SystemParams {
            kappa1: k1,
            kappa2: 1.0 - k1,
            kappa_loss: 0.0,
            gamma,
            g,
            delta_c: dc,
            delta_a: da,
            b_in,
            omega_p: op,
            theta_p: th,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamiltonian_is_hermitian_and_direction_symmetric(p in params()) {
        let s = make_space(5).unwrap();
        let h = hamiltonian(&p, FWD, s);
        prop_assert!(h.is_hermitian(1e-15));
        let back = hamiltonian(&p, BWD, s);
        let swapped = hamiltonian(&p.swapped_mirrors(), FWD, s);
        prop_assert_eq!(back.matrix(), swapped.matrix());
    }

    #[test]
    fn hamiltonian_is_periodic_in_pump_phase(p in params()) {
        let s = make_space(5).unwrap();
        let h = hamiltonian(&p, FWD, s);
        let turned = hamiltonian(&p.with_pump(p.omega_p, p.theta_p + 2.0 * PI), FWD, s);
        prop_assert!(h.matrix().max_abs_diff(turned.matrix()) < 1e-15);
    }

    #[test]
    fn dissipative_part_is_fixed(p in params()) {
        let s = make_space(5).unwrap();
        let h = hamiltonian(&p, FWD, s);
        let hn = non_hermitian_hamiltonian(&p, FWD, s);
        let expected = number_operator(s).scale(-I * 0.5).add_scaled(-I * p.gamma / 2.0, &excited_projector(s)).unwrap();
        let diff = hn.matrix().add_scaled(Complex64::new(-1.0, 0.0), h.matrix());
        prop_assert!(diff.max_abs_diff(expected.matrix()) < 1e-15);
    }

    #[test]
    fn pump_setting_round_trips(re in -1e-3..1e-3f64, im in -1e-3..1e-3f64) {
        let z = Complex64::new(re, im);
        let ps = PumpSetting::from_complex(z);
        prop_assert!(ps.theta_p > -PI && ps.theta_p <= PI);
        prop_assert!((Complex64::from_polar(ps.omega_p, -ps.theta_p) - z).norm() < 1e-18);
    }

    #[test]
    fn both_two_photon_roots_cancel_three_photon_amplitude(p in params()) {
        let omega = effective_drive(&p, FWD);
        for branch in [PumpBranch::Plus, PumpBranch::Minus] {
            let pumped = optimal_pump_two(&p, FWD, branch).unwrap().apply(&p);
            let s = steady_amplitudes(&pumped, FWD).unwrap();
            prop_assert!(s.c3g.norm_sqr() / (s.c1g.norm_sqr() * omega.powi(4)) < 1e-10);
        }
    }

    #[test]
    fn ratio_is_antisymmetric(x in 1e-6..1e3f64, y in 1e-6..1e3f64) {
        let a = nonreciprocal_ratio(x, y).unwrap();
        let b = nonreciprocal_ratio(y, x).unwrap();
        prop_assert!((a + b).abs() < 1e-12 * (1.0 + a.abs()));
    }
}

#[test]
fn pump_free_hamiltonian_has_no_pair_terms() {
    let s = make_space(6).unwrap();
    let h = hamiltonian(&SystemParams::reference(), FWD, s);
    for n in 0..=s.n_max() - 2 {
        for a in [AtomLevel::Ground, AtomLevel::Excited] {
            for b in [AtomLevel::Ground, AtomLevel::Excited] {
                assert_eq!(h.element((n + 2, a), (n, b)), Complex64::new(0.0, 0.0));
            }
        }
    }
}

#[test]
fn single_photon_pump_over_the_window() {
    for i in 0..=15 {
        let dc = 0.5 + 0.1 * i as f64;
        let p = SystemParams::reference().with_delta_c(dc);
        let pump = optimal_pump_single(&p, FWD).unwrap();
        assert!(pump.omega_p > 1e-5 && pump.omega_p < 1e-3, "Δc = {dc}: Ω_p = {}", pump.omega_p);
        if (0.83..=2.0).contains(&dc) {
            assert!(pump.theta_p < 0.0, "Δc = {dc}: θ_p = {}", pump.theta_p);
        }
    }
}

#[test]
fn two_photon_pump_is_weak_and_negative_phase() {
    for i in 0..=10 {
        let dc = 0.5 + 0.1 * i as f64;
        let p = SystemParams::reference().with_delta_c(dc);
        let sel = select_branch(&p, FWD).unwrap();
        let single = optimal_pump_single(&p, FWD).unwrap();
        assert!(!sel.exceeds_drive);
        assert!(sel.pump.theta_p < 0.0, "Δc = {dc}: θ_p = {}", sel.pump.theta_p);
        let ratio = sel.pump.omega_p / single.omega_p;
        assert!((0.1..10.0).contains(&ratio), "Δc = {dc}: ratio {ratio}");
    }
}

#[test]
fn a_two_photon_root_vanishes_with_the_drive() {
    let mut last = f64::INFINITY;
    for b_in in [1e-2, 1e-3, 1e-4, 1e-5] {
        let p = SystemParams { b_in, ..SystemParams::reference() };
        let smaller = [PumpBranch::Plus, PumpBranch::Minus]
            .iter()
            .map(|&b| optimal_pump_two(&p, FWD, b).unwrap().omega_p)
            .fold(f64::INFINITY, f64::min);
        assert!(smaller < last);
        last = smaller;
    }
    assert!(last < 1e-9);
}

#[test]
fn undriven_pump_denominators() {
    let p = SystemParams { g: 0.0, gamma: 0.0, delta_a: 0.0, b_in: 0.0, ..SystemParams::reference() };
    assert!(matches!(optimal_pump_single(&p, FWD), Err(blockade_core::Error::SingularDenominator { .. })));
    assert!(matches!(optimal_pump_two(&p, FWD, PumpBranch::Plus), Err(blockade_core::Error::SingularDenominator { .. })));
}

#[test]
fn pump_free_reciprocity_improves_at_weaker_drive() {
    let s = make_space(DEFAULT_N_MAX).unwrap();
    for dc in [0.8, 1.2, 1.8] {
        let mut previous = f64::INFINITY;
        for b_in in [0.02, 0.01, 0.005] {
            let p = SystemParams { b_in, ..SystemParams::reference() }.with_delta_c(dc);
            let f = g2(&steady_state(&build_liouvillian(&p, FWD, s)).unwrap()).unwrap();
            let b = g2(&steady_state(&build_liouvillian(&p, BWD, s)).unwrap()).unwrap();
            let gap = (f - b).abs();
            assert!(gap < previous, "Δc = {dc}, b_in = {b_in}: {gap} ≥ {previous}");
            previous = gap;
        }
    }
}

#[test]
fn two_photon_state_passes_poisson_criterion() {
    let s = make_space(DEFAULT_N_MAX).unwrap();
    let p = SystemParams::reference();
    let pumped = select_branch(&p, FWD).unwrap().pump.apply(&p);
    let rho = steady_state(&build_liouvillian(&pumped, FWD, s)).unwrap();
    let dist = photon_distribution(&rho);
    let mean = mean_photon_number(&rho);
    assert!(n_photon_blockade(&dist, mean, 2));
    let dev = poisson_deviation(&dist, mean).unwrap();
    assert!(dev[2].unwrap() >= 0.0 && dev[3].unwrap() < 0.0);
}

#[test]
fn physical_unit_conversion() {
    let p = SystemParams::reference();
    let u = physical_units(&p, FWD, 3.7e6, 852.0, 1e6, 0.0);
    assert!(u.drive_power_w > 0.1e-15 && u.drive_power_w < 0.9e-15, "{}", u.drive_power_w);
    let undriven = physical_units(&SystemParams { b_in: 0.0, ..p }, FWD, 3.7e6, 852.0, 1e6, 0.0);
    assert_eq!(undriven.drive_power_w, 0.0);
    assert_eq!(undriven.pump_power_w, 0.0);

    let anchor = single_photon_resonance(&p);
    let base = p.with_delta_c(anchor);
    let pumped = optimal_pump_single(&base, FWD).unwrap().apply(&base);
    let rho = steady_state(&build_liouvillian(&pumped, FWD, make_space(DEFAULT_N_MAX).unwrap())).unwrap();
    let rate = physical_units(&pumped, FWD, 3.7e6, 852.0, 1e6, mean_photon_number(&rho));
    assert!(rate.total_emission_rate_hz > 1e2 && rate.total_emission_rate_hz < 1e4, "{}", rate.total_emission_rate_hz);
}
