use blockade_core::blockade::{optimal_pump_single, poisson_distribution, single_photon_resonance};
use blockade_core::hilbert::{make_space, AtomLevel, FockQubitSpace, DEFAULT_N_MAX};
use blockade_core::linalg::CMatrix;
use blockade_core::lindblad::*;
use blockade_core::model::{effective_drive, DriveDirection, SystemParams};
use blockade_core::{Complex64, I};
use proptest::prelude::*;

const FWD: DriveDirection = DriveDirection::Forward;

fn space() -> FockQubitSpace {
    make_space(DEFAULT_N_MAX).unwrap()
}

fn bare_cavity(delta_c: f64) -> SystemParams {
    SystemParams { g: 0.0, delta_c, ..SystemParams::reference() }
}

/// Stationary field of a linear driven cavity: α = −iΩ/(iΔ_c + κ/2).
fn linear_cavity_field(p: &SystemParams) -> Complex64 {
    let omega = effective_drive(p, FWD);
    -I * omega / (I * p.delta_c + 0.5)
}

#[test]
fn bare_cavity_relaxes_to_coherent_state() {
    for dc in [0.0, 0.7, -1.3] {
        let p = bare_cavity(dc);
        let rho = steady_state(&build_liouvillian(&p, FWD, space())).unwrap();
        let alpha = linear_cavity_field(&p);
        assert!((cavity_field(&rho) - alpha).norm() < 1e-6);
        assert!((g2(&rho).unwrap() - 1.0).abs() < 1e-4);
        assert!((g3(&rho).unwrap() - 1.0).abs() < 1e-3);
        let poisson = poisson_distribution(alpha.norm_sqr(), DEFAULT_N_MAX + 1);
        for (pn, reference) in photon_distribution(&rho).iter().zip(&poisson) {
            assert!((pn - reference).abs() < 1e-6);
        }
    }
}

#[test]
fn thermal_state_has_doubled_correlation() {
    let s = space();
    let nbar: f64 = 0.1;
    let mut m = CMatrix::zeros(s.dim(), s.dim());
    let weights: Vec<f64> = (0..=s.n_max()).map(|n| nbar.powi(n as i32) / (1.0 + nbar).powi(n as i32 + 1)).collect();
    let total: f64 = weights.iter().sum();
    for (n, w) in weights.iter().enumerate() {
        let k = s.index(n, AtomLevel::Ground);
        m[(k, k)] = Complex64::new(w / total, 0.0);
    }
    let rho = DensityMatrix::new(s, m).unwrap();
    rho.validate().unwrap();
    assert!((g2(&rho).unwrap() - 2.0).abs() < 1e-3);
}

#[test]
fn steady_states_satisfy_invariants() {
    let anchor = single_photon_resonance(&SystemParams::reference());
    let base = SystemParams::reference().with_delta_c(anchor);
    let pumped = optimal_pump_single(&base, FWD).unwrap().apply(&base);
    for dc in [0.5, 1.0, anchor, 2.0, 2.5] {
        for dir in DriveDirection::BOTH {
            let l = build_liouvillian(&pumped.with_delta_c(dc), dir, space());
            assert!(l.trace_defect() < 1e-10);
            let ss = solve_steady_state(&l).unwrap();
            assert!(ss.residual < RESIDUAL_TOL);
            ss.rho.validate().unwrap();
            let total: f64 = photon_distribution(&ss.rho).iter().sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }
    let dip = steady_state(&build_liouvillian(&pumped, FWD, space())).unwrap();
    assert!(g2(&dip).unwrap() < 0.1);
}

#[test]
fn backward_equals_forward_with_mirrors_swapped() {
    let p = SystemParams::reference().with_delta_c(1.3).with_pump(2e-4, -0.6);
    let back = steady_state(&build_liouvillian(&p, DriveDirection::Backward, space())).unwrap();
    let swapped = steady_state(&build_liouvillian(&p.swapped_mirrors(), FWD, space())).unwrap();
    assert!(back.matrix().max_abs_diff(swapped.matrix()) < 1e-14);
}

#[test]
fn truncation_study() {
    let p = SystemParams::reference().with_delta_c(1.2);
    let pumped = optimal_pump_single(&p, FWD).unwrap().apply(&p);
    assert!(check_truncation(&pumped, FWD, DEFAULT_N_MAX).unwrap().converged);
    let strong = SystemParams { b_in: 2.0, ..pumped };
    assert!(!check_truncation(&strong, FWD, DEFAULT_N_MAX).unwrap().converged);
}

fn random_density_matrix(space: FockQubitSpace, entries: &[(f64, f64)]) -> DensityMatrix {
    let d = space.dim();
    let m = CMatrix::from_fn(d, d, |i, j| {
        let (re, im) = entries[(i * d + j) % entries.len()];
        Complex64::new(re, im) / (1.0 + (i + j) as f64)
    });
    let pos = m.matmul(&m.adjoint());
    let tr = pos.trace();
    DensityMatrix::new(space, pos.scale(tr.inv())).unwrap().hermitized()
}

#[test]
fn long_evolution_reaches_steady_state() {
    let s = space();
    let entries: Vec<(f64, f64)> = (0..37).map(|k| ((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos())).collect();
    let rho0 = random_density_matrix(s, &entries);
    rho0.validate().unwrap();
    let p = SystemParams::reference().with_delta_c(0.9).with_pump(1.5e-4, 0.8);
    let l = build_liouvillian(&p, FWD, s);
    let evolved = evolve(&rho0, &l, 100.0, max_evolution_step(&l)).unwrap();
    evolved.validate().unwrap();
    let stationary = steady_state(&l).unwrap();
    assert!(evolved.trace_distance(&stationary).unwrap() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generator_preserves_trace(entries in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16..64),
                                 dc in 0.0..2.5f64, op in 0.0..5e-4f64, th in -3.2..3.2f64) {
        let s = make_space(4).unwrap();
        let rho = random_density_matrix(s, &entries);
        let p = SystemParams::reference().with_delta_c(dc).with_pump(op, th);
        let l = build_liouvillian(&p, FWD, s);
        let rate = l.apply(&rho);
        prop_assert!(rate.trace().norm() < 1e-12);
        prop_assert!(rate.max_abs_diff(&rate.adjoint()) < 1e-12);
    }

    #[test]
    fn steady_state_is_invariant_under_full_phase_turn(th in -3.2..3.2f64, dc in 0.5..2.0f64) {
        let s = make_space(6).unwrap();
        let p = SystemParams::reference().with_delta_c(dc).with_pump(3e-4, th);
        let q = p.with_pump(3e-4, th + 2.0 * std::f64::consts::PI);
        let a = steady_state(&build_liouvillian(&p, FWD, s)).unwrap();
        let b = steady_state(&build_liouvillian(&q, FWD, s)).unwrap();
        prop_assert!((g2(&a).unwrap() - g2(&b).unwrap()).abs() < 1e-9 * g2(&a).unwrap());
    }
}
