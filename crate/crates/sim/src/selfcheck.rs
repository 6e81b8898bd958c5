//! Quick invariant self-test behind the `check` subcommand.

use blockade_core::amplitude::{
    integrate_amplitudes, max_stable_step, steady_amplitudes,
};
use blockade_core::blockade::{optimal_pump_single, optimal_pump_two, single_photon_resonance, PumpBranch};
use blockade_core::hilbert::{make_space, DEFAULT_N_MAX};
use blockade_core::lindblad::{
    build_liouvillian, cavity_field, check_truncation, evolve, g2, max_evolution_step, solve_steady_state,
    DensityMatrix, RESIDUAL_TOL,
};
use blockade_core::model::{effective_drive, hamiltonian, DriveDirection, SystemParams};
use blockade_core::I;

type Check = (&'static str, fn() -> Result<(), String>);

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn pumped_at_resonance() -> Result<SystemParams, String> {
    let p = SystemParams::reference();
    let at = p.with_delta_c(single_photon_resonance(&p));
    Ok(optimal_pump_single(&at, DriveDirection::Forward).map_err(|e| e.to_string())?.apply(&at))
}

fn hermitian_hamiltonian() -> Result<(), String> {
    let p = pumped_at_resonance()?;
    let h = hamiltonian(&p, DriveDirection::Forward, make_space(DEFAULT_N_MAX).map_err(|e| e.to_string())?);
    ensure(h.is_hermitian(1e-14), || "H ≠ H†".into())
}

fn trace_preserving_generator() -> Result<(), String> {
    let p = pumped_at_resonance()?;
    let l = build_liouvillian(&p, DriveDirection::Forward, make_space(DEFAULT_N_MAX).map_err(|e| e.to_string())?);
    let defect = l.trace_defect();
    ensure(defect < 1e-10, || format!("trace defect {defect:e}"))
}

fn valid_steady_states() -> Result<(), String> {
    let p = pumped_at_resonance()?;
    let space = make_space(DEFAULT_N_MAX).map_err(|e| e.to_string())?;
    for dir in DriveDirection::BOTH {
        let ss = solve_steady_state(&build_liouvillian(&p, dir, space)).map_err(|e| e.to_string())?;
        ensure(ss.residual < RESIDUAL_TOL, || format!("{}: residual {:e}", dir.as_str(), ss.residual))?;
        ss.rho.validate().map_err(|e| format!("{}: {e}", dir.as_str()))?;
    }
    Ok(())
}

fn coherent_cavity_oracle() -> Result<(), String> {
    let p = SystemParams { g: 0.0, delta_c: 0.4, ..SystemParams::reference() };
    let space = make_space(DEFAULT_N_MAX).map_err(|e| e.to_string())?;
    let rho = solve_steady_state(&build_liouvillian(&p, DriveDirection::Forward, space)).map_err(|e| e.to_string())?.rho;
    let alpha = -I * effective_drive(&p, DriveDirection::Forward) / (I * p.delta_c + 0.5);
    let err = (cavity_field(&rho) - alpha).norm();
    ensure(err < 1e-6, || format!("⟨a⟩ off by {err:e}"))?;
    let g = g2(&rho).map_err(|e| e.to_string())?;
    ensure((g - 1.0).abs() < 1e-4, || format!("g2 = {g}"))
}

fn evolution_matches_steady_state() -> Result<(), String> {
    let p = pumped_at_resonance()?;
    let space = make_space(6).map_err(|e| e.to_string())?;
    let l = build_liouvillian(&p, DriveDirection::Forward, space);
    let rho = evolve(&DensityMatrix::vacuum(space), &l, 100.0, max_evolution_step(&l)).map_err(|e| e.to_string())?;
    let ss = solve_steady_state(&l).map_err(|e| e.to_string())?.rho;
    let d = rho.trace_distance(&ss).map_err(|e| e.to_string())?;
    ensure(d < 1e-4, || format!("trace distance {d:e}"))
}

fn amplitude_integration_converges() -> Result<(), String> {
    let p = pumped_at_resonance()?.with_delta_c(1.6);
    let ode = integrate_amplitudes(&p, DriveDirection::Backward, 100.0, max_stable_step(&p)).map_err(|e| e.to_string())?;
    let exact = steady_amplitudes(&p, DriveDirection::Backward).map_err(|e| e.to_string())?;
    let worst = ode
        .to_array()
        .iter()
        .zip(exact.to_array())
        .map(|(a, b)| (a - b).norm() / b.norm().max(1e-300))
        .fold(0.0, f64::max);
    ensure(worst < 1e-3, || format!("relative error {worst:e}"))
}

fn optimal_pumps_cancel() -> Result<(), String> {
    let p = SystemParams::reference().with_delta_c(1.1);
    let dir = DriveDirection::Forward;
    let omega = effective_drive(&p, dir);
    let single = optimal_pump_single(&p, dir).map_err(|e| e.to_string())?.apply(&p);
    let s = steady_amplitudes(&single, dir).map_err(|e| e.to_string())?;
    let r2 = s.c2g.norm_sqr() / (s.c1g.norm_sqr() * omega * omega);
    ensure(r2 < 1e-10, || format!("single-photon residue {r2:e}"))?;
    for branch in [PumpBranch::Plus, PumpBranch::Minus] {
        let two = optimal_pump_two(&p, dir, branch).map_err(|e| e.to_string())?.apply(&p);
        let s = steady_amplitudes(&two, dir).map_err(|e| e.to_string())?;
        let r3 = s.c3g.norm_sqr() / (s.c1g.norm_sqr() * omega.powi(4));
        ensure(r3 < 1e-10, || format!("two-photon residue {r3:e} ({})", branch.as_str()))?;
    }
    Ok(())
}

fn truncation_converged() -> Result<(), String> {
    let p = pumped_at_resonance()?;
    let c = check_truncation(&p, DriveDirection::Forward, DEFAULT_N_MAX).map_err(|e| e.to_string())?;
    ensure(c.converged, || format!("Δg2 = {:e}, Δg3 = {:e}", c.g2_delta, c.g3_delta))
}

pub const CHECKS: [Check; 8] = [
    ("hamiltonian is hermitian", hermitian_hamiltonian),
    ("generator preserves trace", trace_preserving_generator),
    ("steady states are valid density matrices", valid_steady_states),
    ("driven empty cavity matches linear response", coherent_cavity_oracle),
    ("time evolution reaches the steady state", evolution_matches_steady_state),
    ("amplitude integration reaches the closed form", amplitude_integration_converges),
    ("optimal pumps cancel their target amplitudes", optimal_pumps_cancel),
    ("photon truncation is converged", truncation_converged),
];

/// Runs every check, writing one line each. Returns whether all passed.
pub fn run_checks(out: &mut impl std::io::Write) -> std::io::Result<bool> {
    let mut all = true;
    for (name, check) in CHECKS {
        match check() {
            Ok(()) => writeln!(out, "PASS  {name}")?,
            Err(detail) => {
                all = false;
                writeln!(out, "FAIL  {name}: {detail}")?;
            }
        }
    }
    Ok(all)
}
