use blockade_core::amplitude::{
    g2_from_amplitudes, g3_from_amplitudes, photon_population_amplitudes, steady_amplitudes, DEFAULT_NORMALIZATION_TOL,
};
use blockade_core::blockade::{
    classify_blockade, nonreciprocal_ratio, optimal_pump_single, optimal_pump_two, select_branch,
    single_photon_resonance, PumpBranch, PumpSetting,
};
use blockade_core::hilbert::FockQubitSpace;
use blockade_core::lindblad::{build_liouvillian, g2, g3, mean_photon_number, solve_steady_state};
use blockade_core::model::{effective_drive, DriveDirection, SystemParams};
use rayon::prelude::*;

use crate::config::{Anchor, BranchSel, PumpMode, Solver, SweepConfig, SweepParam};
use crate::error::{Result, SimError};
use crate::record::{flag, ResultRecord};

/// Ratio between adjacent |Ω_p| values that counts as a branch jump.
pub const BRANCH_JUMP_RATIO: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    /// Base parameters with the axis values written in; the pump is not resolved yet.
    pub params: SystemParams,
}

/// Row-major grid: the last axis varies fastest.
pub fn grid_points(config: &SweepConfig) -> Vec<GridPoint> {
    let values: Vec<Vec<f64>> = config.axes.iter().map(|a| a.values()).collect();
    let total = config.grid_len();
    (0..total)
        .map(|index| {
            let mut params = config.base;
            let mut rest = index;
            for (axis, vals) in config.axes.iter().zip(&values).rev() {
                axis.param.set(&mut params, vals[rest % axis.count]);
                rest /= axis.count;
            }
            GridPoint { index, params }
        })
        .collect()
}

fn anchored(params: &SystemParams, anchor: Option<Anchor>) -> SystemParams {
    match anchor {
        None => *params,
        Some(Anchor::Resonance) => params.with_delta_c(single_photon_resonance(params)),
        Some(Anchor::DeltaC(x)) => params.with_delta_c(x),
    }
}

/// Parameters with the configured pump applied, plus any pump warnings.
pub fn resolve_pump(
    config: &SweepConfig,
    params: &SystemParams,
) -> blockade_core::Result<(SystemParams, Vec<&'static str>)> {
    let mut flags = Vec::new();
    let setting: PumpSetting = match config.pump {
        PumpMode::Fixed => return Ok((*params, flags)),
        PumpMode::OptimalSingle { direction, anchor } => optimal_pump_single(&anchored(params, anchor), direction)?,
        PumpMode::OptimalTwo { direction, branch, anchor } => {
            let at = anchored(params, anchor);
            let pump = match branch {
                BranchSel::Plus => optimal_pump_two(&at, direction, PumpBranch::Plus)?,
                BranchSel::Minus => optimal_pump_two(&at, direction, PumpBranch::Minus)?,
                BranchSel::Auto => select_branch(&at, direction)?.pump,
            };
            if pump.omega_p >= effective_drive(&at, direction) {
                flags.push(flag::PUMP_EXCEEDS_DRIVE);
            }
            pump
        }
    };
    let omega_p = if config.has_axis(SweepParam::OmegaP) { params.omega_p } else { setting.omega_p };
    let theta_p = if config.has_axis(SweepParam::ThetaP) { params.theta_p } else { setting.theta_p };
    Ok((params.with_pump(omega_p, theta_p), flags))
}

struct Observables {
    g2: f64,
    g3: f64,
    n_photon: f64,
}

fn amplitude_observables(params: &SystemParams, dir: DriveDirection) -> blockade_core::Result<(Observables, bool)> {
    let s = steady_amplitudes(params, dir)?;
    let obs = Observables {
        g2: g2_from_amplitudes(&s)?,
        g3: g3_from_amplitudes(&s)?,
        n_photon: photon_population_amplitudes(&s),
    };
    Ok((obs, s.is_normalized(DEFAULT_NORMALIZATION_TOL)))
}

fn lindblad_observables(
    params: &SystemParams,
    dir: DriveDirection,
    space: FockQubitSpace,
) -> blockade_core::Result<(Observables, bool)> {
    let ss = solve_steady_state(&build_liouvillian(params, dir, space))?;
    let valid = ss.rho.invariants().holds();
    let obs = Observables { g2: g2(&ss.rho)?, g3: g3(&ss.rho)?, n_photon: mean_photon_number(&ss.rho) };
    Ok((obs, valid))
}

fn blank_record(index: usize, params: &SystemParams, solver: Solver) -> ResultRecord {
    ResultRecord {
        index,
        delta_c: params.delta_c,
        delta_a: params.delta_a,
        g: params.g,
        gamma: params.gamma,
        kappa1: params.kappa1,
        kappa2: params.kappa2,
        b_in: params.b_in,
        omega_f: effective_drive(params, DriveDirection::Forward),
        omega_b: effective_drive(params, DriveDirection::Backward),
        omega_p: None,
        theta_p: None,
        g2_f: None,
        g2_b: None,
        g3_f: None,
        g3_b: None,
        n_photon_f: None,
        n_photon_b: None,
        eta_db: None,
        class_f: None,
        class_b: None,
        solver: solver.as_str(),
        converged: false,
        flags: String::new(),
        error: None,
    }
}

/// All records of one grid point, one per configured solver.
pub fn evaluate_point(config: &SweepConfig, point: &GridPoint) -> Vec<ResultRecord> {
    let solvers = config.solver.solvers();
    let (params, pump_flags) = match resolve_pump(config, &point.params) {
        Ok(x) => x,
        Err(e) => {
            return solvers
                .iter()
                .map(|&s| {
                    let mut r = blank_record(point.index, &point.params, s);
                    r.error = Some(format!("pump: {e}"));
                    r
                })
                .collect();
        }
    };
    let space = FockQubitSpace::new(config.n_max);
    solvers
        .iter()
        .map(|&solver| {
            let mut r = blank_record(point.index, &params, solver);
            r.omega_p = Some(params.omega_p);
            r.theta_p = Some(params.theta_p);
            for f in &pump_flags {
                r.add_flag(f);
            }
            let mut errors = Vec::new();
            let mut all_ok = true;
            for &dir in config.direction.directions() {
                let result = match solver {
                    Solver::Amplitudes => amplitude_observables(&params, dir),
                    Solver::Lindblad => match &space {
                        Ok(space) => lindblad_observables(&params, dir, *space),
                        Err(e) => Err(e.clone()),
                    },
                };
                match result {
                    Ok((obs, healthy)) => {
                        if !healthy {
                            all_ok = false;
                            r.add_flag(match solver {
                                Solver::Amplitudes => flag::NORMALIZATION,
                                Solver::Lindblad => flag::INVARIANTS,
                            });
                        }
                        let class = Some(classify_blockade(obs.g2, obs.g3).as_str());
                        match dir {
                            DriveDirection::Forward => {
                                (r.g2_f, r.g3_f, r.n_photon_f, r.class_f) =
                                    (Some(obs.g2), Some(obs.g3), Some(obs.n_photon), class)
                            }
                            DriveDirection::Backward => {
                                (r.g2_b, r.g3_b, r.n_photon_b, r.class_b) =
                                    (Some(obs.g2), Some(obs.g3), Some(obs.n_photon), class)
                            }
                        }
                    }
                    Err(e) => {
                        all_ok = false;
                        errors.push(format!("{}: {e}", dir.as_str()));
                    }
                }
            }
            if let (Some(f), Some(b)) = (r.g2_f, r.g2_b) {
                r.eta_db = nonreciprocal_ratio(f, b).ok();
            }
            r.converged = all_ok;
            if !errors.is_empty() {
                r.error = Some(errors.join("; "));
            }
            r
        })
        .collect()
}

/// Flags points whose |Ω_p| differs from the previous point on the inner
/// axis by more than [`BRANCH_JUMP_RATIO`]. Records must be in grid order.
fn flag_branch_jumps(config: &SweepConfig, records: &mut [ResultRecord]) {
    if matches!(config.pump, PumpMode::Fixed) {
        return;
    }
    let inner = config.axes.last().map_or(1, |a| a.count);
    let per_point = config.solver.solvers().len();
    let pumps: Vec<Option<f64>> = records.chunks(per_point).map(|c| c[0].omega_p).collect();
    for (point, chunk) in records.chunks_mut(per_point).enumerate() {
        if point % inner == 0 {
            continue;
        }
        if let (Some(prev), Some(cur)) = (pumps[point - 1], pumps[point]) {
            if prev > 0.0 && cur > 0.0 && (cur / prev).max(prev / cur) > BRANCH_JUMP_RATIO {
                chunk.iter_mut().for_each(|r| r.add_flag(flag::BRANCH_JUMP));
            }
        }
    }
}

/// Evaluates the whole grid on `jobs` worker threads (0 picks the machine
/// default). Output order is the grid order whatever the thread count.
pub fn run_sweep(config: &SweepConfig, jobs: usize) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| SimError::WorkerPool(e.to_string()))?;
    let points = grid_points(config);
    let mut records: Vec<ResultRecord> =
        pool.install(|| points.par_iter().map(|p| evaluate_point(config, p)).collect::<Vec<_>>()).into_iter().flatten().collect();
    flag_branch_jumps(config, &mut records);
    Ok(records)
}
