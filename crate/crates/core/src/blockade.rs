//! Optimal pump conditions and blockade diagnostics.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 methods are inherent when std is linked
use num_traits::Float;

use crate::amplitude::{AmplitudeCoefficients, SINGULAR_TOL};
use crate::model::{DriveDirection, SystemParams};
use crate::{Error, Result};

/// Poisson probabilities below this are not divided by.
pub const POISSON_FLOOR: f64 = 1e-30;

/// A pump amplitude and phase. `complex_value = omega_p · e^{−i theta_p}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpSetting {
    pub omega_p: f64,
    /// In (−π, π].
    pub theta_p: f64,
    pub complex_value: Complex64,
}

impl PumpSetting {
    pub fn from_complex(value: Complex64) -> Self {
        let mut theta = -value.arg();
        if theta <= -PI {
            theta += 2.0 * PI;
        }
        PumpSetting { omega_p: value.norm(), theta_p: theta, complex_value: value }
    }

    pub fn none() -> Self {
        PumpSetting { omega_p: 0.0, theta_p: 0.0, complex_value: Complex64::new(0.0, 0.0) }
    }

    /// `params` with this pump applied.
    pub fn apply(&self, params: &SystemParams) -> SystemParams {
        params.with_pump(self.omega_p, self.theta_p)
    }
}

/// Pump that cancels the two-photon amplitude C₂g:
/// `2Ω²(g² + Δ_ac) / (Δ̃_c Δ_ac − g²(Δ̃_a + Δ̃_c))`.
pub fn optimal_pump_single(params: &SystemParams, direction: DriveDirection) -> Result<PumpSetting> {
    let k = AmplitudeCoefficients::new(params, direction);
    let g2 = params.g * params.g;
    let den = k.cavity * k.delta_ac - g2 * (k.atom + k.cavity);
    if den.norm() <= SINGULAR_TOL {
        return Err(Error::SingularDenominator { what: "single-photon pump denominator", magnitude: den.norm() });
    }
    let num = 2.0 * k.drive * k.drive * (g2 + k.delta_ac);
    Ok(PumpSetting::from_complex(num / den))
}

/// Coefficients of the quadratic whose roots cancel C₃g.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonCoefficients {
    /// Δ = α − 4g⁴ − δ_ac
    pub big_delta: Complex64,
    /// δ_ac = g²[3Δ̃_a(Δ̃_a + Δ̃_c) − 4Ω²]
    pub delta_ac_small: Complex64,
    /// α = 3Δ̃_c Δ_ac δ
    pub alpha: Complex64,
    /// β = 2(2g² + Δ_ac)δ
    pub beta: Complex64,
    /// δ = Δ̃_a + 2Δ̃_c
    pub delta: Complex64,
    /// ζ = 3Δ̃_a + 4Δ̃_c
    pub zeta: Complex64,
    /// Δ² − 4βΩ²(g²ζ + Δ_ac δ)
    pub discriminant: Complex64,
}

impl TwoPhotonCoefficients {
    pub fn new(params: &SystemParams, direction: DriveDirection) -> Self {
        let k = AmplitudeCoefficients::new(params, direction);
        let g2 = params.g * params.g;
        let o2 = k.drive * k.drive;
        let delta = k.atom + 2.0 * k.cavity;
        let zeta = 3.0 * k.atom + 4.0 * k.cavity;
        let delta_ac_small = g2 * (3.0 * k.atom * (k.atom + k.cavity) - 4.0 * o2);
        let alpha = 3.0 * k.cavity * k.delta_ac * delta;
        let beta = 2.0 * (2.0 * g2 + k.delta_ac) * delta;
        let big_delta = alpha - 4.0 * g2 * g2 - delta_ac_small;
        let discriminant = big_delta * big_delta - 4.0 * beta * o2 * (g2 * zeta + k.delta_ac * delta);
        TwoPhotonCoefficients { big_delta, delta_ac_small, alpha, beta, delta, zeta, discriminant }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PumpBranch {
    Plus,
    Minus,
}

impl PumpBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            PumpBranch::Plus => "plus",
            PumpBranch::Minus => "minus",
        }
    }
}

/// Pump that cancels the three-photon amplitude C₃g:
/// `[Δ ± √(Δ² − 4βΩ²(g²ζ + Δ_ac δ))] / β`, principal square root.
pub fn optimal_pump_two(params: &SystemParams, direction: DriveDirection, branch: PumpBranch) -> Result<PumpSetting> {
    let c = TwoPhotonCoefficients::new(params, direction);
    if c.beta.norm() <= SINGULAR_TOL {
        return Err(Error::SingularDenominator { what: "two-photon pump β", magnitude: c.beta.norm() });
    }
    let root = c.discriminant.sqrt();
    let num = match branch {
        PumpBranch::Plus => c.big_delta + root,
        PumpBranch::Minus => c.big_delta - root,
    };
    Ok(PumpSetting::from_complex(num / c.beta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSelection {
    pub branch: PumpBranch,
    pub pump: PumpSetting,
    /// The chosen |Ω_p| is not below the drive Ω, so the weak-pump premise fails.
    pub exceeds_drive: bool,
}

/// The two-photon branch with the smaller |Ω_p|; ties go to `Minus`.
pub fn select_branch(params: &SystemParams, direction: DriveDirection) -> Result<BranchSelection> {
    let plus = optimal_pump_two(params, direction, PumpBranch::Plus)?;
    let minus = optimal_pump_two(params, direction, PumpBranch::Minus)?;
    let (branch, pump) = smaller_branch(plus, minus);
    let drive = crate::model::effective_drive(params, direction);
    Ok(BranchSelection { branch, pump, exceeds_drive: pump.omega_p >= drive })
}

fn smaller_branch(plus: PumpSetting, minus: PumpSetting) -> (PumpBranch, PumpSetting) {
    if plus.omega_p < minus.omega_p {
        (PumpBranch::Plus, plus)
    } else {
        (PumpBranch::Minus, minus)
    }
}

/// η = −10 log₁₀(g2_forward / g2_backward), in dB.
pub fn nonreciprocal_ratio(g2_forward: f64, g2_backward: f64) -> Result<f64> {
    if !(g2_forward > 0.0) || !(g2_backward > 0.0) {
        return Err(Error::Domain("nonreciprocal ratio needs positive correlations"));
    }
    Ok(-10.0 * (g2_forward / g2_backward).log10())
}

/// Re[g² / Δ̃_a], the cavity detuning where the single-photon dip is expected.
pub fn single_photon_resonance(params: &SystemParams) -> f64 {
    (params.g * params.g / params.atom_complex_detuning()).re
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockadeKind {
    SinglePhoton,
    TwoPhoton,
    /// Neither criterion holds.
    None,
}

impl BlockadeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BlockadeKind::SinglePhoton => "single",
            BlockadeKind::TwoPhoton => "two",
            BlockadeKind::None => "none",
        }
    }
}

/// Single-photon iff g2 < 1; two-photon iff g3 < 1 and g2 ≥ 1.
pub fn classify_blockade(g2: f64, g3: f64) -> BlockadeKind {
    if g2 < 1.0 {
        BlockadeKind::SinglePhoton
    } else if g3 < 1.0 && g2 >= 1.0 {
        BlockadeKind::TwoPhoton
    } else {
        BlockadeKind::None
    }
}

/// `meanⁿ e^{−mean} / n!` for n = 0..len.
pub fn poisson_distribution(mean: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut p = (-mean).exp();
    for n in 0..len {
        if n > 0 {
            p *= mean / n as f64;
        }
        out.push(p);
    }
    out
}

/// `(P_n − 𝒫_n) / 𝒫_n` against the Poisson law with the same mean.
/// Entries where 𝒫_n < [`POISSON_FLOOR`] are `None`.
pub fn poisson_deviation(distribution: &[f64], mean: f64) -> Result<Vec<Option<f64>>> {
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(Error::Domain("Poisson deviation needs a positive mean"));
    }
    Ok(poisson_distribution(mean, distribution.len())
        .iter()
        .zip(distribution)
        .map(|(&reference, &p)| if reference < POISSON_FLOOR { None } else { Some((p - reference) / reference) })
        .collect())
}

/// P_n ≥ 𝒫_n and P_{n+1} < 𝒫_{n+1}. False when n + 1 is beyond the distribution.
pub fn n_photon_blockade(distribution: &[f64], mean: f64, n: usize) -> bool {
    if n + 1 >= distribution.len() {
        return false;
    }
    let reference = poisson_distribution(mean, n + 2);
    distribution[n] >= reference[n] && distribution[n + 1] < reference[n + 1]
}
