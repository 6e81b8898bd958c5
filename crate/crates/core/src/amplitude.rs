//! Weak-drive probability-amplitude method.
//!
//! The pure state is truncated to
//! `|ψ⟩ = Σ_{n≤3} C_ng |n,g⟩ + Σ_{m≤2} C_me |m,e⟩` and evolved under the
//! non-Hermitian Hamiltonian with the closure `C_0g ≃ 1`. The six remaining
//! amplitudes obey a closed linear system whose steady state is available in
//! closed form ([`steady_amplitudes`]) and by direct integration
//! ([`integrate_amplitudes`]).

use num_complex::Complex64;
#[allow(unused_imports)] // f64 methods are inherent when std is linked
use num_traits::Float;
use num_traits::Zero;

use crate::model::{effective_drive, DriveDirection, SystemParams};
use crate::{Error, Result, I};

/// Denominators below this modulus are treated as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Default tolerance on |𝒩 − 1| for a weak-drive steady state.
pub const DEFAULT_NORMALIZATION_TOL: f64 = 1e-3;

const CORRELATION_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeState {
    pub c0g: Complex64,
    pub c1g: Complex64,
    pub c2g: Complex64,
    pub c3g: Complex64,
    pub c0e: Complex64,
    pub c1e: Complex64,
    pub c2e: Complex64,
}

impl AmplitudeState {
    /// `C_0g = 1`, everything else zero.
    pub fn vacuum() -> Self {
        let z = Complex64::zero();
        AmplitudeState { c0g: Complex64::new(1.0, 0.0), c1g: z, c2g: z, c3g: z, c0e: z, c1e: z, c2e: z }
    }

    /// Amplitudes in the order `[C0g, C1g, C2g, C3g, C0e, C1e, C2e]`.
    pub fn to_array(&self) -> [Complex64; 7] {
        [self.c0g, self.c1g, self.c2g, self.c3g, self.c0e, self.c1e, self.c2e]
    }

    pub fn from_array(c: [Complex64; 7]) -> Self {
        AmplitudeState { c0g: c[0], c1g: c[1], c2g: c[2], c3g: c[3], c0e: c[4], c1e: c[5], c2e: c[6] }
    }

    /// 𝒩 = Σ|C_ng|² + Σ|C_me|².
    pub fn normalization(&self) -> f64 {
        self.to_array().iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.normalization() - 1.0).abs() <= tol
    }
}

/// ⟨a†a⟩ over the truncated state: |C1g|² + |C1e|² + 2(|C2g|² + |C2e|²) + 3|C3g|².
pub fn photon_population_amplitudes(state: &AmplitudeState) -> f64 {
    state.c1g.norm_sqr()
        + state.c1e.norm_sqr()
        + 2.0 * (state.c2g.norm_sqr() + state.c2e.norm_sqr())
        + 3.0 * state.c3g.norm_sqr()
}

/// Leading-order population |C1g|².
pub fn leading_population(state: &AmplitudeState) -> f64 {
    state.c1g.norm_sqr()
}

/// Equal-time g⁽²⁾(0) from the full truncated expression
/// `(2|C2g|² + 2|C2e|² + 6|C3g|²) / (⟨a†a⟩)²`.
pub fn g2_from_amplitudes(state: &AmplitudeState) -> Result<f64> {
    let population = photon_population_amplitudes(state);
    let denominator = population * population;
    if !(denominator > CORRELATION_FLOOR) {
        return Err(Error::UndefinedCorrelation { population });
    }
    let numerator = 2.0 * state.c2g.norm_sqr() + 2.0 * state.c2e.norm_sqr() + 6.0 * state.c3g.norm_sqr();
    Ok(numerator / denominator)
}

/// Leading-order shorthand `2|C2g|²/|C1g|⁴`.
pub fn g2_approx(state: &AmplitudeState) -> Result<f64> {
    let p1 = state.c1g.norm_sqr();
    if !(p1 * p1 > CORRELATION_FLOOR) {
        return Err(Error::UndefinedCorrelation { population: p1 });
    }
    Ok(2.0 * state.c2g.norm_sqr() / (p1 * p1))
}

/// g⁽³⁾(0) = ⟨a†³a³⟩/⟨a†a⟩³ = 6|C3g|²/⟨a†a⟩³ on the truncated state.
pub fn g3_from_amplitudes(state: &AmplitudeState) -> Result<f64> {
    let population = photon_population_amplitudes(state);
    let denominator = population * population * population;
    if !(denominator > CORRELATION_FLOOR) {
        return Err(Error::UndefinedCorrelation { population });
    }
    Ok(6.0 * state.c3g.norm_sqr() / denominator)
}

/// Scalars shared by the closed-form amplitudes. Rebuilt for every call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeCoefficients {
    /// Δ̃_c
    pub cavity: Complex64,
    /// Δ̃_a
    pub atom: Complex64,
    /// Ω
    pub drive: f64,
    /// Ω_p e^{−iθ_p}
    pub pump: Complex64,
    /// Δ_ac = Δ̃_a(Δ̃_a + Δ̃_c) − Ω²
    pub delta_ac: Complex64,
    /// Δ'_ac = Δ̃_c(2Δ̃_a + Δ̃_c) + 2Ω²
    pub delta_ac_prime: Complex64,
    pub c31: Complex64,
    pub c32: Complex64,
    pub c21: Complex64,
    pub c22: Complex64,
    pub c23: Complex64,
    /// g²[2Ω² + P(3Δ̃_a + 5Δ̃_c + P)], the form consistent with the amplitude ODEs.
    pub c24: Complex64,
    /// g²[2Ω² + P(8Δ̃_c + P)], the literal printed variant; diagnostics only.
    pub c24_verbatim: Complex64,
}

impl AmplitudeCoefficients {
    pub fn new(params: &SystemParams, direction: DriveDirection) -> Self {
        let dc = params.cavity_complex_detuning();
        let da = params.atom_complex_detuning();
        let omega = effective_drive(params, direction);
        let o2 = omega * omega;
        let p = params.pump_complex();
        let g2 = params.g * params.g;

        let delta_ac = da * (da + dc) - o2;
        let delta_ac_prime = dc * (2.0 * da + dc) + 2.0 * o2;

        let c31 = g2 * (2.0 * o2 * (3.0 * da + 4.0 * dc) + 3.0 * da * (da + dc) * p - 4.0 * o2 * p
            + 2.0 * (da + 2.0 * dc) * p * p);
        let c32 = (da + 2.0 * dc) * (da * (da + dc) - o2) * (2.0 * o2 + p * (p - 3.0 * dc));
        let c21 = Complex64::from(2.0 * o2 * o2) - 2.0 * (da + dc) * (da + 2.0 * dc) * o2;
        let c22 = p * dc * ((3.0 * da + dc) * (da + 2.0 * dc) + o2);
        let c23 = p * p * (da * da + 2.0 * da * dc + 2.0 * dc * dc - o2);
        let c24 = g2 * (2.0 * o2 + p * (3.0 * da + 5.0 * dc + p));
        let c24_verbatim = g2 * (2.0 * o2 + p * (3.0 * dc + 5.0 * dc + p));

        AmplitudeCoefficients {
            cavity: dc,
            atom: da,
            drive: omega,
            pump: p,
            delta_ac,
            delta_ac_prime,
            c31,
            c32,
            c21,
            c22,
            c23,
            c24,
            c24_verbatim,
        }
    }

    /// g⁴ + (Δ̃_c² − Ω²)Δ_ac − g²Δ'_ac, shared by all closed forms.
    pub fn common_denominator(&self, g: f64) -> Complex64 {
        let g2 = g * g;
        g2 * g2 + (self.cavity * self.cavity - self.drive * self.drive) * self.delta_ac - g2 * self.delta_ac_prime
    }

    /// g² − Δ̃_c(Δ̃_a + 2Δ̃_c), the extra factor in the three-excitation amplitudes.
    pub fn three_excitation_factor(&self, g: f64) -> Complex64 {
        g * g - self.cavity * (self.atom + 2.0 * self.cavity)
    }
}

fn check_denominators(coeffs: &AmplitudeCoefficients, g: f64) -> Result<(Complex64, Complex64)> {
    let den = coeffs.common_denominator(g);
    if den.norm() < SINGULAR_TOL {
        return Err(Error::SingularDenominator { what: "amplitude denominator", magnitude: den.norm() });
    }
    let extra = coeffs.three_excitation_factor(g);
    if extra.norm() < SINGULAR_TOL {
        return Err(Error::SingularDenominator { what: "three-excitation denominator", magnitude: extra.norm() });
    }
    Ok((den, extra))
}

/// Closed-form steady amplitudes with `C_0g = 1`.
pub fn steady_amplitudes(params: &SystemParams, direction: DriveDirection) -> Result<AmplitudeState> {
    let k = AmplitudeCoefficients::new(params, direction);
    let (den, extra) = check_denominators(&k, params.g)?;
    let g = params.g;
    let g2 = g * g;
    let (dc, da, omega, o2, p) = (k.cavity, k.atom, k.drive, k.drive * k.drive, k.pump);
    let sqrt2 = 2f64.sqrt();
    let sqrt6 = 6f64.sqrt();

    let c1g = (2.0 * omega * (g2 * da - dc * k.delta_ac) + omega * p * (g2 + k.delta_ac)) / (2.0 * den);
    let c2g = (2.0 * o2 * (g2 + k.delta_ac) + p * (g2 * (da + dc) - dc * k.delta_ac)) / (2.0 * sqrt2 * den);
    let c0e = g * omega * (2.0 * (dc * (da + dc) + o2 - g2) - (da + 2.0 * dc) * p) / (2.0 * den);
    let c1e = (g * (da * dc + o2 - g2) * p - 2.0 * g * o2 * (da + dc)) / (2.0 * den);
    let c3g = omega * (4.0 * g2 * g2 * p + k.c31 + k.c32) / (2.0 * sqrt6 * extra * den);
    let c2e = g * omega * (k.c21 + k.c22 - k.c23 - k.c24) / (2.0 * sqrt2 * extra * den);

    Ok(AmplitudeState { c0g: Complex64::new(1.0, 0.0), c1g, c2g, c3g, c0e, c1e, c2e })
}

/// C2e evaluated with the literal printed c24 coefficient. It disagrees
/// with the long-time limit of the amplitude equations whenever the pump is
/// on and Δ̃_a ≠ Δ̃_c; kept only to quantify that discrepancy.
pub fn steady_c2e_verbatim(params: &SystemParams, direction: DriveDirection) -> Result<Complex64> {
    let k = AmplitudeCoefficients::new(params, direction);
    let (den, extra) = check_denominators(&k, params.g)?;
    let g = params.g;
    Ok(g * k.drive * (k.c21 + k.c22 - k.c23 - k.c24_verbatim) / (2.0 * 2f64.sqrt() * extra * den))
}

/// Step-size bound `0.1 / max(1, |Δ̃_c|, |Δ̃_a|, g)`.
pub fn max_stable_step(params: &SystemParams) -> f64 {
    let scale = 1f64
        .max(params.cavity_complex_detuning().norm())
        .max(params.atom_complex_detuning().norm())
        .max(params.g);
    0.1 / scale
}

struct AmplitudeOde {
    dc: Complex64,
    da: Complex64,
    g: f64,
    omega: f64,
    pump: Complex64,
}

impl AmplitudeOde {
    // dC/dt = −i (H_non C) restricted to the truncated basis, with C0g held fixed.
    fn derivative(&self, c: &[Complex64; 7]) -> [Complex64; 7] {
        let [c0g, c1g, c2g, c3g, c0e, c1e, c2e] = *c;
        let (dc, da, g, om, p) = (self.dc, self.da, self.g, self.omega, self.pump);
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        let s6 = 6f64.sqrt();
        let rhs = [
            Complex64::zero(),
            dc * c1g + s2 * om * c2g + g * c0e + om * c0g,
            s2 * om * c1g + 2.0 * dc * c2g + s2 * g * c1e + (s2 / 2.0) * p * c0g,
            (s6 / 2.0) * p * c1g + s3 * om * c2g + 3.0 * dc * c3g + s3 * g * c2e,
            g * c1g + da * c0e + om * c1e,
            s2 * g * c2g + om * c0e + (dc + da) * c1e,
            s3 * g * c3g + (s2 / 2.0) * p * c0e + s2 * om * c1e + (2.0 * dc + da) * c2e,
        ];
        rhs.map(|r| -I * r)
    }
}

/// Integrates the amplitude equations from the vacuum with fixed-step RK4.
///
/// The step actually used is `t_final / ceil(t_final / dt)`.
pub fn integrate_amplitudes(
    params: &SystemParams,
    direction: DriveDirection,
    t_final: f64,
    dt: f64,
) -> Result<AmplitudeState> {
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::Domain("t_final must be finite and non-negative"));
    }
    let limit = max_stable_step(params);
    if !(dt > 0.0) || dt > limit {
        return Err(Error::StepTooLarge { dt, limit });
    }
    let ode = AmplitudeOde {
        dc: params.cavity_complex_detuning(),
        da: params.atom_complex_detuning(),
        g: params.g,
        omega: effective_drive(params, direction),
        pump: params.pump_complex(),
    };
    let steps = (t_final / dt).ceil() as usize;
    if steps == 0 {
        return Ok(AmplitudeState::vacuum());
    }
    let h = t_final / steps as f64;
    let mut c = AmplitudeState::vacuum().to_array();
    let axpy = |base: &[Complex64; 7], k: &[Complex64; 7], s: f64| -> [Complex64; 7] {
        core::array::from_fn(|i| base[i] + k[i] * s)
    };
    for _ in 0..steps {
        let k1 = ode.derivative(&c);
        let k2 = ode.derivative(&axpy(&c, &k1, h / 2.0));
        let k3 = ode.derivative(&axpy(&c, &k2, h / 2.0));
        let k4 = ode.derivative(&axpy(&c, &k3, h));
        for i in 0..7 {
            c[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
        }
    }
    Ok(AmplitudeState::from_array(c))
}
