//! Physical parameters, drive-direction asymmetry and Hamiltonians.
//!
//! The total cavity decay κ is the unit of every rate and detuning, so
//! `Δ̃_c = Δ_c − i/2`. The drive and pump frequencies are locked at
//! `ω_d = ω_p / 2`, which is what makes the rotating-frame Hamiltonian
//! time independent.

use alloc::format;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 methods are inherent when std is linked
use num_traits::Float;

use crate::hilbert::{annihilation, excited_projector, number_operator, sigma_minus, FockQubitSpace, Operator};
use crate::{Error, Result};

const KAPPA_SUM_TOL: f64 = 1e-9;

/// Model parameters, all dimensionless (rates in κ, `b_in` in √κ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Left-mirror decay κ₁.
    pub kappa1: f64,
    /// Right-mirror decay κ₂.
    pub kappa2: f64,
    /// Extra intracavity loss. Zero unless the caller opted in through
    /// [`SystemParams::rescaled_to_total_decay`].
    pub kappa_loss: f64,
    /// Atomic damping γ.
    pub gamma: f64,
    /// Atom–cavity coupling g.
    pub g: f64,
    /// Cavity detuning Δ_c = ω_c − ω_d.
    pub delta_c: f64,
    /// Atomic detuning Δ_a = ω_a − ω_d.
    pub delta_a: f64,
    /// Drive amplitude b_in.
    pub b_in: f64,
    /// Pump amplitude Ω_p.
    pub omega_p: f64,
    /// Pump phase θ_p relative to the drive (radians).
    pub theta_p: f64,
}

impl SystemParams {
    /// The asymmetric-cavity working point: κ₁ = 0.9, κ₂ = 0.1, γ = 0.7,
    /// g = 1, Δ_a = 0.6, b_in = 0.02, no pump, Δ_c = 1.
    pub const fn reference() -> Self {
        SystemParams {
            kappa1: 0.9,
            kappa2: 0.1,
            kappa_loss: 0.0,
            gamma: 0.7,
            g: 1.0,
            delta_c: 1.0,
            delta_a: 0.6,
            b_in: 0.02,
            omega_p: 0.0,
            theta_p: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("kappa_loss", self.kappa_loss),
            ("gamma", self.gamma),
            ("g", self.g),
            ("b_in", self.b_in),
            ("omega_p", self.omega_p),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be finite and non-negative, got {value}")));
            }
        }
        for (name, value) in [("delta_c", self.delta_c), ("delta_a", self.delta_a), ("theta_p", self.theta_p)] {
            if !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {value}")));
            }
        }
        let total = self.kappa1 + self.kappa2 + self.kappa_loss;
        if (total - 1.0).abs() > KAPPA_SUM_TOL {
            return Err(Error::InvalidParams(format!(
                "kappa1 + kappa2 + kappa_loss must equal 1 (the unit of rate), got {total}"
            )));
        }
        Ok(())
    }

    /// Re-expresses parameters given in an arbitrary rate unit in units of
    /// the total decay κ = κ₁ + κ₂ + κ_loss. This is the only supported way
    /// to include a non-zero `kappa_loss`.
    pub fn rescaled_to_total_decay(self) -> Result<Self> {
        let kappa = self.kappa1 + self.kappa2 + self.kappa_loss;
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::InvalidParams(format!("total cavity decay must be positive, got {kappa}")));
        }
        Ok(SystemParams {
            kappa1: self.kappa1 / kappa,
            kappa2: self.kappa2 / kappa,
            kappa_loss: self.kappa_loss / kappa,
            gamma: self.gamma / kappa,
            g: self.g / kappa,
            delta_c: self.delta_c / kappa,
            delta_a: self.delta_a / kappa,
            b_in: self.b_in / kappa.sqrt(),
            omega_p: self.omega_p / kappa,
            theta_p: self.theta_p,
        })
    }

    /// The same system with the two mirrors exchanged.
    pub fn swapped_mirrors(self) -> Self {
        SystemParams { kappa1: self.kappa2, kappa2: self.kappa1, ..self }
    }

    pub fn with_pump(self, omega_p: f64, theta_p: f64) -> Self {
        SystemParams { omega_p, theta_p, ..self }
    }

    pub fn with_delta_c(self, delta_c: f64) -> Self {
        SystemParams { delta_c, ..self }
    }

    /// Ω_p e^{−iθ_p}.
    pub fn pump_complex(&self) -> Complex64 {
        Complex64::from_polar(self.omega_p, -self.theta_p)
    }

    /// Δ̃_c = Δ_c − iκ/2.
    pub fn cavity_complex_detuning(&self) -> Complex64 {
        Complex64::new(self.delta_c, -0.5)
    }

    /// Δ̃_a = Δ_a − iγ/2.
    pub fn atom_complex_detuning(&self) -> Complex64 {
        Complex64::new(self.delta_a, -0.5 * self.gamma)
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::reference()
    }
}

/// Which mirror the coherent drive enters through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DriveDirection {
    /// Left input (κ₁), right output (κ₂).
    Forward,
    /// Right input (κ₂), left output (κ₁).
    Backward,
}

impl DriveDirection {
    pub const BOTH: [DriveDirection; 2] = [DriveDirection::Forward, DriveDirection::Backward];

    pub fn reversed(self) -> Self {
        match self {
            DriveDirection::Forward => DriveDirection::Backward,
            DriveDirection::Backward => DriveDirection::Forward,
        }
    }

    pub fn input_decay(self, params: &SystemParams) -> f64 {
        match self {
            DriveDirection::Forward => params.kappa1,
            DriveDirection::Backward => params.kappa2,
        }
    }

    pub fn output_decay(self, params: &SystemParams) -> f64 {
        match self {
            DriveDirection::Forward => params.kappa2,
            DriveDirection::Backward => params.kappa1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DriveDirection::Forward => "forward",
            DriveDirection::Backward => "backward",
        }
    }
}

/// Ω = √κᵢ · b_in for the input mirror i.
pub fn effective_drive(params: &SystemParams, direction: DriveDirection) -> f64 {
    direction.input_decay(params).sqrt() * params.b_in
}

pub fn output_decay(params: &SystemParams, direction: DriveDirection) -> f64 {
    direction.output_decay(params)
}

fn assemble(
    params: &SystemParams,
    direction: DriveDirection,
    space: FockQubitSpace,
    cavity_detuning: Complex64,
    atom_detuning: Complex64,
    label: &str,
) -> Operator {
    let a = annihilation(space);
    let ad = a.adjoint();
    let sm = sigma_minus(space);
    let sp = sm.adjoint();
    let one = Complex64::new(1.0, 0.0);
    let omega = Complex64::new(effective_drive(params, direction), 0.0);
    let pump = params.pump_complex();

    // Shapes all come from `space`, so the Result-returning algebra cannot fail here.
    let exchange = a.multiply(&sp).and_then(|x| x.add_scaled(one, &ad.multiply(&sm)?)).expect("same space");
    let drive = ad.add_scaled(one, &a).expect("same space");
    let pair_creation = ad.multiply(&ad).expect("same space");
    let pair_annihilation = a.multiply(&a).expect("same space");

    let h = number_operator(space)
        .scale(cavity_detuning)
        .add_scaled(atom_detuning, &excited_projector(space))
        .and_then(|h| h.add_scaled(Complex64::new(params.g, 0.0), &exchange))
        .and_then(|h| h.add_scaled(omega, &drive))
        .and_then(|h| h.add_scaled(pump * 0.5, &pair_creation))
        .and_then(|h| h.add_scaled(pump.conj() * 0.5, &pair_annihilation))
        .expect("same space");
    h.with_label(label)
}

/// Rotating-frame Hamiltonian
/// `Δ_c a†a + Δ_a σ₊σ₋ + g(aσ₊ + a†σ₋) + Ω(a† + a) + (Ω_p/2)(e^{−iθ_p} a†² + e^{iθ_p} a²)`.
pub fn hamiltonian(params: &SystemParams, direction: DriveDirection, space: FockQubitSpace) -> Operator {
    assemble(
        params,
        direction,
        space,
        Complex64::new(params.delta_c, 0.0),
        Complex64::new(params.delta_a, 0.0),
        "H",
    )
}

/// [`hamiltonian`] with the detunings replaced by Δ̃_c and Δ̃_a.
pub fn non_hermitian_hamiltonian(params: &SystemParams, direction: DriveDirection, space: FockQubitSpace) -> Operator {
    assemble(params, direction, space, params.cavity_complex_detuning(), params.atom_complex_detuning(), "H_non")
}

const PLANCK: f64 = 6.626_070_15e-34;
const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// SI reporting numbers for a dimensionless working point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalUnits {
    /// Drive power ħω_d Ω²/κᵢ (W).
    pub drive_power_w: f64,
    /// Effective pump power ħω_p Ω_p²/(4χ) with ω_p = 2ω_d (W).
    pub pump_power_w: f64,
    /// Photon flux through the output mirror, κ_out ⟨a†a⟩ (1/s).
    pub emission_rate_hz: f64,
    /// Photon flux through all loss channels, κ ⟨a†a⟩ (1/s).
    pub total_emission_rate_hz: f64,
}

/// Converts to SI using `kappa_hz` as the rate unit (it multiplies the
/// dimensionless rates directly, no factor 2π is inserted), the drive
/// wavelength, the nonlinear coupling `chi_hz` in the same unit, and a
/// caller-supplied intracavity photon number.
pub fn physical_units(
    params: &SystemParams,
    direction: DriveDirection,
    kappa_hz: f64,
    wavelength_nm: f64,
    chi_hz: f64,
    mean_photons: f64,
) -> PhysicalUnits {
    let photon_energy = PLANCK * SPEED_OF_LIGHT / (wavelength_nm * 1e-9);
    let omega = effective_drive(params, direction);
    let input = direction.input_decay(params);
    let drive_power_w = if omega == 0.0 { 0.0 } else { photon_energy * kappa_hz * omega * omega / input };
    let pump_si = params.omega_p * kappa_hz;
    let pump_power_w = if pump_si == 0.0 { 0.0 } else { 2.0 * photon_energy * pump_si * pump_si / (4.0 * chi_hz) };
    PhysicalUnits {
        drive_power_w,
        pump_power_w,
        emission_rate_hz: direction.output_decay(params) * mean_photons * kappa_hz,
        total_emission_rate_hz: mean_photons * kappa_hz,
    }
}
