use serde::Serialize;

/// One grid point evaluated by one solver. Field order is the CSV column order.
///
/// `_f`/`_b` columns belong to the forward/backward drive and are empty when
/// that direction was not requested or failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    /// Row-major grid index; the two solvers of one point share it.
    pub index: usize,
    pub delta_c: f64,
    pub delta_a: f64,
    pub g: f64,
    pub gamma: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub b_in: f64,
    /// Effective drive √κ₁ b_in.
    pub omega_f: f64,
    /// Effective drive √κ₂ b_in.
    pub omega_b: f64,
    /// Pump amplitude used, after any optimal-pump computation.
    pub omega_p: Option<f64>,
    pub theta_p: Option<f64>,
    pub g2_f: Option<f64>,
    pub g2_b: Option<f64>,
    pub g3_f: Option<f64>,
    pub g3_b: Option<f64>,
    pub n_photon_f: Option<f64>,
    pub n_photon_b: Option<f64>,
    /// −10 log₁₀(g2_f/g2_b) in dB.
    pub eta_db: Option<f64>,
    pub class_f: Option<&'static str>,
    pub class_b: Option<&'static str>,
    pub solver: &'static str,
    pub converged: bool,
    /// `;`-separated warnings.
    pub flags: String,
    pub error: Option<String>,
}

/// The CSV header, frozen.
pub const CSV_HEADER: [&str; 25] = [
    "index",
    "delta_c",
    "delta_a",
    "g",
    "gamma",
    "kappa1",
    "kappa2",
    "b_in",
    "omega_f",
    "omega_b",
    "omega_p",
    "theta_p",
    "g2_f",
    "g2_b",
    "g3_f",
    "g3_b",
    "n_photon_f",
    "n_photon_b",
    "eta_db",
    "class_f",
    "class_b",
    "solver",
    "converged",
    "flags",
    "error",
];

pub mod flag {
    /// |Ω_p| changed by more than 5× from the previous point on the inner axis.
    pub const BRANCH_JUMP: &str = "branch_jump";
    /// The chosen two-photon pump is not weaker than the drive.
    pub const PUMP_EXCEEDS_DRIVE: &str = "pump_exceeds_drive";
    /// Amplitude normalization outside 1 ± 10⁻³; the weak-drive closure is doubtful.
    pub const NORMALIZATION: &str = "normalization";
    /// The steady state violates a density-matrix invariant tolerance.
    pub const INVARIANTS: &str = "invariants";
}

impl ResultRecord {
    pub fn add_flag(&mut self, flag: &str) {
        if self.flags.split(';').any(|f| f == flag) {
            return;
        }
        if !self.flags.is_empty() {
            self.flags.push(';');
        }
        self.flags.push_str(flag);
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.split(';').any(|f| f == flag)
    }
}
