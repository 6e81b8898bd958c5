//! Sweep configuration files.
//!
//! The format is TOML restricted to flat dotted keys:
//!
//! ```toml
//! schema_version = 1
//! name = "example"            # optional, defaults to "sweep"
//! direction = "both"          # forward | backward | both (default both)
//! solver = "both"             # amplitudes | lindblad | both (default both)
//! n_max = 10                  # photon truncation for the master equation (default 10)
//!
//! base.kappa1 = 0.9           # every base.* key is optional; defaults are
//! base.g = 1.0                # kappa1 = 0.9, gamma = 0.7, g = 1, delta_c = 1,
//!                             # delta_a = 0.6, b_in = 0.02, omega_p = theta_p = 0
//!
//! pump.mode = "optimal_single"   # fixed | optimal_single | optimal_two (default fixed)
//! pump.direction = "forward"     # direction whose amplitudes the pump cancels
//! pump.branch = "auto"           # optimal_two only: plus | minus | auto
//! pump.anchor_delta_c = "resonance"  # optional: number or "resonance"
//!
//! axis1.param = "delta_c"     # outer axis
//! axis1.min = 0.5
//! axis1.max = 2.5
//! axis1.count = 201
//! # axis2.* optional, same keys, inner (fastest-varying) axis
//! ```
//!
//! `kappa2` is always `1 − kappa1`. With an optimal pump mode the base
//! `omega_p`/`theta_p` are ignored; an `omega_p` or `theta_p` axis replaces
//! that component of the computed optimum. Without an anchor the optimum is
//! recomputed at every grid point; with one it is computed once per point at
//! `delta_c = anchor` (or at the resonance estimate for that point).

use std::fmt;
use std::path::Path;

use blockade_core::hilbert::{DEFAULT_N_MAX, MIN_N_MAX};
use blockade_core::model::{DriveDirection, SystemParams};
use serde::Deserialize;

use crate::error::{Result, SimError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionSel {
    Forward,
    Backward,
    Both,
}

impl DirectionSel {
    pub fn directions(self) -> &'static [DriveDirection] {
        match self {
            DirectionSel::Forward => &[DriveDirection::Forward],
            DirectionSel::Backward => &[DriveDirection::Backward],
            DirectionSel::Both => &DriveDirection::BOTH,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverSel {
    Amplitudes,
    Lindblad,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Amplitudes,
    Lindblad,
}

impl Solver {
    pub fn as_str(self) -> &'static str {
        match self {
            Solver::Amplitudes => "amplitudes",
            Solver::Lindblad => "lindblad",
        }
    }
}

impl SolverSel {
    pub fn solvers(self) -> &'static [Solver] {
        match self {
            SolverSel::Amplitudes => &[Solver::Amplitudes],
            SolverSel::Lindblad => &[Solver::Lindblad],
            SolverSel::Both => &[Solver::Amplitudes, Solver::Lindblad],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    DeltaC,
    DeltaA,
    G,
    Gamma,
    Kappa1,
    BIn,
    OmegaP,
    ThetaP,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::DeltaC => "delta_c",
            SweepParam::DeltaA => "delta_a",
            SweepParam::G => "g",
            SweepParam::Gamma => "gamma",
            SweepParam::Kappa1 => "kappa1",
            SweepParam::BIn => "b_in",
            SweepParam::OmegaP => "omega_p",
            SweepParam::ThetaP => "theta_p",
        }
    }

    /// Writes `value` into `params`; `kappa1` also sets `kappa2 = 1 − kappa1 − kappa_loss`.
    pub fn set(self, params: &mut SystemParams, value: f64) {
        match self {
            SweepParam::DeltaC => params.delta_c = value,
            SweepParam::DeltaA => params.delta_a = value,
            SweepParam::G => params.g = value,
            SweepParam::Gamma => params.gamma = value,
            SweepParam::Kappa1 => {
                params.kappa1 = value;
                params.kappa2 = 1.0 - value - params.kappa_loss;
            }
            SweepParam::BIn => params.b_in = value,
            SweepParam::OmegaP => params.omega_p = value,
            SweepParam::ThetaP => params.theta_p = value,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    /// `count` evenly spaced values, endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.max } else { self.min + (self.max - self.min) * i as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anchor {
    /// Re[g²/Δ̃_a] of the point being evaluated.
    Resonance,
    DeltaC(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchSel {
    Plus,
    Minus,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PumpMode {
    /// Base `omega_p`/`theta_p` (or their axes) are used as given.
    Fixed,
    OptimalSingle { direction: DriveDirection, anchor: Option<Anchor> },
    OptimalTwo { direction: DriveDirection, branch: BranchSel, anchor: Option<Anchor> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub name: String,
    pub base: SystemParams,
    pub direction: DirectionSel,
    /// Outer axis first.
    pub axes: Vec<Axis>,
    pub pump: PumpMode,
    pub solver: SolverSel,
    pub n_max: usize,
}

impl SweepConfig {
    pub fn grid_len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn has_axis(&self, param: SweepParam) -> bool {
        self.axes.iter().any(|a| a.param == param)
    }

    /// Every invariant violation, empty when the config is usable.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.axes.is_empty() || self.axes.len() > 2 {
            out.push(format!("expected 1 or 2 axes, got {}", self.axes.len()));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            out.push(format!("axis `{}` appears twice", self.axes[0].param));
        }
        for (i, axis) in self.axes.iter().enumerate() {
            let key = format!("axis{}", i + 1);
            if axis.count < 2 {
                out.push(format!("{key}.count must be at least 2, got {}", axis.count));
            }
            if !axis.min.is_finite() || !axis.max.is_finite() || !(axis.min < axis.max) {
                out.push(format!("{key} needs finite min < max, got [{}, {}]", axis.min, axis.max));
            }
            let nonnegative =
                matches!(axis.param, SweepParam::G | SweepParam::Gamma | SweepParam::BIn | SweepParam::OmegaP);
            if nonnegative && axis.min < 0.0 {
                out.push(format!("{key}: {} cannot be negative", axis.param));
            }
            if axis.param == SweepParam::Kappa1 && (axis.min < 0.0 || axis.max > 1.0 - self.base.kappa_loss) {
                out.push(format!("{key}: kappa1 must stay within [0, 1]"));
            }
        }
        if let Err(e) = self.base.validate() {
            out.push(format!("base parameters: {e}"));
        }
        if self.n_max < MIN_N_MAX {
            out.push(format!("n_max must be at least {MIN_N_MAX}, got {}", self.n_max));
        }
        if let PumpMode::OptimalSingle { anchor: Some(Anchor::DeltaC(x)), .. }
        | PumpMode::OptimalTwo { anchor: Some(Anchor::DeltaC(x)), .. } = self.pump
        {
            if !x.is_finite() {
                out.push("pump.anchor_delta_c must be finite".into());
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(SimError::Validation(v))
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBase {
    kappa1: Option<f64>,
    gamma: Option<f64>,
    g: Option<f64>,
    delta_c: Option<f64>,
    delta_a: Option<f64>,
    b_in: Option<f64>,
    omega_p: Option<f64>,
    theta_p: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawAnchor {
    Value(f64),
    Keyword(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPump {
    mode: Option<String>,
    direction: Option<String>,
    branch: Option<String>,
    anchor_delta_c: Option<RawAnchor>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    param: SweepParam,
    min: f64,
    max: f64,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: u32,
    name: Option<String>,
    direction: Option<DirectionSel>,
    solver: Option<SolverSel>,
    n_max: Option<usize>,
    #[serde(default)]
    base: RawBase,
    #[serde(default)]
    pump: RawPump,
    axis1: RawAxis,
    axis2: Option<RawAxis>,
}

fn parse_direction(s: &str, errors: &mut Vec<String>) -> DriveDirection {
    match s {
        "forward" => DriveDirection::Forward,
        "backward" => DriveDirection::Backward,
        other => {
            errors.push(format!("pump.direction must be forward or backward, got `{other}`"));
            DriveDirection::Forward
        }
    }
}

fn build_pump(raw: RawPump, errors: &mut Vec<String>) -> PumpMode {
    let anchor = match raw.anchor_delta_c {
        None => None,
        Some(RawAnchor::Value(x)) => Some(Anchor::DeltaC(x)),
        Some(RawAnchor::Keyword(k)) if k == "resonance" => Some(Anchor::Resonance),
        Some(RawAnchor::Keyword(k)) => {
            errors.push(format!("pump.anchor_delta_c must be a number or \"resonance\", got `{k}`"));
            None
        }
    };
    let mode = raw.mode.as_deref().unwrap_or("fixed");
    let direction = || raw.direction.as_deref();
    match mode {
        "fixed" => {
            if raw.direction.is_some() || raw.branch.is_some() || anchor.is_some() {
                errors.push("pump.direction, pump.branch and pump.anchor_delta_c need an optimal pump.mode".into());
            }
            PumpMode::Fixed
        }
        "optimal_single" | "optimal_two" => {
            let direction = match direction() {
                Some(d) => parse_direction(d, errors),
                None => {
                    errors.push(format!("pump.direction is required for pump.mode = \"{mode}\""));
                    DriveDirection::Forward
                }
            };
            if mode == "optimal_single" {
                if raw.branch.is_some() {
                    errors.push("pump.branch only applies to pump.mode = \"optimal_two\"".into());
                }
                PumpMode::OptimalSingle { direction, anchor }
            } else {
                let branch = match raw.branch.as_deref().unwrap_or("auto") {
                    "plus" => BranchSel::Plus,
                    "minus" => BranchSel::Minus,
                    "auto" => BranchSel::Auto,
                    other => {
                        errors.push(format!("pump.branch must be plus, minus or auto, got `{other}`"));
                        BranchSel::Auto
                    }
                };
                PumpMode::OptimalTwo { direction, branch, anchor }
            }
        }
        other => {
            errors.push(format!("pump.mode must be fixed, optimal_single or optimal_two, got `{other}`"));
            PumpMode::Fixed
        }
    }
}

/// Parses and validates a configuration; `origin` names the source in errors.
pub fn parse_config(text: &str, origin: &str) -> Result<SweepConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| SimError::Parse { origin: origin.to_string(), message: e.to_string() })?;
    let mut errors = Vec::new();
    if raw.schema_version != SCHEMA_VERSION {
        errors.push(format!("schema_version must be {SCHEMA_VERSION}, got {}", raw.schema_version));
    }
    let mut base = SystemParams::reference();
    let b = raw.base;
    if let Some(k1) = b.kappa1 {
        base.kappa1 = k1;
        base.kappa2 = 1.0 - k1;
    }
    base.gamma = b.gamma.unwrap_or(base.gamma);
    base.g = b.g.unwrap_or(base.g);
    base.delta_c = b.delta_c.unwrap_or(base.delta_c);
    base.delta_a = b.delta_a.unwrap_or(base.delta_a);
    base.b_in = b.b_in.unwrap_or(base.b_in);
    base.omega_p = b.omega_p.unwrap_or(base.omega_p);
    base.theta_p = b.theta_p.unwrap_or(base.theta_p);

    let pump = build_pump(raw.pump, &mut errors);
    let axes = std::iter::once(raw.axis1)
        .chain(raw.axis2)
        .map(|a| Axis { param: a.param, min: a.min, max: a.max, count: a.count })
        .collect();
    let config = SweepConfig {
        name: raw.name.unwrap_or_else(|| "sweep".into()),
        base,
        direction: raw.direction.unwrap_or(DirectionSel::Both),
        axes,
        pump,
        solver: raw.solver.unwrap_or(SolverSel::Both),
        n_max: raw.n_max.unwrap_or(DEFAULT_N_MAX),
    };
    errors.extend(config.violations());
    if errors.is_empty() {
        Ok(config)
    } else {
        Err(SimError::Validation(errors))
    }
}

pub fn load_config(path: &Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| SimError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text, &path.display().to_string())
}
