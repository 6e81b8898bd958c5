//! Master-equation solver.
//!
//! The generator implements
//! `ρ̇ = −i[H, ρ] + κ D[a]ρ + γ D[σ₋]ρ`, `D[o]ρ = oρo† − ½{o†o, ρ}` (κ = 1),
//! acting on column-stacked `vec(ρ)`, where `AρB ↦ (Bᵀ ⊗ A) vec(ρ)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 methods are inherent when std is linked
use num_traits::Float;
use num_traits::Zero;

use crate::hilbert::{annihilation, sigma_minus, AtomLevel, FockQubitSpace, Operator};
use crate::linalg::{hermitian_eigenvalues, norm2, CMatrix, Lu, SparseRows};
use crate::model::{hamiltonian, DriveDirection, SystemParams};
use crate::{Error, Result, I};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue a density matrix may have.
pub const POSITIVITY_TOL: f64 = -1e-8;
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Minimum smallest-singular-value of the bordered steady-state system.
pub const UNIQUENESS_TOL: f64 = 1e-8;
pub const TRACE_DRIFT_TOL: f64 = 1e-6;
/// Below this ⟨a†a⟩ the normalized correlations are undefined.
pub const POPULATION_FLOOR: f64 = 1e-15;
/// Relative change in g⁽²⁾, g⁽³⁾ accepted by [`check_truncation`].
pub const TRUNCATION_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantReport {
    /// max |ρ − ρ†|
    pub hermiticity_error: f64,
    /// |Tr ρ − 1|
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl InvariantReport {
    pub fn holds(&self) -> bool {
        self.hermiticity_error < HERMITICITY_TOL && self.trace_error < TRACE_TOL && self.min_eigenvalue > POSITIVITY_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: FockQubitSpace,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix without checking the physical invariants; see [`DensityMatrix::validate`].
    pub fn new(space: FockQubitSpace, matrix: CMatrix) -> Result<Self> {
        if matrix.rows() != space.dim() || matrix.cols() != space.dim() {
            return Err(Error::DimensionMismatch { left: space.dim(), right: matrix.rows() });
        }
        Ok(DensityMatrix { space, matrix })
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn from_pure(space: FockQubitSpace, psi: &[Complex64]) -> Result<Self> {
        if psi.len() != space.dim() {
            return Err(Error::DimensionMismatch { left: space.dim(), right: psi.len() });
        }
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm > 0.0) {
            return Err(Error::Domain("cannot normalize a zero state vector"));
        }
        let matrix = CMatrix::from_fn(space.dim(), space.dim(), |i, j| psi[i] * psi[j].conj() / norm);
        Ok(DensityMatrix { space, matrix })
    }

    pub fn basis_projector(space: FockQubitSpace, n: usize, level: AtomLevel) -> Self {
        let mut matrix = CMatrix::zeros(space.dim(), space.dim());
        let k = space.index(n, level);
        matrix[(k, k)] = Complex64::new(1.0, 0.0);
        DensityMatrix { space, matrix }
    }

    pub fn vacuum(space: FockQubitSpace) -> Self {
        Self::basis_projector(space, 0, AtomLevel::Ground)
    }

    pub fn space(&self) -> FockQubitSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `(ρ + ρ†) / 2`.
    pub fn hermitized(self) -> Self {
        let matrix = self.matrix.add_scaled(Complex64::new(1.0, 0.0), &self.matrix.adjoint()).scale(Complex64::new(0.5, 0.0));
        DensityMatrix { space: self.space, matrix }
    }

    /// Tr(ρ X).
    pub fn expectation(&self, op: &Operator) -> Result<Complex64> {
        if op.space() != self.space {
            return Err(Error::DimensionMismatch { left: self.space.dim(), right: op.space().dim() });
        }
        let d = self.space.dim();
        let x = op.matrix();
        let mut acc = Complex64::zero();
        for i in 0..d {
            for k in 0..d {
                acc += self.matrix[(i, k)] * x[(k, i)];
            }
        }
        Ok(acc)
    }

    pub fn invariants(&self) -> InvariantReport {
        let hermiticity_error = self.matrix.max_abs_diff(&self.matrix.adjoint());
        let trace_error = (self.trace() - Complex64::new(1.0, 0.0)).norm();
        let min_eigenvalue = hermitian_eigenvalues(&self.matrix).first().copied().unwrap_or(0.0);
        InvariantReport { hermiticity_error, trace_error, min_eigenvalue }
    }

    pub fn validate(&self) -> Result<InvariantReport> {
        let report = self.invariants();
        if report.holds() {
            Ok(report)
        } else {
            Err(Error::InvariantViolation(format!(
                "|ρ−ρ†| = {:e}, |Tr ρ − 1| = {:e}, λ_min = {:e}",
                report.hermiticity_error, report.trace_error, report.min_eigenvalue
            )))
        }
    }

    /// ½ Σ |λ(ρ − σ)|.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch { left: self.space.dim(), right: other.space.dim() });
        }
        let diff = self.matrix.add_scaled(Complex64::new(-1.0, 0.0), &other.matrix);
        Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>())
    }
}

/// Vectorized master-equation generator.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    space: FockQubitSpace,
    generator: CMatrix,
}

/// Adds `coef · A ρ B` to the generator, i.e. `coef · (Bᵀ ⊗ A)`.
fn add_sandwich(generator: &mut CMatrix, d: usize, coef: Complex64, left: &CMatrix, right: &CMatrix) {
    let left_nz: Vec<(usize, usize, Complex64)> = nonzeros(left);
    let right_nz: Vec<(usize, usize, Complex64)> = nonzeros(right);
    for &(l, j, b) in &right_nz {
        for &(i, k, a) in &left_nz {
            generator[(i + d * j, k + d * l)] += coef * a * b;
        }
    }
}

fn nonzeros(m: &CMatrix) -> Vec<(usize, usize, Complex64)> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for (j, v) in m.row(i).iter().enumerate() {
            if !v.is_zero() {
                out.push((i, j, *v));
            }
        }
    }
    out
}

impl Liouvillian {
    /// Generator for a Hamiltonian plus `(rate, collapse operator)` channels.
    pub fn from_parts(hamiltonian: &Operator, channels: &[(f64, &Operator)]) -> Result<Self> {
        let space = hamiltonian.space();
        let d = space.dim();
        let id = CMatrix::identity(d);
        let mut generator = CMatrix::zeros(d * d, d * d);
        let h = hamiltonian.matrix();
        add_sandwich(&mut generator, d, -I, h, &id);
        add_sandwich(&mut generator, d, I, &id, h);
        for &(rate, op) in channels {
            if op.space() != space {
                return Err(Error::DimensionMismatch { left: d, right: op.space().dim() });
            }
            if rate == 0.0 {
                continue;
            }
            let c = op.matrix();
            let cd = c.adjoint();
            let cdc = cd.matmul(c);
            let r = Complex64::new(rate, 0.0);
            add_sandwich(&mut generator, d, r, c, &cd);
            add_sandwich(&mut generator, d, -r * 0.5, &cdc, &id);
            add_sandwich(&mut generator, d, -r * 0.5, &id, &cdc);
        }
        Ok(Liouvillian { space, generator })
    }

    pub fn space(&self) -> FockQubitSpace {
        self.space
    }

    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    /// ρ̇ for the given ρ.
    pub fn apply(&self, rho: &DensityMatrix) -> CMatrix {
        let d = self.space.dim();
        CMatrix::unvectorize(&self.generator.mul_vec(&rho.matrix.vectorize()), d, d)
    }

    /// Largest modulus of the row vector `vec(I)ᵀ · generator`; zero for a
    /// trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        let d = self.space.dim();
        let n = d * d;
        (0..n)
            .map(|col| (0..d).map(|i| self.generator[(i + d * i, col)]).sum::<Complex64>().norm())
            .fold(0.0, f64::max)
    }

    /// ‖generator · vec(ρ)‖₂.
    pub fn residual(&self, rho: &DensityMatrix) -> f64 {
        norm2(&self.generator.mul_vec(&rho.matrix.vectorize()))
    }
}

/// Generator for the driven, pumped atom–cavity system with cavity decay
/// κ = 1 and atomic decay γ.
pub fn build_liouvillian(params: &SystemParams, direction: DriveDirection, space: FockQubitSpace) -> Liouvillian {
    let h = hamiltonian(params, direction, space);
    let a = annihilation(space);
    let sm = sigma_minus(space);
    let kappa = params.kappa1 + params.kappa2 + params.kappa_loss;
    Liouvillian::from_parts(&h, &[(kappa, &a), (params.gamma, &sm)]).expect("operators share one space")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyStateMethod {
    /// Trace constraint substituted for a redundant row, one LU solve.
    Bordered,
    /// Bordered solution polished by shifted inverse iteration.
    InverseIteration,
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    pub residual: f64,
    /// Smallest singular value estimate of the bordered system.
    pub min_singular_value: f64,
    pub method: SteadyStateMethod,
}

/// Steady state with diagnostics.
pub fn solve_steady_state(liouvillian: &Liouvillian) -> Result<SteadyState> {
    let d = liouvillian.space.dim();
    let n = d * d;
    let mut bordered = liouvillian.generator.clone();
    // Row 0 is the ρ₀₀ equation; the diagonal equations sum to zero, so it is redundant.
    for col in 0..n {
        bordered[(0, col)] = Complex64::zero();
    }
    for i in 0..d {
        bordered[(0, i + d * i)] = Complex64::new(1.0, 0.0);
    }
    let lu = Lu::factor(bordered).map_err(|_| Error::DegenerateSteadyState { sigma: 0.0 })?;
    let sigma = lu.estimate_min_singular_value(6);
    if sigma < UNIQUENESS_TOL {
        return Err(Error::DegenerateSteadyState { sigma });
    }
    let mut rhs = vec![Complex64::zero(); n];
    rhs[0] = Complex64::new(1.0, 0.0);
    let x = lu.solve(&rhs);

    let mut rho = normalized(liouvillian.space, &x)?;
    let mut residual = liouvillian.residual(&rho);
    let mut method = SteadyStateMethod::Bordered;

    if residual > RESIDUAL_TOL {
        let shift = Complex64::new(-1e-6, 0.0);
        let shifted = liouvillian.generator.add_scaled(shift, &CMatrix::identity(n)).scale(Complex64::new(1.0, 0.0));
        let slu = Lu::factor(shifted).map_err(|_| Error::NotConverged { residual, tolerance: RESIDUAL_TOL })?;
        let mut v = rho.matrix.vectorize();
        for _ in 0..3 {
            v = slu.solve(&v);
            let scale = norm2(&v);
            v.iter_mut().for_each(|z| *z /= scale);
        }
        rho = normalized(liouvillian.space, &v)?;
        residual = liouvillian.residual(&rho);
        method = SteadyStateMethod::InverseIteration;
    }
    if !(residual <= RESIDUAL_TOL) {
        return Err(Error::NotConverged { residual, tolerance: RESIDUAL_TOL });
    }
    Ok(SteadyState { rho, residual, min_singular_value: sigma, method })
}

fn normalized(space: FockQubitSpace, v: &[Complex64]) -> Result<DensityMatrix> {
    let d = space.dim();
    let m = CMatrix::unvectorize(v, d, d);
    let tr = m.trace();
    if !(tr.norm() > 1e-300) {
        return Err(Error::DegenerateSteadyState { sigma: 0.0 });
    }
    Ok(DensityMatrix { space, matrix: m.scale(tr.inv()) }.hermitized())
}

pub fn steady_state(liouvillian: &Liouvillian) -> Result<DensityMatrix> {
    solve_steady_state(liouvillian).map(|s| s.rho)
}

/// Largest RK4 step accepted by [`evolve`]: 2.5 / ‖generator‖∞.
pub fn max_evolution_step(liouvillian: &Liouvillian) -> f64 {
    2.5 / liouvillian.generator.norm_inf().max(1e-300)
}

/// Integrates ρ̇ = Lρ with fixed-step RK4 (step `t_final / ceil(t_final / dt)`).
pub fn evolve(rho0: &DensityMatrix, liouvillian: &Liouvillian, t_final: f64, dt: f64) -> Result<DensityMatrix> {
    if rho0.space != liouvillian.space {
        return Err(Error::DimensionMismatch { left: liouvillian.space.dim(), right: rho0.space.dim() });
    }
    rho0.validate()?;
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::Domain("t_final must be finite and non-negative"));
    }
    let limit = max_evolution_step(liouvillian);
    if !(dt > 0.0) || dt > limit {
        return Err(Error::StepTooLarge { dt, limit });
    }
    let steps = (t_final / dt).ceil() as usize;
    let h = if steps == 0 { 0.0 } else { t_final / steps as f64 };
    let sparse = SparseRows::from_dense(&liouvillian.generator);
    let n = sparse_len(liouvillian);
    let mut x = rho0.matrix.vectorize();
    let mut k1 = vec![Complex64::zero(); n];
    let mut k2 = vec![Complex64::zero(); n];
    let mut k3 = vec![Complex64::zero(); n];
    let mut k4 = vec![Complex64::zero(); n];
    let mut tmp = vec![Complex64::zero(); n];
    for _ in 0..steps {
        sparse.mul_vec_into(&x, &mut k1);
        tmp.iter_mut().zip(&x).zip(&k1).for_each(|((t, xv), k)| *t = xv + k * (h / 2.0));
        sparse.mul_vec_into(&tmp, &mut k2);
        tmp.iter_mut().zip(&x).zip(&k2).for_each(|((t, xv), k)| *t = xv + k * (h / 2.0));
        sparse.mul_vec_into(&tmp, &mut k3);
        tmp.iter_mut().zip(&x).zip(&k3).for_each(|((t, xv), k)| *t = xv + k * h);
        sparse.mul_vec_into(&tmp, &mut k4);
        for i in 0..n {
            x[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
        }
    }
    let d = rho0.space.dim();
    let rho = DensityMatrix { space: rho0.space, matrix: CMatrix::unvectorize(&x, d, d) };
    let drift = (rho.trace() - rho0.trace()).norm();
    if drift > TRACE_DRIFT_TOL {
        return Err(Error::InvariantViolation(format!("trace drifted by {drift:e} during evolution")));
    }
    Ok(rho.hermitized())
}

fn sparse_len(l: &Liouvillian) -> usize {
    l.generator.rows()
}

/// Fock-level populations with the atom traced out: `P_n = Σ_s ⟨n,s|ρ|n,s⟩`.
pub fn photon_distribution(rho: &DensityMatrix) -> Vec<f64> {
    let space = rho.space;
    (0..=space.n_max())
        .map(|n| {
            rho.matrix[(space.index(n, AtomLevel::Ground), space.index(n, AtomLevel::Ground))].re
                + rho.matrix[(space.index(n, AtomLevel::Excited), space.index(n, AtomLevel::Excited))].re
        })
        .collect()
}

/// ⟨a†ᵏ aᵏ⟩ = Σ_n n(n−1)…(n−k+1) P_n.
pub fn factorial_moment(rho: &DensityMatrix, order: usize) -> f64 {
    photon_distribution(rho)
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let falling: f64 = (0..order).map(|j| n as f64 - j as f64).product();
            falling * p
        })
        .sum()
}

pub fn mean_photon_number(rho: &DensityMatrix) -> f64 {
    factorial_moment(rho, 1)
}

/// ⟨a⟩.
pub fn cavity_field(rho: &DensityMatrix) -> Complex64 {
    rho.expectation(&annihilation(rho.space)).expect("same space")
}

fn normalized_correlation(rho: &DensityMatrix, order: usize) -> Result<f64> {
    let n = mean_photon_number(rho);
    if !(n > POPULATION_FLOOR) {
        return Err(Error::UndefinedCorrelation { population: n });
    }
    Ok(factorial_moment(rho, order) / n.powi(order as i32))
}

/// g⁽²⁾(0) = ⟨a†²a²⟩/⟨a†a⟩². The output-mirror factors cancel, so this is
/// also the output-field correlation.
pub fn g2(rho: &DensityMatrix) -> Result<f64> {
    normalized_correlation(rho, 2)
}

/// g⁽³⁾(0) = ⟨a†³a³⟩/⟨a†a⟩³.
pub fn g3(rho: &DensityMatrix) -> Result<f64> {
    normalized_correlation(rho, 3)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationCheck {
    pub converged: bool,
    pub g2_delta: f64,
    pub g3_delta: f64,
}

/// Recomputes g⁽²⁾ and g⁽³⁾ at `n_max` and `n_max + 3`.
pub fn check_truncation(params: &SystemParams, direction: DriveDirection, n_max: usize) -> Result<TruncationCheck> {
    if n_max < 4 {
        return Err(Error::InvalidParams(format!("truncation check needs n_max >= 4, got {n_max}")));
    }
    let correlations = |n: usize| -> Result<Option<(f64, f64)>> {
        let space = FockQubitSpace::new(n)?;
        let rho = steady_state(&build_liouvillian(params, direction, space))?;
        match (g2(&rho), g3(&rho)) {
            (Ok(a), Ok(b)) => Ok(Some((a, b))),
            (Err(Error::UndefinedCorrelation { .. }), _) => Ok(None),
            (Err(e), _) | (_, Err(e)) => Err(e),
        }
    };
    match (correlations(n_max)?, correlations(n_max + 3)?) {
        (None, None) => Ok(TruncationCheck { converged: true, g2_delta: 0.0, g3_delta: 0.0 }),
        (Some((a2, a3)), Some((b2, b3))) => {
            let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(f64::MIN_POSITIVE);
            let g2_delta = rel(a2, b2);
            let g3_delta = rel(a3, b3);
            Ok(TruncationCheck { converged: g2_delta < TRUNCATION_TOL && g3_delta < TRUNCATION_TOL, g2_delta, g3_delta })
        }
        _ => Ok(TruncationCheck { converged: false, g2_delta: f64::INFINITY, g3_delta: f64::INFINITY }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::make_space;

    fn undriven() -> SystemParams {
        SystemParams { b_in: 0.0, ..SystemParams::reference() }
    }

    #[test]
    fn single_photon_decay_generator() {
        let s = make_space(3).unwrap();
        let zero_h = Operator::zero(s);
        let a = annihilation(s);
        let l = Liouvillian::from_parts(&zero_h, &[(1.0, &a)]).unwrap();
        let rho = DensityMatrix::basis_projector(s, 1, AtomLevel::Ground);
        let out = l.apply(&rho);
        let expected = DensityMatrix::vacuum(s)
            .matrix()
            .add_scaled(Complex64::new(-1.0, 0.0), rho.matrix());
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn vacuum_is_dark_without_drive() {
        let s = make_space(4).unwrap();
        let l = build_liouvillian(&undriven(), DriveDirection::Forward, s);
        assert_eq!(l.apply(&DensityMatrix::vacuum(s)).max_abs(), 0.0);
        assert!(l.trace_defect() < 1e-12);
        let rho = steady_state(&l).unwrap();
        assert!(rho.matrix().max_abs_diff(DensityMatrix::vacuum(s).matrix()) < 1e-12);
    }

    #[test]
    fn correlations_of_simple_states() {
        let s = make_space(6).unwrap();
        let fock1 = DensityMatrix::basis_projector(s, 1, AtomLevel::Ground);
        assert_eq!(g2(&fock1).unwrap(), 0.0);
        assert!(matches!(g2(&DensityMatrix::vacuum(s)), Err(Error::UndefinedCorrelation { .. })));
        let p = photon_distribution(&DensityMatrix::vacuum(s));
        assert_eq!(p[0], 1.0);
        assert!(p[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn degenerate_steady_state_is_rejected() {
        // An undamped, uncoupled atom keeps whatever population it starts with.
        let s = make_space(3).unwrap();
        let p = SystemParams { g: 0.0, gamma: 0.0, ..SystemParams::reference() };
        let err = steady_state(&build_liouvillian(&p, DriveDirection::Forward, s)).unwrap_err();
        assert!(matches!(err, Error::DegenerateSteadyState { .. }), "{err:?}");
    }

    #[test]
    fn pure_decay_of_one_photon() {
        let s = make_space(3).unwrap();
        let l = build_liouvillian(&SystemParams { gamma: 0.0, g: 0.0, b_in: 0.0, ..undriven() }, DriveDirection::Forward, s);
        let rho0 = DensityMatrix::basis_projector(s, 1, AtomLevel::Ground);
        for t in [0.5, 1.0, 2.0] {
            let rho = evolve(&rho0, &l, t, 0.01).unwrap();
            assert!((mean_photon_number(&rho) - (-t).exp()).abs() < 1e-9);
        }
        let same = evolve(&DensityMatrix::vacuum(s), &l, 3.0, 0.01).unwrap();
        assert!(same.matrix().max_abs_diff(DensityMatrix::vacuum(s).matrix()) < 1e-15);
    }

    #[test]
    fn evolve_rejects_large_steps_and_bad_states() {
        let s = make_space(3).unwrap();
        let l = build_liouvillian(&SystemParams::reference(), DriveDirection::Forward, s);
        let limit = max_evolution_step(&l);
        let rho0 = DensityMatrix::vacuum(s);
        assert!(matches!(evolve(&rho0, &l, 1.0, 2.0 * limit), Err(Error::StepTooLarge { .. })));
        let bad = DensityMatrix::new(s, CMatrix::identity(s.dim())).unwrap();
        assert!(matches!(evolve(&bad, &l, 1.0, limit), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn truncation_check_argument_and_trivial_case() {
        assert!(check_truncation(&undriven(), DriveDirection::Forward, 3).is_err());
        let c = check_truncation(&undriven(), DriveDirection::Forward, 4).unwrap();
        assert!(c.converged);
    }
}
