//! The dissipative generator and its time integration.
//!
//! Four routes compute the same right-hand side for an equal-block bath:
//!
//! - [`rhs_equal_blocks`]: Σ_ij 𝒜_ij [Σ_j ρ Σ_i − ½{Σ_iΣ_j, ρ}] on matrices
//! - [`rhs_components`]: the 15 real coefficient equations, used by [`evolve`]
//! - [`rhs_general`]: the 6×6 Kossakowski form over σ_i⊗1 and 1⊗σ_i
//! - [`rhs_diagonal`]: the diagonal form with V_i = Σ_j (𝒜^½)_ij Σ_j
//!
//! The matrix routes serve as oracles for the component route.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;

use crate::bath::KossakowskiBlock;
use crate::entanglement;
use crate::linalg::{self, anticommutator, re};
use crate::pauli::{basis, ComplexMatrix4, DensityMatrix, PauliCoefficients};
use crate::{Error, Result};

/// Default integration horizon, in units of the inverse rate scale.
pub const DEFAULT_T_END: f64 = 50.0;
/// Positivity slack on sampled states before the step is declared too coarse.
pub const POSITIVITY_TOL: f64 = -1e-7;
/// Slack accepted on the positivity of a raw 6×6 Kossakowski matrix.
pub const GENERAL_PSD_TOL: f64 = 1e-10;

/// dt = 0.01 / max(λ_i, ‖B‖, 1).
pub fn default_dt(block: &KossakowskiBlock) -> f64 {
    0.01 / block.rate_scale()
}

pub fn rhs_equal_blocks(rho: &ComplexMatrix4, block: &KossakowskiBlock) -> ComplexMatrix4 {
    let sg = &basis().collective;
    let h = block.hermitian();
    let mut out = ComplexMatrix4::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let c = h[(i, j)];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let jump = sg[j] * rho * sg[i];
            let anti = anticommutator(&(sg[i] * sg[j]), rho) * re(0.5);
            out += (jump - anti) * c;
        }
    }
    out
}

/// Time derivative of the 15 Pauli coefficients.
pub fn rhs_components(state: &PauliCoefficients, block: &KossakowskiBlock) -> PauliCoefficients {
    let a = block.a();
    let b = block.b();
    let at = block.a_trace();
    let r0 = &state.r0i;
    let r1 = &state.ri0;
    let r = &state.rij;
    let tau = state.tau();
    let d = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };

    let mut out = PauliCoefficients::zero();
    for i in 0..3 {
        let mut s0 = 0.0;
        let mut s1 = 0.0;
        for k in 0..3 {
            s0 += a[(i, k)] * r0[k] - r[i][k] * b[k];
            s1 += a[(i, k)] * r1[k] - r[k][i] * b[k];
        }
        out.r0i[i] = -2.0 * at * r0[i] + 2.0 * s0 + 2.0 * (2.0 + tau) * b[i];
        out.ri0[i] = -2.0 * at * r1[i] + 2.0 * s1 + 2.0 * (2.0 + tau) * b[i];
    }

    let mut a_dot_r = 0.0;
    let mut b_dot_sum = 0.0;
    for k in 0..3 {
        b_dot_sum += b[k] * (r0[k] + r1[k]);
        for l in 0..3 {
            a_dot_r += a[(k, l)] * r[l][k];
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            let mut v = -4.0 * at * (r[i][j] + r[j][i]) - 4.0 * a[(i, j)] * tau;
            for k in 0..3 {
                v += 2.0 * (a[(i, k)] * r[k][j] + a[(j, k)] * r[i][k]);
                v += 4.0 * (a[(i, k)] * r[j][k] + a[(j, k)] * r[k][i]);
            }
            v += 4.0 * (at * tau - a_dot_r) * d(i, j);
            v += 2.0 * (b[i] * r1[j] + b[j] * r0[i]);
            v += 4.0 * (b[i] * r0[j] + b[j] * r1[i]);
            v -= 2.0 * b_dot_sum * d(i, j);
            out.rij[i][j] = v;
        }
    }
    out
}

/// General Kossakowski dissipator Σ_αβ C_αβ [F_β ρ F_α − ½{F_αF_β, ρ}] with
/// F = (σ_1⊗1, σ_2⊗1, σ_3⊗1, 1⊗σ_1, 1⊗σ_2, 1⊗σ_3).
pub fn rhs_general(rho: &ComplexMatrix4, c: &DMatrix<Complex64>) -> Result<ComplexMatrix4> {
    validate_general(c)?;
    Ok(rhs_general_unchecked(rho, c))
}

fn validate_general(c: &DMatrix<Complex64>) -> Result<()> {
    if c.shape() != (6, 6) {
        return Err(Error::InvalidParameter(format!(
            "Kossakowski matrix must be 6×6, got {:?}",
            c.shape()
        )));
    }
    let herm = linalg::max_abs_dyn(&(c - c.adjoint()));
    if herm > GENERAL_PSD_TOL {
        return Err(Error::InvalidParameter(format!(
            "Kossakowski matrix not Hermitian ({herm:.3e})"
        )));
    }
    let min = linalg::eigvalsh(c)[0];
    if min < -GENERAL_PSD_TOL {
        return Err(Error::NotPositive { eigenvalue: min });
    }
    Ok(())
}

fn frame_operators() -> [ComplexMatrix4; 6] {
    let b = basis();
    [
        b.first[0], b.first[1], b.first[2], b.second[0], b.second[1], b.second[2],
    ]
}

fn rhs_general_unchecked(rho: &ComplexMatrix4, c: &DMatrix<Complex64>) -> ComplexMatrix4 {
    let f = frame_operators();
    let mut out = ComplexMatrix4::zeros();
    for al in 0..6 {
        for be in 0..6 {
            let coef = c[(al, be)];
            if coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            let jump = f[be] * rho * f[al];
            let anti = anticommutator(&(f[al] * f[be]), rho) * re(0.5);
            out += (jump - anti) * coef;
        }
    }
    out
}

/// Lindblad operators V_i = Σ_j (𝒜^½)_ij Σ_j.
pub fn lindblad_operators(block: &KossakowskiBlock) -> [ComplexMatrix4; 3] {
    let sqrt: Matrix3<Complex64> = block.sqrt();
    let sg = &basis().collective;
    [0, 1, 2].map(|i| {
        (0..3).fold(ComplexMatrix4::zeros(), |acc, j| acc + sg[j] * sqrt[(i, j)])
    })
}

/// Diagonal form Σ_i [V_i ρ V_i† − ½{V_i†V_i, ρ}].
pub fn rhs_diagonal(rho: &ComplexMatrix4, block: &KossakowskiBlock) -> ComplexMatrix4 {
    lindblad_operators(block)
        .iter()
        .fold(ComplexMatrix4::zeros(), |acc, v| {
            let vd = v.adjoint();
            acc + v * rho * vd - anticommutator(&(vd * v), rho) * re(0.5)
        })
}

/// Largest entrywise deviation of the diagonal form from [`rhs_equal_blocks`].
pub fn diagonal_form_check(block: &KossakowskiBlock, state: &DensityMatrix) -> f64 {
    let rho = state.matrix();
    linalg::max_abs_diff(&rhs_diagonal(rho, block), &rhs_equal_blocks(rho, block))
}

/// Vector-space operations needed by the RK4 stepper.
pub trait OdeState: Clone {
    /// self + h·other
    fn axpy(&self, h: f64, other: &Self) -> Self;
}

impl OdeState for [f64; 15] {
    fn axpy(&self, h: f64, other: &Self) -> Self {
        std::array::from_fn(|k| self[k] + h * other[k])
    }
}

impl OdeState for ComplexMatrix4 {
    fn axpy(&self, h: f64, other: &Self) -> Self {
        self + other * re(h)
    }
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step<T: OdeState>(y: &T, h: f64, f: impl Fn(&T) -> T) -> T {
    let k1 = f(y);
    let k2 = f(&y.axpy(0.5 * h, &k1));
    let k3 = f(&y.axpy(0.5 * h, &k2));
    let k4 = f(&y.axpy(h, &k3));
    y.axpy(h / 6.0, &k1)
        .axpy(h / 3.0, &k2)
        .axpy(h / 3.0, &k3)
        .axpy(h / 6.0, &k4)
}

/// Step sizes covering [0, t_end]: full steps of `dt`, the last one
/// shortened so the grid ends exactly at `t_end`.
fn step_plan(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(t_end > 0.0 && dt > 0.0 && dt <= t_end) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need 0 < dt <= t_end, got dt = {dt}, t_end = {t_end}"
        )));
    }
    let ratio = t_end / dt;
    let n = (ratio - 1e-9).ceil().max(1.0) as usize;
    let last = t_end - (n - 1) as f64 * dt;
    Ok((n, last))
}

fn component_derivative(block: &KossakowskiBlock) -> impl Fn(&[f64; 15]) -> [f64; 15] + '_ {
    move |y| rhs_components(&PauliCoefficients::from_array(y), block).to_array()
}

/// Final state after integrating the component equations, without sampling.
pub fn propagate(
    initial: &PauliCoefficients,
    block: &KossakowskiBlock,
    t_end: f64,
    dt: f64,
) -> Result<PauliCoefficients> {
    let (n, last) = step_plan(t_end, dt)?;
    let f = component_derivative(block);
    let mut y = initial.to_array();
    for step in 0..n {
        let h = if step + 1 == n { last } else { dt };
        y = rk4_step(&y, h, &f);
    }
    Ok(PauliCoefficients::from_array(&y))
}

/// Integrates the general 6×6 dissipator on the density matrix directly.
/// Returns the sampled times and matrices (every step).
pub fn propagate_general(
    initial: &ComplexMatrix4,
    c: &DMatrix<Complex64>,
    t_end: f64,
    dt: f64,
) -> Result<Vec<(f64, ComplexMatrix4)>> {
    validate_general(c)?;
    let (n, last) = step_plan(t_end, dt)?;
    let mut out = Vec::with_capacity(n + 1);
    let mut rho = *initial;
    let mut t = 0.0;
    out.push((t, rho));
    for step in 0..n {
        let h = if step + 1 == n { last } else { dt };
        rho = rk4_step(&rho, h, |m| rhs_general_unchecked(m, c));
        t = if step + 1 == n { t_end } else { t + h };
        out.push((t, rho));
    }
    Ok(out)
}

/// Derived quantities recorded with each trajectory sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub tau: f64,
    /// |Tr ρ − 1|.
    pub trace_error: f64,
    pub min_pt_eigenvalue: f64,
    pub concurrence: f64,
    pub min_eigenvalue: f64,
}

impl Observables {
    pub fn of(state: &PauliCoefficients) -> Self {
        let m = state.to_matrix();
        let rho = DensityMatrix::new_unchecked(m);
        Observables {
            tau: state.tau(),
            trace_error: rho.trace_error(),
            min_pt_eigenvalue: entanglement::partial_transpose(&rho).1,
            concurrence: entanglement::concurrence(&rho),
            min_eigenvalue: rho.min_eigenvalue(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PauliCoefficients>,
    pub observables: Vec<Observables>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &PauliCoefficients {
        self.states.last().expect("trajectory has at least one sample")
    }

    /// max_k |τ(t_k) − τ(t_0)|.
    pub fn tau_drift(&self) -> f64 {
        let t0 = self.observables[0].tau;
        self.observables
            .iter()
            .fold(0.0, |m, o| f64::max(m, (o.tau - t0).abs()))
    }
}

/// Fixed-step RK4 integration of the component equations.
///
/// Samples are recorded at t = 0, every `sample_every` steps, and at `t_end`.
/// A sampled state with an eigenvalue below [`POSITIVITY_TOL`] aborts with
/// [`Error::IntegrationAccuracy`].
pub fn evolve(
    initial: &PauliCoefficients,
    block: &KossakowskiBlock,
    t_end: f64,
    dt: f64,
    sample_every: usize,
) -> Result<Trajectory> {
    if sample_every == 0 {
        return Err(Error::InvalidParameter("sample_every must be at least 1".into()));
    }
    let (n, last) = step_plan(t_end, dt)?;
    let f = component_derivative(block);

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        observables: Vec::new(),
    };
    let mut record = |t: f64, y: &[f64; 15]| -> Result<()> {
        let state = PauliCoefficients::from_array(y);
        let obs = Observables::of(&state);
        if obs.min_eigenvalue < POSITIVITY_TOL {
            return Err(Error::IntegrationAccuracy {
                time: t,
                min_eigenvalue: obs.min_eigenvalue,
            });
        }
        traj.times.push(t);
        traj.states.push(state);
        traj.observables.push(obs);
        Ok(())
    };

    let mut y = initial.to_array();
    record(0.0, &y)?;
    for step in 1..=n {
        let h = if step == n { last } else { dt };
        y = rk4_step(&y, h, &f);
        if step == n {
            record(t_end, &y)?;
        } else if step % sample_every == 0 {
            record(step as f64 * dt, &y)?;
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{assemble_full_c, diagonal_bath};
    use crate::linalg::max_abs;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_bath_gives_zero_rhs() {
        let rho = DensityMatrix::werner(0.2).unwrap();
        let z = KossakowskiBlock::zero();
        assert_eq!(max_abs(&rhs_equal_blocks(rho.matrix(), &z)), 0.0);
        let d = rhs_components(&rho.to_pauli(), &z);
        assert_eq!(d, PauliCoefficients::zero());
        let c = DMatrix::zeros(6, 6);
        assert_eq!(max_abs(&rhs_general(rho.matrix(), &c).unwrap()), 0.0);
    }

    #[test]
    fn unital_bath_fixes_maximally_mixed() {
        let block = diagonal_bath([1.0, 0.7, 0.3], 0.0).unwrap();
        let mixed = DensityMatrix::maximally_mixed();
        assert!(max_abs(&rhs_equal_blocks(mixed.matrix(), &block)) < 1e-15);
    }

    #[test]
    fn component_rhs_at_mixed_state() {
        let b = 0.5;
        let block = diagonal_bath([1.0, 1.0, 1.0], b).unwrap();
        let d = rhs_components(&PauliCoefficients::zero(), &block);
        assert!((d.r0i[2] - 4.0 * b).abs() < 1e-15);
        assert!((d.ri0[2] - 4.0 * b).abs() < 1e-15);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn component_rhs_single_qubit_part_without_b() {
        let lambda = [1.3, 0.4, 0.9];
        let block = diagonal_bath(lambda, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let state = random::density_matrix(&mut rng).to_pauli();
        let d = rhs_components(&state, &block);
        let at: f64 = lambda.iter().sum();
        for i in 0..3 {
            let expected = -2.0 * at * state.r0i[i] + 2.0 * lambda[i] * state.r0i[i];
            assert!((d.r0i[i] - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn four_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let block = random::bath(&mut rng);
            let rho = random::density_matrix(&mut rng);
            let m = rhs_equal_blocks(rho.matrix(), &block);
            let comp = rhs_components(&rho.to_pauli(), &block).to_traceless_matrix();
            let gen = rhs_general(rho.matrix(), &assemble_full_c(&block)).unwrap();
            let diag = rhs_diagonal(rho.matrix(), &block);
            assert!(linalg::max_abs_diff(&m, &comp) < 1e-12, "component form");
            assert!(linalg::max_abs_diff(&m, &gen) < 1e-12, "general form");
            assert!(linalg::max_abs_diff(&m, &diag) < 1e-12, "diagonal form");
            assert!(m.trace().norm() < 1e-13);
            assert!(linalg::hermiticity_error(&m) < 1e-13);
        }
    }

    #[test]
    fn tau_rate_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let block = random::bath(&mut rng);
            let state = random::density_matrix(&mut rng).to_pauli();
            assert!(rhs_components(&state, &block).tau().abs() < 1e-12);
        }
    }

    #[test]
    fn local_only_bath_breaks_tau_conservation() {
        let mut c = DMatrix::<Complex64>::zeros(6, 6);
        for k in 0..6 {
            c[(k, k)] = re(1.0);
        }
        let rho = DensityMatrix::singlet();
        let d = rhs_general(rho.matrix(), &c).unwrap();
        let rate = PauliCoefficients::from_matrix(&d).tau();
        assert!(rate.abs() > 1e-3);
    }

    #[test]
    fn rejects_non_positive_general_c() {
        let mut c = DMatrix::<Complex64>::zeros(6, 6);
        c[(0, 0)] = re(-1.0);
        let rho = DensityMatrix::maximally_mixed();
        assert!(matches!(rhs_general(rho.matrix(), &c), Err(Error::NotPositive { .. })));
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn isotropic_unit_bath_has_collective_jump_operators() {
        let block = diagonal_bath([1.0, 1.0, 1.0], 0.0).unwrap();
        let v = lindblad_operators(&block);
        for i in 0..3 {
            assert!(linalg::max_abs_diff(&v[i], &basis().collective[i]) < 1e-14);
        }
        let rho = DensityMatrix::werner(0.3).unwrap();
        assert!(diagonal_form_check(&block, &rho) < 1e-12);
    }

    #[test]
    fn boundary_bath_square_root_is_rank_deficient() {
        let block = diagonal_bath([1.0, 1.0, 0.5], 1.0).unwrap();
        assert!(block.is_boundary());
        let s = block.sqrt();
        let eig = linalg::eigvalsh(&DMatrix::from_fn(3, 3, |i, j| s[(i, j)]));
        assert!(eig[0].abs() < 1e-7);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random::density_matrix(&mut rng);
        assert!(diagonal_form_check(&block, &rho) < 1e-11);
    }

    #[test]
    fn zero_bath_trajectory_is_constant() {
        let init = DensityMatrix::werner(0.1).unwrap().to_pauli();
        let traj = evolve(&init, &KossakowskiBlock::zero(), 1.0, 0.1, 2).unwrap();
        assert!(traj.states.iter().all(|s| *s == init));
        assert_eq!(traj.times.len(), 6);
        assert_eq!(*traj.times.last().unwrap(), 1.0);
    }

    #[test]
    fn sampling_includes_endpoint() {
        let block = diagonal_bath([1.0, 1.0, 1.0], 0.5).unwrap();
        let init = PauliCoefficients::zero();
        let traj = evolve(&init, &block, 0.25, 0.1, 1).unwrap();
        assert_eq!(traj.times, vec![0.0, 0.1, 0.2, 0.25]);
        assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn evolve_rejects_bad_steps() {
        let block = KossakowskiBlock::zero();
        let init = PauliCoefficients::zero();
        assert!(evolve(&init, &block, 1.0, 2.0, 1).is_err());
        assert!(evolve(&init, &block, 1.0, 0.0, 1).is_err());
        assert!(evolve(&init, &block, 1.0, 0.1, 0).is_err());
    }

    #[test]
    fn coarse_steps_report_accuracy_loss() {
        let block = diagonal_bath([10.0, 10.0, 10.0], 5.0).unwrap();
        let up = [linalg::ONE, linalg::ZERO];
        let init = DensityMatrix::product(&up, &up).unwrap().to_pauli();
        let err = evolve(&init, &block, 5.0, 0.5, 1).unwrap_err();
        assert!(matches!(err, Error::IntegrationAccuracy { .. }));
    }

    #[test]
    fn symmetric_start_stays_symmetric() {
        let block = diagonal_bath([1.0, 0.6, 0.8], 0.3).unwrap();
        let up = [linalg::ONE, linalg::ZERO];
        let init = DensityMatrix::product(&up, &up).unwrap().to_pauli();
        let traj = evolve(&init, &block, 10.0, 0.01, 100).unwrap();
        assert!(traj.states.iter().all(|s| s.antisymmetric_norm() < 1e-12));
    }
}
