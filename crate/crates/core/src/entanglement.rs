//! Entanglement diagnostics for two qubits.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bath::KossakowskiBlock;
use crate::generator::rhs_equal_blocks;
use crate::linalg::{self, to_dyn};
use crate::pauli::{basis, ComplexMatrix4, DensityMatrix};
use crate::{Error, Result};

/// Eigenvalues above this (negative) value are clamped to zero before
/// taking square roots in the concurrence.
pub const CLAMP_TOL: f64 = -1e-10;
/// Threshold on the first-order rate of the critical eigenvalue.
pub const GENERATION_TOL: f64 = 1e-12;

/// Transpose on the second qubit: ⟨a b|ρ^Γ|c d⟩ = ⟨a d|ρ|c b⟩.
pub fn partial_transpose_matrix(m: &ComplexMatrix4) -> ComplexMatrix4 {
    ComplexMatrix4::from_fn(|r, c| {
        let (a, b) = (r / 2, r % 2);
        let (cc, d) = (c / 2, c % 2);
        m[(2 * a + d, 2 * cc + b)]
    })
}

/// Partial transpose and its lowest eigenvalue. For two qubits the state is
/// entangled iff that eigenvalue is negative.
pub fn partial_transpose(state: &DensityMatrix) -> (ComplexMatrix4, f64) {
    let pt = partial_transpose_matrix(state.matrix());
    let min = linalg::min_eigenvalue4(&pt);
    (pt, min)
}

/// Wootters concurrence, from the spectrum of √ρ ρ̃ √ρ with the spin-flipped
/// ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
pub fn concurrence(state: &DensityMatrix) -> f64 {
    let rho = state.matrix();
    let yy = basis().yy;
    let flipped = yy * rho.conjugate() * yy;
    let sqrt_rho = linalg::sqrtm_psd(&to_dyn(rho));
    let r: DMatrix<Complex64> = &sqrt_rho * to_dyn(&flipped) * &sqrt_rho;
    let r = (&r + r.adjoint()) * Complex64::new(0.5, 0.0);
    let mut mu: Vec<f64> = linalg::eigvalsh(&r)
        .into_iter()
        .map(|x| if x > CLAMP_TOL { x.max(0.0).sqrt() } else { f64::NAN })
        .collect();
    // Eigenvalues of a product of PSD matrices are non-negative; anything
    // below the clamp signals an invalid input state.
    if mu.iter().any(|x| x.is_nan()) {
        mu.iter_mut().for_each(|x| *x = x.max(0.0));
    }
    mu.sort_by(|a, b| b.total_cmp(a));
    (mu[0] - mu[1] - mu[2] - mu[3]).max(0.0)
}

/// Closed-form asymptotic concurrence as a function of τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedConcurrence {
    /// Δ = [(1 − 2R)² + 4(2R − M²)]^½.
    pub delta: f64,
    pub concurrence: f64,
    /// (4R − 3Δ)/(2 + Δ); the asymptotic state is entangled iff τ is below it.
    pub threshold: f64,
}

const PARAM_TOL: f64 = 1e-12;

/// Asymptotic concurrence of the equilibrium state reached from an initial
/// state with the given τ, in terms of the stationary-family parameters.
pub fn concurrence_closed(m: f64, r: f64, tau: f64) -> Result<ClosedConcurrence> {
    if !(-PARAM_TOL..=0.5 + PARAM_TOL).contains(&r) {
        return Err(Error::InvalidParameter(format!("need 0 <= 2R <= 1, got R = {r}")));
    }
    if m * m > 2.0 * r + PARAM_TOL {
        return Err(Error::InvalidParameter(format!(
            "need M² <= 2R, got M = {m}, R = {r}"
        )));
    }
    if !(-3.0 - PARAM_TOL..=1.0 + PARAM_TOL).contains(&tau) {
        return Err(Error::InvalidParameter(format!("tau = {tau} outside [-3, 1]")));
    }
    let delta = ((1.0 - 2.0 * r).powi(2) + 4.0 * (2.0 * r - m * m)).max(0.0).sqrt();
    let threshold = (4.0 * r - 3.0 * delta) / (2.0 + delta);
    // (2+Δ)(threshold − τ) rewritten around τ = −3 so that τ = −3 gives
    // exactly (4R + 6)/(6 + 4R) = 1.
    let numerator = (4.0 * r + 6.0) - (2.0 + delta) * (tau + 3.0);
    let concurrence = (numerator / (2.0 * (3.0 + 2.0 * r))).max(0.0);
    Ok(ClosedConcurrence {
        delta,
        concurrence,
        threshold,
    })
}

/// Concurrence of the symmetric X-shaped state
/// ¼[1 + ρ̂₃Σ₃ + 2ρ̂₁₁σ₁⊗σ₁ + 2ρ̂₂₂σ₂⊗σ₂ + 2ρ̂₃₃σ₃⊗σ₃].
///
/// Two branches compete: the singlet-like coherence |ρ̂₁₁ + ρ̂₂₂| and the
/// |00⟩⟨11| coherence |ρ̂₁₁ − ρ̂₂₂|. The first reproduces
/// [`concurrence_closed`]; the second only opens up when ρ̂₁₁ ≠ ρ̂₂₂, i.e.
/// for λ₁ ≠ λ₂, and at large τ.
pub fn x_state_concurrence(rho3: f64, rho11: f64, rho22: f64, rho33: f64) -> f64 {
    let singlet_branch =
        (rho11 + rho22).abs() - 0.5 * ((1.0 + 2.0 * rho33).powi(2) - 4.0 * rho3 * rho3).max(0.0).sqrt();
    let pair_branch = (rho11 - rho22).abs() - 0.5 * (1.0 - 2.0 * rho33);
    singlet_branch.max(pair_branch).max(0.0)
}

/// Outcome of the first-order entanglement-generation test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationVerdict {
    pub generated: bool,
    /// d/dt at t = 0 of the lowest eigenvalue of the partial transpose.
    pub witness_eigenvalue_rate: f64,
    pub inconclusive: bool,
}

/// Does the bath entangle |φ⟩⊗|ψ⟩ immediately?
///
/// The partial transpose of a pure product state is again a rank-one
/// projector, with a three-dimensional kernel. To first order in t, the
/// eigenvalues leaving zero are those of the time derivative of the partial
/// transpose compressed to that kernel.
pub fn generation_test(
    phi: &[Complex64; 2],
    psi: &[Complex64; 2],
    block: &KossakowskiBlock,
) -> Result<GenerationVerdict> {
    for (name, v) in [("phi", phi), ("psi", psi)] {
        let n = v[0].norm_sqr() + v[1].norm_sqr();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("{name} has norm² {n}")));
        }
    }
    let rho0 = DensityMatrix::product(phi, psi)?;
    let pt0 = partial_transpose_matrix(rho0.matrix());
    let (_, vecs) = linalg::eigh(&to_dyn(&pt0));
    let kernel = vecs.columns(0, 3).into_owned();

    let deriv = partial_transpose_matrix(&rhs_equal_blocks(rho0.matrix(), block));
    let restricted = kernel.adjoint() * to_dyn(&deriv) * &kernel;
    let restricted = (&restricted + restricted.adjoint()) * Complex64::new(0.5, 0.0);
    let rate = linalg::eigvalsh(&restricted)[0];

    Ok(GenerationVerdict {
        generated: rate < -GENERATION_TOL,
        witness_eigenvalue_rate: rate,
        inconclusive: rate.abs() <= GENERATION_TOL,
    })
}
