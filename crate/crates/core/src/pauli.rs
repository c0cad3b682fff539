//! Two-qubit operator basis and the Pauli-coefficient state representation.
//!
//! Indices are 0-based in storage: `pauli[0..3]` are σ_x, σ_y, σ_z. Every
//! module that needs the Levi-Civita symbol or a basis operator goes through
//! this module so there is exactly one index convention in the crate.
//!
//! A state is written as
//!
//! ```text
//! ρ = ¼ [ 1⊗1 + Σ_i r0i 1⊗σ_i + Σ_i ri0 σ_i⊗1 + Σ_ij rij σ_i⊗σ_j ]
//! ```
//!
//! with 15 real coefficients ([`PauliCoefficients`]).

use std::sync::OnceLock;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, kron2, re, I, ONE, ZERO};
use crate::{Error, Result};

pub type ComplexMatrix4 = Matrix4<Complex64>;

/// Levi-Civita symbol on 0-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[inline]
pub(crate) fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// The fixed operator basis of the two-qubit problem.
#[derive(Debug, Clone)]
pub struct Basis {
    /// Single-qubit Pauli matrices σ_x, σ_y, σ_z.
    pub pauli: [Matrix2<Complex64>; 3],
    /// σ_i ⊗ 1.
    pub first: [ComplexMatrix4; 3],
    /// 1 ⊗ σ_i.
    pub second: [ComplexMatrix4; 3],
    /// Collective operators Σ_i = σ_i⊗1 + 1⊗σ_i.
    pub collective: [ComplexMatrix4; 3],
    /// Symmetrized products S_ij = σ_i⊗σ_j + σ_j⊗σ_i.
    pub sym: [[ComplexMatrix4; 3]; 3],
    /// S = Σ_i S_ii.
    pub sym_total: ComplexMatrix4,
    /// Singlet projector P = ¼ (1⊗1 − S/2).
    pub singlet: ComplexMatrix4,
    /// Q = 1 − P, projector on the triplet sector.
    pub triplet: ComplexMatrix4,
    /// σ_y ⊗ σ_y, used by the spin flip in the concurrence.
    pub yy: ComplexMatrix4,
}

impl Basis {
    pub fn build() -> Self {
        let pauli = [
            Matrix2::new(ZERO, ONE, ONE, ZERO),
            Matrix2::new(ZERO, -I, I, ZERO),
            Matrix2::new(ONE, ZERO, ZERO, -ONE),
        ];
        let id2 = Matrix2::<Complex64>::identity();
        let first = pauli.map(|s| kron2(&s, &id2));
        let second = pauli.map(|s| kron2(&id2, &s));
        let collective = [0, 1, 2].map(|i| first[i] + second[i]);
        let sym = [0, 1, 2].map(|i| {
            [0, 1, 2].map(|j| kron2(&pauli[i], &pauli[j]) + kron2(&pauli[j], &pauli[i]))
        });
        let sym_total = sym[0][0] + sym[1][1] + sym[2][2];
        let id4 = ComplexMatrix4::identity();
        let singlet = (id4 - sym_total * re(0.5)) * re(0.25);
        let triplet = id4 - singlet;
        let yy = kron2(&pauli[1], &pauli[1]);
        Basis {
            pauli,
            first,
            second,
            collective,
            sym,
            sym_total,
            singlet,
            triplet,
            yy,
        }
    }

    /// σ_i ⊗ σ_j.
    pub fn product(&self, i: usize, j: usize) -> ComplexMatrix4 {
        kron2(&self.pauli[i], &self.pauli[j])
    }
}

/// Shared, lazily built basis.
pub fn basis() -> &'static Basis {
    static BASIS: OnceLock<Basis> = OnceLock::new();
    BASIS.get_or_init(Basis::build)
}

/// Expansion coefficients of a two-qubit operator along `{1, σ_i} ⊗ {1, σ_j}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PauliCoefficients {
    /// ρ_0i, coefficients of 1 ⊗ σ_i.
    pub r0i: [f64; 3],
    /// ρ_i0, coefficients of σ_i ⊗ 1.
    pub ri0: [f64; 3],
    /// ρ_ij, coefficients of σ_i ⊗ σ_j.
    pub rij: [[f64; 3]; 3],
}

/// Column names in the order of [`PauliCoefficients::to_array`].
pub const COEFFICIENT_NAMES: [&str; 15] = [
    "r01", "r02", "r03", "r10", "r20", "r30", "r11", "r12", "r13", "r21", "r22", "r23", "r31",
    "r32", "r33",
];

impl PauliCoefficients {
    /// The maximally mixed state.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Trace of the correlation block, τ = Σ_i ρ_ii.
    pub fn tau(&self) -> f64 {
        self.rij[0][0] + self.rij[1][1] + self.rij[2][2]
    }

    /// Flattened as `r0i, ri0, rij` (row-major).
    pub fn to_array(&self) -> [f64; 15] {
        let mut out = [0.0; 15];
        out[..3].copy_from_slice(&self.r0i);
        out[3..6].copy_from_slice(&self.ri0);
        for i in 0..3 {
            out[6 + 3 * i..9 + 3 * i].copy_from_slice(&self.rij[i]);
        }
        out
    }

    pub fn from_array(v: &[f64; 15]) -> Self {
        let mut c = Self::zero();
        c.r0i.copy_from_slice(&v[..3]);
        c.ri0.copy_from_slice(&v[3..6]);
        for i in 0..3 {
            c.rij[i].copy_from_slice(&v[6 + 3 * i..9 + 3 * i]);
        }
        c
    }

    /// Operator with unit identity coefficient, i.e. a trace-one matrix.
    pub fn to_matrix(&self) -> ComplexMatrix4 {
        let b = basis();
        let mut m = ComplexMatrix4::identity();
        for i in 0..3 {
            m += b.second[i] * re(self.r0i[i]);
            m += b.first[i] * re(self.ri0[i]);
            for j in 0..3 {
                m += b.product(i, j) * re(self.rij[i][j]);
            }
        }
        m * re(0.25)
    }

    /// The increment form: same expansion without the identity term.
    /// Used for time derivatives, which are traceless.
    pub fn to_traceless_matrix(&self) -> ComplexMatrix4 {
        self.to_matrix() - ComplexMatrix4::identity() * re(0.25)
    }

    /// Coefficients of an arbitrary 4×4 matrix; ignores its trace.
    pub fn from_matrix(m: &ComplexMatrix4) -> Self {
        decompose(m).coefficients
    }

    /// Swap the two qubits.
    pub fn swapped(&self) -> Self {
        let mut rij = [[0.0; 3]; 3];
        for (i, row) in rij.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.rij[j][i];
            }
        }
        PauliCoefficients {
            r0i: self.ri0,
            ri0: self.r0i,
            rij,
        }
    }

    /// Largest antisymmetric component, max over |ρ_0i − ρ_i0| and |ρ_ij − ρ_ji|.
    pub fn antisymmetric_norm(&self) -> f64 {
        let mut m = 0.0_f64;
        for i in 0..3 {
            m = m.max((self.r0i[i] - self.ri0[i]).abs());
            for j in 0..3 {
                m = m.max((self.rij[i][j] - self.rij[j][i]).abs());
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .fold(0.0, |acc, (a, b)| f64::max(acc, (a - b).abs()))
    }
}

/// Result of decomposing a matrix along the Pauli basis, with diagnostics
/// that are reported rather than silently corrected.
#[derive(Debug, Clone, Copy)]
pub struct Decomposition {
    pub coefficients: PauliCoefficients,
    /// Tr m − 1.
    pub trace_error: f64,
    /// Largest imaginary part dropped from the coefficients.
    pub imaginary_residual: f64,
}

pub fn decompose(m: &ComplexMatrix4) -> Decomposition {
    let b = basis();
    let mut c = PauliCoefficients::zero();
    let mut imag = 0.0_f64;
    let mut take = |z: Complex64| {
        imag = imag.max(z.im.abs());
        z.re
    };
    for i in 0..3 {
        c.r0i[i] = take((m * b.second[i]).trace());
        c.ri0[i] = take((m * b.first[i]).trace());
        for j in 0..3 {
            c.rij[i][j] = take((m * b.product(i, j)).trace());
        }
    }
    let tr = m.trace();
    Decomposition {
        coefficients: c,
        trace_error: (tr - ONE).norm(),
        imaginary_residual: imag,
    }
}

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = -1e-10;

/// A 4×4 Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(ComplexMatrix4);

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(mat: ComplexMatrix4) -> Result<Self> {
        let herm = linalg::hermiticity_error(&mat);
        if herm >= HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian ({herm:.3e})")));
        }
        let tr = (mat.trace() - ONE).norm();
        if tr >= TRACE_TOL {
            return Err(Error::InvalidState(format!("trace differs from 1 by {tr:.3e}")));
        }
        let min = linalg::min_eigenvalue4(&mat);
        if min < PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix(mat))
    }

    /// Wraps a matrix without checks. Positivity of intermediate states is
    /// flagged by callers, not enforced here.
    pub fn new_unchecked(mat: ComplexMatrix4) -> Self {
        DensityMatrix(mat)
    }

    pub fn from_pauli(c: &PauliCoefficients) -> Self {
        DensityMatrix(c.to_matrix())
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(ComplexMatrix4::identity() * re(0.25))
    }

    /// The singlet projector P.
    pub fn singlet() -> Self {
        DensityMatrix(basis().singlet)
    }

    /// |v⟩⟨v| for a normalized 4-vector.
    pub fn pure(v: &[Complex64; 4]) -> Result<Self> {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("state vector has norm² {norm}")));
        }
        Ok(DensityMatrix(Matrix4::from_fn(|r, c| v[r] * v[c].conj())))
    }

    /// |φ⟩⟨φ| ⊗ |ψ⟩⟨ψ|.
    pub fn product(phi: &[Complex64; 2], psi: &[Complex64; 2]) -> Result<Self> {
        let v = [
            phi[0] * psi[0],
            phi[0] * psi[1],
            phi[1] * psi[0],
            phi[1] * psi[1],
        ];
        Self::pure(&v)
    }

    /// The one-parameter family s/3·Q + (1 − s)·P interpolating between the
    /// singlet (s = 0) and the maximally mixed state (s = 3/4).
    pub fn werner(s: f64) -> Result<Self> {
        if !(0.0..=0.75).contains(&s) {
            return Err(Error::InvalidParameter(format!(
                "werner parameter s = {s} outside [0, 3/4]"
            )));
        }
        let b = basis();
        Ok(DensityMatrix(
            b.triplet * re(s / 3.0) + b.singlet * re(1.0 - s),
        ))
    }

    /// The P/Q mixture with a prescribed τ: Tr[Pρ] = (1 − τ)/4.
    pub fn singlet_triplet_mixture(tau: f64) -> Result<Self> {
        if !(-3.0..=1.0).contains(&tau) {
            return Err(Error::InvalidParameter(format!("tau = {tau} outside [-3, 1]")));
        }
        let p = (1.0 - tau) / 4.0;
        let b = basis();
        Ok(DensityMatrix(
            b.singlet * re(p) + b.triplet * re((1.0 - p) / 3.0),
        ))
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix4 {
        self.0
    }

    pub fn to_pauli(&self) -> PauliCoefficients {
        PauliCoefficients::from_matrix(&self.0)
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        linalg::eigvalsh4(&self.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn trace_error(&self) -> f64 {
        (self.0.trace() - ONE).norm()
    }

    pub fn tau(&self) -> f64 {
        tau_of(&self.to_pauli())
    }
}

/// τ of a coefficient set.
pub fn tau_of(state: &PauliCoefficients) -> f64 {
    state.tau()
}

/// τ computed through the singlet weight, τ = 1 − 4 Tr[Pρ].
pub fn tau_via_singlet(m: &ComplexMatrix4) -> f64 {
    1.0 - 4.0 * (basis().singlet * m).trace().re
}

/// Largest deviation of the closed multiplication table for the Σ_i and
/// S_ij operators over every index combination.
pub fn check_appendix_algebra() -> f64 {
    check_appendix_algebra_with(levi_civita)
}

/// Same as [`check_appendix_algebra`] with an injectable Levi-Civita symbol,
/// so a corrupted symbol can be shown to break the table.
#[allow(clippy::needless_range_loop)]
pub fn check_appendix_algebra_with(eps: impl Fn(usize, usize, usize) -> f64) -> f64 {
    let b = basis();
    let id = ComplexMatrix4::identity();
    let sg = &b.collective;
    let s = &b.sym;
    let st = &b.sym_total;
    let ci = |x: f64| Complex64::new(0.0, x);
    let mut worst = 0.0_f64;

    for i in 0..3 {
        for j in 0..3 {
            let mut rhs = id * re(2.0 * delta(i, j)) + s[i][j];
            for k in 0..3 {
                rhs += sg[k] * ci(eps(i, j, k));
            }
            worst = worst.max(linalg::max_abs_diff(&(sg[i] * sg[j]), &rhs));

            for k in 0..3 {
                let base = sg[j] * re(delta(i, k)) + sg[i] * re(delta(j, k));
                let mut cross = ComplexMatrix4::zeros();
                for l in 0..3 {
                    cross += s[l][j] * ci(eps(i, k, l)) + s[i][l] * ci(eps(j, k, l));
                }
                worst = worst.max(linalg::max_abs_diff(&(s[i][j] * sg[k]), &(base + cross)));
                worst = worst.max(linalg::max_abs_diff(&(sg[k] * s[i][j]), &(base - cross)));

                for l in 0..3 {
                    let mut rhs = id * re(2.0 * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k)));
                    for r in 0..3 {
                        let c = delta(i, k) * eps(j, l, r)
                            + delta(j, k) * eps(i, l, r)
                            + delta(i, l) * eps(j, k, r)
                            + delta(j, l) * eps(i, k, r);
                        rhs += sg[r] * ci(c);
                    }
                    rhs -= st
                        * re(2.0 * delta(i, j) * delta(k, l)
                            - delta(i, k) * delta(j, l)
                            - delta(i, l) * delta(j, k));
                    rhs += (s[k][l] * re(delta(i, j)) + s[i][j] * re(delta(k, l))) * re(2.0);
                    rhs -= s[j][l] * re(delta(i, k))
                        + s[j][k] * re(delta(i, l))
                        + s[i][l] * re(delta(j, k))
                        + s[i][k] * re(delta(j, l));
                    worst = worst.max(linalg::max_abs_diff(&(s[i][j] * s[k][l]), &rhs));
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, max_abs};

    #[test]
    fn collective_z_is_diagonal() {
        let expected = ComplexMatrix4::from_diagonal(&nalgebra::Vector4::new(
            re(2.0),
            ZERO,
            ZERO,
            re(-2.0),
        ));
        assert_eq!(basis().collective[2], expected);
    }

    #[test]
    fn projector_identities() {
        let b = basis();
        let (p, q) = (b.singlet, b.triplet);
        assert!(linalg::max_abs_diff(&(p * p), &p) < 1e-15);
        assert!(linalg::max_abs_diff(&(q * q), &q) < 1e-15);
        assert!(max_abs(&(p * q)) < 1e-15);
        assert!((p.trace() - ONE).norm() < 1e-15);
    }

    #[test]
    fn singlet_commutes_with_collective_operators() {
        let b = basis();
        for i in 0..3 {
            assert!(max_abs(&commutator(&b.sym_total, &b.collective[i])) < 1e-14);
            assert!(max_abs(&commutator(&b.singlet, &b.collective[i])) < 1e-14);
        }
    }

    #[test]
    fn all_basis_operators_hermitian() {
        let b = basis();
        for i in 0..3 {
            assert_eq!(linalg::hermiticity_error(&b.collective[i]), 0.0);
            for j in 0..3 {
                assert_eq!(linalg::hermiticity_error(&b.sym[i][j]), 0.0);
            }
        }
        assert_eq!(linalg::hermiticity_error(&b.singlet), 0.0);
    }

    #[test]
    fn zero_coefficients_give_maximally_mixed() {
        let m = PauliCoefficients::zero().to_matrix();
        assert_eq!(m, ComplexMatrix4::identity() * re(0.25));
    }

    #[test]
    fn ground_product_state_coefficients() {
        let up = [ONE, ZERO];
        let c = DensityMatrix::product(&up, &up).unwrap().to_pauli();
        assert_eq!(c.r0i, [0.0, 0.0, 1.0]);
        assert_eq!(c.ri0, [0.0, 0.0, 1.0]);
        let mut rij = [[0.0; 3]; 3];
        rij[2][2] = 1.0;
        assert_eq!(c.rij, rij);
        assert_eq!(c.tau(), 1.0);
    }

    #[test]
    fn singlet_tau_is_minus_three() {
        let p = DensityMatrix::singlet();
        assert!((p.tau() + 3.0).abs() < 1e-15);
        assert!((tau_via_singlet(p.matrix()) + 3.0).abs() < 1e-15);
        assert_eq!(tau_of(&PauliCoefficients::zero()), 0.0);
    }

    #[test]
    fn werner_at_three_quarters_is_maximally_mixed() {
        let w = DensityMatrix::werner(0.75).unwrap();
        assert!(linalg::max_abs_diff(w.matrix(), DensityMatrix::maximally_mixed().matrix()) < 1e-15);
        assert!(w.tau().abs() < 1e-15);
        assert!(DensityMatrix::werner(0.8).is_err());
    }

    #[test]
    fn appendix_spot_checks() {
        let b = basis();
        let id = ComplexMatrix4::identity();
        let sg = &b.collective;
        assert!(linalg::max_abs_diff(&(sg[0] * sg[0]), &(id * re(2.0) + b.sym[0][0])) < 1e-15);
        let comm = sg[0] * sg[1] - sg[1] * sg[0];
        assert!(linalg::max_abs_diff(&comm, &(sg[2] * Complex64::new(0.0, 2.0))) < 1e-15);
        let lhs = b.sym[0][0] * b.sym[1][1];
        let rhs = b.sym_total * re(-2.0) + (b.sym[0][0] + b.sym[1][1]) * re(2.0);
        assert!(linalg::max_abs_diff(&lhs, &rhs) < 1e-15);
    }

    #[test]
    fn appendix_table_holds() {
        assert!(check_appendix_algebra() < 1e-13);
    }

    #[test]
    fn corrupted_epsilon_breaks_appendix_table() {
        let broken = |i, j, k| -levi_civita(i, j, k);
        assert!(check_appendix_algebra_with(broken) > 1.0);
    }

    #[test]
    fn density_matrix_validation() {
        let mut m = ComplexMatrix4::identity() * re(0.25);
        assert!(DensityMatrix::new(m).is_ok());
        m[(0, 0)] = re(0.5);
        assert!(DensityMatrix::new(m).is_err());
        let d = decompose(&m);
        assert!((d.trace_error - 0.25).abs() < 1e-15);
        let neg = ComplexMatrix4::from_diagonal(&nalgebra::Vector4::new(
            re(1.1),
            re(-0.1),
            ZERO,
            ZERO,
        ));
        assert!(DensityMatrix::new(neg).is_err());
    }

    #[test]
    fn levi_civita_is_total() {
        let mut sum = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    sum += levi_civita(i, j, k).abs();
                }
            }
        }
        assert_eq!(sum, 6.0);
    }
}
