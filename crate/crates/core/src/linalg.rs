//! Small dense linear-algebra helpers shared across modules.
//!
//! Hermitian eigenproblems go through nalgebra's symmetric eigensolver; the
//! helpers here only sort the spectrum and wrap the common derived
//! quantities (square roots, trace distance, commutators).

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;

use crate::pauli::ComplexMatrix4;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Eigenvalues (ascending) and matching eigenvectors (as columns) of a
/// Hermitian matrix. Only the lower triangle is trusted.
pub fn eigh(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn eigvalsh(m: &DMatrix<Complex64>) -> Vec<f64> {
    eigh(m).0
}

pub fn eigvalsh4(m: &ComplexMatrix4) -> [f64; 4] {
    let v = eigvalsh(&to_dyn(m));
    [v[0], v[1], v[2], v[3]]
}

pub fn min_eigenvalue4(m: &ComplexMatrix4) -> f64 {
    eigvalsh4(m)[0]
}

/// Principal square root of a PSD Hermitian matrix; eigenvalues below zero
/// are clamped.
pub fn sqrtm_psd(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (values, vectors) = eigh(m);
    let n = m.nrows();
    let mut d = DMatrix::zeros(n, n);
    for (k, v) in values.iter().enumerate() {
        d[(k, k)] = re(v.max(0.0).sqrt());
    }
    &vectors * d * vectors.adjoint()
}

pub fn to_dyn(m: &ComplexMatrix4) -> DMatrix<Complex64> {
    DMatrix::from_fn(4, 4, |i, j| m[(i, j)])
}

pub fn from_dyn(m: &DMatrix<Complex64>) -> ComplexMatrix4 {
    assert_eq!(m.shape(), (4, 4));
    Matrix4::from_fn(|i, j| m[(i, j)])
}

pub fn kron2(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> ComplexMatrix4 {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

pub fn commutator(a: &ComplexMatrix4, b: &ComplexMatrix4) -> ComplexMatrix4 {
    a * b - b * a
}

pub fn anticommutator(a: &ComplexMatrix4, b: &ComplexMatrix4) -> ComplexMatrix4 {
    a * b + b * a
}

/// Largest entrywise modulus.
pub fn max_abs(m: &ComplexMatrix4) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_dyn(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix4, b: &ComplexMatrix4) -> f64 {
    max_abs(&(a - b))
}

pub fn hermiticity_error(m: &ComplexMatrix4) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// ½‖a − b‖₁ for Hermitian arguments.
pub fn trace_distance(a: &ComplexMatrix4, b: &ComplexMatrix4) -> f64 {
    let d = a - b;
    let h = (d + d.adjoint()) * re(0.5);
    0.5 * eigvalsh4(&h).iter().map(|x| x.abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_sorts_ascending_and_reconstructs() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                re(2.0),
                I,
                ZERO,
                -I,
                re(2.0),
                ZERO,
                ZERO,
                ZERO,
                re(-1.0),
            ],
        );
        let (vals, vecs) = eigh(&m);
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        assert!((vals[2] - 3.0).abs() < 1e-14);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            3,
            vals.iter().map(|&v| re(v)),
        ));
        let back = &vecs * d * vecs.adjoint();
        assert!(max_abs_dyn(&(back - m)) < 1e-13);
    }

    #[test]
    fn sqrtm_squares_back() {
        let m = DMatrix::from_row_slice(2, 2, &[re(2.0), re(1.0), re(1.0), re(2.0)]);
        let s = sqrtm_psd(&m);
        assert!(max_abs_dyn(&(&s * &s - m)) < 1e-14);
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states_is_one() {
        let mut a = ComplexMatrix4::zeros();
        let mut b = ComplexMatrix4::zeros();
        a[(0, 0)] = ONE;
        b[(3, 3)] = ONE;
        assert!((trace_distance(&a, &b) - 1.0).abs() < 1e-15);
        assert_eq!(trace_distance(&a, &a), 0.0);
    }
}
