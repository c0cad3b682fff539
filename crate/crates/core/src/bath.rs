//! Bath specification: the equal-block Kossakowski data 𝒜 = A + i ε·B, its
//! positivity, the full 6×6 coefficient matrix and the principal frame in
//! which the closed-form stationary states are written.

use nalgebra::{DMatrix, Matrix2, Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;

use crate::linalg::{self, re};
use crate::pauli::levi_civita;
use crate::{Error, Result};

/// Tolerance on the asymmetry of the stored A.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Lowest admissible eigenvalue of 𝒜, relative to max(1, ‖𝒜‖).
pub const PSD_TOL: f64 = 1e-12;
/// Tolerance on |A·B̂ − (B̂ᵀAB̂)·B̂|, relative to the largest rate, deciding
/// whether B lies along a principal axis.
pub const ALIGNMENT_TOL: f64 = 1e-10;

/// Real symmetric A plus real vector B, with 𝒜_ij = A_ij + i Σ_k ε_ijk B_k
/// positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KossakowskiBlock {
    a: Matrix3<f64>,
    b: Vector3<f64>,
    symmetrized: bool,
    boundary: bool,
}

/// 𝒜 for arbitrary (A, B), without validation.
pub fn hermitian_block(a: &Matrix3<f64>, b: &Vector3<f64>) -> Matrix3<Complex64> {
    Matrix3::from_fn(|i, j| {
        let im: f64 = (0..3).map(|k| levi_civita(i, j, k) * b[k]).sum();
        Complex64::new(a[(i, j)], im)
    })
}

fn block_eigenvalues(a: &Matrix3<f64>, b: &Vector3<f64>) -> Vec<f64> {
    let h = hermitian_block(a, b);
    linalg::eigvalsh(&DMatrix::from_fn(3, 3, |i, j| h[(i, j)]))
}

/// Builds and validates a bath.
///
/// An A that is asymmetric by at most [`SYMMETRY_TOL`] is symmetrized and
/// flagged via [`KossakowskiBlock::was_symmetrized`]; beyond that it is
/// rejected. A non-PSD 𝒜 is rejected with its lowest eigenvalue.
pub fn make_bath(a: Matrix3<f64>, b: Vector3<f64>) -> Result<KossakowskiBlock> {
    if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("bath entries must be finite".into()));
    }
    let asymmetry = (a - a.transpose()).amax();
    if asymmetry > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let symmetrized = asymmetry > 0.0;
    let a = (a + a.transpose()) * 0.5;
    let eig = block_eigenvalues(&a, &b);
    let scale = eig.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    if eig[0] < -PSD_TOL * scale {
        return Err(Error::NotPositive { eigenvalue: eig[0] });
    }
    let mut block = KossakowskiBlock {
        a,
        b,
        symmetrized,
        boundary: false,
    };
    let frame = principal_frame(&block);
    block.boundary = frame.boundary;
    Ok(block)
}

/// Bath already in the principal frame: A = diag(lambda), B along axis 3.
pub fn diagonal_bath(lambda: [f64; 3], b3: f64) -> Result<KossakowskiBlock> {
    make_bath(
        Matrix3::from_diagonal(&Vector3::from(lambda)),
        Vector3::new(0.0, 0.0, b3),
    )
}

impl KossakowskiBlock {
    /// The zero bath; the dynamics is frozen.
    pub fn zero() -> Self {
        KossakowskiBlock {
            a: Matrix3::zeros(),
            b: Vector3::zeros(),
            symmetrized: false,
            boundary: false,
        }
    }

    pub fn a(&self) -> &Matrix3<f64> {
        &self.a
    }

    pub fn b(&self) -> &Vector3<f64> {
        &self.b
    }

    /// Trace of A.
    pub fn a_trace(&self) -> f64 {
        self.a.trace()
    }

    /// The Hermitian 3×3 block 𝒜.
    pub fn hermitian(&self) -> Matrix3<Complex64> {
        hermitian_block(&self.a, &self.b)
    }

    /// Eigenvalues of 𝒜, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        block_eigenvalues(&self.a, &self.b)
    }

    /// Positive semidefinite square root of 𝒜.
    pub fn sqrt(&self) -> Matrix3<Complex64> {
        let h = self.hermitian();
        let s = linalg::sqrtm_psd(&DMatrix::from_fn(3, 3, |i, j| h[(i, j)]));
        Matrix3::from_fn(|i, j| s[(i, j)])
    }

    pub fn was_symmetrized(&self) -> bool {
        self.symmetrized
    }

    /// B² = λ₁λ₂ in the principal frame: the bath sits on the positivity
    /// boundary and the full-rank stationary construction degenerates.
    pub fn is_boundary(&self) -> bool {
        self.boundary
    }

    /// Largest rate scale, max(λ_i, ‖B‖, 1); used for default step sizes.
    pub fn rate_scale(&self) -> f64 {
        let eig = SymmetricEigen::new(self.a).eigenvalues;
        eig.iter()
            .fold(self.b.norm().max(1.0), |m, x| m.max(x.abs()))
    }

    /// Same bath seen in a rotated frame: (R A Rᵀ, R B) for a proper rotation R.
    pub fn rotated(&self, r: &Matrix3<f64>) -> Result<Self> {
        make_bath(r * self.a * r.transpose(), r * self.b)
    }
}

/// The 6×6 coefficient matrix [[𝒜, 𝒜], [𝒜, 𝒜]] of the general dissipator.
pub fn assemble_full_c(block: &KossakowskiBlock) -> DMatrix<Complex64> {
    let h = block.hermitian();
    DMatrix::from_fn(6, 6, |r, c| h[(r % 3, c % 3)])
}

/// Orthogonal frame diagonalizing A.
///
/// `rotation` has the frame axes as rows, so `rotation · A · rotationᵀ =
/// diag(lambda)` and `b_rot = rotation · B`. When B lies along an eigenvector
/// of A, the frame is arranged so that B is on axis 3 and λ₁ ≥ λ₂ on the
/// remaining axes; otherwise the axes follow descending eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalFrame {
    pub rotation: Matrix3<f64>,
    pub lambda: [f64; 3],
    pub b_rot: Vector3<f64>,
    pub closed_form_applicable: bool,
    pub boundary: bool,
}

impl PrincipalFrame {
    /// Signed B along axis 3.
    pub fn b3(&self) -> f64 {
        self.b_rot[2]
    }

    /// Eigenvalues of A in descending order, independent of axis placement.
    pub fn eigenvalues_descending(&self) -> [f64; 3] {
        let mut l = self.lambda;
        l.sort_by(|x, y| y.total_cmp(x));
        l
    }

    /// Vector from frame to input coordinates.
    pub fn vector_to_input(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.transpose() * v
    }

    /// Rank-2 tensor from frame to input coordinates.
    pub fn tensor_to_input(&self, m: &Matrix3<f64>) -> Matrix3<f64> {
        self.rotation.transpose() * m * self.rotation
    }
}

fn canonical_sign(mut v: Vector3<f64>) -> Vector3<f64> {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v = -v;
        }
    }
    v
}

/// Principal frame of a bath with deterministic axis order and signs.
pub fn principal_frame(block: &KossakowskiBlock) -> PrincipalFrame {
    let eig = SymmetricEigen::new(block.a);
    let mut pairs: Vec<(f64, Vector3<f64>)> = (0..3)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned()))
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));

    let scale = pairs[0].0.abs().max(1.0);
    let b = block.b;
    let b_norm = b.norm();

    // B is on a principal axis iff A·B̂ ∥ B̂. Testing this directly stays
    // well conditioned when eigenvalues are (nearly) degenerate, where the
    // eigenvectors themselves are not.
    let aligned = if b_norm == 0.0 {
        Some(None)
    } else {
        let b_hat = canonical_sign(b / b_norm);
        let ab = block.a * b_hat;
        let l3 = b_hat.dot(&ab);
        ((ab - b_hat * l3).norm() <= ALIGNMENT_TOL * scale).then_some(Some((b_hat, l3)))
    };

    let (axes, lambda, applicable) = match aligned {
        Some(Some((e3, l3))) => {
            // Diagonalize A on the plane orthogonal to B.
            let seed = if e3.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
            let u = (seed - e3 * e3.dot(&seed)).normalize();
            let v = e3.cross(&u);
            let m = Matrix2::new(
                u.dot(&(block.a * u)),
                u.dot(&(block.a * v)),
                v.dot(&(block.a * u)),
                v.dot(&(block.a * v)),
            );
            let m = (m + m.transpose()) * 0.5;
            let eig2 = SymmetricEigen::new(m);
            let (hi, lo) = if eig2.eigenvalues[0] >= eig2.eigenvalues[1] { (0, 1) } else { (1, 0) };
            let c = eig2.eigenvectors.column(hi);
            let e1 = canonical_sign(u * c[0] + v * c[1]);
            let e2 = e3.cross(&e1);
            ([e1, e2, e3], [eig2.eigenvalues[hi], eig2.eigenvalues[lo], l3], true)
        }
        Some(None) => {
            let e1 = canonical_sign(pairs[0].1);
            let e2 = canonical_sign(pairs[1].1);
            ([e1, e2, e1.cross(&e2)], [pairs[0].0, pairs[1].0, pairs[2].0], true)
        }
        None => {
            let e1 = canonical_sign(pairs[0].1);
            let e2 = canonical_sign(pairs[1].1);
            ([e1, e2, e1.cross(&e2)], [pairs[0].0, pairs[1].0, pairs[2].0], false)
        }
    };

    let rotation = Matrix3::from_rows(&[axes[0].transpose(), axes[1].transpose(), axes[2].transpose()]);
    let b_rot = rotation * b;
    let boundary = if applicable {
        let b3 = b_rot[2];
        b3 != 0.0 && b3 * b3 >= lambda[0] * lambda[1] - PSD_TOL * scale * scale
    } else {
        b_norm > 0.0 && block_eigenvalues(&block.a, &b)[0] <= PSD_TOL * scale
    };
    PrincipalFrame {
        rotation,
        lambda,
        b_rot,
        closed_form_applicable: applicable,
        boundary,
    }
}

/// Eigenvalues of C in terms of 𝒜: {2·eig(𝒜)} ∪ {0, 0, 0}, ascending.
pub fn full_c_spectrum_from_block(block: &KossakowskiBlock) -> Vec<f64> {
    let mut v: Vec<f64> = block.eigenvalues().iter().map(|x| 2.0 * x).collect();
    v.extend([0.0; 3]);
    v.sort_by(f64::total_cmp);
    v
}

/// Convenience for tests and examples: a complex 6×6 from real entries.
pub fn real_c(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(l: [f64; 3]) -> Matrix3<f64> {
        Matrix3::from_diagonal(&Vector3::from(l))
    }

    #[test]
    fn valid_isotropic_bath() {
        let block = make_bath(diag([1.0, 1.0, 1.0]), Vector3::new(0.0, 0.0, 0.5)).unwrap();
        assert!(!block.is_boundary());
        let eig = block.eigenvalues();
        assert!((eig[0] - 0.5).abs() < 1e-14);
        assert!((eig[2] - 1.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_positive_block() {
        match make_bath(diag([1.0, 1.0, 1.0]), Vector3::new(0.0, 0.0, 2.0)) {
            Err(Error::NotPositive { eigenvalue }) => assert!((eigenvalue + 1.0).abs() < 1e-13),
            other => panic!("expected NotPositive, got {other:?}"),
        }
    }

    #[test]
    fn zero_bath_is_valid() {
        let block = make_bath(Matrix3::zeros(), Vector3::zeros()).unwrap();
        assert_eq!(block, KossakowskiBlock::zero());
        assert_eq!(assemble_full_c(&block), DMatrix::zeros(6, 6));
    }

    #[test]
    fn asymmetric_a() {
        let mut a = diag([1.0, 1.0, 1.0]);
        a[(0, 1)] = 1e-13;
        let block = make_bath(a, Vector3::zeros()).unwrap();
        assert!(block.was_symmetrized());
        assert_eq!(block.a()[(0, 1)], block.a()[(1, 0)]);
        a[(0, 1)] = 1e-6;
        assert!(matches!(make_bath(a, Vector3::zeros()), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn full_c_of_identity_block() {
        let block = make_bath(diag([1.0, 1.0, 1.0]), Vector3::zeros()).unwrap();
        let eig = linalg::eigvalsh(&assemble_full_c(&block));
        let expected = [0.0, 0.0, 0.0, 2.0, 2.0, 2.0];
        for (x, y) in eig.iter().zip(expected) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn frame_permutes_diagonal_a() {
        let block = make_bath(diag([2.0, 1.0, 3.0]), Vector3::new(0.0, 0.0, 0.4)).unwrap();
        let f = principal_frame(&block);
        assert!(f.closed_form_applicable);
        assert_eq!(f.eigenvalues_descending(), [3.0, 2.0, 1.0]);
        assert_eq!(f.lambda, [2.0, 1.0, 3.0]);
        assert!((f.b3() - 0.4).abs() < 1e-15);
        assert!(f.b_rot[0].abs() < 1e-15 && f.b_rot[1].abs() < 1e-15);
        assert!((f.rotation.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frame_exploits_degeneracy_to_align_b() {
        let block = make_bath(diag([1.0, 1.0, 1.0]), Vector3::new(0.3, 0.4, 0.0)).unwrap();
        let f = principal_frame(&block);
        assert!(f.closed_form_applicable);
        assert!((f.b3().abs() - 0.5).abs() < 1e-12);
        assert!(f.b_rot[0].abs() < 1e-12 && f.b_rot[1].abs() < 1e-12);
        let d = f.rotation * block.a() * f.rotation.transpose();
        assert!((d - diag(f.lambda)).amax() < 1e-12);
        assert!((f.rotation * f.rotation.transpose() - Matrix3::identity()).amax() < 1e-12);
        assert!((f.rotation.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn misaligned_b_is_not_applicable() {
        let block = make_bath(diag([3.0, 2.0, 1.0]), Vector3::new(0.2, 0.2, 0.2)).unwrap();
        let f = principal_frame(&block);
        assert!(!f.closed_form_applicable);
        assert_eq!(f.lambda, [3.0, 2.0, 1.0]);
    }

    #[test]
    fn partially_degenerate_a_aligns_inside_eigenspace() {
        // λ = 2 twofold in the xy-plane, B inside that plane.
        let block = make_bath(diag([2.0, 2.0, 1.0]), Vector3::new(0.5, -0.5, 0.0)).unwrap();
        let f = principal_frame(&block);
        assert!(f.closed_form_applicable);
        assert!((f.lambda[2] - 2.0).abs() < 1e-14);
        assert!(f.lambda[0] >= f.lambda[1]);
        assert!((f.b3().abs() - 0.5_f64.sqrt()).abs() < 1e-12);
        let d = f.rotation * block.a() * f.rotation.transpose();
        assert!((d - diag(f.lambda)).amax() < 1e-12);
    }

    #[test]
    fn boundary_flag() {
        let block = make_bath(diag([1.0, 1.0, 1.0]), Vector3::new(0.0, 0.0, 1.0)).unwrap();
        assert!(block.is_boundary());
        let block = make_bath(diag([2.0, 1.0, 1.0]), Vector3::new(0.0, 0.0, 1.0)).unwrap();
        assert!(!block.is_boundary());
    }
}
