//! Seeded samplers for states, baths and rotations used by the self-check
//! suites, tests and examples.

use nalgebra::{Matrix3, Matrix4, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bath::{make_bath, KossakowskiBlock};
use crate::linalg::re;
use crate::pauli::{ComplexMatrix4, DensityMatrix};

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn cgauss<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(gauss(rng), gauss(rng))
}

/// Ginibre-distributed mixed state, G G† / Tr(G G†).
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let g: ComplexMatrix4 = Matrix4::from_fn(|_, _| cgauss(rng));
    let m = g * g.adjoint();
    let tr = m.trace().re;
    let m = m * re(1.0 / tr);
    DensityMatrix::new_unchecked((m + m.adjoint()) * re(0.5))
}

/// Haar-random single-qubit state vector.
pub fn qubit<R: Rng + ?Sized>(rng: &mut R) -> [Complex64; 2] {
    let v = [cgauss(rng), cgauss(rng)];
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// Pure product state |φ⟩⟨φ| ⊗ |ψ⟩⟨ψ| with Haar-random factors.
pub fn product_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    DensityMatrix::product(&qubit(rng), &qubit(rng)).expect("normalized factors")
}

/// Haar-random proper rotation.
pub fn rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let g = Matrix3::from_fn(|_, _| gauss(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..3 {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Generic valid bath: 𝒜 = G G† for a complex Gaussian G, so B is in
/// general not an eigenvector of A.
pub fn bath<R: Rng + ?Sized>(rng: &mut R) -> KossakowskiBlock {
    let g = Matrix3::from_fn(|_, _| cgauss(rng) * 0.6);
    let h = g * g.adjoint();
    let a = h.map(|z| z.re);
    let b = Vector3::new(h[(1, 2)].im, h[(2, 0)].im, h[(0, 1)].im);
    make_bath((a + a.transpose()) * 0.5, b).expect("G G† is positive")
}

/// Bath for which the closed forms apply: random principal axes, rates in
/// `[lo, hi]`, B along one principal axis with B² = f·λ_aλ_b and f drawn
/// from `[0, max_fraction]`.
pub fn applicable_bath<R: Rng + ?Sized>(
    rng: &mut R,
    lo: f64,
    hi: f64,
    max_fraction: f64,
) -> KossakowskiBlock {
    let lambda: [f64; 3] = std::array::from_fn(|_| rng.random_range(lo..hi));
    let axis = rng.random_range(0..3usize);
    let others: Vec<usize> = (0..3).filter(|&k| k != axis).collect();
    let f = rng.random_range(0.0..max_fraction);
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let b_mag = sign * (f * lambda[others[0]] * lambda[others[1]]).sqrt();
    let q = rotation(rng);
    let a = q * Matrix3::from_diagonal(&Vector3::from(lambda)) * q.transpose();
    let mut e = Vector3::zeros();
    e[axis] = b_mag;
    make_bath((a + a.transpose()) * 0.5, q * e).expect("interior bath")
}
