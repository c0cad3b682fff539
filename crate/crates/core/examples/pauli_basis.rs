//! Pauli coefficients of a few two-qubit states and the τ invariant.

use commonbath::pauli::{check_appendix_algebra, tau_via_singlet, COEFFICIENT_NAMES};
use commonbath::{basis, DensityMatrix};
use num_complex::Complex64;

fn show(name: &str, rho: &DensityMatrix) {
    let r = rho.to_pauli();
    let nonzero: Vec<String> = COEFFICIENT_NAMES
        .iter()
        .zip(r.to_array())
        .filter(|(_, v)| v.abs() > 1e-12)
        .map(|(n, v)| format!("{n}={v:+.4}"))
        .collect();
    println!(
        "{name:<10} tau={:+.4} (via P: {:+.4})  {}",
        r.tau(),
        tau_via_singlet(rho.matrix()),
        nonzero.join(" ")
    );
}

fn main() {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);

    show("mixed", &DensityMatrix::maximally_mixed());
    show("singlet", &DensityMatrix::singlet());
    show("|00>", &DensityMatrix::product(&[one, zero], &[one, zero]).unwrap());
    show("|+->", &DensityMatrix::product(&[h, h], &[h, -h]).unwrap());
    show("werner .3", &DensityMatrix::werner(0.3).unwrap());

    // P and Q are the projectors that carry the conserved quantity.
    let b = basis();
    let p_check = (b.singlet * b.singlet - b.singlet).norm();
    println!("|P^2 - P| = {p_check:.1e}, Tr Q = {:.1}", b.triplet.trace().re);
    println!("product-rule residual over all index triples: {:.1e}", check_appendix_algebra());
}
