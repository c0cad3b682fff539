//! Which product states does the bath entangle right away?

use commonbath::bath::diagonal_bath;
use commonbath::entanglement::partial_transpose;
use commonbath::generator::propagate;
use commonbath::{generation_test, DensityMatrix};
use num_complex::Complex64;

fn main() {
    let block = diagonal_bath([1.0, 1.0, 1.0], 0.5).unwrap();
    let c = |x: f64| Complex64::new(x, 0.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let states = [
        ("|0>|0>", [c(1.0), c(0.0)], [c(1.0), c(0.0)]),
        ("|0>|1>", [c(1.0), c(0.0)], [c(0.0), c(1.0)]),
        ("|1>|1>", [c(0.0), c(1.0)], [c(0.0), c(1.0)]),
        ("|+>|->", [c(s), c(s)], [c(s), c(-s)]),
        ("|+>|+i>", [c(s), c(s)], [c(s), Complex64::new(0.0, s)]),
    ];

    println!("{:<9} {:>12} {:>10} {:>16}", "state", "rate", "verdict", "min PT (t=1e-3)");
    for (name, phi, psi) in states {
        let v = generation_test(&phi, &psi, &block).unwrap();
        let start = DensityMatrix::product(&phi, &psi).unwrap().to_pauli();
        let later = propagate(&start, &block, 1e-3, 1e-5).unwrap();
        let (_, min_pt) = partial_transpose(&DensityMatrix::from_pauli(&later));
        let verdict = if v.generated {
            "entangles"
        } else if v.inconclusive {
            "flat"
        } else {
            "no"
        };
        println!("{name:<9} {:>12.6} {verdict:>10} {min_pt:>16.3e}", v.witness_eigenvalue_rate);
    }
}
