//! Unequal blocks: with only the diagonal 3×3 blocks of C, τ is not conserved.

use commonbath::bath::real_c;
use commonbath::generator::propagate_general;
use commonbath::pauli::tau_via_singlet;
use commonbath::DensityMatrix;
use nalgebra::DMatrix;

fn main() {
    let mut c = DMatrix::<f64>::zeros(6, 6);
    for k in 0..6 {
        c[(k, k)] = 1.0;
    }
    let c = real_c(&c);
    let rho = DensityMatrix::singlet();
    let traj = propagate_general(rho.matrix(), &c, 2.0, 0.01).unwrap();
    for (t, m) in traj.iter().step_by(20) {
        println!("t={t:.2} tau={:+.6}", tau_via_singlet(m));
    }
}
