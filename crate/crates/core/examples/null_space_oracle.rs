//! Stationary states of a bath with no closed form, from the Liouvillian kernel.

use commonbath::bath::{make_bath, principal_frame};
use commonbath::cli::null_space_point_at_tau;
use commonbath::steady::liouvillian_null_space;
use commonbath::{concurrence, DensityMatrix};
use nalgebra::{Matrix3, Vector3};

fn main() {
    let a = Matrix3::new(1.2, 0.1, -0.2, 0.1, 0.9, 0.3, -0.2, 0.3, 0.8);
    let block = make_bath(a, Vector3::new(0.3, -0.2, 0.25)).unwrap();
    println!("closed form applicable: {}", principal_frame(&block).closed_form_applicable);

    let ns = liouvillian_null_space(&block);
    println!("stationary set dimension: {}  solver residual {:.1e}", ns.dimension, ns.residual);
    match ns.require_full_rank() {
        Ok(rho) => println!("full-rank member, min eigenvalue {:.5}", rho.min_eigenvalue()),
        Err(e) => println!("{e}"),
    }
    for tau in [-3.0, -2.0, -1.0, 0.0, 1.0] {
        if let Some(p) = null_space_point_at_tau(&ns, tau) {
            let rho = DensityMatrix::from_pauli(&p);
            println!("tau {tau:+.1}: min eig {:+.5}  C {:.5}", rho.min_eigenvalue(), concurrence(&rho));
        }
    }
}
