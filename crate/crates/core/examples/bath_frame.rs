//! Building a bath, checking positivity and rotating to the principal frame.

use commonbath::bath::{make_bath, principal_frame};
use commonbath::steady::stationary_family;
use nalgebra::{Matrix3, Rotation3, Vector3};

fn main() {
    // A diagonal bath (3, 2, 1) seen from a rotated lab frame, B on the λ=3 axis.
    let q = Rotation3::from_euler_angles(0.3, -0.7, 1.1).into_inner();
    let a = q * Matrix3::from_diagonal(&Vector3::new(3.0, 2.0, 1.0)) * q.transpose();
    let b = q * Vector3::new(1.0, 0.0, 0.0);
    let block = make_bath(a, b).expect("valid bath");

    let frame = principal_frame(&block);
    println!("eigenvalues (descending): {:?}", frame.eigenvalues_descending());
    println!("frame lambda (B on axis 3): {:?}", frame.lambda);
    println!("B in frame: {:.6?}", frame.b_rot.as_slice());
    println!("closed form applicable: {}", frame.closed_form_applicable);

    let fam = stationary_family(&block).unwrap();
    println!("M = {:.6}  N = {:.6}  R = {:.6}", fam.m, fam.n, fam.r);

    // B off every principal axis: still a valid bath, no closed form.
    let tilted = make_bath(a, Vector3::new(0.4, 0.4, 0.4)).unwrap();
    println!("tilted B applicable: {}", principal_frame(&tilted).closed_form_applicable);

    // Complete positivity needs B² ≤ λ_a λ_b for the transverse pair.
    match make_bath(Matrix3::identity(), Vector3::new(0.0, 0.0, 1.5)) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
}
