//! Singlet/triplet mixtures: the bath raises their entanglement.

use commonbath::bath::diagonal_bath;
use commonbath::generator::propagate;
use commonbath::steady::stationary_family;
use commonbath::{concurrence, concurrence_closed, DensityMatrix};

fn main() {
    let block = diagonal_bath([1.0, 1.0, 1.0], 0.5).unwrap();
    let fam = stationary_family(&block).unwrap();
    let delta = fam.delta();
    let gain = 1.0 - (2.0 + delta) / (3.0 + 2.0 * fam.r);

    println!("{:>6} {:>8} {:>10} {:>10} {:>10}", "s", "C(0)", "C(inf)", "dC sim", "dC pred");
    for s in [0.0, 0.001, 0.05, 0.1, 0.25, 0.4, 0.6, 0.75] {
        let w = DensityMatrix::werner(s).unwrap();
        let c0 = concurrence(&w);
        let end = propagate(&w.to_pauli(), &block, 50.0, 0.01).unwrap();
        let c_inf = concurrence(&DensityMatrix::from_pauli(&end));
        let pred = concurrence_closed(fam.m, fam.r, w.tau()).unwrap().concurrence - c0;
        println!("{s:>6.3} {c0:>8.4} {c_inf:>10.6} {:>10.6} {pred:>10.6}", c_inf - c0);
        assert!((pred - 2.0 * s * gain).abs() < 1e-12 || c0 == 0.0);
    }
}
