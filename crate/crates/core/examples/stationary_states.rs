//! The τ-family of equilibrium states and its asymptotic concurrence.

use commonbath::bath::diagonal_bath;
use commonbath::concurrence_closed;
use commonbath::steady::{asymptotic_concurrence, equilibrium_components, pair_branch_onset, stationary_family};

fn main() {
    let block = diagonal_bath([1.6, 0.7, 0.4], 0.8).unwrap();
    let fam = stationary_family(&block).unwrap();
    println!("M={:.5} N={:.5} R={:.5} delta={:.5}", fam.m, fam.n, fam.r, fam.delta());
    println!("second coherence branch opens at tau = {:.5}", pair_branch_onset(&fam));

    println!("{:>6} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}", "tau", "r3", "r11", "r22", "r33", "C_sing", "C_both");
    for k in 0..=16 {
        let tau = -3.0 + 0.25 * k as f64;
        let eq = equilibrium_components(tau, &fam).unwrap();
        let closed = concurrence_closed(fam.m, fam.r, tau).unwrap();
        let both = asymptotic_concurrence(tau, &fam).unwrap();
        println!(
            "{tau:>6.2} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            eq.rho3, eq.rho11, eq.rho22, eq.rho33, closed.concurrence, both
        );
    }
}
