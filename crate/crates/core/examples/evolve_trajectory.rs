//! Integrate a run configuration and print a coarse trajectory.
//!
//! `cargo run --example evolve_trajectory -- examples/configs/werner.json`

use commonbath::config::RunConfig;
use commonbath::evolve;

fn main() -> commonbath::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/werner.json").into());
    let cfg = RunConfig::load(&path)?;
    let block = cfg.block()?;
    let integ = cfg.integration(&block)?;
    let start = cfg.initial_state()?.to_pauli();
    let traj = evolve(&start, &block, integ.t_end, integ.dt, integ.sample_every)?;

    println!("{:>8} {:>10} {:>12} {:>10}", "t", "tau", "min PT eig", "C");
    let stride = (traj.len() / 15).max(1);
    for k in (0..traj.len()).step_by(stride) {
        let o = &traj.observables[k];
        println!(
            "{:>8.3} {:>10.6} {:>12.6} {:>10.6}",
            traj.times[k], o.tau, o.min_pt_eigenvalue, o.concurrence
        );
    }
    println!("tau drift over the run: {:.2e}", traj.tau_drift());
    Ok(())
}
