//! Run the invariant suites with a seed from the command line.

use commonbath::check::{run_all, DEFAULT_SEED};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    let report = run_all(seed);
    for s in &report.suites {
        println!("{s}");
    }
    std::process::exit(if report.passed() { 0 } else { 4 });
}
