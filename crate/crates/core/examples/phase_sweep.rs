//! A τ sweep through the library API, printed as CSV.

use commonbath::cli::{sweep, write_sweep_csv, SweepParam};
use commonbath::config::RunConfig;

fn main() -> commonbath::Result<()> {
    let cfg = RunConfig::from_json(
        r#"{ "bath": { "lambda": [1.8, 0.6, 0.3], "B": [0, 0, 0.7] },
             "initial": { "werner_eq27": { "s": 0.5 } },
             "integrator": { "dt": 0.005, "t_end": 40.0 } }"#,
    )?;
    let values: Vec<f64> = (0..=16).map(|k| -3.0 + 0.25 * k as f64).collect();
    let rows = sweep(&cfg, SweepParam::Tau, &values)?;
    write_sweep_csv(SweepParam::Tau, &rows, &mut std::io::stdout().lock())
}
