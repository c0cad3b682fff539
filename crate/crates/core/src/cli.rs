//! Batch commands behind the `commonbath` binary: `evolve`, `steady`,
//! `sweep` and `check`. Each command is a plain function so it can be driven
//! from tests without spawning a process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use nalgebra::Vector3;
use rayon::prelude::*;
use serde::Serialize;

use crate::bath::{make_bath, KossakowskiBlock};
use crate::check;
use crate::config::RunConfig;
use crate::entanglement::{concurrence, concurrence_closed};
use crate::generator::{evolve, propagate};
use crate::pauli::{DensityMatrix, PauliCoefficients, COEFFICIENT_NAMES};
use crate::steady::{
    asymptotic_concurrence, equilibrium_components, liouvillian_null_space, pair_branch_onset,
    stationary_family, NullSpace,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_INTEGRATION: i32 = 2;
pub const EXIT_NOT_APPLICABLE: i32 = 3;
pub const EXIT_SELF_CHECK: i32 = 4;

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::IntegrationAccuracy { .. } => EXIT_INTEGRATION,
        Error::NotApplicable(_) | Error::NoFullRankMember { .. } => EXIT_NOT_APPLICABLE,
        _ => EXIT_CONFIG,
    }
}

/// Numbers in CSV output: 15 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn evolve_header() -> String {
    let mut cols = vec!["t", "tau", "trace_err", "min_pt_eig", "concurrence"];
    cols.extend(COEFFICIENT_NAMES);
    cols.join(",")
}

/// Runs the configured trajectory and writes it as CSV.
pub fn write_evolve_csv(cfg: &RunConfig, out: &mut impl Write) -> Result<()> {
    let block = cfg.block()?;
    let initial = cfg.initial_state()?.to_pauli();
    let integ = cfg.integration(&block)?;
    let traj = evolve(&initial, &block, integ.t_end, integ.dt, integ.sample_every)?;

    writeln!(
        out,
        "# columns: time, tau, |Tr rho - 1|, min eigenvalue of the partial transpose, \
         concurrence, then coefficients r0i (1 x sigma_i), ri0 (sigma_i x 1), rij (sigma_i x sigma_j, row-major)"
    )?;
    writeln!(out, "{}", evolve_header())?;
    for ((t, s), o) in traj.times.iter().zip(&traj.states).zip(&traj.observables) {
        let mut line = String::new();
        for x in [*t, o.tau, o.trace_error, o.min_pt_eigenvalue, o.concurrence] {
            let _ = write!(line, "{},", fmt_num(x));
        }
        let coeffs: Vec<String> = s.to_array().iter().map(|&x| fmt_num(x)).collect();
        line.push_str(&coeffs.join(","));
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn cmd_evolve(config: &Path, out: &Path) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    let mut buf = Vec::new();
    write_evolve_csv(&cfg, &mut buf)?;
    std::fs::write(out, buf)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ClosedFormReport {
    pub m: f64,
    pub n: f64,
    pub r: f64,
    pub delta: f64,
    /// τ below which the singlet branch of the limit is entangled.
    pub threshold: f64,
    pub boundary: bool,
    pub rho3: f64,
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    /// Singlet-branch closed form.
    pub concurrence_closed: f64,
    /// Both X-state branches.
    pub concurrence_x_state: f64,
    pub pair_branch_onset: f64,
    /// Largest coefficient gap between the null-space point at this τ and
    /// the closed-form equilibrium.
    pub oracle_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct NumericReport {
    pub dimension: usize,
    pub solver_residual: f64,
    pub full_rank_found: bool,
    pub best_min_eigenvalue: f64,
    /// Stationary coefficients at the configured τ, when the stationary
    /// set is a line.
    pub state_at_tau: Option<[f64; 15]>,
    pub concurrence_at_tau: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SteadyReport {
    pub tau: f64,
    pub closed_form: Option<ClosedFormReport>,
    pub numeric: NumericReport,
}

/// Stationary point of a one-dimensional null space at a prescribed τ.
pub fn null_space_point_at_tau(ns: &NullSpace, tau: f64) -> Option<PauliCoefficients> {
    match ns.dimension {
        0 => Some(ns.particular),
        1 => {
            let t0 = ns.point(&[0.0]).tau();
            let slope = ns.point(&[1.0]).tau() - t0;
            (slope.abs() > 1e-12).then(|| ns.point(&[(tau - t0) / slope]))
        }
        _ => None,
    }
}

pub fn steady_report(cfg: &RunConfig, numeric_only: bool) -> Result<SteadyReport> {
    let block = cfg.block()?;
    let tau = cfg.initial_state()?.tau();
    let ns = liouvillian_null_space(&block);
    let at_tau = null_space_point_at_tau(&ns, tau);
    let numeric = NumericReport {
        dimension: ns.dimension,
        solver_residual: ns.residual,
        full_rank_found: ns.full_rank_member.is_some(),
        best_min_eigenvalue: ns.best_min_eigenvalue,
        state_at_tau: at_tau.map(|s| s.to_array()),
        concurrence_at_tau: at_tau.map(|s| concurrence(&DensityMatrix::from_pauli(&s))),
    };
    if numeric_only {
        return Ok(SteadyReport {
            tau,
            closed_form: None,
            numeric,
        });
    }
    let family = stationary_family(&block)?;
    let eq = equilibrium_components(tau, &family)?;
    let closed = concurrence_closed(family.m, family.r, tau)?;
    Ok(SteadyReport {
        tau,
        closed_form: Some(ClosedFormReport {
            m: family.m,
            n: family.n,
            r: family.r,
            delta: closed.delta,
            threshold: closed.threshold,
            boundary: family.boundary,
            rho3: eq.rho3,
            rho11: eq.rho11,
            rho22: eq.rho22,
            rho33: eq.rho33,
            concurrence_closed: closed.concurrence,
            concurrence_x_state: asymptotic_concurrence(tau, &family)?,
            pair_branch_onset: pair_branch_onset(&family),
            oracle_residual: at_tau.map(|s| s.max_abs_diff(&eq.state)),
        }),
        numeric,
    })
}

pub fn cmd_steady(config: &Path, numeric_only: bool) -> Result<SteadyReport> {
    steady_report(&RunConfig::load(config)?, numeric_only)
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Tau,
    B,
    S,
    /// Index 0..3 into `lambda`.
    Lambda(usize),
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(SweepParam::Tau),
            "B" | "b" => Ok(SweepParam::B),
            "s" => Ok(SweepParam::S),
            "lambda1" | "lambda_1" => Ok(SweepParam::Lambda(0)),
            "lambda2" | "lambda_2" => Ok(SweepParam::Lambda(1)),
            "lambda3" | "lambda_3" => Ok(SweepParam::Lambda(2)),
            other => Err(Error::config(
                "param",
                format!("unknown sweep parameter `{other}` (tau, B, s, lambda1..3)"),
            )),
        }
    }
}

impl SweepParam {
    pub fn name(&self) -> String {
        match self {
            SweepParam::Tau => "tau".into(),
            SweepParam::B => "B".into(),
            SweepParam::S => "s".into(),
            SweepParam::Lambda(i) => format!("lambda{}", i + 1),
        }
    }
}

pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| Error::config("values", format!("`{v}`: {e}")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub concurrence_closed: f64,
    pub concurrence_x_state: f64,
    pub concurrence_evolved: f64,
    /// 2s[1 − (2+Δ)/(3+2R)], only for singlet/triplet starts.
    pub delta_c_closed: Option<f64>,
    /// Evolved concurrence minus initial concurrence, same condition.
    pub delta_c_evolved: Option<f64>,
}

fn sweep_point(cfg: &RunConfig, param: SweepParam, value: f64) -> Result<SweepRow> {
    let mut block: KossakowskiBlock = cfg.block()?;
    let mut initial = cfg.initial_state()?;
    let mut s = cfg.initial.werner_s();
    match param {
        SweepParam::Tau => {
            initial = DensityMatrix::singlet_triplet_mixture(value)
                .map_err(|e| Error::config("values", e.to_string()))?;
            s = None;
        }
        SweepParam::S => {
            initial = DensityMatrix::werner(value).map_err(|e| Error::config("values", e.to_string()))?;
            s = Some(value);
        }
        SweepParam::B => {
            let b = block.b();
            let dir = if b.norm() > 0.0 { b / b.norm() } else { Vector3::z() };
            block = make_bath(*block.a(), dir * value).map_err(|e| Error::config("values", e.to_string()))?;
        }
        SweepParam::Lambda(i) => {
            let mut lambda = cfg
                .bath
                .lambda
                .ok_or_else(|| Error::config("param", "lambda sweeps need a `lambda` bath"))?;
            lambda[i] = value;
            let mut bath = cfg.bath.clone();
            bath.lambda = Some(lambda);
            block = bath.block().map_err(|e| Error::config("values", e.to_string()))?;
        }
    }
    let family = stationary_family(&block)?;
    let integ = cfg.integration(&block)?;
    let start = initial.to_pauli();
    let tau = start.tau();
    let closed = concurrence_closed(family.m, family.r, tau)?;
    let x_state = asymptotic_concurrence(tau, &family)?;
    let evolved_state = propagate(&start, &block, integ.t_end, integ.dt)?;
    let evolved = concurrence(&DensityMatrix::from_pauli(&evolved_state));
    let c0 = concurrence(&initial);
    let (delta_c_closed, delta_c_evolved) = match s {
        Some(s) => (
            Some(2.0 * s * (1.0 - (2.0 + closed.delta) / (3.0 + 2.0 * family.r))),
            Some(evolved - c0),
        ),
        None => (None, None),
    };
    Ok(SweepRow {
        value,
        concurrence_closed: closed.concurrence,
        concurrence_x_state: x_state,
        concurrence_evolved: evolved,
        delta_c_closed,
        delta_c_evolved,
    })
}

/// One row per value, computed in parallel, returned in input order.
pub fn sweep(cfg: &RunConfig, param: SweepParam, values: &[f64]) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::config("values", "no sweep values"));
    }
    values
        .par_iter()
        .map(|&v| sweep_point(cfg, param, v))
        .collect()
}

pub const SWEEP_HEADER: &str =
    "param,value,concurrence_closed,concurrence_x_state,concurrence_evolved,delta_c_closed,delta_c_evolved";

pub fn write_sweep_csv(param: SweepParam, rows: &[SweepRow], out: &mut impl Write) -> Result<()> {
    writeln!(
        out,
        "# concurrence_closed: singlet-branch closed form; concurrence_x_state: both branches; \
         concurrence_evolved: Wootters concurrence after t_end; delta columns only for werner_eq27 starts"
    )?;
    writeln!(out, "{SWEEP_HEADER}")?;
    let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            param.name(),
            fmt_num(r.value),
            fmt_num(r.concurrence_closed),
            fmt_num(r.concurrence_x_state),
            fmt_num(r.concurrence_evolved),
            opt(r.delta_c_closed),
            opt(r.delta_c_evolved),
        )?;
    }
    Ok(())
}

pub fn cmd_sweep(config: &Path, param: &str, values: &str, out: &Path) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    let param: SweepParam = param.parse()?;
    let values = parse_values(values)?;
    let rows = sweep(&cfg, param, &values)?;
    let mut buf = Vec::new();
    write_sweep_csv(param, &rows, &mut buf)?;
    std::fs::write(out, buf)?;
    Ok(())
}

#[derive(Parser)]
#[command(name = "commonbath", version, about = "Two qubits in a common bath")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the master equation and write the trajectory as CSV.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the equilibrium report as JSON.
    Steady {
        #[arg(long)]
        config: PathBuf,
        /// Skip the closed form and report only the null-space solution.
        #[arg(long)]
        numeric_only: bool,
    },
    /// Vary one parameter and write asymptotic concurrences as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// tau, B, s, lambda1, lambda2 or lambda3
        #[arg(long)]
        param: String,
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the invariant suites (seeded by TOOL_SEED).
    Check,
}

/// Full command line handling. `seed` is the raw `TOOL_SEED` value, if set.
/// Returns the process exit code.
pub fn run<I, T>(args: I, seed: Option<&str>, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = match args.command {
        Command::Evolve { config, out: path } => cmd_evolve(&config, &path),
        Command::Steady { config, numeric_only } => cmd_steady(&config, numeric_only).and_then(|rep| {
            let json = serde_json::to_string_pretty(&rep).expect("report serializes");
            writeln!(out, "{json}").map_err(Error::from)
        }),
        Command::Sweep { config, param, values, out: path } => cmd_sweep(&config, &param, &values, &path),
        Command::Check => return run_check(seed, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn run_check(seed: Option<&str>, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let seed = match seed.map(check::parse_seed).transpose() {
        Ok(s) => s.unwrap_or(check::DEFAULT_SEED),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let report = check::run_all(seed);
    let _ = writeln!(out, "seed {seed}");
    for s in &report.suites {
        let _ = writeln!(out, "{s}");
    }
    if let Some(f) = report.first_failure() {
        let _ = writeln!(err, "self-check failed: {}", f.name);
    }
    check_exit_code(&report)
}

pub fn check_exit_code(report: &check::CheckReport) -> i32 {
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_SELF_CHECK
    }
}
