//! JSON run configuration.
//!
//! ```json
//! {
//!   "bath": { "lambda": [1.0, 1.0, 1.0], "B": [0.0, 0.0, 0.5] },
//!   "initial": { "werner_eq27": { "s": 0.25 } },
//!   "integrator": { "dt": 0.01, "t_end": 50.0, "sample_every": 100 }
//! }
//! ```
//!
//! The bath takes either `lambda` (diagonal A) or a full symmetric `A`, never
//! both. Complex amplitudes are `[re, im]` pairs. `integrator` and each of its
//! fields are optional.

use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bath::{make_bath, KossakowskiBlock};
use crate::generator::{default_dt, DEFAULT_T_END};
use crate::linalg::re;
use crate::pauli::{ComplexMatrix4, DensityMatrix, PauliCoefficients};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub bath: BathConfig,
    pub initial: InitialState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator: Option<IntegratorConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<[[f64; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<[f64; 3]>,
    #[serde(rename = "B")]
    pub b: [f64; 3],
}

/// A complex amplitude as `[re, im]`.
pub type Amplitude = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Product { phi: [Amplitude; 2], psi: [Amplitude; 2] },
    WernerEq27 { s: f64 },
    Pauli(PauliCoefficients),
    Mixed(Vec<WeightedState>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedState {
    pub weight: f64,
    pub state: InitialState,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_every: Option<usize>,
}

/// Integrator settings with defaults filled in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integration {
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: usize,
}

fn amplitude(a: &Amplitude) -> Complex64 {
    Complex64::new(a[0], a[1])
}

impl BathConfig {
    pub fn block(&self) -> Result<KossakowskiBlock> {
        let a = match (&self.a, &self.lambda) {
            (Some(_), Some(_)) => {
                return Err(Error::config("bath", "give either `A` or `lambda`, not both"))
            }
            (None, None) => return Err(Error::config("bath", "missing `A` or `lambda`")),
            (Some(a), None) => Matrix3::from_fn(|i, j| a[i][j]),
            (None, Some(l)) => Matrix3::from_diagonal(&Vector3::from(*l)),
        };
        make_bath(a, Vector3::from(self.b)).map_err(|e| {
            let field = if self.a.is_some() { "bath.A" } else { "bath.lambda" };
            match e {
                Error::NotSymmetric { .. } => Error::config("bath.A", e.to_string()),
                other => Error::config(format!("{field}/bath.B"), other.to_string()),
            }
        })
    }
}

impl InitialState {
    fn matrix(&self, field: &str) -> Result<ComplexMatrix4> {
        match self {
            InitialState::Product { phi, psi } => {
                let phi = [amplitude(&phi[0]), amplitude(&phi[1])];
                let psi = [amplitude(&psi[0]), amplitude(&psi[1])];
                for (name, v) in [("phi", &phi), ("psi", &psi)] {
                    let n = v[0].norm_sqr() + v[1].norm_sqr();
                    if (n - 1.0).abs() > 1e-10 {
                        return Err(Error::config(
                            format!("{field}.product.{name}"),
                            format!("not normalized (norm² = {n})"),
                        ));
                    }
                }
                Ok(DensityMatrix::product(&phi, &psi)?.into_matrix())
            }
            InitialState::WernerEq27 { s } => DensityMatrix::werner(*s)
                .map(DensityMatrix::into_matrix)
                .map_err(|_| {
                    Error::config(format!("{field}.werner_eq27.s"), format!("s = {s} outside [0, 0.75]"))
                }),
            InitialState::Pauli(c) => Ok(c.to_matrix()),
            InitialState::Mixed(parts) => {
                if parts.is_empty() {
                    return Err(Error::config(format!("{field}.mixed"), "empty mixture"));
                }
                let mut total = 0.0;
                let mut m = ComplexMatrix4::zeros();
                for (k, part) in parts.iter().enumerate() {
                    if part.weight.is_nan() || part.weight < 0.0 {
                        return Err(Error::config(
                            format!("{field}.mixed[{k}].weight"),
                            "weights must be non-negative",
                        ));
                    }
                    total += part.weight;
                    m += part.state.matrix(&format!("{field}.mixed[{k}].state"))? * re(part.weight);
                }
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::config(
                        format!("{field}.mixed"),
                        format!("weights sum to {total}, expected 1"),
                    ));
                }
                Ok(m)
            }
        }
    }

    /// Validated initial density matrix.
    pub fn density(&self) -> Result<DensityMatrix> {
        let m = self.matrix("initial")?;
        DensityMatrix::new(m).map_err(|e| Error::config("initial", e.to_string()))
    }

    /// The s parameter when the state is the singlet/triplet family.
    pub fn werner_s(&self) -> Option<f64> {
        match self {
            InitialState::WernerEq27 { s } => Some(*s),
            _ => None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn block(&self) -> Result<KossakowskiBlock> {
        self.bath.block()
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        self.initial.density()
    }

    /// Integrator settings, defaulting to dt = 0.01/max(λ, ‖B‖, 1),
    /// t_end = 50 and about 100 samples per run.
    pub fn integration(&self, block: &KossakowskiBlock) -> Result<Integration> {
        let cfg = self.integrator.unwrap_or_default();
        let dt = cfg.dt.unwrap_or_else(|| default_dt(block));
        let t_end = cfg.t_end.unwrap_or(DEFAULT_T_END);
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::config("integrator.dt", "must be positive"));
        }
        if !(t_end >= dt && t_end.is_finite()) {
            return Err(Error::config("integrator.t_end", "must be at least dt"));
        }
        let sample_every = cfg
            .sample_every
            .unwrap_or_else(|| ((t_end / dt / 100.0).round() as usize).max(1));
        if sample_every == 0 {
            return Err(Error::config("integrator.sample_every", "must be at least 1"));
        }
        Ok(Integration {
            dt,
            t_end,
            sample_every,
        })
    }
}
