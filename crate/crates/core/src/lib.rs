//! Dissipative dynamics of two non-interacting qubits sharing a common bath.
//!
//! The crate integrates the completely positive Markovian evolution generated
//! by an equal-block Kossakowski matrix, computes its stationary states in
//! closed form and with an independent null-space solver, and measures the
//! entanglement that the bath builds up between the two qubits.
//!
//! Module map:
//!
//! - [`pauli`]: operator basis, Pauli-coefficient representation, density matrices
//! - [`bath`]: Kossakowski data, positivity, principal frame
//! - [`generator`]: the dissipator in four equivalent forms and an RK4 integrator
//! - [`entanglement`]: partial transpose, concurrence, generation test
//! - [`steady`]: stationary family, asymptotic map, Liouvillian null space
//! - [`config`] and [`cli`]: JSON run configuration and batch commands
//! - [`check`]: self-check suites run by `commonbath check`
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod bath;
pub mod check;
pub mod cli;
pub mod config;
pub mod entanglement;
mod error;
pub mod generator;
pub mod linalg;
pub mod pauli;
pub mod random;
pub mod steady;

pub use bath::{KossakowskiBlock, PrincipalFrame};
pub use entanglement::{concurrence, concurrence_closed, generation_test, partial_transpose};
pub use error::{Error, Result};
pub use generator::{evolve, Trajectory};
pub use pauli::{basis, ComplexMatrix4, DensityMatrix, PauliCoefficients};
pub use steady::{EquilibriumState, StationaryFamily};
