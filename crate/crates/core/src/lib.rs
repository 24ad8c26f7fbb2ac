//! Energy spectrum of the single-mode spin-boson (quantum Rabi) model
//! `H = ω0 a†a + (Ω/2)σ_x + λσ_z(a† + a)`.
//!
//! Four routes to the spectrum are provided: exact diagonalization in a
//! truncated Fock basis ([`exact`]), the rotating-wave approximation, the
//! adiabatic approximation and the generalized rotating-wave approximation
//! ([`approx`]). [`analysis`] sweeps the coupling and compares them.

pub mod analysis;
pub mod approx;
pub mod cli;
pub mod error;
pub mod exact;
pub mod model;
pub mod output;
pub mod special;

pub use approx::{ApproxMethod, LabeledLevel};
pub use error::{Error, Result};
pub use exact::{ConvergencePolicy, ConvergenceReport};
pub use model::{Branch, ModelParams, OperatorMatrix, Truncation};
pub use special::{DimensionlessCoupling, LaguerreOrder};
