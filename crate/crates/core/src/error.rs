//! Error type shared by all solver modules.

use thiserror::Error;

/// Errors produced by validation and the numeric solvers.
///
/// Numeric payloads are stored as `f64` regardless of the working scalar so
/// the error type stays object-safe and non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter record violated one of its invariants.
    #[error("{field} must be {requirement}")]
    InvalidParam {
        field: &'static str,
        requirement: &'static str,
    },

    /// Fixed-step integration was requested with a step too coarse for the
    /// fastest rate in the system.
    #[error("step size too large: dt * max(|detuning|, damping, coupling) = {product:.3e} exceeds {limit:.1e}")]
    StepSize { product: f64, limit: f64 },

    /// The fixed-point iteration did not reach the requested residual.
    #[error("steady-state iteration failed to converge after {iterations} iterations (last residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// The two-mode denominator (γ₁+iΔ₁)(γ₂+iΔ₂)+g² vanished.
    #[error("two-mode denominator vanished (|D| = {magnitude:.3e}); steady state undefined")]
    SingularDenominator { magnitude: f64 },

    /// The frequency-domain system matrix is numerically singular.
    #[error("drift matrix M - iωI is numerically singular (rcond = {rcond:.3e})")]
    SingularMatrix { rcond: f64 },

    /// The isolation metric shows no usable extremum over the scanned range.
    #[error("no isolation extremum: isolation ratio varies by only {variation_db:.3e} dB over the scan range")]
    NoExtremum { variation_db: f64 },

    /// An input spectrum entry was negative.
    #[error("input spectrum entry {index} is negative ({value:.3e})")]
    NegativeInput { index: usize, value: f64 },

    /// A sweep or spectrum was requested on an empty grid.
    #[error("sweep grid is empty")]
    EmptyGrid,
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
