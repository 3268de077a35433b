//! Simulator for driven coupled oscillators and a mechanically driven
//! two-mode optomechanical cavity: anti-resonance spectra, mean-field steady
//! states, non-reciprocal fluctuation scattering, and isolation-frequency
//! search.
//!
//! # Conventions
//!
//! - All frequencies and rates are dimensionless, in units of a reference
//!   damping rate γ = 1.
//! - Time evolution follows the physics convention e^{-iωt}; the Fourier
//!   transform uses the e^{+iωt} kernel, so d/dt → −iω and the
//!   frequency-domain system matrix reads M − iωI. Positive probe
//!   frequencies are the upper sideband. This is the single place the sign
//!   is chosen; every module inherits it.
//! - Phases are radians and are never wrapped implicitly; only the coupling
//!   phase difference θ is reduced to `[0, 2π)`.
//!
//! The core is generic over the floating-point scalar through
//! [`scalar::Real`]; the `*64` aliases below fix `f64` for the common case.

pub mod error;
pub mod linalg;
pub mod model;
pub mod pendulum;
pub mod scalar;
pub mod scattering;
pub mod steadystate;
pub mod sweep;

pub use num_complex::Complex;

pub use error::{Error, Result};
pub use model::{
    CouplingForm, EffectiveParams, OptomechDriveParams, PendulumParams, SteadyState, SweepBase,
    SweepSpec, SweepTable, SweepVariable,
};
pub use scalar::Real;

pub type Complex64 = Complex<f64>;
pub type PendulumParams64 = PendulumParams<f64>;
pub type OptomechDriveParams64 = OptomechDriveParams<f64>;
pub type EffectiveParams64 = EffectiveParams<f64>;
pub type SteadyState64 = SteadyState<f64>;
pub type SweepSpec64 = SweepSpec<f64>;
pub type ScatteringResult64 = scattering::ScatteringResult<f64>;
pub type IsolationResult64 = scattering::IsolationResult<f64>;
