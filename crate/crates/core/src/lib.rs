//! Channel-power prediction under fixed and random feedback delays.
//!
//! The crate simulates an AR(1) Rayleigh fading channel sampled either
//! periodically or at Poisson arrival instants, predicts the next received
//! power with a single-pole IIR smoother, and compares the prediction MSE and
//! the resulting adaptive-MCS throughput against closed-form expressions.
//!
//! Modules:
//! - [`specfun`]: Bessel J0, elliptic K(m) for m < 1, exponential-weight
//!   quadrature.
//! - [`fading`]: arrival schedules and seeded AR(1) channel traces.
//! - [`predictor`]: the smoother, its impulse-response form, and empirical
//!   MSE measurement.
//! - [`theory`]: closed-form MSE and optimal smoothing parameter for both
//!   delay regimes.
//! - [`linkadapt`]: MCS tables, threshold success model, fixed-rate baseline.
//! - [`harness`]: experiment runners and CSV artifacts behind the CLI.

pub mod error;
pub mod fading;
pub mod harness;
pub mod linkadapt;
pub mod predictor;
pub mod specfun;
pub mod theory;

pub use error::{Error, Result};

pub use num_complex;
