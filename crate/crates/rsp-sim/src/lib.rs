//! Numerical simulator and analysis toolkit for a fiber-compatible
//! measurement-and-feed-forward protocol, benchmarked by remote preparation
//! of single-photon polarization states.
//!
//! The crate models the full desk-scale experiment:
//!
//! * [`polar`] — exact polarization-qubit algebra (Jones matrices, density
//!   operators, projections, fidelity/purity).
//! * [`source`] — the entangled-pair source with its imperfection model
//!   (reduced purity, residual fiber birefringence, polarization-dependent
//!   loss).
//! * [`feedforward`] — the protocol engine: projective measurement, switch
//!   routing with crosstalk, correction unitaries, timing and loss budgets,
//!   and the iterative fiber-polarization compensation procedure.
//! * [`tomography`] — the forward model from states to coincidence counts
//!   and the inverse: positivity-constrained least-squares reconstruction
//!   of one- and two-qubit density matrices.
//! * [`montecarlo`] — end-to-end Bloch-plane sweeps, predicted-state
//!   correction, and Monte Carlo error bars.
//! * [`cli`] / [`config`] — the command-line front end and experiment
//!   configuration files.
//!
//! Every operation is a pure function over immutable values; all randomness
//! flows from explicit seeds, so identical inputs give identical outputs.
//! See the `examples/` directory for runnable demonstrations of each
//! capability.

// Index loops over small dense matrices throughout.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod config;
pub mod error;
pub mod feedforward;
pub mod montecarlo;
pub mod polar;
pub mod source;
pub mod tomography;

pub use error::{Error, Result};
pub use num_complex::Complex64;
