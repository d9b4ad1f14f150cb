//! Exact polarization-qubit algebra: pure states, Jones matrices, density
//! operators, projections and the fidelity/purity metrics everything else
//! consumes.
//!
//! Conventions used throughout the crate:
//!
//! * Jones vectors are written in the `(H, V)` basis.
//! * `HWP(θ) = [[cos 2θ, sin 2θ], [sin 2θ, −cos 2θ]]` — a half-wave plate
//!   with its fast axis at `θ` reflects linear polarization about that axis.
//! * `QWP(θ) = R(θ)·diag(1, −i)·R(−θ)` — a quarter-wave plate. The sign of
//!   the retardance is fixed so that the standard angle maps hold exactly:
//!   back-propagating `|H⟩` through a lone HWP at `θ′` gives the meridian
//!   state with Bloch polar angle `4θ′`, and through HWP(θ′) + QWP(45°) the
//!   equatorial state with phase `4(θ′ − 22.5°)`.
//! * Two-qubit states are ordered signal ⊗ idler: basis `|HH⟩, |HV⟩, |VH⟩,
//!   |VV⟩` with the first letter naming the signal (tomography-station)
//!   photon and the second the idler (projective-measurement) photon.
//! * States and unitaries compare equal up to a global phase; the canonical
//!   phase gauge for serialization makes the first nonzero component
//!   real-positive.

mod density;
mod state;
mod unitary;
mod waveplate;

pub use density::{Arm, DensityMatrix, Projection};
pub use state::PureState2;
pub use unitary::{hwp_unitary, qwp_unitary, random_unitary, rotation, z_rotation, Unitary2};
pub use waveplate::{WaveplateKind, WaveplateSetting};

pub(crate) use density::{jacobi_eigen_pairs, jacobi_eigenvalues};

/// Tolerance used when constructing states and unitaries.
pub const TOL_CONSTRUCT: f64 = 1e-12;
/// Tolerance used when validating density-matrix invariants.
pub const TOL_VALIDATE: f64 = 1e-10;
/// Projection probabilities below this are treated as impossible outcomes.
pub const TOL_IMPOSSIBLE: f64 = 1e-14;
