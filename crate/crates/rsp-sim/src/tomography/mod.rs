//! Forward model from states to coincidence statistics and the inverse:
//! positivity-constrained least-squares reconstruction of one- and
//! two-qubit density matrices from measured counts.

mod count_file;
mod forward;
mod reconstruct;

pub use count_file::{read_count_records, write_count_records, COUNT_FILE_HEADER};
pub use forward::{
    estimate_probs, probabilities_from_state, projectors_for, sample_counts, NoiseModel,
    Projector,
};
pub use reconstruct::ls_reconstruct;

use serde::{Deserialize, Serialize};

/// Waveplate pair of one measurement station. The photon traverses the QWP,
/// then the HWP, then the analyzing PBS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationAngles {
    pub hwp_deg: f64,
    pub qwp_deg: f64,
}

impl StationAngles {
    pub fn new(hwp_deg: f64, qwp_deg: f64) -> Self {
        Self { hwp_deg, qwp_deg }
    }
}

/// One tomography configuration: the signal (QST) station and, for
/// two-qubit tomography, the idler (PM) station.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TomographySetting {
    pub signal: StationAngles,
    pub idler: Option<StationAngles>,
}

impl TomographySetting {
    pub fn single(hwp_deg: f64, qwp_deg: f64) -> Self {
        Self {
            signal: StationAngles::new(hwp_deg, qwp_deg),
            idler: None,
        }
    }

    pub fn two_qubit(signal: StationAngles, idler: StationAngles) -> Self {
        Self {
            signal,
            idler: Some(idler),
        }
    }

    /// Number of PBS outcomes: 2 for one photon, 4 for a coincidence.
    pub fn outcome_count(&self) -> usize {
        if self.idler.is_some() {
            4
        } else {
            2
        }
    }

    /// Hilbert-space dimension the setting measures.
    pub fn dim(&self) -> usize {
        if self.idler.is_some() {
            4
        } else {
            2
        }
    }
}

/// The canonical single-photon measurement set: H/V, R/L and D/A bases
/// (three settings, six projectors).
pub fn single_qubit_suite() -> Vec<TomographySetting> {
    vec![
        TomographySetting::single(0.0, 0.0),
        TomographySetting::single(0.0, 45.0),
        TomographySetting::single(22.5, 45.0),
    ]
}

/// The canonical two-photon measurement set: all nine pairings of the
/// three single-photon bases (36 projectors, over-complete).
pub fn two_qubit_suite() -> Vec<TomographySetting> {
    let bases = [
        StationAngles::new(0.0, 0.0),
        StationAngles::new(22.5, 45.0),
        StationAngles::new(0.0, 45.0),
    ];
    let mut settings = Vec::with_capacity(9);
    for qst in &bases {
        for pm in &bases {
            settings.push(TomographySetting::two_qubit(*qst, *pm));
        }
    }
    settings
}

/// Coincidence counts recorded for one setting. Outcome order matches the
/// projector order of [`projectors_for`]: `(H, V)` for one photon and
/// `(HH, HV, VH, VV)` for two, the first letter naming the signal outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub setting: TomographySetting,
    pub counts: Vec<u64>,
}

impl CountRecord {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Output of [`ls_reconstruct`].
#[derive(Debug, Clone)]
pub struct TomographyResult {
    pub rho: crate::polar::DensityMatrix,
    /// Final value of the least-squares cost.
    pub residual: f64,
    pub iterations: u32,
    pub converged: bool,
    /// Condition number of the measurement design; values above 1e6 signal
    /// possibly non-unique minimizers.
    pub condition_number: f64,
}
