use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polar::{DensityMatrix, PureState2, WaveplateSetting};

use super::{CountRecord, StationAngles, TomographySetting};

/// A rank-1 measurement operator with its outcome label.
#[derive(Debug, Clone)]
pub struct Projector {
    pub label: String,
    pub dim: usize,
    /// Row-major matrix entries.
    pub matrix: Vec<C64>,
}

impl Projector {
    /// `Tr[O ρ]`.
    pub fn born_probability(&self, rho: &DensityMatrix) -> f64 {
        let n = self.dim;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.matrix[i * n + j] * rho.at(j, i);
            }
        }
        acc.re
    }
}

/// Back-propagates a PBS outcome through one station's waveplates.
fn station_states(angles: &StationAngles) -> [PureState2; 2] {
    let hwp = WaveplateSetting::hwp(angles.hwp_deg).unitary().dagger();
    let qwp = WaveplateSetting::qwp(angles.qwp_deg).unitary().dagger();
    let transmitted = qwp.apply(&hwp.apply(&PureState2::h()));
    let reflected = qwp.apply(&hwp.apply(&PureState2::v()));
    [transmitted, reflected]
}

/// The rank-1 projectors measured by one setting, in outcome order. They
/// always sum to the identity.
pub fn projectors_for(setting: &TomographySetting) -> Vec<Projector> {
    let signal = station_states(&setting.signal);
    match &setting.idler {
        None => signal
            .iter()
            .zip(["H", "V"])
            .map(|(state, label)| Projector {
                label: label.to_string(),
                dim: 2,
                matrix: DensityMatrix::from_pure(state).entries().to_vec(),
            })
            .collect(),
        Some(idler_angles) => {
            let idler = station_states(idler_angles);
            let mut out = Vec::with_capacity(4);
            for (s, slabel) in signal.iter().zip(["H", "V"]) {
                for (i, ilabel) in idler.iter().zip(["H", "V"]) {
                    let joint = DensityMatrix::from_pure(s).kron(&DensityMatrix::from_pure(i));
                    out.push(Projector {
                        label: format!("{slabel}{ilabel}"),
                        dim: 4,
                        matrix: joint.entries().to_vec(),
                    });
                }
            }
            out
        }
    }
}

/// Born-rule probabilities for every projector of every setting,
/// concatenated in setting order.
pub fn probabilities_from_state(rho: &DensityMatrix, settings: &[TomographySetting]) -> Result<Vec<f64>> {
    let mut probs = Vec::new();
    for setting in settings {
        if setting.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                got: setting.dim(),
            });
        }
        for projector in projectors_for(setting) {
            probs.push(projector.born_probability(rho).clamp(0.0, 1.0));
        }
    }
    Ok(probs)
}

/// Counting-noise model for [`sample_counts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    /// Exactly `n_per_setting` events split multinomially across the
    /// setting's outcomes (the default: the experiment fixes events per
    /// basis).
    Multinomial,
    /// Independent Poisson draw per outcome with mean `n·p`.
    PoissonPerOutcome,
}

/// Draws counts for every setting. Deterministic for a fixed seed.
pub fn sample_counts(
    settings: &[TomographySetting],
    probs: &[f64],
    n_per_setting: u64,
    seed: u64,
    noise: NoiseModel,
) -> Result<Vec<CountRecord>> {
    let expected: usize = settings.iter().map(|s| s.outcome_count()).sum();
    if probs.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: probs.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(settings.len());
    let mut offset = 0;
    for setting in settings {
        let k = setting.outcome_count();
        let group = &probs[offset..offset + k];
        offset += k;
        let counts = match noise {
            NoiseModel::Multinomial => multinomial(&mut rng, n_per_setting, group),
            NoiseModel::PoissonPerOutcome => group
                .iter()
                .map(|p| {
                    let mean = p * n_per_setting as f64;
                    if mean > 0.0 {
                        Poisson::new(mean).expect("positive mean").sample(&mut rng) as u64
                    } else {
                        0
                    }
                })
                .collect(),
        };
        records.push(CountRecord {
            setting: *setting,
            counts,
        });
    }
    Ok(records)
}

/// Multinomial draw by sequential conditional binomials.
fn multinomial(rng: &mut ChaCha8Rng, n: u64, probs: &[f64]) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining_n = n;
    let mut remaining_p: f64 = probs.iter().sum();
    for (i, &p) in probs.iter().enumerate() {
        if remaining_n == 0 {
            break;
        }
        if i == probs.len() - 1 || remaining_p <= p {
            counts[i] = remaining_n;
            break;
        }
        let ratio = (p / remaining_p).clamp(0.0, 1.0);
        let draw = Binomial::new(remaining_n, ratio)
            .expect("ratio in [0,1]")
            .sample(rng);
        counts[i] = draw;
        remaining_n -= draw;
        remaining_p -= p;
    }
    counts
}

/// Relative frequencies from one count record; the groups sum to one
/// exactly.
pub fn estimate_probs(record: &CountRecord) -> Result<Vec<f64>> {
    let total = record.total();
    if total == 0 {
        return Err(Error::EmptyCountRecord);
    }
    Ok(record
        .counts
        .iter()
        .map(|&c| c as f64 / total as f64)
        .collect())
}
