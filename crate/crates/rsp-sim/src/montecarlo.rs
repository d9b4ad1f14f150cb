//! End-to-end experiment sweeps over the Bloch planes, predicted-state
//! correction, and Monte Carlo error bars.
//!
//! Each sweep point runs the full pipeline: build the projective-measurement
//! setting, run the protocol, compute Born probabilities at the tomography
//! station, sample counts, reconstruct the state, and score it against the
//! target. Trials re-draw the tomography waveplate jitter and the count
//! noise; every draw flows from the sweep seed through a documented
//! splitting rule, so results are bit-reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feedforward::{pm_projector, run_rsp, Plane, PmSetting, RspRun, SwitchModel};
use crate::polar::{DensityMatrix, PureState2};
use crate::source::{make_state, SourceModel};
use crate::tomography::{
    estimate_probs, ls_reconstruct, probabilities_from_state, sample_counts, single_qubit_suite,
    NoiseModel, StationAngles, TomographySetting,
};

/// Per-task seeds are `seed + index × SEED_SPLIT_PRIME` (wrapping).
pub const SEED_SPLIT_PRIME: u64 = 1_000_000_007;

/// HWP scan range per plane: 0–90° on the meridian, 22.5–112.5° on the
/// equator, covering the full Bloch circle in both cases.
pub fn hwp_grid(plane: Plane, n_points: usize) -> Vec<f64> {
    let start = match plane {
        Plane::Meridian => 0.0,
        Plane::Equatorial => 22.5,
    };
    (0..n_points)
        .map(|i| start + 90.0 * i as f64 / (n_points - 1) as f64)
        .collect()
}

/// Configuration of one sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub plane: Plane,
    pub n_points: usize,
    pub source: SourceModel,
    pub feedforward: bool,
    pub counts_per_setting: u64,
    pub angle_jitter_sigma_deg: f64,
    pub n_trials: u32,
    pub seed: u64,
    /// Analytic mode: skip count sampling and waveplate jitter, scoring the
    /// exact protocol output.
    pub infinite_statistics: bool,
}

impl SweepSpec {
    pub fn new(plane: Plane, source: SourceModel, seed: u64) -> Self {
        Self {
            plane,
            n_points: 19,
            source,
            feedforward: true,
            counts_per_setting: 35_000,
            angle_jitter_sigma_deg: 0.5,
            n_trials: 1,
            seed,
            infinite_statistics: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 2 {
            return Err(Error::ParameterRange {
                name: "n_points",
                value: self.n_points as f64,
                range: "≥ 2",
            });
        }
        if self.counts_per_setting == 0 {
            return Err(Error::ParameterRange {
                name: "counts_per_setting",
                value: 0.0,
                range: "> 0",
            });
        }
        if self.n_trials == 0 {
            return Err(Error::ParameterRange {
                name: "n_trials",
                value: 0.0,
                range: "≥ 1",
            });
        }
        self.source.validate()
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub hwp_deg: f64,
    pub bloch_angle_deg: f64,
    pub target: PureState2,
    pub fidelity_mean: f64,
    pub fidelity_sigma: f64,
    pub purity_mean: f64,
    /// Reconstruction from the first trial.
    pub reconstructed_state: DensityMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub plane: Plane,
    pub feedforward: bool,
    pub seed: u64,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn mean_fidelity(&self) -> f64 {
        self.points.iter().map(|p| p.fidelity_mean).sum::<f64>() / self.points.len() as f64
    }

    /// CSV table: `bloch_angle_deg,fid_mean,fid_sigma,purity_mean`, fixed
    /// six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bloch_angle_deg,fid_mean,fid_sigma,purity_mean\n");
        for p in &self.points {
            out.push_str(&format!(
                "{:.6},{:.6},{:.6},{:.6}\n",
                p.bloch_angle_deg, p.fidelity_mean, p.fidelity_sigma, p.purity_mean
            ));
        }
        out
    }
}

/// Per-trial randomness: waveplate jitter draws plus derived seeds for the
/// counting noise.
pub struct TrialContext {
    sigma_deg: f64,
    rng: ChaCha8Rng,
}

impl TrialContext {
    pub fn new(seed: u64, trial_index: u64, sigma_deg: f64) -> Self {
        Self {
            sigma_deg,
            rng: ChaCha8Rng::seed_from_u64(
                seed.wrapping_add(trial_index.wrapping_mul(SEED_SPLIT_PRIME)),
            ),
        }
    }

    /// Nominal angle plus a fresh normal draw (σ in degrees).
    pub fn jitter_angle(&mut self, nominal_deg: f64) -> f64 {
        if self.sigma_deg == 0.0 {
            return nominal_deg;
        }
        let normal = Normal::new(0.0, self.sigma_deg).expect("positive sigma");
        nominal_deg + normal.sample(&mut self.rng)
    }

    pub fn jitter_setting(&mut self, setting: &TomographySetting) -> TomographySetting {
        let signal = StationAngles::new(
            self.jitter_angle(setting.signal.hwp_deg),
            self.jitter_angle(setting.signal.qwp_deg),
        );
        let idler = setting.idler.map(|i| {
            StationAngles::new(self.jitter_angle(i.hwp_deg), self.jitter_angle(i.qwp_deg))
        });
        TomographySetting { signal, idler }
    }

    /// Derived seed for count sampling within the trial.
    pub fn draw_seed(&mut self) -> u64 {
        self.rng.random()
    }
}

/// Mean and sample standard deviation over seeded trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McStats {
    pub mean: f64,
    pub sigma: f64,
}

/// Runs a seeded experiment closure `n_trials` times with independently
/// jittered angles and fresh count noise, and returns the sample mean and
/// standard deviation. Deterministic per seed.
pub fn mc_errorbar<F>(mut experiment: F, n_trials: u32, angle_jitter_sigma_deg: f64, seed: u64) -> McStats
where
    F: FnMut(&mut TrialContext) -> f64,
{
    let values: Vec<f64> = (0..n_trials)
        .map(|t| {
            let mut ctx = TrialContext::new(seed, t as u64, angle_jitter_sigma_deg);
            experiment(&mut ctx)
        })
        .collect();
    stats_of(&values)
}

fn stats_of(values: &[f64]) -> McStats {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sigma = if values.len() > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    McStats { mean, sigma }
}

/// Runs one tomography trial of a single-qubit state and returns the
/// reconstruction. Counts are sampled at the jittered angles; the
/// reconstruction assumes the nominal ones.
fn tomography_trial(
    state: &DensityMatrix,
    counts_per_setting: u64,
    infinite_statistics: bool,
    ctx: &mut TrialContext,
) -> Result<DensityMatrix> {
    // With exact probabilities and exact angles the least-squares minimizer
    // is the state itself (unique zero of the cost); return it directly
    // instead of an optimizer approximation of it.
    if infinite_statistics && ctx.sigma_deg == 0.0 {
        return Ok(state.clone());
    }
    let suite = single_qubit_suite();
    let jittered: Vec<TomographySetting> = suite.iter().map(|s| ctx.jitter_setting(s)).collect();
    let probs = probabilities_from_state(state, &jittered)?;
    let freqs = if infinite_statistics {
        probs
    } else {
        let records = sample_counts(
            &jittered,
            &probs,
            counts_per_setting,
            ctx.draw_seed(),
            NoiseModel::Multinomial,
        )?;
        let mut freqs = Vec::new();
        for r in &records {
            freqs.extend(estimate_probs(r)?);
        }
        freqs
    };
    Ok(ls_reconstruct(&suite, &freqs, 2)?.rho)
}

/// Sweeps the protocol across a Bloch-plane grid, reconstructing the
/// prepared state at every point and reporting fidelity statistics.
pub fn sweep_bloch(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let source = spec.source.effective();
    let rho4 = make_state(&source)?;
    let run = RspRun::with_switch(
        spec.plane,
        spec.feedforward,
        SwitchModel::from_leak_probability(source.leak_probability),
    );

    let mut points = Vec::with_capacity(spec.n_points);
    for (idx, hwp_deg) in hwp_grid(spec.plane, spec.n_points).into_iter().enumerate() {
        let setting = PmSetting::for_plane(spec.plane, hwp_deg);
        let outcome = run_rsp(&rho4, &setting, &run)?;

        let sigma = if spec.infinite_statistics {
            0.0
        } else {
            spec.angle_jitter_sigma_deg
        };
        let mut fids = Vec::with_capacity(spec.n_trials as usize);
        let mut purities = Vec::with_capacity(spec.n_trials as usize);
        let mut first_reconstruction = None;
        for trial in 0..spec.n_trials {
            let task_index = (idx as u64) * spec.n_trials as u64 + trial as u64;
            let mut ctx = TrialContext::new(spec.seed, task_index, sigma);
            let rho = tomography_trial(
                &outcome.unconditional,
                spec.counts_per_setting,
                spec.infinite_statistics,
                &mut ctx,
            )
            .inspect_err(|_| {
                eprintln!("sweep point {idx} (hwp {hwp_deg:.2} deg) failed");
            })?;
            fids.push(rho.fidelity_pure(&outcome.target)?);
            purities.push(rho.purity());
            if first_reconstruction.is_none() {
                first_reconstruction = Some(rho);
            }
        }
        let fid_stats = stats_of(&fids);
        points.push(SweepPoint {
            hwp_deg,
            bloch_angle_deg: setting.bloch_angle_deg(),
            target: outcome.target,
            fidelity_mean: fid_stats.mean,
            fidelity_sigma: fid_stats.sigma,
            purity_mean: purities.iter().sum::<f64>() / purities.len() as f64,
            reconstructed_state: first_reconstruction.expect("n_trials >= 1"),
        });
    }
    Ok(SweepResult {
        plane: spec.plane,
        feedforward: spec.feedforward,
        seed: spec.seed,
        points,
    })
}

/// The states the ideal protocol (exact projection and correction, no
/// switch or waveplate imperfections) would prepare from `rho4` at each
/// grid angle. Linear in `rho4`.
pub fn predicted_states(rho4: &DensityMatrix, plane: Plane, grid_hwp_deg: &[f64]) -> Result<Vec<DensityMatrix>> {
    grid_hwp_deg
        .iter()
        .map(|&hwp| {
            let setting = PmSetting::for_plane(plane, hwp);
            Ok(run_rsp(rho4, &setting, &RspRun::ideal(plane))?.unconditional)
        })
        .collect()
}

/// Targets for a grid, mirroring [`predicted_states`] on the ideal singlet.
pub fn target_states(plane: Plane, grid_hwp_deg: &[f64]) -> Vec<PureState2> {
    grid_hwp_deg
        .iter()
        .map(|&hwp| pm_projector(&PmSetting::for_plane(plane, hwp)))
        .collect()
}
