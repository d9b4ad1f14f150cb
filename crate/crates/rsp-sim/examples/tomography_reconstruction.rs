//! Two-photon state tomography end to end: sample coincidence counts for
//! the 36-projector suite, reconstruct by positivity-constrained least
//! squares, and attach Monte Carlo error bars (counting noise plus 0.5 deg
//! waveplate jitter).
//!
//! Run with: cargo run --release --example tomography_reconstruction

use rsp_sim::montecarlo::{mc_errorbar, TrialContext};
use rsp_sim::source::{make_state, SourceModel};
use rsp_sim::tomography::{
    estimate_probs, ls_reconstruct, probabilities_from_state, sample_counts, two_qubit_suite,
    NoiseModel, TomographySetting,
};
use rsp_sim::Complex64 as C64;

fn main() {
    let rho = make_state(&SourceModel::paper_meridian()).unwrap();
    let suite = two_qubit_suite();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = [
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
        C64::new(-s, 0.0),
        C64::new(0.0, 0.0),
    ];

    println!("true state:   purity {:.4}, singlet fidelity {:.4}", rho.purity(),
        rho.fidelity_pure_amplitudes(&singlet).unwrap());

    // One reconstruction from 40,000 events per basis.
    let probs = probabilities_from_state(&rho, &suite).unwrap();
    let records = sample_counts(&suite, &probs, 40_000, 7, NoiseModel::Multinomial).unwrap();
    let mut freqs = Vec::new();
    for r in &records {
        freqs.extend(estimate_probs(r).unwrap());
    }
    let result = ls_reconstruct(&suite, &freqs, 4).unwrap();
    println!(
        "reconstructed: purity {:.4}, singlet fidelity {:.4} (residual {:.2e}, {} iterations)",
        result.rho.purity(),
        result.rho.fidelity_pure_amplitudes(&singlet).unwrap(),
        result.residual,
        result.iterations
    );

    // Error bars over 100 simulated runs.
    let experiment = |ctx: &mut TrialContext| {
        let jittered: Vec<TomographySetting> =
            suite.iter().map(|st| ctx.jitter_setting(st)).collect();
        let probs = probabilities_from_state(&rho, &jittered).unwrap();
        let records =
            sample_counts(&jittered, &probs, 40_000, ctx.draw_seed(), NoiseModel::Multinomial)
                .unwrap();
        let mut freqs = Vec::new();
        for r in &records {
            freqs.extend(estimate_probs(r).unwrap());
        }
        let rec = ls_reconstruct(&suite, &freqs, 4).unwrap();
        rec.rho.fidelity_pure_amplitudes(&singlet).unwrap()
    };
    let stats = mc_errorbar(experiment, 100, 0.5, 99);
    println!(
        "Monte Carlo over 100 trials: fidelity {:.4} +- {:.4}",
        stats.mean, stats.sigma
    );
}
