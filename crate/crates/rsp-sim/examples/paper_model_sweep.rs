//! Bloch-plane sweeps with the fitted imperfection model: dephased singlet
//! of purity 0.89, residual birefringence (0.5 rad meridian / 0.25 rad
//! equatorial), 1% polarization-dependent loss and 20 dB switch crosstalk.
//!
//! Run with: cargo run --release --example paper_model_sweep

use rsp_sim::feedforward::Plane;
use rsp_sim::montecarlo::{sweep_bloch, SweepSpec};
use rsp_sim::source::SourceModel;

fn main() {
    for (plane, source) in [
        (Plane::Meridian, SourceModel::paper_meridian()),
        (Plane::Equatorial, SourceModel::paper_equatorial()),
    ] {
        let spec = SweepSpec {
            n_points: 19,
            counts_per_setting: 35_000,
            angle_jitter_sigma_deg: 0.5,
            n_trials: 10,
            ..SweepSpec::new(plane, source, 2024)
        };
        let result = sweep_bloch(&spec).unwrap();

        println!("=== {plane:?} plane, feed-forward on ===");
        println!("{:>10} {:>10} {:>10} {:>10}", "bloch/deg", "fidelity", "sigma", "purity");
        for p in &result.points {
            println!(
                "{:>10.1} {:>10.4} {:>10.4} {:>10.4}",
                p.bloch_angle_deg, p.fidelity_mean, p.fidelity_sigma, p.purity_mean
            );
        }
        println!("mean fidelity: {:.4}\n", result.mean_fidelity());
    }

    println!("--- Same sweeps without feed-forward ---");
    for plane in [Plane::Meridian, Plane::Equatorial] {
        let spec = SweepSpec {
            feedforward: false,
            n_trials: 10,
            ..SweepSpec::new(plane, SourceModel::paper_meridian(), 2024)
        };
        let result = sweep_bloch(&spec).unwrap();
        println!("{plane:?}: mean fidelity {:.4}", result.mean_fidelity());
    }
}
