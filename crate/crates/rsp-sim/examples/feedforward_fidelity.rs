//! Isolating the feed-forward fidelity: compare the simulated protocol
//! output, carrying only the routing-chain imperfections (0.5 deg
//! correction-waveplate miscalibration, 1% PDL, 0.2 rad residual
//! birefringence), against the states the ideal protocol would prepare.
//!
//! Run with: cargo run --example feedforward_fidelity

use rsp_sim::feedforward::{run_rsp, Plane, PmSetting, RspRun};
use rsp_sim::montecarlo::{hwp_grid, predicted_states};
use rsp_sim::polar::{Arm, DensityMatrix};
use rsp_sim::source::{make_state, SourceMode, SourceModel};

fn main() {
    // A perfect singlet degraded only along the feed-forward path.
    let ff_source = SourceModel {
        mode: SourceMode::Dephased,
        visibility: 1.0,
        chi_signal_rad: 0.2,
        chi_idler_rad: 0.0,
        pdl_fraction: 0.01,
        pdl_arm: Arm::Signal,
        leak_probability: 0.0,
    };
    let rho4 = make_state(&ff_source).unwrap();

    for plane in [Plane::Meridian, Plane::Equatorial] {
        let grid = hwp_grid(plane, 19);
        let predicted = predicted_states(&DensityMatrix::singlet(), plane, &grid).unwrap();
        let run = RspRun {
            miscalibration_deg: 0.5,
            ..RspRun::ideal(plane)
        };

        let mut total = 0.0;
        println!("=== {plane:?} plane ===");
        println!("{:>10} {:>14}", "bloch/deg", "ff fidelity");
        for (hwp, pred) in grid.iter().zip(&predicted) {
            let setting = PmSetting::for_plane(plane, *hwp);
            let out = run_rsp(&rho4, &setting, &run).unwrap();
            let fid = out.unconditional.fidelity_mixed(pred).unwrap();
            total += fid;
            println!("{:>10.1} {:>14.5}", setting.bloch_angle_deg(), fid);
        }
        println!("mean feed-forward fidelity: {:.4}\n", total / grid.len() as f64);
    }
}
