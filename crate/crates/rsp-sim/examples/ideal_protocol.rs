//! Remote state preparation with an ideal singlet: the conditional
//! correction makes every heralded branch land on the target state.
//!
//! Run with: cargo run --example ideal_protocol

use rsp_sim::feedforward::{run_rsp, Herald, Plane, PmSetting, RspRun};
use rsp_sim::polar::DensityMatrix;

fn main() {
    let singlet = DensityMatrix::singlet();

    println!("=== Ideal remote state preparation ===\n");
    for (plane, hwp_deg) in [
        (Plane::Meridian, 22.5),
        (Plane::Meridian, 60.0),
        (Plane::Equatorial, 45.0),
        (Plane::Equatorial, 80.0),
    ] {
        let setting = PmSetting::for_plane(plane, hwp_deg);
        let out = run_rsp(&singlet, &setting, &RspRun::ideal(plane)).unwrap();
        println!(
            "{plane:?} plane, HWP {hwp_deg:>5.1} deg -> Bloch angle {:>6.1} deg",
            setting.bloch_angle_deg()
        );
        for branch in &out.branches {
            let state = branch.state.as_ref().unwrap();
            let label = match branch.herald {
                Herald::Transmit => "transmit (cross, U_B)",
                Herald::Reflect => "reflect  (bar,   U_A)",
            };
            println!(
                "  {label}: probability {:.3}, fidelity to target {:.12}",
                branch.probability,
                state.fidelity_pure(&out.target).unwrap()
            );
        }
        println!(
            "  unconditional fidelity: {:.12}\n",
            out.unconditional.fidelity_pure(&out.target).unwrap()
        );
    }

    println!("--- Without feed-forward the unheralded output is maximally mixed ---");
    let mut run = RspRun::ideal(Plane::Meridian);
    run.feedforward = false;
    let out = run_rsp(&singlet, &PmSetting::meridian(22.5), &run).unwrap();
    println!(
        "fidelity {:.3}, purity {:.3}",
        out.unconditional.fidelity_pure(&out.target).unwrap(),
        out.unconditional.purity()
    );
}
