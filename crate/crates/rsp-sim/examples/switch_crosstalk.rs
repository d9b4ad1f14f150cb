//! Effect of switch crosstalk on the prepared state: the wrong-path leak
//! mixes in the uncorrected state with probability 10^(-isolation/10).
//!
//! Run with: cargo run --example switch_crosstalk

use rsp_sim::feedforward::{run_rsp, Plane, PmSetting, RspRun, SwitchModel};
use rsp_sim::polar::DensityMatrix;

fn main() {
    let singlet = DensityMatrix::singlet();
    let setting = PmSetting::meridian(22.5);

    println!("target: diagonal state, ideal singlet input");
    println!("{:>14} {:>12} {:>12}", "isolation/dB", "leak prob", "fidelity");
    for isolation_db in [10.0, 15.0, 20.0, 25.0, 30.0, 40.0] {
        let switch = SwitchModel {
            isolation_db,
            ..SwitchModel::default()
        };
        let run = RspRun::with_switch(Plane::Meridian, true, switch);
        let out = run_rsp(&singlet, &setting, &run).unwrap();
        println!(
            "{isolation_db:>14.0} {:>12.5} {:>12.5}",
            switch.leak_probability(),
            out.unconditional.fidelity_pure(&out.target).unwrap()
        );
    }
}
