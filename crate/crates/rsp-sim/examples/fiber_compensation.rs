//! Iterative fiber-polarization compensation: undo the fixed random
//! rotation of a fiber leg by alternately minimizing the crossed-port
//! counts of |H> and |D> probes.
//!
//! Run with: cargo run --example fiber_compensation

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rsp_sim::feedforward::{distance_to_identity_up_to_phase, simulate_compensation};
use rsp_sim::polar::{random_unitary, rotation};

fn main() {
    println!("=== Rotation-only fiber (single-pass case) ===");
    let fiber = rotation(10.0);
    let report = simulate_compensation(&fiber, 1, 1e-9);
    println!(
        "converged: {}, rounds: {}, residuals: H/V {:.2e}, D/A {:.2e}",
        report.converged, report.iterations, report.residual_hv, report.residual_da
    );
    println!(
        "compensation . fiber distance to identity: {:.2e}\n",
        distance_to_identity_up_to_phase(&report.compensation.compose(&fiber))
    );

    println!("=== Random fiber unitaries ===");
    for seed in 0..6u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fiber = random_unitary(&mut rng);
        let report = simulate_compensation(&fiber, seed, 1e-3);
        let distance =
            distance_to_identity_up_to_phase(&report.compensation.compose(&fiber));
        println!(
            "seed {seed}: rounds {:>2}, residual {:.2e}, inverse distance {:.2e}, converged {}",
            report.iterations, report.residual_infidelity, distance, report.converged
        );
    }
}
