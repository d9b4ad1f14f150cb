//! The source imperfection model: how visibility, residual birefringence
//! and polarization-dependent loss degrade the shared entangled state.
//!
//! Run with: cargo run --example source_imperfections

use rsp_sim::polar::{Arm, DensityMatrix};
use rsp_sim::source::{
    apply_birefringence, apply_pdl, dephase_singlet, make_state, werner_singlet, SourceModel,
};
use rsp_sim::Complex64 as C64;

fn singlet_fidelity(rho: &DensityMatrix) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    rho.fidelity_pure_amplitudes(&[
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
        C64::new(-s, 0.0),
        C64::new(0.0, 0.0),
    ])
    .unwrap()
}

fn main() {
    println!("=== Purity reduction families ===");
    println!("{:>6} {:>18} {:>18}", "v", "dephased F/P", "werner F/P");
    for v in [1.0, 0.95, 0.8832, 0.75, 0.5] {
        let d = dephase_singlet(v).unwrap();
        let w = werner_singlet(v).unwrap();
        println!(
            "{v:>6.4} {:>9.4}/{:>8.4} {:>9.4}/{:>8.4}",
            singlet_fidelity(&d),
            d.purity(),
            singlet_fidelity(&w),
            w.purity()
        );
    }

    println!("\n=== Residual birefringence on the signal arm ===");
    let singlet = DensityMatrix::singlet();
    for chi in [0.0, 0.2, 0.25, 0.5, 1.0] {
        let rotated = apply_birefringence(&singlet, chi, Arm::Signal);
        println!(
            "chi = {chi:>4.2} rad -> singlet fidelity {:.4} (purity {:.4})",
            singlet_fidelity(&rotated),
            rotated.purity()
        );
    }

    println!("\n=== Polarization-dependent loss ===");
    for eps in [0.0, 0.01, 0.05, 0.1] {
        let lossy = apply_pdl(&singlet, eps, Arm::Signal).unwrap();
        println!(
            "eps = {eps:>4.2} -> singlet fidelity {:.5}, trace {:.3}",
            singlet_fidelity(&lossy),
            lossy.trace()
        );
    }

    println!("\n=== The fitted experiment model ===");
    let rho = make_state(&SourceModel::paper_meridian()).unwrap();
    println!(
        "purity {:.4}, singlet fidelity {:.4}",
        rho.purity(),
        singlet_fidelity(&rho)
    );
}
