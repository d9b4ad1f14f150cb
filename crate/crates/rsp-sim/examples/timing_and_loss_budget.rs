//! Feed-forward timing feasibility and optical loss budget.
//!
//! Run with: cargo run --example timing_and_loss_budget

use rsp_sim::config::default_losses;
use rsp_sim::feedforward::{
    db_to_transmission, loss_budget, rate_estimate, timing_report, ArmTransmissions, SwitchModel,
    TimingBudget,
};

fn main() {
    let budget = TimingBudget::default();
    let switch = SwitchModel::default();

    println!("=== Timing budget (default experiment) ===");
    println!("{}\n", timing_report(&budget, &switch));

    println!("=== Shorter delay fibers ===");
    for meters in [100.0, 120.0, 130.0, 162.0, 400.0] {
        let b = TimingBudget {
            delay_fiber_m: meters,
            ..budget
        };
        let r = timing_report(&b, &switch);
        println!(
            "{meters:>6.0} m -> delay {:>7.1} ns, slack {:>7.1} ns, {}",
            r.photon_delay_ns,
            r.slack_ns,
            if r.feasible { "feasible" } else { "INFEASIBLE" }
        );
    }

    println!("\n=== Loss budget ===");
    let losses = default_losses();
    for part in &losses {
        println!("{:<12} {:>5.2} dB", part.name, part.loss_db);
    }
    let total = loss_budget(&losses);
    println!(
        "total        {total:>5.2} dB -> transmission {:.3}",
        db_to_transmission(total)
    );

    println!("\n=== Rate bookkeeping ===");
    let rates = rate_estimate(
        &budget,
        &switch,
        17_000.0,
        &ArmTransmissions {
            signal: db_to_transmission(total),
            idler: 0.35,
        },
    );
    println!("signal singles {:>8.0} Hz", rates.singles_signal_hz);
    println!("idler singles  {:>8.0} Hz", rates.singles_idler_hz);
    println!("coincidences   {:>8.0} Hz", rates.coincidence_hz);
}
