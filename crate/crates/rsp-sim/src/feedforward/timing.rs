use std::fmt;

use serde::{Deserialize, Serialize};

use super::SwitchModel;

/// Speed of light in vacuum, meters per nanosecond.
pub const SPEED_OF_LIGHT_M_PER_NS: f64 = 0.299_792_458;

/// Latency, delay, gate and dead-time figures of the feed-forward loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimingBudget {
    /// Electrical signal from the detector to the time tagger.
    pub detector_to_ttm_ns: f64,
    /// Time-tagger processing before the trigger pulse is emitted.
    pub ttm_processing_ns: f64,
    /// Trigger propagation to the switches, including switching itself.
    pub signal_propagation_ns: f64,
    /// Length of the fiber delaying the signal photon.
    pub delay_fiber_m: f64,
    /// Group index of the delay fiber (standard single-mode value).
    pub fiber_index: f64,
    /// Duration the switches are held in the cross state per trigger.
    pub gate_duration_ns: f64,
    pub detector_deadtime_ns: f64,
}

impl Default for TimingBudget {
    fn default() -> Self {
        Self {
            detector_to_ttm_ns: 160.0,
            ttm_processing_ns: 300.0,
            signal_propagation_ns: 100.0,
            delay_fiber_m: 162.0,
            fiber_index: 1.468,
            gate_duration_ns: 700.0,
            detector_deadtime_ns: 50.0,
        }
    }
}

/// Feasibility analysis of the feed-forward timing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingReport {
    /// Total classical latency: detector → TTM → trigger → switches.
    pub latency_ns: f64,
    /// Optical delay of the signal photon in the delay fiber.
    pub photon_delay_ns: f64,
    /// `photon_delay − latency`.
    pub slack_ns: f64,
    /// The classical signal (including the switch response) beats the
    /// photon. Monotone in the delay-fiber length.
    pub feasible: bool,
    /// The photon arrives while the gate is still open. Reported for
    /// diagnostics; not part of `feasible`.
    pub gate_covers_arrival: bool,
    /// Herald-rate cap: the tightest of the switch duty cycle, the
    /// (non-retriggerable) gate rate, and the detector dead time.
    pub max_herald_rate_hz: f64,
}

/// Computes the latency/delay race and the herald-rate cap.
pub fn timing_report(budget: &TimingBudget, switch: &SwitchModel) -> TimingReport {
    let latency_ns =
        budget.detector_to_ttm_ns + budget.ttm_processing_ns + budget.signal_propagation_ns;
    let photon_delay_ns = budget.delay_fiber_m * budget.fiber_index / SPEED_OF_LIGHT_M_PER_NS;
    let slack_ns = photon_delay_ns - latency_ns;
    let ready_ns = latency_ns + switch.response_time_ns;
    let feasible = photon_delay_ns >= ready_ns;
    let gate_covers_arrival = photon_delay_ns <= ready_ns + budget.gate_duration_ns;
    let max_herald_rate_hz = switch
        .max_duty_cycle_hz
        .min(1e9 / budget.gate_duration_ns)
        .min(1e9 / budget.detector_deadtime_ns);
    TimingReport {
        latency_ns,
        photon_delay_ns,
        slack_ns,
        feasible,
        gate_covers_arrival,
        max_herald_rate_hz,
    }
}

impl fmt::Display for TimingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<28}{:>12.2} ns", "classical latency", self.latency_ns)?;
        writeln!(f, "{:<28}{:>12.2} ns", "photon delay", self.photon_delay_ns)?;
        writeln!(f, "{:<28}{:>12.2} ns", "slack", self.slack_ns)?;
        writeln!(
            f,
            "{:<28}{:>12}",
            "gate covers arrival",
            if self.gate_covers_arrival { "yes" } else { "no" }
        )?;
        writeln!(
            f,
            "{:<28}{:>9.3} MHz",
            "max herald rate",
            self.max_herald_rate_hz / 1e6
        )?;
        write!(
            f,
            "{:<28}{:>12}",
            "verdict",
            if self.feasible { "FEASIBLE" } else { "INFEASIBLE" }
        )
    }
}

/// One lossy element of the optical path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossComponent {
    pub name: String,
    pub loss_db: f64,
}

impl LossComponent {
    pub fn new(name: &str, loss_db: f64) -> Self {
        Self {
            name: name.to_string(),
            loss_db,
        }
    }
}

/// Total insertion loss in dB.
pub fn loss_budget(components: &[LossComponent]) -> f64 {
    components.iter().map(|c| c.loss_db).sum()
}

/// Transmission fraction corresponding to a dB loss.
pub fn db_to_transmission(loss_db: f64) -> f64 {
    10f64.powf(-loss_db / 10.0)
}

/// Per-arm transmission fractions for the rate model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmTransmissions {
    pub signal: f64,
    pub idler: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEstimate {
    pub singles_signal_hz: f64,
    pub singles_idler_hz: f64,
    pub coincidence_hz: f64,
}

/// Simple multiplicative rate model: each arm's singles are the pair rate
/// scaled by that arm's transmission, coincidences by both; everything is
/// capped at the herald-rate limit.
pub fn rate_estimate(
    budget: &TimingBudget,
    switch: &SwitchModel,
    pair_rate_hz: f64,
    transmissions: &ArmTransmissions,
) -> RateEstimate {
    let cap = timing_report(budget, switch).max_herald_rate_hz;
    RateEstimate {
        singles_signal_hz: (pair_rate_hz * transmissions.signal).min(cap),
        singles_idler_hz: (pair_rate_hz * transmissions.idler).min(cap),
        coincidence_hz: (pair_rate_hz * transmissions.signal * transmissions.idler).min(cap),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn default_budget_is_feasible_with_expected_figures() {
        let report = timing_report(&TimingBudget::default(), &SwitchModel::default());
        assert_abs_diff_eq!(report.latency_ns, 560.0, epsilon = 1e-12);
        assert!(report.photon_delay_ns > 780.0 && report.photon_delay_ns < 820.0);
        assert_abs_diff_eq!(
            report.slack_ns,
            report.photon_delay_ns - 560.0,
            epsilon = 1e-12
        );
        assert!(report.feasible);
        assert!(report.gate_covers_arrival);
    }

    #[test]
    fn short_delay_fiber_is_infeasible() {
        let budget = TimingBudget {
            delay_fiber_m: 100.0,
            ..TimingBudget::default()
        };
        let report = timing_report(&budget, &SwitchModel::default());
        assert!(report.photon_delay_ns < 560.0);
        assert!(!report.feasible);
    }

    #[test]
    fn herald_rate_capped_by_duty_cycle() {
        let report = timing_report(&TimingBudget::default(), &SwitchModel::default());
        assert_abs_diff_eq!(report.max_herald_rate_hz, 1e6, epsilon = 1e-6);
    }

    #[test]
    fn loss_budget_sums_and_converts() {
        let parts = [
            LossComponent::new("switch 1", 1.3),
            LossComponent::new("switch 2", 1.3),
            LossComponent::new("u-bench", 0.7),
        ];
        assert_abs_diff_eq!(loss_budget(&parts), 3.3, epsilon = 1e-12);
        assert_abs_diff_eq!(loss_budget(&[]), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(db_to_transmission(3.0), 0.501_187_233_627_272_2, epsilon = 1e-12);
    }

    #[test]
    fn rate_model_examples() {
        let budget = TimingBudget::default();
        let switch = SwitchModel::default();
        let ideal = rate_estimate(
            &budget,
            &switch,
            17_000.0,
            &ArmTransmissions {
                signal: 1.0,
                idler: 1.0,
            },
        );
        assert_abs_diff_eq!(ideal.coincidence_hz, 17_000.0, epsilon = 1e-9);

        // 3 dB on the signal arm, PM-station coupling on the idler arm.
        let realistic = rate_estimate(
            &budget,
            &switch,
            17_000.0,
            &ArmTransmissions {
                signal: 0.5,
                idler: 0.35,
            },
        );
        assert!(realistic.coincidence_hz > 1_500.0 && realistic.coincidence_hz < 4_500.0);

        let saturated = rate_estimate(
            &budget,
            &switch,
            5e6,
            &ArmTransmissions {
                signal: 1.0,
                idler: 1.0,
            },
        );
        assert_abs_diff_eq!(saturated.coincidence_hz, 1e6, epsilon = 1e-6);
    }

    #[test]
    fn report_prints_an_aligned_table() {
        let report = timing_report(&TimingBudget::default(), &SwitchModel::default());
        let text = report.to_string();
        assert!(text.contains("FEASIBLE"));
        assert!(text.contains("slack"));
    }

    proptest! {
        // Lengthening the delay fiber never makes a feasible budget
        // infeasible.
        #[test]
        fn feasibility_is_monotone_in_delay(
            base_m in 0.0f64..500.0,
            extra_m in 0.0f64..5000.0,
        ) {
            let switch = SwitchModel::default();
            let short = TimingBudget { delay_fiber_m: base_m, ..TimingBudget::default() };
            let long = TimingBudget { delay_fiber_m: base_m + extra_m, ..TimingBudget::default() };
            let short_ok = timing_report(&short, &switch).feasible;
            let long_ok = timing_report(&long, &switch).feasible;
            prop_assert!(!short_ok || long_ok);
        }
    }
}
