//! The protocol engine: projective-measurement station, switch routing with
//! crosstalk, correction unitaries, the remote-state-preparation pipeline
//! with and without feed-forward, timing/loss budgets, and the simulated
//! iterative fiber-polarization compensation.

mod compensation;
mod protocol;
mod timing;

pub use compensation::{
    distance_to_identity_up_to_phase, simulate_compensation, CompensationReport,
    COMPENSATION_ITERATION_CAP,
};
pub use protocol::{
    correction_unitary, pm_projector, run_rsp, correction_bench_angles, correction_bench_unitary, Herald, Plane,
    PmSetting, RspBranch, RspOutcome, RspRun, SwitchModel,
};
pub use timing::{
    db_to_transmission, loss_budget, rate_estimate, timing_report, ArmTransmissions,
    LossComponent, RateEstimate, TimingBudget, TimingReport, SPEED_OF_LIGHT_M_PER_NS,
};
