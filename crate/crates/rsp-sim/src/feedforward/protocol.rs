use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::polar::{
    hwp_unitary, qwp_unitary, Arm, DensityMatrix, Projection, PureState2, Unitary2,
    WaveplateSetting,
};

/// Which family of states the protocol prepares, fixing the correction
/// unitary `U_B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    /// Real-amplitude states on the H–D–V–A circle; `U_B = iσ_y`.
    Meridian,
    /// Equal-amplitude phase states on the D–R–A–L circle; `U_B = σ_z`.
    Equatorial,
}

/// Waveplate configuration of the projective-measurement station.
///
/// The idler photon traverses the (optional) QWP, then the HWP, then a PBS
/// whose transmitted port heralds the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmSetting {
    pub hwp_deg: f64,
    /// Fast-axis angle of the QWP when present. The equatorial family uses
    /// the QWP fixed at 45°.
    pub qwp_deg: Option<f64>,
}

impl PmSetting {
    /// Meridian-plane setting: no QWP, prepares the state at Bloch polar
    /// angle `4·hwp_deg`. Angles normalize to `[0°, 180°)`.
    pub fn meridian(hwp_deg: f64) -> Self {
        Self {
            hwp_deg: crate::polar::WaveplateSetting::hwp(hwp_deg).angle_deg,
            qwp_deg: None,
        }
    }

    /// Equatorial-plane setting: QWP at 45°, prepares the phase
    /// `4·(hwp_deg − 22.5°)`. Angles normalize to `[0°, 180°)`.
    pub fn equatorial(hwp_deg: f64) -> Self {
        Self {
            hwp_deg: crate::polar::WaveplateSetting::hwp(hwp_deg).angle_deg,
            qwp_deg: Some(45.0),
        }
    }

    pub fn for_plane(plane: Plane, hwp_deg: f64) -> Self {
        match plane {
            Plane::Meridian => Self::meridian(hwp_deg),
            Plane::Equatorial => Self::equatorial(hwp_deg),
        }
    }

    /// Bloch angle (degrees) of the prepared state: the polar angle on the
    /// meridian plane, the equatorial phase otherwise.
    pub fn bloch_angle_deg(&self) -> f64 {
        match self.qwp_deg {
            None => 4.0 * self.hwp_deg,
            Some(_) => 4.0 * (self.hwp_deg - 22.5),
        }
    }
}

/// The idler state transmitted by the PM PBS, obtained by back-propagating
/// `|H⟩` through the waveplates.
pub fn pm_projector(setting: &PmSetting) -> PureState2 {
    let hwp = WaveplateSetting::hwp(setting.hwp_deg).unitary();
    let mut back = hwp.dagger().apply(&PureState2::h());
    if let Some(qwp_deg) = setting.qwp_deg {
        let qwp = WaveplateSetting::qwp(qwp_deg).unitary();
        back = qwp.dagger().apply(&back);
    }
    back
}

/// 2×2 in-fiber ultrafast optical switch parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwitchModel {
    pub isolation_db: f64,
    pub insertion_loss_db: f64,
    pub response_time_ns: f64,
    pub max_duty_cycle_hz: f64,
}

impl Default for SwitchModel {
    fn default() -> Self {
        Self {
            isolation_db: 20.0,
            insertion_loss_db: 1.3,
            response_time_ns: 60.0,
            max_duty_cycle_hz: 1e6,
        }
    }
}

impl SwitchModel {
    /// Probability of routing into the wrong path: `10^(−isolation/10)`.
    pub fn leak_probability(&self) -> f64 {
        10f64.powf(-self.isolation_db / 10.0)
    }

    /// A switch whose isolation reproduces the given crosstalk probability.
    pub fn from_leak_probability(p: f64) -> Self {
        let isolation_db = if p > 0.0 {
            -10.0 * p.log10()
        } else {
            300.0
        };
        Self {
            isolation_db,
            ..Self::default()
        }
    }
}

/// Outcome of the heralding measurement at the PM PBS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Herald {
    /// Idler transmitted: projection onto `pm_projector(setting)`; the
    /// trigger pulse sets both switches to the cross state (route `U_B`).
    Transmit,
    /// Idler reflected: projection onto the orthogonal state; switches stay
    /// in the bar state (route `U_A`).
    Reflect,
}

/// One herald branch of an RSP run.
#[derive(Debug, Clone)]
pub struct RspBranch {
    pub herald: Herald,
    pub probability: f64,
    /// `None` when the herald outcome is impossible (probability below
    /// 1e-14).
    pub state: Option<DensityMatrix>,
}

/// Result of a remote-state-preparation run: the target, both herald
/// branches, and the unconditional (probability-weighted) output.
#[derive(Debug, Clone)]
pub struct RspOutcome {
    pub target: PureState2,
    pub branches: [RspBranch; 2],
    pub unconditional: DensityMatrix,
}

/// Protocol configuration for [`run_rsp`].
#[derive(Debug, Clone)]
pub struct RspRun {
    pub plane: Plane,
    pub feedforward: bool,
    pub switch: SwitchModel,
    /// Bar-path unitary; defaults to the identity waveplate stack.
    pub u_a: Option<Unitary2>,
    /// Cross-path unitary; defaults to the plane's correction waveplate product.
    pub u_b: Option<Unitary2>,
    /// Common offset (degrees) added to every correction-bench waveplate
    /// angle, modeling calibration uncertainty.
    pub miscalibration_deg: f64,
}

impl RspRun {
    pub fn ideal(plane: Plane) -> Self {
        Self {
            plane,
            feedforward: true,
            switch: SwitchModel::from_leak_probability(0.0),
            u_a: None,
            u_b: None,
            miscalibration_deg: 0.0,
        }
    }

    pub fn with_switch(plane: Plane, feedforward: bool, switch: SwitchModel) -> Self {
        Self {
            plane,
            feedforward,
            switch,
            u_a: None,
            u_b: None,
            miscalibration_deg: 0.0,
        }
    }
}

/// The exact correction unitary for each plane.
pub fn correction_unitary(plane: Plane) -> Unitary2 {
    match plane {
        Plane::Meridian => Unitary2::i_sigma_y(),
        Plane::Equatorial => Unitary2::sigma_z(),
    }
}

/// Waveplate angles (QWP, HWP, QWP) realizing `U_B` in the cross-path bench.
pub fn correction_bench_angles(plane: Plane) -> [f64; 3] {
    match plane {
        Plane::Meridian => [90.0, 45.0, 0.0],
        Plane::Equatorial => [90.0, 0.0, 0.0],
    }
}

/// The three-waveplate product `QWP(a)·HWP(b)·QWP(c)` with an optional
/// common angle offset.
pub fn correction_bench_unitary(angles: [f64; 3], offset_deg: f64) -> Unitary2 {
    let [a, b, c] = angles;
    qwp_unitary(a + offset_deg)
        .compose(&hwp_unitary(b + offset_deg))
        .compose(&qwp_unitary(c + offset_deg))
}

/// Identity realized as a waveplate stack (all three plates at a common
/// angle); a common miscalibration offset leaves it exactly identity.
fn identity_bench(offset_deg: f64) -> Unitary2 {
    qwp_unitary(offset_deg)
        .compose(&hwp_unitary(offset_deg))
        .compose(&qwp_unitary(offset_deg))
}

/// Runs the measurement-and-feed-forward protocol on a two-qubit input.
///
/// For each herald outcome the signal photon is collapsed by projecting the
/// idler arm, routed through the correct path unitary (per the herald when
/// feed-forward is on, always the bar path when off), and mixed with the
/// wrong-path term weighted by the switch crosstalk probability. The
/// unconditional output is the probability-weighted mixture of the two
/// branches.
pub fn run_rsp(rho4: &DensityMatrix, setting: &PmSetting, run: &RspRun) -> Result<RspOutcome> {
    let target = pm_projector(setting);
    let u_a = run.u_a.unwrap_or_else(|| identity_bench(run.miscalibration_deg));
    let u_b = run.u_b.unwrap_or_else(|| {
        correction_bench_unitary(correction_bench_angles(run.plane), run.miscalibration_deg)
    });
    let p_leak = run.switch.leak_probability();

    let mut branches = Vec::with_capacity(2);
    let mut mixture: Vec<(f64, DensityMatrix)> = Vec::with_capacity(2);
    for herald in [Herald::Transmit, Herald::Reflect] {
        let proj = match herald {
            Herald::Transmit => target,
            Herald::Reflect => target.orthogonal(),
        };
        match rho4.project_arm(Arm::Idler, &proj) {
            Projection::Outcome {
                probability,
                conditional,
            } => {
                let (correct, wrong) = if !run.feedforward {
                    (&u_a, &u_b)
                } else {
                    match herald {
                        Herald::Transmit => (&u_b, &u_a),
                        Herald::Reflect => (&u_a, &u_b),
                    }
                };
                let routed = conditional.conjugated(correct);
                let state = if p_leak > 0.0 {
                    let leaked = conditional.conjugated(wrong);
                    DensityMatrix::mixture(&[(1.0 - p_leak, &routed), (p_leak, &leaked)])
                } else {
                    routed
                };
                mixture.push((probability, state.clone()));
                branches.push(RspBranch {
                    herald,
                    probability,
                    state: Some(state),
                });
            }
            Projection::Impossible => {
                branches.push(RspBranch {
                    herald,
                    probability: 0.0,
                    state: None,
                });
            }
        }
    }

    let total: f64 = mixture.iter().map(|(p, _)| *p).sum();
    debug_assert!((total - 1.0).abs() < 1e-10, "branch probabilities sum to {total}");
    let parts: Vec<(f64, &DensityMatrix)> = mixture.iter().map(|(p, s)| (*p, s)).collect();
    let unconditional = DensityMatrix::mixture(&parts);

    let branches: [RspBranch; 2] = branches
        .try_into()
        .expect("exactly two herald outcomes");
    Ok(RspOutcome {
        target,
        branches,
        unconditional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;

    #[test]
    fn pm_projector_basics() {
        assert!(pm_projector(&PmSetting::meridian(0.0)).equal_up_to_phase(&PureState2::h()));
        assert!(pm_projector(&PmSetting::meridian(22.5)).equal_up_to_phase(&PureState2::d()));
        let circ = pm_projector(&PmSetting::equatorial(45.0));
        assert!(circ.equal_up_to_phase(&PureState2::equatorial(std::f64::consts::FRAC_PI_2)));
        // QWP 45°, HWP 33.75° lands at phase 4·(33.75 − 22.5) = 45°.
        let mid = pm_projector(&PmSetting::equatorial(33.75));
        assert!(mid.equal_up_to_phase(&PureState2::equatorial(std::f64::consts::FRAC_PI_4)));
    }

    #[test]
    fn correction_unitaries_are_the_paulis() {
        assert!(correction_unitary(Plane::Meridian).equal_up_to_phase(&Unitary2::i_sigma_y()));
        assert!(correction_unitary(Plane::Equatorial).equal_up_to_phase(&Unitary2::sigma_z()));
    }

    #[test]
    fn i_sigma_y_fixes_collapsed_meridian_states() {
        let isy = Unitary2::i_sigma_y();
        for k in 0..=12 {
            let theta = k as f64 * std::f64::consts::PI / 6.0;
            let collapsed = PureState2::new(
                C64::new(-(theta / 2.0).sin(), 0.0),
                C64::new((theta / 2.0).cos(), 0.0),
            )
            .unwrap();
            let corrected = isy.apply(&collapsed);
            assert!(corrected.equal_up_to_phase(&PureState2::meridian(theta)));
        }
    }

    /// Independent oracle: collapse the singlet by explicit amplitude
    /// arithmetic (amplitude of |x⟩_signal is Σ_y conj(Ψ_y)·ψ⁻_{x,y} with
    /// ψ⁻_{HV} = 1/√2, ψ⁻_{VH} = −1/√2), then apply σ_z as a bare 2×2
    /// product.
    #[test]
    fn sigma_z_corrects_collapsed_equatorial_states() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for k in 0..8 {
            let phi = k as f64 * std::f64::consts::PI / 4.0;
            let target = PureState2::equatorial(phi);
            let collapsed_h = target.amp_v().conj() * s;
            let collapsed_v = target.amp_h().conj() * (-s);
            let collapsed = PureState2::normalized(collapsed_h, collapsed_v).unwrap();
            let corrected = Unitary2::sigma_z().apply(&collapsed);
            assert!(corrected.equal_up_to_phase(&target), "phi = {phi}");
            // Without the correction the collapsed state is orthogonal.
            assert!(collapsed.overlap(&target) < 1e-12);
        }
    }

    #[test]
    fn correction_bench_products_match_corrections() {
        let m = correction_bench_unitary(correction_bench_angles(Plane::Meridian), 0.0);
        assert!(m.equal_up_to_phase(&Unitary2::i_sigma_y()));
        let e = correction_bench_unitary(correction_bench_angles(Plane::Equatorial), 0.0);
        assert!(e.equal_up_to_phase(&Unitary2::sigma_z()));
    }

    #[test]
    fn ideal_run_prepares_target_exactly() {
        let singlet = DensityMatrix::singlet();
        for (plane, hwp) in [
            (Plane::Meridian, 17.0),
            (Plane::Meridian, 62.5),
            (Plane::Equatorial, 30.0),
            (Plane::Equatorial, 95.0),
        ] {
            let setting = PmSetting::for_plane(plane, hwp);
            let out = run_rsp(&singlet, &setting, &RspRun::ideal(plane)).unwrap();
            for branch in &out.branches {
                let state = branch.state.as_ref().unwrap();
                assert_abs_diff_eq!(
                    state.fidelity_pure(&out.target).unwrap(),
                    1.0,
                    epsilon = 1e-10
                );
                assert_abs_diff_eq!(branch.probability, 0.5, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(
                out.unconditional.fidelity_pure(&out.target).unwrap(),
                1.0,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn without_feedforward_the_output_is_maximally_mixed() {
        let singlet = DensityMatrix::singlet();
        let mut run = RspRun::ideal(Plane::Meridian);
        run.feedforward = false;
        let out = run_rsp(&singlet, &PmSetting::meridian(22.5), &run).unwrap();
        assert!(out
            .unconditional
            .trace_distance(&DensityMatrix::maximally_mixed(2))
            .unwrap()
            < 1e-12);
        assert_abs_diff_eq!(
            out.unconditional.fidelity_pure(&out.target).unwrap(),
            0.5,
            epsilon = 1e-12
        );
    }

    /// Hand-built two-term mixture for the 20 dB leak at HWP = 22.5°:
    /// both branches give 0.99·|D⟩⟨D| + 0.01·|A⟩⟨A|, fidelity 0.99.
    #[test]
    fn leak_mixture_matches_hand_computation() {
        let singlet = DensityMatrix::singlet();
        let run = RspRun::with_switch(Plane::Meridian, true, SwitchModel::default());
        let out = run_rsp(&singlet, &PmSetting::meridian(22.5), &run).unwrap();

        let expected = DensityMatrix::mixture(&[
            (0.99, &DensityMatrix::from_pure(&PureState2::d())),
            (0.01, &DensityMatrix::from_pure(&PureState2::a())),
        ]);
        assert!(out.unconditional.trace_distance(&expected).unwrap() < 1e-12);
        assert_abs_diff_eq!(
            out.unconditional.fidelity_pure(&out.target).unwrap(),
            0.99,
            epsilon = 1e-12
        );
    }

    #[test]
    fn impossible_herald_is_propagated() {
        // Product input H⊗H: the idler can never be reflected as V.
        let product = DensityMatrix::from_pure(&PureState2::h())
            .kron(&DensityMatrix::from_pure(&PureState2::h()));
        let out = run_rsp(&product, &PmSetting::meridian(0.0), &RspRun::ideal(Plane::Meridian))
            .unwrap();
        let reflect = &out.branches[1];
        assert_eq!(reflect.herald, Herald::Reflect);
        assert!(reflect.state.is_none());
        assert_abs_diff_eq!(out.branches[0].probability, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn miscalibrated_bench_stays_close_to_ideal() {
        let u = correction_bench_unitary(correction_bench_angles(Plane::Equatorial), 0.5);
        // Half a degree of common offset moves σ_z only slightly.
        let ideal = Unitary2::sigma_z();
        let d = PureState2::d();
        let fid = DensityMatrix::from_pure(&u.apply(&d))
            .fidelity_pure(&ideal.apply(&d))
            .unwrap();
        assert!(fid > 0.999, "fidelity {fid}");
        // A common offset on the identity bench cancels exactly.
        assert!(identity_bench(0.5).equal_up_to_phase(&Unitary2::identity()));
    }

    proptest! {
        // Executable protocol identity: every setting on either plane, with
        // the ideal singlet and feed-forward on, prepares the target in both
        // branches.
        #[test]
        fn protocol_exactness(hwp in 0.0f64..180.0, equatorial in proptest::bool::ANY) {
            let plane = if equatorial { Plane::Equatorial } else { Plane::Meridian };
            let setting = PmSetting::for_plane(plane, hwp);
            let out = run_rsp(&DensityMatrix::singlet(), &setting, &RspRun::ideal(plane)).unwrap();
            for branch in &out.branches {
                let f = branch.state.as_ref().unwrap().fidelity_pure(&out.target).unwrap();
                prop_assert!((f - 1.0).abs() < 1e-10);
            }
            let total: f64 = out.branches.iter().map(|b| b.probability).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        // The unconditional output is always the probability-weighted
        // mixture of the branch states.
        #[test]
        fn unconditional_is_the_branch_mixture(hwp in 0.0f64..180.0) {
            let setting = PmSetting::equatorial(hwp);
            let run = RspRun::with_switch(Plane::Equatorial, true, SwitchModel::default());
            let out = run_rsp(&DensityMatrix::singlet(), &setting, &run).unwrap();
            let parts: Vec<(f64, &DensityMatrix)> = out
                .branches
                .iter()
                .filter_map(|b| b.state.as_ref().map(|s| (b.probability, s)))
                .collect();
            let mix = DensityMatrix::mixture(&parts);
            prop_assert!(out.unconditional.trace_distance(&mix).unwrap() < 1e-10);
        }

        // Equatorial angle map: the transmitted projector through QWP(45°)
        // and HWP(θ′) carries phase 4(θ′ − 22.5°).
        #[test]
        fn equatorial_angle_map(hwp in 0.0f64..180.0) {
            let projector = pm_projector(&PmSetting::equatorial(hwp));
            let phi = (4.0 * (hwp - 22.5)).to_radians();
            prop_assert!(projector.equal_up_to_phase(&PureState2::equatorial(phi)));
        }

        // With feed-forward off and the ideal singlet, the unconditional
        // output is maximally mixed for every setting on either plane.
        #[test]
        fn feedforward_off_is_maximally_mixed(hwp in 0.0f64..180.0, equatorial in proptest::bool::ANY) {
            let plane = if equatorial { Plane::Equatorial } else { Plane::Meridian };
            let setting = PmSetting::for_plane(plane, hwp);
            let mut run = RspRun::ideal(plane);
            run.feedforward = false;
            let out = run_rsp(&DensityMatrix::singlet(), &setting, &run).unwrap();
            let mixed = DensityMatrix::maximally_mixed(2);
            prop_assert!(out.unconditional.trace_distance(&mixed).unwrap() < 1e-12);
        }
    }
}
