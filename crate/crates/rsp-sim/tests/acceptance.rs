//! Acceptance suite: every criterion the simulator must meet, with its
//! tolerance pinned in code. Run with
//! `cargo test --test acceptance -- --nocapture` to see one line per
//! criterion.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rsp_sim::config::default_losses;
use rsp_sim::feedforward::{
    db_to_transmission, distance_to_identity_up_to_phase, loss_budget, run_rsp,
    simulate_compensation, timing_report, Plane, PmSetting, RspRun, SwitchModel, TimingBudget,
};
use rsp_sim::montecarlo::{
    hwp_grid, mc_errorbar, predicted_states, sweep_bloch, SweepSpec, TrialContext,
};
use rsp_sim::polar::{hwp_unitary, qwp_unitary, random_unitary, DensityMatrix, PureState2, Unitary2};
use rsp_sim::source::{make_state, SourceMode, SourceModel};
use rsp_sim::tomography::{
    estimate_probs, ls_reconstruct, probabilities_from_state, sample_counts, single_qubit_suite,
    two_qubit_suite, NoiseModel, TomographySetting,
};
use rsp_sim::Complex64 as C64;

fn singlet_amplitudes() -> [C64; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
        C64::new(-s, 0.0),
        C64::new(0.0, 0.0),
    ]
}

fn pass(criterion: u32, name: &str, detail: String) {
    println!("criterion {criterion} ({name}): PASS — {detail}");
}

#[test]
fn criterion_1_ideal_protocol_exactness() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for plane in [Plane::Meridian, Plane::Equatorial] {
        let spec = SweepSpec {
            n_points: 19,
            infinite_statistics: true,
            ..SweepSpec::new(plane, SourceModel::ideal(), 1)
        };
        let result = sweep_bloch(&spec).unwrap();
        assert_eq!(result.points.len(), 19);
        for point in &result.points {
            let dev = (point.fidelity_mean - 1.0).abs();
            worst = worst.max(dev);
            assert!(
                dev < 1e-9,
                "{plane:?} hwp {:.1}: fidelity off by {dev:.2e}",
                point.hwp_deg
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        1,
        "ideal-protocol exactness",
        format!("worst |F−1| = {worst:.2e} over 38 points in {elapsed:?}"),
    );
}

#[test]
fn criterion_2_no_feedforward_baseline() {
    // Analytic half: infinite statistics gives exactly 1/2.
    for plane in [Plane::Meridian, Plane::Equatorial] {
        let spec = SweepSpec {
            feedforward: false,
            infinite_statistics: true,
            ..SweepSpec::new(plane, SourceModel::ideal(), 2)
        };
        let result = sweep_bloch(&spec).unwrap();
        for point in &result.points {
            assert!(
                (point.fidelity_mean - 0.5).abs() < 1e-9,
                "analytic fidelity {} at hwp {}",
                point.fidelity_mean,
                point.hwp_deg
            );
        }
    }

    // Sampled half: 35,000 counts/setting, fidelities within 0.49 ± 0.02
    // for at least 90% of the points.
    let mut in_band = 0;
    let mut total = 0;
    for plane in [Plane::Meridian, Plane::Equatorial] {
        let spec = SweepSpec {
            feedforward: false,
            counts_per_setting: 35_000,
            ..SweepSpec::new(plane, SourceModel::ideal(), 3)
        };
        let result = sweep_bloch(&spec).unwrap();
        for point in &result.points {
            total += 1;
            if (point.fidelity_mean - 0.49).abs() <= 0.02 {
                in_band += 1;
            }
        }
    }
    assert!(
        in_band * 10 >= total * 9,
        "only {in_band}/{total} points inside 0.49 ± 0.02"
    );
    pass(
        2,
        "no-feed-forward baseline",
        format!("analytic 0.5 exact; sampled {in_band}/{total} points in 0.49 ± 0.02"),
    );
}

#[test]
fn criterion_3_paper_imperfection_model() {
    let mut details = Vec::new();
    for (plane, source, center) in [
        (Plane::Meridian, SourceModel::paper_meridian(), 0.92),
        (Plane::Equatorial, SourceModel::paper_equatorial(), 0.91),
    ] {
        let spec = SweepSpec {
            infinite_statistics: true,
            ..SweepSpec::new(plane, source, 4)
        };
        let result = sweep_bloch(&spec).unwrap();
        let mean = result.mean_fidelity();
        assert!(
            (mean - center).abs() <= 0.02,
            "{plane:?} sweep mean {mean:.4} outside {center} ± 0.02"
        );
        if plane == Plane::Meridian {
            let fids: Vec<f64> = result.points.iter().map(|p| p.fidelity_mean).collect();
            let osc = fids.iter().cloned().fold(0.0f64, f64::max)
                - fids.iter().cloned().fold(1.0f64, f64::min);
            assert!(osc >= 0.02, "meridian oscillation {osc:.4} < 0.02");
            details.push(format!("meridian mean {mean:.4}, oscillation {osc:.3}"));
        } else {
            details.push(format!("equatorial mean {mean:.4}"));
        }
    }
    pass(3, "paper imperfection model", details.join("; "));
}

#[test]
fn criterion_4_feedforward_only_fidelity() {
    // Only the routing-chain imperfections separate the simulation from the
    // predicted states: 0.5° miscalibration, 1% PDL, 0.2 rad birefringence.
    let ff_source = SourceModel {
        mode: SourceMode::Dephased,
        visibility: 1.0,
        chi_signal_rad: 0.2,
        chi_idler_rad: 0.0,
        pdl_fraction: 0.01,
        pdl_arm: rsp_sim::polar::Arm::Signal,
        leak_probability: 0.0,
    };
    let rho4 = make_state(&ff_source).unwrap();
    let mut details = Vec::new();
    for plane in [Plane::Meridian, Plane::Equatorial] {
        let grid = hwp_grid(plane, 19);
        let predicted = predicted_states(&DensityMatrix::singlet(), plane, &grid).unwrap();
        let run = RspRun {
            miscalibration_deg: 0.5,
            ..RspRun::ideal(plane)
        };
        let mean = grid
            .iter()
            .zip(&predicted)
            .map(|(hwp, pred)| {
                let out = run_rsp(&rho4, &PmSetting::for_plane(plane, *hwp), &run).unwrap();
                out.unconditional.fidelity_mixed(pred).unwrap()
            })
            .sum::<f64>()
            / grid.len() as f64;
        assert!(mean >= 0.985, "{plane:?} feed-forward fidelity {mean:.4}");
        details.push(format!("{plane:?} {mean:.4}"));
    }
    pass(4, "feed-forward-only fidelity ≥ 0.985", details.join(", "));
}

#[test]
fn criterion_5_tomography_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut worst: f64 = 0.0;
    for dim in [2usize, 4] {
        let suite = if dim == 2 {
            single_qubit_suite()
        } else {
            two_qubit_suite()
        };
        for case in 0..100 {
            let rho = if case % 2 == 0 {
                random_pure(&mut rng, dim)
            } else {
                random_mixed(&mut rng, dim)
            };
            let probs = probabilities_from_state(&rho, &suite).unwrap();
            let result = ls_reconstruct(&suite, &probs, dim).unwrap();
            let dist = result.rho.trace_distance(&rho).unwrap();
            worst = worst.max(dist);
            assert!(dist < 1e-6, "dim {dim} case {case}: trace distance {dist:.2e}");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    pass(
        5,
        "tomography oracle equivalence",
        format!("200 states, worst trace distance {worst:.2e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_6_error_bar_magnitude() {
    let rho = make_state(&SourceModel::paper_meridian()).unwrap();
    let suite = two_qubit_suite();
    let target = singlet_amplitudes();

    let fidelity_trial = |counts: u64, jitter: bool| {
        let suite = suite.clone();
        let rho = rho.clone();
        move |ctx: &mut TrialContext| {
            let settings: Vec<TomographySetting> = if jitter {
                suite.iter().map(|s| ctx.jitter_setting(s)).collect()
            } else {
                suite.clone()
            };
            let probs = probabilities_from_state(&rho, &settings).unwrap();
            let records =
                sample_counts(&settings, &probs, counts, ctx.draw_seed(), NoiseModel::Multinomial)
                    .unwrap();
            let mut freqs = Vec::new();
            for r in &records {
                freqs.extend(estimate_probs(r).unwrap());
            }
            let rec = ls_reconstruct(&suite, &freqs, 4).unwrap();
            rec.rho.fidelity_pure_amplitudes(&target).unwrap()
        }
    };

    // 40,000 counts per setting with 0.5° waveplate jitter.
    let stats = mc_errorbar(fidelity_trial(40_000, true), 120, 0.5, 60);
    assert!(
        stats.sigma >= 0.005 && stats.sigma <= 0.02,
        "fidelity sigma {:.4} outside [0.005, 0.02]",
        stats.sigma
    );

    // σ ∝ counts^(−0.5 ± 0.1) with jitter disabled, over a decade of
    // count values.
    let mut log_counts = Vec::new();
    let mut log_sigmas = Vec::new();
    for counts in [4_000u64, 13_000, 40_000, 130_000, 400_000] {
        let s = mc_errorbar(fidelity_trial(counts, false), 120, 0.0, 61);
        log_counts.push((counts as f64).ln());
        log_sigmas.push(s.sigma.ln());
    }
    let exponent = fit_slope(&log_counts, &log_sigmas);
    assert!(
        (exponent + 0.5).abs() <= 0.1,
        "scaling exponent {exponent:.3} outside −0.5 ± 0.1"
    );
    pass(
        6,
        "error-bar magnitude",
        format!(
            "σ(40k, 0.5° jitter) = {:.4} ∈ [0.005, 0.02]; σ ∝ counts^{exponent:.3}",
            stats.sigma
        ),
    );
}

fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn criterion_7_table_ii_identity() {
    // QWP(90°)·HWP(45°)·QWP(0°) = iσ_y and QWP(90°)·HWP(0°)·QWP(0°) = σ_z,
    // up to a global phase, within 1e-12.
    let meridian = qwp_unitary(90.0)
        .compose(&hwp_unitary(45.0))
        .compose(&qwp_unitary(0.0));
    let equatorial = qwp_unitary(90.0)
        .compose(&hwp_unitary(0.0))
        .compose(&qwp_unitary(0.0));
    let d1 = phase_aligned_deviation(&meridian, &Unitary2::i_sigma_y());
    let d2 = phase_aligned_deviation(&equatorial, &Unitary2::sigma_z());
    assert!(d1 < 1e-12, "meridian product deviates by {d1:.2e}");
    assert!(d2 < 1e-12, "equatorial product deviates by {d2:.2e}");
    pass(
        7,
        "correction waveplate-product identities",
        format!("deviations {d1:.2e}, {d2:.2e}"),
    );
}

/// Max entry deviation after removing the best global phase.
fn phase_aligned_deviation(a: &Unitary2, b: &Unitary2) -> f64 {
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..2 {
        for k in 0..2 {
            tr += a.entry(k, i).conj() * b.entry(k, i);
        }
    }
    let phase = tr / tr.norm();
    let mut dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            dev = dev.max((a.entry(i, j) * phase - b.entry(i, j)).norm());
        }
    }
    dev
}

#[test]
fn criterion_8_timing_and_loss_budget() {
    let report = timing_report(&TimingBudget::default(), &SwitchModel::default());
    assert!((report.latency_ns - 560.0).abs() < 1e-9);
    assert!(
        report.photon_delay_ns >= 780.0 && report.photon_delay_ns <= 820.0,
        "photon delay {:.1} ns",
        report.photon_delay_ns
    );
    assert!(report.feasible && report.slack_ns > 0.0);

    let total_db = loss_budget(&default_losses());
    assert!((total_db - 3.3).abs() < 1e-12);
    assert!((total_db - 3.0).abs() <= 0.5, "loss {total_db} vs ≈3 dB");
    assert!((report.max_herald_rate_hz - 1e6).abs() < 1e-6);
    pass(
        8,
        "timing and loss budget",
        format!(
            "latency 560 ns, delay {:.1} ns, slack {:.1} ns, loss {total_db:.1} dB \
             (transmission {:.3}), herald cap 1 MHz",
            report.photon_delay_ns,
            report.slack_ns,
            db_to_transmission(total_db)
        ),
    );
}

#[test]
fn criterion_9_fiber_compensation() {
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let mut worst_residual: f64 = 0.0;
    let mut worst_distance: f64 = 0.0;
    for seed in 0..50u64 {
        let fiber = random_unitary(&mut rng);
        let report = simulate_compensation(&fiber, seed, 1e-3);
        assert!(
            report.converged && report.residual_hv < 1e-3 && report.residual_da < 1e-3,
            "seed {seed}: residuals {:.2e}/{:.2e}",
            report.residual_hv,
            report.residual_da
        );
        let distance = distance_to_identity_up_to_phase(&report.compensation.compose(&fiber));
        assert!(distance <= 2e-2, "seed {seed}: inverse distance {distance:.2e}");
        worst_residual = worst_residual.max(report.residual_infidelity);
        worst_distance = worst_distance.max(distance);
    }
    pass(
        9,
        "fiber-polarization compensation",
        format!(
            "50 fibers, worst residual {worst_residual:.2e}, worst inverse distance {worst_distance:.2e}"
        ),
    );
}

fn random_pure(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    if dim == 2 {
        let u = random_unitary(rng);
        DensityMatrix::from_pure(&u.apply(&PureState2::h()))
    } else {
        let mut amps: Vec<C64> = (0..4)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in amps.iter_mut() {
            *a /= norm;
        }
        DensityMatrix::from_pure_amplitudes(&amps)
    }
}

fn random_mixed(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let mut g = vec![C64::new(0.0, 0.0); dim * dim];
    for v in g.iter_mut() {
        *v = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    }
    let mut m = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..dim {
                acc += g[i * dim + k] * g[j * dim + k].conj();
            }
            m[i * dim + j] = acc;
        }
    }
    let tr: f64 = (0..dim).map(|i| m[i * dim + i].re).sum();
    let entries: Vec<C64> = m.iter().map(|x| x / tr).collect();
    DensityMatrix::new(dim, entries).unwrap()
}
