//! Simulated iterative compensation of the fixed (but random) polarization
//! rotation of a fiber leg.
//!
//! The procedure mirrors the experimental one: probe photons prepared in
//! `|H⟩` and `|D⟩` are sent through the fiber, and the counts in the
//! crossed port of the measurement station are minimized alternately in the
//! `{H,V}` and `{D,A}` bases. The compensation train is modeled by three
//! one-dimensional knobs:
//!
//! * a paddle-equivalent rotation of the polarization plane,
//! * a paddle-equivalent variable retarder about the D/A axis (both
//!   adjusted during the `|H⟩`-probe pass), and
//! * the source HWP behind the fixed 45° QWP, whose net effect on the
//!   launched pair of probes is a pure H/V phase — which is why adjusting
//!   it cannot disturb an already-minimized `{H,V}` extinction. That
//!   decoupling is the point of parking the QWP at 45°.
//!
//! Each pass is a coarse scan followed by golden-section refinement; the
//! procedure repeats until both crossed-port probabilities fall below the
//! tolerance.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::polar::{rotation, z_rotation, PureState2, Unitary2};

/// Maximum number of full H/V + D/A rounds before giving up.
pub const COMPENSATION_ITERATION_CAP: u32 = 50;

/// Result of [`simulate_compensation`]. `converged == false` is the
/// explicit failure report: the best knobs found are still returned
/// together with the residual they achieve.
#[derive(Debug, Clone)]
pub struct CompensationReport {
    /// Composed compensation unitary; when converged,
    /// `compensation · fiber ≈ 1` up to a global phase.
    pub compensation: Unitary2,
    /// Full rounds executed.
    pub iterations: u32,
    /// Worst crossed-port probability over the two probes.
    pub residual_infidelity: f64,
    pub residual_hv: f64,
    pub residual_da: f64,
    pub converged: bool,
}

/// Variable retarder about the D/A axis: `exp(−i q σ_x / 2)`.
fn x_retarder(q_rad: f64) -> Unitary2 {
    let (s, c) = (q_rad / 2.0).sin_cos();
    Unitary2::new_unchecked([
        [C64::new(c, 0.0), C64::new(0.0, -s)],
        [C64::new(0.0, -s), C64::new(c, 0.0)],
    ])
}

fn rotation_rad(p_rad: f64) -> Unitary2 {
    rotation(p_rad.to_degrees())
}

#[derive(Clone, Copy)]
struct Knobs {
    rotation_rad: f64,
    retarder_rad: f64,
    phase_rad: f64,
}

impl Knobs {
    fn chain(&self, fiber: &Unitary2) -> Unitary2 {
        rotation_rad(self.rotation_rad)
            .compose(&x_retarder(self.retarder_rad))
            .compose(fiber)
            .compose(&z_rotation(self.phase_rad))
    }

    fn compensation(&self) -> Unitary2 {
        z_rotation(self.phase_rad)
            .compose(&rotation_rad(self.rotation_rad))
            .compose(&x_retarder(self.retarder_rad))
    }
}

/// Crossed-port probability for the `|H⟩` probe measured in `{H,V}`.
fn residual_hv(chain: &Unitary2) -> f64 {
    chain.apply(&PureState2::h()).overlap(&PureState2::v())
}

/// Crossed-port probability for the `|D⟩` probe measured in `{D,A}`.
fn residual_da(chain: &Unitary2) -> f64 {
    chain.apply(&PureState2::d()).overlap(&PureState2::a())
}

/// Coarse scan over one period followed by golden-section refinement.
fn line_search(objective: impl Fn(f64) -> f64, period: f64, rng: &mut ChaCha8Rng) -> f64 {
    const SCAN: usize = 48;
    let step = period / SCAN as f64;
    let offset: f64 = rng.random::<f64>() * step;
    let mut best_x = offset;
    let mut best = objective(offset);
    for k in 1..SCAN {
        let x = offset + k as f64 * step;
        let v = objective(x);
        if v < best {
            best = v;
            best_x = x;
        }
    }

    // Golden-section on the bracketing interval around the best sample.
    let inv_phi = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (best_x - step, best_x + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    while hi - lo > 1e-12 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    if objective(mid) <= best {
        mid
    } else {
        best_x
    }
}

/// Emulates the iterative two-basis compensation of a fiber unitary.
///
/// The seed only randomizes where each coarse scan starts within its first
/// grid cell; the knobs themselves start neutral, so an already-compensated
/// fiber converges without touching them.
pub fn simulate_compensation(fiber: &Unitary2, rng_seed: u64, tolerance: f64) -> CompensationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut knobs = Knobs {
        rotation_rad: 0.0,
        retarder_rad: 0.0,
        phase_rad: 0.0,
    };

    // Keep polishing well past the requested tolerance; stopping right at
    // the threshold would leave the composed compensation a ~√tolerance
    // amplitude away from the fiber inverse.
    let target = tolerance.min(1e-10);
    let mut iterations = 0;
    loop {
        let chain = knobs.chain(fiber);
        let (r_hv, r_da) = (residual_hv(&chain), residual_da(&chain));
        if r_hv.max(r_da) < target || iterations >= COMPENSATION_ITERATION_CAP {
            return CompensationReport {
                compensation: knobs.compensation(),
                iterations,
                residual_infidelity: r_hv.max(r_da),
                residual_hv: r_hv,
                residual_da: r_da,
                converged: r_hv.max(r_da) < tolerance,
            };
        }

        // H/V pass: paddle rotation, then paddle retarder.
        knobs.rotation_rad = line_search(
            |p| residual_hv(&Knobs { rotation_rad: p, ..knobs }.chain(fiber)),
            std::f64::consts::PI,
            &mut rng,
        );
        knobs.retarder_rad = line_search(
            |q| residual_hv(&Knobs { retarder_rad: q, ..knobs }.chain(fiber)),
            2.0 * std::f64::consts::PI,
            &mut rng,
        );
        // D/A pass: source HWP behind the 45° QWP, acting as an H/V phase.
        knobs.phase_rad = line_search(
            |eta| residual_da(&Knobs { phase_rad: eta, ..knobs }.chain(fiber)),
            2.0 * std::f64::consts::PI,
            &mut rng,
        );
        iterations += 1;
    }
}

/// Frobenius distance between `u` and the identity after removing the best
/// global phase.
pub fn distance_to_identity_up_to_phase(u: &Unitary2) -> f64 {
    let tr = u.entry(0, 0) + u.entry(1, 1);
    let phase = if tr.norm() > 1e-12 {
        tr / tr.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let mut acc = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let target = if i == j { phase } else { C64::new(0.0, 0.0) };
            acc += (u.entry(i, j) - target).norm_sqr();
        }
    }
    acc.sqrt()
}
