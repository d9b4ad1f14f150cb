//! Least-squares density-matrix reconstruction.
//!
//! The cost `C(ρ) = Σ_k (Tr[Ô_k ρ] − P_k)²` is minimized over the set of
//! physical states by writing `ρ = T†T / Tr(T†T)` with `T` lower
//! triangular — positivity and unit trace hold by construction — and
//! running Levenberg–Marquardt on the `d²` real parameters of `T` with an
//! analytic Jacobian. Convergence: cost change below 1e-12 or 10,000
//! iterations.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::polar::DensityMatrix;

use super::{projectors_for, Projector, TomographyResult, TomographySetting};

const COST_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: u32 = 10_000;

/// Measurement designs with a condition number above this are flagged.
const CONDITION_WARN: f64 = 1e6;

/// Reconstructs the state of dimension `dim` (2 or 4) from the measured
/// probabilities of `settings`.
pub fn ls_reconstruct(
    settings: &[TomographySetting],
    probs: &[f64],
    dim: usize,
) -> Result<TomographyResult> {
    if dim != 2 && dim != 4 {
        return Err(Error::DimensionMismatch { expected: 2, got: dim });
    }
    let mut projectors = Vec::new();
    for setting in settings {
        if setting.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: setting.dim(),
            });
        }
        projectors.extend(projectors_for(setting));
    }
    if projectors.len() != probs.len() {
        return Err(Error::DimensionMismatch {
            expected: projectors.len(),
            got: probs.len(),
        });
    }

    let condition_number = design_condition(&projectors, dim)?;
    if condition_number > CONDITION_WARN {
        eprintln!(
            "warning: measurement design condition number {condition_number:.3e}; \
             the least-squares minimizer may not be unique"
        );
    }

    // Start from the unconstrained linear inverse pulled just inside the
    // physical simplex; from a maximally mixed start the factorization's
    // flat directions make boundary optima unreachable in practice.
    let mut state = Factor::from_state(dim, &linear_inverse_estimate(&projectors, probs, dim))
        .unwrap_or_else(|| Factor::mixed(dim));
    let mut cost = cost_of(&state, &projectors, probs);
    {
        let mixed = Factor::mixed(dim);
        let mixed_cost = cost_of(&mixed, &projectors, probs);
        if mixed_cost < cost {
            state = mixed;
            cost = mixed_cost;
        }
    }
    let n_par = dim * dim;
    let n_res = probs.len();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let mut converged = false;
    let mut tiny_streak = 0u32;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (jac, residuals) = jacobian(&state, &projectors, probs);

        // Normal equations with Marquardt damping.
        let mut jtj = vec![0.0; n_par * n_par];
        let mut jtr = vec![0.0; n_par];
        for k in 0..n_res {
            for a in 0..n_par {
                let jka = jac[k * n_par + a];
                jtr[a] += jka * residuals[k];
                for b in a..n_par {
                    jtj[a * n_par + b] += jka * jac[k * n_par + b];
                }
            }
        }
        for a in 0..n_par {
            for b in 0..a {
                jtj[a * n_par + b] = jtj[b * n_par + a];
            }
        }
        let grad_norm = jtr.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        if grad_norm < 1e-14 {
            converged = true;
            break;
        }

        let mut improvement = None;
        for _attempt in 0..30 {
            let mut damped = jtj.clone();
            for a in 0..n_par {
                let d = jtj[a * n_par + a].max(1e-12);
                damped[a * n_par + a] += lambda * d;
            }
            let Some(step) = cholesky_solve(n_par, &damped, &jtr) else {
                lambda = (lambda * 10.0).min(1e14);
                continue;
            };
            let mut trial = state.clone();
            for (t, s) in trial.params.iter_mut().zip(step.iter()) {
                *t -= s;
            }
            let trial_cost = cost_of(&trial, &projectors, probs);
            if trial_cost <= cost {
                improvement = Some(cost - trial_cost);
                state = trial;
                cost = trial_cost;
                lambda = (lambda * 0.3).max(1e-12);
                break;
            }
            lambda = (lambda * 10.0).min(1e14);
        }
        match improvement {
            // A tiny heavily-damped step is weak evidence of a minimum, so
            // require either a near-Gauss-Newton step or a run of stalled
            // iterations before stopping.
            Some(imp) if imp < COST_TOLERANCE => {
                tiny_streak += 1;
                if lambda <= 1e-2 || tiny_streak >= 5 {
                    converged = true;
                    break;
                }
            }
            Some(_) => {
                tiny_streak = 0;
            }
            // No step length improved the cost at all: stationary.
            None => {
                converged = true;
                break;
            }
        }
    }

    let rho = DensityMatrix::new(dim, state.density())?;
    Ok(TomographyResult {
        rho,
        residual: cost,
        iterations,
        converged,
        condition_number,
    })
}

/// Lower-triangular factor `T`, parameterized by `d` real diagonal entries
/// followed by (re, im) pairs for each below-diagonal entry.
#[derive(Clone)]
struct Factor {
    dim: usize,
    params: Vec<f64>,
}

impl Factor {
    /// Starts at the maximally mixed state: `T = 1/√d`.
    fn mixed(dim: usize) -> Self {
        let mut params = vec![0.0; dim * dim];
        for i in 0..dim {
            params[i] = (1.0 / dim as f64).sqrt();
        }
        Self { dim, params }
    }

    /// Recovers a lower-triangular factor with `T†T = ρ` through the
    /// reversed Cholesky decomposition: with `P` the index-reversal
    /// permutation, `T = P·chol(PρP)†·P`.
    fn from_state(dim: usize, rho: &[C64]) -> Option<Self> {
        let d = dim;
        let rev = |i: usize| d - 1 - i;
        let mut reversed = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                reversed[i * d + j] = rho[rev(i) * d + rev(j)];
            }
        }
        let l = complex_cholesky(d, &reversed)?;
        // T_{ij} = conj(L[rev(j)][rev(i)]) — the reversed conjugate
        // transpose is lower triangular again.
        let mut params = vec![0.0; d * d];
        let mut t = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..=i {
                t[i * d + j] = l[rev(j) * d + rev(i)].conj();
            }
        }
        for i in 0..d {
            if t[i * d + i].im.abs() > 1e-9 {
                return None;
            }
            params[i] = t[i * d + i].re;
        }
        let mut idx = d;
        for row in 1..d {
            for col in 0..row {
                params[idx] = t[row * d + col].re;
                params[idx + 1] = t[row * d + col].im;
                idx += 2;
            }
        }
        Some(Self { dim, params })
    }

    /// The (row, col, re/im) layout of parameter `j`.
    fn entry_of(&self, j: usize) -> (usize, usize, bool) {
        let d = self.dim;
        if j < d {
            return (j, j, true);
        }
        let mut idx = d;
        for row in 1..d {
            for col in 0..row {
                if idx == j {
                    return (row, col, true);
                }
                if idx + 1 == j {
                    return (row, col, false);
                }
                idx += 2;
            }
        }
        unreachable!("parameter index out of range")
    }

    fn t_matrix(&self) -> Vec<C64> {
        let d = self.dim;
        let mut t = vec![C64::new(0.0, 0.0); d * d];
        for (j, &v) in self.params.iter().enumerate() {
            let (row, col, is_re) = self.entry_of(j);
            if is_re {
                t[row * d + col] += C64::new(v, 0.0);
            } else {
                t[row * d + col] += C64::new(0.0, v);
            }
        }
        t
    }

    /// `A = T†T` and its trace.
    fn gram(&self) -> (Vec<C64>, f64) {
        let d = self.dim;
        let t = self.t_matrix();
        let mut a = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..d {
                    acc += t[k * d + i].conj() * t[k * d + j];
                }
                a[i * d + j] = acc;
            }
        }
        let trace: f64 = (0..d).map(|i| a[i * d + i].re).sum();
        (a, trace)
    }

    fn density(&self) -> Vec<C64> {
        let (a, trace) = self.gram();
        a.iter().map(|x| x / trace).collect()
    }
}

fn model_probs(state: &Factor, projectors: &[Projector]) -> Vec<f64> {
    let d = state.dim;
    let rho = state.density();
    projectors
        .iter()
        .map(|p| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    acc += p.matrix[i * d + j] * rho[j * d + i];
                }
            }
            acc.re
        })
        .collect()
}

fn cost_of(state: &Factor, projectors: &[Projector], probs: &[f64]) -> f64 {
    model_probs(state, projectors)
        .iter()
        .zip(probs)
        .map(|(m, p)| (m - p) * (m - p))
        .sum()
}

/// Analytic Jacobian of the residuals. With `M_j = E_j†T + T†E_j`,
/// `∂ρ/∂t_j = (M_j − ρ·Tr M_j)/Tr(T†T)`, and both traces reduce to entries
/// of `T·O_k` and `T`.
fn jacobian(state: &Factor, projectors: &[Projector], probs: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let d = state.dim;
    let n_par = d * d;
    let t = state.t_matrix();
    let (_, trace) = state.gram();
    let model = model_probs(state, projectors);
    let residuals: Vec<f64> = model.iter().zip(probs).map(|(m, p)| m - p).collect();

    let mut jac = vec![0.0; projectors.len() * n_par];
    for (k, projector) in projectors.iter().enumerate() {
        // T·O_k
        let mut to = vec![C64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for x in 0..d {
                    acc += t[r * d + x] * projector.matrix[x * d + c];
                }
                to[r * d + c] = acc;
            }
        }
        for j in 0..n_par {
            let (row, col, is_re) = state.entry_of(j);
            let z = to[row * d + col];
            let w = t[row * d + col];
            let (tr_om, tr_m) = if is_re {
                (2.0 * z.re, 2.0 * w.re)
            } else {
                (2.0 * z.im, 2.0 * w.im)
            };
            jac[k * n_par + j] = (tr_om - model[k] * tr_m) / trace;
        }
    }
    (jac, residuals)
}

/// Orthonormal Hermitian-basis coordinates of a Hermitian matrix:
/// diagonal entries, then `√2·(Re, Im)` of each upper off-diagonal.
fn hermitian_coords(dim: usize, m: &[C64]) -> Vec<f64> {
    let mut coords = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        coords.push(m[i * dim + i].re);
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    for i in 0..dim {
        for j in (i + 1)..dim {
            coords.push(sqrt2 * m[i * dim + j].re);
            coords.push(sqrt2 * m[i * dim + j].im);
        }
    }
    coords
}

fn coords_to_hermitian(dim: usize, x: &[f64]) -> Vec<C64> {
    let mut m = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        m[i * dim + i] = C64::new(x[i], 0.0);
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut idx = dim;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = C64::new(x[idx] / sqrt2, x[idx + 1] / sqrt2);
            m[i * dim + j] = v;
            m[j * dim + i] = v.conj();
            idx += 2;
        }
    }
    m
}

/// Unconstrained linear least-squares estimate, eigenvalue-projected onto
/// the state simplex and pulled slightly into the interior.
fn linear_inverse_estimate(projectors: &[Projector], probs: &[f64], dim: usize) -> Vec<C64> {
    let n_par = dim * dim;
    let rows: Vec<Vec<f64>> = projectors
        .iter()
        .map(|p| hermitian_coords(dim, &p.matrix))
        .collect();
    let mut ata = vec![0.0; n_par * n_par];
    let mut atp = vec![0.0; n_par];
    for (row, &p) in rows.iter().zip(probs) {
        for a in 0..n_par {
            atp[a] += row[a] * p;
            for b in 0..n_par {
                ata[a * n_par + b] += row[a] * row[b];
            }
        }
    }
    let x = match cholesky_solve(n_par, &ata, &atp) {
        Some(x) => x,
        None => return DensityMatrix::maximally_mixed(dim).entries().to_vec(),
    };
    let raw = coords_to_hermitian(dim, &x);

    // Clip the spectrum onto the probability simplex.
    let (mut eigs, vecs) = crate::polar::jacobi_eigen_pairs(dim, &raw);
    let shift = {
        let f = |t: f64| eigs.iter().map(|l| (l - t).max(0.0)).sum::<f64>();
        let (mut lo, mut hi) = (-2.0, 2.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let interior = 1e-8;
    for l in eigs.iter_mut() {
        *l = (*l - shift).max(0.0) * (1.0 - interior) + interior / dim as f64;
    }
    let total: f64 = eigs.iter().sum();
    let mut rho = vec![C64::new(0.0, 0.0); n_par];
    for k in 0..dim {
        let w = eigs[k] / total;
        for i in 0..dim {
            for j in 0..dim {
                rho[i * dim + j] += vecs[i * dim + k] * vecs[j * dim + k].conj() * w;
            }
        }
    }
    rho
}

/// Lower-triangular `L` with `m = L·L†`; `None` when a pivot is not
/// positive.
fn complex_cholesky(dim: usize, m: &[C64]) -> Option<Vec<C64>> {
    let mut l = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut sum = m[i * dim + j];
            for k in 0..j {
                sum -= l[i * dim + k] * l[j * dim + k].conj();
            }
            if i == j {
                if sum.re <= 0.0 {
                    return None;
                }
                l[i * dim + i] = C64::new(sum.re.sqrt(), 0.0);
            } else {
                l[i * dim + j] = sum / l[j * dim + j];
            }
        }
    }
    Some(l)
}

/// Rank / conditioning of the measurement design over Hermitian space.
/// Returns the condition number; errors out when the projectors do not
/// span all `d²` real dimensions.
fn design_condition(projectors: &[Projector], dim: usize) -> Result<f64> {
    let n_par = dim * dim;
    let rows: Vec<Vec<f64>> = projectors
        .iter()
        .map(|p| hermitian_coords(dim, &p.matrix))
        .collect();

    // Gram matrix of the design, diagonalized with the Hermitian solver.
    let mut gram = vec![C64::new(0.0, 0.0); n_par * n_par];
    for row in &rows {
        for a in 0..n_par {
            for b in 0..n_par {
                gram[a * n_par + b] += C64::new(row[a] * row[b], 0.0);
            }
        }
    }
    let mut eigs = crate::polar::jacobi_eigenvalues(n_par, &gram);
    eigs.sort_by(f64::total_cmp);
    let max = eigs[n_par - 1].max(0.0);
    let min = eigs[0].max(0.0);
    let rank = eigs.iter().filter(|&&l| l > max * 1e-9).count();
    if rank < n_par {
        return Err(Error::NotInformationallyComplete { rank, needed: n_par });
    }
    Ok((max / min).sqrt())
}

/// Solves `A x = b` for symmetric positive-definite `A`.
fn cholesky_solve(n: usize, a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    // Forward then back substitution.
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * y[k];
        }
        y[i] = sum / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in (i + 1)..n {
            sum -= l[k * n + i] * x[k];
        }
        x[i] = sum / l[i * n + i];
    }
    Some(x)
}
