use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{PureState2, Unitary2, TOL_IMPOSSIBLE, TOL_VALIDATE};

pub(crate) type C64 = Complex64;

/// Which photon of the pair an operation acts on. Two-qubit matrices are
/// ordered signal ⊗ idler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arm {
    Signal,
    Idler,
}

/// Result of a projective measurement on one arm of a two-qubit state.
///
/// A projection whose probability is below `1e-14` yields `Impossible`
/// rather than a renormalized garbage state.
#[derive(Debug, Clone)]
pub enum Projection {
    Outcome {
        probability: f64,
        conditional: DensityMatrix,
    },
    Impossible,
}

impl Projection {
    pub fn probability(&self) -> f64 {
        match self {
            Projection::Outcome { probability, .. } => *probability,
            Projection::Impossible => 0.0,
        }
    }

    pub fn outcome(self) -> Result<(f64, DensityMatrix)> {
        match self {
            Projection::Outcome {
                probability,
                conditional,
            } => Ok((probability, conditional)),
            Projection::Impossible => Err(Error::ImpossibleOutcome),
        }
    }
}

/// An `n×n` Hermitian, positive-semidefinite, trace-one operator with
/// `n ∈ {2, 4}`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DmDto", into = "DmDto")]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace within `1e-10` and the smallest
    /// eigenvalue against `−1e-10`.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::ParameterRange {
                name: "dim",
                value: dim as f64,
                range: "{2, 4}",
            });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let dm = Self { dim, entries };
        dm.validate()?;
        Ok(dm)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        let mut asym: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                asym = asym.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        if asym > TOL_VALIDATE {
            return Err(Error::NotHermitian(asym));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TOL_VALIDATE {
            return Err(Error::NonUnitTrace(tr));
        }
        let eigs = jacobi_eigenvalues(n, &self.entries);
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -TOL_VALIDATE {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.at(i, i).re).sum()
    }

    /// `|ψ⟩⟨ψ|` for a single-qubit pure state.
    pub fn from_pure(state: &PureState2) -> Self {
        Self::from_pure_amplitudes(&[state.amp_h(), state.amp_v()])
    }

    /// `|ψ⟩⟨ψ|` from raw amplitudes of length 2 or 4.
    pub fn from_pure_amplitudes(amps: &[C64]) -> Self {
        let n = amps.len();
        let mut entries = Vec::with_capacity(n * n);
        for a in amps {
            for b in amps {
                entries.push(a * b.conj());
            }
        }
        Self { dim: n, entries }
    }

    /// The Bell singlet `(|HV⟩ − |VH⟩)/√2` as a rank-1 matrix.
    pub fn singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_pure_amplitudes(&[
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
            C64::new(-s, 0.0),
            C64::new(0.0, 0.0),
        ])
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Self { dim, entries }
    }

    /// Probability-weighted mixture. Weights must sum to 1 for the result
    /// to be a state; callers own that invariant.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Self {
        let dim = parts[0].1.dim;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for (w, dm) in parts {
            for (e, x) in entries.iter_mut().zip(dm.entries.iter()) {
                *e += x * *w;
            }
        }
        Self { dim, entries }
    }

    /// `U ρ U†` for a single-qubit state.
    pub fn conjugated(&self, u: &Unitary2) -> Self {
        assert_eq!(self.dim, 2, "conjugated is a single-qubit operation");
        let m = u.matrix();
        let mut out = vec![C64::new(0.0, 0.0); 4];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..2 {
                    for l in 0..2 {
                        acc += m[i][k] * self.at(k, l) * m[j][l].conj();
                    }
                }
                out[i * 2 + j] = acc;
            }
        }
        Self {
            dim: 2,
            entries: out,
        }
    }

    /// Applies a single-qubit unitary to one arm of a two-qubit state.
    pub fn apply_on_arm(&self, u: &Unitary2, arm: Arm) -> Self {
        assert_eq!(self.dim, 4, "apply_on_arm needs a two-qubit state");
        let big = match arm {
            Arm::Signal => kron2(&u.matrix(), &identity2()),
            Arm::Idler => kron2(&identity2(), &u.matrix()),
        };
        self.sandwich(&big)
    }

    /// `K ρ K† / Tr[K ρ K†]` for an arbitrary (not necessarily unitary)
    /// single-arm Kraus operator. Returns the survival probability too.
    pub fn apply_kraus_on_arm(&self, k: &[[C64; 2]; 2], arm: Arm) -> (f64, Self) {
        assert_eq!(self.dim, 4);
        let big = match arm {
            Arm::Signal => kron2(k, &identity2()),
            Arm::Idler => kron2(&identity2(), k),
        };
        let raw = self.sandwich(&big);
        let p = raw.trace();
        let entries = raw.entries.iter().map(|e| e / p).collect();
        (
            p,
            Self {
                dim: 4,
                entries,
            },
        )
    }

    fn sandwich(&self, big: &[Vec<C64>]) -> Self {
        let n = self.dim;
        // big · ρ · big†
        let mut tmp = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += big[i][k] * self.at(k, j);
                }
                tmp[i * n + j] = acc;
            }
        }
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += tmp[i * n + k] * big[j][k].conj();
                }
                out[i * n + j] = acc;
            }
        }
        Self {
            dim: n,
            entries: out,
        }
    }

    /// Projects one arm of a two-qubit state onto `proj` and returns the
    /// outcome probability together with the renormalized conditional state
    /// of the other arm.
    pub fn project_arm(&self, arm: Arm, proj: &PureState2) -> Projection {
        assert_eq!(self.dim, 4, "project_arm needs a two-qubit state");
        let p = [proj.amp_h(), proj.amp_v()];
        let mut cond = [[C64::new(0.0, 0.0); 2]; 2];
        match arm {
            Arm::Idler => {
                // Remaining system is the signal (first factor).
                for a in 0..2 {
                    for b in 0..2 {
                        let mut acc = C64::new(0.0, 0.0);
                        for c in 0..2 {
                            for d in 0..2 {
                                acc += p[c].conj() * self.at(a * 2 + c, b * 2 + d) * p[d];
                            }
                        }
                        cond[a][b] = acc;
                    }
                }
            }
            Arm::Signal => {
                for c in 0..2 {
                    for d in 0..2 {
                        let mut acc = C64::new(0.0, 0.0);
                        for a in 0..2 {
                            for b in 0..2 {
                                acc += p[a].conj() * self.at(a * 2 + c, b * 2 + d) * p[b];
                            }
                        }
                        cond[c][d] = acc;
                    }
                }
            }
        }
        let probability = (cond[0][0] + cond[1][1]).re;
        if probability < TOL_IMPOSSIBLE {
            return Projection::Impossible;
        }
        let entries = vec![
            cond[0][0] / probability,
            cond[0][1] / probability,
            cond[1][0] / probability,
            cond[1][1] / probability,
        ];
        Projection::Outcome {
            probability,
            conditional: DensityMatrix {
                dim: 2,
                entries,
            },
        }
    }

    /// Reduced state of one arm (the other arm traced out).
    pub fn reduced(&self, arm: Arm) -> Self {
        assert_eq!(self.dim, 4);
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..2 {
                    acc += match arm {
                        Arm::Signal => self.at(a * 2 + c, b * 2 + c),
                        Arm::Idler => self.at(c * 2 + a, c * 2 + b),
                    };
                }
                out[a][b] = acc;
            }
        }
        Self {
            dim: 2,
            entries: vec![out[0][0], out[0][1], out[1][0], out[1][1]],
        }
    }

    /// `⟨ψ|ρ|ψ⟩` for a pure target of matching dimension.
    pub fn fidelity_pure_amplitudes(&self, target: &[C64]) -> Result<f64> {
        if target.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: target.len(),
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += target[i].conj() * self.at(i, j) * target[j];
            }
        }
        Ok(acc.re)
    }

    /// `⟨ψ|ρ|ψ⟩` for a single-qubit pure target.
    pub fn fidelity_pure(&self, target: &PureState2) -> Result<f64> {
        self.fidelity_pure_amplitudes(&[target.amp_h(), target.amp_v()])
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.at(i, j) * self.at(j, i)).re;
            }
        }
        acc
    }

    /// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²` between two mixed states.
    pub fn fidelity_mixed(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let n = self.dim;
        let sqrt_rho = hermitian_sqrt(n, &self.entries);
        // M = √ρ · σ · √ρ
        let m1 = matmul(n, &sqrt_rho, &other.entries);
        let m = matmul(n, &m1, &sqrt_rho);
        let eigs = jacobi_eigenvalues(n, &m);
        let tr: f64 = eigs.iter().map(|l| l.max(0.0).sqrt()).sum();
        Ok(tr * tr)
    }

    /// Trace distance `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let diff: Vec<C64> = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a - b)
            .collect();
        let eigs = jacobi_eigenvalues(self.dim, &diff);
        Ok(0.5 * eigs.iter().map(|l| l.abs()).sum::<f64>())
    }

    /// Kronecker product, `self` as the signal (first) factor.
    pub fn kron(&self, idler: &Self) -> Self {
        assert!(self.dim == 2 && idler.dim == 2);
        let mut entries = vec![C64::new(0.0, 0.0); 16];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        entries[(a * 2 + c) * 4 + (b * 2 + d)] = self.at(a, b) * idler.at(c, d);
                    }
                }
            }
        }
        Self {
            dim: 4,
            entries,
        }
    }
}

fn identity2() -> [[C64; 2]; 2] {
    [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ]
}

fn kron2(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> Vec<Vec<C64>> {
    let mut out = vec![vec![C64::new(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[i * 2 + k][j * 2 + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn matmul(n: usize, a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += a[i * n + k] * b[k * n + j];
            }
            out[i * n + j] = acc;
        }
    }
    out
}

/// Eigenvalues of an `n×n` Hermitian matrix by cyclic Jacobi rotations.
pub(crate) fn jacobi_eigenvalues(n: usize, entries: &[C64]) -> Vec<f64> {
    let (values, _) = jacobi_eigen(n, entries, false);
    values
}

/// Eigenvalues and eigenvectors (columns of the returned matrix).
pub(crate) fn jacobi_eigen_pairs(n: usize, entries: &[C64]) -> (Vec<f64>, Vec<C64>) {
    jacobi_eigen(n, entries, true)
}

/// Full eigendecomposition; `with_vectors` controls whether the rotation
/// product is accumulated.
fn jacobi_eigen(n: usize, entries: &[C64], with_vectors: bool) -> (Vec<f64>, Vec<C64>) {
    let mut a = entries.to_vec();
    let mut v = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = C64::new(1.0, 0.0);
    }
    let scale: f64 = (0..n)
        .map(|i| a[i * n + i].norm())
        .fold(1.0, f64::max);
    let eps = 1e-15 * scale;

    for _sweep in 0..100 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].norm());
            }
        }
        if off <= eps {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.norm() <= eps {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let phi = apq.arg();
                let theta = 0.5 * (2.0 * apq.norm()).atan2(app - aqq);
                let c = theta.cos();
                let s = theta.sin();
                let e_pos = C64::from_polar(1.0, phi);
                // Columns p,q of the rotation: |p'⟩ = c|p⟩ + s e^{−iφ}|q⟩,
                // |q'⟩ = −s e^{iφ}|p⟩ + c|q⟩.
                for row in 0..n {
                    let arp = a[row * n + p];
                    let arq = a[row * n + q];
                    a[row * n + p] = arp * c + arq * (e_pos.conj() * s);
                    a[row * n + q] = arp * (-s) * e_pos + arq * c;
                }
                for col in 0..n {
                    let apc = a[p * n + col];
                    let aqc = a[q * n + col];
                    a[p * n + col] = apc * c + aqc * (e_pos * s);
                    a[q * n + col] = apc * (-s) * e_pos.conj() + aqc * c;
                }
                if with_vectors {
                    for row in 0..n {
                        let vrp = v[row * n + p];
                        let vrq = v[row * n + q];
                        v[row * n + p] = vrp * c + vrq * (e_pos.conj() * s);
                        v[row * n + q] = vrp * (-s) * e_pos + vrq * c;
                    }
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i].re).collect();
    (values, v)
}

/// `√M` for Hermitian PSD `M` (negative eigenvalues clamped to zero).
fn hermitian_sqrt(n: usize, entries: &[C64]) -> Vec<C64> {
    let (values, vecs) = jacobi_eigen(n, entries, true);
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    for (k, lambda) in values.iter().enumerate() {
        let root = lambda.max(0.0).sqrt();
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] += vecs[i * n + k] * vecs[j * n + k].conj() * root;
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct DmDto {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl From<DensityMatrix> for DmDto {
    fn from(dm: DensityMatrix) -> Self {
        DmDto {
            dim: dm.dim,
            entries: dm.entries.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<DmDto> for DensityMatrix {
    type Error = Error;

    fn try_from(dto: DmDto) -> Result<Self> {
        DensityMatrix::new(
            dto.dim,
            dto.entries.iter().map(|p| C64::new(p[0], p[1])).collect(),
        )
    }
}
