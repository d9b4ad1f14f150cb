use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::TOL_CONSTRUCT;

/// A normalized single-photon polarization state `α|H⟩ + β|V⟩`.
///
/// Physical states are rays: two `PureState2` values compare equal when they
/// differ only by a global phase. Serialization uses the canonical gauge in
/// which the first nonzero amplitude is real and positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateDto", into = "StateDto")]
pub struct PureState2 {
    amp_h: C64,
    amp_v: C64,
}

impl PureState2 {
    /// Builds a state from the two amplitudes, requiring normalization
    /// within `1e-12`.
    pub fn new(amp_h: C64, amp_v: C64) -> Result<Self> {
        let norm2 = amp_h.norm_sqr() + amp_v.norm_sqr();
        if (norm2 - 1.0).abs() > TOL_CONSTRUCT {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Self { amp_h, amp_v })
    }

    /// Builds a state from arbitrary (nonzero) amplitudes, rescaling to unit
    /// norm.
    pub fn normalized(amp_h: C64, amp_v: C64) -> Result<Self> {
        let norm = (amp_h.norm_sqr() + amp_v.norm_sqr()).sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(Self {
            amp_h: amp_h / norm,
            amp_v: amp_v / norm,
        })
    }

    pub fn h() -> Self {
        Self {
            amp_h: C64::new(1.0, 0.0),
            amp_v: C64::new(0.0, 0.0),
        }
    }

    pub fn v() -> Self {
        Self {
            amp_h: C64::new(0.0, 0.0),
            amp_v: C64::new(1.0, 0.0),
        }
    }

    /// Diagonal state `(|H⟩ + |V⟩)/√2`.
    pub fn d() -> Self {
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { amp_h: s, amp_v: s }
    }

    /// Anti-diagonal state `(|H⟩ − |V⟩)/√2`.
    pub fn a() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amp_h: C64::new(s, 0.0),
            amp_v: C64::new(-s, 0.0),
        }
    }

    /// Meridian-plane state `cos(θ/2)|H⟩ + sin(θ/2)|V⟩` at Bloch polar
    /// angle `theta` (radians).
    pub fn meridian(theta: f64) -> Self {
        Self {
            amp_h: C64::new((theta / 2.0).cos(), 0.0),
            amp_v: C64::new((theta / 2.0).sin(), 0.0),
        }
    }

    /// Equatorial-plane state `(|H⟩ + e^{iφ}|V⟩)/√2` at phase `phi`
    /// (radians).
    pub fn equatorial(phi: f64) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amp_h: C64::new(s, 0.0),
            amp_v: C64::from_polar(s, phi),
        }
    }

    pub fn amp_h(&self) -> C64 {
        self.amp_h
    }

    pub fn amp_v(&self) -> C64 {
        self.amp_v
    }

    /// The state orthogonal to this one: `(α, β) ↦ (−β*, α*)`.
    pub fn orthogonal(&self) -> Self {
        Self {
            amp_h: -self.amp_v.conj(),
            amp_v: self.amp_h.conj(),
        }
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> f64 {
        (self.amp_h.conj() * other.amp_h + self.amp_v.conj() * other.amp_v).norm_sqr()
    }

    /// Bloch vector `(x, y, z)` with `z = |H⟩`-pole, `x = |D⟩`, `y` the
    /// right-circular axis.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let (a, b) = (self.amp_h, self.amp_v);
        let cross = a.conj() * b;
        [2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr()]
    }

    /// True when the two states differ only by a global phase (within
    /// `1e-10`).
    pub fn equal_up_to_phase(&self, other: &Self) -> bool {
        (1.0 - self.overlap(other)).abs() < 1e-10
    }

    /// Same ray with the first nonzero amplitude made real-positive.
    pub fn canonicalized(&self) -> Self {
        let reference = if self.amp_h.norm() > 1e-14 {
            self.amp_h
        } else {
            self.amp_v
        };
        let phase = reference / reference.norm();
        Self {
            amp_h: self.amp_h / phase,
            amp_v: self.amp_v / phase,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StateDto {
    amp_h: [f64; 2],
    amp_v: [f64; 2],
}

impl From<PureState2> for StateDto {
    fn from(s: PureState2) -> Self {
        let c = s.canonicalized();
        StateDto {
            amp_h: [c.amp_h.re, c.amp_h.im],
            amp_v: [c.amp_v.re, c.amp_v.im],
        }
    }
}

impl TryFrom<StateDto> for PureState2 {
    type Error = Error;

    fn try_from(dto: StateDto) -> Result<Self> {
        PureState2::new(
            C64::new(dto.amp_h[0], dto.amp_h[1]),
            C64::new(dto.amp_v[0], dto.amp_v[1]),
        )
    }
}
