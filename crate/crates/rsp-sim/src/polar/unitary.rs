use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

use super::{PureState2, TOL_CONSTRUCT};

/// A 2×2 Jones matrix, validated unitary within `1e-12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [[C64; 2]; 2],
}

impl Unitary2 {
    pub fn new(m: [[C64; 2]; 2]) -> Result<Self> {
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                // (U†U)_{ij}
                let entry = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                dev = dev.max((entry - target).norm());
            }
        }
        if dev > TOL_CONSTRUCT {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { m })
    }

    pub(crate) fn new_unchecked(m: [[C64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self {
            m: [[one, zero], [zero, one]],
        }
    }

    pub fn sigma_x() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self {
            m: [[zero, one], [one, zero]],
        }
    }

    pub fn sigma_y() -> Self {
        let zero = C64::new(0.0, 0.0);
        Self {
            m: [[zero, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), zero]],
        }
    }

    pub fn sigma_z() -> Self {
        let zero = C64::new(0.0, 0.0);
        Self {
            m: [[C64::new(1.0, 0.0), zero], [zero, C64::new(-1.0, 0.0)]],
        }
    }

    /// `iσ_y = [[0, 1], [−1, 0]]`, the meridian-plane correction.
    pub fn i_sigma_y() -> Self {
        let zero = C64::new(0.0, 0.0);
        Self {
            m: [[zero, C64::new(1.0, 0.0)], [C64::new(-1.0, 0.0), zero]],
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        self.m
    }

    pub fn dagger(&self) -> Self {
        Self {
            m: [
                [self.m[0][0].conj(), self.m[1][0].conj()],
                [self.m[0][1].conj(), self.m[1][1].conj()],
            ],
        }
    }

    /// Matrix product `self · rhs` (rhs acts first).
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        Self { m: out }
    }

    pub fn apply(&self, state: &PureState2) -> PureState2 {
        let h = self.m[0][0] * state.amp_h() + self.m[0][1] * state.amp_v();
        let v = self.m[1][0] * state.amp_h() + self.m[1][1] * state.amp_v();
        // Unitaries preserve the norm, so this cannot fail.
        PureState2::new(h, v).expect("unitary preserves normalization")
    }

    /// True when `self = e^{iγ}·other` for some real `γ`, within `1e-10`.
    pub fn equal_up_to_phase(&self, other: &Self) -> bool {
        // Tr(U†V)/2 has unit magnitude iff U and V agree up to phase.
        let mut tr = C64::new(0.0, 0.0);
        for i in 0..2 {
            for k in 0..2 {
                tr += self.m[k][i].conj() * other.m[k][i];
            }
        }
        let mag = tr.norm() / 2.0;
        if (1.0 - mag).abs() > 1e-10 {
            return false;
        }
        // self = e^{iγ}·other makes tr = 2e^{−iγ}, so multiplying self by
        // tr/|tr| removes the phase.
        let phase = tr / tr.norm();
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                dev = dev.max((self.m[i][j] * phase - other.m[i][j]).norm());
            }
        }
        dev < 1e-10
    }
}

/// Jones matrix of a half-wave plate with its fast axis at `angle_deg`
/// degrees from horizontal.
pub fn hwp_unitary(angle_deg: f64) -> Unitary2 {
    let two_theta = 2.0 * angle_deg.to_radians();
    let (s, c) = two_theta.sin_cos();
    Unitary2::new_unchecked([
        [C64::new(c, 0.0), C64::new(s, 0.0)],
        [C64::new(s, 0.0), C64::new(-c, 0.0)],
    ])
}

/// Jones matrix of a quarter-wave plate with its fast axis at `angle_deg`
/// degrees from horizontal: `R(θ)·diag(1, −i)·R(−θ)`.
pub fn qwp_unitary(angle_deg: f64) -> Unitary2 {
    let theta = angle_deg.to_radians();
    let (s, c) = theta.sin_cos();
    let (c2, s2, sc) = (c * c, s * s, s * c);
    Unitary2::new_unchecked([
        [C64::new(c2, -s2), C64::new(sc, sc)],
        [C64::new(sc, sc), C64::new(s2, -c2)],
    ])
}

/// Rotation of the polarization plane by `angle_deg` degrees
/// (counter-clockwise): `[[cos θ, −sin θ], [sin θ, cos θ]]`.
pub fn rotation(angle_deg: f64) -> Unitary2 {
    let theta = angle_deg.to_radians();
    let (s, c) = theta.sin_cos();
    Unitary2::new_unchecked([
        [C64::new(c, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(c, 0.0)],
    ])
}

/// Relative phase `phi_rad` between the H and V components:
/// `diag(e^{−iφ/2}, e^{iφ/2})`.
pub fn z_rotation(phi_rad: f64) -> Unitary2 {
    Unitary2::new_unchecked([
        [C64::from_polar(1.0, -phi_rad / 2.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::from_polar(1.0, phi_rad / 2.0)],
    ])
}

/// Haar-distributed random 2×2 unitary (Ginibre draw + Gram–Schmidt).
pub fn random_unitary(rng: &mut impl rand::Rng) -> Unitary2 {
    use rand_distr::{Distribution, StandardNormal};
    let mut g = [[C64::new(0.0, 0.0); 2]; 2];
    for row in &mut g {
        for entry in row.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *entry = C64::new(re, im);
        }
    }
    // Orthonormalize the columns.
    let n0 = (g[0][0].norm_sqr() + g[1][0].norm_sqr()).sqrt();
    let c0 = [g[0][0] / n0, g[1][0] / n0];
    let overlap = c0[0].conj() * g[0][1] + c0[1].conj() * g[1][1];
    let mut c1 = [g[0][1] - c0[0] * overlap, g[1][1] - c0[1] * overlap];
    let n1 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
    c1 = [c1[0] / n1, c1[1] / n1];
    Unitary2::new([[c0[0], c1[0]], [c0[1], c1[1]]]).expect("Gram-Schmidt output is unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag(a: C64, b: C64) -> Unitary2 {
        Unitary2::new_unchecked([[a, C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), b]])
    }

    #[test]
    fn hwp_at_zero_reflects_about_h() {
        let expected = diag(C64::new(1.0, 0.0), C64::new(-1.0, 0.0));
        assert!(hwp_unitary(0.0).equal_up_to_phase(&expected));
    }

    #[test]
    fn hwp_rotates_h_to_d_and_v() {
        assert!(hwp_unitary(22.5).apply(&PureState2::h()).equal_up_to_phase(&PureState2::d()));
        assert!(hwp_unitary(45.0).apply(&PureState2::h()).equal_up_to_phase(&PureState2::v()));
    }

    #[test]
    fn qwp_at_zero_is_quarter_wave_along_h() {
        let expected = diag(C64::new(1.0, 0.0), C64::new(0.0, -1.0));
        assert!(qwp_unitary(0.0).equal_up_to_phase(&expected));
    }

    #[test]
    fn qwp_at_45_makes_circular_light() {
        let out = qwp_unitary(45.0).apply(&PureState2::h());
        let expected = PureState2::equatorial(std::f64::consts::FRAC_PI_2);
        assert!(out.equal_up_to_phase(&expected));
    }

    #[test]
    fn equal_up_to_phase_examples() {
        let isy = Unitary2::i_sigma_y();
        assert!(isy.equal_up_to_phase(&isy));
        let minus_sz = Unitary2::new_unchecked([
            [C64::new(-1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ]);
        assert!(Unitary2::sigma_z().equal_up_to_phase(&minus_sz));
        assert!(!Unitary2::sigma_z().equal_up_to_phase(&Unitary2::sigma_x()));
    }

    proptest! {
        // Bloch polar angle of the back-propagated meridian projector is
        // exactly four times the HWP fast-axis angle.
        #[test]
        fn hwp_angle_map(theta_prime in 0.0f64..90.0) {
            let out = hwp_unitary(theta_prime).apply(&PureState2::h());
            let expected = PureState2::meridian(4.0 * theta_prime.to_radians());
            prop_assert!(out.equal_up_to_phase(&expected));
        }

        #[test]
        fn hwp_squares_to_identity(theta in 0.0f64..180.0) {
            let h = hwp_unitary(theta);
            prop_assert!(h.compose(&h).equal_up_to_phase(&Unitary2::identity()));
        }

        #[test]
        fn qwp_squares_to_hwp(theta in 0.0f64..180.0) {
            let q = qwp_unitary(theta);
            prop_assert!(q.compose(&q).equal_up_to_phase(&hwp_unitary(theta)));
        }

        #[test]
        fn waveplates_are_unitary(theta in -360.0f64..360.0) {
            prop_assert!(Unitary2::new(hwp_unitary(theta).matrix()).is_ok());
            prop_assert!(Unitary2::new(qwp_unitary(theta).matrix()).is_ok());
        }
    }
}
