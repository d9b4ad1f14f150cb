use serde::{Deserialize, Serialize};

use super::{hwp_unitary, qwp_unitary, Unitary2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveplateKind {
    Hwp,
    Qwp,
}

/// A physical waveplate: retardance kind plus fast-axis orientation.
/// Angles are normalized to `[0°, 180°)`; a waveplate is invariant under a
/// half turn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveplateSetting {
    pub kind: WaveplateKind,
    pub angle_deg: f64,
}

impl WaveplateSetting {
    pub fn new(kind: WaveplateKind, angle_deg: f64) -> Self {
        Self {
            kind,
            angle_deg: normalize_angle(angle_deg),
        }
    }

    pub fn hwp(angle_deg: f64) -> Self {
        Self::new(WaveplateKind::Hwp, angle_deg)
    }

    pub fn qwp(angle_deg: f64) -> Self {
        Self::new(WaveplateKind::Qwp, angle_deg)
    }

    pub fn unitary(&self) -> Unitary2 {
        match self.kind {
            WaveplateKind::Hwp => hwp_unitary(self.angle_deg),
            WaveplateKind::Qwp => qwp_unitary(self.angle_deg),
        }
    }
}

pub(crate) fn normalize_angle(angle_deg: f64) -> f64 {
    let a = angle_deg % 180.0;
    if a < 0.0 {
        a + 180.0
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_normalize_to_half_turn() {
        assert_eq!(WaveplateSetting::hwp(190.0).angle_deg, 10.0);
        assert_eq!(WaveplateSetting::qwp(-45.0).angle_deg, 135.0);
        assert_eq!(WaveplateSetting::hwp(180.0).angle_deg, 0.0);
    }

    #[test]
    fn normalized_waveplate_keeps_its_action() {
        let a = WaveplateSetting::hwp(200.0).unitary();
        let b = hwp_unitary(20.0);
        assert!(a.equal_up_to_phase(&b));
    }
}
