//! The two-photon input state: ideal singlet or the parameterized
//! imperfect state (reduced purity, residual birefringence on either arm,
//! polarization-dependent loss).
//!
//! Two reduced-purity families are provided. Dephasing — coherence decay
//! between the `|HV⟩` and `|VH⟩` components, the mechanism behind
//! path distinguishability in a Sagnac source — is the default; the
//! isotropic Werner mixture is available as an alternative. For visibility
//! `v` the dephased singlet has purity `(1+v²)/2` and singlet fidelity
//! `(1+v)/2`; the Werner state has fidelity `(1+3v)/4`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polar::{z_rotation, Arm, DensityMatrix};

/// Purity-reduction family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceMode {
    /// Exact singlet; forces `visibility = 1`, zero birefringence, zero PDL
    /// and zero switch leakage.
    Ideal,
    /// Coherence decay between the `|HV⟩` and `|VH⟩` components.
    Dephased,
    /// Isotropic mixture `v·|ψ⁻⟩⟨ψ⁻| + (1−v)·I/4`.
    Werner,
}

/// Visibility that gives the dephased singlet a purity of 0.89
/// (`v = √(2·0.89 − 1)`).
pub const VISIBILITY_PURITY_089: f64 = 0.883_176_086_632_784_7;

/// Parameterization of the imperfect entangled state.
///
/// `leak_probability` is the switch crosstalk carried alongside the source
/// parameters; it is not applied here but consumed by the protocol engine
/// downstream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourceModel {
    pub mode: SourceMode,
    /// Coherence visibility `v ∈ [0, 1]`.
    pub visibility: f64,
    /// Residual birefringence on the signal arm, radians (phase between H
    /// and V).
    pub chi_signal_rad: f64,
    /// Residual birefringence on the idler arm, radians.
    pub chi_idler_rad: f64,
    /// Polarization-dependent loss fraction `ε ∈ [0, 1)`:
    /// `K = diag(1, √(1−ε))` on the chosen arm.
    pub pdl_fraction: f64,
    /// Arm carrying the PDL. Defaults to the signal arm, which traverses
    /// the switches.
    pub pdl_arm: Arm,
    /// Switch crosstalk probability `∈ [0, 1)`, consumed downstream.
    pub leak_probability: f64,
}

impl Default for SourceModel {
    /// The imperfection model fitted to the experiment: dephased singlet of
    /// purity 0.89, 0.5 rad residual birefringence on the signal arm, 1%
    /// PDL, and 20 dB switch crosstalk.
    fn default() -> Self {
        Self {
            mode: SourceMode::Dephased,
            visibility: VISIBILITY_PURITY_089,
            chi_signal_rad: 0.5,
            chi_idler_rad: 0.0,
            pdl_fraction: 0.01,
            pdl_arm: Arm::Signal,
            leak_probability: 0.01,
        }
    }
}

impl SourceModel {
    pub fn ideal() -> Self {
        Self {
            mode: SourceMode::Ideal,
            visibility: 1.0,
            chi_signal_rad: 0.0,
            chi_idler_rad: 0.0,
            pdl_fraction: 0.0,
            pdl_arm: Arm::Signal,
            leak_probability: 0.0,
        }
    }

    /// The meridian-plane model (0.5 rad residual birefringence).
    pub fn paper_meridian() -> Self {
        Self::default()
    }

    /// The equatorial-plane model (0.25 rad residual birefringence; the
    /// compensation was redone between the two measurements).
    pub fn paper_equatorial() -> Self {
        Self {
            chi_signal_rad: 0.25,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_range("visibility", self.visibility, 0.0, 1.0, "[0, 1]")?;
        check_range(
            "pdl_fraction",
            self.pdl_fraction,
            0.0,
            1.0 - f64::EPSILON,
            "[0, 1)",
        )?;
        check_range(
            "leak_probability",
            self.leak_probability,
            0.0,
            1.0 - f64::EPSILON,
            "[0, 1)",
        )?;
        if !self.chi_signal_rad.is_finite() || !self.chi_idler_rad.is_finite() {
            return Err(Error::ParameterRange {
                name: "chi",
                value: f64::NAN,
                range: "finite radians",
            });
        }
        Ok(())
    }

    /// The model with the ideal-mode overrides applied (`v = 1`, zero
    /// birefringence, PDL and leakage).
    pub fn effective(&self) -> Self {
        match self.mode {
            SourceMode::Ideal => Self::ideal(),
            _ => *self,
        }
    }
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if !(value >= lo && value <= hi) {
        return Err(Error::ParameterRange { name, value, range });
    }
    Ok(())
}

/// Singlet with the `|HV⟩↔|VH⟩` coherence scaled by `v`:
/// `ρ = ½(|HV⟩⟨HV| + |VH⟩⟨VH|) − (v/2)(|HV⟩⟨VH| + |VH⟩⟨HV|)`.
pub fn dephase_singlet(v: f64) -> Result<DensityMatrix> {
    check_range("visibility", v, 0.0, 1.0, "[0, 1]")?;
    let mut entries = vec![C64::new(0.0, 0.0); 16];
    let (hv, vh) = (1, 2);
    entries[hv * 4 + hv] = C64::new(0.5, 0.0);
    entries[vh * 4 + vh] = C64::new(0.5, 0.0);
    entries[hv * 4 + vh] = C64::new(-v / 2.0, 0.0);
    entries[vh * 4 + hv] = C64::new(-v / 2.0, 0.0);
    Ok(DensityMatrix::new(4, entries).expect("dephased singlet is a valid state"))
}

/// Isotropic (Werner) mixture `v·|ψ⁻⟩⟨ψ⁻| + (1−v)·I/4`.
pub fn werner_singlet(v: f64) -> Result<DensityMatrix> {
    check_range("visibility", v, 0.0, 1.0, "[0, 1]")?;
    Ok(DensityMatrix::mixture(&[
        (v, &DensityMatrix::singlet()),
        (1.0 - v, &DensityMatrix::maximally_mixed(4)),
    ]))
}

/// Conjugates the chosen arm by `exp(−i χ σ_z/2)`; trace and purity are
/// preserved.
pub fn apply_birefringence(rho4: &DensityMatrix, chi_rad: f64, arm: Arm) -> DensityMatrix {
    rho4.apply_on_arm(&z_rotation(chi_rad), arm)
}

/// Polarization-dependent loss `K = diag(1, √(1−ε))` on the chosen arm,
/// renormalized by the survival probability.
pub fn apply_pdl(rho4: &DensityMatrix, epsilon: f64, arm: Arm) -> Result<DensityMatrix> {
    check_range("pdl_fraction", epsilon, 0.0, 1.0 - f64::EPSILON, "[0, 1)")?;
    let k = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new((1.0 - epsilon).sqrt(), 0.0)],
    ];
    let (_survival, out) = rho4.apply_kraus_on_arm(&k, arm);
    Ok(out)
}

/// Composes the full source: base state, purity reduction, birefringence on
/// each arm, then PDL with renormalization.
pub fn make_state(model: &SourceModel) -> Result<DensityMatrix> {
    model.validate()?;
    let model = model.effective();
    let mut rho = match model.mode {
        SourceMode::Ideal => DensityMatrix::singlet(),
        SourceMode::Dephased => dephase_singlet(model.visibility)?,
        SourceMode::Werner => werner_singlet(model.visibility)?,
    };
    if model.chi_signal_rad != 0.0 {
        rho = apply_birefringence(&rho, model.chi_signal_rad, Arm::Signal);
    }
    if model.chi_idler_rad != 0.0 {
        rho = apply_birefringence(&rho, model.chi_idler_rad, Arm::Idler);
    }
    if model.pdl_fraction != 0.0 {
        rho = apply_pdl(&rho, model.pdl_fraction, model.pdl_arm)?;
    }
    Ok(rho)
}
