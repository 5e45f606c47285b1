//! Kerr-medium physics: the two-level n₂, the n₂ → V(0) bridge, the
//! field ↔ photon-number map and the timescales that decide whether the
//! cavity light behaves as a fluid.
//!
//! Sign convention: `detuning` is Δ = ω_atom − ω_laser, so red detuning is
//! positive and gives n₂ > 0. A positive n₂ here is the magnitude of the
//! self-defocusing response and maps to a repulsive V(0) > 0. Blue detuning
//! flips the sign and is rejected as an attractive medium.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cavity::{effective_mass, CavityGeometry};
use crate::units::{intensity_to_energy_density, UnitsError, CGS};

/// Default lower bound for "N₀ ≫ 1".
pub const DEFAULT_MACROSCOPIC_THRESHOLD: f64 = 1e6;
/// Default lower bound on collisions per ring-down for the fluid regime.
pub const DEFAULT_FLUID_RATIO_THRESHOLD: f64 = 100.0;

/// Reference operating point used to fix the quantization area when none is
/// configured: N₀ = 8×10¹¹ photons at 40 W/cm² intracavity intensity.
pub const REFERENCE_CONDENSATE_NUMBER: f64 = 8e11;
pub const REFERENCE_INTENSITY: f64 = 40.0;

#[derive(Debug, Error, PartialEq)]
pub enum MediumError {
    #[error("detuning must be nonzero when n2 is not supplied directly")]
    ZeroDetuning,
    #[error("atomic density must be non-negative, got {0}")]
    NegativeDensity(f64),
    #[error("quantization volume must be positive, got {0}")]
    NonPositiveVolume(f64),
    #[error("quantization area must be positive, got {0}")]
    NonPositiveArea(f64),
    #[error("attractive medium (V(0) = {0:e} erg): no stable fluid")]
    AttractiveMedium(f64),
    #[error("negative condensate number {0}")]
    NegativeCondensate(f64),
    #[error(transparent)]
    Units(#[from] UnitsError),
}

/// Atomic vapor parameters, or a directly supplied Kerr coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumSpec {
    /// cm⁻³
    pub atom_density: f64,
    /// Transition dipole matrix element (esu·cm).
    pub dipole: f64,
    /// Δ = ω_atom − ω_laser (rad/s); positive is red detuning.
    pub detuning: f64,
    /// Overrides the two-level formula when set (cm³/erg).
    pub n2_direct: Option<f64>,
}

impl MediumSpec {
    pub fn validate(&self) -> Result<(), MediumError> {
        if self.atom_density < 0.0 {
            return Err(MediumError::NegativeDensity(self.atom_density));
        }
        if self.n2_direct.is_none() && self.detuning == 0.0 {
            return Err(MediumError::ZeroDetuning);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KerrSource {
    Direct,
    TwoLevelFormula,
}

/// n₂ together with where it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KerrCoefficient {
    /// cm³/erg
    pub value: f64,
    pub source: KerrSource,
}

/// n₂ = πN_atom μ⁴/(ħ³Δ³), unless the spec carries a direct value.
pub fn grischkowsky_n2(spec: &MediumSpec) -> Result<KerrCoefficient, MediumError> {
    spec.validate()?;
    if let Some(v) = spec.n2_direct {
        return Ok(KerrCoefficient {
            value: v,
            source: KerrSource::Direct,
        });
    }
    let value = PI * spec.atom_density * spec.dipole.powi(4)
        / (CGS.hbar.powi(3) * spec.detuning.powi(3));
    Ok(KerrCoefficient {
        value,
        source: KerrSource::TwoLevelFormula,
    })
}

/// Dipole element that would make the two-level formula return `n2`.
pub fn implied_dipole(n2: f64, atom_density: f64, detuning: f64) -> f64 {
    (n2 * CGS.hbar.powi(3) * detuning.powi(3) / (PI * atom_density)).powf(0.25)
}

/// V(0) = 8π(ħω)²n₂/V_cav.
pub fn interaction_strength(n2: f64, omega: f64, v_cav: f64) -> Result<f64, MediumError> {
    if !(v_cav > 0.0) {
        return Err(MediumError::NonPositiveVolume(v_cav));
    }
    let e = CGS.hbar * omega;
    let v0 = 8.0 * PI * e * e * n2 / v_cav;
    if v0 < 0.0 {
        return Err(MediumError::AttractiveMedium(v0));
    }
    Ok(v0)
}

/// N₀ = E₀²V_cav/(8πħω).
pub fn condensate_number(e0_sq: f64, omega: f64, v_cav: f64) -> f64 {
    e0_sq * v_cav / (8.0 * PI * CGS.hbar * omega)
}

/// Δn = n₂E₀².
pub fn index_shift(n2: f64, e0_sq: f64) -> f64 {
    n2 * e0_sq
}

/// v_s = c√Δn, valid when m = ħω/c².
pub fn sound_speed_from_index_shift(delta_n: f64) -> f64 {
    CGS.c * delta_n.sqrt()
}

/// The microscopic parameter bundle consumed by the Bogoliubov engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CondensateParams {
    /// Effective mass (g).
    pub m: f64,
    /// Condensate photon number.
    pub n0: f64,
    /// Pair interaction V(0) (erg).
    pub v0: f64,
    /// μ = N₀V(0) (erg).
    pub mu_chem: f64,
    /// √(μ/m) (cm/s).
    pub v_s: f64,
    /// Quantization volume (cm³).
    pub v_cav: f64,
}

impl CondensateParams {
    pub fn new(m: f64, n0: f64, v0: f64, v_cav: f64) -> Result<Self, MediumError> {
        if v0 < 0.0 {
            return Err(MediumError::AttractiveMedium(v0));
        }
        if n0 < 0.0 {
            return Err(MediumError::NegativeCondensate(n0));
        }
        if !(v_cav > 0.0) {
            return Err(MediumError::NonPositiveVolume(v_cav));
        }
        let mu_chem = n0 * v0;
        Ok(Self {
            m,
            n0,
            v0,
            mu_chem,
            v_s: (mu_chem / m).sqrt(),
            v_cav,
        })
    }

    /// Same (m, V_cav), different N₀ and V(0).
    pub fn with_interaction(&self, n0: f64, v0: f64) -> Result<Self, MediumError> {
        Self::new(self.m, n0, v0, self.v_cav)
    }

    /// N₀ above `threshold` and V(0) > 0.
    pub fn is_macroscopic(&self, threshold: f64) -> bool {
        self.n0 >= threshold && self.v0 > 0.0
    }
}

pub fn chemical_potential(params: &CondensateParams) -> f64 {
    params.n0 * params.v0
}

pub fn sound_speed(params: &CondensateParams) -> f64 {
    (chemical_potential(params) / params.m).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluidTimescales {
    /// s
    pub tau_cav: f64,
    /// s
    pub tau_coll: f64,
    pub collisions_per_ringdown: f64,
    pub fluid_regime: bool,
}

/// τ_cav = 2FL/c, τ_coll = 1/(12ωn₂E₀²).
pub fn timescales(geom: &CavityGeometry, omega: f64, n2: f64, e0_sq: f64) -> FluidTimescales {
    timescales_with_threshold(geom, omega, n2, e0_sq, DEFAULT_FLUID_RATIO_THRESHOLD)
}

pub fn timescales_with_threshold(
    geom: &CavityGeometry,
    omega: f64,
    n2: f64,
    e0_sq: f64,
    ratio_threshold: f64,
) -> FluidTimescales {
    let tau_cav = geom.ring_down_time();
    let rate = 12.0 * omega * n2.abs() * e0_sq;
    let tau_coll = if rate > 0.0 { 1.0 / rate } else { f64::INFINITY };
    let ratio = tau_cav / tau_coll;
    FluidTimescales {
        tau_cav,
        tau_coll,
        collisions_per_ringdown: ratio,
        fluid_regime: ratio >= ratio_threshold,
    }
}

/// Quantization area that yields [`REFERENCE_CONDENSATE_NUMBER`] at
/// [`REFERENCE_INTENSITY`] for this cavity.
pub fn reference_quantization_area(geom: &CavityGeometry) -> f64 {
    let e0_sq = intensity_to_energy_density(REFERENCE_INTENSITY).expect("positive constant");
    let omega = geom.resonant_omega();
    REFERENCE_CONDENSATE_NUMBER * 8.0 * PI * CGS.hbar * omega / (e0_sq * geom.length)
}

/// Full chain from drive intensity to condensate parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrivenFluid {
    /// Cavity-mode angular frequency (rad/s).
    pub omega: f64,
    /// erg/cm³
    pub e0_sq: f64,
    pub n2: KerrCoefficient,
    pub index_shift: f64,
    /// cm²
    pub area: f64,
    pub params: CondensateParams,
    pub timescales: FluidTimescales,
}

impl DrivenFluid {
    /// Builds the fluid for a given intracavity intensity (W/cm²) and
    /// transverse quantization area (cm²). The optical frequency used
    /// throughout is the cavity mode's nπc/L, so m = ħω/c² holds exactly.
    pub fn from_drive(
        geom: &CavityGeometry,
        medium: &MediumSpec,
        intensity: f64,
        area: f64,
    ) -> Result<Self, MediumError> {
        if !(area > 0.0) {
            return Err(MediumError::NonPositiveArea(area));
        }
        let n2 = grischkowsky_n2(medium)?;
        let omega = geom.resonant_omega();
        let e0_sq = intensity_to_energy_density(intensity)?;
        let v_cav = geom.length * area;
        let v0 = interaction_strength(n2.value, omega, v_cav)?;
        let n0 = condensate_number(e0_sq, omega, v_cav);
        let params = CondensateParams::new(effective_mass(geom), n0, v0, v_cav)?;
        Ok(Self {
            omega,
            e0_sq,
            n2,
            index_shift: index_shift(n2.value, e0_sq),
            area,
            params,
            timescales: timescales(geom, omega, n2.value, e0_sq),
        })
    }

    /// Fluid-regime flag: enough collisions per ring-down and a macroscopic
    /// condensate.
    pub fn is_fluid(&self, macroscopic_threshold: f64) -> bool {
        self.timescales.fluid_regime && self.params.is_macroscopic(macroscopic_threshold)
    }
}
