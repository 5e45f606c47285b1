//! Physical constants and the handful of unit conversions the toolkit needs.
//!
//! Everything inside the crate is Gaussian-CGS. SI or "practical" units only
//! show up at the conversion functions below.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Joules to ergs.
pub const ERG_PER_JOULE: f64 = 1.0e7;

#[derive(Debug, Error, PartialEq)]
pub enum UnitsError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: Dimension, found: Dimension },
    #[error("intensity must be non-negative, got {0}")]
    NegativeIntensity(f64),
    #[error("value must be finite, got {0}")]
    NonFinite(f64),
}

/// Speed of light and reduced Planck constant in CGS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// cm/s
    pub c: f64,
    /// erg·s
    pub hbar: f64,
}

/// CODATA values in Gaussian-CGS.
pub const CGS: PhysicalConstants = PhysicalConstants {
    c: 2.997_924_58e10,
    hbar: 1.054_571_817e-27,
};

/// Dimension tag carried by [`Quantity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dimension {
    Dimensionless,
    Length,
    Time,
    Mass,
    Momentum,
    Velocity,
    Energy,
    /// erg/cm³, also the Gaussian E₀².
    EnergyDensity,
    /// W/cm²
    Intensity,
    /// cm³/erg
    KerrEsu,
    /// cm²/W
    KerrPractical,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Dimensionless => "dimensionless",
            Dimension::Length => "length [cm]",
            Dimension::Time => "time [s]",
            Dimension::Mass => "mass [g]",
            Dimension::Momentum => "momentum [g cm/s]",
            Dimension::Velocity => "velocity [cm/s]",
            Dimension::Energy => "energy [erg]",
            Dimension::EnergyDensity => "energy density [erg/cm^3]",
            Dimension::Intensity => "intensity [W/cm^2]",
            Dimension::KerrEsu => "n2 [cm^3/erg]",
            Dimension::KerrPractical => "n2 [cm^2/W]",
        };
        f.write_str(s)
    }
}

/// A scalar tagged with its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub dimension: Dimension,
}

impl Quantity {
    pub fn new(value: f64, dimension: Dimension) -> Self {
        Self { value, dimension }
    }

    /// Returns the raw value if the tag matches `dim`.
    pub fn value_in(&self, dim: Dimension) -> Result<f64, UnitsError> {
        if self.dimension == dim {
            Ok(self.value)
        } else {
            Err(UnitsError::DimensionMismatch {
                expected: dim,
                found: self.dimension,
            })
        }
    }

    pub fn checked_add(self, other: Quantity) -> Result<Quantity, UnitsError> {
        let v = other.value_in(self.dimension)?;
        Ok(Quantity::new(self.value + v, self.dimension))
    }

    pub fn checked_sub(self, other: Quantity) -> Result<Quantity, UnitsError> {
        let v = other.value_in(self.dimension)?;
        Ok(Quantity::new(self.value - v, self.dimension))
    }

    pub fn scale(self, factor: f64) -> Quantity {
        Quantity::new(self.value * factor, self.dimension)
    }
}

/// Factor taking an esu Kerr coefficient (response to E₀²) to a response to
/// intensity in W/cm², using I = cE₀²/8π and 1 J = 10⁷ erg.
fn n2_esu_to_practical_factor() -> f64 {
    8.0 * PI * ERG_PER_JOULE / CGS.c
}

/// cm³/erg → cm²/W.
pub fn convert_n2_esu_to_practical(n2_esu: f64) -> f64 {
    n2_esu * n2_esu_to_practical_factor()
}

/// cm²/W → cm³/erg.
pub fn convert_n2_practical_to_esu(n2_practical: f64) -> f64 {
    n2_practical / n2_esu_to_practical_factor()
}

/// Tagged variant of [`convert_n2_esu_to_practical`].
pub fn n2_to_practical(n2: Quantity) -> Result<Quantity, UnitsError> {
    let v = n2.value_in(Dimension::KerrEsu)?;
    if !v.is_finite() {
        return Err(UnitsError::NonFinite(v));
    }
    Ok(Quantity::new(
        convert_n2_esu_to_practical(v),
        Dimension::KerrPractical,
    ))
}

/// Tagged variant of [`convert_n2_practical_to_esu`].
pub fn n2_to_esu(n2: Quantity) -> Result<Quantity, UnitsError> {
    let v = n2.value_in(Dimension::KerrPractical)?;
    if !v.is_finite() {
        return Err(UnitsError::NonFinite(v));
    }
    Ok(Quantity::new(convert_n2_practical_to_esu(v), Dimension::KerrEsu))
}

/// Intensity in W/cm² to the Gaussian field-squared E₀² in erg/cm³,
/// traveling-wave convention I = cE₀²/8π.
pub fn intensity_to_energy_density(intensity: f64) -> Result<f64, UnitsError> {
    if !intensity.is_finite() {
        return Err(UnitsError::NonFinite(intensity));
    }
    if intensity < 0.0 {
        return Err(UnitsError::NegativeIntensity(intensity));
    }
    Ok(8.0 * PI * intensity * ERG_PER_JOULE / CGS.c)
}

/// Inverse of [`intensity_to_energy_density`].
pub fn energy_density_to_intensity(e0_sq: f64) -> f64 {
    e0_sq * CGS.c / (8.0 * PI * ERG_PER_JOULE)
}

pub fn intensity_quantity_to_energy_density(i: Quantity) -> Result<Quantity, UnitsError> {
    let v = i.value_in(Dimension::Intensity)?;
    Ok(Quantity::new(
        intensity_to_energy_density(v)?,
        Dimension::EnergyDensity,
    ))
}
