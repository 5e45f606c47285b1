//! Fabry-Perot geometry, the trapped photon's effective mass and its free
//! transverse dispersion.

use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::CGS;

/// Transverse momentum above this fraction of the longitudinal momentum is
/// flagged as leaving the paraxial regime.
pub const PARAXIAL_WARN_THRESHOLD: f64 = 0.1;

#[derive(Debug, Error, PartialEq)]
pub enum CavityError {
    #[error("mirror spacing must be positive, got {0} cm")]
    NonPositiveLength(f64),
    #[error("reflectivity must lie in (0, 1), got {0}")]
    ReflectivityOutOfRange(f64),
    #[error("wavelength must be positive, got {0} cm")]
    NonPositiveWavelength(f64),
    #[error("longitudinal mode index must be at least 1")]
    ZeroModeIndex,
}

/// Mirror spacing, reflectivity, longitudinal mode and drive wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityGeometry {
    /// Mirror spacing L (cm).
    pub length: f64,
    /// Longitudinal mode index n, with k_z = nπ/L.
    pub mode_index: u64,
    /// Mirror intensity reflectivity R.
    pub reflectivity: f64,
    /// Vacuum wavelength of the drive (cm).
    pub wavelength: f64,
}

impl CavityGeometry {
    /// Validates the geometry. When `mode_index` is `None` it is taken as the
    /// nearest integer to 2L/λ.
    pub fn new(
        length: f64,
        reflectivity: f64,
        wavelength: f64,
        mode_index: Option<u64>,
    ) -> Result<Self, CavityError> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(CavityError::NonPositiveLength(length));
        }
        if !(reflectivity > 0.0 && reflectivity < 1.0) {
            return Err(CavityError::ReflectivityOutOfRange(reflectivity));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(CavityError::NonPositiveWavelength(wavelength));
        }
        let mode_index = match mode_index {
            Some(0) => return Err(CavityError::ZeroModeIndex),
            Some(n) => n,
            None => ((2.0 * length / wavelength).round() as u64).max(1),
        };
        let geom = Self {
            length,
            mode_index,
            reflectivity,
            wavelength,
        };
        if !geom.is_resonant() {
            warn!(
                "mode index {} is off the resonance condition 2L/lambda = {:.3}",
                mode_index,
                2.0 * length / wavelength
            );
        }
        Ok(geom)
    }

    /// True when n is within one unit of 2L/λ.
    pub fn is_resonant(&self) -> bool {
        (self.mode_index as f64 - 2.0 * self.length / self.wavelength).abs() <= 1.0
    }

    /// Longitudinal photon momentum ħnπ/L.
    pub fn longitudinal_momentum(&self) -> f64 {
        CGS.hbar * self.mode_index as f64 * PI / self.length
    }

    /// Optical angular frequency 2πc/λ of the drive.
    pub fn drive_omega(&self) -> f64 {
        2.0 * PI * CGS.c / self.wavelength
    }

    /// Angular frequency nπc/L of the cavity mode itself.
    pub fn resonant_omega(&self) -> f64 {
        self.mode_index as f64 * PI * CGS.c / self.length
    }

    pub fn finesse(&self) -> f64 {
        finesse(self.reflectivity).expect("reflectivity validated at construction")
    }

    /// Ring-down time 2FL/c.
    pub fn ring_down_time(&self) -> f64 {
        2.0 * self.finesse() * self.length / CGS.c
    }
}

/// Effective mass, optical frequency and rest energy of the cavity photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeDispersion {
    pub m_eff: f64,
    pub omega: f64,
    pub rest_energy: f64,
}

impl FreeDispersion {
    pub fn from_geometry(geom: &CavityGeometry) -> Self {
        let m_eff = effective_mass(geom);
        Self {
            m_eff,
            omega: geom.drive_omega(),
            rest_energy: m_eff * CGS.c * CGS.c,
        }
    }

    pub fn kinetic_energy(&self, p_perp: f64) -> f64 {
        free_kinetic_energy(p_perp, self.m_eff)
    }
}

/// m = ħnπ/(Lc).
pub fn effective_mass(geom: &CavityGeometry) -> f64 {
    geom.longitudinal_momentum() / CGS.c
}

/// m ≈ ħω/c².
pub fn effective_mass_from_frequency(omega: f64) -> f64 {
    CGS.hbar * omega / (CGS.c * CGS.c)
}

/// ε(p) = p²/2m.
pub fn free_kinetic_energy(p_perp: f64, m: f64) -> f64 {
    p_perp * p_perp / (2.0 * m)
}

/// c√(p² + m²c²) − mc², evaluated without cancellation.
pub fn relativistic_kinetic_energy(p_perp: f64, m: f64) -> f64 {
    let mc = m * CGS.c;
    let p2 = p_perp * p_perp;
    CGS.c * p2 / ((p2 + mc * mc).sqrt() + mc)
}

/// p⊥ / (ħnπ/L).
pub fn paraxiality_ratio(p_perp: f64, geom: &CavityGeometry) -> f64 {
    let ratio = p_perp / geom.longitudinal_momentum();
    if ratio > PARAXIAL_WARN_THRESHOLD {
        warn!("transverse momentum ratio {ratio:.3} exceeds the paraxial threshold");
    }
    ratio
}

/// F = π√R/(1−R).
pub fn finesse(reflectivity: f64) -> Result<f64, CavityError> {
    if !(reflectivity > 0.0 && reflectivity < 1.0) {
        return Err(CavityError::ReflectivityOutOfRange(reflectivity));
    }
    Ok(PI * reflectivity.sqrt() / (1.0 - reflectivity))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn s4() -> CavityGeometry {
        CavityGeometry::new(2.0, 0.997, 780e-7, None).unwrap()
    }

    #[test]
    fn mode_index_from_resonance() {
        let g = s4();
        assert_eq!(g.mode_index, 51282);
        assert!(g.is_resonant());
    }

    #[test]
    fn effective_mass_values() {
        let g = s4();
        let m = effective_mass(&g);
        assert!(rel(m, 2.84e-33) < 5e-3, "m = {m:e}");
        let approx = effective_mass_from_frequency(g.drive_omega());
        assert!(rel(m, approx) < 1e-4);

        let doubled = CavityGeometry::new(4.0, 0.997, 780e-7, Some(g.mode_index)).unwrap();
        assert!(rel(effective_mass(&doubled), m / 2.0) < 1e-14);

        let one = CavityGeometry::new(2.0, 0.997, 780e-7, Some(1)).unwrap();
        let three = CavityGeometry::new(2.0, 0.997, 780e-7, Some(3)).unwrap();
        assert!(rel(effective_mass(&three), 3.0 * effective_mass(&one)) < 1e-14);
    }

    #[test]
    fn kinetic_energy_scaling_and_taylor_bound() {
        let m = effective_mass(&s4());
        assert_eq!(free_kinetic_energy(0.0, m), 0.0);
        let p = 3e-25;
        assert!(rel(free_kinetic_energy(2.0 * p, m), 4.0 * free_kinetic_energy(p, m)) < 1e-14);

        let mc = m * CGS.c;
        for i in 1..=200 {
            let p = 0.1 * mc * i as f64 / 200.0;
            let exact = relativistic_kinetic_energy(p, m);
            let quad = free_kinetic_energy(p, m);
            let x = p / mc;
            assert!(quad >= exact);
            // quartic Taylor remainder, in units of the rest energy
            assert!((quad - exact) / (mc * CGS.c) <= x.powi(4) / 8.0 * (1.0 + 1e-9));
        }
    }

    #[test]
    fn paraxiality() {
        let g = s4();
        assert!(rel(paraxiality_ratio(g.longitudinal_momentum(), &g), 1.0) < 1e-15);
        assert_eq!(paraxiality_ratio(0.0, &g), 0.0);
        // κ_c = 2 m v_s with v_s = 4.24e7 cm/s
        let kc = 2.0 * effective_mass(&g) * 4.24e7;
        assert!(rel(paraxiality_ratio(kc, &g), 2.0 * 4.24e7 / CGS.c) < 1e-4);
        assert!(rel(paraxiality_ratio(kc, &g), 2.8e-3) < 0.02);
    }

    #[test]
    fn finesse_values() {
        assert!(rel(finesse(0.997).unwrap(), 1050.0) < 0.01);
        // π·0.9984988/0.003
        assert!(rel(finesse(0.997).unwrap(), 1045.63) < 1e-4);
        assert!(rel(finesse(0.99).unwrap(), 312.6) < 1e-3);
        assert!(finesse(1e-12).unwrap() < 1e-5);
        assert!(finesse(1.0).is_err());
        assert!(finesse(0.0).is_err());
    }

    #[test]
    fn invalid_geometry() {
        assert_eq!(
            CavityGeometry::new(0.0, 0.9, 1e-4, None),
            Err(CavityError::NonPositiveLength(0.0))
        );
        assert!(CavityGeometry::new(1.0, 1.2, 1e-4, None).is_err());
        assert!(CavityGeometry::new(1.0, 0.9, -1e-4, None).is_err());
        assert_eq!(
            CavityGeometry::new(1.0, 0.9, 1e-4, Some(0)),
            Err(CavityError::ZeroModeIndex)
        );
    }
}
