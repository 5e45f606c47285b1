//! Conversion between physical CGS quantities and healing-length units.

use serde::Serialize;

use crate::medium::CondensateParams;
use crate::units::CGS;

/// Physical size of one simulation unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scales {
    /// ξ = ħ/(m v_s) (cm)
    pub length: f64,
    /// ħ/μ (s)
    pub time: f64,
    /// v_s (cm/s)
    pub velocity: f64,
    /// μ (erg)
    pub energy: f64,
}

impl Scales {
    pub fn from_params(params: &CondensateParams) -> Self {
        Self {
            length: CGS.hbar / (params.m * params.v_s),
            time: CGS.hbar / params.mu_chem,
            velocity: params.v_s,
            energy: params.mu_chem,
        }
    }

    /// Collective length λ_c = πξ.
    pub fn collective_length(&self) -> f64 {
        std::f64::consts::PI * self.length
    }

    pub fn length_to_physical(&self, l: f64) -> f64 {
        l * self.length
    }
    pub fn length_to_dimensionless(&self, l: f64) -> f64 {
        l / self.length
    }
    pub fn time_to_physical(&self, t: f64) -> f64 {
        t * self.time
    }
    pub fn time_to_dimensionless(&self, t: f64) -> f64 {
        t / self.time
    }
    pub fn velocity_to_physical(&self, v: f64) -> f64 {
        v * self.velocity
    }
    pub fn velocity_to_dimensionless(&self, v: f64) -> f64 {
        v / self.velocity
    }
    /// Physical transverse momentum → dimensionless wavenumber kξ.
    pub fn momentum_to_wavenumber(&self, p: f64) -> f64 {
        p * self.length / CGS.hbar
    }
    pub fn wavenumber_to_momentum(&self, k: f64) -> f64 {
        k * CGS.hbar / self.length
    }
    /// Angular frequency in units of μ/ħ → photon energy shift ħω (erg).
    pub fn frequency_to_energy(&self, w: f64) -> f64 {
        w * self.energy
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bogoliubov::{collective_length, InteractionKernel};
    use crate::cavity::CavityGeometry;
    use crate::medium::{reference_quantization_area, DrivenFluid, MediumSpec};

    fn params() -> CondensateParams {
        let g = CavityGeometry::new(2.0, 0.997, 780e-7, None).unwrap();
        let medium = MediumSpec {
            atom_density: 1e12,
            dipole: 0.0,
            detuning: 3.77e9,
            n2_direct: Some(6e-6),
        };
        DrivenFluid::from_drive(&g, &medium, 40.0, reference_quantization_area(&g))
            .unwrap()
            .params
    }

    #[test]
    fn healing_length_at_operating_point() {
        let s = Scales::from_params(&params());
        assert!(((s.length - 8.8e-3) / 8.8e-3).abs() < 0.02, "xi = {:e}", s.length);
        // a few hundred microns
        assert!(s.length > 1e-3 && s.length < 1e-1);
    }

    #[test]
    fn collective_length_is_pi_xi() {
        let p = params();
        let s = Scales::from_params(&p);
        let lc = collective_length(&p, &InteractionKernel::contact(p.v0)).unwrap();
        assert!((lc / s.length - std::f64::consts::PI).abs() < 1e-12);
        assert!((s.collective_length() / lc - 1.0).abs() < 1e-12);
    }

    #[test]
    fn round_trips() {
        let s = Scales::from_params(&params());
        for &x in &[1e-3, 0.7, 42.0] {
            assert!((s.length_to_physical(s.length_to_dimensionless(x)) / x - 1.0).abs() < 1e-12);
            assert!((s.time_to_dimensionless(s.time_to_physical(x)) / x - 1.0).abs() < 1e-12);
            assert!((s.velocity_to_physical(s.velocity_to_dimensionless(x)) / x - 1.0).abs() < 1e-12);
            assert!((s.momentum_to_wavenumber(s.wavenumber_to_momentum(x)) / x - 1.0).abs() < 1e-12);
        }
        // κ_c = 2 m v_s ↔ k = 2
        let p = params();
        assert!((s.momentum_to_wavenumber(2.0 * p.m * p.v_s) - 2.0).abs() < 1e-12);
    }
}
