//! End-to-end chain from cavity and medium to the Bogoliubov spectrum at the
//! rubidium operating point (L = 2 cm, R = 0.997, 780 nm, 40 W/cm²).

use photonfluid::bogoliubov::{
    collective_length, depletion_fraction, dispersion, landau_critical_velocity,
    sound_speed_from_curve, transition_momentum,
};
use photonfluid::cavity::CavityGeometry;
use photonfluid::fluidsim::Scales;
use photonfluid::medium::{reference_quantization_area, DrivenFluid, MediumSpec};
use photonfluid::units::{convert_n2_esu_to_practical, CGS};
use photonfluid::{DispersionCurve, InteractionKernel};

fn fluid() -> (CavityGeometry, DrivenFluid) {
    let geom = CavityGeometry::new(2.0, 0.997, 780e-7, None).unwrap();
    let medium = MediumSpec {
        atom_density: 1e12,
        dipole: 0.0,
        detuning: 2.0 * std::f64::consts::PI * 600e6,
        n2_direct: Some(6e-6),
    };
    let area = reference_quantization_area(&geom);
    let f = DrivenFluid::from_drive(&geom, &medium, 40.0, area).unwrap();
    (geom, f)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn cavity_and_medium_numbers() {
    let (geom, f) = fluid();
    assert!(rel(geom.finesse(), 1050.0) < 0.01);
    assert!(rel(geom.ring_down_time(), 1.4e-7) < 0.05);
    assert!(rel(f.index_shift, 2.0e-6) < 0.10);
    assert!(rel(f.timescales.tau_coll, 1.7e-11) < 0.10);
    assert!(rel(f.timescales.collisions_per_ringdown, 8000.0) < 0.15);
    assert!(rel(f.params.v_s, 4.2e7) < 0.10);
    assert!(rel(convert_n2_esu_to_practical(6e-6), 5e-8) < 0.05);
    assert!(rel(f.params.n0, 8e11) < 1e-9);
    assert!(f.is_fluid(1e6));
}

#[test]
fn sound_speed_identities() {
    let (_, f) = fluid();
    let p = f.params;
    let direct = (p.n0 * p.v0 / p.m).sqrt();
    let optical = CGS.c * f.index_shift.sqrt();
    assert!(rel(direct, optical) < 1e-10);
    assert!(rel(p.v_s, direct) < 1e-12);
}

#[test]
fn spectrum_summary_is_consistent() {
    let (_, f) = fluid();
    let p = f.params;
    let kernel = InteractionKernel::contact(p.v0);
    let kc = transition_momentum(&p, &kernel).unwrap();
    assert!(rel(kc, 2.0 * p.m * p.v_s) < 1e-12);
    // at κ_c the two asymptotes are equal: v_s κ_c = κ_c²/2m
    assert!(rel(p.v_s * kc, kc * kc / (2.0 * p.m)) < 1e-12);
    let lc = collective_length(&p, &kernel).unwrap();
    assert!(rel(lc, 2.0 * std::f64::consts::PI * CGS.hbar / kc) < 1e-12);

    let curve = DispersionCurve::default_for(&p, &kernel).unwrap();
    assert_eq!(curve.modes.len(), 512);
    let vs = sound_speed_from_curve(&curve).unwrap();
    assert!(rel(vs, p.v_s) < 1e-6);
    // for a contact kernel the Landau velocity is the sound speed
    let vc = landau_critical_velocity(&curve).unwrap();
    assert!(rel(vc, p.v_s) < 1e-7, "v_c = {vc}");

    let depletion = depletion_fraction(&p, &kernel, f.area).unwrap();
    assert!(depletion > 0.0 && depletion < 1e-2, "depletion {depletion}");
}

#[test]
fn healing_length_units_map_onto_the_spectrum() {
    let (_, f) = fluid();
    let p = f.params;
    let kernel = InteractionKernel::contact(p.v0);
    let s = Scales::from_params(&p);
    // ω̃ in units of μ/ħ is √(k² + k⁴/4) with k = κξ/ħ
    for &k in &[0.01, 0.5, 2.0, 40.0] {
        let kappa = s.wavenumber_to_momentum(k);
        let w = dispersion(kappa, &p, &kernel).unwrap() / p.mu_chem;
        let expect = photonfluid::fluidsim::bogoliubov_frequency(k);
        assert!(rel(w, expect) < 1e-12, "k = {k}: {w} vs {expect}");
    }
}
