//! Simulator properties on grids small enough for a quick test run. The
//! full-size (512²) versions live in the CLI acceptance suite.

use num_complex::Complex64;
use photonfluid::fluidsim::stepper::default_dt;
use photonfluid::fluidsim::{
    detect_vortices, measure_dispersion, run_obstacle_flow, run_ripple, DispersionProbe,
    LatticeField, ObstacleFlow, RippleSource, SplitStepper,
};

fn wavy(n: usize, dx: f64) -> LatticeField {
    let l = n as f64 * dx;
    let g = 2.0 * std::f64::consts::PI / l;
    LatticeField::from_fn(n, n, dx, |x, y| {
        let amp = 1.0 + 0.05 * (g * x).cos() * (2.0 * g * y).sin();
        Complex64::from_polar(amp, 0.1 * (3.0 * g * x + g * y).sin())
    })
    .unwrap()
}

#[test]
fn norm_is_conserved() {
    let mut f = wavy(64, 0.5);
    let n0 = f.norm();
    let mut s = SplitStepper::new(&f, default_dt(0.5)).unwrap();
    s.evolve(&mut f, 2000).unwrap();
    assert!(((f.norm() - n0) / n0).abs() < 1e-10);
}

#[test]
fn energy_drift_is_small() {
    let mut f = wavy(64, 0.5);
    let mut s = SplitStepper::new(&f, default_dt(0.5)).unwrap();
    let e0 = s.energy(&f);
    s.evolve(&mut f, 1000).unwrap();
    let e1 = s.energy(&f);
    assert!(((e1 - e0) / e0).abs() < 1e-6, "{e0} -> {e1}");
}

#[test]
fn strang_is_second_order() {
    let run = |dt: f64| {
        let mut f = wavy(32, 0.5);
        let mut s = SplitStepper::new(&f, dt).unwrap();
        s.evolve(&mut f, (1.0 / dt).round() as usize).unwrap();
        f
    };
    let (a, b, c) = (run(0.05), run(0.025), run(0.0125));
    let diff = |p: &LatticeField, q: &LatticeField| -> f64 {
        p.data.iter().zip(&q.data).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    };
    let ratio = diff(&a, &b) / diff(&b, &c);
    assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
}

#[test]
fn dispersion_in_both_regimes() {
    let mut probe = DispersionProbe::new(vec![0.5, 5.0]);
    probe.nx = 128;
    for s in measure_dispersion(&probe).unwrap() {
        assert!(s.rel_error < 1e-2, "{s:?}");
    }
}

#[test]
fn ripple_wavelength_scales_inversely_with_frequency() {
    let run = |omega: f64| {
        let mut s = RippleSource::new(omega);
        s.nx = 256;
        s.sponge_width = 40.0;
        run_ripple(&s).unwrap()
    };
    let a = run(0.3);
    let b = run(0.15);
    assert!(a.rel_error < 0.05 && b.rel_error < 0.05);
    assert!((b.wavelength / a.wavelength - 2.0).abs() < 0.1);
}

#[test]
fn slow_flow_past_small_disk_stays_vortex_free() {
    let mut f = ObstacleFlow::new(0.2);
    f.nx = 128;
    f.ny = 128;
    f.obstacle_pos = (-8.0, 0.0);
    f.obstacle_radius = 3.0;
    f.sponge_width = 12.0;
    f.duration = 40.0;
    f.ramp = 20.0;
    let run = run_obstacle_flow(&f).unwrap();
    assert!(!run.shed(), "{:?}", run.scans.iter().find(|s| s.count > 0));
    assert!(detect_vortices(run.final_field.as_ref().unwrap())
        .iter()
        .all(|v| v.charge.abs() == 1));
}
