//! Flow past a repulsive disk, vortex shedding and the critical velocity.
//!
//! The simulation runs in the obstacle frame. The fluid starts as the
//! uniform flow ψ = e^{ik_f x}, where k_f = flow speed in units of v_s
//! rounded to a multiple of 2π/L_x so the phase winds consistently around
//! the periodic box. The disk U₀·sigmoid((R − r)/w) is switched on over a
//! smooth ramp, and the edge sponge holds the far field at the uniform flow.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lattice::LatticeField;
use super::stepper::{default_dt, periodic_delta, Potential, Sponge, SplitStepper};
use super::vortex::{detect_vortices_masked, VortexRecord, DEFAULT_DENSITY_THRESHOLD};
use super::SimError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObstacleFlow {
    /// Requested flow speed in units of v_s.
    pub flow_speed: f64,
    pub obstacle_radius: f64,
    /// U₀ in units of μ.
    pub obstacle_height: f64,
    /// Obstacle center; the default sits upstream of the box center to
    /// leave room for the wake.
    pub obstacle_pos: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    /// `None` means dx²/10.
    pub dt: Option<f64>,
    pub duration: f64,
    pub ramp: f64,
    pub sponge_width: f64,
    pub sponge_rate: f64,
    /// Steps between vortex scans and drag samples.
    pub snapshot_stride: usize,
    /// Amplitude of the symmetry-breaking noise added to the initial state.
    pub noise: f64,
    /// Set from the run configuration's single seed.
    #[serde(skip)]
    pub seed: u64,
    /// Stop at the first scan that finds a vortex.
    pub stop_on_vortex: bool,
}

impl Default for ObstacleFlow {
    fn default() -> Self {
        Self::new(0.2)
    }
}

impl ObstacleFlow {
    pub fn new(flow_speed: f64) -> Self {
        Self {
            flow_speed,
            obstacle_radius: 5.0,
            obstacle_height: 10.0,
            obstacle_pos: (-64.0, 0.0),
            nx: 512,
            ny: 512,
            dx: 0.5,
            dt: Some(0.05),
            duration: 150.0,
            ramp: 40.0,
            sponge_width: 24.0,
            sponge_rate: 1.0,
            snapshot_stride: 40,
            noise: 1e-3,
            seed: 0,
            stop_on_vortex: false,
        }
    }

    /// Winding number j of the imposed flow, k_f = 2πj/L_x.
    pub fn winding(&self) -> i64 {
        let lx = self.nx as f64 * self.dx;
        (self.flow_speed * lx / (2.0 * PI)).round() as i64
    }

    /// Flow speed actually simulated (units of v_s).
    pub fn effective_speed(&self) -> f64 {
        2.0 * PI * self.winding() as f64 / (self.nx as f64 * self.dx)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.flow_speed >= 0.0 && self.flow_speed.is_finite()) {
            return Err(SimError::InvalidScenario(format!(
                "flow speed must be non-negative, got {}",
                self.flow_speed
            )));
        }
        if self.obstacle_radius < 4.0 * self.dx {
            return Err(SimError::InvalidScenario(format!(
                "obstacle radius {} is below 4·dx = {}",
                self.obstacle_radius,
                4.0 * self.dx
            )));
        }
        if !(self.obstacle_height > 0.0) {
            return Err(SimError::InvalidScenario("obstacle height must be positive".into()));
        }
        if self.snapshot_stride == 0 || !(self.duration > 0.0) {
            return Err(SimError::InvalidScenario(
                "duration and snapshot stride must be positive".into(),
            ));
        }
        let (hx, hy) = (0.5 * self.nx as f64 * self.dx, 0.5 * self.ny as f64 * self.dx);
        let (x0, y0) = self.obstacle_pos;
        let clearance = (hx - x0.abs()).min(hy - y0.abs()) - self.sponge_width;
        // the disk plus a couple of radii of healthy fluid before the sponge
        let needed = 3.0 * self.obstacle_radius;
        if clearance < needed {
            return Err(SimError::ObstacleNearSponge(format!(
                "clearance {clearance:.2} < {needed:.2}"
            )));
        }
        Ok(())
    }
}

/// −∫ρ∇U: the force the obstacle exerts on the fluid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DragSample {
    pub time: f64,
    pub fx: f64,
    pub fy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSummary {
    pub time: f64,
    pub count: usize,
    pub net_charge: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstacleRun {
    pub flow_speed: f64,
    pub vortices: Vec<VortexRecord>,
    pub scans: Vec<ScanSummary>,
    pub drag: Vec<DragSample>,
    #[serde(skip)]
    pub final_field: Option<LatticeField>,
}

impl ObstacleRun {
    pub fn shed(&self) -> bool {
        !self.vortices.is_empty()
    }

    /// Largest number of vortex–antivortex pairs seen in a single scan
    /// with zero net charge.
    pub fn max_neutral_pairs(&self) -> usize {
        self.scans
            .iter()
            .filter(|s| s.net_charge == 0)
            .map(|s| s.count / 2)
            .max()
            .unwrap_or(0)
    }

    pub fn all_unit_charges(&self) -> bool {
        self.vortices.iter().all(|v| v.charge.abs() == 1)
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

pub fn run_obstacle_flow(flow: &ObstacleFlow) -> Result<ObstacleRun, SimError> {
    flow.validate()?;
    let (nx, ny, dx) = (flow.nx, flow.ny, flow.dx);
    let k = flow.effective_speed();
    let mut rng = ChaCha8Rng::seed_from_u64(flow.seed);
    let noise = flow.noise;
    let mut field = LatticeField::from_fn(nx, ny, dx, |x, _| {
        let eta = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        Complex64::cis(k * x) * (1.0 + noise * eta)
    })?;

    let (x0, y0) = flow.obstacle_pos;
    let (lx, ly) = (field.extent_x(), field.extent_y());
    let r0 = flow.obstacle_radius;
    let w = 2.0 * dx;
    let u0 = flow.obstacle_height;
    let mut values = Vec::with_capacity(field.len());
    let mut grad = Vec::with_capacity(field.len());
    let mut inside = Vec::with_capacity(field.len());
    for iy in 0..ny {
        let ddy = periodic_delta(field.y(iy) - y0, ly);
        for ix in 0..nx {
            let ddx = periodic_delta(field.x(ix) - x0, lx);
            let r = (ddx * ddx + ddy * ddy).sqrt();
            let s = sigmoid((r0 - r) / w);
            values.push(u0 * s);
            // dU/dr = −U₀ s(1 − s)/w
            let dudr = -u0 * s * (1.0 - s) / w;
            let (cx, cy) = if r > 0.0 { (ddx / r, ddy / r) } else { (0.0, 0.0) };
            grad.push((dudr * cx, dudr * cy));
            inside.push(r < r0);
        }
    }
    let potential = Potential {
        values,
        ramp: flow.ramp,
    };
    let sponge = Sponge::edges(&field, flow.sponge_width, flow.sponge_rate, k);
    let keep: Vec<bool> = (0..field.len())
        .map(|i| !inside[i] && !sponge.is_active(i))
        .collect();
    let dt = flow.dt.unwrap_or_else(|| default_dt(dx));
    let mut stepper = SplitStepper::new(&field, dt)?
        .with_potential(potential)
        .with_sponge(sponge);

    let total_steps = (flow.duration / dt).ceil() as usize;
    let mut run = ObstacleRun {
        flow_speed: k,
        vortices: Vec::new(),
        scans: Vec::new(),
        drag: Vec::new(),
        final_field: None,
    };
    let area = dx * dx;
    let mut done = 0;
    while done < total_steps {
        let n = flow.snapshot_stride.min(total_steps - done);
        stepper.evolve(&mut field, n)?;
        done += n;

        let scale = stepper.potential.as_ref().map_or(0.0, |p| p.scale_at(field.time));
        let (mut fx, mut fy) = (0.0, 0.0);
        for (z, g) in field.data.iter().zip(&grad) {
            let rho = z.norm_sqr();
            fx -= rho * g.0;
            fy -= rho * g.1;
        }
        run.drag.push(DragSample {
            time: field.time,
            fx: fx * area * scale,
            fy: fy * area * scale,
        });

        let found = detect_vortices_masked(&field, DEFAULT_DENSITY_THRESHOLD, |ix, iy| {
            keep[iy * nx + ix]
        });
        run.scans.push(ScanSummary {
            time: field.time,
            count: found.len(),
            net_charge: found.iter().map(|v| v.charge).sum(),
        });
        let any = !found.is_empty();
        run.vortices.extend(found);
        if any && flow.stop_on_vortex {
            break;
        }
    }
    run.final_field = Some(field);
    Ok(run)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    /// (simulated flow speed, shed) for every run, in execution order.
    pub runs: Vec<(f64, bool)>,
    /// Highest speed seen without shedding.
    pub below: f64,
    /// Lowest speed seen with shedding.
    pub above: f64,
    /// Midpoint of the final bracket.
    pub critical_velocity: f64,
}

/// Bisection on the flow winding number between `low` and `high` (units of
/// v_s). The endpoints must bracket the onset: no shedding at `low`,
/// shedding at `high`. `max_iter` bounds the number of interior runs.
pub fn critical_velocity_sweep(
    template: &ObstacleFlow,
    low: f64,
    high: f64,
    max_iter: usize,
) -> Result<SweepResult, SimError> {
    if !(0.0 <= low && low < high) {
        return Err(SimError::InvalidScenario(format!(
            "sweep bounds must satisfy 0 <= low < high, got ({low}, {high})"
        )));
    }
    let at = |j: i64| -> ObstacleFlow {
        let mut f = template.clone();
        f.flow_speed = 2.0 * PI * j as f64 / (f.nx as f64 * f.dx);
        f.stop_on_vortex = true;
        f
    };
    let mut lo = ObstacleFlow { flow_speed: low, ..template.clone() }.winding();
    let mut hi = ObstacleFlow { flow_speed: high, ..template.clone() }.winding();
    let mut runs = Vec::new();
    let probe = |j: i64, runs: &mut Vec<(f64, bool)>| -> Result<bool, SimError> {
        let f = at(j);
        let shed = run_obstacle_flow(&f)?.shed();
        log::info!("sweep: v = {:.4} shed = {shed}", f.effective_speed());
        runs.push((f.effective_speed(), shed));
        Ok(shed)
    };
    if probe(lo, &mut runs)? {
        return Err(SimError::InvalidScenario(format!(
            "lower sweep bound {low} already sheds vortices"
        )));
    }
    if !probe(hi, &mut runs)? {
        return Err(SimError::InvalidScenario(format!(
            "upper sweep bound {high} does not shed vortices"
        )));
    }
    let mut iter = 0;
    while hi - lo > 1 && iter < max_iter {
        let mid = (lo + hi) / 2;
        if probe(mid, &mut runs)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iter += 1;
    }
    let below = at(lo).effective_speed();
    let above = at(hi).effective_speed();
    Ok(SweepResult {
        runs,
        below,
        above,
        critical_velocity: 0.5 * (below + above),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(speed: f64) -> ObstacleFlow {
        let mut f = ObstacleFlow::new(speed);
        f.nx = 128;
        f.ny = 128;
        f.obstacle_pos = (-12.0, 0.0);
        f.obstacle_radius = 3.0;
        f.sponge_width = 10.0;
        f.duration = 2.0;
        f.ramp = 1.0;
        f
    }

    #[test]
    fn winding_is_commensurate() {
        let f = small(0.3);
        let lx = f.nx as f64 * f.dx;
        let j = f.winding();
        assert!((f.effective_speed() * lx / (2.0 * PI) - j as f64).abs() < 1e-12);
        assert!((f.effective_speed() - 0.3).abs() <= PI / lx);
    }

    #[test]
    fn validation_errors() {
        let mut f = small(0.3);
        f.obstacle_radius = 1.0;
        assert!(matches!(f.validate(), Err(SimError::InvalidScenario(_))));
        let mut f = small(0.3);
        f.obstacle_pos = (-28.0, 0.0);
        assert!(matches!(f.validate(), Err(SimError::ObstacleNearSponge(_))));
    }

    #[test]
    fn no_obstacle_force_without_fluid_asymmetry() {
        // noise-free, stationary fluid: the drag is symmetric and vanishes
        let mut f = small(0.0);
        f.noise = 0.0;
        f.obstacle_pos = (0.0, 0.0);
        let run = run_obstacle_flow(&f).unwrap();
        assert!(!run.shed());
        for d in &run.drag {
            assert!(d.fx.abs() < 1e-8 && d.fy.abs() < 1e-8, "{d:?}");
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = run_obstacle_flow(&small(0.3)).unwrap();
        let b = run_obstacle_flow(&small(0.3)).unwrap();
        assert_eq!(a.drag, b.drag);
        assert_eq!(a.final_field, b.final_field);
    }
}
