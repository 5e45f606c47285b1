//! Strang split-step Fourier integrator for
//!
//! i∂ψ/∂τ = [−½∇² + |ψ|² + U(r, τ)]ψ + S(r, τ)
//!
//! in healing-length units. The kinetic half-steps are exact in Fourier
//! space; the pointwise stage applies the exact nonlinear + potential phase
//! rotation, then the optional point source S and the edge sponge.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::lattice::LatticeField;
use super::phase::nonlinear_rotation;
use super::spectral::{wavenumbers, Fft2};
use super::SimError;

/// Largest dt accepted for a given dx.
pub fn max_stable_dt(dx: f64) -> f64 {
    (0.1f64).min(dx * dx / PI)
}

/// Default dt = dx²/10.
pub fn default_dt(dx: f64) -> f64 {
    dx * dx / 10.0
}

/// Static potential profile times a smooth turn-on factor.
#[derive(Debug, Clone)]
pub struct Potential {
    pub values: Vec<f64>,
    /// Ramp duration; the profile is fully on for τ ≥ ramp.
    pub ramp: f64,
}

impl Potential {
    pub fn fixed(values: Vec<f64>) -> Self {
        Self { values, ramp: 0.0 }
    }

    pub fn scale_at(&self, t: f64) -> f64 {
        if self.ramp <= 0.0 || t >= self.ramp {
            1.0
        } else if t <= 0.0 {
            0.0
        } else {
            let s = t / self.ramp;
            s * s * (3.0 - 2.0 * s)
        }
    }
}

/// Weak coherent point source A·g(r)·cos(Ωτ)·e^{−iτ} riding on the
/// background's chemical-potential rotation.
#[derive(Debug, Clone)]
pub struct PointDrive {
    pub profile: Vec<f64>,
    pub amplitude: f64,
    pub omega: f64,
}

impl PointDrive {
    /// Gaussian profile of width `sigma` centered at (x0, y0), periodic
    /// distance.
    pub fn gaussian(
        field: &LatticeField,
        x0: f64,
        y0: f64,
        sigma: f64,
        amplitude: f64,
        omega: f64,
    ) -> Self {
        let (lx, ly) = (field.extent_x(), field.extent_y());
        let mut profile = Vec::with_capacity(field.len());
        for iy in 0..field.ny() {
            let dy = periodic_delta(field.y(iy) - y0, ly);
            for ix in 0..field.nx() {
                let dxp = periodic_delta(field.x(ix) - x0, lx);
                profile.push((-(dxp * dxp + dy * dy) / (2.0 * sigma * sigma)).exp());
            }
        }
        Self {
            profile,
            amplitude,
            omega,
        }
    }
}

/// Edge damping toward the uniform-flow background
/// e^{i(k_f x − (1 + k_f²/2)τ)}.
#[derive(Debug, Clone)]
pub struct Sponge {
    pub rate: Vec<f64>,
    pub flow_wavenumber: f64,
    pub width: f64,
}

impl Sponge {
    /// Quadratic damping ramp rising to `max_rate` over `width` from each
    /// edge of the domain.
    pub fn edges(field: &LatticeField, width: f64, max_rate: f64, flow_wavenumber: f64) -> Self {
        let (hx, hy) = (0.5 * field.extent_x(), 0.5 * field.extent_y());
        let ramp = |d: f64| {
            if d >= width {
                0.0
            } else {
                let s = (width - d) / width;
                max_rate * s * s
            }
        };
        let mut rate = Vec::with_capacity(field.len());
        for iy in 0..field.ny() {
            let dy = hy - field.y(iy).abs();
            for ix in 0..field.nx() {
                let dxe = hx - field.x(ix).abs();
                rate.push(ramp(dxe).max(ramp(dy)));
            }
        }
        Self {
            rate,
            flow_wavenumber,
            width,
        }
    }

    /// True when the site lies inside the damping layer.
    pub fn is_active(&self, index: usize) -> bool {
        self.rate[index] > 0.0
    }
}

/// Wraps a displacement into [−L/2, L/2).
pub fn periodic_delta(d: f64, l: f64) -> f64 {
    d - l * (d / l + 0.5).floor()
}

pub struct SplitStepper {
    nx: usize,
    ny: usize,
    dx: f64,
    dt: f64,
    fft: Fft2,
    /// ½k² per Fourier mode.
    kinetic: Vec<f64>,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
    x_coords: Vec<f64>,
    pub potential: Option<Potential>,
    pub drive: Option<PointDrive>,
    sponge: Option<Sponge>,
    work: Vec<Complex64>,
    /// (index, e^{−γ dt}) for every damped site.
    sponge_sites: Vec<(usize, f64)>,
    /// e^{i k_f x} per column.
    flow_wave: Vec<Complex64>,
}

impl SplitStepper {
    pub fn new(field: &LatticeField, dt: f64) -> Result<Self, SimError> {
        let dx = field.dx();
        if !(dt > 0.0) || dt > max_stable_dt(dx) * (1.0 + 1e-12) {
            return Err(SimError::TimeStep {
                dt,
                max: max_stable_dt(dx),
            });
        }
        let (nx, ny) = (field.nx(), field.ny());
        let kx = wavenumbers(nx, dx);
        let ky = wavenumbers(ny, dx);
        // transposed spectral layout, see Fft2::forward_transposed
        let mut kinetic = Vec::with_capacity(nx * ny);
        for &p in &kx {
            for &q in &ky {
                kinetic.push(0.5 * (p * p + q * q));
            }
        }
        // the inverse transform's 1/(nx·ny) is folded into the propagators
        let norm = 1.0 / (nx * ny) as f64;
        let half = kinetic
            .iter()
            .map(|&e| Complex64::from_polar(norm, -e * 0.5 * dt))
            .collect();
        let full = kinetic
            .iter()
            .map(|&e| Complex64::from_polar(norm, -e * dt))
            .collect();
        Ok(Self {
            nx,
            ny,
            dx,
            dt,
            fft: Fft2::new(nx, ny),
            kinetic,
            half,
            full,
            x_coords: (0..nx).map(|i| field.x(i)).collect(),
            potential: None,
            drive: None,
            sponge: None,
            work: vec![Complex64::new(0.0, 0.0); nx * ny],
            sponge_sites: Vec::new(),
            flow_wave: Vec::new(),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn with_potential(mut self, p: Potential) -> Self {
        self.potential = Some(p);
        self
    }

    pub fn with_drive(mut self, d: PointDrive) -> Self {
        self.drive = Some(d);
        self
    }

    pub fn with_sponge(mut self, s: Sponge) -> Self {
        self.sponge_sites = s
            .rate
            .iter()
            .enumerate()
            .filter(|(_, &g)| g > 0.0)
            .map(|(i, &g)| (i, (-g * self.dt).exp()))
            .collect();
        self.flow_wave = self
            .x_coords
            .iter()
            .map(|&x| Complex64::cis(s.flow_wavenumber * x))
            .collect();
        self.sponge = Some(s);
        self
    }

    fn check(&self, field: &LatticeField) {
        debug_assert_eq!(field.nx(), self.nx);
        debug_assert_eq!(field.ny(), self.ny);
        debug_assert_eq!(field.dx(), self.dx);
    }

    /// One Strang step: half kinetic, full pointwise, half kinetic.
    pub fn step(&mut self, field: &mut LatticeField) -> Result<(), SimError> {
        self.evolve(field, 1)
    }

    /// `n` Strang steps with adjacent kinetic half-steps fused.
    ///
    /// Between passes the field is kept x-transformed, so the inverse x
    /// transform, the pointwise stage and the next forward x transform run
    /// on one row at a time; the y transforms and the kinetic factor are
    /// likewise fused per column.
    pub fn evolve(&mut self, field: &mut LatticeField, n: usize) -> Result<(), SimError> {
        self.check(field);
        if n == 0 {
            return Ok(());
        }
        let t0 = field.time;
        let dt = self.dt;
        let Self {
            nx,
            fft,
            half,
            full,
            potential,
            drive,
            sponge,
            sponge_sites,
            flow_wave,
            ..
        } = self;
        let data = &mut field.data;
        let mut theta = Vec::with_capacity(*nx);
        fft.x_rows(data, false, true, |_, _| {});
        fft.to_transposed(data);
        fft.y_rows_multiply(data, half);
        fft.to_natural(data);
        for i in 0..n {
            let t = t0 + i as f64 * dt;
            let tm = t + 0.5 * dt;
            let ops = Pointwise {
                dt,
                nx: *nx,
                potential: potential
                    .as_ref()
                    .map(|p| (p.scale_at(tm), p.values.as_slice())),
                drive: drive.as_ref().map(|d| {
                    let s = Complex64::new(0.0, -dt * d.amplitude * (d.omega * tm).cos())
                        * Complex64::cis(-tm);
                    (s, d.profile.as_slice())
                }),
                // the background has taken the full nonlinear rotation but
                // only the first kinetic half-step when the sponge acts
                sponge: sponge.as_ref().map(|sp| {
                    let k = sp.flow_wavenumber;
                    (
                        Complex64::cis(-(t + dt) - 0.5 * k * k * tm),
                        sponge_sites.as_slice(),
                        flow_wave.as_slice(),
                    )
                }),
            };
            let mut cursor = 0;
            let mut finite = true;
            fft.x_rows(data, true, true, |iy, row| {
                finite &= ops.apply(iy, row, &mut cursor, &mut theta);
            });
            if !finite {
                field.time = t;
                return Err(SimError::NonFinite { time: t });
            }
            fft.to_transposed(data);
            fft.y_rows_multiply(data, if i + 1 < n { full } else { half });
            fft.to_natural(data);
        }
        fft.x_rows(data, true, false, |_, _| {});
        field.time = t0 + n as f64 * dt;
        Ok(())
    }

    /// ∫[½|∇ψ|² + ½|ψ|⁴ + U|ψ|²] with the potential at the field's time.
    pub fn energy(&mut self, field: &LatticeField) -> f64 {
        self.check(field);
        let area = self.dx * self.dx;
        self.work.copy_from_slice(&field.data);
        self.fft.forward_transposed(&mut self.work);
        let n = (self.nx * self.ny) as f64;
        let grad: f64 = self
            .work
            .iter()
            .zip(&self.kinetic)
            .map(|(z, e)| e * z.norm_sqr())
            .sum::<f64>()
            / n;
        let inter: f64 = field.data.iter().map(|z| 0.5 * z.norm_sqr().powi(2)).sum();
        let pot: f64 = match &self.potential {
            Some(p) => {
                let s = p.scale_at(field.time);
                field
                    .data
                    .iter()
                    .zip(&p.values)
                    .map(|(z, u)| s * u * z.norm_sqr())
                    .sum()
            }
            None => 0.0,
        };
        (grad + inter + pot) * area
    }
}

/// Nonlinear and potential rotation, drive and sponge for one step.
struct Pointwise<'a> {
    dt: f64,
    nx: usize,
    /// (ramp scale, U)
    potential: Option<(f64, &'a [f64])>,
    /// (amplitude factor, profile)
    drive: Option<(Complex64, &'a [f64])>,
    /// (carrier, damped sites, flow wave per column)
    sponge: Option<(Complex64, &'a [(usize, f64)], &'a [Complex64])>,
}

impl Pointwise<'_> {
    /// Applies the stage to row `iy`; false if the density is not finite.
    /// `cursor` walks the sorted sponge sites across successive rows.
    fn apply(
        &self,
        iy: usize,
        row: &mut [Complex64],
        cursor: &mut usize,
        theta: &mut Vec<f64>,
    ) -> bool {
        let start = iy * self.nx;
        let range = start..start + self.nx;
        let pot = self.potential.map(|(s, u)| (s, &u[range.clone()]));
        if !nonlinear_rotation(row, pot, self.dt, theta) {
            return false;
        }
        if let Some((s, profile)) = self.drive {
            for (z, g) in row.iter_mut().zip(&profile[range.clone()]) {
                *z += s * g;
            }
        }
        if let Some((carrier, sites, wave)) = self.sponge {
            while let Some(&(i, decay)) = sites.get(*cursor) {
                if i >= range.end {
                    break;
                }
                let target = carrier * wave[i - start];
                let z = &mut row[i - start];
                *z = target + (*z - target) * decay;
                *cursor += 1;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_stays_zero() {
        let mut f = LatticeField::uniform(16, 16, 0.5, c(0.0)).unwrap();
        let mut s = SplitStepper::new(&f, 0.02).unwrap();
        s.evolve(&mut f, 10).unwrap();
        assert!(f.data.iter().all(|z| *z == c(0.0)));
    }

    #[test]
    fn uniform_rotates_at_unit_rate() {
        let mut f = LatticeField::uniform(16, 8, 0.5, c(1.0)).unwrap();
        let mut s = SplitStepper::new(&f, 0.025).unwrap();
        s.evolve(&mut f, 400).unwrap();
        let expect = Complex64::cis(-f.time);
        assert!((f.time - 10.0).abs() < 1e-12);
        for z in &f.data {
            assert!((z - expect).norm() < 1e-11);
        }
    }

    #[test]
    fn fused_matches_single_steps() {
        let init = LatticeField::from_fn(32, 16, 0.5, |x, y| {
            c(1.0) + 0.1 * Complex64::cis(0.3 * x + 0.2 * y)
        })
        .unwrap();
        let mut a = init.clone();
        let mut b = init;
        let mut s = SplitStepper::new(&a, 0.02).unwrap();
        for _ in 0..25 {
            s.step(&mut a).unwrap();
        }
        s.evolve(&mut b, 25).unwrap();
        for (p, q) in a.data.iter().zip(&b.data) {
            assert!((p - q).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_large_dt() {
        let f = LatticeField::uniform(16, 16, 0.5, c(1.0)).unwrap();
        assert!(matches!(
            SplitStepper::new(&f, 0.09),
            Err(SimError::TimeStep { .. })
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let mut f = LatticeField::uniform(8, 8, 0.5, c(1.0)).unwrap();
        f.data[3] = Complex64::new(f64::NAN, 0.0);
        let mut s = SplitStepper::new(&f, 0.02).unwrap();
        assert!(matches!(s.evolve(&mut f, 2), Err(SimError::NonFinite { .. })));
    }

    #[test]
    fn uniform_energy() {
        let f = LatticeField::uniform(16, 16, 0.5, c(1.0)).unwrap();
        let mut s = SplitStepper::new(&f, 0.02).unwrap();
        // ½|ψ|⁴ over an 8×8 box
        assert!((s.energy(&f) - 32.0).abs() < 1e-12);
    }

    #[test]
    fn ramp_is_smooth() {
        let p = Potential {
            values: vec![],
            ramp: 10.0,
        };
        assert_eq!(p.scale_at(-1.0), 0.0);
        assert_eq!(p.scale_at(5.0), 0.5);
        assert_eq!(p.scale_at(10.0), 1.0);
        assert_eq!(Potential::fixed(vec![]).scale_at(0.0), 1.0);
    }

    #[test]
    fn sponge_pulls_toward_background() {
        let mut f = LatticeField::uniform(32, 32, 0.5, c(0.0)).unwrap();
        let sp = Sponge::edges(&f, 4.0, 5.0, 0.0);
        assert!(sp.is_active(0));
        assert!(!sp.is_active(16 * 32 + 16));
        let mut s = SplitStepper::new(&f, 0.02).unwrap().with_sponge(sp);
        s.evolve(&mut f, 200).unwrap();
        let edge = f.at(0, 0).norm();
        assert!((edge - 1.0).abs() < 0.05, "edge = {edge}");
    }

    #[test]
    fn periodic_wrap() {
        assert_eq!(periodic_delta(0.5, 4.0), 0.5);
        assert_eq!(periodic_delta(3.5, 4.0), -0.5);
        assert_eq!(periodic_delta(-2.5, 4.0), 1.5);
    }
}
