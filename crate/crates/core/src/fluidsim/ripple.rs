//! Driven point source in a fluid at rest: the sound-wave ripple experiment.
//!
//! A weak source oscillating at Ω launches cylindrical phonons. Once the
//! region inside the sponge has reached steady state, the density is
//! demodulated at Ω along four grid-aligned rays from the source and the
//! wavelength is read off the slope of the unwrapped phase.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::LatticeField;
use super::stepper::{PointDrive, Sponge, SplitStepper};
use super::SimError;

/// Largest source amplitude still treated as linear response.
pub const MAX_LINEAR_AMPLITUDE: f64 = 1e-2;
/// Upper edge of the phonon band used for this experiment.
pub const MAX_PHONON_OMEGA: f64 = 0.3;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RippleSource {
    pub omega: f64,
    /// Source position; snapped to the nearest grid site.
    pub source_pos: (f64, f64),
    pub amplitude: f64,
    /// Gaussian width of the source.
    pub sigma: f64,
    pub nx: usize,
    pub dx: f64,
    pub dt: f64,
    pub sponge_width: f64,
    pub sponge_rate: f64,
    /// Time before demodulation starts; default: source-to-sponge travel
    /// time plus four drive periods.
    pub settle: Option<f64>,
    /// Number of drive periods to demodulate over.
    pub periods: usize,
    /// Fit window as fractions of the distance from the source to the sponge.
    pub fit_window: (f64, f64),
}

impl Default for RippleSource {
    fn default() -> Self {
        Self::new(0.2)
    }
}

impl RippleSource {
    pub fn new(omega: f64) -> Self {
        Self {
            omega,
            source_pos: (0.0, 0.0),
            amplitude: 1e-3,
            sigma: 2.0,
            nx: 512,
            dx: 1.0,
            dt: 0.1,
            sponge_width: 64.0,
            sponge_rate: 0.3,
            settle: None,
            periods: 2,
            fit_window: (0.25, 1.0),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.amplitude.abs() > MAX_LINEAR_AMPLITUDE || !self.amplitude.is_finite() {
            return Err(SimError::NonlinearSource(self.amplitude));
        }
        if !(self.omega > 0.0 && self.omega <= MAX_PHONON_OMEGA) {
            return Err(SimError::InvalidScenario(format!(
                "drive frequency {} outside the phonon band (0, {MAX_PHONON_OMEGA}]",
                self.omega
            )));
        }
        if !(self.sigma > 0.0) || self.periods == 0 {
            return Err(SimError::InvalidScenario(
                "source width and period count must be positive".into(),
            ));
        }
        let (a, b) = self.fit_window;
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(SimError::InvalidScenario(format!(
                "fit window ({a}, {b}) must satisfy 0 <= a < b <= 1"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RippleMeasurement {
    pub omega: f64,
    pub wavelength: f64,
    /// 2π/Ω, the phonon-branch prediction.
    pub predicted: f64,
    pub rel_error: f64,
    pub fit_range: (f64, f64),
    /// (r, unwrapped phase, |demodulated amplitude|) along the averaged ray.
    pub profile: Vec<(f64, f64, f64)>,
}

pub fn run_ripple(src: &RippleSource) -> Result<RippleMeasurement, SimError> {
    src.validate()?;
    let n = src.nx;
    let mut field = LatticeField::uniform(n, n, src.dx, Complex64::new(1.0, 0.0))?;
    let dx = src.dx;
    let half = 0.5 * field.extent_x();
    let reach = half - src.sponge_width;
    if reach < 4.0 * src.sigma {
        return Err(SimError::InvalidScenario(
            "sponge leaves no room between source and boundary".into(),
        ));
    }
    let sx = ((src.source_pos.0 / dx).round() as i64 + (n / 2) as i64).rem_euclid(n as i64) as usize;
    let sy = ((src.source_pos.1 / dx).round() as i64 + (n / 2) as i64).rem_euclid(n as i64) as usize;
    let (x0, y0) = (field.x(sx), field.y(sy));
    // rays stop at the sponge, measured from the source
    let reach = (half - x0.abs()).min(half - y0.abs()) - src.sponge_width;
    let n_ray = (reach / dx).floor() as usize;
    if n_ray < 8 {
        return Err(SimError::InvalidScenario(
            "source too close to the sponge".into(),
        ));
    }

    let drive = PointDrive::gaussian(&field, x0, y0, src.sigma, src.amplitude, src.omega);
    let sponge = Sponge::edges(&field, src.sponge_width, src.sponge_rate, 0.0);
    let mut stepper = SplitStepper::new(&field, src.dt)?
        .with_drive(drive)
        .with_sponge(sponge);

    let period = 2.0 * PI / src.omega;
    let settle = src.settle.unwrap_or(reach + 4.0 * period);
    stepper.evolve(&mut field, (settle / src.dt).ceil() as usize)?;

    // demodulate over an integer number of periods, ~64 samples each
    let stride = ((period / 64.0) / src.dt).floor().max(1.0) as usize;
    let sample_dt = stride as f64 * src.dt;
    let n_samples = ((src.periods as f64 * period) / sample_dt).round() as usize;
    let idx = |ix: i64, iy: i64| -> usize {
        let ix = ix.rem_euclid(n as i64) as usize;
        let iy = iy.rem_euclid(n as i64) as usize;
        iy * n + ix
    };
    let (sxi, syi) = (sx as i64, sy as i64);
    let rays: Vec<[usize; 4]> = (0..=n_ray as i64)
        .map(|j| {
            [
                idx(sxi + j, syi),
                idx(sxi - j, syi),
                idx(sxi, syi + j),
                idx(sxi, syi - j),
            ]
        })
        .collect();
    let mut acc = vec![Complex64::new(0.0, 0.0); rays.len()];
    for _ in 0..n_samples {
        stepper.evolve(&mut field, stride)?;
        let rot = Complex64::cis(src.omega * field.time);
        for (a, sites) in acc.iter_mut().zip(&rays) {
            let rho: f64 = sites.iter().map(|&i| field.data[i].norm_sqr() - 1.0).sum();
            *a += rot * (0.25 * rho);
        }
    }

    let mut profile = Vec::with_capacity(acc.len());
    let mut prev = 0.0;
    let mut offset = 0.0;
    for (j, a) in acc.iter().enumerate() {
        let raw = a.arg();
        if j > 0 {
            let jump = raw - prev;
            offset -= 2.0 * PI * (jump / (2.0 * PI)).round();
        }
        prev = raw;
        profile.push((j as f64 * dx, raw + offset, a.norm() / n_samples as f64));
    }

    let fit_range = (src.fit_window.0 * reach, src.fit_window.1 * reach);
    let pts: Vec<(f64, f64)> = profile
        .iter()
        .filter(|(r, _, _)| *r >= fit_range.0 && *r <= fit_range.1)
        .map(|&(r, p, _)| (r, p))
        .collect();
    let slope = linear_slope(&pts).ok_or_else(|| {
        SimError::InvalidScenario("too few points in the fit window".into())
    })?;
    if slope.abs() < 1e-12 {
        return Err(SimError::UnresolvedFrequency {
            k: 0.0,
            reason: "flat phase profile".into(),
        });
    }
    let wavelength = 2.0 * PI / slope.abs();
    let predicted = 2.0 * PI / src.omega;
    Ok(RippleMeasurement {
        omega: src.omega,
        wavelength,
        predicted,
        rel_error: (wavelength - predicted).abs() / predicted,
        fit_range,
        profile,
    })
}

/// Least-squares slope of y against x.
fn linear_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 0.3 * i as f64 - 2.0)).collect();
        assert!((linear_slope(&pts).unwrap() - 0.3).abs() < 1e-12);
        assert!(linear_slope(&pts[..2]).is_none());
    }

    #[test]
    fn validation() {
        let mut s = RippleSource::new(0.2);
        assert!(s.validate().is_ok());
        s.amplitude = 0.5;
        assert!(matches!(s.validate(), Err(SimError::NonlinearSource(_))));
        s.amplitude = 1e-3;
        s.omega = 0.8;
        assert!(matches!(s.validate(), Err(SimError::InvalidScenario(_))));
    }

    #[test]
    fn small_box_ripple() {
        // coarse and short, but enough to see the phonon wavelength
        let mut s = RippleSource::new(0.3);
        s.nx = 256;
        s.dx = 1.0;
        s.sponge_width = 40.0;
        let m = run_ripple(&s).unwrap();
        assert!(m.rel_error < 0.05, "lambda = {} vs {}", m.wavelength, m.predicted);
    }
}
