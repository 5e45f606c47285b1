//! Numerical measurement of the Bogoliubov spectrum.
//!
//! Each wavenumber is probed separately: seed ψ = 1 + ε·cos(kx), evolve,
//! project the density onto cos(kx), and read the oscillation frequency off
//! the peak of a windowed, zero-padded DFT.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::lattice::LatticeField;
use super::stepper::{default_dt, SplitStepper};
use super::SimError;

/// ω(k) = √(k² + k⁴/4), contact interaction in healing-length units.
pub fn bogoliubov_frequency(k: f64) -> f64 {
    (k * k + 0.25 * k.powi(4)).sqrt()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispersionProbe {
    pub k_list: Vec<f64>,
    pub nx: usize,
    /// Box length; by default the smallest length commensurate with every k.
    pub box_length: Option<f64>,
    pub epsilon: f64,
    /// Per-k duration; by default 16 periods of max(k, k²/2).
    pub duration: Option<f64>,
    pub dt: Option<f64>,
}

impl Default for DispersionProbe {
    fn default() -> Self {
        Self::new(vec![0.1, 0.3, 1.0, 3.0, 10.0])
    }
}

impl DispersionProbe {
    pub fn new(k_list: Vec<f64>) -> Self {
        Self {
            k_list,
            nx: 512,
            box_length: None,
            epsilon: 1e-3,
            duration: None,
            dt: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionSample {
    pub k: f64,
    pub measured: f64,
    pub predicted: f64,
    pub rel_error: f64,
}

/// Smallest L = 2π/g with every k an integer multiple of g, trying
/// g = k_min/q for q = 1..=64.
pub fn commensurate_box(k_list: &[f64]) -> Result<f64, SimError> {
    let kmin = k_list
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if !(kmin > 0.0 && kmin.is_finite()) {
        return Err(SimError::InvalidScenario(
            "wavenumbers must be positive".into(),
        ));
    }
    for q in 1..=64 {
        let g = kmin / q as f64;
        if k_list.iter().all(|&k| is_integer(k / g)) {
            return Ok(2.0 * PI / g);
        }
    }
    Err(SimError::NotCommensurate { k: kmin })
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-6 * x.abs().max(1.0)
}

pub fn measure_dispersion(probe: &DispersionProbe) -> Result<Vec<DispersionSample>, SimError> {
    let l = match probe.box_length {
        Some(l) => l,
        None => commensurate_box(&probe.k_list)?,
    };
    probe
        .k_list
        .iter()
        .map(|&k| {
            let measured = measure_frequency(k, l, probe)?;
            let predicted = bogoliubov_frequency(k);
            Ok(DispersionSample {
                k,
                measured,
                predicted,
                rel_error: (measured - predicted).abs() / predicted,
            })
        })
        .collect()
}

fn measure_frequency(k: f64, l: f64, probe: &DispersionProbe) -> Result<f64, SimError> {
    let nx = probe.nx;
    let dx = l / nx as f64;
    if !is_integer(k * l / (2.0 * PI)) {
        return Err(SimError::NotCommensurate { k });
    }
    // keep the first harmonic below Nyquist
    if 2.0 * k >= PI / dx {
        return Err(SimError::InvalidScenario(format!(
            "k = {k} is too close to the grid cutoff {:.3}",
            PI / dx
        )));
    }
    let eps = probe.epsilon;
    let mut field = LatticeField::from_fn(nx, 1, dx, |x, _| {
        Complex64::new(1.0 + eps * (k * x).cos(), 0.0)
    })?;
    let dt = probe.dt.unwrap_or_else(|| default_dt(dx));
    let mut stepper = SplitStepper::new(&field, dt)?;

    let w_est = k.max(0.5 * k * k);
    let period = 2.0 * PI / w_est;
    let duration = probe.duration.unwrap_or(16.0 * period);
    let stride = ((period / 32.0) / dt).floor().max(1.0) as usize;
    let n_samples = (duration / (stride as f64 * dt)).ceil() as usize + 1;
    let basis: Vec<f64> = (0..nx).map(|i| (k * field.x(i)).cos()).collect();
    let project = |f: &LatticeField| -> f64 {
        f.data
            .iter()
            .zip(&basis)
            .map(|(z, c)| (z.norm_sqr() - 1.0) * c)
            .sum::<f64>()
            / nx as f64
    };
    let mut series = Vec::with_capacity(n_samples);
    series.push(project(&field));
    for _ in 1..n_samples {
        stepper.evolve(&mut field, stride)?;
        series.push(project(&field));
    }
    let sample_dt = stride as f64 * dt;
    peak_frequency(&series, sample_dt).map_err(|reason| SimError::UnresolvedFrequency { k, reason })
}

/// Angular frequency of the strongest spectral line: Hann window, 8×
/// zero-padding, parabolic interpolation on the log magnitude.
pub fn peak_frequency(series: &[f64], sample_dt: f64) -> Result<f64, String> {
    let n = series.len();
    if n < 8 {
        return Err(format!("only {n} samples"));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let padded = (8 * n).next_power_of_two();
    let mut buf: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); padded];
    for (i, (b, s)) in buf.iter_mut().zip(series).enumerate() {
        let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / (n - 1) as f64).cos();
        *b = Complex64::new((s - mean) * w, 0.0);
    }
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);
    let mag: Vec<f64> = buf[..padded / 2].iter().map(|z| z.norm()).collect();
    let (peak, _) = mag
        .iter()
        .enumerate()
        .skip(1)
        .fold((1, f64::MIN), |acc, (i, &m)| if m > acc.1 { (i, m) } else { acc });
    // below ~2 cycles the line is not separated from DC
    let cycles = peak as f64 * n as f64 / padded as f64;
    if cycles < 2.0 {
        return Err(format!("only {cycles:.2} cycles in the record"));
    }
    if peak + 1 >= mag.len() {
        return Err("peak at Nyquist; sampling too coarse".into());
    }
    let (a, b, c) = (mag[peak - 1].ln(), mag[peak].ln(), mag[peak + 1].ln());
    let denom = a - 2.0 * b + c;
    let delta = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    let freq = (peak as f64 + delta) / (padded as f64 * sample_dt);
    Ok(2.0 * PI * freq)
}
