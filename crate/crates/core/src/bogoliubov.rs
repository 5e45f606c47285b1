//! Bogoliubov quasiparticles of the photon fluid.
//!
//! All momenta are transverse momenta κ in g·cm/s and all energies are in
//! erg. The interaction enters only through the kernel V(κ) and the
//! condensate number N₀; the mass comes from [`CondensateParams`].

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::medium::CondensateParams;
use crate::units::CGS;

/// Default number of samples on a dispersion curve.
pub const DEFAULT_CURVE_POINTS: usize = 512;
/// Default curve range, in units of κ_c.
pub const DEFAULT_KAPPA_MIN: f64 = 1e-4;
pub const DEFAULT_KAPPA_MAX: f64 = 1e3;

const TRANSITION_MAX_ITER: usize = 100;
const GOLDEN_ITER: usize = 200;

#[derive(Debug, Error, PartialEq)]
pub enum BogoliubovError {
    #[error("dynamically unstable mode at kappa = {kappa:e} (omega^2 = {omega_sq:e})")]
    UnstableMode { kappa: f64, omega_sq: f64 },
    #[error("degenerate mode at kappa = {0:e}: quasiparticle energy is zero")]
    DegenerateMode(f64),
    #[error("momentum must be positive, got {0:e}")]
    NonPositiveMomentum(f64),
    #[error("interaction kernel is not repulsive: {0}")]
    NotRepulsive(String),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("transition momentum fixed point did not converge in {0} iterations")]
    TransitionNoConvergence(usize),
    #[error("need at least 3 samples below 0.01 kappa_c for the sound-speed limit, found {0}")]
    InsufficientSamples(usize),
    #[error("empty dispersion curve")]
    EmptyCurve,
    #[error("curve momenta must be positive and strictly increasing")]
    BadGrid,
    #[error("depletion quadrature did not converge (estimated error {0:e})")]
    QuadratureNonConvergence(f64),
}

/// Tabulated V(κ): linear interpolation, constant extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TabulatedKernel {
    kappa: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedKernel {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, BogoliubovError> {
        if points.is_empty() {
            return Err(BogoliubovError::InvalidKernel("empty table".into()));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(BogoliubovError::InvalidKernel(
                "table momenta must be strictly increasing".into(),
            ));
        }
        if points[0].0 < 0.0 {
            return Err(BogoliubovError::InvalidKernel("negative table momentum".into()));
        }
        let (kappa, values) = points.into_iter().unzip();
        Ok(Self { kappa, values })
    }

    pub fn eval(&self, kappa: f64) -> f64 {
        let k = kappa.abs();
        let n = self.kappa.len();
        if k <= self.kappa[0] {
            return self.values[0];
        }
        if k >= self.kappa[n - 1] {
            return self.values[n - 1];
        }
        let i = self.kappa.partition_point(|&x| x <= k) - 1;
        let t = (k - self.kappa[i]) / (self.kappa[i + 1] - self.kappa[i]);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }
}

/// Pair interaction V(κ), a function of |κ| only.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InteractionKernel {
    /// V(κ) = V₀.
    Contact { v0: f64 },
    /// V(κ) = V₀[1 − d·exp(−(κ − κ_r)²/2σ²)], a dip that produces a roton
    /// minimum.
    Roton {
        v0: f64,
        /// κ_r (g·cm/s)
        center: f64,
        /// σ (g·cm/s)
        width: f64,
        /// d, in [0, 1)
        depth: f64,
    },
    Tabulated { table: TabulatedKernel },
}

impl InteractionKernel {
    pub fn contact(v0: f64) -> Self {
        InteractionKernel::Contact { v0 }
    }

    pub fn free() -> Self {
        InteractionKernel::Contact { v0: 0.0 }
    }

    pub fn roton(v0: f64, center: f64, width: f64, depth: f64) -> Result<Self, BogoliubovError> {
        let k = InteractionKernel::Roton {
            v0,
            center,
            width,
            depth,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self, BogoliubovError> {
        Ok(InteractionKernel::Tabulated {
            table: TabulatedKernel::new(points)?,
        })
    }

    /// Checks that V(κ) ≥ 0 everywhere it can be checked cheaply.
    pub fn validate(&self) -> Result<(), BogoliubovError> {
        match self {
            InteractionKernel::Contact { v0 } if *v0 < 0.0 => {
                Err(BogoliubovError::NotRepulsive(format!("V0 = {v0:e}")))
            }
            InteractionKernel::Roton {
                v0, width, depth, ..
            } => {
                if *v0 < 0.0 {
                    Err(BogoliubovError::NotRepulsive(format!("V0 = {v0:e}")))
                } else if !(*depth >= 0.0 && *depth < 1.0) {
                    Err(BogoliubovError::InvalidKernel(format!(
                        "roton depth must lie in [0, 1), got {depth}"
                    )))
                } else if !(*width > 0.0) {
                    Err(BogoliubovError::InvalidKernel(format!(
                        "roton width must be positive, got {width:e}"
                    )))
                } else {
                    Ok(())
                }
            }
            InteractionKernel::Tabulated { table } => {
                if table.values.iter().any(|&v| v < 0.0) {
                    Err(BogoliubovError::NotRepulsive("negative table entry".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, kappa: f64) -> f64 {
        let k = kappa.abs();
        match self {
            InteractionKernel::Contact { v0 } => *v0,
            InteractionKernel::Roton {
                v0,
                center,
                width,
                depth,
            } => {
                let z = (k - center) / width;
                v0 * (1.0 - depth * (-0.5 * z * z).exp())
            }
            InteractionKernel::Tabulated { table } => table.eval(k),
        }
    }

    /// The same kernel with every value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            InteractionKernel::Contact { v0 } => InteractionKernel::Contact { v0: v0 * factor },
            InteractionKernel::Roton {
                v0,
                center,
                width,
                depth,
            } => InteractionKernel::Roton {
                v0: v0 * factor,
                center: *center,
                width: *width,
                depth: *depth,
            },
            InteractionKernel::Tabulated { table } => InteractionKernel::Tabulated {
                table: TabulatedKernel {
                    kappa: table.kappa.clone(),
                    values: table.values.iter().map(|v| v * factor).collect(),
                },
            },
        }
    }
}

/// One sampled quasiparticle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiparticleMode {
    pub kappa: f64,
    /// ω̃(κ) (erg)
    pub energy: f64,
    pub u: f64,
    pub v: f64,
    /// ε′(κ) = κ²/2m + N₀V(κ) (erg)
    pub eps_prime: f64,
}

/// Hartree single-particle energy κ²/2m + N₀V(κ).
pub fn modified_energy(kappa: f64, params: &CondensateParams, kernel: &InteractionKernel) -> f64 {
    kappa * kappa / (2.0 * params.m) + params.n0 * kernel.eval(kappa)
}

fn dispersion_squared(kappa: f64, params: &CondensateParams, kernel: &InteractionKernel) -> f64 {
    let k2 = kappa * kappa;
    let m = params.m;
    k2 * params.n0 * kernel.eval(kappa) / m + k2 * k2 / (4.0 * m * m)
}

/// ω̃(κ) = [κ²N₀V(κ)/m + κ⁴/4m²]^{1/2}.
pub fn dispersion(
    kappa: f64,
    params: &CondensateParams,
    kernel: &InteractionKernel,
) -> Result<f64, BogoliubovError> {
    let w2 = dispersion_squared(kappa, params, kernel);
    if w2 < 0.0 {
        return Err(BogoliubovError::UnstableMode {
            kappa,
            omega_sq: w2,
        });
    }
    Ok(w2.sqrt())
}

/// ω̃ from ε′² − (N₀V)², the form before expanding ε′.
pub fn dispersion_from_modified_energy(
    kappa: f64,
    params: &CondensateParams,
    kernel: &InteractionKernel,
) -> Result<f64, BogoliubovError> {
    let e = modified_energy(kappa, params, kernel);
    let a = params.n0 * kernel.eval(kappa);
    let w2 = (e - a) * (e + a);
    if w2 < 0.0 {
        return Err(BogoliubovError::UnstableMode {
            kappa,
            omega_sq: w2,
        });
    }
    Ok(w2.sqrt())
}

/// Bogoliubov-de Gennes matrix [[ε′, N₀V], [−N₀V, −ε′]] whose eigenvalues
/// are ±ω̃.
pub fn bdg_matrix(
    kappa: f64,
    params: &CondensateParams,
    kernel: &InteractionKernel,
) -> [[f64; 2]; 2] {
    let e = modified_energy(kappa, params, kernel);
    let a = params.n0 * kernel.eval(kappa);
    [[e, a], [-a, -e]]
}

/// Real coefficients (u, v) of the canonical transformation, u > 0 and
/// sign(v) = sign(V(κ)).
pub fn uv_coefficients(
    kappa: f64,
    params: &CondensateParams,
    kernel: &InteractionKernel,
) -> Result<(f64, f64), BogoliubovError> {
    if !(kappa > 0.0) {
        return Err(BogoliubovError::NonPositiveMomentum(kappa));
    }
    let w = dispersion(kappa, params, kernel)?;
    if w == 0.0 {
        return Err(BogoliubovError::DegenerateMode(kappa));
    }
    let e = modified_energy(kappa, params, kernel);
    let a = params.n0 * kernel.eval(kappa);
    // v² = (ε′ − ω̃)/2ω̃ rewritten to avoid cancellation at large κ
    let v2 = a * a / (2.0 * w * (e + w));
    let u = (1.0 + v2).sqrt();
    let v = v2.sqrt().copysign(a);
    Ok((u, v))
}

pub fn mode(
    kappa: f64,
    params: &CondensateParams,
    kernel: &InteractionKernel,
) -> Result<QuasiparticleMode, BogoliubovError> {
    let (u, v) = uv_coefficients(kappa, params, kernel)?;
    Ok(QuasiparticleMode {
        kappa,
        energy: dispersion(kappa, params, kernel)?,
        u,
        v,
        eps_prime: modified_energy(kappa, params, kernel),
    })
}

/// κ_c solving κ = 2(mN₀V(κ))^{1/2}, where the phonon and free terms of
/// the dispersion are equal.
pub fn transition_momentum(
    params: &CondensateParams,
    kernel: &InteractionKernel,
) -> Result<f64, BogoliubovError> {
    kernel.validate()?;
    let target = |k: f64| 2.0 * (params.m * params.n0 * kernel.eval(k)).sqrt();
    if let InteractionKernel::Contact { .. } = kernel {
        return Ok(target(0.0));
    }
    let mut k = target(0.0);
    for _ in 0..TRANSITION_MAX_ITER {
        let next = target(k);
        if (next - k).abs() <= 1e-14 * next.abs() {
            return Ok(next);
        }
        k = next;
    }
    Err(BogoliubovError::TransitionNoConvergence(TRANSITION_MAX_ITER))
}

/// λ_c = 2πħ/κ_c.
pub fn collective_length(
    params: &CondensateParams,
    kernel: &InteractionKernel,
) -> Result<f64, BogoliubovError> {
    Ok(2.0 * PI * CGS.hbar / transition_momentum(params, kernel)?)
}

/// Log-spaced momenta from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && min > 0.0 && max > min);
    let (a, b) = (min.ln(), max.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// Sampled spectrum ω̃(κ) with the coefficients at each κ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionCurve {
    pub modes: Vec<QuasiparticleMode>,
    pub params: CondensateParams,
    pub kernel: InteractionKernel,
}

impl DispersionCurve {
    pub fn sample(
        params: &CondensateParams,
        kernel: &InteractionKernel,
        kappas: &[f64],
    ) -> Result<Self, BogoliubovError> {
        if kappas.is_empty() {
            return Err(BogoliubovError::EmptyCurve);
        }
        if kappas[0] <= 0.0 || kappas.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(BogoliubovError::BadGrid);
        }
        let modes = kappas
            .iter()
            .map(|&k| mode(k, params, kernel))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            modes,
            params: *params,
            kernel: kernel.clone(),
        })
    }

    /// `points` log-spaced samples between `min` and `max`, both in units
    /// of κ_c.
    pub fn sample_relative(
        params: &CondensateParams,
        kernel: &InteractionKernel,
        min: f64,
        max: f64,
        points: usize,
    ) -> Result<Self, BogoliubovError> {
        let kc = transition_momentum(params, kernel)?;
        if !(kc > 0.0) {
            return Err(BogoliubovError::NotRepulsive(
                "kappa_c is zero; use an explicit momentum grid".into(),
            ));
        }
        Self::sample(params, kernel, &log_grid(min * kc, max * kc, points))
    }

    /// 512 log-spaced samples from 10⁻⁴κ_c to 10³κ_c.
    pub fn default_for(
        params: &CondensateParams,
        kernel: &InteractionKernel,
    ) -> Result<Self, BogoliubovError> {
        Self::sample_relative(
            params,
            kernel,
            DEFAULT_KAPPA_MIN,
            DEFAULT_KAPPA_MAX,
            DEFAULT_CURVE_POINTS,
        )
    }

    /// CSV with columns kappa, energy, u, v, eps_prime, phonon_term,
    /// free_term. `phonon_term` is κ√(N₀V(κ)/m), the linear asymptote, and
    /// `free_term` is κ²/2m.
    pub fn write_csv<W: Write>(&self, mut w: W, comment: Option<&str>) -> io::Result<()> {
        if let Some(c) = comment {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "kappa,energy,u,v,eps_prime,phonon_term,free_term")?;
        for md in &self.modes {
            let k = md.kappa;
            let phonon = k * (self.params.n0 * self.kernel.eval(k) / self.params.m).sqrt();
            let free = k * k / (2.0 * self.params.m);
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                k, md.energy, md.u, md.v, md.eps_prime, phonon, free
            )?;
        }
        Ok(())
    }
}

fn interaction_scale(params: &CondensateParams, kernel: &InteractionKernel) -> f64 {
    params.n0 * kernel.eval(0.0)
}

/// lim_{κ→0} ω̃/κ by polynomial extrapolation in κ² through the three
/// smallest samples.
pub fn sound_speed_from_curve(curve: &DispersionCurve) -> Result<f64, BogoliubovError> {
    if interaction_scale(&curve.params, &curve.kernel) == 0.0 {
        return Ok(0.0);
    }
    let kc = transition_momentum(&curve.params, &curve.kernel)?;
    let small: Vec<&QuasiparticleMode> =
        curve.modes.iter().filter(|m| m.kappa < 0.01 * kc).take(3).collect();
    if small.len() < 3 {
        return Err(BogoliubovError::InsufficientSamples(small.len()));
    }
    let h: Vec<f64> = small.iter().map(|m| m.kappa * m.kappa).collect();
    let f: Vec<f64> = small.iter().map(|m| m.energy / m.kappa).collect();
    // Lagrange interpolation evaluated at h = 0
    let mut s = 0.0;
    for i in 0..3 {
        let mut l = 1.0;
        for j in 0..3 {
            if i != j {
                l *= h[j] / (h[j] - h[i]);
            }
        }
        s += f[i] * l;
    }
    Ok(s)
}

/// Landau critical velocity min_κ ω̃(κ)/κ, refined by golden-section search
/// around the best sample.
pub fn landau_critical_velocity(curve: &DispersionCurve) -> Result<f64, BogoliubovError> {
    if curve.modes.is_empty() {
        return Err(BogoliubovError::EmptyCurve);
    }
    let ratio = |m: &QuasiparticleMode| m.energy / m.kappa;
    let (best, best_val) = curve
        .modes
        .iter()
        .enumerate()
        .map(|(i, m)| (i, ratio(m)))
        .fold((0, f64::INFINITY), |acc, (i, r)| if r < acc.1 { (i, r) } else { acc });
    if best == 0 || best + 1 == curve.modes.len() {
        return Ok(best_val);
    }
    let f = |k: f64| {
        dispersion(k, &curve.params, &curve.kernel)
            .map(|w| w / k)
            .unwrap_or(f64::INFINITY)
    };
    let (x, fx) = golden_section_min(f, curve.modes[best - 1].kappa, curve.modes[best + 1].kappa);
    Ok(fx.min(best_val).min(f(x)))
}

fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITER {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Fraction of photons outside the condensate,
/// (1/N₀)·(A/(2πħ)²)·∫v²(κ)·2πκ dκ over 10⁻⁴κ_c … 10³κ_c.
pub fn depletion_fraction(
    params: &CondensateParams,
    kernel: &InteractionKernel,
    area: f64,
) -> Result<f64, BogoliubovError> {
    kernel.validate()?;
    if interaction_scale(params, kernel) == 0.0 {
        return Ok(0.0);
    }
    let kc = transition_momentum(params, kernel)?;
    // integrate in s = ln κ: dκ = κ ds
    let integrand = |s: f64| -> f64 {
        let k = s.exp();
        let (_, v) = uv_coefficients(k, params, kernel).unwrap_or((1.0, 0.0));
        v * v * 2.0 * PI * k * k
    };
    let a = (DEFAULT_KAPPA_MIN * kc).ln();
    let b = (DEFAULT_KAPPA_MAX * kc).ln();
    let integral = adaptive_simpson(&integrand, a, b, 1e-11)?;
    let two_pi_hbar = 2.0 * PI * CGS.hbar;
    Ok(integral * area / (two_pi_hbar * two_pi_hbar) / params.n0)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64, BogoliubovError> {
    // coarse composite pass sets the absolute scale
    let n = 64;
    let h = (b - a) / n as f64;
    let mut total = 0.0;
    let mut panels = Vec::with_capacity(n);
    for i in 0..n {
        let x0 = a + i as f64 * h;
        let x1 = x0 + h;
        let xm = 0.5 * (x0 + x1);
        let (f0, fm, f1) = (f(x0), f(xm), f(x1));
        let s = h / 6.0 * (f0 + 4.0 * fm + f1);
        total += s.abs();
        panels.push((x0, x1, f0, fm, f1, s));
    }
    let tol = rel_tol * total.max(f64::MIN_POSITIVE);
    let mut sum = 0.0;
    let mut worst: f64 = 0.0;
    for (x0, x1, f0, fm, f1, s) in panels {
        let (v, err) = simpson_rec(f, x0, x1, f0, fm, f1, s, tol / n as f64, 40);
        sum += v;
        worst = worst.max(err);
    }
    if worst > tol {
        return Err(BogoliubovError::QuadratureNonConvergence(worst));
    }
    Ok(sum)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return (left + right + delta / 15.0, 0.0);
    }
    if depth == 0 {
        return (left + right + delta / 15.0, delta.abs() / 15.0);
    }
    let (l, el) = simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
    let (r, er) = simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    (l + r, el + er)
}
