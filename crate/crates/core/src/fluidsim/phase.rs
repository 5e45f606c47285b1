//! e^{iθ} for the pointwise stage.
//!
//! libm's sin and cos dominate the step cost on a 512² grid. The phases
//! seen here are modest, so a Cody-Waite reduction by π/2 followed by the
//! fdlibm minimax kernels gives the same accuracy (about 1 ulp) and lets the
//! loop vectorize. Large arguments fall back to the standard library.

use num_complex::Complex64;

const FRAC_2_PI: f64 = 6.36619772367581382433e-01;
const PIO2_1: f64 = 1.57079632673412561417e+00;
const PIO2_2: f64 = 6.07710050630396597660e-11;
const PIO2_3: f64 = 2.02226624871116645580e-21;
/// Beyond this the three-term reduction loses accuracy.
const REDUCTION_LIMIT: f64 = 1.0e5;
/// 1.5·2⁵²: adding it rounds to an integer held in the low mantissa bits.
const ROUNDING: f64 = 6755399441055744.0;

const S1: f64 = -1.66666666666666324348e-01;
const S2: f64 = 8.33333333332248946124e-03;
const S3: f64 = -1.98412698298579493134e-04;
const S4: f64 = 2.75573137070700676789e-06;
const S5: f64 = -2.50507602534068634195e-08;
const S6: f64 = 1.58969099521155010221e-10;

const C1: f64 = 4.16666666666666019037e-02;
const C2: f64 = -1.38888888888741095749e-03;
const C3: f64 = 2.48015872894767294178e-05;
const C4: f64 = -2.75573143513906633035e-07;
const C5: f64 = 2.08757232129817482790e-09;
const C6: f64 = -1.13596475577881948265e-11;

#[inline(always)]
fn kernel(r: f64) -> (f64, f64) {
    let z = r * r;
    let s = r + r * z * (S1 + z * (S2 + z * (S3 + z * (S4 + z * (S5 + z * S6)))));
    let p = z * (C1 + z * (C2 + z * (C3 + z * (C4 + z * (C5 + z * C6)))));
    let hz = 0.5 * z;
    let w = 1.0 - hz;
    let c = w + (((1.0 - w) - hz) + z * p);
    (s, c)
}

/// cos θ + i sin θ.
#[inline(always)]
pub fn cis(theta: f64) -> Complex64 {
    if !(theta.abs() < REDUCTION_LIMIT) {
        return Complex64::cis(theta);
    }
    cis_reduced(theta)
}

/// [`cis`] without the range check; valid for |θ| < `REDUCTION_LIMIT`.
#[inline(always)]
fn cis_reduced(theta: f64) -> Complex64 {
    // branch-free so the rotation loop vectorizes
    let y = theta * FRAC_2_PI + ROUNDING;
    let q = y.to_bits();
    let k = y - ROUNDING;
    let r = ((theta - k * PIO2_1) - k * PIO2_2) - k * PIO2_3;
    let (s, c) = kernel(r);
    let odd = q & 1 == 1;
    let (re, im) = if odd { (s, c) } else { (c, s) };
    // quadrants 1, 2 negate the real part; 2, 3 the imaginary part
    let re_sign = ((q + 1) & 2) << 62;
    let im_sign = (q & 2) << 62;
    Complex64::new(
        f64::from_bits(re.to_bits() ^ re_sign),
        f64::from_bits(im.to_bits() ^ im_sign),
    )
}

/// ψ ← ψ·e^{−i(|ψ|² + s·U)dt} over a row. Returns false, leaving the row
/// unchanged, if any phase is not finite. `theta` is scratch space.
pub fn nonlinear_rotation(
    row: &mut [Complex64],
    potential: Option<(f64, &[f64])>,
    dt: f64,
    theta: &mut Vec<f64>,
) -> bool {
    #[cfg(target_arch = "x86_64")]
    if std::is_x86_feature_detected!("avx2") {
        // SAFETY: the feature was detected at runtime.
        return unsafe { rotation_avx2(row, potential, dt, theta) };
    }
    rotation(row, potential, dt, theta)
}

// Same code compiled for wider vectors. No FMA, so results are identical
// to the baseline build.
#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn rotation_avx2(
    row: &mut [Complex64],
    potential: Option<(f64, &[f64])>,
    dt: f64,
    theta: &mut Vec<f64>,
) -> bool {
    rotation(row, potential, dt, theta)
}

#[inline(always)]
fn rotation(
    row: &mut [Complex64],
    potential: Option<(f64, &[f64])>,
    dt: f64,
    theta: &mut Vec<f64>,
) -> bool {
    theta.resize(row.len(), 0.0);
    let theta = &mut theta[..row.len()];
    match potential {
        Some((s, u)) => {
            for ((t, z), u) in theta.iter_mut().zip(row.iter()).zip(u) {
                *t = -(z.norm_sqr() + s * u) * dt;
            }
        }
        None => {
            for (t, z) in theta.iter_mut().zip(row.iter()) {
                *t = -z.norm_sqr() * dt;
            }
        }
    }
    // NaN fails the comparison too
    let in_range = theta
        .iter()
        .fold(true, |ok, t| ok & (t.abs() < REDUCTION_LIMIT));
    if in_range {
        for (z, &t) in row.iter_mut().zip(theta.iter()) {
            *z *= cis_reduced(t);
        }
        return true;
    }
    if theta.iter().any(|t| !t.is_finite()) {
        return false;
    }
    for (z, &t) in row.iter_mut().zip(theta.iter()) {
        *z *= cis(t);
    }
    true
}
