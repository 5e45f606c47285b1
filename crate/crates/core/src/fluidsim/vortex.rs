//! Quantized-vortex detection by plaquette phase winding.

use std::f64::consts::PI;

use serde::Serialize;

use super::lattice::LatticeField;

/// Plaquettes with any corner below this fraction of the background
/// density are skipped.
pub const DEFAULT_DENSITY_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VortexRecord {
    pub x: f64,
    pub y: f64,
    /// Phase winding / 2π around the plaquette.
    pub charge: i32,
    pub time: f64,
}

/// Phase difference arg(b/a) in (−π, π].
#[inline]
fn wrapped_phase_diff(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    let d = (b * a.conj()).arg();
    if d <= -PI {
        d + 2.0 * PI
    } else {
        d
    }
}

/// All plaquettes with nonzero winding, background density 1.
pub fn detect_vortices(field: &LatticeField) -> Vec<VortexRecord> {
    detect_vortices_masked(field, DEFAULT_DENSITY_THRESHOLD, |_, _| true)
}

/// Like [`detect_vortices`] with an explicit density threshold and a
/// site filter `keep(ix, iy)` applied to the plaquette's lower-left corner.
pub fn detect_vortices_masked<F: Fn(usize, usize) -> bool>(
    field: &LatticeField,
    threshold: f64,
    keep: F,
) -> Vec<VortexRecord> {
    let (nx, ny, dx) = (field.nx(), field.ny(), field.dx());
    let mut out = Vec::new();
    if nx < 2 || ny < 2 {
        return out;
    }
    for iy in 0..ny {
        let iy1 = (iy + 1) % ny;
        for ix in 0..nx {
            if !keep(ix, iy) {
                continue;
            }
            let ix1 = (ix + 1) % nx;
            let corners = [
                field.at(ix, iy),
                field.at(ix1, iy),
                field.at(ix1, iy1),
                field.at(ix, iy1),
            ];
            let dens = corners.map(|z| z.norm_sqr());
            if dens.iter().any(|&d| d < threshold) {
                continue;
            }
            let winding: f64 = (0..4)
                .map(|i| wrapped_phase_diff(corners[i], corners[(i + 1) % 4]))
                .sum();
            let charge = (winding / (2.0 * PI)).round() as i32;
            if charge == 0 {
                continue;
            }
            // density-minimum interpolation: weight corners by 1/ρ
            let offsets = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
            let w: Vec<f64> = dens.iter().map(|d| 1.0 / d).collect();
            let wsum: f64 = w.iter().sum();
            let ox: f64 = w.iter().zip(&offsets).map(|(w, o)| w * o.0).sum::<f64>() / wsum;
            let oy: f64 = w.iter().zip(&offsets).map(|(w, o)| w * o.1).sum::<f64>() / wsum;
            let wrap = |v: f64, l: f64| v - l * ((v + 0.5 * l) / l).floor();
            out.push(VortexRecord {
                x: wrap(field.x(ix) + ox * dx, field.extent_x()),
                y: wrap(field.y(iy) + oy * dx, field.extent_y()),
                charge,
                time: field.time,
            });
        }
    }
    out
}

pub fn net_charge(records: &[VortexRecord]) -> i32 {
    records.iter().map(|r| r.charge).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_has_none() {
        let f = LatticeField::uniform(32, 32, 0.5, Complex64::new(1.0, 0.0)).unwrap();
        assert!(detect_vortices(&f).is_empty());
    }

    #[test]
    fn single_vortex_ansatz() {
        let (x0, y0) = (1.3, -2.2);
        let f = LatticeField::from_fn(64, 64, 0.5, |x, y| {
            let (dx, dy) = (x - x0, y - y0);
            let r = (dx * dx + dy * dy).sqrt();
            Complex64::from_polar((r / (r * r + 2.0).sqrt()).max(0.05), dy.atan2(dx))
        })
        .unwrap();
        // the periodic box forces compensating windings far away; look near
        // the seeded core only
        let near: Vec<_> = detect_vortices(&f)
            .into_iter()
            .filter(|v| ((v.x - x0).powi(2) + (v.y - y0).powi(2)).sqrt() < 5.0)
            .collect();
        assert_eq!(near.len(), 1);
        assert_eq!(near[0].charge, 1);
        let d = ((near[0].x - x0).powi(2) + (near[0].y - y0).powi(2)).sqrt();
        assert!(d < 0.5, "offset {d}");
    }

    #[test]
    fn antivortex_and_pair() {
        let f = LatticeField::from_fn(64, 64, 0.5, |x, y| {
            let a = (y - 0.25).atan2(x - 5.25);
            let b = (y - 0.25).atan2(x + 4.75);
            Complex64::from_polar(1.0, a - b)
        })
        .unwrap();
        let v = detect_vortices(&f);
        let charges: Vec<i32> = v.iter().map(|r| r.charge).collect();
        assert!(charges.contains(&1) && charges.contains(&-1));
        assert_eq!(net_charge(&v), 0);
    }

    #[test]
    fn smooth_random_phase_has_no_windings() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (n, dx) = (64usize, 0.5);
        let l = n as f64 * dx;
        let modes: Vec<(f64, f64, f64, f64)> = (0..12)
            .map(|_| {
                (
                    rng.gen_range(-3..=3) as f64,
                    rng.gen_range(-3..=3) as f64,
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.0..6.28),
                )
            })
            .collect();
        let phase = |x: f64, y: f64| -> f64 {
            modes
                .iter()
                .map(|(p, q, a, s)| a * (2.0 * PI * (p * x + q * y) / l + s).sin())
                .sum()
        };
        let f = LatticeField::from_fn(n, n, dx, |x, y| Complex64::from_polar(1.0, phase(x, y))).unwrap();

        // brute force: the unwrapped phase is single-valued, so every
        // nearest-neighbour increment is small and each loop sums to zero
        for iy in 0..n {
            for ix in 0..n {
                let a = phase(f.x(ix), f.y(iy));
                let b = phase(f.x(ix) + dx, f.y(iy));
                assert!((b - a).abs() < PI);
            }
        }
        assert!(detect_vortices(&f).is_empty());
    }

    #[test]
    fn low_density_plaquettes_skipped() {
        let f = LatticeField::from_fn(32, 32, 0.5, |x, y| {
            let r = (x * x + y * y).sqrt();
            Complex64::from_polar(if r < 3.0 { 1e-3 } else { 1.0 }, y.atan2(x))
        })
        .unwrap();
        let near: Vec<_> = detect_vortices(&f)
            .into_iter()
            .filter(|v| v.x.abs() < 3.0 && v.y.abs() < 3.0)
            .collect();
        assert!(near.is_empty());
    }

    #[test]
    fn total_charge_on_torus_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let f = LatticeField::from_fn(16, 16, 1.0, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
            .unwrap();
            let v = detect_vortices_masked(&f, 0.0, |_, _| true);
            assert_eq!(net_charge(&v), 0);
        }
    }
}
