//! 2D FFT over the lattice layout, built from 1D rustfft plans and two
//! transposes. Plans are fixed at construction so repeated runs are
//! bit-identical.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct Fft2 {
    nx: usize,
    ny: usize,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    transposed: Vec<Complex64>,
}

impl Fft2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd_x = planner.plan_fft_forward(nx);
        let inv_x = planner.plan_fft_inverse(nx);
        let fwd_y = planner.plan_fft_forward(ny);
        let inv_y = planner.plan_fft_inverse(ny);
        let scratch_len = [&fwd_x, &inv_x, &fwd_y, &inv_y]
            .iter()
            .map(|p| p.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        Self {
            nx,
            ny,
            fwd_x,
            inv_x,
            fwd_y,
            inv_y,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            transposed: vec![Complex64::new(0.0, 0.0); nx * ny],
        }
    }

    /// Unnormalized forward transform.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    /// Inverse transform including the 1/(nx·ny) factor.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.run(data, false);
        let s = 1.0 / (self.nx * self.ny) as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }

    /// Unnormalized forward transform leaving the spectrum in transposed
    /// layout: mode (kx_i, ky_j) at `i * ny + j`. Saves the transpose back
    /// when the caller only multiplies pointwise in Fourier space.
    pub fn forward_transposed(&mut self, data: &mut Vec<Complex64>) {
        debug_assert_eq!(data.len(), self.nx * self.ny);
        if self.nx > 1 {
            self.fwd_x.process_with_scratch(data, &mut self.scratch);
        }
        if self.ny > 1 {
            transpose(data, &mut self.transposed, self.nx, self.ny);
            std::mem::swap(data, &mut self.transposed);
            self.fwd_y.process_with_scratch(data, &mut self.scratch);
        }
    }

    /// Inverse of [`Self::forward_transposed`], unnormalized (scaled by nx·ny).
    pub fn inverse_transposed(&mut self, data: &mut Vec<Complex64>) {
        debug_assert_eq!(data.len(), self.nx * self.ny);
        if self.ny > 1 {
            self.inv_y.process_with_scratch(data, &mut self.scratch);
            transpose(data, &mut self.transposed, self.ny, self.nx);
            std::mem::swap(data, &mut self.transposed);
        }
        if self.nx > 1 {
            self.inv_x.process_with_scratch(data, &mut self.scratch);
        }
    }

    /// Row pass over the natural layout: per row, optionally the inverse x
    /// transform, then `f(iy, row)`, then optionally the forward x transform.
    /// Keeps each row in cache across all three.
    pub fn x_rows<F: FnMut(usize, &mut [Complex64])>(
        &mut self,
        data: &mut [Complex64],
        inverse: bool,
        forward: bool,
        mut f: F,
    ) {
        let fft = self.nx > 1;
        for (iy, row) in data.chunks_exact_mut(self.nx).enumerate() {
            if inverse && fft {
                self.inv_x.process_with_scratch(row, &mut self.scratch);
            }
            f(iy, row);
            if forward && fft {
                self.fwd_x.process_with_scratch(row, &mut self.scratch);
            }
        }
    }

    /// Row pass over the transposed layout: forward y transform, multiply by
    /// `factor` (same layout), inverse y transform.
    pub fn y_rows_multiply(&mut self, data: &mut [Complex64], factor: &[Complex64]) {
        let ny = self.ny;
        for (row, fac) in data.chunks_exact_mut(ny).zip(factor.chunks_exact(ny)) {
            if ny > 1 {
                self.fwd_y.process_with_scratch(row, &mut self.scratch);
            }
            row.iter_mut().zip(fac).for_each(|(z, p)| *z *= p);
            if ny > 1 {
                self.inv_y.process_with_scratch(row, &mut self.scratch);
            }
        }
    }

    /// Natural (x fastest) to transposed (y fastest) layout.
    pub fn to_transposed(&mut self, data: &mut Vec<Complex64>) {
        if self.nx > 1 && self.ny > 1 {
            transpose(data, &mut self.transposed, self.nx, self.ny);
            std::mem::swap(data, &mut self.transposed);
        }
    }

    /// Transposed back to natural layout.
    pub fn to_natural(&mut self, data: &mut Vec<Complex64>) {
        if self.nx > 1 && self.ny > 1 {
            transpose(data, &mut self.transposed, self.ny, self.nx);
            std::mem::swap(data, &mut self.transposed);
        }
    }

    fn run(&mut self, data: &mut [Complex64], forward: bool) {
        debug_assert_eq!(data.len(), self.nx * self.ny);
        let (px, py) = if forward {
            (&self.fwd_x, &self.fwd_y)
        } else {
            (&self.inv_x, &self.inv_y)
        };
        if self.nx > 1 {
            px.process_with_scratch(data, &mut self.scratch);
        }
        if self.ny > 1 {
            transpose(data, &mut self.transposed, self.nx, self.ny);
            py.process_with_scratch(&mut self.transposed, &mut self.scratch);
            transpose(&self.transposed, data, self.ny, self.nx);
        }
    }
}

/// `src` is `rows × cols` row-major; `dst` becomes `cols × rows`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], cols: usize, rows: usize) {
    // tiled, with contiguous writes innermost
    const B: usize = 16;
    for rb in (0..rows).step_by(B) {
        for cb in (0..cols).step_by(B) {
            for c in cb..(cb + B).min(cols) {
                for r in rb..(rb + B).min(rows) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

/// Angular wavenumbers in FFT order for `n` samples spaced `dx`.
pub fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let dk = 2.0 * PI / (n as f64 * dx);
    (0..n)
        .map(|i| {
            let j = if i <= n / 2 { i as i64 } else { i as i64 - n as i64 };
            j as f64 * dk
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_plane_wave() {
        let (nx, ny) = (16, 8);
        let dx = 0.3;
        let mut fft = Fft2::new(nx, ny);
        let kx = wavenumbers(nx, dx);
        let ky = wavenumbers(ny, dx);
        let mut data: Vec<Complex64> = (0..nx * ny)
            .map(|i| {
                let (ix, iy) = (i % nx, i / nx);
                Complex64::from_polar(1.0, kx[3] * ix as f64 * dx + ky[6] * iy as f64 * dx)
            })
            .collect();
        let orig = data.clone();
        fft.forward(&mut data);
        let peak = data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap()
            .0;
        assert_eq!(peak, 6 * nx + 3);
        assert!((data[peak].norm() - (nx * ny) as f64).abs() < 1e-9);
        fft.inverse(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn transposed_layout() {
        let (nx, ny) = (8, 4);
        let mut fft = Fft2::new(nx, ny);
        let data: Vec<Complex64> = (0..nx * ny)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64).cos()))
            .collect();
        let mut plain = data.clone();
        fft.forward(&mut plain);
        let mut t = data.clone();
        fft.forward_transposed(&mut t);
        for ix in 0..nx {
            for iy in 0..ny {
                assert!((t[ix * ny + iy] - plain[iy * nx + ix]).norm() < 1e-12);
            }
        }
        fft.inverse_transposed(&mut t);
        for (a, b) in t.iter().zip(&data) {
            assert!((a / (nx * ny) as f64 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn wavenumber_layout() {
        let k = wavenumbers(8, 1.0);
        let dk = 2.0 * PI / 8.0;
        assert_eq!(k[0], 0.0);
        assert!((k[4] - 4.0 * dk).abs() < 1e-15);
        assert!((k[5] + 3.0 * dk).abs() < 1e-15);
        assert_eq!(wavenumbers(1, 1.0), vec![0.0]);
    }
}
