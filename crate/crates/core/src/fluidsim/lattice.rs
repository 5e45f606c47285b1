//! Complex field on a periodic 2D lattice and its binary snapshot format.
//!
//! Storage is row-major with x fastest: element (ix, iy) lives at
//! `iy * nx + ix`. Coordinates are centered, x_i = (i − nx/2)·dx.
//!
//! Snapshot layout (little-endian): magic `PHFL`, version u32, nx u32,
//! ny u32, dx f64, time f64, then nx·ny interleaved (re, im) f64 pairs in
//! storage order.

use std::io::{self, Read, Write};

use num_complex::Complex64;

use super::SimError;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"PHFL";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField {
    nx: usize,
    ny: usize,
    dx: f64,
    pub time: f64,
    pub data: Vec<Complex64>,
}

impl LatticeField {
    /// Every site set to `value`. Sizes must be powers of two.
    pub fn uniform(nx: usize, ny: usize, dx: f64, value: Complex64) -> Result<Self, SimError> {
        if !nx.is_power_of_two() || !ny.is_power_of_two() {
            return Err(SimError::InvalidGrid(format!(
                "grid sizes must be powers of two, got {nx}x{ny}"
            )));
        }
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(SimError::InvalidGrid(format!("dx must be positive, got {dx}")));
        }
        Ok(Self {
            nx,
            ny,
            dx,
            time: 0.0,
            data: vec![value; nx * ny],
        })
    }

    /// Field sampled from `f(x, y)` at the lattice sites.
    pub fn from_fn<F: FnMut(f64, f64) -> Complex64>(
        nx: usize,
        ny: usize,
        dx: f64,
        mut f: F,
    ) -> Result<Self, SimError> {
        let mut field = Self::uniform(nx, ny, dx, Complex64::new(0.0, 0.0))?;
        for iy in 0..ny {
            let y = field.y(iy);
            for ix in 0..nx {
                field.data[iy * nx + ix] = f(field.x(ix), y);
            }
        }
        Ok(field)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn x(&self, ix: usize) -> f64 {
        (ix as f64 - (self.nx / 2) as f64) * self.dx
    }

    pub fn y(&self, iy: usize) -> f64 {
        (iy as f64 - (self.ny / 2) as f64) * self.dx
    }

    pub fn extent_x(&self) -> f64 {
        self.nx as f64 * self.dx
    }

    pub fn extent_y(&self) -> f64 {
        self.ny as f64 * self.dx
    }

    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.data[iy * self.nx + ix]
    }

    /// Σ|ψ|²·dx².
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx * self.dx
    }

    pub fn write_snapshot<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(SNAPSHOT_MAGIC)?;
        w.write_all(&SNAPSHOT_VERSION.to_le_bytes())?;
        w.write_all(&(self.nx as u32).to_le_bytes())?;
        w.write_all(&(self.ny as u32).to_le_bytes())?;
        w.write_all(&self.dx.to_le_bytes())?;
        w.write_all(&self.time.to_le_bytes())?;
        let mut buf = Vec::with_capacity(16 * self.data.len());
        for z in &self.data {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        w.write_all(&buf)
    }

    pub fn read_snapshot<R: Read>(mut r: R) -> Result<Self, SimError> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != SNAPSHOT_MAGIC {
            return Err(SimError::BadSnapshot("wrong magic".into()));
        }
        let mut u = [0u8; 4];
        let mut f = [0u8; 8];
        r.read_exact(&mut u)?;
        let version = u32::from_le_bytes(u);
        if version != SNAPSHOT_VERSION {
            return Err(SimError::BadSnapshot(format!("unsupported version {version}")));
        }
        r.read_exact(&mut u)?;
        let nx = u32::from_le_bytes(u) as usize;
        r.read_exact(&mut u)?;
        let ny = u32::from_le_bytes(u) as usize;
        r.read_exact(&mut f)?;
        let dx = f64::from_le_bytes(f);
        r.read_exact(&mut f)?;
        let time = f64::from_le_bytes(f);
        let mut field = Self::uniform(nx, ny, dx, Complex64::new(0.0, 0.0))?;
        field.time = time;
        let mut payload = vec![0u8; 16 * nx * ny];
        r.read_exact(&mut payload)?;
        for (z, chunk) in field.data.iter_mut().zip(payload.chunks_exact(16)) {
            z.re = f64::from_le_bytes(chunk[..8].try_into().unwrap());
            z.im = f64::from_le_bytes(chunk[8..].try_into().unwrap());
        }
        Ok(field)
    }
}
