//! Voxel occupancy grids, their exact Euclidean signed distance transform
//! and the `VOX` text/byte map format.
//!
//! Format: one header line `VOX <nx> <ny> <nz> <resolution> <ox> <oy> <oz>`
//! followed by `nx*ny*nz` bytes, ASCII `0` for free and `1` for occupied, x
//! varying fastest, then y, then z. `origin` is the minimum corner of the
//! grid; cell `(i, j, k)` has its centre at `origin + (i + 0.5) * resolution`.

use std::io::{Read, Write};

use crate::{Error, Point, Result};

const FAR: f64 = 1e30;

#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    pub origin: Point,
    pub resolution: f64,
    pub dims: [usize; 3],
    pub occupancy: Vec<bool>,
    /// Signed distance at every cell centre in meters, negative inside.
    pub esdf: Vec<f64>,
}

impl VoxelGrid {
    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> Point {
        let r = self.resolution;
        self.origin
            + nalgebra::Vector3::new(
                (i as f64 + 0.5) * r,
                (j as f64 + 0.5) * r,
                (k as f64 + 0.5) * r,
            )
    }

    /// Minimum and maximum corners of the lattice.
    pub fn extent(&self) -> (Point, Point) {
        let r = self.resolution;
        let size = nalgebra::Vector3::new(
            self.dims[0] as f64 * r,
            self.dims[1] as f64 * r,
            self.dims[2] as f64 * r,
        );
        (self.origin, self.origin + size)
    }

    /// Value reported when there is nothing to measure against.
    pub fn cap(&self) -> f64 {
        let [x, y, z] = self.dims.map(|d| d as f64);
        (x * x + y * y + z * z).sqrt() * self.resolution
    }

    /// Trilinear interpolation of the distance lattice; queries outside the
    /// lattice are clamped to the border cells.
    pub fn interpolate(&self, q: &Point) -> f64 {
        let mut base = [0usize; 3];
        let mut frac = [0.0f64; 3];
        for a in 0..3 {
            let g = (q[a] - self.origin[a]) / self.resolution - 0.5;
            let hi = (self.dims[a] - 1) as f64;
            let g = g.clamp(0.0, hi);
            let i0 = (g.floor() as usize).min(self.dims[a].saturating_sub(2));
            base[a] = i0;
            frac[a] = if self.dims[a] == 1 {
                0.0
            } else {
                g - i0 as f64
            };
        }
        let mut acc = 0.0;
        for corner in 0..8usize {
            let mut w = 1.0;
            let mut idx = [0usize; 3];
            for a in 0..3 {
                let bit = (corner >> a) & 1;
                let f = frac[a];
                w *= if bit == 1 { f } else { 1.0 - f };
                idx[a] = (base[a] + bit).min(self.dims[a] - 1);
            }
            if w != 0.0 {
                acc += w * self.esdf[self.index(idx[0], idx[1], idx[2])];
            }
        }
        acc
    }

    pub fn write_vox<W: Write>(&self, mut w: W) -> Result<()> {
        let [nx, ny, nz] = self.dims;
        let o = self.origin;
        writeln!(
            w,
            "VOX {nx} {ny} {nz} {} {} {} {}",
            self.resolution, o.x, o.y, o.z
        )?;
        let bytes: Vec<u8> = self
            .occupancy
            .iter()
            .map(|&occ| if occ { b'1' } else { b'0' })
            .collect();
        w.write_all(&bytes)?;
        Ok(())
    }

    pub fn read_vox<R: Read>(mut r: R) -> Result<VoxelGrid> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        let nl = buf
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::VoxelFormat("missing header line".into()))?;
        let header = std::str::from_utf8(&buf[..nl])
            .map_err(|_| Error::VoxelFormat("header is not UTF-8".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 8 || fields[0] != "VOX" {
            return Err(Error::VoxelFormat(format!("bad header {header:?}")));
        }
        let dim = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(d) if d > 0 => Ok(d),
                _ => Err(Error::VoxelFormat(format!("bad dimension {s:?}"))),
            }
        };
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::VoxelFormat(format!("bad number {s:?}")))
        };
        let dims = [dim(fields[1])?, dim(fields[2])?, dim(fields[3])?];
        let resolution = num(fields[4])?;
        if !(resolution > 0.0) {
            return Err(Error::VoxelFormat("resolution must be positive".into()));
        }
        let origin = Point::new(num(fields[5])?, num(fields[6])?, num(fields[7])?);
        let count = dims[0] * dims[1] * dims[2];
        let body = &buf[nl + 1..];
        if body.len() < count {
            return Err(Error::VoxelFormat(format!(
                "expected {count} cells, found {}",
                body.len()
            )));
        }
        if !body[count..].iter().all(u8::is_ascii_whitespace) {
            return Err(Error::VoxelFormat("trailing data after cells".into()));
        }
        let occupancy = body[..count]
            .iter()
            .map(|&b| match b {
                b'0' => Ok(false),
                b'1' => Ok(true),
                other => Err(Error::VoxelFormat(format!(
                    "cell byte {other:#04x} is neither '0' nor '1'"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        build_esdf(dims, occupancy, resolution, origin)
    }
}

/// Exact signed Euclidean distance transform of an occupancy lattice.
///
/// Free cells hold the distance to the nearest occupied cell centre, occupied
/// cells the negated distance to the nearest free cell centre. Grids without
/// any occupied (or free) cell report the cap, the lattice diagonal.
pub fn build_esdf(
    dims: [usize; 3],
    occupancy: Vec<bool>,
    resolution: f64,
    origin: Point,
) -> Result<VoxelGrid> {
    if dims.iter().any(|&d| d == 0) {
        return Err(Error::VoxelFormat(format!(
            "dims {dims:?} must be positive"
        )));
    }
    if occupancy.len() != dims[0] * dims[1] * dims[2] {
        return Err(Error::VoxelFormat(
            "occupancy size does not match dims".into(),
        ));
    }
    if !(resolution > 0.0) {
        return Err(Error::VoxelFormat("resolution must be positive".into()));
    }
    let mut grid = VoxelGrid {
        origin,
        resolution,
        dims,
        occupancy,
        esdf: Vec::new(),
    };
    let cap = grid.cap();
    let to_occupied = squared_edt(dims, &grid.occupancy, true);
    let to_free = squared_edt(dims, &grid.occupancy, false);
    grid.esdf = grid
        .occupancy
        .iter()
        .enumerate()
        .map(|(c, &occ)| {
            let (d2, sign) = if occ {
                (to_free[c], -1.0)
            } else {
                (to_occupied[c], 1.0)
            };
            if d2 >= FAR {
                sign * cap
            } else {
                sign * d2.sqrt() * resolution
            }
        })
        .collect();
    Ok(grid)
}

/// Squared distance in cell units to the nearest cell whose occupancy equals
/// `target`, separable over the three axes.
fn squared_edt(dims: [usize; 3], occupancy: &[bool], target: bool) -> Vec<f64> {
    let mut d: Vec<f64> = occupancy
        .iter()
        .map(|&o| if o == target { 0.0 } else { FAR })
        .collect();
    let [nx, ny, nz] = dims;
    let stride = [1, nx, nx * ny];
    let max_n = nx.max(ny).max(nz);
    let mut f = vec![0.0; max_n];
    let mut out = vec![0.0; max_n];
    let mut v = vec![0usize; max_n];
    let mut z = vec![0.0; max_n + 1];
    for axis in 0..3 {
        let n = dims[axis];
        let (o1, o2) = match axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for a in 0..dims[o1] {
            for b in 0..dims[o2] {
                let start = a * stride[o1] + b * stride[o2];
                for i in 0..n {
                    f[i] = d[start + i * stride[axis]];
                }
                lower_envelope(&f[..n], &mut out[..n], &mut v, &mut z);
                for i in 0..n {
                    d[start + i * stride[axis]] = out[i];
                }
            }
        }
    }
    d
}

/// One-dimensional squared distance transform by the lower envelope of
/// parabolas rooted at every sample.
fn lower_envelope(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    if f.iter().all(|&x| x >= FAR) {
        out.copy_from_slice(f);
        return;
    }
    let mut k = 0usize;
    // first finite parabola anchors the envelope
    let first = f.iter().position(|&x| x < FAR).unwrap();
    v[0] = first;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in first + 1..n {
        if f[q] >= FAR {
            continue;
        }
        loop {
            let p = v[k];
            let s =
                ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                // z[0] is -inf, so k never underflows
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        *o = dq * dq + f[p];
    }
}
