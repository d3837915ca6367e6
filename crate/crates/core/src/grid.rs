//! Uniform periodic grids on `[-L, L)^N` and sampled fields.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodicGrid {
    pub dim: usize,
    pub halfwidth: f64,
    /// Points per dimension; even.
    pub points: usize,
}

impl PeriodicGrid {
    pub fn new(dim: usize, halfwidth: f64, points: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(halfwidth > 0.0 && halfwidth.is_finite()) {
            return Err(Error::Domain(format!("halfwidth must be positive, got {halfwidth}")));
        }
        if points < 2 || points % 2 != 0 {
            return Err(Error::Domain(format!("points per dimension must be even and ≥ 2, got {points}")));
        }
        Ok(Self { dim, halfwidth, points })
    }

    /// Box `L = 12/√k` with 256, 128 or 64 points per dimension.
    pub fn default_for(dim: usize, k: f64) -> Result<Self> {
        let points = match dim {
            1 => 256,
            2 => 128,
            _ => 64,
        };
        Self::new(dim, 12.0 / k.sqrt(), points)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.halfwidth / self.points as f64
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell volume `h^N`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Coordinate of index `j` along an axis.
    pub fn coord(&self, j: usize) -> f64 {
        -self.halfwidth + j as f64 * self.spacing()
    }

    /// Angular frequency of FFT index `j` along an axis: `(π/L)·n`, `n ∈ [-M/2, M/2)`.
    pub fn frequency(&self, j: usize) -> f64 {
        let m = self.points as i64;
        let n = if (j as i64) < m / 2 { j as i64 } else { j as i64 - m };
        std::f64::consts::PI / self.halfwidth * n as f64
    }

    /// Multi-index of a flat (row-major) index.
    pub fn unravel(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for d in (0..self.dim).rev() {
            idx[d] = flat % self.points;
            flat /= self.points;
        }
        idx
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        let idx = self.unravel(flat);
        (0..self.dim).map(|d| self.coord(idx[d])).collect()
    }

    /// `|ξ|²` at every flat index.
    pub fn frequency_square(&self) -> Vec<f64> {
        (0..self.len())
            .map(|flat| {
                let idx = self.unravel(flat);
                (0..self.dim).map(|d| self.frequency(idx[d]).powi(2)).sum()
            })
            .collect()
    }
}

/// Real samples on a [`PeriodicGrid`], row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub grid: PeriodicGrid,
    pub data: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self { grid, data: vec![0.0; grid.len()] }
    }

    pub fn from_fn<F: Fn(&[f64]) -> f64>(grid: PeriodicGrid, f: F) -> Self {
        let data = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        Self { grid, data }
    }

    pub fn from_radial<F: Fn(f64) -> f64>(grid: PeriodicGrid, f: F) -> Self {
        Self::from_fn(grid, |x| f(x.iter().map(|v| v * v).sum::<f64>().sqrt()))
    }

    pub fn from_data(grid: PeriodicGrid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::Shape(format!("{} samples for a grid of {}", data.len(), grid.len())));
        }
        Ok(Self { grid, data })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Discrete `L²` inner product `h^N Σ u v`.
    pub fn inner(&self, other: &Field) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.grid.cell_volume() * self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum::<f64>())
    }

    pub fn check_same(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape("fields live on different grids".into()));
        }
        Ok(())
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Field { grid: self.grid, data })
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Field {
        Field { grid: self.grid, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    /// Value at the grid point nearest the origin.
    pub fn at_center(&self) -> f64 {
        let c = self.grid.points / 2;
        let mut flat = 0;
        for _ in 0..self.grid.dim {
            flat = flat * self.grid.points + c;
        }
        self.data[flat]
    }
}

/// In-place N-dimensional FFT; the inverse is normalized by `1/M^N`.
pub fn fft_nd(grid: &PeriodicGrid, data: &mut [Complex64], inverse: bool) {
    let m = grid.points;
    let direction = if inverse { FftDirection::Inverse } else { FftDirection::Forward };
    let fft = FftPlanner::new().plan_fft(m, direction);
    let mut line = vec![Complex64::new(0.0, 0.0); m];
    for axis in 0..grid.dim {
        let stride = m.pow((grid.dim - 1 - axis) as u32);
        let total = data.len();
        for start in 0..total {
            // visit each line once: its first element has axis index 0
            if (start / stride) % m != 0 {
                continue;
            }
            for (j, v) in line.iter_mut().enumerate() {
                *v = data[start + j * stride];
            }
            fft.process(&mut line);
            for (j, v) in line.iter().enumerate() {
                data[start + j * stride] = *v;
            }
        }
    }
    if inverse {
        let scale = 1.0 / data.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Multiply the spectrum of `field` by `symbol(|ξ|²)` and transform back.
pub fn apply_radial_symbol<S: Fn(f64) -> Complex64>(field: &[Complex64], grid: &PeriodicGrid, symbol: S) -> Vec<Complex64> {
    let mut buf = field.to_vec();
    fft_nd(grid, &mut buf, false);
    for (v, xi2) in buf.iter_mut().zip(grid.frequency_square()) {
        *v *= symbol(xi2);
    }
    fft_nd(grid, &mut buf, true);
    buf
}

pub fn to_complex(field: &Field) -> Vec<Complex64> {
    field.data.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(PeriodicGrid::new(4, 1.0, 8).is_err());
        assert!(PeriodicGrid::new(2, 1.0, 7).is_err());
        assert!(PeriodicGrid::new(2, -1.0, 8).is_err());
    }

    #[test]
    fn frequencies_cover_symmetric_band() {
        let g = PeriodicGrid::new(1, std::f64::consts::PI, 8).unwrap();
        let mut n: Vec<i64> = (0..8).map(|j| g.frequency(j).round() as i64).collect();
        n.sort();
        assert_eq!(n, vec![-4, -3, -2, -1, 0, 1, 2, 3]);
        assert_eq!(g.coord(0), -std::f64::consts::PI);
    }

    #[test]
    fn fft_round_trip() {
        let g = PeriodicGrid::new(3, 2.0, 8).unwrap();
        let f = Field::from_fn(g, |x| (x[0] + 2.0 * x[1] * x[2]).sin());
        let mut buf = to_complex(&f);
        fft_nd(&g, &mut buf, false);
        fft_nd(&g, &mut buf, true);
        for (a, b) in buf.iter().zip(&f.data) {
            assert!((a.re - b).abs() < 1e-13 && a.im.abs() < 1e-13);
        }
    }

    #[test]
    fn center_is_origin() {
        let g = PeriodicGrid::new(2, 3.0, 16).unwrap();
        let f = Field::from_radial(g, |r| r);
        assert_eq!(f.at_center(), 0.0);
    }
}
