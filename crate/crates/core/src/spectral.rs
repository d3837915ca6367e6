//! Periodic-box solvers for `Δ²u + k²u = f` and `-Δu + u = h` by symbol division.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{apply_radial_symbol, to_complex, Field, PeriodicGrid};

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("k must be positive and finite, got {k}")))
    }
}

fn check_grid(grid: &PeriodicGrid, f: &Field) -> Result<()> {
    if f.grid != *grid || f.data.len() != grid.len() {
        return Err(Error::Shape("field does not match grid".into()));
    }
    Ok(())
}

fn real_part(grid: PeriodicGrid, v: Vec<Complex64>) -> Field {
    Field { grid, data: v.into_iter().map(|c| c.re).collect() }
}

/// `û = f̂ / (|ξ|⁴ + k²)`.
pub fn solve_biharmonic_periodic(grid: &PeriodicGrid, f: &Field, k: f64) -> Result<Field> {
    check_k(k)?;
    check_grid(grid, f)?;
    let u = apply_radial_symbol(&to_complex(f), grid, |xi2| Complex64::new(1.0 / (xi2 * xi2 + k * k), 0.0));
    Ok(real_part(*grid, u))
}

/// `û = ĥ / (1 + |ξ|²)`.
pub fn solve_mod_helmholtz_periodic(grid: &PeriodicGrid, h: &Field) -> Result<Field> {
    check_grid(grid, h)?;
    let u = apply_radial_symbol(&to_complex(h), grid, |xi2| Complex64::new(1.0 / (1.0 + xi2), 0.0));
    Ok(real_part(*grid, u))
}

/// Solve `(-Δ - ik)v = f`, then `(-Δ + ik)u = v`.
pub fn solve_biharmonic_two_step(grid: &PeriodicGrid, f: &Field, k: f64) -> Result<Field> {
    check_k(k)?;
    check_grid(grid, f)?;
    let ik = Complex64::new(0.0, k);
    let v = apply_radial_symbol(&to_complex(f), grid, |xi2| 1.0 / (xi2 - ik));
    let u = apply_radial_symbol(&v, grid, |xi2| 1.0 / (xi2 + ik));
    Ok(real_part(*grid, u))
}

/// Spectral Laplacian.
pub fn laplacian_periodic(grid: &PeriodicGrid, u: &Field) -> Result<Field> {
    check_grid(grid, u)?;
    let v = apply_radial_symbol(&to_complex(u), grid, |xi2| Complex64::new(-xi2, 0.0));
    Ok(real_part(*grid, v))
}

/// `‖Δ²u + k²u - f‖_∞` by spectral differentiation.
pub fn residual_biharmonic(grid: &PeriodicGrid, u: &Field, f: &Field, k: f64) -> Result<f64> {
    check_grid(grid, u)?;
    check_grid(grid, f)?;
    let lu = apply_radial_symbol(&to_complex(u), grid, |xi2| Complex64::new(xi2 * xi2 + k * k, 0.0));
    Ok(lu.iter().zip(&f.data).fold(0.0f64, |m, (a, b)| m.max((a.re - b).abs())))
}

/// Minimum of `|ξ|⁴ + k²` over the grid frequencies.
pub fn symbol_minimum(grid: &PeriodicGrid, k: f64) -> f64 {
    grid.frequency_square().into_iter().map(|xi2| xi2 * xi2 + k * k).fold(f64::INFINITY, f64::min)
}

/// Largest relative defect of `(|ξ|² + ik)(|ξ|² - ik) = |ξ|⁴ + k²` over the grid.
pub fn factorization_defect(grid: &PeriodicGrid, k: f64) -> f64 {
    let ik = Complex64::new(0.0, k);
    grid.frequency_square()
        .into_iter()
        .map(|xi2| {
            let full = xi2 * xi2 + k * k;
            ((xi2 + ik) * (xi2 - ik) - full).norm() / full
        })
        .fold(0.0, f64::max)
}
