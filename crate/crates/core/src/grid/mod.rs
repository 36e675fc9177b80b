//! Uniform grids, sampled wavefunctions and the discrete operators acting on
//! them.

mod fft;
mod field;
mod ops;

use std::f64::consts::PI;
use std::ops::Range;

use serde::Serialize;

use crate::config::SystemConfig;
use crate::{Error, Result};

pub(crate) use field::l2;
pub use field::{inner_product, inner_product_yz, norm, norm_yz, sample, sample_yz, WaveField, WaveField2D};
pub use ops::{
    apply_hamiltonian_1d, apply_hamiltonian_1d_with, apply_hamiltonian_yz, apply_hamiltonian_yz_with, apply_momentum,
    apply_momentum_yz, expectation, expectation_yz, schrodinger_residual, schrodinger_residual_yz, shift_axis,
    shift_axis_yz, time_derivative, time_derivative_yz, Observable,
};

pub(crate) use fft::{fft_lines, plans, wavenumbers};
pub(crate) use ops::{derivative_line, residual_norm};

pub const MIN_POINTS: usize = 16;

/// Cells excluded at each end of a Dirichlet axis when forming residuals and
/// expectations; matches the five-point stencil footprint.
pub const DIRICHLET_BAND: usize = 4;

/// Fraction of the grid Nyquist wavenumber a sampled plane wave may use.
pub const NYQUIST_SAFETY: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Dirichlet,
}

/// Spatial derivative discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Spectral,
    Fd4,
}

impl Scheme {
    /// Spectral on periodic axes, five-point differences otherwise.
    pub fn default_for(boundary: Boundary) -> Self {
        match boundary {
            Boundary::Periodic => Scheme::Spectral,
            Boundary::Dirichlet => Scheme::Fd4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Y,
    Z,
}

/// `n` cells of width `L/n` covering `[-L/2, L/2]`; samples sit at cell centres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    length: f64,
    n: usize,
    spacing: f64,
    boundary: Boundary,
}

impl Grid1D {
    pub fn new(length: f64, n: usize, boundary: Boundary) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::config(format!(
                "grid needs at least {MIN_POINTS} points, got {n}"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::config("grid length must be positive"));
        }
        Ok(Grid1D {
            length,
            n,
            spacing: length / n as f64,
            boundary,
        })
    }

    pub fn periodic(length: f64, n: usize) -> Result<Self> {
        Self::new(length, n, Boundary::Periodic)
    }

    pub fn dirichlet(length: f64, n: usize) -> Result<Self> {
        Self::new(length, n, Boundary::Dirichlet)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.length + (i as f64 + 0.5) * self.spacing
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coordinate(i)).collect()
    }

    /// Largest wavenumber a sampled plane wave may carry.
    pub fn admissible_wavenumber(&self) -> f64 {
        NYQUIST_SAFETY * PI / self.spacing
    }

    /// Indices used for residuals and expectations.
    pub fn interior(&self) -> Range<usize> {
        match self.boundary {
            Boundary::Periodic => 0..self.n,
            Boundary::Dirichlet => DIRICHLET_BAND..self.n - DIRICHLET_BAND,
        }
    }

    /// The nearest multiple of `2 pi / L` to `k`.
    pub fn snap_wavenumber(&self, k: f64) -> f64 {
        let unit = 2.0 * PI / self.length;
        (k / unit).round() * unit
    }
}

/// Product grid over `(y, z)`, stored row-major with `z` fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid2D {
    pub y: Grid1D,
    pub z: Grid1D,
}

impl Grid2D {
    pub fn new(y: Grid1D, z: Grid1D) -> Self {
        Grid2D { y, z }
    }

    pub fn len(&self) -> usize {
        self.y.len() * self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, iy: usize, iz: usize) -> usize {
        iy * self.z.len() + iz
    }

    pub fn cell_area(&self) -> f64 {
        self.y.spacing() * self.z.spacing()
    }

    pub fn axis(&self, axis: Axis) -> &Grid1D {
        match axis {
            Axis::Y => &self.y,
            Axis::Z => &self.z,
        }
    }
}

/// `t_k = 2 pi hbar k / (qE L)`: at these times the plane-wave factor of the
/// electric solution is periodic on a box of length `L`.
pub fn commensurate_time(k: i64, length: f64, cfg: &SystemConfig) -> Result<f64> {
    let f = cfg.force();
    if f == 0.0 {
        return Err(Error::domain("commensurate times need a nonzero force"));
    }
    Ok(2.0 * PI * cfg.hbar() * k as f64 / (f * length))
}

/// Pairwise (cascade) summation.
pub(crate) fn pairwise_sum<T>(values: &[T]) -> T
where
    T: Copy + Default + std::ops::Add<Output = T>,
{
    if values.len() <= 32 {
        return values.iter().fold(T::default(), |a, &b| a + b);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
