use num_complex::Complex64;

use super::{pairwise_sum, Grid1D, Grid2D};
use crate::analytic::{AnalyticSolution, Point};
use crate::{Error, Result};

/// Samples of a wavefunction on a 1D grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub grid: Grid1D,
    pub data: Vec<Complex64>,
    pub t: f64,
}

/// Samples on a `(y, z)` grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField2D {
    pub grid: Grid2D,
    pub data: Vec<Complex64>,
    pub t: f64,
}

fn check_samples(expected: usize, data: &[Complex64]) -> Result<()> {
    if data.len() != expected {
        return Err(Error::geometry(format!(
            "sample count {} does not match the grid ({expected})",
            data.len()
        )));
    }
    if data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::domain("wavefunction has non-finite samples"));
    }
    Ok(())
}

impl WaveField {
    pub fn new(grid: Grid1D, data: Vec<Complex64>, t: f64) -> Result<Self> {
        check_samples(grid.len(), &data)?;
        Ok(WaveField { grid, data, t })
    }

    pub fn from_fn(grid: Grid1D, t: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let data = grid.coordinates().into_iter().map(f).collect();
        Self::new(grid, data, t)
    }

    pub fn zeros_like(&self) -> Self {
        WaveField {
            grid: self.grid,
            data: vec![Complex64::new(0.0, 0.0); self.data.len()],
            t: self.t,
        }
    }

    /// Copy scaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = norm(self);
        if n == 0.0 {
            return Err(Error::domain("cannot normalize a zero field"));
        }
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v /= n);
        Ok(out)
    }
}

impl WaveField2D {
    pub fn new(grid: Grid2D, data: Vec<Complex64>, t: f64) -> Result<Self> {
        check_samples(grid.len(), &data)?;
        Ok(WaveField2D { grid, data, t })
    }

    pub fn from_fn(grid: Grid2D, t: f64, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let ys = grid.y.coordinates();
        let zs = grid.z.coordinates();
        let data = ys
            .iter()
            .flat_map(|&y| zs.iter().map(move |&z| (y, z)))
            .map(|(y, z)| f(y, z))
            .collect();
        Self::new(grid, data, t)
    }

    pub fn zeros_like(&self) -> Self {
        WaveField2D {
            grid: self.grid,
            data: vec![Complex64::new(0.0, 0.0); self.data.len()],
            t: self.t,
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = norm_yz(self);
        if n == 0.0 {
            return Err(Error::domain("cannot normalize a zero field"));
        }
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v /= n);
        Ok(out)
    }
}

fn check_nyquist(solution: &AnalyticSolution, grid: &Grid1D, t: f64) -> Result<()> {
    let Some(k) = solution.wavenumber_x(t) else {
        return Ok(());
    };
    let limit = grid.admissible_wavenumber();
    if k.abs() <= limit {
        return Ok(());
    }
    // The wavenumber is affine in t for every family that reports one.
    let k0 = solution.wavenumber_x(0.0).unwrap_or(0.0);
    let slope = solution.wavenumber_x(1.0).unwrap_or(0.0) - k0;
    let max_t = if slope == 0.0 {
        f64::INFINITY
    } else {
        (limit * slope.signum() - k0) / slope
    };
    Err(Error::Nyquist {
        t,
        wavenumber: k,
        limit,
        max_t,
    })
}

/// Evaluates `solution` at the cell centres at time `t`, refusing times where
/// its plane-wave factor would alias.
pub fn sample(solution: &AnalyticSolution, grid: &Grid1D, t: f64) -> Result<WaveField> {
    check_nyquist(solution, grid, t)?;
    WaveField::from_fn(*grid, t, |x| solution.evaluate(&Point::xt(x, t)))
}

/// Evaluates `solution` on the `(y, z)` grid at `x = 0`.
pub fn sample_yz(solution: &AnalyticSolution, grid: &Grid2D, t: f64) -> Result<WaveField2D> {
    WaveField2D::from_fn(*grid, t, |y, z| solution.evaluate(&Point::yzt(y, z, t)))
}

fn same_grid<G: PartialEq>(a: &G, b: &G) -> Result<()> {
    if a != b {
        return Err(Error::geometry("fields live on different grids"));
    }
    Ok(())
}

pub(crate) fn weighted_dot(a: &[Complex64], b: &[Complex64], weight: f64) -> Complex64 {
    let products: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x.conj() * y).collect();
    pairwise_sum(&products) * weight
}

/// `<a|b>` by the Riemann sum.
pub fn inner_product(a: &WaveField, b: &WaveField) -> Result<Complex64> {
    same_grid(&a.grid, &b.grid)?;
    Ok(weighted_dot(&a.data, &b.data, a.grid.spacing()))
}

pub fn inner_product_yz(a: &WaveField2D, b: &WaveField2D) -> Result<Complex64> {
    same_grid(&a.grid, &b.grid)?;
    Ok(weighted_dot(&a.data, &b.data, a.grid.cell_area()))
}

pub(crate) fn l2(data: &[Complex64], weight: f64) -> f64 {
    let sq: Vec<f64> = data.iter().map(|v| v.norm_sqr()).collect();
    (pairwise_sum(&sq) * weight).sqrt()
}

pub fn norm(f: &WaveField) -> f64 {
    l2(&f.data, f.grid.spacing())
}

pub fn norm_yz(f: &WaveField2D) -> f64 {
    l2(&f.data, f.grid.cell_area())
}
