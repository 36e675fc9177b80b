//! Probability density and current, drift velocity and the Newton check.

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::{AnalyticSolution, Point};
use crate::config::{Geometry, SystemConfig};
use crate::grid::{derivative_line, Grid1D, Scheme, WaveField};
use crate::propagator::TrajectoryRecord;
use crate::{Error, Result};

/// Densities below this fraction of the peak density get no velocity.
pub const DENSITY_FLOOR: f64 = 1e-12;

/// Density, current and local velocity on a line of `x` samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurrentProfile {
    pub t: f64,
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub j: Vec<f64>,
    /// `J / rho`, absent where the density is below the floor.
    pub v: Vec<Option<f64>>,
}

impl CurrentProfile {
    fn build(t: f64, x: Vec<f64>, psi: &[Complex64], dpsi: &[Complex64], cfg: &SystemConfig) -> Result<Self> {
        let rho: Vec<f64> = psi.iter().map(|p| p.norm_sqr()).collect();
        let j: Vec<f64> = psi
            .iter()
            .zip(dpsi)
            .map(|(p, d)| cfg.hbar() / cfg.mass() * (p.conj() * d).im)
            .collect();
        let max = rho.iter().cloned().fold(0.0, f64::max);
        if max.is_nan() || max <= 0.0 {
            return Err(Error::domain("vanishing density"));
        }
        let v = rho
            .iter()
            .zip(&j)
            .map(|(&r, &c)| (r > DENSITY_FLOOR * max).then(|| c / r))
            .collect();
        Ok(CurrentProfile { t, x, rho, j, v })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Current of a closed-form 1D solution at the grid points, using its exact
/// `x` derivative.
pub fn probability_current_analytic(
    psi: &AnalyticSolution,
    grid: &Grid1D,
    t: f64,
    cfg: &SystemConfig,
) -> Result<CurrentProfile> {
    let x = grid.coordinates();
    let pts: Vec<Point> = x.iter().map(|&x| Point::xt(x, t)).collect();
    let values: Vec<Complex64> = pts.iter().map(|p| psi.evaluate(p)).collect();
    let grads = pts
        .iter()
        .map(|p| psi.grad_x(p))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::domain(format!("{} has no closed-form x derivative", psi.label)))?;
    CurrentProfile::build(t, x, &values, &grads, cfg)
}

/// Current of a grid field: spectral derivative on periodic grids, fourth-order
/// stencil otherwise.
pub fn probability_current_field(f: &WaveField, cfg: &SystemConfig) -> Result<CurrentProfile> {
    let d = derivative_line(&f.data, &f.grid, 1, Scheme::default_for(f.grid.boundary()))?;
    CurrentProfile::build(f.t, f.grid.coordinates(), &f.data, &d, cfg)
}

/// Classical drift velocity `qEt/m` of the 1D problem.
pub fn drift_velocity(t: f64, cfg: &SystemConfig) -> f64 {
    cfg.force() * t / cfg.mass()
}

/// Result of [`newton_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NewtonCheck {
    /// Largest `|m dv/dt - qE| / |qE|`, or `|m dv/dt|` when `qE = 0`.
    pub max_residual: f64,
    pub rows_used: usize,
}

/// Compares `m d<v>/dt` from central differences of the recorded `<p>` with
/// the force `qE`. First and last rows are only used as stencil ends.
pub fn newton_check(record: &TrajectoryRecord, cfg: &SystemConfig) -> Result<NewtonCheck> {
    if cfg.fields.geometry != Geometry::Electric1d {
        return Err(Error::geometry("Newton check needs the electric_1d geometry"));
    }
    if record.len() < 3 {
        return Err(Error::domain(format!(
            "Newton check needs at least 3 recorded rows, got {}",
            record.len()
        )));
    }
    let t = record.times();
    let p = record
        .column("px")
        .ok_or_else(|| Error::domain("trajectory has no px column"))?;
    let force = cfg.force();
    let scale = if force == 0.0 { 1.0 } else { force.abs() };
    let max_residual = (1..t.len() - 1)
        .map(|k| {
            // m dv/dt = dp/dt.
            let rate = (p[k + 1] - p[k - 1]) / (t[k + 1] - t[k - 1]);
            (rate - force).abs() / scale
        })
        .fold(0.0, f64::max);
    Ok(NewtonCheck {
        max_residual,
        rows_used: t.len() - 2,
    })
}

/// Largest `|d rho/dt + dJ/dx|` between two fields one step apart. The
/// current is the bond current of the three-point Laplacian evaluated on the
/// time-averaged field, which is the discrete continuity law Crank–Nicolson
/// obeys exactly.
pub fn continuity_residual(before: &WaveField, after: &WaveField, cfg: &SystemConfig) -> Result<f64> {
    if before.grid != after.grid {
        return Err(Error::geometry("continuity check needs both fields on the same grid"));
    }
    let dt = after.t - before.t;
    if dt == 0.0 {
        return Err(Error::domain("continuity check needs distinct times"));
    }
    let h = before.grid.spacing();
    let mid: Vec<Complex64> = before
        .data
        .iter()
        .zip(&after.data)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let n = mid.len();
    // bond[i] is the current between cells i and i+1; outside the grid it is zero.
    let bond: Vec<f64> = (0..n - 1)
        .map(|i| cfg.hbar() / (cfg.mass() * h) * (mid[i].conj() * mid[i + 1]).im)
        .collect();
    let bond_at = |i: isize| {
        if i < 0 || i as usize >= n - 1 {
            0.0
        } else {
            bond[i as usize]
        }
    };
    Ok((0..n)
        .map(|i| {
            let drho = (after.data[i].norm_sqr() - before.data[i].norm_sqr()) / dt;
            let div = (bond_at(i as isize) - bond_at(i as isize - 1)) / h;
            (drho + div).abs()
        })
        .fold(0.0, f64::max))
}
