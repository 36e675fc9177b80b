//! The displacement unitaries generated by the conserved operators, the
//! conjugation symmetry of `H - E`, and the resistance-quantization report.

mod quantization;
mod superposition;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::analytic::{AnalyticSolution, Point};
use crate::config::SystemConfig;
use crate::grid::{
    apply_hamiltonian_1d, apply_hamiltonian_yz, residual_norm, sample, sample_yz, shift_axis, shift_axis_yz,
    time_derivative, time_derivative_yz, Axis, Grid1D, Grid2D, WaveField, WaveField2D,
};
use crate::{Error, Result};

pub use quantization::{
    expected_invariance_phase, invariance_phase, invariance_phase_of, linspace, quantization_report, quantization_scan,
    von_klitzing, QuantizationReport, PHASE_TOLERANCE,
};
pub use superposition::{build_parallel_superposition, MAX_SUPERPOSITION_ORDER};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitaryKind {
    /// `exp(i qE t dx / hbar) psi(x - dx)`.
    Ux(f64),
    /// `exp(i m wc z dy / hbar) psi(y - dy)`.
    Uy(f64),
    /// `psi(z - dz)`.
    Uz(f64),
    /// `psi(t - dt)`.
    Ut(f64),
    /// `psi(y - dy)` without the compensating phase. Not a symmetry; used as a
    /// negative control.
    BareShiftY(f64),
}

impl UnitaryKind {
    pub fn displacement(self) -> f64 {
        match self {
            UnitaryKind::Ux(d)
            | UnitaryKind::Uy(d)
            | UnitaryKind::Uz(d)
            | UnitaryKind::Ut(d)
            | UnitaryKind::BareShiftY(d) => d,
        }
    }

    fn check(self) -> Result<()> {
        if !self.displacement().is_finite() {
            return Err(Error::domain(format!("{self} has a non-finite displacement")));
        }
        Ok(())
    }
}

impl fmt::Display for UnitaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitaryKind::Ux(d) => write!(f, "Ux({d})"),
            UnitaryKind::Uy(d) => write!(f, "Uy({d})"),
            UnitaryKind::Uz(d) => write!(f, "Uz({d})"),
            UnitaryKind::Ut(d) => write!(f, "Ut({d})"),
            UnitaryKind::BareShiftY(d) => write!(f, "shift_y({d})"),
        }
    }
}

/// Closed-form action on an analytic solution.
pub fn apply_unitary(kind: UnitaryKind, psi: &AnalyticSolution, cfg: &SystemConfig) -> Result<AnalyticSolution> {
    kind.check()?;
    let eval = psi.evaluator();
    let grad = psi.grad_evaluator();
    let kx = psi.wavenumber_fn();
    let label = format!("{kind} {}", psi.label);
    let mut shifts = psi.shifts;
    let out = match kind {
        UnitaryKind::Ux(d) => {
            shifts.dx += d;
            let rate = cfg.force() * d / cfg.hbar();
            let moved = move |p: &Point| Point { x: p.x - d, ..*p };
            let e = eval.clone();
            let g = grad.map(|g| {
                Arc::new(move |p: &Point| Complex64::from_polar(1.0, rate * p.t) * g(&moved(p)))
                    as crate::analytic::Evaluator
            });
            psi.remap(
                label,
                Arc::new(move |p: &Point| Complex64::from_polar(1.0, rate * p.t) * e(&moved(p))),
                g,
                kx,
            )
        }
        UnitaryKind::Uy(d) => {
            shifts.dy += d;
            let rate = cfg.mass() * cfg.cyclotron_frequency()? * d / cfg.hbar();
            let moved = move |p: &Point| Point { y: p.y - d, ..*p };
            let e = eval.clone();
            let g = grad.map(|g| {
                Arc::new(move |p: &Point| Complex64::from_polar(1.0, rate * p.z) * g(&moved(p)))
                    as crate::analytic::Evaluator
            });
            psi.remap(
                label,
                Arc::new(move |p: &Point| Complex64::from_polar(1.0, rate * p.z) * e(&moved(p))),
                g,
                kx,
            )
        }
        UnitaryKind::Uz(d) | UnitaryKind::BareShiftY(d) => {
            let along_z = matches!(kind, UnitaryKind::Uz(_));
            if along_z {
                shifts.dz += d;
            }
            let moved = move |p: &Point| {
                if along_z {
                    Point { z: p.z - d, ..*p }
                } else {
                    Point { y: p.y - d, ..*p }
                }
            };
            let e = eval.clone();
            let g = grad.map(|g| Arc::new(move |p: &Point| g(&moved(p))) as crate::analytic::Evaluator);
            psi.remap(label, Arc::new(move |p: &Point| e(&moved(p))), g, kx)
        }
        UnitaryKind::Ut(d) => {
            shifts.dt += d;
            let moved = move |p: &Point| Point { t: p.t - d, ..*p };
            let e = eval.clone();
            let g = grad.map(|g| Arc::new(move |p: &Point| g(&moved(p))) as crate::analytic::Evaluator);
            let k = kx.map(|k| Arc::new(move |t: f64| k(t - d)) as crate::analytic::WavenumberFn);
            psi.remap(label, Arc::new(move |p: &Point| e(&moved(p))), g, k)
        }
    };
    Ok(out.with_shifts(shifts))
}

fn no_time_shift() -> Error {
    Error::domain("time shift requires analytic time dependence")
}

/// Grid action on a sampled 1D field: band-limited shift on periodic axes,
/// whole-cell shift on Dirichlet axes.
pub fn apply_unitary_field(kind: UnitaryKind, f: &WaveField, cfg: &SystemConfig) -> Result<WaveField> {
    kind.check()?;
    match kind {
        UnitaryKind::Ux(d) => {
            let mut out = shift_axis(f, d)?;
            let phase = Complex64::from_polar(1.0, cfg.force() * f.t * d / cfg.hbar());
            out.data.iter_mut().for_each(|v| *v *= phase);
            Ok(out)
        }
        UnitaryKind::Ut(_) => Err(no_time_shift()),
        other => Err(Error::geometry(format!("{other} acts on the transverse plane"))),
    }
}

/// Grid action on a sampled `(y, z)` field.
pub fn apply_unitary_field_yz(kind: UnitaryKind, f: &WaveField2D, cfg: &SystemConfig) -> Result<WaveField2D> {
    kind.check()?;
    match kind {
        UnitaryKind::Uy(d) => {
            let mut out = shift_axis_yz(f, Axis::Y, d)?;
            let rate = cfg.mass() * cfg.cyclotron_frequency()? * d / cfg.hbar();
            let nz = f.grid.z.len();
            for (i, v) in out.data.iter_mut().enumerate() {
                *v *= Complex64::from_polar(1.0, rate * f.grid.z.coordinate(i % nz));
            }
            Ok(out)
        }
        UnitaryKind::Uz(d) => shift_axis_yz(f, Axis::Z, d),
        UnitaryKind::BareShiftY(d) => shift_axis_yz(f, Axis::Y, d),
        UnitaryKind::Ut(_) => Err(no_time_shift()),
        UnitaryKind::Ux(_) => Err(Error::geometry("Ux acts along x, not on the transverse plane")),
    }
}

/// Grid on which a conjugation check is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckGrid {
    /// Along `x`, with `H = p_x^2/2m - qEx`.
    X(Grid1D),
    /// The `(y, z)` plane at `x = 0`, with `H_yz`.
    Yz(Grid2D),
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `(H - i hbar d/dt) psi` at time `t` on a 1D grid.
fn wave_operator_1d(psi: &AnalyticSolution, grid: &Grid1D, t: f64, dt: f64, cfg: &SystemConfig) -> Result<WaveField> {
    let f = sample(psi, grid, t)?;
    let mut h = apply_hamiltonian_1d(&f, cfg)?;
    let d = time_derivative(psi, grid, t, dt, false)?;
    for (v, dv) in h.data.iter_mut().zip(&d.data) {
        *v -= I * cfg.hbar() * dv;
    }
    Ok(h)
}

fn wave_operator_yz(psi: &AnalyticSolution, grid: &Grid2D, t: f64, dt: f64, cfg: &SystemConfig) -> Result<WaveField2D> {
    let f = sample_yz(psi, grid, t)?;
    let mut h = apply_hamiltonian_yz(&f, cfg)?;
    let d = time_derivative_yz(psi, grid, t, dt, false)?;
    for (v, dv) in h.data.iter_mut().zip(&d.data) {
        *v -= I * cfg.hbar() * dv;
    }
    Ok(h)
}

/// `||(H - i hbar d/dt)(U psi) - U((H - i hbar d/dt) psi)|| / ||psi||` on the
/// grid at time `t`, with a central time stencil of half-width `dt`.
pub fn conjugation_symmetry_check(
    kind: UnitaryKind,
    psi: &AnalyticSolution,
    grid: &CheckGrid,
    t: f64,
    dt: f64,
    cfg: &SystemConfig,
) -> Result<f64> {
    let transformed = apply_unitary(kind, psi, cfg)?;
    match grid {
        CheckGrid::X(g) => {
            let lhs = wave_operator_1d(&transformed, g, t, dt, cfg)?;
            let rhs = match kind {
                UnitaryKind::Ut(d) => wave_operator_1d(psi, g, t - d, dt, cfg)?,
                _ => apply_unitary_field(kind, &wave_operator_1d(psi, g, t, dt, cfg)?, cfg)?,
            };
            let r: Vec<Complex64> = lhs.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
            let base = sample(psi, g, t)?;
            let idx: Vec<usize> = g.interior().collect();
            residual_norm(&r, &base.data, &idx)
        }
        CheckGrid::Yz(g) => {
            let lhs = wave_operator_yz(&transformed, g, t, dt, cfg)?;
            let rhs = match kind {
                UnitaryKind::Ut(d) => wave_operator_yz(psi, g, t - d, dt, cfg)?,
                _ => apply_unitary_field_yz(kind, &wave_operator_yz(psi, g, t, dt, cfg)?, cfg)?,
            };
            let r: Vec<Complex64> = lhs.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
            let base = sample_yz(psi, g, t)?;
            let zr = g.z.interior();
            let idx: Vec<usize> =
                g.y.interior()
                    .flat_map(|iy| zr.clone().map(move |iz| g.index(iy, iz)))
                    .collect();
            residual_norm(&r, &base.data, &idx)
        }
    }
}
