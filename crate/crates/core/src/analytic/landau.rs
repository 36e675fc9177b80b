//! Landau-level states of the parallel-field system.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::electric::phi_electric;
use super::oscillator::{inverse_length, oscillator_eigenfunction, oscillator_frequency};
use super::{AnalyticSolution, Family, Point};
use crate::config::{DisplacementParams, Geometry, SystemConfig};
use crate::{Error, Result};

/// Which displaced-oscillator family to use for the transverse factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LandauFamily {
    /// Separable: plane wave in `z`, oscillator in `y` centred at `dy`.
    Y,
    /// Non-separable: oscillator in `z` centred at `dz` with a `y(z - dz)` phase.
    Z,
}

impl LandauFamily {
    pub fn family(self) -> Family {
        match self {
            LandauFamily::Y => Family::ParallelFamilyY,
            LandauFamily::Z => Family::ParallelFamilyZ,
        }
    }

    /// The displacement this family reads from `shifts`.
    pub fn shift(self, shifts: &DisplacementParams) -> f64 {
        match self {
            LandauFamily::Y => shifts.dy,
            LandauFamily::Z => shifts.dz,
        }
    }
}

impl fmt::Display for LandauFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LandauFamily::Y => "y",
            LandauFamily::Z => "z",
        })
    }
}

impl FromStr for LandauFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "y" | "family_y" | "parallel_family_y" => Ok(LandauFamily::Y),
            "z" | "family_z" | "parallel_family_z" => Ok(LandauFamily::Z),
            other => Err(Error::config(format!("unknown solution family `{other}`"))),
        }
    }
}

/// `hbar |wc| (n + 1/2)`.
pub fn landau_level(n: usize, cfg: &SystemConfig) -> Result<f64> {
    cfg.require_geometry(Geometry::ParallelEb)?;
    Ok(cfg.hbar() * cfg.cyclotron_frequency()?.abs() * (n as f64 + 0.5))
}

/// `exp(i m wc z dy / hbar) phi_n(sqrt(m wc/hbar) (y - dy))`.
pub fn phi2_family_y(y: f64, z: f64, dy: f64, n: usize, cfg: &SystemConfig) -> Result<Complex64> {
    let wc = cfg.cyclotron_frequency()?;
    let profile = oscillator_eigenfunction(n, inverse_length(cfg)? * (y - dy), cfg)?;
    let phase = cfg.mass() * wc * z * dy / cfg.hbar();
    Ok(Complex64::from_polar(1.0, phase) * profile)
}

/// `exp(i m wc y (z - dz) / hbar) phi_n(sqrt(m wc/hbar) (z - dz))`.
pub fn phi2_family_z(y: f64, z: f64, dz: f64, n: usize, cfg: &SystemConfig) -> Result<Complex64> {
    let wc = cfg.cyclotron_frequency()?;
    let profile = oscillator_eigenfunction(n, inverse_length(cfg)? * (z - dz), cfg)?;
    let phase = cfg.mass() * wc * y * (z - dz) / cfg.hbar();
    Ok(Complex64::from_polar(1.0, phase) * profile)
}

fn transverse(family: LandauFamily, y: f64, z: f64, shift: f64, n: usize, cfg: &SystemConfig) -> Result<Complex64> {
    match family {
        LandauFamily::Y => phi2_family_y(y, z, shift, n, cfg),
        LandauFamily::Z => phi2_family_z(y, z, shift, n, cfg),
    }
}

/// Checks everything the evaluators would otherwise fail on, once.
fn validate(n: usize, cfg: &SystemConfig) -> Result<f64> {
    oscillator_frequency(cfg)?;
    oscillator_eigenfunction(n, 0.0, cfg)?;
    landau_level(n, cfg)
}

fn shifts_for(family: LandauFamily, shift: f64) -> DisplacementParams {
    match family {
        LandauFamily::Y => DisplacementParams {
            dy: shift,
            ..DisplacementParams::default()
        },
        LandauFamily::Z => DisplacementParams {
            dz: shift,
            ..DisplacementParams::default()
        },
    }
}

/// Transverse state `phi_2(y, z, t) = exp(-i E_n t / hbar) * family(y, z)`.
pub fn landau_state(family: LandauFamily, n: usize, shift: f64, cfg: &SystemConfig) -> Result<AnalyticSolution> {
    let energy = validate(n, cfg)?;
    let c = cfg.clone();
    let hbar = cfg.hbar();
    Ok(AnalyticSolution::new(
        family.family(),
        format!("landau_{family}(n={n}, shift={shift})"),
        move |p: &Point| {
            transverse(family, p.y, p.z, shift, n, &c).unwrap_or_default()
                * Complex64::from_polar(1.0, -energy * p.t / hbar)
        },
    )
    .with_quantum_number(n as u32)
    .with_shifts(shifts_for(family, shift)))
}

/// `phi_electric(x, t) * phi_2(y, z, t)` at one point.
#[allow(clippy::too_many_arguments)]
pub fn full_parallel_solution(
    x: f64,
    y: f64,
    z: f64,
    t: f64,
    family: LandauFamily,
    n: usize,
    shifts: &DisplacementParams,
    cfg: &SystemConfig,
) -> Result<Complex64> {
    let energy = validate(n, cfg)?;
    let phi2 =
        transverse(family, y, z, family.shift(shifts), n, cfg)? * Complex64::from_polar(1.0, -energy * t / cfg.hbar());
    Ok(phi_electric(x, t, cfg) * phi2)
}

/// The full three-dimensional solution as an evaluable object.
pub fn parallel_solution(
    family: LandauFamily,
    n: usize,
    shifts: &DisplacementParams,
    cfg: &SystemConfig,
) -> Result<AnalyticSolution> {
    let shift = family.shift(shifts);
    let transverse_part = landau_state(family, n, shift, cfg)?;
    let t_eval = transverse_part.evaluator();
    let g_eval = transverse_part.evaluator();
    let (c, g, kx) = (cfg.clone(), cfg.clone(), cfg.clone());
    Ok(AnalyticSolution::new(
        family.family(),
        format!("phi_electric * landau_{family}(n={n}, shift={shift})"),
        move |p: &Point| phi_electric(p.x, p.t, &c) * t_eval(p),
    )
    .with_quantum_number(n as u32)
    .with_shifts(shifts_for(family, shift))
    .with_grad_x(move |p: &Point| {
        Complex64::new(0.0, g.force() * p.t / g.hbar()) * phi_electric(p.x, p.t, &g) * g_eval(p)
    })
    .with_wavenumber_x(move |t| kx.force() * t / kx.hbar()))
}
