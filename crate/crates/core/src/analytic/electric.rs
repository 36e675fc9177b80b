use num_complex::Complex64;

use super::{AnalyticSolution, Family, Point};
use crate::config::{DisplacementParams, SystemConfig};

/// Amplitude prefactor: `1/sqrt(L)` (unit norm on `[-L/2, L/2]`), or `1/L`
/// when `inverse_length_normalization` is set.
pub fn normalization(cfg: &SystemConfig) -> f64 {
    if cfg.inverse_length_normalization {
        1.0 / cfg.box_length
    } else {
        1.0 / cfg.box_length.sqrt()
    }
}

/// `exp(-i q^2 E^2 t^3 / (6 m hbar) + i qE t x / hbar)`, normalized on the box.
pub fn phi_electric(x: f64, t: f64, cfg: &SystemConfig) -> Complex64 {
    let hbar = cfg.hbar();
    let f = cfg.force();
    let phase = -f * f * t * t * t / (6.0 * cfg.mass() * hbar) + f * t * x / hbar;
    Complex64::from_polar(normalization(cfg), phase)
}

/// The eigenstate of `p_x - qEt` with displacement `dt`: `phi(x, t - dt)`.
pub fn psi_electric_shifted(x: f64, t: f64, dt: f64, cfg: &SystemConfig) -> Complex64 {
    phi_electric(x, t - dt, cfg)
}

pub fn electric_solution(cfg: &SystemConfig) -> AnalyticSolution {
    let c = cfg.clone();
    let g = cfg.clone();
    let kx = cfg.clone();
    AnalyticSolution::new(Family::Electric1dFundamental, "phi_electric", move |p: &Point| {
        phi_electric(p.x, p.t, &c)
    })
    .with_grad_x(move |p: &Point| Complex64::new(0.0, g.force() * p.t / g.hbar()) * phi_electric(p.x, p.t, &g))
    .with_wavenumber_x(move |t| kx.force() * t / kx.hbar())
}

pub fn electric_shifted_solution(dt: f64, cfg: &SystemConfig) -> AnalyticSolution {
    let c = cfg.clone();
    let g = cfg.clone();
    let kx = cfg.clone();
    AnalyticSolution::new(
        Family::Electric1dShifted,
        format!("psi_electric_shifted(dt={dt})"),
        move |p: &Point| psi_electric_shifted(p.x, p.t, dt, &c),
    )
    .with_shifts(DisplacementParams {
        dt,
        ..DisplacementParams::default()
    })
    .with_grad_x(move |p: &Point| {
        Complex64::new(0.0, g.force() * (p.t - dt) / g.hbar()) * psi_electric_shifted(p.x, p.t, dt, &g)
    })
    .with_wavenumber_x(move |t| kx.force() * (t - dt) / kx.hbar())
}
