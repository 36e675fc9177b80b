use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::{apply_unitary, UnitaryKind};
use crate::analytic::{electric_shifted_solution, AnalyticSolution, Point};
use crate::config::{EigenSign, SystemConfig};
use crate::{Error, Result};

/// Constancy tolerance for the measured invariance phase.
pub const PHASE_TOLERANCE: f64 = 1e-8;

/// Samples below this fraction of the peak modulus are ignored when
/// extracting a global phase.
const AMPLITUDE_FLOOR: f64 = 1e-6;

/// Resistance bookkeeping for one pair of displacements `(dx, dt)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizationReport {
    pub dx: f64,
    pub dt: f64,
    pub electric: f64,
    pub charge: f64,
    /// `qE dx dt / (2 pi hbar)`.
    pub n_real: f64,
    pub n: i64,
    pub is_quantized: bool,
    pub tolerance: f64,
    /// `E dx`.
    pub voltage: f64,
    /// `q / dt`.
    pub current: f64,
    /// `V / I`.
    pub resistance: f64,
    /// `R q^2 / h`.
    pub resistance_in_klitzing: f64,
    /// Distance in ulps between `V/I` and `(h/q^2) n_real`.
    pub crosscheck_ulps: u64,
    /// Measured `(U_x psi)/psi` on the shifted solution.
    pub phase_re: f64,
    pub phase_im: f64,
    /// `|phase - 1|`.
    pub phase_deviation: f64,
    pub eigen_sign: EigenSign,
    /// Eigenvalue of `p_x - qEt` under the sign convention `dt = s lambda / qE`.
    pub eigenvalue: f64,
}

/// The resistance quantum `h/q^2` in the configured units.
pub fn von_klitzing(cfg: &SystemConfig) -> f64 {
    cfg.units.h / (cfg.charge() * cfg.charge())
}

/// `exp(i qE dx dt / hbar)`.
pub fn expected_invariance_phase(dx: f64, dt: f64, cfg: &SystemConfig) -> Complex64 {
    Complex64::from_polar(1.0, cfg.force() * dx * dt / cfg.hbar())
}

/// The global phase `(U_x psi)/psi`, taken at the largest sample and checked
/// to be the same at every sample above the amplitude floor.
pub fn invariance_phase_of(psi: &AnalyticSolution, dx: f64, points: &[Point], cfg: &SystemConfig) -> Result<Complex64> {
    let shifted = apply_unitary(UnitaryKind::Ux(dx), psi, cfg)?;
    let values: Vec<(Complex64, Complex64)> = points.iter().map(|p| (psi.evaluate(p), shifted.evaluate(p))).collect();
    let peak = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.norm().total_cmp(&b.1 .0.norm()))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::domain("no sample points"))?;
    let max = values[peak].0.norm();
    if max == 0.0 {
        return Err(Error::domain("state vanishes at every sample point"));
    }
    let phase = values[peak].1 / values[peak].0;
    for (v, u) in &values {
        if v.norm() < AMPLITUDE_FLOOR * max {
            continue;
        }
        if (u / v - phase).norm() > PHASE_TOLERANCE {
            return Err(Error::domain("state is not a Ux eigenvector"));
        }
    }
    Ok(phase)
}

// Sample times are in units of hbar/(qE L) so the phases stay O(1) in any
// unit system.
fn electric_points(cfg: &SystemConfig) -> Vec<Point> {
    let l = cfg.box_length;
    let tau = match (cfg.hbar() / (cfg.force() * l)).abs() {
        t if t.is_finite() => t,
        _ => 1.0,
    };
    let xs = (0..64).map(move |i| -0.5 * l + (i as f64 + 0.5) * l / 64.0);
    xs.flat_map(|x| [0.0, 3.7, 11.0, 23.0].into_iter().map(move |c| Point::xt(x, c * tau)))
        .collect()
}

/// Measured invariance phase of the time-shifted electric solution.
pub fn invariance_phase(dx: f64, dt: f64, cfg: &SystemConfig) -> Result<Complex64> {
    invariance_phase_of(&electric_shifted_solution(dt, cfg), dx, &electric_points(cfg), cfg)
}

fn ulps(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    if a.signum() != b.signum() {
        return u64::MAX;
    }
    (a.abs().to_bits() as i64 - b.abs().to_bits() as i64).unsigned_abs()
}

pub fn quantization_report(dx: f64, dt: f64, cfg: &SystemConfig, tol: f64) -> Result<QuantizationReport> {
    if dt == 0.0 {
        return Err(Error::domain("undefined current: dt = 0"));
    }
    if !dx.is_finite() || !dt.is_finite() {
        return Err(Error::domain("displacements must be finite"));
    }
    let (q, e) = (cfg.charge(), cfg.electric());
    let n_real = q * e * dx * dt / (TAU * cfg.hbar());
    let n = n_real.round();
    let tolerance = tol * (n_real.abs() + 1.0);
    let voltage = e * dx;
    let current = q / dt;
    let resistance = voltage / current;
    let crosscheck = von_klitzing(cfg) * n_real;
    let phase = invariance_phase(dx, dt, cfg)?;
    let sign = cfg.displacements.eigen_sign;
    Ok(QuantizationReport {
        dx,
        dt,
        electric: e,
        charge: q,
        n_real,
        n: n as i64,
        is_quantized: (n_real - n).abs() <= tolerance,
        tolerance,
        voltage,
        current,
        resistance,
        resistance_in_klitzing: resistance / von_klitzing(cfg),
        crosscheck_ulps: ulps(resistance, crosscheck),
        phase_re: phase.re,
        phase_im: phase.im,
        phase_deviation: (phase - 1.0).norm(),
        eigen_sign: sign,
        eigenvalue: sign.factor() * q * e * dt,
    })
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..steps)
            .map(|k| min + (max - min) * k as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// One report per `dt`; rows that cannot be computed keep their error.
pub fn quantization_scan(dx: f64, dts: &[f64], cfg: &SystemConfig, tol: f64) -> Vec<Result<QuantizationReport>> {
    dts.iter().map(|&dt| quantization_report(dx, dt, cfg, tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::UnitKind;
    use crate::constants::{VON_KLITZING_TABULATED, VON_KLITZING_TABULATED_PRECISION};
    use std::f64::consts::PI;

    #[test]
    fn phase_examples() {
        let cfg = SystemConfig::natural();
        assert!((invariance_phase(1.3, 0.0, &cfg).unwrap() - 1.0).norm() < 1e-12);
        let one = invariance_phase(2.0 * PI, 1.0, &cfg).unwrap();
        assert!((one - 1.0).norm() < 1e-8);
        let minus = invariance_phase(PI, 1.0, &cfg).unwrap();
        assert!((minus + 1.0).norm() < 1e-8);
        let generic = invariance_phase(0.7, 0.3, &cfg).unwrap();
        assert!((generic - expected_invariance_phase(0.7, 0.3, &cfg)).norm() < 1e-10);
    }

    #[test]
    fn non_eigenvector_is_rejected() {
        let cfg = SystemConfig::natural();
        let psi = AnalyticSolution::custom("gauss", |p: &Point| (-p.x * p.x).exp().into());
        let pts: Vec<Point> = (0..20).map(|i| Point::xt(i as f64 * 0.1 - 1.0, 0.5)).collect();
        let err = invariance_phase_of(&psi, 0.3, &pts, &cfg).unwrap_err();
        assert!(err.to_string().contains("not a Ux eigenvector"));
    }

    #[test]
    fn report_at_unit_quantum() {
        let cfg = SystemConfig::natural();
        let r = quantization_report(2.0 * PI, 1.0, &cfg, 1e-8).unwrap();
        assert!((r.n_real - 1.0).abs() < 1e-15);
        assert!(r.is_quantized);
        assert_eq!(r.n, 1);
        assert!(r.crosscheck_ulps <= 4);
        assert!((r.resistance - von_klitzing(&cfg)).abs() < 1e-12);
        let r3 = quantization_report(2.0 * PI, 3.0, &cfg, 1e-8).unwrap();
        assert!((r3.resistance - 3.0 * r.resistance).abs() < 1e-12);
        assert_eq!(r3.n, 3);
        assert!(quantization_report(1.0, 0.0, &cfg, 1e-8).is_err());
    }

    #[test]
    fn resistance_sign_follows_n() {
        let cfg = SystemConfig::natural();
        for dt in [-2.0, -0.4, 0.4, 2.0] {
            let r = quantization_report(1.0, dt, &cfg, 1e-8).unwrap();
            assert_eq!(r.resistance >= 0.0, r.n_real >= 0.0);
        }
    }

    #[test]
    fn si_klitzing_matches_table() {
        let cfg = SystemConfig::natural().with_units(UnitKind::Si);
        let mut cfg = cfg;
        cfg.particle.charge = cfg.units.elementary_charge();
        cfg.particle.mass = crate::constants::SI_ELECTRON_MASS;
        cfg.fields.electric = 1.0;
        let rk = von_klitzing(&cfg);
        assert!((rk - VON_KLITZING_TABULATED).abs() <= VON_KLITZING_TABULATED_PRECISION);
        // n = 1: qE dx dt = h with E = 1 V/m, dx = 1 m.
        let dt = cfg.units.h / cfg.charge();
        let r = quantization_report(1.0, dt, &cfg, 1e-8).unwrap();
        assert_eq!(r.n, 1);
        assert!(r.is_quantized);
        assert!(r.crosscheck_ulps <= 4);
        assert!((r.resistance - rk).abs() <= VON_KLITZING_TABULATED_PRECISION);
    }

    #[test]
    fn eigen_sign_only_changes_bookkeeping() {
        let cfg = SystemConfig::natural();
        let mut flipped = cfg.clone();
        flipped.displacements.eigen_sign = cfg.displacements.eigen_sign.flipped();
        let a = quantization_report(1.7, 0.9, &cfg, 1e-8).unwrap();
        let mut b = quantization_report(1.7, 0.9, &flipped, 1e-8).unwrap();
        assert_eq!(b.eigenvalue, -a.eigenvalue);
        b.eigen_sign = a.eigen_sign;
        b.eigenvalue = a.eigenvalue;
        assert_eq!(a, b);
    }

    #[test]
    fn scan_hits_exactly_the_integers() {
        let cfg = SystemConfig::natural();
        let dts: Vec<f64> = (1..=1000).map(|k| k as f64 * 0.004).collect();
        let rows = quantization_scan(2.0 * PI, &dts, &cfg, 1e-8);
        let hits: Vec<i64> = rows
            .iter()
            .map(|r| r.as_ref().unwrap())
            .filter(|r| r.phase_deviation < 1e-8)
            .map(|r| {
                assert!(r.is_quantized);
                r.n
            })
            .collect();
        assert_eq!(hits, vec![1, 2, 3, 4]);
        assert_eq!(rows.iter().filter(|r| r.as_ref().unwrap().is_quantized).count(), 4);
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }
}
