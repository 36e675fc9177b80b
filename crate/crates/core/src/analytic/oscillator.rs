//! Harmonic-oscillator eigenfunctions at the cyclotron frequency.

use crate::config::{Geometry, SystemConfig};
use crate::{Error, Result};

pub const MAX_HERMITE_ORDER: usize = 64;

fn check_order(n: usize) -> Result<()> {
    if n > MAX_HERMITE_ORDER {
        return Err(Error::domain(format!(
            "Hermite order {n} exceeds the overflow guard of {MAX_HERMITE_ORDER}"
        )));
    }
    Ok(())
}

/// Physicists' Hermite polynomial `H_n(xi)` by the three-term recurrence.
pub fn hermite_poly(n: usize, xi: f64) -> Result<f64> {
    check_order(n)?;
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * xi * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    if !cur.is_finite() {
        return Err(Error::domain(format!("H_{n}({xi}) overflows")));
    }
    Ok(cur)
}

/// `|wc|` for the oscillator scale; requires a nonzero magnetic field.
pub(crate) fn oscillator_frequency(cfg: &SystemConfig) -> Result<f64> {
    cfg.require_geometry(Geometry::ParallelEb)?;
    let wc = cfg.cyclotron_frequency()?.abs();
    if wc == 0.0 || !wc.is_finite() {
        return Err(Error::domain("oscillator states need a nonzero magnetic field"));
    }
    Ok(wc)
}

/// `sqrt(m |wc| / hbar)`, converting lengths to the dimensionless `xi`.
pub(crate) fn inverse_length(cfg: &SystemConfig) -> Result<f64> {
    Ok((cfg.mass() * oscillator_frequency(cfg)? / cfg.hbar()).sqrt())
}

/// Normalized Hermite function `(2^n n!)^(-1/2) pi^(-1/4) exp(-xi^2/2) H_n(xi)`,
/// by the stable recurrence on the normalized functions themselves.
fn hermite_function(n: usize, xi: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    for k in 0..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * xi * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(2^n n!)^(-1/2) (m wc / pi hbar)^(1/4) exp(-xi^2/2) H_n(xi)`: unit norm
/// with respect to the physical coordinate `xi / sqrt(m wc / hbar)`.
pub fn oscillator_eigenfunction(n: usize, xi: f64, cfg: &SystemConfig) -> Result<f64> {
    check_order(n)?;
    Ok(inverse_length(cfg)?.sqrt() * hermite_function(n, xi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn landau_cfg() -> SystemConfig {
        SystemConfig::natural().with_geometry(Geometry::ParallelEb)
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite_poly(0, 0.37).unwrap(), 1.0);
        assert_eq!(hermite_poly(1, 0.37).unwrap(), 0.74);
        assert_eq!(hermite_poly(2, 2.0).unwrap(), 14.0);
        let x: f64 = -1.3;
        let h3 = 8.0 * x.powi(3) - 12.0 * x;
        assert!((hermite_poly(3, x).unwrap() - h3).abs() < 1e-12);
        assert!(hermite_poly(64, 1.0).is_ok());
        assert!(hermite_poly(65, 1.0).is_err());
    }

    #[test]
    fn stable_recurrence_matches_closed_form() {
        let cfg = landau_cfg();
        for n in 0..=10usize {
            for &xi in &[-2.5f64, -0.4, 0.0, 0.9, 3.1] {
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                let direct = (2f64.powi(n as i32) * fact).powf(-0.5)
                    * std::f64::consts::PI.powf(-0.25)
                    * (-xi * xi / 2.0).exp()
                    * hermite_poly(n, xi).unwrap();
                let v = oscillator_eigenfunction(n, xi, &cfg).unwrap();
                assert!((v - direct).abs() < 1e-12, "n={n} xi={xi}");
            }
        }
    }

    #[test]
    fn ground_state_peak() {
        let v = oscillator_eigenfunction(0, 0.0, &landau_cfg()).unwrap();
        assert!((v - std::f64::consts::PI.powf(-0.25)).abs() < 1e-15);
    }

    #[test]
    fn requires_parallel_geometry_and_field() {
        assert!(oscillator_eigenfunction(0, 0.0, &SystemConfig::natural()).is_err());
        let cfg = landau_cfg().with_magnetic(0.0);
        assert!(oscillator_eigenfunction(0, 0.0, &cfg).is_err());
    }

    /// Composite Simpson on `[-a, a]`.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, n: usize) -> f64 {
        let h = 2.0 * a / n as f64;
        let mut s = f(-a) + f(a);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(-a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn orthonormal_by_quadrature() {
        let cfg = landau_cfg().with_magnetic(2.5);
        let k = inverse_length(&cfg).unwrap();
        for m in 0..=5 {
            for n in 0..=5 {
                let ip = simpson(
                    |y| {
                        oscillator_eigenfunction(m, k * y, &cfg).unwrap()
                            * oscillator_eigenfunction(n, k * y, &cfg).unwrap()
                    },
                    12.0 / k,
                    4000,
                );
                let expected = if m == n { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-8, "<{m}|{n}> = {ip}");
            }
        }
    }

    #[test]
    fn satisfies_oscillator_equation() {
        // -(hbar^2/2m) u'' + m wc^2 y^2/2 u = hbar wc (n + 1/2) u
        let cfg = landau_cfg().with_magnetic(1.7);
        let (m, hbar) = (cfg.mass(), cfg.hbar());
        let wc = cfg.cyclotron_frequency().unwrap();
        let k = inverse_length(&cfg).unwrap();
        let u = |n: usize, y: f64| oscillator_eigenfunction(n, k * y, &cfg).unwrap();
        let h = 1e-3;
        for n in 0..=4 {
            let energy = hbar * wc * (n as f64 + 0.5);
            for &y in &[-1.1, -0.2, 0.45, 1.3] {
                let d2 = (-u(n, y + 2.0 * h) + 16.0 * u(n, y + h) - 30.0 * u(n, y) + 16.0 * u(n, y - h)
                    - u(n, y - 2.0 * h))
                    / (12.0 * h * h);
                let r = -hbar * hbar / (2.0 * m) * d2 + 0.5 * m * wc * wc * y * y * u(n, y) - energy * u(n, y);
                assert!(r.abs() < 1e-7, "n={n} y={y} residual {r}");
            }
        }
    }

    #[test]
    fn narrower_exponent_fails_the_equation() {
        // exp(-xi^2) in place of exp(-xi^2/2) is not an eigenfunction.
        let u = |y: f64| (-y * y).exp();
        let (y, h) = (0.8, 1e-3);
        let d2 = (u(y + h) - 2.0 * u(y) + u(y - h)) / (h * h);
        let r = -0.5 * d2 + 0.5 * y * y * u(y) - 0.5 * u(y);
        assert!(r.abs() > 1e-2);
    }
}
