use num_complex::Complex64;

use crate::config::SystemConfig;
use crate::grid::{Boundary, Grid1D, WaveField};
use crate::{Error, Result};

/// Crank–Nicolson stepper for `p^2/2m - qEx` on a Dirichlet grid, with the
/// tridiagonal system factored once.
#[derive(Debug, Clone)]
pub struct CrankNicolson1D {
    grid: Grid1D,
    dt: f64,
    /// Off-diagonal of `i dt H / 2 hbar`.
    off: Complex64,
    /// Diagonal of `i dt H / 2 hbar`.
    diag: Vec<Complex64>,
    /// Thomas forward-sweep coefficients for `1 + i dt H / 2 hbar`.
    upper: Vec<Complex64>,
    pivots: Vec<Complex64>,
}

impl CrankNicolson1D {
    pub fn new(grid: Grid1D, dt: f64, cfg: &SystemConfig) -> Result<Self> {
        if grid.boundary() != Boundary::Dirichlet {
            return Err(Error::geometry("Crank–Nicolson needs a Dirichlet grid"));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain("time step must be positive"));
        }
        let (hbar, m) = (cfg.hbar(), cfg.mass());
        let h2 = grid.spacing() * grid.spacing();
        let half = Complex64::new(0.0, dt / (2.0 * hbar));
        let off = half * (-hbar * hbar / (2.0 * m * h2));
        let diag: Vec<Complex64> = (0..grid.len())
            .map(|i| half * (hbar * hbar / (m * h2) - cfg.force() * grid.coordinate(i)))
            .collect();
        let n = grid.len();
        let mut upper = vec![Complex64::new(0.0, 0.0); n];
        let mut pivots = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let b = Complex64::new(1.0, 0.0) + diag[i];
            let pivot = if i == 0 { b } else { b - off * upper[i - 1] };
            if pivot.norm() < 1e-300 {
                return Err(Error::domain("singular tridiagonal system"));
            }
            pivots[i] = pivot;
            upper[i] = off / pivot;
        }
        Ok(CrankNicolson1D {
            grid,
            dt,
            off,
            diag,
            upper,
            pivots,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, f: &mut WaveField) -> Result<()> {
        if f.grid != self.grid {
            return Err(Error::geometry("field and propagator grids differ"));
        }
        let n = f.data.len();
        let psi = &f.data;
        let at = |i: usize| psi[i];
        // rhs = (1 - i dt H / 2 hbar) psi
        let mut d: Vec<Complex64> = (0..n)
            .map(|i| {
                let mut v = at(i) * (Complex64::new(1.0, 0.0) - self.diag[i]);
                if i > 0 {
                    v -= self.off * at(i - 1);
                }
                if i + 1 < n {
                    v -= self.off * at(i + 1);
                }
                v
            })
            .collect();
        d[0] /= self.pivots[0];
        for i in 1..n {
            d[i] = (d[i] - self.off * d[i - 1]) / self.pivots[i];
        }
        for i in (0..n - 1).rev() {
            let next = d[i + 1];
            d[i] -= self.upper[i] * next;
        }
        f.data = d;
        f.t += self.dt;
        Ok(())
    }
}
