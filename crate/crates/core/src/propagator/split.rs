use std::sync::Arc;

use num_complex::Complex64;
use rustfft::Fft;

use crate::config::SystemConfig;
use crate::grid::{fft_lines, plans, wavenumbers, Boundary, Grid2D, WaveField2D};
use crate::{Error, Result};

/// Strang splitting for `(p_y^2 + (p_z - m wc y)^2)/2m`: half kinetic steps in
/// `k_y`, a full gauge step diagonal in `(y, k_z)`.
pub struct SplitStepYz {
    grid: Grid2D,
    dt: f64,
    half_kinetic: Vec<Complex64>,
    /// Row-major `(iy, jz)` with `jz` in FFT order.
    gauge: Vec<Complex64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SplitStepYz {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SplitStepYz")
            .field("grid", &self.grid)
            .field("dt", &self.dt)
            .finish_non_exhaustive()
    }
}

impl SplitStepYz {
    pub fn new(grid: Grid2D, dt: f64, cfg: &SystemConfig) -> Result<Self> {
        if grid.y.boundary() != Boundary::Periodic || grid.z.boundary() != Boundary::Periodic {
            return Err(Error::geometry("split-step evolution needs periodic axes"));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain("time step must be positive"));
        }
        let wc = cfg.cyclotron_frequency()?;
        let (hbar, m) = (cfg.hbar(), cfg.mass());
        let half_kinetic = wavenumbers(&grid.y)
            .iter()
            .map(|&k| Complex64::from_polar(1.0, -dt * hbar * k * k / (4.0 * m)))
            .collect();
        let kz = wavenumbers(&grid.z);
        let mut gauge = Vec::with_capacity(grid.len());
        for iy in 0..grid.y.len() {
            let y = grid.y.coordinate(iy);
            for &k in &kz {
                let b = (hbar * k - m * wc * y).powi(2) / (2.0 * m);
                gauge.push(Complex64::from_polar(1.0, -dt * b / hbar));
            }
        }
        let (fwd, inv) = plans(grid.z.len());
        Ok(SplitStepYz {
            grid,
            dt,
            half_kinetic,
            gauge,
            fwd,
            inv,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn kinetic_half(&self, data: &mut [Complex64]) {
        let nz = self.grid.z.len();
        fft_lines(data, &self.grid.y, nz, 0..nz, &self.half_kinetic);
    }

    fn gauge_full(&self, data: &mut [Complex64]) {
        let nz = self.grid.z.len();
        let scale = 1.0 / nz as f64;
        let mut scratch = vec![
            Complex64::new(0.0, 0.0);
            self.fwd
                .get_inplace_scratch_len()
                .max(self.inv.get_inplace_scratch_len())
        ];
        for (row, phases) in data.chunks_mut(nz).zip(self.gauge.chunks(nz)) {
            self.fwd.process_with_scratch(row, &mut scratch);
            for (v, p) in row.iter_mut().zip(phases) {
                *v *= p * scale;
            }
            self.inv.process_with_scratch(row, &mut scratch);
        }
    }

    pub fn step(&self, f: &mut WaveField2D) -> Result<()> {
        if f.grid != self.grid {
            return Err(Error::geometry("field and propagator grids differ"));
        }
        self.kinetic_half(&mut f.data);
        self.gauge_full(&mut f.data);
        self.kinetic_half(&mut f.data);
        f.t += self.dt;
        Ok(())
    }
}
