use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::Grid1D;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn plans(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(n), p.plan_fft_inverse(n))
    })
}

/// Angular wavenumbers in FFT output order.
pub(crate) fn wavenumbers(grid: &Grid1D) -> Vec<f64> {
    let n = grid.len();
    let unit = 2.0 * PI / grid.length();
    (0..n)
        .map(|j| {
            let j = j as i64;
            let signed = if j < (n as i64 + 1) / 2 { j } else { j - n as i64 };
            signed as f64 * unit
        })
        .collect()
}

/// Applies `multiplier(k)` in Fourier space to every line of `data` along an
/// axis with `n` points separated by `stride`; `lines` enumerates the line
/// start offsets.
pub(crate) fn fft_lines(
    data: &mut [Complex64],
    grid: &Grid1D,
    stride: usize,
    lines: impl Iterator<Item = usize>,
    multiplier: &[Complex64],
) {
    let n = grid.len();
    let (fwd, inv) = plans(n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];
    let scale = 1.0 / n as f64;
    for start in lines {
        for (i, b) in buf.iter_mut().enumerate() {
            *b = data[start + i * stride];
        }
        fwd.process_with_scratch(&mut buf, &mut scratch);
        for (b, m) in buf.iter_mut().zip(multiplier) {
            *b *= m * scale;
        }
        inv.process_with_scratch(&mut buf, &mut scratch);
        for (i, b) in buf.iter().enumerate() {
            data[start + i * stride] = *b;
        }
    }
}
