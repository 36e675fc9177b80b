use std::ops::Range;

use num_complex::Complex64;

use super::field::{l2, sample, sample_yz, WaveField, WaveField2D};
use super::{fft_lines, pairwise_sum, wavenumbers, Axis, Boundary, Grid1D, Grid2D, Scheme};
use crate::analytic::AnalyticSolution;
use crate::config::SystemConfig;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Operators whose grid expectation values can be taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    X,
    Px,
    /// `p_x - qEt` at the field's time stamp.
    PiX,
    Hamiltonian1d,
    Y,
    Z,
    Py,
    Pz,
    /// `p_y - m wc z`.
    PiY,
    /// `p_z`.
    PiZ,
    HamiltonianYz,
}

impl Observable {
    fn is_1d(self) -> bool {
        matches!(
            self,
            Observable::X | Observable::Px | Observable::PiX | Observable::Hamiltonian1d
        )
    }
}

/// Derivative of order 1 or 2 along one axis of a flat array; `lines` lists
/// the offsets of the first element of each line.
fn derivative_axis(
    data: &[Complex64],
    grid: &Grid1D,
    stride: usize,
    lines: impl Iterator<Item = usize> + Clone,
    order: u32,
    scheme: Scheme,
) -> Result<Vec<Complex64>> {
    let n = grid.len();
    let h = grid.spacing();
    match scheme {
        Scheme::Spectral => {
            if grid.boundary() != Boundary::Periodic {
                return Err(Error::geometry("spectral derivatives require a periodic axis"));
            }
            let ks = wavenumbers(grid);
            let multiplier: Vec<Complex64> = ks
                .iter()
                .enumerate()
                .map(|(j, &k)| {
                    if order % 2 == 1 && n.is_multiple_of(2) && j == n / 2 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        (I * k).powu(order)
                    }
                })
                .collect();
            let mut out = data.to_vec();
            fft_lines(&mut out, grid, stride, lines, &multiplier);
            Ok(out)
        }
        Scheme::Fd4 => {
            let periodic = grid.boundary() == Boundary::Periodic;
            let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
            for start in lines {
                let at = |i: isize| -> Complex64 {
                    if (0..n as isize).contains(&i) {
                        data[start + i as usize * stride]
                    } else if periodic {
                        data[start + i.rem_euclid(n as isize) as usize * stride]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                };
                for i in 0..n as isize {
                    let v = if order == 1 {
                        (-at(i + 2) + at(i + 1) * 8.0 - at(i - 1) * 8.0 + at(i - 2)) / (12.0 * h)
                    } else {
                        (-at(i + 2) + at(i + 1) * 16.0 - at(i) * 30.0 + at(i - 1) * 16.0 - at(i - 2)) / (12.0 * h * h)
                    };
                    out[start + i as usize * stride] = v;
                }
            }
            Ok(out)
        }
    }
}

pub(crate) fn derivative_line(data: &[Complex64], grid: &Grid1D, order: u32, scheme: Scheme) -> Result<Vec<Complex64>> {
    derivative_axis(data, grid, 1, std::iter::once(0), order, scheme)
}

fn derivative_yz(f: &WaveField2D, axis: Axis, order: u32, scheme: Scheme) -> Result<Vec<Complex64>> {
    let (ny, nz) = (f.grid.y.len(), f.grid.z.len());
    match axis {
        Axis::Y => derivative_axis(&f.data, &f.grid.y, nz, 0..nz, order, scheme),
        Axis::Z => derivative_axis(&f.data, &f.grid.z, 1, (0..ny).map(|iy| iy * nz), order, scheme),
    }
}

/// `-i hbar d/dx`.
pub fn apply_momentum(f: &WaveField, scheme: Scheme, cfg: &SystemConfig) -> Result<WaveField> {
    let d = derivative_line(&f.data, &f.grid, 1, scheme)?;
    let scale = -I * cfg.hbar();
    Ok(WaveField {
        grid: f.grid,
        data: d.into_iter().map(|v| v * scale).collect(),
        t: f.t,
    })
}

/// `-i hbar d/dy` or `-i hbar d/dz`.
pub fn apply_momentum_yz(f: &WaveField2D, axis: Axis, scheme: Scheme, cfg: &SystemConfig) -> Result<WaveField2D> {
    let d = derivative_yz(f, axis, 1, scheme)?;
    let scale = -I * cfg.hbar();
    Ok(WaveField2D {
        grid: f.grid,
        data: d.into_iter().map(|v| v * scale).collect(),
        t: f.t,
    })
}

/// `p_x^2/2m - qEx` with the given kinetic scheme.
pub fn apply_hamiltonian_1d_with(f: &WaveField, cfg: &SystemConfig, scheme: Scheme) -> Result<WaveField> {
    let d2 = derivative_line(&f.data, &f.grid, 2, scheme)?;
    let kin = -cfg.hbar() * cfg.hbar() / (2.0 * cfg.mass());
    let force = cfg.force();
    let data = d2
        .iter()
        .zip(&f.data)
        .enumerate()
        .map(|(i, (d, v))| d * kin - v * (force * f.grid.coordinate(i)))
        .collect();
    Ok(WaveField {
        grid: f.grid,
        data,
        t: f.t,
    })
}

pub fn apply_hamiltonian_1d(f: &WaveField, cfg: &SystemConfig) -> Result<WaveField> {
    apply_hamiltonian_1d_with(f, cfg, Scheme::default_for(f.grid.boundary()))
}

/// `(p_y^2 + (p_z - m wc y)^2)/2m` with per-axis schemes `[y, z]`.
pub fn apply_hamiltonian_yz_with(f: &WaveField2D, cfg: &SystemConfig, schemes: [Scheme; 2]) -> Result<WaveField2D> {
    let wc = cfg.cyclotron_frequency()?;
    let (m, hbar) = (cfg.mass(), cfg.hbar());
    let dyy = derivative_yz(f, Axis::Y, 2, schemes[0])?;
    let dzz = derivative_yz(f, Axis::Z, 2, schemes[1])?;
    let dz = derivative_yz(f, Axis::Z, 1, schemes[1])?;
    let nz = f.grid.z.len();
    let data = (0..f.data.len())
        .map(|idx| {
            let y = f.grid.y.coordinate(idx / nz);
            // (p_z - m wc y)^2 = p_z^2 + 2 i hbar m wc y d/dz + m^2 wc^2 y^2
            (-hbar * hbar * (dyy[idx] + dzz[idx])
                + dz[idx] * (2.0 * I * hbar * m * wc * y)
                + f.data[idx] * (m * m * wc * wc * y * y))
                / (2.0 * m)
        })
        .collect();
    Ok(WaveField2D {
        grid: f.grid,
        data,
        t: f.t,
    })
}

pub fn apply_hamiltonian_yz(f: &WaveField2D, cfg: &SystemConfig) -> Result<WaveField2D> {
    apply_hamiltonian_yz_with(
        f,
        cfg,
        [
            Scheme::default_for(f.grid.y.boundary()),
            Scheme::default_for(f.grid.z.boundary()),
        ],
    )
}

fn interior_1d(grid: &Grid1D) -> Range<usize> {
    grid.interior()
}

fn interior_indices_yz(grid: &Grid2D) -> Vec<usize> {
    let zr = grid.z.interior();
    grid.y
        .interior()
        .flat_map(|iy| zr.clone().map(move |iz| grid.index(iy, iz)))
        .collect()
}

/// `||r|| / ||psi||` over the given indices.
pub(crate) fn residual_norm(r: &[Complex64], psi: &[Complex64], idx: &[usize]) -> Result<f64> {
    let pick = |v: &[Complex64]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
    let denom = l2(&pick(psi), 1.0);
    if denom == 0.0 {
        return Err(Error::domain("residual of a vanishing field"));
    }
    Ok(l2(&pick(r), 1.0) / denom)
}

/// `d psi/dt` at `t` from samples at neighbouring times: the three-point
/// central difference, or the five-point one when `fourth_order` is set.
pub fn time_derivative(
    solution: &AnalyticSolution,
    grid: &Grid1D,
    t: f64,
    dt: f64,
    fourth_order: bool,
) -> Result<WaveField> {
    let at = |s: f64| sample(solution, grid, t + s).map(|f| f.data);
    let data = combine_stencil(at, dt, fourth_order)?;
    WaveField::new(*grid, data, t)
}

pub fn time_derivative_yz(
    solution: &AnalyticSolution,
    grid: &Grid2D,
    t: f64,
    dt: f64,
    fourth_order: bool,
) -> Result<WaveField2D> {
    let at = |s: f64| sample_yz(solution, grid, t + s).map(|f| f.data);
    let data = combine_stencil(at, dt, fourth_order)?;
    WaveField2D::new(*grid, data, t)
}

fn combine_stencil(at: impl Fn(f64) -> Result<Vec<Complex64>>, dt: f64, fourth_order: bool) -> Result<Vec<Complex64>> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::domain("time stencil step must be positive"));
    }
    let (p1, m1) = (at(dt)?, at(-dt)?);
    if !fourth_order {
        return Ok(p1.iter().zip(&m1).map(|(a, b)| (a - b) / (2.0 * dt)).collect());
    }
    let (p2, m2) = (at(2.0 * dt)?, at(-2.0 * dt)?);
    Ok((0..p1.len())
        .map(|i| (-p2[i] + p1[i] * 8.0 - m1[i] * 8.0 + m2[i]) / (12.0 * dt))
        .collect())
}

/// `||i hbar (psi(t+dt) - psi(t-dt))/2dt - H psi(t)|| / ||psi(t)||` over the
/// interior points.
pub fn schrodinger_residual(
    solution: &AnalyticSolution,
    grid: &Grid1D,
    t: f64,
    dt: f64,
    cfg: &SystemConfig,
) -> Result<f64> {
    let psi = sample(solution, grid, t)?;
    let dpsi = time_derivative(solution, grid, t, dt, false)?;
    let h = apply_hamiltonian_1d(&psi, cfg)?;
    let r: Vec<Complex64> = dpsi
        .data
        .iter()
        .zip(&h.data)
        .map(|(d, hv)| I * cfg.hbar() * d - hv)
        .collect();
    let idx: Vec<usize> = interior_1d(grid).collect();
    residual_norm(&r, &psi.data, &idx)
}

/// The same residual for a transverse state under `H_yz`.
pub fn schrodinger_residual_yz(
    solution: &AnalyticSolution,
    grid: &Grid2D,
    t: f64,
    dt: f64,
    cfg: &SystemConfig,
) -> Result<f64> {
    let psi = sample_yz(solution, grid, t)?;
    let dpsi = time_derivative_yz(solution, grid, t, dt, false)?;
    let h = apply_hamiltonian_yz(&psi, cfg)?;
    let r: Vec<Complex64> = dpsi
        .data
        .iter()
        .zip(&h.data)
        .map(|(d, hv)| I * cfg.hbar() * d - hv)
        .collect();
    residual_norm(&r, &psi.data, &interior_indices_yz(grid))
}

fn expectation_of(psi: &[Complex64], op_psi: &[Complex64], idx: &[usize]) -> Result<f64> {
    let num: Vec<f64> = idx.iter().map(|&i| (psi[i].conj() * op_psi[i]).re).collect();
    let den: Vec<f64> = idx.iter().map(|&i| psi[i].norm_sqr()).collect();
    let den = pairwise_sum(&den);
    if den == 0.0 {
        return Err(Error::domain("expectation of a vanishing field"));
    }
    Ok(pairwise_sum(&num) / den)
}

/// `<psi|O|psi> / <psi|psi>` over the interior of a 1D field.
pub fn expectation(f: &WaveField, obs: Observable, cfg: &SystemConfig) -> Result<f64> {
    if !obs.is_1d() {
        return Err(Error::geometry(format!("{obs:?} is not a 1D observable")));
    }
    let scheme = Scheme::default_for(f.grid.boundary());
    let op: Vec<Complex64> = match obs {
        Observable::X => (0..f.data.len()).map(|i| f.data[i] * f.grid.coordinate(i)).collect(),
        Observable::Px => apply_momentum(f, scheme, cfg)?.data,
        Observable::PiX => {
            let shift = cfg.force() * f.t;
            apply_momentum(f, scheme, cfg)?
                .data
                .iter()
                .zip(&f.data)
                .map(|(p, v)| p - v * shift)
                .collect()
        }
        _ => apply_hamiltonian_1d(f, cfg)?.data,
    };
    let idx: Vec<usize> = interior_1d(&f.grid).collect();
    expectation_of(&f.data, &op, &idx)
}

/// `<psi|O|psi> / <psi|psi>` over the interior of a `(y, z)` field.
pub fn expectation_yz(f: &WaveField2D, obs: Observable, cfg: &SystemConfig) -> Result<f64> {
    if obs.is_1d() {
        return Err(Error::geometry(format!("{obs:?} is not a transverse observable")));
    }
    let nz = f.grid.z.len();
    let sy = Scheme::default_for(f.grid.y.boundary());
    let sz = Scheme::default_for(f.grid.z.boundary());
    let op: Vec<Complex64> = match obs {
        Observable::Y => (0..f.data.len())
            .map(|i| f.data[i] * f.grid.y.coordinate(i / nz))
            .collect(),
        Observable::Z => (0..f.data.len())
            .map(|i| f.data[i] * f.grid.z.coordinate(i % nz))
            .collect(),
        Observable::Py => apply_momentum_yz(f, Axis::Y, sy, cfg)?.data,
        Observable::Pz | Observable::PiZ => apply_momentum_yz(f, Axis::Z, sz, cfg)?.data,
        Observable::PiY => {
            let mw = cfg.mass() * cfg.cyclotron_frequency()?;
            apply_momentum_yz(f, Axis::Y, sy, cfg)?
                .data
                .iter()
                .enumerate()
                .map(|(i, p)| p - f.data[i] * (mw * f.grid.z.coordinate(i % nz)))
                .collect()
        }
        _ => apply_hamiltonian_yz(f, cfg)?.data,
    };
    expectation_of(&f.data, &op, &interior_indices_yz(&f.grid))
}

/// Multiplies every line along an axis by `exp(-i k delta)` in Fourier space,
/// or moves samples by a whole number of cells on a Dirichlet axis.
fn shift_lines(
    data: &mut [Complex64],
    grid: &Grid1D,
    stride: usize,
    lines: impl Iterator<Item = usize> + Clone,
    delta: f64,
) -> Result<()> {
    match grid.boundary() {
        Boundary::Periodic => {
            let multiplier: Vec<Complex64> = wavenumbers(grid)
                .iter()
                .map(|&k| Complex64::from_polar(1.0, -k * delta))
                .collect();
            fft_lines(data, grid, stride, lines, &multiplier);
            Ok(())
        }
        Boundary::Dirichlet => {
            let cells = delta / grid.spacing();
            let whole = cells.round();
            if (cells - whole).abs() > 1e-9 {
                return Err(Error::domain(
                    "shifts on a Dirichlet axis must be whole multiples of the spacing",
                ));
            }
            let s = whole as isize;
            let n = grid.len() as isize;
            for start in lines {
                let line: Vec<Complex64> = (0..n).map(|i| data[start + i as usize * stride]).collect();
                for i in 0..n {
                    let src = i - s;
                    data[start + i as usize * stride] = if (0..n).contains(&src) {
                        line[src as usize]
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                }
            }
            Ok(())
        }
    }
}

/// `psi(x) -> psi(x - delta)` on the grid.
pub fn shift_axis(f: &WaveField, delta: f64) -> Result<WaveField> {
    let mut out = f.clone();
    shift_lines(&mut out.data, &f.grid, 1, std::iter::once(0), delta)?;
    Ok(out)
}

/// `psi(y, z) -> psi(y - delta, z)` or `psi(y, z - delta)`.
pub fn shift_axis_yz(f: &WaveField2D, axis: Axis, delta: f64) -> Result<WaveField2D> {
    let mut out = f.clone();
    let (ny, nz) = (f.grid.y.len(), f.grid.z.len());
    match axis {
        Axis::Y => shift_lines(&mut out.data, &f.grid.y, nz, 0..nz, delta)?,
        Axis::Z => shift_lines(&mut out.data, &f.grid.z, 1, (0..ny).map(|iy| iy * nz), delta)?,
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{
        electric_solution, ladder_solution, landau_level, landau_state, phi_electric, LandauFamily, Point,
    };
    use crate::config::Geometry;
    use crate::grid::{commensurate_time, inner_product, norm};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn plane(grid: Grid1D, k: f64) -> WaveField {
        WaveField::from_fn(grid, 0.0, |x| Complex64::from_polar(1.0, k * x)).unwrap()
    }

    #[test]
    fn spectral_momentum_of_plane_wave() {
        let cfg = SystemConfig::natural();
        let g = Grid1D::periodic(10.0, 64).unwrap();
        let k = 2.0 * PI * 3.0 / 10.0;
        let f = plane(g, k);
        let p = apply_momentum(&f, Scheme::Spectral, &cfg).unwrap();
        for (a, b) in p.data.iter().zip(&f.data) {
            assert!((a - b * k).norm() < 1e-12);
        }
    }

    #[test]
    fn momentum_of_constant_vanishes() {
        let cfg = SystemConfig::natural();
        for boundary in [Boundary::Periodic, Boundary::Dirichlet] {
            let g = Grid1D::new(4.0, 32, boundary).unwrap();
            let f = WaveField::from_fn(g, 0.0, |_| Complex64::new(0.3, 0.1)).unwrap();
            let scheme = Scheme::default_for(boundary);
            let p = apply_momentum(&f, scheme, &cfg).unwrap();
            for i in g.interior() {
                assert!(p.data[i].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn spectral_needs_periodic_axis() {
        let cfg = SystemConfig::natural();
        let g = Grid1D::dirichlet(4.0, 32).unwrap();
        let f = plane(g, 1.0);
        assert!(apply_momentum(&f, Scheme::Spectral, &cfg).is_err());
    }

    #[test]
    fn fd4_error_is_fourth_order() {
        let cfg = SystemConfig::natural();
        let k = 2.0 * PI * 2.0 / 3.0;
        let err = |n: usize| {
            let g = Grid1D::periodic(3.0, n).unwrap();
            let f = plane(g, k);
            let p = apply_momentum(&f, Scheme::Fd4, &cfg).unwrap();
            // Symbol of the stencil: (8 sin kh - sin 2kh) / 6h
            let h = g.spacing();
            let symbol = (8.0 * (k * h).sin() - (2.0 * k * h).sin()) / (6.0 * h);
            assert!(((p.data[5] / f.data[5]).re - symbol).abs() < 1e-11);
            (symbol - k).abs()
        };
        let ratio = err(32) / err(64);
        assert!((ratio.log2() - 4.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn hamiltonian_on_plane_wave_and_constant() {
        let cfg = SystemConfig::natural().with_electric(0.0);
        let g = Grid1D::periodic(10.0, 64).unwrap();
        let k = 2.0 * PI * 2.0 / 10.0;
        let f = plane(g, k);
        let h = apply_hamiltonian_1d(&f, &cfg).unwrap();
        for (a, b) in h.data.iter().zip(&f.data) {
            assert!((a - b * (k * k / 2.0)).norm() < 1e-12);
        }
        let c = WaveField::from_fn(g, 0.0, |_| 1.0.into()).unwrap();
        let hc = apply_hamiltonian_1d(&c, &cfg).unwrap();
        assert!(hc.data.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn ground_state_is_an_eigenvector_of_h_yz() {
        let cfg = SystemConfig::natural()
            .with_geometry(Geometry::ParallelEb)
            .with_magnetic(2.0);
        let grid = Grid2D::new(
            Grid1D::periodic(12.0, 96).unwrap(),
            Grid1D::periodic(2.0 * PI, 32).unwrap(),
        );
        let s = landau_state(LandauFamily::Y, 0, 0.5, &cfg).unwrap();
        let f = sample_yz(&s, &grid, 0.0).unwrap();
        let h = apply_hamiltonian_yz(&f, &cfg).unwrap();
        let e0 = landau_level(0, &cfg).unwrap();
        let err: f64 = h
            .data
            .iter()
            .zip(&f.data)
            .map(|(a, b)| (a - b * e0).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn electric_residual_is_small_and_witness_is_large() {
        let cfg = SystemConfig::natural();
        let g = Grid1D::periodic(10.0, 256).unwrap();
        let sol = electric_solution(&cfg);
        let c = cfg.clone();
        let flipped = AnalyticSolution::custom("flipped", move |p: &Point| {
            let v = phi_electric(p.x, p.t, &c);
            let cubic = Complex64::from_polar(1.0, p.t.powi(3) / 3.0);
            v * cubic
        })
        .with_wavenumber_x(|t| t);
        for k in 1..=4 {
            let t = commensurate_time(k, 10.0, &cfg).unwrap();
            let r = schrodinger_residual(&sol, &g, t, 1e-4, &cfg).unwrap();
            assert!(r < 1e-6, "t={t}: {r}");
            let w = schrodinger_residual(&flipped, &g, t, 1e-4, &cfg).unwrap();
            assert!(w > 1e-1, "witness {w}");
        }
    }

    #[test]
    fn ladder_residual_on_dirichlet_grid() {
        let cfg = SystemConfig::natural();
        let g = Grid1D::dirichlet(10.0, 512).unwrap();
        let sol = ladder_solution(2, &cfg).unwrap();
        let r = schrodinger_residual(&sol, &g, 1.0, 1e-4, &cfg).unwrap();
        assert!(r < 1e-5, "{r}");
    }

    #[test]
    fn momentum_expectation_follows_force() {
        let cfg = SystemConfig::natural();
        let g = Grid1D::periodic(10.0, 128).unwrap();
        for k in 0..4 {
            let t = commensurate_time(k, 10.0, &cfg).unwrap();
            let f = sample(&electric_solution(&cfg), &g, t).unwrap();
            let p = expectation(&f, Observable::Px, &cfg).unwrap();
            assert!((p - t).abs() < 1e-8);
            assert!(expectation(&f, Observable::PiX, &cfg).unwrap().abs() < 1e-8);
            assert!(expectation(&f, Observable::Y, &cfg).is_err());
        }
    }

    #[test]
    fn shifts_on_both_boundaries() {
        let g = Grid1D::periodic(10.0, 64).unwrap();
        let k = 2.0 * PI * 2.0 / 10.0;
        let f = plane(g, k);
        let s = shift_axis(&f, 0.37).unwrap();
        for (i, v) in s.data.iter().enumerate() {
            let x = g.coordinate(i);
            assert!((v - Complex64::from_polar(1.0, k * (x - 0.37))).norm() < 1e-12);
        }
        let d = Grid1D::dirichlet(8.0, 64).unwrap();
        let f = WaveField::from_fn(d, 0.0, |x| (-x * x).exp().into()).unwrap();
        let s = shift_axis(&f, 3.0 * d.spacing()).unwrap();
        assert_eq!(s.data[10], f.data[7]);
        assert!(shift_axis(&f, 0.3 * d.spacing()).is_err());
        assert!((norm(&s) - norm(&f)).abs() < 1e-12);
    }

    fn random_field(g: Grid1D, coeffs: &[(f64, f64)]) -> WaveField {
        // Smooth band-limited field from a few Fourier modes.
        WaveField::from_fn(g, 0.0, |x| {
            coeffs
                .iter()
                .enumerate()
                .map(|(j, &(a, b))| {
                    Complex64::new(a, b) * Complex64::from_polar(1.0, 2.0 * PI * (j as f64 - 3.0) * x / g.length())
                })
                .sum()
        })
        .unwrap()
    }

    proptest! {
        #[test]
        fn hamiltonian_is_hermitian(
            a in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 7),
            b in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 7),
        ) {
            let cfg = SystemConfig::natural();
            let g = Grid1D::periodic(6.0, 64).unwrap();
            let (fa, fb) = (random_field(g, &a), random_field(g, &b));
            let hb = apply_hamiltonian_1d(&fb, &cfg).unwrap();
            let ha = apply_hamiltonian_1d(&fa, &cfg).unwrap();
            let lhs = inner_product(&fa, &hb).unwrap();
            let rhs = inner_product(&fb, &ha).unwrap().conj();
            prop_assert!((lhs - rhs).norm() < 1e-10);
        }
    }
}
