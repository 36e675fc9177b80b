//! Numerical time evolution: Crank–Nicolson in one dimension and Strang
//! split-step for the transverse gauge problem.

mod cn;
mod split;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::AnalyticSolution;
use crate::config::SystemConfig;
use crate::grid::{
    expectation, expectation_yz, inner_product, inner_product_yz, l2, norm, norm_yz, sample, sample_yz, Grid1D,
    Observable, WaveField, WaveField2D,
};
use crate::{Error, Result};

pub use cn::CrankNicolson1D;
pub use split::SplitStepYz;

/// Relative size below which successive Richardson differences are treated as
/// roundoff.
pub const CONVERGED_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "cn_1d")]
    Cn1d,
    #[serde(rename = "split_yz")]
    SplitYz,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Cn1d => "cn_1d",
            Method::SplitYz => "split_yz",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cn_1d" | "cn" => Ok(Method::Cn1d),
            "split_yz" | "split" => Ok(Method::SplitYz),
            other => Err(Error::config(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolutionSpec {
    pub dt: f64,
    pub steps: usize,
    /// Record every `cadence` steps.
    pub cadence: usize,
    pub method: Method,
}

impl EvolutionSpec {
    pub fn new(dt: f64, steps: usize, cadence: usize, method: Method) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::config("time step must be positive"));
        }
        if cadence == 0 || !steps.is_multiple_of(cadence) {
            return Err(Error::config(format!(
                "recording cadence {cadence} must divide the step count {steps}"
            )));
        }
        Ok(EvolutionSpec {
            dt,
            steps,
            cadence,
            method,
        })
    }
}

/// Time series of expectation values; one row per recorded step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub method: Method,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl TrajectoryRecord {
    fn new(method: Method, columns: &[&str]) -> Self {
        TrajectoryRecord {
            method,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite trajectory entry at t = {}", row[0])));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn fidelity(a: Complex64, na: f64, nb: f64) -> f64 {
    a.norm() / (na * nb)
}

fn row_1d(f: &WaveField, cfg: &SystemConfig, reference: Option<&AnalyticSolution>) -> Result<Vec<f64>> {
    let mut row = vec![
        f.t,
        norm(f),
        expectation(f, Observable::X, cfg)?,
        expectation(f, Observable::Px, cfg)?,
        expectation(f, Observable::Hamiltonian1d, cfg)?,
    ];
    if let Some(r) = reference {
        let g = sample(r, &f.grid, f.t)?;
        row.push(fidelity(inner_product(&g, f)?, norm(&g), norm(f)));
    }
    Ok(row)
}

fn row_yz(f: &WaveField2D, cfg: &SystemConfig, reference: Option<&AnalyticSolution>) -> Result<Vec<f64>> {
    let mut row = vec![
        f.t,
        norm_yz(f),
        expectation_yz(f, Observable::Y, cfg)?,
        expectation_yz(f, Observable::Z, cfg)?,
        expectation_yz(f, Observable::Py, cfg)?,
        expectation_yz(f, Observable::Pz, cfg)?,
        expectation_yz(f, Observable::HamiltonianYz, cfg)?,
    ];
    if let Some(r) = reference {
        let g = sample_yz(r, &f.grid, f.t)?;
        row.push(fidelity(inner_product_yz(&g, f)?, norm_yz(&g), norm_yz(f)));
    }
    Ok(row)
}

fn check_method(spec: &EvolutionSpec, expected: Method) -> Result<()> {
    if spec.method != expected {
        return Err(Error::config(format!(
            "method {} does not match a {expected} field",
            spec.method
        )));
    }
    Ok(())
}

/// Crank–Nicolson evolution of a 1D field; optionally records the fidelity
/// against an analytic reference sampled at each recorded time.
pub fn evolve_1d(
    f0: &WaveField,
    spec: &EvolutionSpec,
    cfg: &SystemConfig,
    reference: Option<&AnalyticSolution>,
) -> Result<(TrajectoryRecord, WaveField)> {
    check_method(spec, Method::Cn1d)?;
    let stepper = CrankNicolson1D::new(f0.grid, spec.dt, cfg)?;
    let mut cols = vec!["t", "norm", "x", "px", "energy"];
    if reference.is_some() {
        cols.push("fidelity");
    }
    let mut record = TrajectoryRecord::new(spec.method, &cols);
    let mut f = f0.clone();
    let t0 = f.t;
    record.push(row_1d(&f, cfg, reference)?)?;
    for k in 1..=spec.steps {
        stepper.step(&mut f)?;
        if k % spec.cadence == 0 {
            f.t = t0 + k as f64 * spec.dt;
            record.push(row_1d(&f, cfg, reference)?)?;
        }
    }
    Ok((record, f))
}

/// Split-step evolution of a transverse field.
pub fn evolve_yz(
    f0: &WaveField2D,
    spec: &EvolutionSpec,
    cfg: &SystemConfig,
    reference: Option<&AnalyticSolution>,
) -> Result<(TrajectoryRecord, WaveField2D)> {
    check_method(spec, Method::SplitYz)?;
    let stepper = SplitStepYz::new(f0.grid, spec.dt, cfg)?;
    let mut cols = vec!["t", "norm", "y", "z", "py", "pz", "energy"];
    if reference.is_some() {
        cols.push("fidelity");
    }
    let mut record = TrajectoryRecord::new(spec.method, &cols);
    let mut f = f0.clone();
    let t0 = f.t;
    record.push(row_yz(&f, cfg, reference)?)?;
    for k in 1..=spec.steps {
        stepper.step(&mut f)?;
        if k % spec.cadence == 0 {
            f.t = t0 + k as f64 * spec.dt;
            record.push(row_yz(&f, cfg, reference)?)?;
        }
    }
    Ok((record, f))
}

/// `log2(|psi_dt - psi_dt/2| / |psi_dt/2 - psi_dt/4|)` from three concurrent runs.
fn richardson(run: impl Fn(usize) -> Result<Vec<Complex64>> + Sync, coarse_steps: usize) -> Result<f64> {
    if coarse_steps == 0 {
        return Err(Error::config("order estimate needs at least one step"));
    }
    let (a, b, c) = std::thread::scope(|s| {
        let ha = s.spawn(|| run(coarse_steps));
        let hb = s.spawn(|| run(2 * coarse_steps));
        let c = run(4 * coarse_steps);
        (
            ha.join().expect("evolution thread panicked"),
            hb.join().expect("evolution thread panicked"),
            c,
        )
    });
    let (a, b, c) = (a?, b?, c?);
    let diff = |u: &[Complex64], v: &[Complex64]| {
        let d: Vec<Complex64> = u.iter().zip(v).map(|(x, y)| x - y).collect();
        l2(&d, 1.0)
    };
    let scale = l2(&c, 1.0);
    let (d1, d2) = (diff(&a, &b), diff(&b, &c));
    if d1 <= CONVERGED_THRESHOLD * scale || d2 <= CONVERGED_THRESHOLD * scale {
        return Err(Error::AlreadyConverged);
    }
    Ok((d1 / d2).log2())
}

/// Richardson order of Crank–Nicolson over `[t0, t0 + T]` with `dt = T/coarse_steps`.
pub fn estimate_order_1d(f0: &WaveField, total_time: f64, coarse_steps: usize, cfg: &SystemConfig) -> Result<f64> {
    richardson(
        |steps| {
            let stepper = CrankNicolson1D::new(f0.grid, total_time / steps as f64, cfg)?;
            let mut f = f0.clone();
            for _ in 0..steps {
                stepper.step(&mut f)?;
            }
            Ok(f.data)
        },
        coarse_steps,
    )
}

/// Richardson order of the split-step scheme.
pub fn estimate_order_yz(f0: &WaveField2D, total_time: f64, coarse_steps: usize, cfg: &SystemConfig) -> Result<f64> {
    richardson(
        |steps| {
            let stepper = SplitStepYz::new(f0.grid, total_time / steps as f64, cfg)?;
            let mut f = f0.clone();
            for _ in 0..steps {
                stepper.step(&mut f)?;
            }
            Ok(f.data)
        },
        coarse_steps,
    )
}

/// Normalized Gaussian `(2 pi s^2)^(-1/4) exp(-(x-x0)^2/4s^2 + i k0 x)`.
pub fn gaussian_packet(grid: Grid1D, x0: f64, sigma: f64, k0: f64, t: f64) -> Result<WaveField> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::domain("packet width must be positive"));
    }
    let amp = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
    WaveField::from_fn(grid, t, |x| {
        let d = x - x0;
        Complex64::from_polar(amp * (-d * d / (4.0 * sigma * sigma)).exp(), k0 * x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{landau_level, landau_state, LandauFamily};
    use crate::config::Geometry;
    use crate::grid::{inner_product_yz, Grid2D};
    use std::f64::consts::PI;

    fn packet_grid() -> Grid1D {
        Grid1D::dirichlet(40.0, 2048).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(EvolutionSpec::new(0.0, 10, 1, Method::Cn1d).is_err());
        assert!(EvolutionSpec::new(0.1, 10, 3, Method::Cn1d).is_err());
        assert!(EvolutionSpec::new(0.1, 0, 3, Method::Cn1d).is_ok());
        assert_eq!("split_yz".parse::<Method>().unwrap(), Method::SplitYz);
    }

    #[test]
    fn one_cn_step_preserves_norm() {
        let cfg = SystemConfig::natural();
        let mut f = gaussian_packet(packet_grid(), 0.0, 1.0, 0.5, 0.0).unwrap();
        let n0 = norm(&f);
        CrankNicolson1D::new(f.grid, 1e-3, &cfg).unwrap().step(&mut f).unwrap();
        assert!((norm(&f) - n0).abs() < 1e-12);
        assert!(CrankNicolson1D::new(Grid1D::periodic(1.0, 16).unwrap(), 1e-3, &cfg).is_err());
    }

    #[test]
    fn free_packet_spreads_in_place() {
        let cfg = SystemConfig::natural().with_electric(0.0);
        let f0 = gaussian_packet(packet_grid(), 0.0, 1.0, 0.0, 0.0).unwrap();
        let spec = EvolutionSpec::new(1e-2, 100, 100, Method::Cn1d).unwrap();
        let (rec, f) = evolve_1d(&f0, &spec, &cfg, None).unwrap();
        let x = rec.column("x").unwrap();
        assert!(x.iter().all(|v| v.abs() < 1e-10));
        let var = |g: &WaveField| {
            let sq = WaveField::from_fn(g.grid, 0.0, |x| (x * x).into()).unwrap();
            let w: f64 = g.data.iter().zip(&sq.data).map(|(a, b)| a.norm_sqr() * b.re).sum();
            w * g.grid.spacing()
        };
        // sigma(t)^2 = sigma^2 + (hbar t / 2 m sigma)^2
        assert!((var(&f) - 1.25).abs() < 1e-4, "{}", var(&f));
        assert!(var(&f) > var(&f0));
    }

    #[test]
    fn momentum_grows_linearly_in_a_field() {
        let cfg = SystemConfig::natural();
        let f0 = gaussian_packet(packet_grid(), 0.0, 1.0, 0.0, 0.0).unwrap();
        let spec = EvolutionSpec::new(1e-3, 1000, 100, Method::Cn1d).unwrap();
        let (rec, _) = evolve_1d(&f0, &spec, &cfg, None).unwrap();
        let (t, p) = (rec.times(), rec.column("px").unwrap());
        for (ti, pi) in t.iter().zip(&p).skip(1) {
            assert!(((pi - p[0]) - ti).abs() < 1e-6 * ti, "t={ti} p={pi}");
        }
    }

    #[test]
    fn zero_steps_give_one_row() {
        let cfg = SystemConfig::natural();
        let f0 = gaussian_packet(packet_grid(), 0.0, 1.0, 0.0, 0.0).unwrap();
        let spec = EvolutionSpec::new(1e-3, 0, 1, Method::Cn1d).unwrap();
        let (rec, f) = evolve_1d(&f0, &spec, &cfg, None).unwrap();
        assert_eq!(rec.len(), 1);
        assert_eq!(f, f0);
        let bad = EvolutionSpec::new(1e-3, 0, 1, Method::SplitYz).unwrap();
        assert!(evolve_1d(&f0, &bad, &cfg, None).is_err());
    }

    #[test]
    fn long_cn_run_keeps_norm() {
        let cfg = SystemConfig::natural();
        let f0 = gaussian_packet(Grid1D::dirichlet(40.0, 512).unwrap(), 0.0, 1.0, 0.0, 0.0).unwrap();
        let spec = EvolutionSpec::new(1e-3, 1000, 50, Method::Cn1d).unwrap();
        let (rec, _) = evolve_1d(&f0, &spec, &cfg, None).unwrap();
        let n = rec.column("norm").unwrap();
        assert!(n.iter().all(|v| (v - n[0]).abs() < 1e-10));
    }

    fn landau_cfg() -> SystemConfig {
        SystemConfig::natural().with_geometry(Geometry::ParallelEb)
    }

    fn landau_grid() -> Grid2D {
        Grid2D::new(
            Grid1D::periodic(16.0, 64).unwrap(),
            Grid1D::periodic(2.0 * PI, 16).unwrap(),
        )
    }

    #[test]
    fn free_plane_waves_are_exact_without_field() {
        let cfg = landau_cfg().with_magnetic(0.0);
        let grid = landau_grid();
        let (ky, kz) = (2.0 * PI * 3.0 / 16.0, 2.0);
        let f0 = WaveField2D::from_fn(grid, 0.0, |y, z| Complex64::from_polar(1.0, ky * y + kz * z)).unwrap();
        let spec = EvolutionSpec::new(0.05, 20, 20, Method::SplitYz).unwrap();
        let (_, f) = evolve_yz(&f0, &spec, &cfg, None).unwrap();
        let phase = Complex64::from_polar(1.0, -(ky * ky + kz * kz) / 2.0);
        for (a, b) in f.data.iter().zip(&f0.data) {
            assert!((a - b * phase).norm() < 1e-12);
        }
    }

    #[test]
    fn landau_ground_state_is_stationary() {
        let cfg = landau_cfg();
        let grid = landau_grid();
        let period = 2.0 * PI / cfg.cyclotron_frequency().unwrap();
        let s = landau_state(LandauFamily::Y, 0, 1.0, &cfg).unwrap();
        let f0 = sample_yz(&s, &grid, 0.0).unwrap();
        let spec = EvolutionSpec::new(period / 512.0, 512, 64, Method::SplitYz).unwrap();
        let (rec, f) = evolve_yz(&f0, &spec, &cfg, Some(&s)).unwrap();
        let fid = rec.column("fidelity").unwrap();
        assert!(fid.iter().all(|v| *v > 1.0 - 1e-6), "{fid:?}");
        let overlap = inner_product_yz(&f0, &f).unwrap() / inner_product_yz(&f0, &f0).unwrap();
        let expected = Complex64::from_polar(1.0, -landau_level(0, &cfg).unwrap() * period);
        // Phase is compared on the unit circle; -E0 T / hbar sits at the branch cut.
        assert!((overlap / overlap.norm() - expected).norm() < 1e-4, "{overlap}");
        let e = rec.column("energy").unwrap();
        assert!(e.iter().all(|v| (v - e[0]).abs() < 1e-8 * e[0].abs()));
    }

    #[test]
    fn cn_order_is_two() {
        let cfg = SystemConfig::natural();
        let f0 = gaussian_packet(Grid1D::dirichlet(40.0, 1024).unwrap(), 0.0, 1.0, 0.0, 0.0).unwrap();
        let order = estimate_order_1d(&f0, 1.0, 20, &cfg).unwrap();
        assert!((order - 2.0).abs() < 0.2, "{order}");
    }

    #[test]
    fn split_order_is_two() {
        let cfg = landau_cfg();
        let grid = landau_grid();
        let f0 = WaveField2D::from_fn(grid, 0.0, |y, z| {
            Complex64::new(
                (-(y - 1.0).powi(2) / 2.0).exp() * (1.0 + 0.3 * z.cos()),
                0.2 * (-y * y).exp() * z.sin(),
            )
        })
        .unwrap();
        let order = estimate_order_yz(&f0, 1.0, 20, &cfg).unwrap();
        assert!((order - 2.0).abs() < 0.2, "{order}");
    }

    #[test]
    fn stationary_constant_is_already_converged() {
        let cfg = landau_cfg().with_magnetic(0.0).with_electric(0.0);
        let f0 = WaveField2D::from_fn(landau_grid(), 0.0, |_, _| Complex64::new(0.5, 0.0)).unwrap();
        assert!(matches!(
            estimate_order_yz(&f0, 1.0, 8, &cfg),
            Err(Error::AlreadyConverged)
        ));
    }
}
