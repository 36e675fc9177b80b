use std::sync::Arc;

use num_complex::Complex64;

use super::{apply_unitary, UnitaryKind};
use crate::analytic::{parallel_solution, AnalyticSolution, Family, LandauFamily, Point};
use crate::config::{DisplacementParams, SystemConfig};
use crate::grid::{inner_product_yz, sample_yz, Grid2D};
use crate::{Error, Result};

/// Highest Landau index accepted in a superposition.
pub const MAX_SUPERPOSITION_ORDER: usize = 16;

fn displaced_term(
    family: LandauFamily,
    n: usize,
    shifts: &DisplacementParams,
    cfg: &SystemConfig,
) -> Result<AnalyticSolution> {
    let zeta = parallel_solution(family, n, &DisplacementParams::default(), cfg)?;
    let transverse = match family {
        LandauFamily::Y => UnitaryKind::Uy(shifts.dy),
        LandauFamily::Z => UnitaryKind::Uz(shifts.dz),
    };
    let u = apply_unitary(transverse, &zeta, cfg)?;
    let u = apply_unitary(UnitaryKind::Ux(shifts.dx), &u, cfg)?;
    apply_unitary(UnitaryKind::Ut(shifts.dt), &u, cfg)
}

/// `sum_n a_n Ut Ux Uy zeta_n + sum_n abar_n Ut Ux Uz zetabar_n`, scaled to
/// unit norm using the Gram matrix of the terms on `grid` (the `x` factor is
/// already unit-normalized on the box).
pub fn build_parallel_superposition(
    a: &[Complex64],
    abar: &[Complex64],
    shifts: &DisplacementParams,
    cfg: &SystemConfig,
    grid: &Grid2D,
) -> Result<AnalyticSolution> {
    if a.len().max(abar.len()) > MAX_SUPERPOSITION_ORDER + 1 {
        return Err(Error::domain(format!(
            "superpositions are limited to n <= {MAX_SUPERPOSITION_ORDER}"
        )));
    }
    if a.iter().chain(abar).any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::domain("coefficients must be finite"));
    }
    let mut terms: Vec<(Complex64, AnalyticSolution)> = Vec::new();
    for (family, coeffs) in [(LandauFamily::Y, a), (LandauFamily::Z, abar)] {
        for (n, &c) in coeffs.iter().enumerate() {
            if c != Complex64::new(0.0, 0.0) {
                terms.push((c, displaced_term(family, n, shifts, cfg)?));
            }
        }
    }
    if terms.is_empty() {
        return Err(Error::domain("empty coefficients"));
    }

    // Gram matrix of the transverse parts at t = 0; |x factor|^2 = 1/L.
    let scale_x = cfg.box_length;
    let samples = terms
        .iter()
        .map(|(_, s)| sample_yz(s, grid, 0.0))
        .collect::<Result<Vec<_>>>()?;
    let mut norm_sq = Complex64::new(0.0, 0.0);
    for (i, (ci, _)) in terms.iter().enumerate() {
        for (j, (cj, _)) in terms.iter().enumerate() {
            norm_sq += ci.conj() * cj * inner_product_yz(&samples[i], &samples[j])? * scale_x;
        }
    }
    if norm_sq.re.is_nan() || norm_sq.re <= 0.0 {
        return Err(Error::domain("superposition has zero norm on the grid"));
    }
    let scale = 1.0 / norm_sq.re.sqrt();

    let evals: Vec<(Complex64, crate::analytic::Evaluator)> =
        terms.iter().map(|(c, s)| (c * scale, s.evaluator())).collect();
    let grads: Option<Vec<(Complex64, crate::analytic::Evaluator)>> = terms
        .iter()
        .map(|(c, s)| s.grad_evaluator().map(|g| (c * scale, g)))
        .collect();
    let kx = terms[0].1.wavenumber_fn();
    let evals = Arc::new(evals);
    let mut out = AnalyticSolution::new(
        Family::ParallelSuperposition,
        format!("superposition of {} Landau terms", terms.len()),
        move |p: &Point| evals.iter().map(|(c, e)| c * e(p)).sum(),
    )
    .with_shifts(*shifts);
    if let Some(grads) = grads {
        let grads = Arc::new(grads);
        out = out.with_grad_x(move |p: &Point| grads.iter().map(|(c, g)| c * g(p)).sum());
    }
    if let Some(k) = kx {
        out = out.with_wavenumber_x(move |t| k(t));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Geometry;
    use crate::grid::{norm_yz, Grid1D};
    use crate::symmetry::{expected_invariance_phase, invariance_phase_of};

    fn cfg() -> SystemConfig {
        SystemConfig::natural().with_geometry(Geometry::ParallelEb)
    }

    fn grid() -> Grid2D {
        Grid2D::new(
            Grid1D::dirichlet(12.0, 192).unwrap(),
            Grid1D::periodic(12.0, 96).unwrap(),
        )
    }

    fn shifts() -> DisplacementParams {
        DisplacementParams {
            dx: 0.8,
            dy: 0.5,
            dz: -0.4,
            dt: 0.3,
            ..DisplacementParams::default()
        }
    }

    #[test]
    fn single_term_matches_composed_unitaries() {
        let c = cfg();
        let s = shifts();
        let psi = build_parallel_superposition(&[Complex64::new(1.0, 0.0)], &[], &s, &c, &grid()).unwrap();
        let direct = displaced_term(LandauFamily::Y, 0, &s, &c).unwrap();
        // Same state up to the grid normalization constant.
        let p0 = Point {
            x: 0.2,
            y: 0.4,
            z: 0.1,
            t: 0.7,
        };
        let ratio = psi.evaluate(&p0) / direct.evaluate(&p0);
        for p in [
            Point {
                x: -1.0,
                y: 0.9,
                z: 2.0,
                t: 1.5,
            },
            Point {
                x: 3.0,
                y: -0.3,
                z: -1.0,
                t: 0.0,
            },
        ] {
            assert!((psi.evaluate(&p) - ratio * direct.evaluate(&p)).norm() < 1e-12);
        }
    }

    #[test]
    fn invariance_phase_of_superposition() {
        let c = cfg();
        let s = shifts();
        let a = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.3)];
        let abar = [Complex64::new(0.2, -0.1)];
        let psi = build_parallel_superposition(&a, &abar, &s, &c, &grid()).unwrap();
        let pts: Vec<Point> = (0..40)
            .map(|i| {
                let f = i as f64;
                Point {
                    x: -4.0 + 0.2 * f,
                    y: (f * 0.37).sin(),
                    z: (f * 0.61).cos(),
                    t: 0.05 * f,
                }
            })
            .collect();
        let phase = invariance_phase_of(&psi, s.dx, &pts, &c).unwrap();
        assert!((phase - expected_invariance_phase(s.dx, s.dt, &c)).norm() < 1e-8);
    }

    #[test]
    fn mixed_state_has_unit_grid_norm() {
        let c = cfg();
        let g = grid();
        let psi = build_parallel_superposition(
            &[Complex64::new(1.0, 0.0)],
            &[Complex64::new(1.0, 0.0)],
            &shifts(),
            &c,
            &g,
        )
        .unwrap();
        let f = sample_yz(&psi, &g, 0.0).unwrap();
        let n = norm_yz(&f) * c.box_length.sqrt();
        assert!((n - 1.0).abs() < 1e-6, "{n}");
    }

    #[test]
    fn empty_coefficients_rejected() {
        let err =
            build_parallel_superposition(&[], &[Complex64::new(0.0, 0.0)], &shifts(), &cfg(), &grid()).unwrap_err();
        assert!(err.to_string().contains("empty coefficients"));
        let too_many = vec![Complex64::new(1.0, 0.0); 18];
        assert!(build_parallel_superposition(&too_many, &[], &shifts(), &cfg(), &grid()).is_err());
    }
}
