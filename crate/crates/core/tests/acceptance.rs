//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use conserved_ops::algebra::{
    eigen_ladder_check, energy_operator, f_hat, hamiltonian_1d, hamiltonian_parallel, heisenberg_residual, pi_x, pi_y,
    pi_z,
};
use conserved_ops::analytic::{
    electric_solution, ladder_solution, landau_level, landau_state, phi_electric, superposition_taylor,
    AnalyticSolution, LandauFamily, Point,
};
use conserved_ops::config::{Geometry, UnitKind};
use conserved_ops::constants::{VON_KLITZING_TABULATED, VON_KLITZING_TABULATED_PRECISION};
use conserved_ops::grid::{commensurate_time, norm, schrodinger_residual, Grid1D, WaveField2D};
use conserved_ops::observables::{newton_check, probability_current_analytic};
use conserved_ops::propagator::{
    estimate_order_1d, estimate_order_yz, evolve_1d, gaussian_packet, CrankNicolson1D, EvolutionSpec, Method,
};
use conserved_ops::symmetry::{
    conjugation_symmetry_check, invariance_phase, quantization_report, CheckGrid, UnitaryKind,
};
use conserved_ops::verify::{family_y_grid, family_z_grid, landau_energy_on_grid, landau_split_fidelity};
use conserved_ops::{Complex64, Result, SystemConfig};

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: String) -> Result<Outcome> {
    Ok(Outcome { pass, summary })
}

fn electric() -> SystemConfig {
    SystemConfig::natural().with_geometry(Geometry::Electric1d)
}

fn parallel() -> SystemConfig {
    SystemConfig::natural().with_geometry(Geometry::ParallelEb)
}

fn worst(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

fn symbolic_pairs() -> Result<Outcome> {
    let start = Instant::now();
    let h1 = hamiltonian_1d(&electric())?;
    let hp = hamiltonian_parallel(&parallel())?;
    let pairs = [
        (f_hat(), &h1),
        (energy_operator(), &h1),
        (pi_x(), &hp),
        (pi_y(), &hp),
        (pi_z(), &hp),
        (energy_operator(), &hp),
    ];
    let mut nonzero = 0;
    for (f, h) in pairs {
        if !heisenberg_residual(&f, h)?.is_zero() {
            nonzero += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        nonzero == 0 && elapsed < Duration::from_secs(1),
        format!("{nonzero} of 6 residuals nonzero in {elapsed:.2?} (need 0, < 1 s)"),
    )
}

fn commutator_ladder() -> Result<Outcome> {
    let start = Instant::now();
    let nonzero = (0..=5).filter(|&j| !eigen_ladder_check(j).is_zero()).count();
    let elapsed = start.elapsed();
    outcome(
        nonzero == 0 && elapsed < Duration::from_secs(1),
        format!("{nonzero} of 6 ladder identities nonzero in {elapsed:.2?} (need 0, < 1 s)"),
    )
}

fn flipped_cubic(cfg: &SystemConfig) -> AnalyticSolution {
    let c = cfg.clone();
    let k = cfg.clone();
    AnalyticSolution::custom("flipped cubic phase", move |p: &Point| {
        let a = c.force() * c.force() * p.t.powi(3) / (3.0 * c.mass() * c.hbar());
        phi_electric(p.x, p.t, &c) * Complex64::from_polar(1.0, a)
    })
    .with_wavenumber_x(move |t| k.force() * t / k.hbar())
}

fn pde_residual() -> Result<Outcome> {
    let start = Instant::now();
    let cfg = electric();
    let grid = Grid1D::periodic(cfg.box_length, 256)?;
    let sol = electric_solution(&cfg);
    let mut residuals = Vec::new();
    for k in 1..=4 {
        // plane-wave factor exp(i qE t x / hbar) closes on the box
        let t = 2.0 * PI * k as f64 * cfg.hbar() / (cfg.force() * cfg.box_length);
        assert!((commensurate_time(k, cfg.box_length, &cfg)? - t).abs() < 1e-12 * t);
        residuals.push(schrodinger_residual(&sol, &grid, t, 1e-4, &cfg)?);
    }
    let t2 = commensurate_time(2, cfg.box_length, &cfg)?;
    let witness = schrodinger_residual(&flipped_cubic(&cfg), &grid, t2, 1e-4, &cfg)?;
    let max = worst(&residuals);
    let elapsed = start.elapsed();
    outcome(
        max < 1e-6 && witness > 0.1 && elapsed < Duration::from_secs(5),
        format!("max residual {max:.3e} (< 1e-6), witness {witness:.3e} (> 0.1), {elapsed:.2?}"),
    )
}

/// Fourth-order central difference of an analytic solution along `x`.
fn d_dx(s: &AnalyticSolution, x: f64, t: f64) -> Complex64 {
    let h = 1e-3;
    let f = |dx: f64| s.evaluate(&Point::xt(x + dx, t));
    (f(-2.0 * h) - f(-h) * 8.0 + f(h) * 8.0 - f(2.0 * h)) / (12.0 * h)
}

fn ladder_on_grid() -> Result<Outcome> {
    let mut cfg = electric();
    cfg.ladder_depth = 12;
    let grid = Grid1D::dirichlet(cfg.box_length, 512)?;
    let t = 1.0;
    let xs: Vec<f64> = (0..101).map(|i| -4.0 + 0.08 * i as f64).collect();
    let mut residuals = Vec::new();
    let mut eigen = Vec::new();
    for j in 0..=4 {
        residuals.push(schrodinger_residual(&ladder_solution(j, &cfg)?, &grid, t, 1e-4, &cfg)?);
        // f = -i hbar d/dx - qEt acting on P_{j+1} phi
        let upper = ladder_solution(j + 1, &cfg)?;
        let lower = ladder_solution(j, &cfg)?;
        let factor = Complex64::new(0.0, cfg.hbar() * cfg.force() * (j as f64 + 1.0));
        let (mut num, mut den) = (0.0, 0.0);
        for &x in &xs {
            let lhs = Complex64::new(0.0, -cfg.hbar()) * d_dx(&upper, x, t)
                - cfg.force() * t * upper.evaluate(&Point::xt(x, t));
            let rhs = factor * lower.evaluate(&Point::xt(x, t));
            num += (lhs - rhs).norm_sqr();
            den += rhs.norm_sqr();
        }
        eigen.push((num / den).sqrt());
    }
    let (r, e) = (worst(&residuals), worst(&eigen));
    outcome(
        r < 1e-5 && e < 1e-6,
        format!("max residual {r:.3e} (< 1e-5), max eigen error {e:.3e} (< 1e-6)"),
    )
}

fn resummation() -> Result<Outcome> {
    let mut cfg = electric();
    cfg.ladder_depth = 12;
    let dt = 0.1;
    let points: Vec<(f64, f64)> = (0..=30)
        .flat_map(|i| [0.3, 0.9, 1.7].map(|t| (-5.0 + i as f64 / 3.0, t)))
        .collect();
    let mut errors = Vec::new();
    for terms in 0..=10 {
        let mut e: f64 = 0.0;
        for &(x, t) in &points {
            e = e.max((superposition_taylor(x, t, dt, terms, &cfg)? - phi_electric(x, t - dt, &cfg)).norm());
        }
        errors.push(e);
    }
    let monotone = errors.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-15);
    outcome(
        errors[10] < 1e-6 && monotone,
        format!("sup error at J=10 {:.3e} (< 1e-6), monotone {monotone}", errors[10]),
    )
}

fn landau_spectrum() -> Result<Outcome> {
    let cfg = parallel();
    // wc = qB/(mc), c = 1 in natural units
    let wc = cfg.charge() * cfg.fields.magnetic / (cfg.mass() * cfg.units.magnetic_c());
    let mut rel = Vec::new();
    for n in 0..=3 {
        let expected = cfg.hbar() * wc.abs() * (n as f64 + 0.5);
        assert!((landau_level(n, &cfg)? - expected).abs() < 1e-15);
        for family in [LandauFamily::Y, LandauFamily::Z] {
            rel.push((landau_energy_on_grid(family, n, &cfg)? - expected).abs() / expected);
        }
    }
    let fidelity = landau_split_fidelity(10, &cfg)?;
    let e = worst(&rel);
    outcome(
        e < 1e-6 && fidelity > 1.0 - 1e-5,
        format!(
            "max relative energy error {e:.3e} (< 1e-6), min fidelity 1 - {:.3e} (> 1 - 1e-5)",
            1.0 - fidelity
        ),
    )
}

fn conjugation() -> Result<Outcome> {
    let c1 = electric();
    let g = Grid1D::periodic(c1.box_length, 256)?;
    let t = commensurate_time(3, c1.box_length, &c1)?;
    let phi = electric_solution(&c1);
    let ux = conjugation_symmetry_check(UnitaryKind::Ux(4.0 * g.spacing()), &phi, &CheckGrid::X(g), t, 1e-4, &c1)?;
    let ut = conjugation_symmetry_check(UnitaryKind::Ut(0.35), &phi, &CheckGrid::X(g), t, 1e-4, &c1)?;

    let cp = parallel();
    let (gy, dy) = family_y_grid(&cp)?;
    let sy = landau_state(LandauFamily::Y, 1, dy, &cp)?;
    // the z period only closes the Uy phase for shifts that are multiples of lB
    let uy = conjugation_symmetry_check(UnitaryKind::Uy(2.0 * dy), &sy, &CheckGrid::Yz(gy), 0.7, 1e-4, &cp)?;
    let (gz, dz) = family_z_grid(&cp)?;
    let sz = landau_state(LandauFamily::Z, 0, dz, &cp)?;
    let uz = conjugation_symmetry_check(
        UnitaryKind::Uz(3.0 * gz.z.spacing()),
        &sz,
        &CheckGrid::Yz(gz),
        0.7,
        1e-4,
        &cp,
    )?;
    let witness = conjugation_symmetry_check(
        UnitaryKind::BareShiftY(2.0 * dy),
        &sy,
        &CheckGrid::Yz(gy),
        0.7,
        1e-4,
        &cp,
    )?;
    let e = worst(&[ux, uy, uz, ut]);
    outcome(
        e < 1e-6 && witness > 1e-2,
        format!("Ux {ux:.2e} Uy {uy:.2e} Uz {uz:.2e} Ut {ut:.2e} (< 1e-6), witness {witness:.3e} (> 1e-2)"),
    )
}

fn quantization() -> Result<Outcome> {
    let start = Instant::now();
    let cfg = electric();
    let dx = 1.0;
    let tau = 2.0 * PI * cfg.hbar() / (cfg.force() * dx);
    let mut misplaced = 0;
    let mut hits = Vec::new();
    let mut worst_ulps = 0u64;
    for k in 1..=1000u32 {
        let dt = k as f64 * tau / 250.0;
        let on_integer = k % 250 == 0;
        let phase_ok = (invariance_phase(dx, dt, &cfg)? - 1.0).norm() < 1e-8;
        if phase_ok != on_integer {
            misplaced += 1;
        }
        let report = quantization_report(dx, dt, &cfg, 1e-8)?;
        if report.is_quantized != on_integer {
            misplaced += 1;
        }
        if on_integer {
            hits.push(report.n);
            let h = 2.0 * PI * cfg.hbar();
            let exact = h / (cfg.charge() * cfg.charge()) * (k / 250) as f64;
            let d = (report.resistance.to_bits() as i64 - exact.to_bits() as i64).unsigned_abs();
            worst_ulps = worst_ulps.max(d);
        }
    }
    let mut si = SystemConfig::natural().with_units(UnitKind::Si);
    si.particle.charge = si.units.elementary_charge();
    let rk = si.units.h / (si.particle.charge * si.particle.charge);
    let rk_err = (rk - VON_KLITZING_TABULATED).abs();
    let elapsed = start.elapsed();
    outcome(
        misplaced == 0
            && hits == [1, 2, 3, 4]
            && worst_ulps <= 4
            && rk_err < VON_KLITZING_TABULATED_PRECISION
            && elapsed < Duration::from_secs(10),
        format!(
            "hits {hits:?}, {misplaced} misplaced, R within {worst_ulps} ulp (<= 4), \
             SI h/e^2 = {rk:.5} ohm off by {rk_err:.1e}, {elapsed:.2?}"
        ),
    )
}

fn newton_and_current() -> Result<Outcome> {
    let cfg = electric();
    let f0 = gaussian_packet(Grid1D::dirichlet(40.0, 2048)?, 0.0, 1.0, 0.0, 0.0)?;
    let spec = EvolutionSpec::new(1e-3, 1000, 100, Method::Cn1d)?;
    let (rec, _) = evolve_1d(&f0, &spec, &cfg, None)?;
    let newton = newton_check(&rec, &cfg)?.max_residual;

    let psi = electric_solution(&cfg);
    let g = Grid1D::periodic(cfg.box_length, 64)?;
    let mut current: f64 = 0.0;
    for t in [0.0, 0.25, 1.5, 4.0] {
        let prof = probability_current_analytic(&psi, &g, t, &cfg)?;
        for (i, j) in prof.j.iter().enumerate() {
            let rho = phi_electric(g.coordinate(i), t, &cfg).norm_sqr();
            current = current.max((j - cfg.force() * t / cfg.mass() * rho).abs());
        }
    }
    outcome(
        newton < 1e-6 && current < 1e-10,
        format!("Newton residual {newton:.3e} (< 1e-6), current error {current:.3e} (< 1e-10)"),
    )
}

fn propagator_orders() -> Result<Outcome> {
    let c1 = electric();
    let f0 = gaussian_packet(Grid1D::dirichlet(40.0, 1024)?, 0.5, 1.2, 0.3, 0.0)?;
    let cn = estimate_order_1d(&f0, 1.0, 20, &c1)?;

    let cp = parallel();
    let (g, _) = family_y_grid(&cp)?;
    let f0 = WaveField2D::from_fn(g, 0.0, |y, z| {
        Complex64::new(
            (-(y + 0.5).powi(2) / 3.0).exp() * (1.0 + 0.2 * z.sin()),
            0.1 * (-y * y).exp() * z.cos(),
        )
    })?;
    let split = estimate_order_yz(&f0, 1.0, 20, &cp)?;

    let mut f = gaussian_packet(Grid1D::dirichlet(40.0, 512)?, 0.0, 1.0, 0.0, 0.0)?;
    let stepper = CrankNicolson1D::new(f.grid, 1e-3, &c1)?;
    let n0 = norm(&f);
    let mut drift: f64 = 0.0;
    for _ in 0..10_000 {
        stepper.step(&mut f)?;
        drift = drift.max((norm(&f) - n0).abs());
    }
    outcome(
        (cn - 2.0).abs() <= 0.2 && (split - 2.0).abs() <= 0.2 && drift < 1e-10,
        format!("CN order {cn:.4}, split order {split:.4} (2 +- 0.2), norm drift {drift:.3e} (< 1e-10)"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("symbolic conservation", symbolic_pairs),
        ("commutator ladder", commutator_ladder),
        ("1D PDE residual", pde_residual),
        ("degeneracy ladder on grid", ladder_on_grid),
        ("Taylor resummation", resummation),
        ("Landau spectrum", landau_spectrum),
        ("symmetry conjugation", conjugation),
        ("quantization", quantization),
        ("Newton and current", newton_and_current),
        ("propagator orders", propagator_orders),
    ];
    let start = Instant::now();
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria.iter().map(|(_, f)| s.spawn(f)).collect();
        handles.into_iter().map(|h| h.join()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), r)) in criteria.iter().zip(results).enumerate() {
        let (pass, summary) = match r {
            Ok(Ok(o)) => (o.pass, o.summary),
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {summary}",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!("{} of 10 criteria passed in {:.2?}", 10 - failed, start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
