use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use conserved_ops::analytic::{
    electric_shifted_solution, electric_solution, ladder_solution, landau_state, parallel_solution, AnalyticSolution,
    LandauFamily, Point,
};
use conserved_ops::config::{Geometry, UnitKind};
use conserved_ops::grid::{sample, sample_yz, Boundary, Grid1D, Grid2D, WaveField2D};
use conserved_ops::observables::{
    newton_check, probability_current_analytic, probability_current_field, CurrentProfile,
};
use conserved_ops::output::{write_json, Cell, CsvTable};
use conserved_ops::propagator::{
    estimate_order_1d, estimate_order_yz, evolve_1d, evolve_yz, gaussian_packet, EvolutionSpec, Method,
    TrajectoryRecord,
};
use conserved_ops::symmetry::{linspace, quantization_scan, von_klitzing};
use conserved_ops::verify::{family_y_grid, family_z_grid, run_verify, Suite, VerifyOptions};
use conserved_ops::{build_config, Error, SystemConfig};

#[derive(Parser)]
#[command(
    name = "conserved-ops",
    version,
    about = "Conserved operators, exact solutions and resistance quantization for a charged particle in constant fields"
)]
struct Cli {
    /// JSON configuration file; the built-in natural-units default otherwise.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for CSV and JSON outputs.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    /// Override the configured unit system.
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,

    /// Print the JSON summary to stdout instead of the text report.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Units {
    Natural,
    Cgs,
    Si,
}

impl Units {
    fn kind(self) -> UnitKind {
        match self {
            Units::Natural => UnitKind::Natural,
            Units::Cgs => UnitKind::Cgs,
            Units::Si => UnitKind::Si,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites.
    Verify(VerifyArgs),
    /// Crank–Nicolson evolution of a Gaussian packet in the electric field.
    Evolve1d(Evolve1dArgs),
    /// Split-step evolution of a Landau state in the transverse plane.
    EvolveLandau(EvolveLandauArgs),
    /// Scan time shifts for the quantization condition.
    Quantize(QuantizeArgs),
    /// Sample a closed-form solution on a grid.
    Eval(EvalArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated suites to run.
    #[arg(long, value_delimiter = ',')]
    filter: Vec<String>,
    /// Extra operator to check for conservation (repeatable).
    #[arg(long = "op")]
    ops: Vec<String>,
}

#[derive(Args)]
struct Evolve1dArgs {
    /// Time step.
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Number of steps.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Record every this many steps.
    #[arg(long, default_value_t = 100)]
    cadence: usize,
    /// Grid points.
    #[arg(long, default_value_t = 2048)]
    points: usize,
    /// Grid length.
    #[arg(long, default_value_t = 40.0)]
    length: f64,
    /// Initial packet centre.
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    /// Initial packet width.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Initial mean wavenumber.
    #[arg(long, default_value_t = 0.0)]
    k0: f64,
    /// Also estimate the convergence order over the run length.
    #[arg(long)]
    richardson: bool,
    /// Also write the density and current of the final state.
    #[arg(long)]
    current: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Y,
    Z,
}

impl FamilyArg {
    fn family(self) -> LandauFamily {
        match self {
            FamilyArg::Y => LandauFamily::Y,
            FamilyArg::Z => LandauFamily::Z,
        }
    }
}

#[derive(Args)]
struct EvolveLandauArgs {
    /// Landau index.
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Time step; a 256th of a cyclotron period by default.
    #[arg(long)]
    dt: Option<f64>,
    /// Steps; ten cyclotron periods by default.
    #[arg(long)]
    steps: Option<usize>,
    /// Record every this many steps.
    #[arg(long, default_value_t = 256)]
    cadence: usize,
    /// Also estimate the convergence order over the run length.
    #[arg(long)]
    richardson: bool,
}

#[derive(Args)]
struct QuantizeArgs {
    /// Displacement along x.
    #[arg(long)]
    dx: f64,
    /// Smallest time shift.
    #[arg(long)]
    dt_min: f64,
    /// Largest time shift.
    #[arg(long)]
    dt_max: f64,
    /// Number of scan points.
    #[arg(long, default_value_t = 1000)]
    dt_steps: usize,
    /// Tolerance on |n_real - n|, relative to |n| + 1.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolutionArg {
    /// `phi_electric`.
    Electric,
    /// `phi_electric(x, t - dt)` with the configured `dt`.
    Shifted,
    /// `P_j phi` with `j = --index`.
    Ladder,
    /// Transverse Landau state of the y-family.
    LandauY,
    /// Transverse Landau state of the z-family.
    LandauZ,
    /// `phi_electric` times the y-family, at `x = 0`.
    ParallelY,
    /// `phi_electric` times the z-family, at `x = 0`.
    ParallelZ,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Periodic,
    Dirichlet,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum, default_value = "electric")]
    solution: SolutionArg,
    /// Ladder index or Landau index.
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Grid points per axis.
    #[arg(long, default_value_t = 64)]
    points: usize,
    /// Grid length per axis; the box length for 1D solutions by default.
    #[arg(long)]
    length: Option<f64>,
    /// Boundary condition of the sampling grid.
    #[arg(long, value_enum, default_value = "periodic")]
    boundary: BoundaryArg,
    /// Comma-separated sample times.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    times: Vec<f64>,
    /// Append J, rho and v columns (1D solutions only).
    #[arg(long)]
    current: bool,
}

/// Failure modes mapped to exit codes.
enum Failure {
    Checks(usize),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn load_config(cli: &Cli) -> CliResult<SystemConfig> {
    let mut raw: Value = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid configuration: {e}")))?
        }
        None => SystemConfig::natural().to_document(),
    };
    if let (Some(u), Value::Object(map)) = (cli.units, &mut raw) {
        map.insert(
            "units".into(),
            serde_json::to_value(u.kind()).expect("unit kind serializes"),
        );
    }
    Ok(build_config(&raw)?)
}

fn emit<T: Serialize>(cli: &Cli, path: &Path, summary: &T, text: impl FnOnce() -> String) -> CliResult {
    write_json(path, summary)?;
    if cli.json {
        print!("{}", conserved_ops::output::to_json_string(summary)?);
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(n)) => {
            eprintln!("{n} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    let cfg = load_config(cli)?;
    fs::create_dir_all(&cli.out_dir)?;
    match &cli.command {
        Command::Verify(a) => cmd_verify(cli, &cfg, a),
        Command::Evolve1d(a) => cmd_evolve1d(cli, &cfg, a),
        Command::EvolveLandau(a) => cmd_evolve_landau(cli, &cfg, a),
        Command::Quantize(a) => cmd_quantize(cli, &cfg, a),
        Command::Eval(a) => cmd_eval(cli, &cfg, a),
    }
}

fn cmd_verify(cli: &Cli, cfg: &SystemConfig, a: &VerifyArgs) -> CliResult {
    let suites = a
        .filter
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Suite>())
        .collect::<Result<Vec<_>, _>>()?;
    let report = run_verify(
        cfg,
        &VerifyOptions {
            suites,
            operators: a.ops.clone(),
        },
    );
    emit(cli, &cli.out_dir.join("verify.json"), &report, || report.to_table())?;
    match report.failures() {
        0 => Ok(()),
        n => Err(Failure::Checks(n)),
    }
}

fn trajectory_table(record: &TrajectoryRecord, header_only: bool) -> CsvTable {
    let mut t = CsvTable::new(&record.columns);
    if !header_only {
        for row in &record.rows {
            t.push(row.iter().map(|&v| Cell::Float(v)).collect());
        }
    }
    t
}

fn with_grid_meta(t: CsvTable, prefix: &str, g: &Grid1D) -> CsvTable {
    t.meta(format!("{prefix}_points"), g.len())
        .meta_float(format!("{prefix}_length"), g.length())
        .meta(
            format!("{prefix}_boundary"),
            format!("{:?}", g.boundary()).to_lowercase(),
        )
}

fn config_meta(t: CsvTable, cfg: &SystemConfig) -> CsvTable {
    t.meta("units", format!("{:?}", cfg.units.kind).to_lowercase())
        .meta_float("hbar", cfg.hbar())
        .meta_float("m", cfg.mass())
        .meta_float("q", cfg.charge())
        .meta_float("E", cfg.electric())
        .meta_float("B", cfg.fields.magnetic)
}

fn cmd_evolve1d(cli: &Cli, cfg: &SystemConfig, a: &Evolve1dArgs) -> CliResult {
    let cfg = cfg.clone().with_geometry(Geometry::Electric1d);
    let grid = Grid1D::dirichlet(a.length, a.points)?;
    let f0 = gaussian_packet(grid, a.x0, a.sigma, a.k0, 0.0)?;
    let spec = EvolutionSpec::new(a.dt, a.steps, a.cadence, Method::Cn1d)?;
    let (record, last) = evolve_1d(&f0, &spec, &cfg, None)?;

    let table = config_meta(with_grid_meta(CsvTable::new(&["x"]), "x", &grid), &cfg)
        .meta("method", spec.method)
        .meta_float("dt", a.dt)
        .meta("steps", a.steps)
        .meta("cadence", a.cadence);
    let mut table = CsvTable {
        header: record.columns.clone(),
        ..table
    };
    table.rows = trajectory_table(&record, a.steps == 0).rows;
    table.write(&cli.out_dir.join("evolve1d.csv"))?;

    let norms = record.column("norm").unwrap_or_default();
    let drift = norms.iter().map(|v| (v - norms[0]).abs()).fold(0.0, f64::max);
    let newton = newton_check(&record, &cfg).ok().map(|c| c.max_residual);
    let order = if a.richardson {
        Some(estimate_order_1d(&f0, a.dt * a.steps as f64, a.steps.max(1), &cfg)?)
    } else {
        None
    };
    if a.current {
        let prof = probability_current_field(&last, &cfg)?;
        profile_table(&prof, &last.data)
            .meta_float("t", last.t)
            .write(&cli.out_dir.join("evolve1d_current.csv"))?;
    }
    let summary = json!({
        "method": spec.method,
        "dt": a.dt,
        "steps": a.steps,
        "rows": if a.steps == 0 { 0 } else { record.len() },
        "final_t": last.t,
        "norm_drift": drift,
        "newton_max_residual": newton,
        "richardson_order": order,
    });
    emit(cli, &cli.out_dir.join("evolve1d.json"), &summary, || {
        let mut s = format!("evolve1d: {} steps of {} to t = {}\n", a.steps, a.dt, last.t);
        s += &format!("  norm drift          {drift:.3e}\n");
        if let Some(n) = newton {
            s += &format!("  Newton residual     {n:.3e}\n");
        }
        if let Some(o) = order {
            s += &format!("  Richardson order    {o:.4}\n");
        }
        s
    })
}

fn cmd_evolve_landau(cli: &Cli, cfg: &SystemConfig, a: &EvolveLandauArgs) -> CliResult {
    let cfg = cfg.clone().with_geometry(Geometry::ParallelEb);
    let (grid, shift) = family_y_grid(&cfg)?;
    let state = landau_state(LandauFamily::Y, a.n, shift, &cfg)?;
    let period = 2.0 * std::f64::consts::PI / cfg.cyclotron_frequency()?.abs();
    let dt = a.dt.unwrap_or(period / 256.0);
    let steps = a.steps.unwrap_or(2560);
    let f0 = sample_yz(&state, &grid, 0.0)?;
    let spec = EvolutionSpec::new(dt, steps, a.cadence, Method::SplitYz)?;
    let (record, last) = evolve_yz(&f0, &spec, &cfg, Some(&state))?;

    let base = with_grid_meta(with_grid_meta(CsvTable::new(&["t"]), "y", &grid.y), "z", &grid.z);
    let table = config_meta(base, &cfg)
        .meta("state", &state.label)
        .meta("method", spec.method)
        .meta_float("dt", dt)
        .meta("steps", steps)
        .meta("cadence", a.cadence);
    let mut table = CsvTable {
        header: record.columns.clone(),
        ..table
    };
    table.rows = trajectory_table(&record, steps == 0).rows;
    table.write(&cli.out_dir.join("evolve_landau.csv"))?;

    let fid = record.column("fidelity").unwrap_or_default();
    let min_fid = fid.iter().cloned().fold(f64::INFINITY, f64::min);
    let order = if a.richardson {
        let g = WaveField2D::from_fn(grid, 0.0, |y, z| {
            Complex64::new(
                (-(y - 1.0).powi(2) / 2.0).exp() * (1.0 + 0.3 * z.cos()),
                0.2 * (-y * y).exp() * z.sin(),
            )
        })?;
        Some(estimate_order_yz(&g, 1.0, 20, &cfg)?)
    } else {
        None
    };
    let summary = json!({
        "state": state.label,
        "method": spec.method,
        "dt": dt,
        "steps": steps,
        "cyclotron_period": period,
        "final_t": last.t,
        "min_fidelity": if fid.is_empty() { None } else { Some(min_fid) },
        "richardson_order": order,
    });
    emit(cli, &cli.out_dir.join("evolve_landau.json"), &summary, || {
        let mut s = format!("evolve-landau: {} to t = {}\n", state.label, last.t);
        if !fid.is_empty() {
            s += &format!("  min fidelity        {min_fid:.12}\n");
        }
        if let Some(o) = order {
            s += &format!("  Richardson order    {o:.4}\n");
        }
        s
    })
}

fn cmd_quantize(cli: &Cli, cfg: &SystemConfig, a: &QuantizeArgs) -> CliResult {
    let cfg = cfg.clone().with_geometry(Geometry::Electric1d);
    if a.dt_steps == 0 {
        return Err(Failure::Usage("empty scan range".into()));
    }
    let dts = linspace(a.dt_min, a.dt_max, a.dt_steps);
    let rows = quantization_scan(a.dx, &dts, &cfg, a.tol);
    let si = cfg.units.kind == UnitKind::Si;
    let mut header = vec![
        "dt",
        "n_real",
        "n",
        "is_quantized",
        "V",
        "I",
        "R",
        "R/R_K",
        "phase_deviation",
    ];
    if si {
        header.push("R_ohm");
    }
    header.push("error");
    let mut table = config_meta(CsvTable::new(&header), &cfg)
        .meta_float("dx", a.dx)
        .meta_float("tol", a.tol)
        .meta_float("R_K", von_klitzing(&cfg));
    let mut hits = Vec::new();
    let mut errors = 0;
    for (dt, r) in dts.iter().zip(&rows) {
        let mut row: Vec<Cell> = vec![(*dt).into()];
        match r {
            Ok(r) => {
                row.extend([
                    r.n_real.into(),
                    r.n.into(),
                    r.is_quantized.into(),
                    r.voltage.into(),
                    r.current.into(),
                    r.resistance.into(),
                    r.resistance_in_klitzing.into(),
                    r.phase_deviation.into(),
                ]);
                if si {
                    row.push(r.resistance.into());
                }
                row.push(Cell::Missing);
                if r.is_quantized {
                    hits.push(json!({"dt": dt, "n": r.n, "R": r.resistance, "phase_deviation": r.phase_deviation}));
                }
            }
            Err(e) => {
                errors += 1;
                row.extend(std::iter::repeat_n(Cell::Missing, header.len() - 2));
                row.push(e.to_string().into());
            }
        }
        table.push(row);
    }
    table.write(&cli.out_dir.join("quantize.csv"))?;
    let summary = json!({
        "dx": a.dx,
        "dt_min": a.dt_min,
        "dt_max": a.dt_max,
        "dt_steps": a.dt_steps,
        "tol": a.tol,
        "units": cfg.units.kind,
        "von_klitzing": von_klitzing(&cfg),
        "integer_hits": hits,
        "error_rows": errors,
    });
    emit(cli, &cli.out_dir.join("quantize.json"), &summary, || {
        let mut s = format!(
            "quantize: {} points, {} integer hits, {} error rows\n",
            a.dt_steps,
            hits.len(),
            errors
        );
        for h in &hits {
            s += &format!("  n = {:>4}  dt = {}  R = {}\n", h["n"], h["dt"], h["R"]);
        }
        s
    })
}

fn profile_table(prof: &CurrentProfile, values: &[Complex64]) -> CsvTable {
    let mut t = CsvTable::new(&["x", "re", "im", "abs2", "J", "rho", "v"]);
    for (k, v) in values.iter().enumerate() {
        t.push(vec![
            prof.x[k].into(),
            v.re.into(),
            v.im.into(),
            v.norm_sqr().into(),
            prof.j[k].into(),
            prof.rho[k].into(),
            prof.v[k].into(),
        ]);
    }
    t
}

fn cmd_eval(cli: &Cli, cfg: &SystemConfig, a: &EvalArgs) -> CliResult {
    let boundary = match a.boundary {
        BoundaryArg::Periodic => Boundary::Periodic,
        BoundaryArg::Dirichlet => Boundary::Dirichlet,
    };
    let one_d = matches!(
        a.solution,
        SolutionArg::Electric | SolutionArg::Shifted | SolutionArg::Ladder
    );
    let path = cli.out_dir.join("eval.csv");
    if one_d {
        let cfg = cfg.clone().with_geometry(Geometry::Electric1d);
        let sol: AnalyticSolution = match a.solution {
            SolutionArg::Electric => electric_solution(&cfg),
            SolutionArg::Shifted => electric_shifted_solution(cfg.displacements.dt, &cfg),
            _ => ladder_solution(a.index, &cfg)?,
        };
        let grid = Grid1D::new(a.length.unwrap_or(cfg.box_length), a.points, boundary)?;
        let mut header = vec!["x", "t", "re", "im", "abs2"];
        if a.current {
            header.extend(["J", "rho", "v"]);
        }
        let mut table = config_meta(with_grid_meta(CsvTable::new(&header), "x", &grid), &cfg)
            .meta("family", format!("{:?}", sol.family))
            .meta("solution", &sol.label);
        for &t in &a.times {
            let f = sample(&sol, &grid, t)?;
            let prof = if a.current {
                Some(probability_current_analytic(&sol, &grid, t, &cfg)?)
            } else {
                None
            };
            for (i, v) in f.data.iter().enumerate() {
                let mut row: Vec<Cell> = vec![
                    grid.coordinate(i).into(),
                    t.into(),
                    v.re.into(),
                    v.im.into(),
                    v.norm_sqr().into(),
                ];
                if let Some(p) = &prof {
                    row.extend([p.j[i].into(), p.rho[i].into(), p.v[i].into()]);
                }
                table.push(row);
            }
        }
        table.write(&path)?;
        println!(
            "eval: {} x {} samples of {} -> {}",
            a.times.len(),
            grid.len(),
            sol.label,
            path.display()
        );
        return Ok(());
    }

    if a.current {
        return Err(Failure::Usage("--current applies to 1D solutions only".into()));
    }
    let cfg = cfg.clone().with_geometry(Geometry::ParallelEb);
    let family = match a.solution {
        SolutionArg::LandauY | SolutionArg::ParallelY => FamilyArg::Y,
        _ => FamilyArg::Z,
    }
    .family();
    let (default_grid, default_shift) = match family {
        LandauFamily::Y => family_y_grid(&cfg)?,
        LandauFamily::Z => family_z_grid(&cfg)?,
    };
    let grid = match a.length {
        Some(l) => Grid2D::new(Grid1D::new(l, a.points, boundary)?, Grid1D::new(l, a.points, boundary)?),
        None => default_grid,
    };
    let shifts = cfg.displacements;
    let shift = match family {
        LandauFamily::Y if shifts.dy != 0.0 => shifts.dy,
        LandauFamily::Z if shifts.dz != 0.0 => shifts.dz,
        _ => default_shift,
    };
    let sol = match a.solution {
        SolutionArg::LandauY | SolutionArg::LandauZ => landau_state(family, a.index, shift, &cfg)?,
        _ => {
            let mut s = shifts;
            s.dy = shift;
            s.dz = shift;
            parallel_solution(family, a.index, &s, &cfg)?
        }
    };
    let base = with_grid_meta(
        with_grid_meta(CsvTable::new(&["y", "z", "t", "re", "im", "abs2"]), "y", &grid.y),
        "z",
        &grid.z,
    );
    let mut table = config_meta(base, &cfg)
        .meta("family", format!("{:?}", sol.family))
        .meta("solution", &sol.label);
    for &t in &a.times {
        for (iy, y) in grid.y.coordinates().into_iter().enumerate() {
            for (iz, z) in grid.z.coordinates().into_iter().enumerate() {
                let v = sol.evaluate(&Point { x: 0.0, y, z, t });
                debug_assert_eq!(grid.index(iy, iz), iy * grid.z.len() + iz);
                table.push(vec![
                    y.into(),
                    z.into(),
                    t.into(),
                    v.re.into(),
                    v.im.into(),
                    v.norm_sqr().into(),
                ]);
            }
        }
    }
    table.write(&path)?;
    println!(
        "eval: {} x {} samples of {} -> {}",
        a.times.len(),
        grid.len(),
        sol.label,
        path.display()
    );
    Ok(())
}
