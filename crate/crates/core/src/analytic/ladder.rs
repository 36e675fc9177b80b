//! The energy-operator degeneracy ladder `E^j phi = P_j(x, t) phi` and its
//! resummation.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use super::electric::phi_electric;
use super::{AnalyticSolution, Family, Point};
use crate::algebra::{Generator, OperatorExpr, Param, ParamValues, Word};
use crate::config::SystemConfig;
use crate::{Error, Result};

/// Hard cap on ladder indices, independent of the configured depth.
pub const MAX_LADDER_INDEX: usize = 64;

static SYMBOLIC_LADDER: OnceLock<Mutex<Vec<OperatorExpr>>> = OnceLock::new();

/// `q^2 E^2 t^2 / 2m - qEx`, the factor produced by one application of `E`.
fn energy_factor() -> OperatorExpr {
    let q = OperatorExpr::param(Param::Q);
    let e = OperatorExpr::param(Param::E);
    OperatorExpr::rational(1, 2)
        * q.pow(2)
        * e.pow(2)
        * OperatorExpr::param_pow(Param::M, -1)
        * OperatorExpr::generator(Generator::T).pow(2)
        - q * e * OperatorExpr::generator(Generator::X)
}

/// Symbolic `P_j`, built by `P_{j+1} = i hbar dP_j/dt + (q^2E^2t^2/2m - qEx) P_j`
/// and cached for reuse.
fn symbolic_polynomial(j: usize) -> OperatorExpr {
    let cache = SYMBOLIC_LADDER.get_or_init(|| Mutex::new(vec![OperatorExpr::one()]));
    let mut polys = cache.lock().unwrap_or_else(|e| e.into_inner());
    if polys.len() <= j {
        let i_hbar = OperatorExpr::i() * OperatorExpr::param(Param::Hbar);
        let factor = energy_factor();
        while polys.len() <= j {
            let last = polys.last().expect("seeded with P_0");
            let next = &i_hbar * &last.partial_t() + &factor * last;
            polys.push(next);
        }
    }
    polys[j].clone()
}

/// `P_j(x, t)` as a dense table of `x^a t^b` coefficients, with the exact
/// symbolic form kept alongside.
#[derive(Debug, Clone)]
pub struct BivariatePoly {
    symbolic: OperatorExpr,
    coeffs: Vec<Vec<Complex64>>,
}

impl BivariatePoly {
    fn from_symbolic(symbolic: OperatorExpr, values: &ParamValues) -> Result<Self> {
        let mut coeffs: Vec<Vec<Complex64>> = Vec::new();
        for (w, mono, c) in symbolic.terms() {
            let a = w.exponent(Generator::X) as usize;
            let b = w.exponent(Generator::T) as usize;
            if w.degree() as usize != a + b {
                return Err(Error::Algebra("ladder polynomial may only contain x and t".into()));
            }
            if coeffs.len() <= a {
                coeffs.resize(a + 1, Vec::new());
            }
            if coeffs[a].len() <= b {
                coeffs[a].resize(b + 1, Complex64::new(0.0, 0.0));
            }
            let term = OperatorExpr::term(c.clone(), *mono, Word::identity());
            coeffs[a][b] += term.eval_scalar(values)?;
        }
        let mut poly = BivariatePoly { symbolic, coeffs };
        poly.trim();
        Ok(poly)
    }

    fn trim(&mut self) {
        for row in self.coeffs.iter_mut() {
            while row.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
                row.pop();
            }
        }
        while self.coeffs.last().is_some_and(|r| r.is_empty()) {
            self.coeffs.pop();
        }
    }

    pub fn symbolic(&self) -> &OperatorExpr {
        &self.symbolic
    }

    /// Degree in `x`; `None` for the zero polynomial.
    pub fn x_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.coeffs.iter().map(|r| r.len()).max()?.checked_sub(1)
    }

    pub fn coefficient(&self, x_power: usize, t_power: usize) -> Complex64 {
        self.coeffs
            .get(x_power)
            .and_then(|r| r.get(t_power))
            .copied()
            .unwrap_or_default()
    }

    fn row_at(row: &[Complex64], t: f64) -> Complex64 {
        row.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c)
    }

    /// Horner evaluation, `x`-major.
    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, row| acc * x + Self::row_at(row, t))
    }

    /// `dP/dx` at `(x, t)`.
    pub fn eval_dx(&self, x: f64, t: f64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (a, row)| {
                acc * x + Self::row_at(row, t) * a as f64
            })
    }
}

fn check_depth(j: usize, cfg: &SystemConfig) -> Result<()> {
    if j > cfg.ladder_depth || j > MAX_LADDER_INDEX {
        return Err(Error::domain(format!(
            "ladder index {j} exceeds the configured depth {}",
            cfg.ladder_depth.min(MAX_LADDER_INDEX)
        )));
    }
    Ok(())
}

/// `P_j` with `E^j phi = P_j phi`, numerically specialized to `cfg`.
pub fn degeneracy_polynomial(j: usize, cfg: &SystemConfig) -> Result<BivariatePoly> {
    check_depth(j, cfg)?;
    BivariatePoly::from_symbolic(symbolic_polynomial(j), &ParamValues::from_config(cfg))
}

/// `c_j = (-dt)^j / (j! (i hbar)^j)`, evaluated in log space with the phase
/// tracked separately.
///
/// The sign of `dt` is chosen so the series sums to `phi(x, t - dt)`, the
/// same function the time-shift unitary produces.
pub fn superposition_coefficient(j: usize, dt: f64, hbar: f64) -> Complex64 {
    if j == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if dt == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let ln_factorial: f64 = (1..=j).map(|k| (k as f64).ln()).sum();
    let ln_mag = j as f64 * dt.abs().ln() - ln_factorial - j as f64 * hbar.ln();
    // (-sign(dt))^j * (-i)^j
    let sign_flips = if dt > 0.0 { j % 2 } else { 0 };
    let quarter_turns = (3 * j) % 4;
    let unit = match quarter_turns {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let sign = if sign_flips == 1 { -1.0 } else { 1.0 };
    unit * (sign * ln_mag.exp())
}

/// Numeric ladder polynomials `P_0..=P_depth` for one configuration.
#[derive(Debug, Clone)]
pub struct LadderTable {
    cfg: SystemConfig,
    polys: Vec<BivariatePoly>,
}

impl LadderTable {
    pub fn new(depth: usize, cfg: &SystemConfig) -> Result<Self> {
        check_depth(depth, cfg)?;
        let polys = (0..=depth)
            .map(|j| degeneracy_polynomial(j, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(LadderTable {
            cfg: cfg.clone(),
            polys,
        })
    }

    pub fn depth(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn polynomial(&self, j: usize) -> Option<&BivariatePoly> {
        self.polys.get(j)
    }

    /// `sum_{j<=terms} c_j P_j(x,t) phi(x,t)`.
    pub fn superposition(&self, x: f64, t: f64, dt: f64, terms: usize) -> Result<Complex64> {
        if terms > self.depth() {
            return Err(Error::domain(format!(
                "requested {terms} terms but the table holds {}",
                self.depth()
            )));
        }
        let hbar = self.cfg.hbar();
        let sum: Complex64 = self.polys[..=terms]
            .iter()
            .enumerate()
            .map(|(j, p)| superposition_coefficient(j, dt, hbar) * p.eval(x, t))
            .sum();
        Ok(sum * phi_electric(x, t, &self.cfg))
    }
}

/// Truncated resummation of the ladder; tends to `phi(x, t - dt)`.
pub fn superposition_taylor(x: f64, t: f64, dt: f64, terms: usize, cfg: &SystemConfig) -> Result<Complex64> {
    LadderTable::new(terms, cfg)?.superposition(x, t, dt, terms)
}

/// `E^j phi` as an evaluable solution.
pub fn ladder_solution(j: usize, cfg: &SystemConfig) -> Result<AnalyticSolution> {
    let poly = Arc::new(degeneracy_polynomial(j, cfg)?);
    let (p1, c1) = (Arc::clone(&poly), cfg.clone());
    let (p2, c2) = (poly, cfg.clone());
    let kx = cfg.clone();
    Ok(AnalyticSolution::new(
        Family::Electric1dLadder,
        format!("E^{j} phi_electric"),
        move |p: &Point| p1.eval(p.x, p.t) * phi_electric(p.x, p.t, &c1),
    )
    .with_quantum_number(j as u32)
    .with_grad_x(move |p: &Point| {
        let k = c2.force() * p.t / c2.hbar();
        (p2.eval_dx(p.x, p.t) + p2.eval(p.x, p.t) * Complex64::new(0.0, k)) * phi_electric(p.x, p.t, &c2)
    })
    .with_wavenumber_x(move |t| kx.force() * t / kx.hbar()))
}
