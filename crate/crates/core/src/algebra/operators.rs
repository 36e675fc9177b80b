//! The conserved operators and Hamiltonians of the two systems, and the
//! identities they satisfy.

use super::expr::OperatorExpr;
use super::monomial::{Generator, Param};
use super::parser::parse_operator;
use crate::config::{Geometry, SystemConfig};
use crate::{Error, Result};

pub const DEFAULT_LADDER_DEPTH: usize = crate::config::DEFAULT_LADDER_DEPTH;

fn gen(g: Generator) -> OperatorExpr {
    OperatorExpr::generator(g)
}

fn par(p: Param) -> OperatorExpr {
    OperatorExpr::param(p)
}

fn i_hbar() -> OperatorExpr {
    OperatorExpr::i() * par(Param::Hbar)
}

/// `[a, b] = ab - ba`, normal-ordered.
pub fn commutator(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    a * b - b * a
}

/// Explicit time derivative (formal derivative in `t`).
pub fn partial_t(expr: &OperatorExpr) -> OperatorExpr {
    expr.partial_t()
}

/// `(1/(i hbar)) [f, H] + df/dt`; zero exactly when `f` is conserved.
pub fn heisenberg_residual(f: &OperatorExpr, h: &OperatorExpr) -> Result<OperatorExpr> {
    if h.has_generator(Generator::Dt) {
        return Err(Error::Algebra("Hamiltonian must be time-local".into()));
    }
    let inv = i_hbar().scalar_inverse()?;
    Ok(inv * commutator(f, h) + f.partial_t())
}

/// `p_x - qEt`.
pub fn f_hat() -> OperatorExpr {
    gen(Generator::Px) - par(Param::Q) * par(Param::E) * gen(Generator::T)
}

/// `i hbar Dt`.
pub fn energy_operator() -> OperatorExpr {
    i_hbar() * gen(Generator::Dt)
}

/// `p_x - qEt` in the parallel-field system.
pub fn pi_x() -> OperatorExpr {
    f_hat()
}

/// `p_y - m wc z`.
pub fn pi_y() -> OperatorExpr {
    gen(Generator::Py) - par(Param::M) * par(Param::Wc) * gen(Generator::Z)
}

/// `p_z`.
pub fn pi_z() -> OperatorExpr {
    gen(Generator::Pz)
}

fn half_inverse_mass() -> OperatorExpr {
    OperatorExpr::rational(1, 2) * OperatorExpr::param_pow(Param::M, -1)
}

/// `p_x^2/2m - qEx` with symbolic parameters.
pub fn hamiltonian_1d_symbolic() -> OperatorExpr {
    half_inverse_mass() * gen(Generator::Px).pow(2) - par(Param::Q) * par(Param::E) * gen(Generator::X)
}

/// `(p_x^2 + p_y^2 + (p_z - m wc y)^2)/2m - qEx` with symbolic parameters.
pub fn hamiltonian_parallel_symbolic() -> OperatorExpr {
    let kinetic_z = gen(Generator::Pz) - par(Param::M) * par(Param::Wc) * gen(Generator::Y);
    half_inverse_mass() * (gen(Generator::Px).pow(2) + gen(Generator::Py).pow(2) + kinetic_z.pow(2))
        - par(Param::Q) * par(Param::E) * gen(Generator::X)
}

/// The 1D Hamiltonian, or the configured override text when present.
pub fn hamiltonian_1d(cfg: &SystemConfig) -> Result<OperatorExpr> {
    cfg.require_geometry(Geometry::Electric1d)?;
    match &cfg.hamiltonian_1d {
        Some(text) => parse_operator(text),
        None => Ok(hamiltonian_1d_symbolic()),
    }
}

/// The parallel-field Hamiltonian, or the configured override text when present.
pub fn hamiltonian_parallel(cfg: &SystemConfig) -> Result<OperatorExpr> {
    cfg.require_geometry(Geometry::ParallelEb)?;
    match &cfg.hamiltonian_parallel {
        Some(text) => parse_operator(text),
        None => Ok(hamiltonian_parallel_symbolic()),
    }
}

/// `[f, E^(j+1)] - i hbar qE (j+1) E^j`, which must vanish identically.
pub fn eigen_ladder_check(j: u32) -> OperatorExpr {
    let e = energy_operator();
    let lhs = commutator(&f_hat(), &e.pow(j + 1));
    let rhs = OperatorExpr::integer(i64::from(j) + 1) * i_hbar() * par(Param::Q) * par(Param::E) * e.pow(j);
    lhs - rhs
}
