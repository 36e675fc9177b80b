//! Exact symbolic algebra over the canonical quantum generators.
//!
//! Expressions are noncommutative polynomials in `x, y, z, t, p_x, p_y, p_z`
//! and `Dt` (the explicit time derivative) with coefficients that are exact
//! rationals times monomials in the parameters `hbar, m, q, E, wc, c` and the
//! imaginary unit. Every expression is kept in the normal order
//! `x < y < z < t < p_x < p_y < p_z < Dt`, so two equal operators always have
//! identical storage and "is conserved" is a structural equality test.

mod expr;
mod monomial;
mod operators;
mod parser;

pub use expr::{normal_order, OperatorExpr, Word};
pub use monomial::{Generator, Param, ParamMonomial, ParamValues};
pub use operators::{
    commutator, eigen_ladder_check, energy_operator, f_hat, hamiltonian_1d, hamiltonian_1d_symbolic,
    hamiltonian_parallel, hamiltonian_parallel_symbolic, heisenberg_residual, partial_t, pi_x, pi_y, pi_z,
    DEFAULT_LADDER_DEPTH,
};
pub use parser::parse_operator;
