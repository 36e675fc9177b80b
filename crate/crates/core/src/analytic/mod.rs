//! Closed-form wavefunctions of both systems.

mod electric;
mod ladder;
mod landau;
mod oscillator;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::config::DisplacementParams;

pub use electric::{electric_shifted_solution, electric_solution, normalization, phi_electric, psi_electric_shifted};
pub use ladder::{
    degeneracy_polynomial, ladder_solution, superposition_coefficient, superposition_taylor, BivariatePoly, LadderTable,
};
pub use landau::{
    full_parallel_solution, landau_level, landau_state, parallel_solution, phi2_family_y, phi2_family_z, LandauFamily,
};
pub use oscillator::{hermite_poly, oscillator_eigenfunction, MAX_HERMITE_ORDER};

/// A point in space-time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
}

impl Point {
    pub fn xt(x: f64, t: f64) -> Self {
        Point {
            x,
            t,
            ..Self::default()
        }
    }

    pub fn yzt(y: f64, z: f64, t: f64) -> Self {
        Point {
            y,
            z,
            t,
            ..Self::default()
        }
    }
}

pub type Evaluator = Arc<dyn Fn(&Point) -> Complex64 + Send + Sync>;

/// `x` wavenumber of the leading plane-wave factor as a function of time.
pub type WavenumberFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Electric1dFundamental,
    Electric1dShifted,
    Electric1dLadder,
    ParallelFamilyY,
    ParallelFamilyZ,
    ParallelSuperposition,
    /// Test functions that are not solutions.
    Custom,
}

/// A closed-form map `(x, y, z, t) -> amplitude`, tagged with its family.
#[derive(Clone)]
pub struct AnalyticSolution {
    pub family: Family,
    pub quantum_number: Option<u32>,
    pub shifts: DisplacementParams,
    pub label: String,
    eval: Evaluator,
    grad_x: Option<Evaluator>,
    kx: Option<WavenumberFn>,
}

impl fmt::Debug for AnalyticSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticSolution")
            .field("family", &self.family)
            .field("quantum_number", &self.quantum_number)
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl AnalyticSolution {
    pub fn new(
        family: Family,
        label: impl Into<String>,
        eval: impl Fn(&Point) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        AnalyticSolution {
            family,
            quantum_number: None,
            shifts: DisplacementParams::default(),
            label: label.into(),
            eval: Arc::new(eval),
            grad_x: None,
            kx: None,
        }
    }

    /// A test function that is not expected to solve anything.
    pub fn custom(label: impl Into<String>, eval: impl Fn(&Point) -> Complex64 + Send + Sync + 'static) -> Self {
        Self::new(Family::Custom, label, eval)
    }

    pub fn with_quantum_number(mut self, n: u32) -> Self {
        self.quantum_number = Some(n);
        self
    }

    pub fn with_shifts(mut self, shifts: DisplacementParams) -> Self {
        self.shifts = shifts;
        self
    }

    pub fn with_grad_x(mut self, grad: impl Fn(&Point) -> Complex64 + Send + Sync + 'static) -> Self {
        self.grad_x = Some(Arc::new(grad));
        self
    }

    pub fn with_wavenumber_x(mut self, k: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.kx = Some(Arc::new(k));
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn evaluate(&self, p: &Point) -> Complex64 {
        (self.eval)(p)
    }

    /// Closed-form `d/dx`, when the family provides one.
    pub fn grad_x(&self, p: &Point) -> Option<Complex64> {
        self.grad_x.as_ref().map(|g| g(p))
    }

    pub fn wavenumber_x(&self, t: f64) -> Option<f64> {
        self.kx.as_ref().map(|k| k(t))
    }

    pub(crate) fn evaluator(&self) -> Evaluator {
        Arc::clone(&self.eval)
    }

    pub(crate) fn grad_evaluator(&self) -> Option<Evaluator> {
        self.grad_x.clone()
    }

    pub(crate) fn wavenumber_fn(&self) -> Option<WavenumberFn> {
        self.kx.clone()
    }

    /// Same metadata, new evaluators.
    pub(crate) fn remap(
        &self,
        label: String,
        eval: Evaluator,
        grad_x: Option<Evaluator>,
        kx: Option<WavenumberFn>,
    ) -> Self {
        AnalyticSolution {
            family: self.family,
            quantum_number: self.quantum_number,
            shifts: self.shifts,
            label,
            eval,
            grad_x,
            kx,
        }
    }
}
