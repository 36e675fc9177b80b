use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::{Error, Result};

/// Noncommuting generators, declared in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    X,
    Y,
    Z,
    T,
    Px,
    Py,
    Pz,
    /// `d/dt` acting on explicit time dependence; `[Dt, T] = 1`.
    Dt,
}

impl Generator {
    pub const ALL: [Generator; 8] = [
        Generator::X,
        Generator::Y,
        Generator::Z,
        Generator::T,
        Generator::Px,
        Generator::Py,
        Generator::Pz,
        Generator::Dt,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::X => "x",
            Generator::Y => "y",
            Generator::Z => "z",
            Generator::T => "t",
            Generator::Px => "px",
            Generator::Py => "py",
            Generator::Pz => "pz",
            Generator::Dt => "dt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Generator::ALL.into_iter().find(|g| g.name() == name)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Symbolic parameters appearing in coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Hbar,
    M,
    Q,
    E,
    Wc,
    C,
}

impl Param {
    pub const ALL: [Param; 6] = [Param::Hbar, Param::M, Param::Q, Param::E, Param::Wc, Param::C];

    pub fn name(self) -> &'static str {
        match self {
            Param::Hbar => "hbar",
            Param::M => "m",
            Param::Q => "q",
            Param::E => "E",
            Param::Wc => "wc",
            Param::C => "c",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Param::ALL.into_iter().find(|p| p.name() == name)
    }
}

/// Product of integer powers of the parameters and at most one factor of `i`.
///
/// `i^2 = -1` is folded into the rational coefficient as soon as it appears,
/// so the `i` exponent is always 0 or 1 and the representation stays unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ParamMonomial {
    pub(crate) exps: [i32; 6],
    pub(crate) imag: bool,
}

impl ParamMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn i() -> Self {
        ParamMonomial {
            exps: [0; 6],
            imag: true,
        }
    }

    pub fn param(p: Param, exp: i32) -> Self {
        let mut m = Self::one();
        m.exps[p as usize] = exp;
        m
    }

    pub fn exponent(&self, p: Param) -> i32 {
        self.exps[p as usize]
    }

    pub fn is_imaginary(&self) -> bool {
        self.imag
    }

    /// Product, returning `true` in the first slot when `i*i` produced a sign flip.
    pub fn mul(&self, other: &Self) -> (bool, Self) {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps) {
            *e += o;
        }
        let negate = self.imag && other.imag;
        (
            negate,
            ParamMonomial {
                exps,
                imag: self.imag ^ other.imag,
            },
        )
    }

    /// Multiplicative inverse as (sign flip, monomial); `1/i = -i`.
    pub fn inverse(&self) -> (bool, Self) {
        let mut exps = self.exps;
        for e in exps.iter_mut() {
            *e = -*e;
        }
        (self.imag, ParamMonomial { exps, imag: self.imag })
    }

    /// Complex conjugate as (sign flip, monomial); parameters are real.
    pub fn conj(&self) -> (bool, Self) {
        (self.imag, *self)
    }

    pub fn evaluate(&self, values: &ParamValues) -> Complex64 {
        let mut v = 1.0;
        for (p, &e) in Param::ALL.iter().zip(self.exps.iter()) {
            if e != 0 {
                v *= values.get(*p).powi(e);
            }
        }
        if self.imag {
            Complex64::new(0.0, v)
        } else {
            Complex64::new(v, 0.0)
        }
    }
}

/// Numeric parameter values used to evaluate or specialize expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamValues {
    values: [f64; 6],
}

impl ParamValues {
    pub fn new(hbar: f64, m: f64, q: f64, e: f64, wc: f64, c: f64) -> Self {
        ParamValues {
            values: [hbar, m, q, e, wc, c],
        }
    }

    /// Values from a run configuration; `wc` is zero outside the parallel geometry.
    pub fn from_config(cfg: &crate::SystemConfig) -> Self {
        let wc = cfg.cyclotron_frequency().unwrap_or(0.0);
        ParamValues::new(cfg.hbar(), cfg.mass(), cfg.charge(), cfg.electric(), wc, cfg.units.c)
    }

    pub fn get(&self, p: Param) -> f64 {
        self.values[p as usize]
    }

    pub(crate) fn exact(&self, p: Param) -> Result<BigRational> {
        BigRational::from_float(self.get(p))
            .ok_or_else(|| Error::Algebra(format!("parameter {} is not finite", p.name())))
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both parts down to keep the quotient representable.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n: BigInt = r.numer() >> shift;
            let d: BigInt = r.denom() >> shift;
            n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
        }
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    let r = r.abs();
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn is_unit(r: &BigRational) -> bool {
    r.abs().is_one()
}
