use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{fmt_rational, is_unit, Generator, Param, ParamMonomial, ParamValues};
use crate::{Error, Result};

/// A normal-ordered generator word, stored as exponents in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub(crate) [u32; 8]);

impl Word {
    pub fn identity() -> Self {
        Word([0; 8])
    }

    pub fn single(g: Generator) -> Self {
        let mut w = [0; 8];
        w[g.index()] = 1;
        Word(w)
    }

    pub fn exponent(&self, g: Generator) -> u32 {
        self.0[g.index()]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Canonically conjugate pairs: (position-like index, derivative-like index,
/// whether the commutator is `-i hbar` rather than `1`).
///
/// `[p, q] = -i hbar` for the spatial pairs and `[Dt, T] = 1`.
const PAIRS: [(usize, usize, bool); 4] = [(0, 4, true), (1, 5, true), (2, 6, true), (3, 7, false)];

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// `(-i hbar)^k` as (negate, monomial).
fn minus_i_hbar_pow(k: u32) -> (bool, ParamMonomial) {
    let mut mono = ParamMonomial::param(Param::Hbar, k as i32);
    let (negate, imag) = match k % 4 {
        0 => (false, false),
        1 => (true, true),
        2 => (true, false),
        _ => (false, true),
    };
    mono.imag = imag;
    (negate, mono)
}

/// Normal-ordered expansion of the product of two normal-ordered words.
///
/// Within one conjugate pair, `p^b q^a = sum_k C(b,k) C(a,k) k! [p,q]^k q^(a-k) p^(b-k)`;
/// distinct pairs commute, so the full product is the Cartesian product of the
/// per-pair expansions.
fn word_product(a: &Word, b: &Word) -> Vec<(BigRational, ParamMonomial, Word)> {
    let mut acc = vec![(BigRational::one(), ParamMonomial::one(), Word::identity())];
    for &(qi, pi, canonical) in PAIRS.iter() {
        let ap = a.0[pi];
        let bq = b.0[qi];
        let mut next = Vec::with_capacity(acc.len() * (ap.min(bq) as usize + 1));
        for (coeff, mono, word) in &acc {
            for k in 0..=ap.min(bq) {
                let weight = binomial(ap, k) * binomial(bq, k) * factorial(k);
                let (neg_c, comm) = if canonical {
                    minus_i_hbar_pow(k)
                } else {
                    (false, ParamMonomial::one())
                };
                let (neg_m, mono2) = mono.mul(&comm);
                let mut c = coeff * BigRational::from_integer(weight);
                if neg_c ^ neg_m {
                    c = -c;
                }
                let mut w = *word;
                w.0[qi] = a.0[qi] + b.0[qi] - k;
                w.0[pi] = a.0[pi] + b.0[pi] - k;
                next.push((c, mono2, w));
            }
        }
        acc = next;
    }
    acc
}

/// Finite sum of `rational * parameter monomial * normal-ordered word` terms.
///
/// Zero coefficients are pruned, so the zero operator is the empty sum and
/// structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct OperatorExpr {
    terms: BTreeMap<(Word, ParamMonomial), BigRational>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(BigRational::one())
    }

    pub fn scalar(r: BigRational) -> Self {
        Self::term(r, ParamMonomial::one(), Word::identity())
    }

    pub fn integer(n: i64) -> Self {
        Self::scalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(numer: i64, denom: i64) -> Self {
        Self::scalar(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn i() -> Self {
        Self::term(BigRational::one(), ParamMonomial::i(), Word::identity())
    }

    pub fn param(p: Param) -> Self {
        Self::param_pow(p, 1)
    }

    pub fn param_pow(p: Param, exp: i32) -> Self {
        Self::term(BigRational::one(), ParamMonomial::param(p, exp), Word::identity())
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(BigRational::one(), ParamMonomial::one(), Word::single(g))
    }

    pub fn term(coeff: BigRational, mono: ParamMonomial, word: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(coeff, mono, word);
        e
    }

    fn add_term(&mut self, coeff: BigRational, mono: ParamMonomial, word: Word) {
        if coeff.is_zero() {
            return;
        }
        let key = (word, mono);
        let slot = self.terms.entry(key).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ParamMonomial, &BigRational)> {
        self.terms.iter().map(|((w, m), c)| (w, m, c))
    }

    pub fn has_generator(&self, g: Generator) -> bool {
        self.terms.keys().any(|(w, _)| w.exponent(g) > 0)
    }

    /// True when no term carries a generator.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|(w, _)| w.is_identity())
    }

    /// The single term of a one-term scalar, if this is one.
    pub fn as_scalar_monomial(&self) -> Option<(&BigRational, &ParamMonomial)> {
        if self.terms.len() != 1 {
            return None;
        }
        let ((w, m), c) = self.terms.iter().next()?;
        w.is_identity().then_some((c, m))
    }

    /// Inverse of a nonzero single-term scalar.
    pub fn scalar_inverse(&self) -> Result<Self> {
        let (c, m) = self
            .as_scalar_monomial()
            .ok_or_else(|| Error::Algebra("only nonzero scalar monomials can be inverted".into()))?;
        let (neg, inv) = m.inverse();
        let mut r = c.recip();
        if neg {
            r = -r;
        }
        Ok(Self::term(r, inv, Word::identity()))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Formal derivative in the generator `t`, all other generators fixed.
    pub fn partial_t(&self) -> Self {
        let mut out = Self::zero();
        for ((w, m), c) in &self.terms {
            let d = w.exponent(Generator::T);
            if d == 0 {
                continue;
            }
            let mut w2 = *w;
            w2.0[Generator::T.index()] -= 1;
            out.add_term(c * BigRational::from_integer(BigInt::from(d)), *m, w2);
        }
        out
    }

    /// Hermitian adjoint: reversed words, conjugated coefficients, spatial and
    /// momentum generators self-adjoint, `Dt` anti-self-adjoint.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for ((w, m), c) in &self.terms {
            let (neg_conj, mono) = m.conj();
            let mut coeff = c.clone();
            if neg_conj {
                coeff = -coeff;
            }
            if w.exponent(Generator::Dt) % 2 == 1 {
                coeff = -coeff;
            }
            let mut reversed = Vec::with_capacity(w.degree() as usize);
            for g in Generator::ALL.iter().rev() {
                for _ in 0..w.exponent(*g) {
                    reversed.push(*g);
                }
            }
            let word_expr = normal_order(&reversed);
            out = out + &Self::term(coeff, mono, Word::identity()) * &word_expr;
        }
        out
    }

    /// Substitutes exact values for the listed parameters.
    pub fn specialize(&self, values: &ParamValues, params: &[Param]) -> Result<Self> {
        let mut out = Self::zero();
        for ((w, m), c) in &self.terms {
            let mut coeff = c.clone();
            let mut mono = *m;
            for &p in params {
                let e = mono.exponent(p);
                if e == 0 {
                    continue;
                }
                let v = values.exact(p)?;
                if v.is_zero() && e < 0 {
                    return Err(Error::Algebra(format!(
                        "parameter {} is zero but appears with a negative power",
                        p.name()
                    )));
                }
                let factor = if e > 0 {
                    num_traits::pow(v, e as usize)
                } else {
                    num_traits::pow(v.recip(), (-e) as usize)
                };
                coeff *= factor;
                mono.exps[p as usize] = 0;
            }
            out.add_term(coeff, mono, *w);
        }
        Ok(out)
    }

    /// Numeric value of a scalar expression.
    pub fn eval_scalar(&self, values: &ParamValues) -> Result<Complex64> {
        if !self.is_scalar() {
            return Err(Error::Algebra(format!("expression `{self}` is not a scalar")));
        }
        Ok(self
            .terms
            .iter()
            .map(|((_, m), c)| m.evaluate(values) * super::monomial::rational_to_f64(c))
            .sum())
    }

    /// Scalar coefficient multiplying `word` (the sum of all terms with that word).
    pub fn coefficient_of(&self, word: &Word) -> Self {
        let mut out = Self::zero();
        for ((w, m), c) in &self.terms {
            if w == word {
                out.add_term(c.clone(), *m, Word::identity());
            }
        }
        out
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for ((wa, ma), ca) in &self.terms {
            for ((wb, mb), cb) in &rhs.terms {
                let (neg, mono_ab) = ma.mul(mb);
                let mut base = ca * cb;
                if neg {
                    base = -base;
                }
                for (c, mono_w, w) in word_product(wa, wb) {
                    let (neg2, mono) = mono_ab.mul(&mono_w);
                    let mut coeff = &base * c;
                    if neg2 {
                        coeff = -coeff;
                    }
                    out.add_term(coeff, mono, w);
                }
            }
        }
        out
    }
}

/// Normal-ordered form of an arbitrary product of generators.
pub fn normal_order(word: &[Generator]) -> OperatorExpr {
    word.iter()
        .fold(OperatorExpr::one(), |acc, g| &acc * &OperatorExpr::generator(*g))
}

impl Add<&OperatorExpr> for &OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for ((w, m), c) in &rhs.terms {
            out.add_term(c.clone(), *m, *w);
        }
        out
    }
}

impl Sub<&OperatorExpr> for &OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for ((w, m), c) in &rhs.terms {
            out.add_term(-c.clone(), *m, *w);
        }
        out
    }
}

impl Mul<&OperatorExpr> for &OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.mul_impl(rhs)
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        OperatorExpr {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<OperatorExpr> for OperatorExpr {
            type Output = OperatorExpr;
            fn $method(self, rhs: OperatorExpr) -> OperatorExpr {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&OperatorExpr> for OperatorExpr {
            type Output = OperatorExpr;
            fn $method(self, rhs: &OperatorExpr) -> OperatorExpr {
                (&self).$method(rhs)
            }
        }
        impl $tr<OperatorExpr> for &OperatorExpr {
            type Output = OperatorExpr;
            fn $method(self, rhs: OperatorExpr) -> OperatorExpr {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        -&self
    }
}

fn power(name: &str, exp: u32) -> String {
    if exp == 1 {
        name.to_string()
    } else {
        format!("{name}^{exp}")
    }
}

fn fmt_term(coeff: &BigRational, mono: &ParamMonomial, word: &Word) -> String {
    let mut factors: Vec<String> = Vec::new();
    if mono.is_imaginary() {
        factors.push("i".into());
    }
    for p in Param::ALL {
        let e = mono.exponent(p);
        if e > 0 {
            factors.push(power(p.name(), e as u32));
        }
    }
    for g in Generator::ALL {
        let e = word.exponent(g);
        if e > 0 {
            factors.push(power(g.name(), e));
        }
    }
    if !is_unit(coeff) || factors.is_empty() {
        factors.insert(0, fmt_rational(coeff));
    }
    let mut s = factors.join("*");
    for p in Param::ALL {
        let e = mono.exponent(p);
        if e < 0 {
            s.push('/');
            s.push_str(&power(p.name(), (-e) as u32));
        }
    }
    s
}

impl fmt::Display for OperatorExpr {
    /// Canonical text form; re-parses to the same expression.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Graded order: lower total degree first, then x before y before px...
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|((a, _), _), ((b, _), _)| a.degree().cmp(&b.degree()).then(b.0.cmp(&a.0)));
        for (idx, ((w, m), c)) in terms.into_iter().enumerate() {
            let body = fmt_term(c, m, w);
            match (idx, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}
