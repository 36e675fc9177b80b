//! Text grammar for operator expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | identifier | '(' expr ')'
//! ```
//!
//! Identifiers are the generators `x y z t px py pz dt`, the parameters
//! `hbar m q E wc c` and the imaginary unit `i`. Numbers are decimal literals
//! and are read exactly. Multiplication must be written out; division is only
//! allowed by a nonzero scalar monomial such as `2*m` or `hbar^2`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::expr::OperatorExpr;
use super::monomial::{Generator, Param};
use crate::{Error, Result};

const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                out.push((start, Tok::Num(parse_decimal(&text[start..i], start)?)));
                continue;
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

fn parse_decimal(s: &str, offset: usize) -> Result<BigRational> {
    let mut parts = s.splitn(2, '.');
    let int_part = parts.next().unwrap_or("");
    let frac_part = parts.next().unwrap_or("");
    if frac_part.contains('.') || (int_part.is_empty() && frac_part.is_empty()) {
        return Err(err(offset, format!("malformed number `{s}`")));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits
        .parse()
        .map_err(|_| err(offset, format!("malformed number `{s}`")))?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(BigRational::new(numer, denom))
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<OperatorExpr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let divisor = self.unary()?;
                    let inv = divisor
                        .scalar_inverse()
                        .map_err(|_| err(at, "division is only allowed by a nonzero scalar monomial"))?;
                    acc = acc * inv;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<OperatorExpr> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<OperatorExpr> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let at = self.offset();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    if !n.is_integer() {
                        return Err(err(at, "exponent must be a non-negative integer"));
                    }
                    let k: u32 = n
                        .to_integer()
                        .try_into()
                        .ok()
                        .filter(|k| *k <= MAX_EXPONENT)
                        .ok_or_else(|| err(at, format!("exponent exceeds the maximum of {MAX_EXPONENT}")))?;
                    return Ok(base.pow(k));
                }
                Some(Tok::Minus) => return Err(err(at, "negative exponent")),
                _ => return Err(err(at, "expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<OperatorExpr> {
        let at = self.offset();
        let tok = self.peek().cloned().ok_or_else(|| err(at, "unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(OperatorExpr::scalar(n)),
            Tok::Ident(name) => {
                if name == "i" {
                    Ok(OperatorExpr::i())
                } else if let Some(g) = Generator::from_name(&name) {
                    Ok(OperatorExpr::generator(g))
                } else if let Some(p) = Param::from_name(&name) {
                    Ok(OperatorExpr::param(p))
                } else {
                    Err(err(at, format!("unknown identifier `{name}`")))
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(err(self.offset(), "expected `)`")),
                }
            }
            other => Err(err(at, format!("unexpected token {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
    }
}

/// Parses operator text into its normal-ordered form.
pub fn parse_operator(text: &str) -> Result<OperatorExpr> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos != toks.len() {
        let at = p.offset();
        let what = describe(&toks[p.pos].1);
        return Err(err(at, format!("unexpected {what}; multiplication must be explicit")));
    }
    Ok(e)
}
