//! Recursive-descent parser for polynomial expressions in `x`, `y`.
//!
//! ```text
//! expr   = ['+'|'-'] term (('+'|'-') term)*
//! term   = power (('*'|'/')? power)*        -- juxtaposition multiplies
//! power  = atom ('^' integer)?
//! atom   = number | 'x' | 'y' | 'i' | 'sqrt' '(' expr ')' | '(' expr ')'
//! number = digits ('.' digits)? (('e'|'E') ['+'|'-'] digits)?
//! ```
//!
//! Numbers are read exactly (decimals become rationals). Division is only
//! allowed by constants, and `sqrt` only of rational constants. `i` is the
//! imaginary unit `sqrt(-1)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Sparse bivariate polynomial: `(deg_x, deg_y) -> coefficient`.
pub(crate) type Poly2 = BTreeMap<(u32, u32), Scalar>;

const MAX_EXPONENT: u32 = 4096;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allow_vars: bool,
}

fn constant(c: Scalar) -> Poly2 {
    let mut p = Poly2::new();
    if !c.is_zero() {
        p.insert((0, 0), c);
    }
    p
}

fn add_into(acc: &mut Poly2, rhs: Poly2, sign: bool) -> Result<()> {
    for (k, v) in rhs {
        let v = if sign { v } else { -v };
        let merged = match acc.remove(&k) {
            Some(old) => old.checked_add(&v)?,
            None => v,
        };
        if !merged.is_zero() {
            acc.insert(k, merged);
        }
    }
    Ok(())
}

fn mul(a: &Poly2, b: &Poly2) -> Result<Poly2> {
    let mut out = Poly2::new();
    for (&(ax, ay), av) in a {
        for (&(bx, by), bv) in b {
            let key = (ax + bx, ay + by);
            let term = av.checked_mul(bv)?;
            let merged = match out.remove(&key) {
                Some(old) => old.checked_add(&term)?,
                None => term,
            };
            if !merged.is_zero() {
                out.insert(key, merged);
            }
        }
    }
    Ok(out)
}

fn as_constant(p: &Poly2) -> Option<Scalar> {
    match p.len() {
        0 => Some(Scalar::zero()),
        1 => p.get(&(0, 0)).cloned(),
        _ => None,
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, allow_vars: bool) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            allow_vars,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.pos, message)
    }

    fn expr(&mut self) -> Result<Poly2> {
        let mut acc = Poly2::new();
        let mut sign = true;
        if self.eat(b'-') {
            sign = false;
        } else {
            self.eat(b'+');
        }
        let t = self.term()?;
        add_into(&mut acc, t, sign)?;
        loop {
            let sign = if self.eat(b'+') {
                true
            } else if self.eat(b'-') {
                false
            } else {
                break;
            };
            let t = self.term()?;
            add_into(&mut acc, t, sign)?;
        }
        Ok(acc)
    }

    fn starts_atom(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'.')
    }

    fn term(&mut self) -> Result<Poly2> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.power()?;
                acc = mul(&acc, &rhs)?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let rhs = self.power()?;
                let c = as_constant(&rhs)
                    .ok_or_else(|| Error::parse(at, "division by a non-constant"))?;
                let inv = c
                    .inverse()
                    .map_err(|_| Error::parse(at, "division by zero"))?;
                acc = mul(&acc, &constant(inv))?;
            } else if self.starts_atom() {
                let rhs = self.power()?;
                acc = mul(&acc, &rhs)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly2> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| Error::parse(at, "exponent out of range"))?;
            let mut out = constant(Scalar::one());
            for _ in 0..e {
                out = mul(&out, &base)?;
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a nonnegative integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| Error::parse(start, "integer too large"))
    }

    fn number(&mut self) -> Result<Rational> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| -> String {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            String::from_utf8_lossy(&p.src[s..p.pos]).into_owned()
        };
        let int_part = digits(self);
        let mut frac_part = String::new();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac_part = digits(self);
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::parse(start, "expected a number"));
        }
        let mut exp: i64 = 0;
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            let neg = match self.src.get(self.pos) {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let e = digits(self);
            if e.is_empty() {
                self.pos = save;
            } else {
                exp = e
                    .parse::<i64>()
                    .map_err(|_| Error::parse(save, "exponent too large"))?;
                if neg {
                    exp = -exp;
                }
            }
        }
        let mantissa: BigInt = format!("{int_part}{frac_part}")
            .trim_start_matches('0')
            .parse()
            .unwrap_or_else(|_| BigInt::zero());
        let shift = exp - frac_part.len() as i64;
        if shift.unsigned_abs() > 100_000 {
            return Err(Error::parse(start, "exponent too large"));
        }
        let ten = BigInt::from(10u32);
        Ok(if shift >= 0 {
            Rational::from_integer(mantissa * Pow::pow(&ten, shift as u64))
        } else {
            Rational::new(mantissa, Pow::pow(&ten, (-shift) as u64))
        })
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        // variables are single letters, so "xy" reads as x*y
        if self.src[start..].starts_with(b"sqrt") {
            self.pos += 4;
        } else {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Poly2> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(constant(Scalar::Rational(self.number()?))),
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let name = self.ident();
                match name.as_str() {
                    "x" | "y" if !self.allow_vars => {
                        Err(Error::parse(at, format!("variable '{name}' in a constant")))
                    }
                    "x" => Ok(Poly2::from([((1, 0), Scalar::one())])),
                    "y" => Ok(Poly2::from([((0, 1), Scalar::one())])),
                    "i" => Ok(constant(Scalar::sqrt_int(-1)?)),
                    "sqrt" => {
                        self.expect(b'(')?;
                        let arg_at = self.pos;
                        let inner = self.expr()?;
                        self.expect(b')')?;
                        let c = as_constant(&inner)
                            .ok_or_else(|| Error::parse(arg_at, "sqrt of a non-constant"))?;
                        let q = c.as_rational().ok_or_else(|| {
                            Error::parse(arg_at, "unsupported radical: sqrt of an irrational")
                        })?;
                        Scalar::sqrt_of(q)
                            .map(constant)
                            .map_err(|e| Error::parse(arg_at, format!("unsupported radical: {e}")))
                    }
                    _ => Err(Error::parse(at, format!("unknown identifier '{name}'"))),
                }
            }
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return Err(self.error("trailing input"));
        }
        Ok(())
    }
}

pub(crate) fn parse_poly2(text: &str) -> Result<Poly2> {
    let mut p = Parser::new(text, true);
    let out = p.expr()?;
    p.finish()?;
    Ok(out)
}

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let mut p = Parser::new(text, false);
    let out = p.expr()?;
    p.finish()?;
    Ok(as_constant(&out).expect("no variables admitted"))
}

/// Exact rational from text such as `3`, `-2/7`, `0.125`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = parse_scalar(text)?;
    s.as_rational()
        .cloned()
        .ok_or_else(|| Error::parse(0, "expected a rational number"))
}
