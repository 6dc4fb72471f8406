use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{square_free_split, Rational};
use crate::error::{Error, Result};

/// An element `a + b·√m` of ℚ(√m), `m` square-free and different from 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    m: i64,
}

/// Normalises a radicand to its square-free core, returning `(root, core)` with
/// `n = root² · core`.
pub fn normalize_radicand(n: &BigInt) -> Result<(BigInt, i64)> {
    if n.is_zero() {
        return Ok((BigInt::zero(), 0));
    }
    let (root, core) = square_free_split(n);
    let core = core
        .to_i64()
        .ok_or_else(|| Error::RadicandOverflow(n.to_string()))?;
    Ok((root, core))
}

impl QuadExt {
    /// Builds `a + b·√radicand`, moving square factors of the radicand into `b`.
    /// Fails if the radicand is a perfect square (the value would be rational).
    pub fn new(a: Rational, b: Rational, radicand: i64) -> Result<Self> {
        let (root, core) = normalize_radicand(&BigInt::from(radicand))?;
        if core == 0 || core == 1 {
            return Err(Error::Precondition(format!(
                "sqrt({radicand}) is rational, not a quadratic irrationality"
            )));
        }
        Ok(QuadExt {
            a,
            b: b * Rational::from_integer(root),
            m: core,
        })
    }

    pub(crate) fn from_parts(a: Rational, b: Rational, m: i64) -> Self {
        debug_assert!(m != 0 && m != 1);
        QuadExt { a, b, m }
    }

    pub fn sqrt(m: i64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), m)
    }

    pub fn from_rational(a: Rational, m: i64) -> Self {
        QuadExt::from_parts(a, Rational::zero(), m)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> i64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::RadicandMismatch(self.m, other.m));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(QuadExt::from_parts(
            &self.a + &other.a,
            &self.b + &other.b,
            self.m,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(QuadExt::from_parts(
            &self.a - &other.a,
            &self.b - &other.b,
            self.m,
        ))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = Rational::from_integer(BigInt::from(self.m));
        Ok(QuadExt::from_parts(
            &self.a * &other.a + &m * &self.b * &other.b,
            &self.a * &other.b + &self.b * &other.a,
            self.m,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    pub fn neg(&self) -> Self {
        QuadExt::from_parts(-&self.a, -&self.b, self.m)
    }

    /// `a + b√m ↦ a − b√m`.
    pub fn conjugate(&self) -> Self {
        QuadExt::from_parts(self.a.clone(), -&self.b, self.m)
    }

    /// Field norm `a² − m·b²`.
    pub fn norm(&self) -> Rational {
        let m = Rational::from_integer(BigInt::from(self.m));
        &self.a * &self.a - m * &self.b * &self.b
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QuadExt::from_parts(&self.a / &n, -&self.b / &n, self.m))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuadExt::from_parts(&self.a * c, &self.b * c, self.m)
    }

    /// Sign under the embedding `√m ↦ +√m`; `None` for non-real values.
    pub fn signum(&self) -> Option<Ordering> {
        if self.b.is_zero() {
            return Some(self.a.cmp(&Rational::zero()));
        }
        if self.m < 0 {
            return None;
        }
        Some(sign_of_sum(
            self.a.cmp(&Rational::zero()),
            self.b.cmp(&Rational::zero()),
            || {
                let m = Rational::from_integer(BigInt::from(self.m));
                (&self.a * &self.a).cmp(&(m * &self.b * &self.b))
            },
        ))
    }

    pub fn approx_f64(&self) -> (f64, f64) {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let r = (self.m.unsigned_abs() as f64).sqrt();
        if self.m > 0 {
            (a + b * r, 0.0)
        } else {
            (a, b * r)
        }
    }
}

/// Sign of `A + B·√m` given `sign(A)`, `sign(B)` and a lazy comparison of
/// `A²` with `m·B²`.
pub(crate) fn sign_of_sum(
    sa: Ordering,
    sb: Ordering,
    cmp_squares: impl FnOnce() -> Ordering,
) -> Ordering {
    match (sa, sb) {
        (_, Ordering::Equal) => sa,
        (Ordering::Equal, _) => sb,
        (x, y) if x == y => x,
        _ => match cmp_squares() {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        },
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders `coef*sqrt(m)` terms: `sqrt(m)`, `-sqrt(m)`, `1/3*sqrt(m)`.
pub(crate) fn fmt_radical_term(out: &mut String, coef: &Rational, radical: &str, first: bool) {
    if coef.is_zero() {
        return;
    }
    let neg = coef.is_negative();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let mag = coef.abs();
    if !mag.is_one() {
        out.push_str(&fmt_rational(&mag));
        out.push('*');
    }
    out.push_str(radical);
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let has_a = !self.a.is_zero();
        if has_a {
            out.push_str(&fmt_rational(&self.a));
        }
        fmt_radical_term(&mut out, &self.b, &format!("sqrt({})", self.m), !has_a);
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::{int, rat};

    fn q(a: Rational, b: Rational, m: i64) -> QuadExt {
        QuadExt::new(a, b, m).unwrap()
    }

    #[test]
    fn conjugate_product() {
        let x = q(rat(1, 2), rat(1, 3), 2);
        let p = x.checked_mul(&x.conjugate()).unwrap();
        assert!(p.is_rational());
        assert_eq!(p.rational_part(), &rat(1, 36));
    }

    #[test]
    fn sqrt_squared() {
        let s = QuadExt::sqrt(3).unwrap();
        let p = s.checked_mul(&s).unwrap();
        assert_eq!(p, QuadExt::from_rational(int(3), 3));
    }

    #[test]
    fn radicand_normalisation() {
        let x = q(int(0), int(1), 12);
        assert_eq!(x.radicand(), 3);
        assert_eq!(x.irrational_part(), &int(2));
        assert!(QuadExt::new(int(1), int(1), 4).is_err());
    }

    #[test]
    fn conjugation() {
        let x = q(int(1), int(1), 5);
        assert_eq!(x.conjugate(), q(int(1), int(-1), 5));
        assert_eq!(x.conjugate().conjugate(), x);
        assert_eq!(x.to_string(), "1 + sqrt(5)");
        assert_eq!(x.conjugate().to_string(), "1 - sqrt(5)");
    }

    #[test]
    fn mismatch_rejected() {
        let a = QuadExt::sqrt(2).unwrap();
        let b = QuadExt::sqrt(3).unwrap();
        assert_eq!(a.checked_add(&b), Err(Error::RadicandMismatch(2, 3)));
        let z = QuadExt::from_rational(int(0), 2);
        assert_eq!(a.checked_div(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn signs() {
        assert_eq!(q(int(1), int(-1), 2).signum(), Some(Ordering::Less));
        assert_eq!(q(int(2), int(-1), 3).signum(), Some(Ordering::Greater));
        assert_eq!(q(int(-3), int(2), 2).signum(), Some(Ordering::Less));
        assert_eq!(q(int(1), int(1), -1).signum(), None);
    }
}
