use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::quad::{fmt_radical_term, fmt_rational, normalize_radicand, sign_of_sum, QuadExt};
use super::rational::Rational;
use crate::error::{Error, Result};

/// An element `c00 + c10·√m1 + c01·√m2 + c11·√m1·√m2` of ℚ(√m1, √m2).
///
/// The radicand pair is canonical: of the three quadratic subfields
/// `ℚ(√m1)`, `ℚ(√m2)`, `ℚ(√(m1·m2))` the two with the smallest radicands
/// (ordered by absolute value, then value) are used as generators. Two
/// elements of the same biquadratic field therefore always share a pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerScalar {
    c: [Rational; 4],
    m1: i64,
    m2: i64,
}

fn key(m: i64) -> (u64, i64) {
    (m.unsigned_abs(), m)
}

/// Square-free core of `m1·m2` together with the root `g` (`m1·m2 = g²·core`).
fn third_radicand(m1: i64, m2: i64) -> Result<(i64, BigInt)> {
    let (g, core) = normalize_radicand(&(BigInt::from(m1) * BigInt::from(m2)))?;
    Ok((core, g))
}

/// Canonical generator pair of ℚ(√m1, √m2); fails if the field is only quadratic.
pub fn canonical_pair(m1: i64, m2: i64) -> Result<(i64, i64)> {
    let (m3, _) = third_radicand(m1, m2)?;
    if m1 == m2 || m3 == 1 {
        return Err(Error::Precondition(format!(
            "sqrt({m1}) and sqrt({m2}) generate a single quadratic field"
        )));
    }
    let mut all = [m1, m2, m3];
    all.sort_by_key(|&m| key(m));
    Ok((all[0], all[1]))
}

impl TowerScalar {
    /// Coordinates of `√r` in the basis of the pair `(m1, m2)`, for `r` one of
    /// the three subfield radicands.
    fn sqrt_coords(r: i64, m1: i64, m2: i64) -> Result<[Rational; 4]> {
        let z = Rational::zero;
        if r == m1 {
            return Ok([z(), Rational::one(), z(), z()]);
        }
        if r == m2 {
            return Ok([z(), z(), Rational::one(), z()]);
        }
        let (m3, g) = third_radicand(m1, m2)?;
        if r == m3 {
            // √m1·√m2 = g·√m3
            return Ok([z(), z(), z(), Rational::new(BigInt::one(), g)]);
        }
        Err(Error::TowerTooHigh(vec![m1, m2, r]))
    }

    /// Builds an element from coordinates over an arbitrary generator pair and
    /// rewrites it over the canonical pair.
    pub fn new(c: [Rational; 4], m1: i64, m2: i64) -> Result<Self> {
        let (n1, n2) = canonical_pair(m1, m2)?;
        let (m3, g) = third_radicand(m1, m2)?;
        let [c00, c10, c01, c11] = c;
        let mut out = TowerScalar::from_rational(c00, n1, n2);
        let terms = [
            (c10, m1, Rational::one()),
            (c01, m2, Rational::one()),
            (c11, m3, Rational::from_integer(g)),
        ];
        for (coef, r, scale) in terms {
            if coef.is_zero() {
                continue;
            }
            let basis = Self::sqrt_coords(r, n1, n2)?;
            for (slot, b) in out.c.iter_mut().zip(basis.iter()) {
                *slot += &coef * &scale * b;
            }
        }
        Ok(out)
    }

    pub fn from_rational(q: Rational, m1: i64, m2: i64) -> Self {
        TowerScalar {
            c: [q, Rational::zero(), Rational::zero(), Rational::zero()],
            m1,
            m2,
        }
    }

    /// Embeds a quadratic element into the canonical tower `(m1, m2)`.
    pub fn lift(x: &QuadExt, m1: i64, m2: i64) -> Result<Self> {
        let mut out = TowerScalar::from_rational(x.rational_part().clone(), m1, m2);
        if !x.irrational_part().is_zero() {
            let basis = Self::sqrt_coords(x.radicand(), m1, m2)?;
            for (slot, b) in out.c.iter_mut().zip(basis.iter()) {
                *slot += x.irrational_part() * b;
            }
        }
        Ok(out)
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn radicands(&self) -> (i64, i64) {
        (self.m1, self.m2)
    }

    /// The three quadratic subfield radicands `m1`, `m2`, `core(m1·m2)`.
    pub fn subfields(&self) -> [i64; 3] {
        let (m3, _) = third_radicand(self.m1, self.m2).expect("validated pair");
        [self.m1, self.m2, m3]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if (self.m1, self.m2) != (other.m1, other.m2) {
            return Err(Error::TowerTooHigh(vec![
                self.m1, self.m2, other.m1, other.m2,
            ]));
        }
        Ok(())
    }

    fn with(&self, c: [Rational; 4]) -> Self {
        TowerScalar {
            c,
            m1: self.m1,
            m2: self.m2,
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.with(std::array::from_fn(|i| &self.c[i] + &o.c[i])))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.with(std::array::from_fn(|i| &self.c[i] - &o.c[i])))
    }

    pub fn neg(&self) -> Self {
        self.with(std::array::from_fn(|i| -&self.c[i]))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let m1 = Rational::from_integer(BigInt::from(self.m1));
        let m2 = Rational::from_integer(BigInt::from(self.m2));
        let m12 = &m1 * &m2;
        let [x0, x1, x2, x3] = &self.c;
        let [y0, y1, y2, y3] = &o.c;
        let r0 = x0 * y0 + &m1 * x1 * y1 + &m2 * x2 * y2 + &m12 * x3 * y3;
        let r1 = x0 * y1 + x1 * y0 + &m2 * (x2 * y3 + x3 * y2);
        let r2 = x0 * y2 + x2 * y0 + &m1 * (x1 * y3 + x3 * y1);
        let r3 = x0 * y3 + x3 * y0 + x1 * y2 + x2 * y1;
        Ok(self.with([r0, r1, r2, r3]))
    }

    /// Conjugation `√m1 ↦ −√m1`.
    pub fn conjugate_first(&self) -> Self {
        let [a, b, c, d] = &self.c;
        self.with([a.clone(), -b, c.clone(), -d])
    }

    /// Conjugation `√m2 ↦ −√m2`.
    pub fn conjugate_second(&self) -> Self {
        let [a, b, c, d] = &self.c;
        self.with([a.clone(), b.clone(), -c, -d])
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // x·σ2(x) lies in ℚ(√m1); invert it there.
        let s2 = self.conjugate_second();
        let n = self.checked_mul(&s2)?;
        let [a, b, _, _] = n.c.clone();
        let q = QuadExt::from_parts(a, b, self.m1);
        let qi = q.inverse()?;
        let qi = TowerScalar::lift(&qi, self.m1, self.m2)?;
        s2.checked_mul(&qi)
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        self.checked_mul(&o.inverse()?)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        self.with(std::array::from_fn(|i| &self.c[i] * k))
    }

    /// Sign under the embedding sending each positive radicand's root to the
    /// positive real root; `None` when the value is not real.
    pub fn signum(&self) -> Option<Ordering> {
        if self.m1 < 0 || self.m2 < 0 {
            let real = self.c[1..].iter().all(Zero::is_zero);
            return real.then(|| self.c[0].cmp(&Rational::zero()));
        }
        // x = A + B·√m2 with A, B ∈ ℚ(√m1).
        let a = QuadExt::from_parts(self.c[0].clone(), self.c[1].clone(), self.m1);
        let b = QuadExt::from_parts(self.c[2].clone(), self.c[3].clone(), self.m1);
        let sa = a.signum()?;
        let sb = b.signum()?;
        Some(sign_of_sum(sa, sb, || {
            let a2 = a.checked_mul(&a).expect("same field");
            let b2 = b
                .checked_mul(&b)
                .expect("same field")
                .scale(&Rational::from_integer(BigInt::from(self.m2)));
            a2.checked_sub(&b2)
                .expect("same field")
                .signum()
                .expect("real")
        }))
    }
}

impl fmt::Display for TowerScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let [c00, c10, c01, c11] = &self.c;
        if !c00.is_zero() {
            out.push_str(&fmt_rational(c00));
        }
        let (m3, g) = third_radicand(self.m1, self.m2).map_err(|_| fmt::Error)?;
        let c3 = c11 * Rational::from_integer(g);
        for (coef, m) in [(c10, self.m1), (c01, self.m2), (&c3, m3)] {
            let first = out.is_empty();
            fmt_radical_term(&mut out, coef, &format!("sqrt({m})"), first);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}
