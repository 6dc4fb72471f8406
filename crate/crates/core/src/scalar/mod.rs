//! Exact coefficient arithmetic.
//!
//! [`Scalar`] is the coefficient type used everywhere else in the crate. It
//! holds a rational number, an element of a single quadratic field ℚ(√m), or
//! an element of a biquadratic tower ℚ(√m1, √m2), and always stores the value
//! in the smallest of those that contains it. Mixed arithmetic lifts both
//! operands into the join of their fields; joins that would need more than
//! two square roots are rejected.
//!
//! The `std::ops` impls panic on such a rejection (like integer division by
//! zero); the `checked_*` methods report it as an [`Error`].

pub mod approx;
pub mod quad;
pub mod rational;
pub mod tower;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use approx::{BigApprox, ComplexApprox, Mag};
pub use quad::QuadExt;
pub use rational::{is_square_in_q, Rational, SquareTest};
pub use tower::TowerScalar;

use crate::error::{Error, Result};

/// The field a scalar (or a collection of scalars) lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Rational,
    Quadratic(i64),
    Tower(i64, i64),
}

impl Domain {
    /// Smallest supported field containing both.
    pub fn join(self, other: Domain) -> Result<Domain> {
        use Domain::*;
        Ok(match (self, other) {
            (Rational, d) | (d, Rational) => d,
            (Quadratic(m), Quadratic(n)) if m == n => Quadratic(m),
            (Quadratic(m), Quadratic(n)) => {
                let (a, b) = tower::canonical_pair(m, n)?;
                Tower(a, b)
            }
            (Tower(a, b), Quadratic(m)) | (Quadratic(m), Tower(a, b)) => {
                let t = TowerScalar::from_rational(num_traits::zero(), a, b);
                if !t.subfields().contains(&m) {
                    return Err(Error::TowerTooHigh(vec![a, b, m]));
                }
                Tower(a, b)
            }
            (Tower(a, b), Tower(c, d)) if (a, b) == (c, d) => Tower(a, b),
            (Tower(a, b), Tower(c, d)) => return Err(Error::TowerTooHigh(vec![a, b, c, d])),
        })
    }

    /// True when every element of the field has a real embedding.
    pub fn is_real(self) -> bool {
        match self {
            Domain::Rational => true,
            Domain::Quadratic(m) => m > 0,
            Domain::Tower(a, b) => a > 0 && b > 0,
        }
    }

    pub fn contains(self, other: Domain) -> bool {
        self.join(other).map(|j| j == self).unwrap_or(false)
    }

    /// Text such as `Q`, `Q(sqrt(2))`, `Q(sqrt(2), sqrt(3))`.
    pub fn describe(self) -> String {
        match self {
            Domain::Rational => "Q".into(),
            Domain::Quadratic(m) => format!("Q(sqrt({m}))"),
            Domain::Tower(a, b) => format!("Q(sqrt({a}), sqrt({b}))"),
        }
    }
}

/// An exact coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Quad(QuadExt),
    Tower(TowerScalar),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Scalar::Rational(rational::rat(n, d))
    }

    /// `√q` as an exact scalar: rational when `q` is a square, quadratic otherwise.
    pub fn sqrt_of(q: &Rational) -> Result<Self> {
        match is_square_in_q(q) {
            SquareTest::Yes(r) => Ok(Scalar::Rational(r)),
            SquareTest::No(_) => {
                // √(n/d) = √(n·d)/d
                let nd = q.numer() * q.denom();
                let (root, core) = quad::normalize_radicand(&nd)?;
                let b = Rational::new(root, q.denom().clone());
                Ok(Scalar::Quad(QuadExt::from_parts(Rational::zero(), b, core)))
            }
        }
    }

    pub fn sqrt_int(m: i64) -> Result<Self> {
        Self::sqrt_of(&Rational::from_integer(BigInt::from(m)))
    }

    pub fn domain(&self) -> Domain {
        match self {
            Scalar::Rational(_) => Domain::Rational,
            Scalar::Quad(q) => Domain::Quadratic(q.radicand()),
            Scalar::Tower(t) => {
                let (a, b) = t.radicands();
                Domain::Tower(a, b)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
            Scalar::Tower(t) => t.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Rewrites the value in the smallest field that holds it.
    fn demote(self) -> Scalar {
        match self {
            Scalar::Quad(q) if q.is_rational() => Scalar::Rational(q.rational_part().clone()),
            Scalar::Tower(t) => {
                let [c00, c10, c01, c11] = t.coords().clone();
                let (m1, m2) = t.radicands();
                let [_, _, m3] = t.subfields();
                let nz = [!c10.is_zero(), !c01.is_zero(), !c11.is_zero()];
                match nz {
                    [false, false, false] => Scalar::Rational(c00),
                    [true, false, false] => Scalar::Quad(QuadExt::from_parts(c00, c10, m1)),
                    [false, true, false] => Scalar::Quad(QuadExt::from_parts(c00, c01, m2)),
                    [false, false, true] => {
                        let (g, _) = quad::normalize_radicand(
                            &(BigInt::from(m1) * BigInt::from(m2)),
                        )
                        .expect("validated pair");
                        Scalar::Quad(QuadExt::from_parts(
                            c00,
                            c11 * Rational::from_integer(g),
                            m3,
                        ))
                    }
                    _ => Scalar::Tower(t),
                }
            }
            other => other,
        }
    }

    /// Lifts into a field that contains this value's field.
    pub fn lift_to(&self, target: Domain) -> Result<Scalar> {
        match (self, target) {
            (_, Domain::Rational) => match self {
                Scalar::Rational(_) => Ok(self.clone()),
                _ => Err(Error::UnsupportedField(format!(
                    "{} does not embed in Q",
                    self.domain().describe()
                ))),
            },
            (Scalar::Rational(q), Domain::Quadratic(m)) => {
                Ok(Scalar::Quad(QuadExt::from_rational(q.clone(), m)))
            }
            (Scalar::Quad(q), Domain::Quadratic(m)) if q.radicand() == m => Ok(self.clone()),
            (Scalar::Quad(q), Domain::Quadratic(m)) => {
                Err(Error::RadicandMismatch(q.radicand(), m))
            }
            (Scalar::Tower(t), Domain::Quadratic(_)) => Err(Error::UnsupportedField(format!(
                "{} does not embed in {}",
                Scalar::Tower(t.clone()).domain().describe(),
                target.describe()
            ))),
            (Scalar::Rational(q), Domain::Tower(a, b)) => {
                Ok(Scalar::Tower(TowerScalar::from_rational(q.clone(), a, b)))
            }
            (Scalar::Quad(q), Domain::Tower(a, b)) => Ok(Scalar::Tower(TowerScalar::lift(q, a, b)?)),
            (Scalar::Tower(t), Domain::Tower(a, b)) => {
                if t.radicands() == (a, b) {
                    Ok(self.clone())
                } else {
                    let (m1, m2) = t.radicands();
                    Err(Error::TowerTooHigh(vec![m1, m2, a, b]))
                }
            }
        }
    }

    /// Exact arithmetic with error reporting.
    pub fn checked(&self, rhs: &Scalar, op: ArithOp) -> Result<Scalar> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, rhs) {
            return Ok(Scalar::Rational(match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
                ArithOp::Div => {
                    if b.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    a / b
                }
            }));
        }
        if op == ArithOp::Div && rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Scaling by a rational needs no lift.
        if let Scalar::Rational(b) = rhs {
            match op {
                ArithOp::Mul => return Ok(self.scale(b)),
                ArithOp::Div => return Ok(self.scale(&b.recip())),
                _ => {}
            }
        }
        let dom = self.domain().join(rhs.domain())?;
        let a = self.lift_to(dom)?;
        let b = rhs.lift_to(dom)?;
        let out = match (&a, &b) {
            (Scalar::Quad(x), Scalar::Quad(y)) => Scalar::Quad(match op {
                ArithOp::Add => x.checked_add(y)?,
                ArithOp::Sub => x.checked_sub(y)?,
                ArithOp::Mul => x.checked_mul(y)?,
                ArithOp::Div => x.checked_div(y)?,
            }),
            (Scalar::Tower(x), Scalar::Tower(y)) => Scalar::Tower(match op {
                ArithOp::Add => x.checked_add(y)?,
                ArithOp::Sub => x.checked_sub(y)?,
                ArithOp::Mul => x.checked_mul(y)?,
                ArithOp::Div => x.checked_div(y)?,
            }),
            _ => unreachable!("lifted to a common non-rational domain"),
        };
        Ok(out.demote())
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.checked(rhs, ArithOp::Add)
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.checked(rhs, ArithOp::Sub)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.checked(rhs, ArithOp::Mul)
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        self.checked(rhs, ArithOp::Div)
    }

    pub fn scale(&self, k: &Rational) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q * k),
            Scalar::Quad(q) => Scalar::Quad(q.scale(k)).demote(),
            Scalar::Tower(t) => Scalar::Tower(t.scale(k)).demote(),
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sign under the real embedding (positive square roots); `None` if not real.
    pub fn signum(&self) -> Option<Ordering> {
        match self {
            Scalar::Rational(q) => Some(q.cmp(&Rational::zero())),
            Scalar::Quad(q) => q.signum(),
            Scalar::Tower(t) => t.signum(),
        }
    }

    pub fn abs(&self) -> Option<Scalar> {
        Some(match self.signum()? {
            Ordering::Less => -self,
            _ => self.clone(),
        })
    }

    /// Conjugation `√m ↦ −√m` for the given radicand; identity on values that
    /// do not involve `√m`. Inside a tower the other generator `√m1` (or `√m2`
    /// when `m = m1`) is held fixed.
    pub fn conjugate(&self, m: i64) -> Result<Scalar> {
        match self {
            Scalar::Rational(_) => Ok(self.clone()),
            Scalar::Quad(q) if q.radicand() == m => Ok(Scalar::Quad(q.conjugate())),
            Scalar::Quad(_) => Ok(self.clone()),
            Scalar::Tower(t) => {
                let (m1, m2) = t.radicands();
                let [_, _, m3] = t.subfields();
                // √m3 = √m1·√m2/g is flipped by fixing √m1 and flipping √m2
                let c = if m == m1 {
                    t.conjugate_first()
                } else if m == m2 || m == m3 {
                    t.conjugate_second()
                } else {
                    return Err(Error::TowerTooHigh(vec![m1, m2, m]));
                };
                Ok(Scalar::Tower(c).demote())
            }
        }
    }

    /// Ball enclosure of the value (complex for non-real fields).
    pub fn to_approx(&self, prec: u32) -> ComplexApprox {
        let q = |x: &Rational| BigApprox::from_rational(x, prec);
        let root = |m: i64| -> ComplexApprox {
            let r = BigApprox::sqrt_int(m.unsigned_abs(), prec);
            if m > 0 {
                ComplexApprox::real(r)
            } else {
                ComplexApprox::new(BigApprox::zero(prec), r)
            }
        };
        match self {
            Scalar::Rational(a) => ComplexApprox::real(q(a)),
            Scalar::Quad(x) => {
                let b = ComplexApprox::real(q(x.irrational_part()));
                ComplexApprox::real(q(x.rational_part())).add(&b.mul(&root(x.radicand())))
            }
            Scalar::Tower(t) => {
                let (m1, m2) = t.radicands();
                let [c00, c10, c01, c11] = t.coords();
                let r1 = root(m1);
                let r2 = root(m2);
                let r12 = r1.mul(&r2);
                ComplexApprox::real(q(c00))
                    .add(&ComplexApprox::real(q(c10)).mul(&r1))
                    .add(&ComplexApprox::real(q(c01)).mul(&r2))
                    .add(&ComplexApprox::real(q(c11)).mul(&r12))
            }
        }
    }

    /// Floating approximation (re, im) for display and plotting.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        match self {
            Scalar::Rational(q) => (q.to_f64().unwrap_or(f64::NAN), 0.0),
            Scalar::Quad(x) => x.approx_f64(),
            _ => {
                let a = self.to_approx(64);
                (a.re.mid_f64(), a.im.mid_f64())
            }
        }
    }

    /// True when rendering inside a product needs parentheses.
    pub fn is_compound(&self) -> bool {
        match self {
            Scalar::Rational(_) => false,
            Scalar::Quad(q) => !q.rational_part().is_zero(),
            Scalar::Tower(_) => true,
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }
}

/// `scalar_arith`: exact field arithmetic over the joined domain.
pub fn scalar_arith(lhs: &Scalar, rhs: &Scalar, op: ArithOp) -> Result<Scalar> {
    lhs.checked(rhs, op)
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<QuadExt> for Scalar {
    fn from(q: QuadExt) -> Self {
        Scalar::Quad(q).demote()
    }
}

impl From<TowerScalar> for Scalar {
    fn from(t: TowerScalar) -> Self {
        Scalar::Tower(t).demote()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match self.checked(rhs, $op) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar arithmetic failed: {e}"),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, ArithOp::Add);
forward_binop!(Sub, sub, ArithOp::Sub);
forward_binop!(Mul, mul, ArithOp::Mul);
forward_binop!(Div, div, ArithOp::Div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Quad(q) => Scalar::Quad(q.neg()),
            Scalar::Tower(t) => Scalar::Tower(t.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&quad::fmt_rational(q)),
            Scalar::Quad(q) => q.fmt(f),
            Scalar::Tower(t) => t.fmt(f),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_scalar(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
