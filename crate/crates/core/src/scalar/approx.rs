//! Midpoint-radius ("ball") arithmetic on dyadic numbers.
//!
//! A [`BigApprox`] is an exact dyadic midpoint rounded to `prec` bits plus a
//! radius kept as a small upward-rounded [`Mag`]. Every operation widens the
//! radius enough that the true result of the same operation on any values in
//! the input balls lies in the output ball.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;

const MAG_BITS: u32 = 32;

/// Nonnegative upper bound `man · 2^exp` with a 32-bit mantissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mag {
    man: u64,
    exp: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    fn normalize_up(mut man: u128, mut exp: i64) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        while man >= (1u128 << MAG_BITS) {
            man = (man >> 1) + (man & 1);
            exp += 1;
        }
        Mag {
            man: man as u64,
            exp,
        }
    }

    fn normalize_down(mut man: u128, mut exp: i64) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        while man >= (1u128 << MAG_BITS) {
            man >>= 1;
            exp += 1;
        }
        Mag {
            man: man as u64,
            exp,
        }
    }

    /// `2^exp`.
    pub fn pow2(exp: i64) -> Mag {
        Mag { man: 1, exp }
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    /// Upper bound of `|man · 2^exp|`.
    fn from_bigint_up(man: &BigInt, exp: i64) -> Mag {
        let m = man.magnitude();
        let bits = m.bits();
        if bits <= MAG_BITS as u64 {
            return Mag::normalize_up(m.to_u64().expect("small") as u128, exp);
        }
        let shift = bits - MAG_BITS as u64;
        let top: u64 = (m >> shift).to_u64().expect("small");
        let exact = (m.trailing_zeros().unwrap_or(0)) >= shift;
        Mag::normalize_up(top as u128 + u128::from(!exact), exp + shift as i64)
    }

    fn from_bigint_down(man: &BigInt, exp: i64) -> Mag {
        let m = man.magnitude();
        let bits = m.bits();
        if bits <= MAG_BITS as u64 {
            return Mag::normalize_down(m.to_u64().expect("small") as u128, exp);
        }
        let shift = bits - MAG_BITS as u64;
        let top: u64 = (m >> shift).to_u64().expect("small");
        Mag::normalize_down(top as u128, exp + shift as i64)
    }

    pub fn add(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let shift = hi.exp - lo.exp;
        if shift > 64 {
            // lo < 2^(lo.exp + 32) <= 2^hi.exp
            return Mag::normalize_up(hi.man as u128 + 1, hi.exp);
        }
        Mag::normalize_up(((hi.man as u128) << shift) + lo.man as u128, lo.exp)
    }

    pub fn mul(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalize_up(self.man as u128 * o.man as u128, self.exp + o.exp)
    }

    /// Upper bound of `self / den` where `den` is a lower bound of the divisor.
    fn div_by_lower(self, den: Mag) -> Mag {
        assert!(!den.is_zero(), "division by a zero magnitude");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let num = (self.man as u128) << 64;
        let q = num.div_ceil(den.man as u128);
        Mag::normalize_up(q, self.exp - den.exp - 64)
    }

    pub fn max(self, o: Mag) -> Mag {
        if self.cmp_value(&o) == Ordering::Less {
            o
        } else {
            self
        }
    }

    pub fn to_rational(&self) -> Rational {
        dyadic_to_rational(&BigInt::from(self.man), self.exp)
    }

    pub fn cmp_value(&self, o: &Mag) -> Ordering {
        self.to_rational().cmp(&o.to_rational())
    }

    /// True when the bound is strictly below `10^exp10`.
    pub fn below_pow10(&self, exp10: i32) -> bool {
        let ten = Rational::from_integer(BigInt::from(10));
        let bound = if exp10 >= 0 {
            num_traits::pow(ten, exp10 as usize)
        } else {
            num_traits::pow(ten, (-exp10) as usize).recip()
        };
        self.to_rational() < bound
    }

    /// Approximate base-2 logarithm (−∞ for zero).
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        (self.man as f64).log2() + self.exp as f64
    }

    /// Short scientific rendering, rounded up, e.g. `3.2e-78`.
    pub fn to_sci_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let l10 = self.log2() * std::f64::consts::LOG10_2;
        let mut e = l10.floor() as i64;
        let mut m = 10f64.powf(l10 - e as f64);
        // round up to one decimal; the slack absorbs f64 noise on exact values
        m = (m * 10.0 - 1e-9).ceil() / 10.0;
        if m >= 10.0 {
            m /= 10.0;
            e += 1;
        }
        format!("{m:.1}e{e}")
    }
}

fn dyadic_to_rational(man: &BigInt, exp: i64) -> Rational {
    if exp >= 0 {
        Rational::from_integer(man << (exp as usize))
    } else {
        Rational::new(man.clone(), BigInt::one() << ((-exp) as usize))
    }
}

/// Real ball: `mid ± rad` with `mid = man · 2^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigApprox {
    man: BigInt,
    exp: i64,
    rad: Mag,
    prec: u32,
}

pub const DEFAULT_PRECISION: u32 = 256;

impl BigApprox {
    pub fn zero(prec: u32) -> Self {
        BigApprox {
            man: BigInt::zero(),
            exp: 0,
            rad: Mag::ZERO,
            prec,
        }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        BigApprox::exact(BigInt::from(n), 0, prec).rounded()
    }

    fn exact(man: BigInt, exp: i64, prec: u32) -> Self {
        BigApprox {
            man,
            exp,
            rad: Mag::ZERO,
            prec,
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn radius(&self) -> Mag {
        self.rad
    }

    /// Rounds the midpoint to `prec` bits, folding the error into the radius.
    fn rounded(mut self) -> Self {
        let bits = self.man.bits();
        if bits > self.prec as u64 {
            let k = bits - self.prec as u64;
            let half = BigInt::one() << (k - 1) as usize;
            let shifted: BigInt = (&self.man + half) >> k as usize;
            self.man = shifted;
            self.exp += k as i64;
            self.rad = self.rad.add(Mag::pow2(self.exp - 1));
        }
        if self.man.is_zero() {
            self.exp = 0;
        } else if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz as usize;
                self.exp += tz as i64;
            }
        }
        self
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        if q.is_zero() {
            return BigApprox::zero(prec);
        }
        let n = q.numer();
        let d = q.denom();
        if d.is_one() {
            return BigApprox::exact(n.clone(), 0, prec).rounded();
        }
        // shift s so that the quotient carries prec + 2 bits
        let s = prec as i64 + 2 + d.bits() as i64 - n.bits() as i64;
        let s = s.max(0);
        let (quo, rem) = (n << s as usize).div_rem(d);
        let mut out = BigApprox::exact(quo, -s, prec);
        if !rem.is_zero() {
            out.rad = Mag::pow2(-s);
        }
        out.rounded()
    }

    /// Ball around `√n`.
    pub fn sqrt_int(n: u64, prec: u32) -> Self {
        let s = prec as i64 + 2;
        let scaled = BigInt::from(n) << (2 * s) as usize;
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        let mut out = BigApprox::exact(root, -s, prec);
        if !exact {
            out.rad = Mag::pow2(-s);
        }
        out.rounded()
    }

    /// Dyadic approximation of a finite `f64` (exact conversion).
    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 || !x.is_finite() {
            return BigApprox::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let mantissa = if exponent == 0 {
            (bits & 0xfffffffffffff) << 1
        } else {
            (bits & 0xfffffffffffff) | 0x10000000000000
        };
        BigApprox::exact(
            BigInt::from(sign) * BigInt::from(mantissa),
            exponent - 1075,
            prec,
        )
        .rounded()
    }

    pub fn mid_rational(&self) -> Rational {
        dyadic_to_rational(&self.man, self.exp)
    }

    /// The midpoint as an exact ball (radius dropped).
    pub fn mid(&self) -> Self {
        BigApprox::exact(self.man.clone(), self.exp, self.prec)
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        let mut out = self.clone();
        out.prec = prec;
        out.rounded()
    }

    pub fn mid_f64(&self) -> f64 {
        if self.man.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.man >> shift as usize).to_f64().unwrap_or(0.0);
        top * 2f64.powi((self.exp + shift).clamp(-2000, 2000) as i32)
    }

    /// Upper bound of `|x|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_bigint_up(&self.man, self.exp).add(self.rad)
    }

    /// Lower bound of `|x|` over the ball (zero if the ball contains zero).
    pub fn abs_lower(&self) -> Mag {
        let r = self.rad.to_rational();
        let m = self.mid_rational().abs();
        if m <= r {
            return Mag::ZERO;
        }
        let diff = m - r;
        // diff = n/2^k exactly; take a floor in 2^-64 units relative to size
        let n = diff.numer();
        let d = diff.denom();
        let k = d.bits() as i64 - 1; // d is a power of two
        Mag::from_bigint_down(n, -k)
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    /// Whether the exact rational `q` lies inside the ball.
    pub fn contains_rational(&self, q: &Rational) -> bool {
        (self.mid_rational() - q).abs() <= self.rad.to_rational()
    }

    fn prec_with(&self, o: &Self) -> u32 {
        self.prec.max(o.prec)
    }

    fn magnitude_top(&self) -> i64 {
        self.exp + self.man.bits() as i64
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec_with(o);
        if self.man.is_zero() || o.man.is_zero() {
            let base = if self.man.is_zero() { o } else { self };
            let mut out = base.clone();
            out.prec = prec;
            out.rad = self.rad.add(o.rad);
            return out.rounded();
        }
        // a summand far below the last kept bit only widens the radius
        let (big, small) = if self.magnitude_top() >= o.magnitude_top() {
            (self, o)
        } else {
            (o, self)
        };
        if small.magnitude_top() < big.magnitude_top() - prec as i64 - 8 {
            let mut out = big.clone();
            out.prec = prec;
            out.rad = big.rad.add(small.abs_upper());
            return out.rounded();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &o.man << (o.exp - e) as usize;
        let mut out = BigApprox::exact(a + b, e, prec);
        out.rad = self.rad.add(o.rad);
        out.rounded()
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.man = -out.man;
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = self.prec_with(o);
        let mut out = BigApprox::exact(&self.man * &o.man, self.exp + o.exp, prec);
        let ma = Mag::from_bigint_up(&self.man, self.exp);
        let mb = Mag::from_bigint_up(&o.man, o.exp);
        out.rad = ma
            .mul(o.rad)
            .add(mb.mul(self.rad))
            .add(self.rad.mul(o.rad));
        out.rounded()
    }

    /// Quotient; `None` when the divisor ball contains zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let prec = self.prec_with(o);
        let den_low = o.abs_lower();
        if den_low.is_zero() {
            return None;
        }
        if self.man.is_zero() && self.rad.is_zero() {
            return Some(BigApprox::zero(prec));
        }
        let s = (prec as i64 + 2 + o.man.bits() as i64 - self.man.bits() as i64).max(0);
        let (quo, rem) = (&self.man << s as usize).div_rem(&o.man);
        let qexp = self.exp - s - o.exp;
        let mut out = BigApprox::exact(quo, qexp, prec);
        let trunc = if rem.is_zero() {
            Mag::ZERO
        } else {
            Mag::pow2(qexp)
        };
        // |a/b − a'/b'| ≤ (ra + |a'/b'|·rb) / (|b| − rb)
        let qmag = out.abs_upper().add(trunc);
        let prop = if self.rad.is_zero() && o.rad.is_zero() {
            Mag::ZERO
        } else {
            self.rad.add(qmag.mul(o.rad)).div_by_lower(den_low)
        };
        out.rad = trunc.add(prop);
        Some(out.rounded())
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn signum_if_certain(&self) -> Option<Ordering> {
        if self.contains_zero() {
            if self.man.is_zero() && self.rad.is_zero() {
                return Some(Ordering::Equal);
            }
            return None;
        }
        Some(if self.man.sign() == Sign::Minus {
            Ordering::Less
        } else {
            Ordering::Greater
        })
    }

    /// Decimal rendering of the midpoint with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let v = self.mid_rational();
        rational_to_sci(&v, digits)
    }
}

/// `d.ddd…e±X` with `digits` significant digits (round-half-up), trailing
/// zeros trimmed.
pub fn rational_to_sci(v: &Rational, digits: usize) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let neg = v.is_negative();
    let a = v.abs();
    let est = (a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2;
    let mut e10 = est.floor() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    let pow10 = |e: i64| -> Rational {
        if e >= 0 {
            num_traits::pow(ten.clone(), e as usize)
        } else {
            num_traits::pow(ten.clone(), (-e) as usize).recip()
        }
    };
    let lo = num_traits::pow(BigInt::from(10), digits - 1);
    let hi = &lo * 10;
    let scaled = loop {
        let s = &a * pow10(digits as i64 - 1 - e10);
        let r = (s + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
        if r >= hi {
            e10 += 1;
        } else if r < lo {
            e10 -= 1;
        } else {
            break r;
        }
    };
    let text = scaled.to_string();
    let (head, tail) = text.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    out.push_str(&format!("e{e10}"));
    out
}

impl fmt::Display for BigApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        write!(f, "{} +/- {}", self.to_decimal(digits), self.rad.to_sci_string())
    }
}

/// Complex ball as a pair of real balls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexApprox {
    pub re: BigApprox,
    pub im: BigApprox,
}

impl ComplexApprox {
    pub fn new(re: BigApprox, im: BigApprox) -> Self {
        ComplexApprox { re, im }
    }

    pub fn real(re: BigApprox) -> Self {
        let prec = re.prec;
        ComplexApprox {
            re,
            im: BigApprox::zero(prec),
        }
    }

    pub fn zero(prec: u32) -> Self {
        ComplexApprox::real(BigApprox::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        ComplexApprox::real(BigApprox::from_int(1, prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        ComplexApprox::new(BigApprox::from_f64(re, prec), BigApprox::from_f64(im, prec))
    }

    pub fn precision(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        ComplexApprox::new(self.re.with_precision(prec), self.im.with_precision(prec))
    }

    pub fn mid(&self) -> Self {
        ComplexApprox::new(self.re.mid(), self.im.mid())
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexApprox::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexApprox::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        ComplexApprox::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        ComplexApprox::new(re, im)
    }

    pub fn scale_real(&self, k: &BigApprox) -> Self {
        ComplexApprox::new(self.re.mul(k), self.im.mul(k))
    }

    pub fn conj(&self) -> Self {
        ComplexApprox::new(self.re.clone(), self.im.neg())
    }

    pub fn norm_sqr(&self) -> BigApprox {
        self.re.square().add(&self.im.square())
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        let n = o.norm_sqr();
        let num = self.mul(&o.conj());
        Some(ComplexApprox::new(num.re.div(&n)?, num.im.div(&n)?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = ComplexApprox::one(self.precision());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Upper bound of `|z|` (via `|re| + |im|`).
    pub fn abs_upper(&self) -> Mag {
        self.re.abs_upper().add(self.im.abs_upper())
    }

    pub fn mid_f64(&self) -> (f64, f64) {
        (self.re.mid_f64(), self.im.mid_f64())
    }

    /// `re + im*i` rendering of the midpoint, parseable by the scalar parser.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = self.re.to_decimal(digits);
        let im = self.im.mid_rational();
        if im.is_zero() {
            return re;
        }
        let im_text = rational_to_sci(&im.abs(), digits);
        let sign = if im.is_negative() { "-" } else { "+" };
        if self.re.mid_rational().is_zero() {
            let lead = if im.is_negative() { "-" } else { "" };
            return format!("{lead}{im_text}*i");
        }
        format!("{re} {sign} {im_text}*i")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::{int, rat};

    #[test]
    fn rational_enclosure() {
        for (n, d) in [(1, 3), (-22, 7), (5, 1), (1, 1 << 20), (123456789, 1000)] {
            let q = rat(n, d);
            let b = BigApprox::from_rational(&q, 64);
            assert!(b.contains_rational(&q), "{q}");
        }
    }

    #[test]
    fn sqrt2_squared_contains_two() {
        let r = BigApprox::sqrt_int(2, 128);
        assert!(r.square().contains_rational(&int(2)));
        assert!(r.radius().log2() < -120.0);
    }

    #[test]
    fn division_encloses() {
        let a = BigApprox::from_rational(&rat(1, 3), 100);
        let b = BigApprox::from_rational(&rat(-7, 11), 100);
        let q = a.div(&b).unwrap();
        assert!(q.contains_rational(&rat(-11, 21)));
        assert!(BigApprox::zero(64).div(&BigApprox::zero(64)).is_none());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational_to_sci(&rat(1, 8), 5), "1.25e-1");
        assert_eq!(rational_to_sci(&int(-1234), 2), "-1.2e3");
        assert_eq!(rational_to_sci(&int(999), 2), "1e3");
        let m = Mag::pow2(-10);
        assert!(m.below_pow10(-3));
        assert!(!m.below_pow10(-4));
        assert_eq!(Mag::pow2(0).to_sci_string(), "1.0e0");
    }

    #[test]
    fn mag_add_is_upper_bound() {
        let a = Mag::pow2(0);
        let b = Mag::pow2(-100);
        let s = a.add(b);
        assert!(s.to_rational() >= a.to_rational() + b.to_rational());
    }

    #[test]
    fn complex_division() {
        let p = 96;
        let a = ComplexApprox::new(BigApprox::from_int(1, p), BigApprox::from_int(2, p));
        let b = ComplexApprox::new(BigApprox::from_int(3, p), BigApprox::from_int(-1, p));
        let q = a.div(&b).unwrap();
        // (1+2i)/(3−i) = (1+7i)/10
        assert!(q.re.contains_rational(&rat(1, 10)));
        assert!(q.im.contains_rational(&rat(7, 10)));
    }
}
