//! Helpers on top of `BigRational`: square roots, square-free parts, contents.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Outcome of testing whether a rational number is a square in ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareTest {
    /// `x = root²` with `root ≥ 0`.
    Yes(Rational),
    /// `√x ∈ ℚ(√m)` with `m` square-free and carrying the sign of `x`.
    No(BigInt),
}

impl SquareTest {
    pub fn is_square(&self) -> bool {
        matches!(self, SquareTest::Yes(_))
    }
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Splits a nonzero integer as `n = root² · core` with `core` square-free
/// (sign carried by `core`).
pub fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "square-free part of zero");
    let sign = n.sign();
    let mut rest = n.abs();
    let mut root = BigInt::one();
    let mut core = BigInt::one();

    // Trial division up to the cube root: afterwards the cofactor has at most
    // two prime factors, both larger than the bound.
    let bound = rest.cbrt() + 1u32;
    let mut p = BigInt::from(2u32);
    while p <= bound && rest > BigInt::one() {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            root *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if rest > BigInt::one() {
        match exact_sqrt(&rest) {
            Some(r) => root *= r,
            None => core *= rest,
        }
    }
    if sign == Sign::Minus {
        core = -core;
    }
    (root, core)
}

/// Square-free normalisation of a radicand that must fit in `i64`.
pub fn square_free_i64(n: i64) -> (i64, i64) {
    let (r, c) = square_free_split(&BigInt::from(n));
    (r.to_i64().expect("root fits"), c.to_i64().expect("core fits"))
}

pub fn is_square_in_q(x: &Rational) -> SquareTest {
    if x.is_zero() {
        return SquareTest::Yes(Rational::zero());
    }
    if !x.is_negative() {
        if let (Some(n), Some(d)) = (exact_sqrt(x.numer()), exact_sqrt(x.denom())) {
            return SquareTest::Yes(Rational::new(n, d));
        }
    }
    let (_, core) = square_free_split(&(x.numer() * x.denom()));
    SquareTest::No(core)
}

/// Rational `k`-th root, if one exists (real root; negative inputs only for odd `k`).
pub fn rational_kth_root(x: &Rational, k: u32) -> Option<Rational> {
    if k == 0 {
        return None;
    }
    if x.is_zero() {
        return Some(Rational::zero());
    }
    if x.is_negative() && k % 2 == 0 {
        return None;
    }
    let root_int = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(k);
        (r.pow(k) == n.abs()).then_some(r)
    };
    let n = root_int(x.numer())?;
    let d = root_int(x.denom())?;
    let r = Rational::new(n, d);
    Some(if x.is_negative() { -r } else { r })
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Positive rational `c` such that `c · values` is a primitive integer vector.
/// Returns one for the all-zero vector.
pub fn content_scale<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut lcm = BigInt::one();
    let mut gcd = BigInt::zero();
    let vals: Vec<&Rational> = values.into_iter().collect();
    for v in &vals {
        lcm = lcm.lcm(v.denom());
    }
    for v in &vals {
        let scaled = v.numer() * (&lcm / v.denom());
        gcd = gcd.gcd(&scaled);
    }
    if gcd.is_zero() {
        return Rational::one();
    }
    Rational::new(lcm, gcd)
}

pub fn floor_log2(x: &BigInt) -> u64 {
    x.bits().saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_test_examples() {
        assert_eq!(is_square_in_q(&int(81)), SquareTest::Yes(int(9)));
        assert_eq!(is_square_in_q(&int(12)), SquareTest::No(BigInt::from(3)));
        assert_eq!(is_square_in_q(&int(1)), SquareTest::Yes(int(1)));
        assert_eq!(is_square_in_q(&int(-108)), SquareTest::No(BigInt::from(-3)));
        assert_eq!(is_square_in_q(&rat(9, 4)), SquareTest::Yes(rat(3, 2)));
        assert_eq!(is_square_in_q(&rat(1, 2)), SquareTest::No(BigInt::from(2)));
        assert_eq!(is_square_in_q(&int(48)), SquareTest::No(BigInt::from(3)));
    }

    #[test]
    fn square_free_split_large_cofactor() {
        // 1000003 is prime; its square must be detected after trial division.
        let p = BigInt::from(1_000_003u64);
        let n = &p * &p * BigInt::from(12);
        let (root, core) = square_free_split(&n);
        assert_eq!(core, BigInt::from(3));
        assert_eq!(root, p * 2);
    }

    #[test]
    fn kth_roots() {
        assert_eq!(rational_kth_root(&int(8), 3), Some(int(2)));
        assert_eq!(rational_kth_root(&int(-8), 3), Some(int(-2)));
        assert_eq!(rational_kth_root(&int(-4), 2), None);
        assert_eq!(rational_kth_root(&rat(1, 4), 2), Some(rat(1, 2)));
        assert_eq!(rational_kth_root(&int(2), 2), None);
    }

    #[test]
    fn content() {
        let v = [rat(1, 2), rat(-3, 4), int(0)];
        assert_eq!(content_scale(v.iter()), int(4));
        let w = [int(6), int(9)];
        assert_eq!(content_scale(w.iter()), rat(1, 3));
        assert_eq!(binomial(10, 5), BigInt::from(252));
    }
}
