//! Dense univariate polynomials over exact scalars, stored low degree first.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::approx::BigApprox;
use crate::scalar::rational::content_scale;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(Scalar::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_rationals(c: impl IntoIterator<Item = Rational>) -> Self {
        Poly::new(c.into_iter().map(Scalar::Rational).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(s: Scalar) -> Self {
        Poly::new(vec![s])
    }

    /// `s · tⁿ`
    pub fn monomial(s: Scalar, n: usize) -> Self {
        let mut c = vec![Scalar::zero(); n + 1];
        c[n] = s;
        Poly::new(c)
    }

    /// The polynomial `t`.
    pub fn var() -> Self {
        Poly::monomial(Scalar::one(), 1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.c.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.c.last()
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().all(Scalar::is_rational)
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.c.iter().map(|x| x * s).collect())
    }

    pub fn scale_rational(&self, q: &Rational) -> Poly {
        Poly::new(self.c.iter().map(|x| x.scale(q)).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.inverse().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x.scale(&Rational::from_integer((i as i64).into())))
                .collect(),
        )
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for x in self.c.iter().rev() {
            acc = &(&acc * t) + x;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(Scalar::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().unwrap().inverse().expect("nonzero");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Scalar::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] * &inv;
            if coef.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&coef * dj);
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = tidy(r);
        }
        a.monic()
    }

    /// Yun's square-free factorisation: `(part, multiplicity)` with nonconstant
    /// monic parts; the input equals `lead · Π partᵢ^mᵢ`.
    pub fn square_free_parts(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let a = self.monic();
        let b = a.derivative();
        let c = Poly::gcd(&a, &b);
        let mut w = a.exact_div(&c);
        let mut y = b.exact_div(&c);
        let mut z = &y - &w.derivative();
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let g = Poly::gcd(&w, &z);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), i));
            }
            w = w.exact_div(&g);
            y = z.exact_div(&g);
            z = &y - &w.derivative();
            i += 1;
        }
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn square_free_part(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return Poly::constant(Scalar::one());
        }
        let m = self.monic();
        m.exact_div(&Poly::gcd(&m, &m.derivative()))
    }

    /// Sign at a rational point under the real embedding.
    pub fn sign_at(&self, t: &Rational) -> Ordering {
        self.eval(&Scalar::Rational(t.clone()))
            .signum()
            .expect("real polynomial")
    }

    /// Ball evaluation at a real ball.
    pub fn eval_approx(&self, t: &BigApprox) -> BigApprox {
        let prec = t.precision();
        let mut acc = BigApprox::zero(prec);
        for x in self.c.iter().rev() {
            acc = acc.mul(t).add(&x.to_approx(prec).re);
        }
        acc
    }
}

/// Divides by a positive constant to keep coefficients small: the primitive
/// part for rational polynomials, the monic-by-absolute-value otherwise.
/// Signs of values are preserved.
pub fn tidy(p: Poly) -> Poly {
    if p.is_zero() {
        return p;
    }
    if p.is_rational() {
        let vals: Vec<Rational> = p.c.iter().map(|x| x.as_rational().unwrap().clone()).collect();
        let s = content_scale(vals.iter());
        return p.scale_rational(&s);
    }
    match p.lead().unwrap().abs() {
        Some(a) => p.scale(&a.inverse().expect("nonzero")),
        None => p.monic(),
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Scalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|x| -x).collect())
    }
}

/// Sturm sequence of a polynomial with real coefficients.
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![tidy(p.clone())];
    let d = tidy(p.derivative());
    if d.is_zero() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(tidy(-&r));
    }
    seq
}

fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut v = 0;
    for s in signs {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn lead_sign(p: &Poly) -> Ordering {
    p.lead().map_or(Ordering::Equal, |l| l.signum().expect("real polynomial"))
}

/// Sign variations of a Sturm sequence at `t`, or at `-∞` for `None`.
pub fn variations_at(seq: &[Poly], t: Option<&Rational>) -> usize {
    match t {
        Some(t) => variations(seq.iter().map(|p| p.sign_at(t))),
        None => variations(seq.iter().map(|p| {
            let s = lead_sign(p);
            if p.degree().unwrap_or(0) % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        })),
    }
}

pub fn variations_at_pos_inf(seq: &[Poly]) -> usize {
    variations(seq.iter().map(lead_sign))
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &Poly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(p);
    variations_at(&seq, None) - variations_at_pos_inf(&seq)
}

/// Rational `B` with every real root of `p` inside `(-B, B)`.
pub fn root_bound(p: &Poly) -> Rational {
    let n = p.degree().expect("nonzero polynomial");
    let lead = abs_lower(&p.c[n]);
    let mut m = Rational::zero();
    for x in &p.c[..n] {
        let a = abs_upper(x);
        if a > m {
            m = a;
        }
    }
    Rational::one() + m / lead + Rational::one()
}

fn abs_upper(x: &Scalar) -> Rational {
    match x {
        Scalar::Rational(q) => q.abs(),
        _ => x.to_approx(128).re.abs_upper().to_rational(),
    }
}

fn abs_lower(x: &Scalar) -> Rational {
    match x {
        Scalar::Rational(q) => q.abs(),
        _ => {
            let mut prec = 128;
            loop {
                let l = x.to_approx(prec).re.abs_lower();
                if !l.is_zero() {
                    return l.to_rational();
                }
                prec *= 2;
            }
        }
    }
}

/// Disjoint open intervals `(a, b)` with rational endpoints that are not
/// roots, each holding exactly one real root, in increasing order.
pub fn isolate_real_roots(p: &Poly) -> Vec<(Rational, Rational)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let p = p.square_free_part();
    let seq = sturm_sequence(&p);
    let b = root_bound(&p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = variations_at(&seq, Some(&lo)) - variations_at(&seq, Some(&hi));
        match n {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = split_point(&p, &lo, &hi);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// A non-root strictly inside `(lo, hi)`, as close to the midpoint as the
/// first few dyadic offsets allow.
fn split_point(p: &Poly, lo: &Rational, hi: &Rational) -> Rational {
    let w = hi - lo;
    let half = Rational::new(1.into(), 2.into());
    let mut k: i64 = 2;
    loop {
        // lo + w·(1/2 ± 1/k)
        for off in [Rational::zero(), Rational::new(1.into(), k.into())] {
            for sign in [1, -1] {
                let f = &half + &off * Rational::from_integer(sign.into());
                let t = lo + &w * f;
                if &t > lo && &t < hi && p.sign_at(&t) != Ordering::Equal {
                    return t;
                }
            }
        }
        k *= 2;
    }
}

/// Shrinks an isolating interval until its width is below `eps`.
pub fn refine(p: &Poly, mut lo: Rational, mut hi: Rational, eps: &Rational) -> (Rational, Rational) {
    let s_lo = p.sign_at(&lo);
    while &(&hi - &lo) >= eps {
        let mid = split_point(p, &lo, &hi);
        if p.sign_at(&mid) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Rational roots of a polynomial with rational coefficients, sorted, each once.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    assert!(p.is_rational(), "rational roots need rational coefficients");
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = tidy(p.square_free_part());
    // primitive integer coefficients: every rational root is P / |lead|
    let lead = sf.lead().unwrap().as_rational().unwrap().abs();
    let step = Rational::one() / &lead;
    let mut out = Vec::new();
    if sf.coeff(0).is_zero() {
        out.push(Rational::zero());
    }
    for (lo, hi) in isolate_real_roots(&sf) {
        let (lo, hi) = refine(&sf, lo, hi, &step);
        let cand = (&lo * &lead).ceil() / &lead;
        if cand < hi && !cand.is_zero() && sf.sign_at(&cand) == Ordering::Equal {
            out.push(cand);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::{int, rat};

    fn p(c: &[i64]) -> Poly {
        Poly::from_rationals(c.iter().map(|&x| int(x)))
    }

    #[test]
    fn division_and_gcd() {
        // (t−1)(t+2) and (t−1)(t−3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(Poly::gcd(&a, &b), p(&[-1, 1]));
        let (q, r) = p(&[1, 0, 0, 1]).div_rem(&p(&[1, 1]));
        assert_eq!(q, p(&[1, -1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn yun() {
        // t³(t−1)²(t+1)
        let f = &(&p(&[0, 0, 0, 1]) * &p(&[1, -2, 1])) * &p(&[1, 1]);
        let parts = f.square_free_parts();
        assert_eq!(parts, vec![(p(&[1, 1]), 1), (p(&[-1, 1]), 2), (p(&[0, 1]), 3)]);
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(count_real_roots(&p(&[1, 0, 1])), 0);
        assert_eq!(count_real_roots(&p(&[0, -1, 0, 1])), 3);
        // t³ − 3t + 1 has three real roots
        assert_eq!(count_real_roots(&p(&[1, -3, 0, 1])), 3);
        assert_eq!(count_real_roots(&p(&[-2, 0, 0, 1])), 1);
    }

    #[test]
    fn isolation_and_rational_roots() {
        let f = p(&[1, -3, 0, 1]);
        let iv = isolate_real_roots(&f);
        assert_eq!(iv.len(), 3);
        for w in iv.windows(2) {
            assert!(w[0].1 <= w[1].0);
        }
        // 6t³ − 5t² − 2t + 1 = (t − 1)(2t + 1)(3t − 1)
        let g = p(&[1, -2, -5, 6]);
        assert_eq!(rational_roots(&g), vec![rat(-1, 2), rat(1, 3), int(1)]);
        assert!(rational_roots(&p(&[-2, 0, 0, 1])).is_empty());
        assert_eq!(rational_roots(&p(&[0, 0, 1])), vec![int(0)]);
    }

    #[test]
    fn sturm_over_quadratic_field() {
        // t² − √2 has two real roots; t² + √2 none
        let s2 = Scalar::sqrt_int(2).unwrap();
        let a = Poly::new(vec![-&s2, Scalar::zero(), Scalar::one()]);
        let b = Poly::new(vec![s2, Scalar::zero(), Scalar::one()]);
        assert_eq!(count_real_roots(&a), 2);
        assert_eq!(count_real_roots(&b), 0);
        assert_eq!(isolate_real_roots(&a).len(), 2);
    }
}
