//! Binary forms `f = Σ cᵢ x^(d−i) yⁱ` with exact coefficients.
//!
//! Projective roots are points `(α : β)`. The point `(1 : 0)` is a root exactly
//! when `y | f`; everything else is found on the chart `f(t, 1)`.

mod factor;
mod real;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::parse_poly2;
use crate::poly::Poly;
use crate::scalar::rational::binomial;
use crate::scalar::{Domain, Rational, Scalar};

pub use factor::{
    descartes_gap_bound, discriminant, rational_and_quadratic_factor, resultant,
    FactorizationShape, QuadraticFactor,
};
pub use real::{is_hyperbolic, real_root_count};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<Scalar>,
    domain: Domain,
}

/// Coefficients `aᵢ` with `f = Σ C(d,i)·aᵢ·x^(d−i) yⁱ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialView {
    pub a: Vec<Scalar>,
}

/// `f = unit · Π partⱼ^mⱼ` with square-free, pairwise coprime parts whose first
/// nonzero coefficient is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareFreeDecomposition {
    pub unit: Scalar,
    pub parts: Vec<(BinaryForm, usize)>,
}

fn join_all<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Result<Domain> {
    xs.into_iter()
        .try_fold(Domain::Rational, |acc, x| acc.join(x.domain()))
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("a form needs at least one coefficient".into()));
        }
        let domain = join_all(&coeffs)?;
        Ok(BinaryForm { coeffs, domain })
    }

    /// Internal constructor for coefficient lists known to share a field.
    pub(crate) fn raw(coeffs: Vec<Scalar>) -> Self {
        BinaryForm::new(coeffs).expect("coefficients share a field")
    }

    pub fn from_ints(c: &[i64]) -> Self {
        BinaryForm::raw(c.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn from_rationals(c: impl IntoIterator<Item = Rational>) -> Self {
        BinaryForm::raw(c.into_iter().map(Scalar::Rational).collect())
    }

    pub fn zero(d: usize) -> Self {
        BinaryForm::raw(vec![Scalar::zero(); d + 1])
    }

    /// `x^a y^b`
    pub fn monomial(a: usize, b: usize) -> Self {
        let mut c = vec![Scalar::zero(); a + b + 1];
        c[b] = Scalar::one();
        BinaryForm::raw(c)
    }

    /// `α x + β y`
    pub fn linear(alpha: Scalar, beta: Scalar) -> Result<Self> {
        BinaryForm::new(vec![alpha, beta])
    }

    /// The linear form `α y − β x` vanishing at the point `(α : β)`.
    pub fn vanishing_at(alpha: &Scalar, beta: &Scalar) -> Result<Self> {
        BinaryForm::new(vec![-beta, alpha.clone()])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Plain coefficients `c₀..c_d`.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.domain == Domain::Rational
    }

    pub fn binomial_view(&self) -> BinomialView {
        let d = self.degree();
        BinomialView {
            a: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&Rational::new(1.into(), binomial(d, i))))
                .collect(),
        }
    }

    pub fn from_binomial(v: &BinomialView) -> Result<Self> {
        let d = v.a.len().checked_sub(1).ok_or(Error::Precondition("empty view".into()))?;
        BinaryForm::new(
            v.a.iter()
                .enumerate()
                .map(|(i, a)| a.scale(&Rational::from_integer(binomial(d, i))))
                .collect(),
        )
    }

    /// Multiplicity of the root `(1 : 0)`, i.e. the power of `y` dividing `f`.
    pub fn y_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// `f(t, 1)`; its degree is `d` minus the `y`-multiplicity.
    pub fn dehomogenize(&self) -> Poly {
        let d = self.degree();
        Poly::new((0..=d).map(|j| self.coeffs[d - j].clone()).collect())
    }

    /// Homogenises `p(t)` to degree `d ≥ deg p`, putting the excess into `y`.
    pub fn homogenize(p: &Poly, d: usize) -> Self {
        assert!(p.degree().unwrap_or(0) <= d, "degree too small to homogenise");
        BinaryForm::raw((0..=d).map(|i| p.coeff(d - i)).collect())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.same_degree(o)?;
        BinaryForm::new(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.checked_add(b))
                .collect::<Result<_>>()?,
        )
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&o.neg())
    }

    fn same_degree(&self, o: &Self) -> Result<()> {
        if self.degree() != o.degree() {
            return Err(Error::Precondition(format!(
                "degree mismatch: {} and {}",
                self.degree(),
                o.degree()
            )));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            domain: self.domain,
        }
    }

    pub fn scale(&self, s: &Scalar) -> Result<Self> {
        BinaryForm::new(
            self.coeffs
                .iter()
                .map(|c| c.checked_mul(s))
                .collect::<Result<_>>()?,
        )
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.domain.join(o.domain)?;
        let mut c = vec![Scalar::zero(); self.degree() + o.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        BinaryForm::new(c)
    }

    pub fn pow(&self, e: usize) -> Result<Self> {
        let mut acc = BinaryForm::raw(vec![Scalar::one()]);
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Value at the point `(x, y)`.
    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        let d = self.degree();
        let mut acc = Scalar::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = c
                .checked_mul(&x.pow((d - i) as u32))?
                .checked_mul(&y.pow(i as u32))?;
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// `∂f/∂x`, of degree `d − 1`.
    pub fn partial_x(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::zero(0);
        }
        BinaryForm::raw(
            (0..d)
                .map(|i| self.coeffs[i].scale(&Rational::from_integer(((d - i) as i64).into())))
                .collect(),
        )
    }

    /// `∂f/∂y`, of degree `d − 1`.
    pub fn partial_y(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::zero(0);
        }
        BinaryForm::raw(
            (1..=d)
                .map(|i| self.coeffs[i].scale(&Rational::from_integer((i as i64).into())))
                .collect(),
        )
    }

    /// `f(a·x + b·y, c·x + e·y)`.
    pub fn substitute(&self, m: [&Scalar; 4]) -> Result<Self> {
        let d = self.degree();
        let u = BinaryForm::new(vec![m[0].clone(), m[1].clone()])?;
        let v = BinaryForm::new(vec![m[2].clone(), m[3].clone()])?;
        let mut acc = BinaryForm::zero(d);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = u.pow(d - i)?.checked_mul(&v.pow(i)?)?.scale(c)?;
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// Rescaled so that the first nonzero coefficient is one.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(l) => {
                let inv = l.inverse().expect("nonzero");
                BinaryForm::raw(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// True if the two forms agree up to a nonzero scalar.
    pub fn projectively_equal(&self, o: &Self) -> bool {
        self.degree() == o.degree() && self.normalized() == o.normalized()
    }

    /// Quotient by a form known to divide this one.
    pub fn exact_div(&self, g: &Self) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ky = self.y_multiplicity();
        let kg = g.y_multiplicity();
        let (q, r) = self.dehomogenize().div_rem(&g.dehomogenize());
        if !r.is_zero() || kg > ky {
            return Err(Error::Precondition(format!("{g} does not divide {self}")));
        }
        Ok(BinaryForm::homogenize(&q, self.degree() - g.degree()))
    }

    pub fn divides(&self, f: &Self) -> bool {
        f.exact_div(self).is_ok()
    }

    /// Distinct projective roots counted with multiplicity, as a decomposition
    /// into square-free parts.
    pub fn square_free_decompose(&self) -> Result<SquareFreeDecomposition> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let k = self.y_multiplicity();
        let p = self.dehomogenize();
        let unit = p.lead().expect("nonzero").clone();
        let mut parts: Vec<(BinaryForm, usize)> = p
            .square_free_parts()
            .into_iter()
            .map(|(q, m)| {
                let e = q.degree().unwrap();
                (BinaryForm::homogenize(&q, e), m)
            })
            .collect();
        if k > 0 {
            let y = BinaryForm::monomial(0, 1);
            match parts.iter_mut().find(|(_, m)| *m == k) {
                Some(slot) => slot.0 = slot.0.checked_mul(&y)?.normalized(),
                None => parts.push((y, k)),
            }
        }
        parts.sort_by_key(|(f, m)| (*m, f.degree()));
        Ok(SquareFreeDecomposition { unit, parts })
    }

    /// No repeated projective root. Forms of degree zero count as square-free.
    pub fn is_square_free(&self) -> bool {
        match self.square_free_decompose() {
            Ok(sf) => sf.parts.iter().all(|(_, m)| *m == 1),
            Err(_) => false,
        }
    }

    /// `ℓ^d` for a linear form `ℓ`, up to a scalar.
    pub fn is_power_of_linear(&self) -> bool {
        match self.square_free_decompose() {
            Ok(sf) => {
                self.degree() >= 1 && sf.parts.len() == 1 && sf.parts[0].0.degree() == 1
            }
            Err(_) => false,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_form(text)
    }
}

impl SquareFreeDecomposition {
    /// `unit · Π partⱼ^mⱼ`.
    pub fn expand(&self) -> Result<BinaryForm> {
        let mut acc = BinaryForm::raw(vec![self.unit.clone()]);
        for (p, m) in &self.parts {
            acc = acc.checked_mul(&p.pow(*m)?)?;
        }
        Ok(acc)
    }

    pub fn max_multiplicity(&self) -> usize {
        self.parts.iter().map(|(_, m)| *m).max().unwrap_or(0)
    }
}

/// Monic gcd (first nonzero coefficient one).
pub fn gcd_forms(f: &BinaryForm, g: &BinaryForm) -> Result<BinaryForm> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroForm);
    }
    if f.is_zero() {
        return Ok(g.normalized());
    }
    if g.is_zero() {
        return Ok(f.normalized());
    }
    f.domain().join(g.domain())?;
    let k = f.y_multiplicity().min(g.y_multiplicity());
    let h = Poly::gcd(&f.dehomogenize(), &g.dehomogenize());
    let e = h.degree().unwrap();
    let base = BinaryForm::homogenize(&h, e);
    base.checked_mul(&BinaryForm::monomial(0, k))
}

/// Parses the polynomial grammar (`x`, `y`, rationals, `sqrt(n)`, `+ - * / ^`,
/// parentheses) into a homogeneous form.
pub fn parse_form(text: &str) -> Result<BinaryForm> {
    let p = parse_poly2(text)?;
    let mut degree = None;
    for &(a, b) in p.keys() {
        let e = (a + b) as usize;
        match degree {
            None => degree = Some(e),
            Some(d) if d != e => return Err(Error::NotHomogeneous(d.min(e), d.max(e))),
            _ => {}
        }
    }
    let d = degree.ok_or(Error::ZeroForm)?;
    let mut c = vec![Scalar::zero(); d + 1];
    for ((_, b), v) in p {
        c[b as usize] = v;
    }
    BinaryForm::new(c)
}

fn monomial_text(a: usize, b: usize) -> String {
    let pow = |v: &str, e: usize| match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    };
    let (px, py) = (pow("x", a), pow("y", b));
    match (px.is_empty(), py.is_empty()) {
        (true, _) => py,
        (_, true) => px,
        _ => format!("{px}*{py}"),
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = monomial_text(d - i, i);
            let text = c.to_string();
            let (neg, body) = if c.is_compound() {
                (false, format!("({text})"))
            } else if let Some(rest) = text.strip_prefix('-') {
                (true, rest.to_string())
            } else {
                (false, text)
            };
            let term = if mono.is_empty() {
                body
            } else if body == "1" {
                mono
            } else {
                format!("{body}*{mono}")
            };
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl FromStr for BinaryForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_form(s)
    }
}

impl Serialize for BinaryForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BinaryForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> BinaryForm {
        parse_form(s).unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(f("x^4 + 4*x^2*y^2 + y^4"), BinaryForm::from_ints(&[1, 0, 4, 0, 1]));
        assert_eq!(
            f("-15*x^5 + 90*x^4*y - 30*x^3*y^2 + 60*x^2*y^3 + 3*y^5"),
            BinaryForm::from_ints(&[-15, 90, -30, 60, 0, 3])
        );
        let g = f("(1 + 2*sqrt(2))*x^5 - 25*x^4*y");
        assert_eq!(g.degree(), 5);
        assert_eq!(g.domain(), Domain::Quadratic(2));
        assert!(matches!(parse_form("x^2 + y"), Err(Error::NotHomogeneous(1, 2))));
        assert!(matches!(parse_form("x^2 + ?"), Err(Error::Parse { position: 6, .. })));
        assert!(matches!(parse_form("x - x"), Err(Error::ZeroForm)));
        assert!(matches!(parse_form("sqrt(sqrt(2))*x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn rendering_round_trips() {
        for s in [
            "x^3 - 3*x*y^2 + y^3",
            "-15*x^5 + 90*x^4*y - 30*x^3*y^2 + 60*x^2*y^3 + 3*y^5",
            "(1 + 2*sqrt(2))*x^5 - 25*x^4*y",
            "1/2*x^2 - sqrt(3)*x*y + 2/3*sqrt(3)*y^2",
            "y^4",
            "7",
        ] {
            let g = f(s);
            assert_eq!(g.to_string(), s);
            assert_eq!(f(&g.to_string()), g);
        }
    }

    #[test]
    fn binomial_view_round_trip() {
        let g = BinaryForm::from_ints(&[-15, 90, -30, 60, 0, 3]);
        let v = g.binomial_view();
        let ints: Vec<Scalar> = [-15, 18, -3, 6, 0, 3].iter().map(|&x| Scalar::from_int(x)).collect();
        assert_eq!(v.a, ints);
        assert_eq!(BinaryForm::from_binomial(&v).unwrap(), g);
        let h = f("x^4 + 6*x^2*y^2 + y^4").binomial_view();
        assert_eq!(h.a, [1, 0, 1, 0, 1].map(Scalar::from_int).to_vec());
    }

    #[test]
    fn gcds() {
        // the gcd of x²y² and x³y is x²y
        assert_eq!(gcd_forms(&f("x^2*y^2"), &f("x^3*y")).unwrap(), f("x^2*y"));
        let h = f("x^3 - 3*x*y^2 + y^3");
        let hx = f("3*x^2 - 3*y^2");
        assert_eq!(gcd_forms(&h, &hx).unwrap(), f("1"));
        let g = f("2*x^2 - 2*y^2");
        assert_eq!(gcd_forms(&g, &g).unwrap(), f("x^2 - y^2"));
        assert_eq!(gcd_forms(&f("x*y"), &f("y^2")).unwrap(), f("y"));
    }

    #[test]
    fn square_free_parts() {
        let sf = f("x^2*y^2").square_free_decompose().unwrap();
        assert_eq!(sf.parts, vec![(f("x*y"), 2)]);
        let sf = f("x^3*y").square_free_decompose().unwrap();
        assert_eq!(sf.parts, vec![(f("y"), 1), (f("x"), 3)]);
        let g = f("(x^2 + y^2)^2");
        let sf = g.square_free_decompose().unwrap();
        assert_eq!(sf.parts, vec![(f("x^2 + y^2"), 2)]);
        assert_eq!(sf.expand().unwrap(), g);
        let g = f("-3*x^3*(x - 2*y)^2*y^4");
        assert_eq!(g.square_free_decompose().unwrap().expand().unwrap(), g);
        assert!(f("x^5").is_power_of_linear());
        assert!(f("(x + 2*y)^5").is_power_of_linear());
        assert!(!f("x^4 + y^4").is_power_of_linear());
    }

    #[test]
    fn substitution_and_division() {
        let g = f("x*y");
        let one = Scalar::one();
        let zero = Scalar::zero();
        let s = g.substitute([&one, &one, &zero, &one]).unwrap();
        assert_eq!(s, f("x*y + y^2"));
        assert_eq!(f("x^3 - x*y^2").exact_div(&f("x + y")).unwrap(), f("x^2 - x*y"));
        assert!(f("x^2 + y^2").exact_div(&f("x + y")).is_err());
    }
}
