use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::BinaryForm;
use crate::error::{Error, Result};
use crate::linalg::{normalize_vector, Matrix};
use crate::decompose::numeric;
use crate::poly::{rational_roots, Poly};
use crate::scalar::rational::int;
use crate::scalar::{is_square_in_q, ComplexApprox, Rational, Scalar, SquareTest};

/// Homogeneous resultant of two forms (Sylvester determinant in their declared
/// degrees); zero iff they share a projective root, including `(1 : 0)`.
pub fn resultant(f: &BinaryForm, g: &BinaryForm) -> Scalar {
    let (m, n) = (f.degree(), g.degree());
    let size = m + n;
    Matrix::from_fn(size, size, |i, j| {
        if i < n {
            j.checked_sub(i)
                .and_then(|k| f.coeffs().get(k).cloned())
                .unwrap_or_else(Scalar::zero)
        } else {
            j.checked_sub(i - n)
                .and_then(|k| g.coeffs().get(k).cloned())
                .unwrap_or_else(Scalar::zero)
        }
    })
    .determinant()
}

/// Discriminant of a form of degree `d ≥ 2`, scaled to agree with
/// `b² − 4ac` for quadratics and `−4p³ − 27q²` for `x³ + p·x·y² + q·y³`.
pub fn discriminant(f: &BinaryForm) -> Result<Scalar> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::Precondition("discriminant needs degree at least 2".into()));
    }
    // Res(f_x, f_y) = (−1)^(d(d−1)/2) · d^(d−2) · disc(f)
    let r = resultant(&f.partial_x(), &f.partial_y());
    let mut k = Rational::from_integer(num_bigint::BigInt::from(d).pow((d - 2) as u32));
    if (d * (d - 1) / 2) % 2 == 1 {
        k = -k;
    }
    Ok(r.scale(&(Rational::from_integer(1.into()) / k)))
}

/// A rational-root-free quadratic factor `A x² + B xy + C y²` together with
/// its discriminant; its roots lie in `ℚ(√u)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticFactor {
    pub form: BinaryForm,
    pub multiplicity: usize,
    pub discriminant: Scalar,
    /// Square-free part of the discriminant.
    pub radicand: i64,
}

impl QuadraticFactor {
    /// The two root points `(1 : t)` with `t` in `ℚ(√radicand)`.
    pub fn roots(&self) -> Result<[(Scalar, Scalar); 2]> {
        // A x² + B xy + C y² vanishes at (1 : t) when C t² + B t + A = 0
        let c = self.form.coeffs();
        let (a, b, cc) = (&c[0], &c[1], &c[2]);
        let disc = self.discriminant.as_rational().expect("rational discriminant");
        let sq = Scalar::sqrt_of(disc)?;
        let two_c = cc.scale(&int(2));
        let t1 = (&(-b) + &sq).checked_div(&two_c)?;
        let t2 = (&(-b) - &sq).checked_div(&two_c)?;
        debug_assert!(!a.is_zero());
        Ok([(Scalar::one(), t1), (Scalar::one(), t2)])
    }
}

/// Partial factorisation over ℚ:
/// `f = unit · Π linearᵢ^mᵢ · Π quadraticₖ^nₖ · remainder`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationShape {
    pub unit: Scalar,
    /// Linear factors `α y − β x` for rational roots `(α : β)`, normalised so
    /// the first nonzero of `(α, β)` is one.
    pub linear_factors: Vec<(BinaryForm, usize)>,
    pub quadratic_factors: Vec<QuadraticFactor>,
    pub remainder: BinaryForm,
}

impl FactorizationShape {
    /// Rational root points `(α : β)` with their multiplicities.
    pub fn rational_points(&self) -> Vec<((Rational, Rational), usize)> {
        self.linear_factors
            .iter()
            .map(|(l, m)| {
                let c = l.coeffs();
                // l = −β x + α y
                let beta = -c[0].as_rational().unwrap().clone();
                let alpha = c[1].as_rational().unwrap().clone();
                ((alpha, beta), *m)
            })
            .collect()
    }

    pub fn expand(&self) -> Result<BinaryForm> {
        let mut acc = BinaryForm::raw(vec![self.unit.clone()]);
        for (l, m) in &self.linear_factors {
            acc = acc.checked_mul(&l.pow(*m)?)?;
        }
        for q in &self.quadratic_factors {
            acc = acc.checked_mul(&q.form.pow(q.multiplicity)?)?;
        }
        acc.checked_mul(&self.remainder)
    }
}

fn point_factor(alpha: Rational, beta: Rational) -> BinaryForm {
    BinaryForm::from_rationals([-beta, alpha])
}

fn quadratic_factor(form: BinaryForm, multiplicity: usize) -> Result<QuadraticFactor> {
    let form = BinaryForm::raw(normalize_vector(form.coeffs().to_vec()));
    let c: Vec<Rational> = form.coeffs().iter().map(|x| x.as_rational().unwrap().clone()).collect();
    let disc = &c[1] * &c[1] - int(4) * &c[0] * &c[2];
    let radicand = match is_square_in_q(&disc) {
        SquareTest::No(m) => m.try_into().map_err(|_| Error::RadicandOverflow(disc.to_string()))?,
        SquareTest::Yes(_) => {
            return Err(Error::Invariant("quadratic without rational roots has a square discriminant".into()))
        }
    };
    Ok(QuadraticFactor {
        form,
        multiplicity,
        discriminant: Scalar::Rational(disc),
        radicand,
    })
}

/// The first continued-fraction convergent of a numerically real `z` within
/// `1e-9` relative, if its denominator stays below a million.
fn recognize(z: Complex64) -> Option<Rational> {
    let tol = 1e-9 * (1.0 + z.norm());
    if z.im.abs() > tol {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut x = z.re;
    for _ in 0..40 {
        let a = x.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        (h0, h1) = (h1, a.checked_mul(h1)?.checked_add(h0)?);
        (k0, k1) = (k1, a.checked_mul(k1)?.checked_add(k0)?);
        if k1 > 1_000_000 {
            return None;
        }
        if (h1 as f64 / k1 as f64 - z.re).abs() <= tol {
            return Some(Rational::new(h1.into(), k1.into()));
        }
        x = 1.0 / (x - a as f64);
    }
    None
}

/// Rational quadratic factors of a square-free, rational-root-free rational
/// form. Pairs of numeric roots with rational-looking sum and product propose
/// a factor; exact division decides. Returns the factors and the cofactor.
fn split_quadratics(f: &BinaryForm) -> Result<(Vec<BinaryForm>, BinaryForm)> {
    let prec = 128;
    let c: Vec<ComplexApprox> = f.dehomogenize().coeffs().iter().map(|x| x.to_approx(prec)).collect();
    let mut roots: Vec<Complex64> = numeric::roots(&c, prec)
        .iter()
        .map(|z| {
            let (re, im) = z.mid_f64();
            Complex64::new(re, im)
        })
        .collect();
    let mut found = Vec::new();
    let mut rest = f.clone();
    let mut i = 0;
    'outer: while i < roots.len() {
        for j in i + 1..roots.len() {
            let (Some(s), Some(p)) = (recognize(roots[i] + roots[j]), recognize(roots[i] * roots[j])) else {
                continue;
            };
            // t² − s t + p with t = x/y
            let q = BinaryForm::homogenize(&Poly::from_rationals([p, -s, Rational::one()]), 2);
            if q.divides(&rest) {
                rest = rest.exact_div(&q)?;
                found.push(q);
                roots.remove(j);
                roots.remove(i);
                continue 'outer;
            }
        }
        i += 1;
    }
    Ok((found, rest))
}

/// Extracts rational roots (and the root at infinity) and rational quadratic
/// factors; whatever does not split that far stays in the remainder.
pub fn rational_and_quadratic_factor(f: &BinaryForm) -> Result<FactorizationShape> {
    if !f.is_rational() {
        return Err(Error::UnsupportedField(format!(
            "factorisation needs rational coefficients, got {}",
            f.domain().describe()
        )));
    }
    let sf = f.square_free_decompose()?;
    let mut linear = Vec::new();
    let mut quadratic = Vec::new();
    let mut remainder = BinaryForm::raw(vec![Scalar::one()]);
    for (part, m) in &sf.parts {
        let mut rest = part.clone();
        if part.y_multiplicity() == 1 {
            let y = point_factor(Rational::one(), Rational::zero());
            rest = rest.exact_div(&y)?;
            linear.push((y, *m));
        }
        for t in rational_roots(&rest.dehomogenize()) {
            // root (t : 1), written with first coordinate one when t ≠ 0
            let l = if t.is_zero() {
                point_factor(Rational::zero(), Rational::one())
            } else {
                point_factor(Rational::one(), Rational::one() / t)
            };
            rest = rest.exact_div(&l)?;
            linear.push((l, *m));
        }
        rest = BinaryForm::raw(normalize_vector(rest.coeffs().to_vec()));
        match rest.degree() {
            0 => {}
            2 => quadratic.push(quadratic_factor(rest, *m)?),
            3 => remainder = remainder.checked_mul(&rest.pow(*m)?)?,
            _ => {
                let (quads, left) = split_quadratics(&rest)?;
                for q in quads {
                    quadratic.push(quadratic_factor(q, *m)?);
                }
                remainder = remainder.checked_mul(&left.pow(*m)?)?;
            }
        }
    }
    // all factors are normalised; the unit absorbs the scaling
    let shape = FactorizationShape {
        unit: Scalar::one(),
        linear_factors: linear,
        quadratic_factors: quadratic,
        remainder,
    };
    let probe = shape.expand()?;
    let i = probe
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero product");
    let fixed = f.coeff(i).checked_div(probe.coeff(i))?;
    Ok(FactorizationShape { unit: fixed, ..shape })
}

/// Non-real roots forced by runs of vanishing coefficients: a run of `L`
/// consecutive interior zeros contributes `2·⌊L/2⌋`; runs are summed. Zero
/// when the first or last coefficient vanishes.
pub fn descartes_gap_bound(f: &BinaryForm) -> usize {
    let c = f.coeffs();
    let d = f.degree();
    if d < 2 || c[0].is_zero() || c[d].is_zero() {
        return 0;
    }
    let mut total = 0;
    let mut run = 0;
    for x in &c[1..d] {
        if x.is_zero() {
            run += 1;
        } else {
            total += 2 * (run / 2);
            run = 0;
        }
    }
    total + 2 * (run / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binform::parse_form;

    fn f(s: &str) -> BinaryForm {
        parse_form(s).unwrap()
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&f("x^3 - 3*x*y^2 + y^3")).unwrap(), Scalar::from_int(81));
        assert_eq!(discriminant(&f("x^2 - y^2")).unwrap(), Scalar::from_int(4));
        assert_eq!(discriminant(&f("x^2*y")).unwrap(), Scalar::zero());
        assert_eq!(discriminant(&f("y^3 - 2*x^3")).unwrap(), Scalar::from_int(-108));
        assert_eq!(discriminant(&f("3*x^3 - 3*x^2*y - x*y^2 + y^3")).unwrap(), Scalar::from_int(48));
        // b² − 4ac on 2x² + 3xy − 5y²
        assert_eq!(discriminant(&f("2*x^2 + 3*x*y - 5*y^2")).unwrap(), Scalar::from_int(49));
        // quartic with roots 0, 1, −1, ∞: Π (αᵢβⱼ − αⱼβᵢ)² = 4
        assert_eq!(discriminant(&f("x^3*y - x*y^3")).unwrap(), Scalar::from_int(4));
    }

    #[test]
    fn factor_shapes() {
        let g = f("3*x^3 - 3*x^2*y - x*y^2 + y^3");
        let s = rational_and_quadratic_factor(&g).unwrap();
        assert_eq!(s.linear_factors, vec![(f("y - x"), 1)]);
        assert_eq!(s.quadratic_factors.len(), 1);
        assert!(s.quadratic_factors[0].form.projectively_equal(&f("y^2 - 3*x^2")));
        assert_eq!(s.quadratic_factors[0].radicand, 3);
        assert_eq!(s.expand().unwrap(), g);

        let h = f("x^3 - 3*x*y^2 + y^3");
        let s = rational_and_quadratic_factor(&h).unwrap();
        assert!(s.linear_factors.is_empty() && s.quadratic_factors.is_empty());
        assert_eq!(s.remainder.degree(), 3);
        assert_eq!(s.expand().unwrap(), h);

        let s = rational_and_quadratic_factor(&f("y^3 - 2*x^3")).unwrap();
        assert_eq!(s.remainder.degree(), 3);

        let g = f("x^2*y^3*(2*x - y)");
        let s = rational_and_quadratic_factor(&g).unwrap();
        assert_eq!(s.rational_points().len(), 3);
        assert_eq!(s.expand().unwrap(), g);
    }

    #[test]
    fn several_quadratics() {
        let g = f("(x^2 - 2*y^2)*(3*x^2 - y^2)*(x^2 + x*y + y^2)*(2*x - y)");
        let s = rational_and_quadratic_factor(&g).unwrap();
        assert_eq!(s.linear_factors.len(), 1);
        let mut radicands: Vec<i64> = s.quadratic_factors.iter().map(|q| q.radicand).collect();
        radicands.sort();
        assert_eq!(radicands, vec![-3, 2, 3]);
        assert_eq!(s.remainder.degree(), 0);
        assert_eq!(s.expand().unwrap(), g);
        // irreducible quartic stays put
        let s = rational_and_quadratic_factor(&f("x^4 - 10*x^2*y^2 + y^4")).unwrap();
        assert!(s.quadratic_factors.is_empty());
        assert_eq!(s.remainder.degree(), 4);
    }

    #[test]
    fn gap_bound() {
        assert_eq!(descartes_gap_bound(&f("x^4 + y^4")), 2);
        assert_eq!(descartes_gap_bound(&f("x^10 + x^5*y^5 + y^10")), 8);
        assert_eq!(descartes_gap_bound(&f("x^2 + x*y + y^2")), 0);
        assert_eq!(descartes_gap_bound(&f("x^4 + x*y^3")), 0);
    }
}
