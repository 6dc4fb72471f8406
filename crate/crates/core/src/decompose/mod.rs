//! Power-sum decompositions `f = Σ λⱼ (αⱼ x + βⱼ y)^d`: extraction from a
//! Sylvester form, exact or certified-numeric verification, and the parametric
//! families used as test beds.

mod family;
pub(crate) mod numeric;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::apolarity::apply_diffop;
use crate::binform::{rational_and_quadratic_factor, BinaryForm};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::parse::parse_scalar;
use crate::scalar::approx::DEFAULT_PRECISION;
use crate::scalar::rational::binomial;
use crate::scalar::{BigApprox, ComplexApprox, Domain, Mag, Rational, Scalar};

pub use family::{flambda_identity_check, flambda_identity_check_at, gen_flambda, gen_pd, IdentityCheck, PdFamily};

/// An exact field element or a complex ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coef {
    Exact(Scalar),
    Approx(ComplexApprox),
}

impl Coef {
    pub fn to_approx(&self, prec: u32) -> ComplexApprox {
        match self {
            Coef::Exact(s) => s.to_approx(prec),
            Coef::Approx(z) => z.with_precision(prec),
        }
    }

    pub fn as_exact(&self) -> Option<&Scalar> {
        match self {
            Coef::Exact(s) => Some(s),
            Coef::Approx(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Coef::Exact(s) => s.to_string(),
            Coef::Approx(z) => z.to_decimal(digits_for(z.precision())),
        }
    }
}

fn digits_for(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 3
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub lambda: Coef,
    pub alpha: Coef,
    pub beta: Coef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    /// Certified bound on the largest coefficient error at `precision` bits.
    Numeric { residual: Mag, precision: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub degree: usize,
    /// Field of the coefficients; `None` for numeric decompositions.
    pub domain: Option<Domain>,
    pub summands: Vec<Summand>,
    pub exactness: Exactness,
}

impl Decomposition {
    /// Exact decomposition from `(λ, α, β)` triples.
    pub fn exact(degree: usize, triples: Vec<(Scalar, Scalar, Scalar)>) -> Result<Self> {
        let mut domain = Domain::Rational;
        for (l, a, b) in &triples {
            for s in [l, a, b] {
                domain = domain.join(s.domain())?;
            }
        }
        let summands = triples
            .into_iter()
            .map(|(l, a, b)| Summand {
                lambda: Coef::Exact(l),
                alpha: Coef::Exact(a),
                beta: Coef::Exact(b),
            })
            .collect();
        Ok(Decomposition {
            degree,
            domain: Some(domain),
            summands,
            exactness: Exactness::Exact,
        })
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }

    /// Why the summands fail to be pairwise distinct with nonzero weights, if
    /// they do. Balls count as nonzero only when they exclude zero.
    pub fn honesty_violation(&self) -> Option<String> {
        let prec = self.precision();
        let nonzero = |c: &Coef| match c {
            Coef::Exact(s) => !s.is_zero(),
            Coef::Approx(z) => !(z.re.contains_zero() && z.im.contains_zero()),
        };
        for (i, s) in self.summands.iter().enumerate() {
            if !nonzero(&s.lambda) {
                return Some(format!("summand {i} has zero weight"));
            }
            let (a, b) = (&s.alpha, &s.beta);
            if !nonzero(a) && !nonzero(b) {
                return Some(format!("summand {i} has a zero linear form"));
            }
            for (j, t) in self.summands.iter().enumerate().skip(i + 1) {
                let cross = match (a, b, &t.alpha, &t.beta) {
                    (Coef::Exact(a1), Coef::Exact(b1), Coef::Exact(a2), Coef::Exact(b2)) => {
                        Coef::Exact(a1.checked_mul(b2).ok()?.checked_sub(&a2.checked_mul(b1).ok()?).ok()?)
                    }
                    _ => Coef::Approx(
                        a.to_approx(prec)
                            .mul(&t.beta.to_approx(prec))
                            .sub(&t.alpha.to_approx(prec).mul(&b.to_approx(prec))),
                    ),
                };
                if !nonzero(&cross) {
                    return Some(format!("summands {i} and {j} are proportional"));
                }
            }
        }
        None
    }

    fn precision(&self) -> u32 {
        match self.exactness {
            Exactness::Numeric { precision, .. } => precision,
            Exactness::Exact => DEFAULT_PRECISION,
        }
    }

    /// Exact expansion `Σ λⱼ (αⱼ x + βⱼ y)^d`; `None` for numeric data.
    pub fn expand(&self) -> Result<Option<BinaryForm>> {
        let mut acc = BinaryForm::zero(self.degree);
        for s in &self.summands {
            let (Some(l), Some(a), Some(b)) = (s.lambda.as_exact(), s.alpha.as_exact(), s.beta.as_exact()) else {
                return Ok(None);
            };
            let term = BinaryForm::linear(a.clone(), b.clone())?.pow(self.degree)?.scale(l)?;
            acc = acc.checked_add(&term)?;
        }
        Ok(Some(acc))
    }

    /// Ball enclosures of the plain coefficients of the expansion.
    pub fn expand_approx(&self, prec: u32) -> Vec<ComplexApprox> {
        let d = self.degree;
        (0..=d)
            .map(|i| {
                let c = BigApprox::from_rational(&Rational::from_integer(binomial(d, i)), prec);
                self.summands.iter().fold(ComplexApprox::zero(prec), |acc, s| {
                    let t = s
                        .lambda
                        .to_approx(prec)
                        .mul(&s.alpha.to_approx(prec).pow((d - i) as u32))
                        .mul(&s.beta.to_approx(prec).pow(i as u32));
                    acc.add(&t.scale_real(&c))
                })
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct WireSummand {
    lambda: String,
    alpha: String,
    beta: String,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum WireExactness {
    Exact,
    Numeric {
        residual: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        precision: Option<u32>,
    },
}

#[derive(Serialize, Deserialize)]
struct Wire {
    degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<String>,
    summands: Vec<WireSummand>,
    exactness: WireExactness,
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            degree: self.degree,
            domain: Some(self.domain.map_or_else(|| "approx".into(), Domain::describe)),
            summands: self
                .summands
                .iter()
                .map(|t| WireSummand {
                    lambda: t.lambda.render(),
                    alpha: t.alpha.render(),
                    beta: t.beta.render(),
                })
                .collect(),
            exactness: match &self.exactness {
                Exactness::Exact => WireExactness::Exact,
                Exactness::Numeric { residual, precision } => WireExactness::Numeric {
                    residual: residual.to_sci_string(),
                    precision: Some(*precision),
                },
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Decomposition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = Wire::deserialize(d)?;
        let scalar = |t: &str| parse_scalar(t).map_err(|e| D::Error::custom(format!("{t:?}: {e}")));
        let triples = w
            .summands
            .iter()
            .map(|s| Ok((scalar(&s.lambda)?, scalar(&s.alpha)?, scalar(&s.beta)?)))
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        match w.exactness {
            WireExactness::Exact => Decomposition::exact(w.degree, triples).map_err(D::Error::custom),
            WireExactness::Numeric { residual, precision } => {
                let prec = precision.unwrap_or(DEFAULT_PRECISION);
                let r = crate::parse::parse_rational(&residual).map_err(D::Error::custom)?;
                let ball = |s: Scalar| Coef::Approx(s.to_approx(prec));
                Ok(Decomposition {
                    degree: w.degree,
                    domain: None,
                    summands: triples
                        .into_iter()
                        .map(|(l, a, b)| Summand {
                            lambda: ball(l),
                            alpha: ball(a),
                            beta: ball(b),
                        })
                        .collect(),
                    exactness: Exactness::Numeric {
                        residual: BigApprox::from_rational(&r, 64).abs_upper(),
                        precision: prec,
                    },
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    ExactMatch,
    /// `f − Σ λⱼ (αⱼ x + βⱼ y)^d`.
    Mismatch { diff: BinaryForm },
    /// Certified bound on the largest coefficient error.
    Numeric { residual: Mag },
    Dishonest { reason: String },
}

impl Verification {
    pub fn status(&self) -> &'static str {
        match self {
            Verification::ExactMatch => "exact_match",
            Verification::Mismatch { .. } => "mismatch",
            Verification::Numeric { .. } => "numeric",
            Verification::Dishonest { .. } => "dishonest",
        }
    }
}

impl Serialize for Verification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("status", self.status())?;
        match self {
            Verification::ExactMatch => {}
            Verification::Mismatch { diff } => m.serialize_entry("diff", diff)?,
            Verification::Numeric { residual } => m.serialize_entry("residual", &residual.to_sci_string())?,
            Verification::Dishonest { reason } => m.serialize_entry("reason", reason)?,
        }
        m.end()
    }
}

/// Re-checks honesty and compares the expansion with `f`: exactly in the
/// joined field, or by ball arithmetic for numeric data.
pub fn verify_decomposition(dec: &Decomposition, f: &BinaryForm) -> Result<Verification> {
    if dec.degree != f.degree() {
        return Err(Error::Precondition(format!(
            "decomposition of degree {} against a form of degree {}",
            dec.degree,
            f.degree()
        )));
    }
    if let Some(dom) = dec.domain {
        dom.join(f.domain())?;
    }
    if let Some(reason) = dec.honesty_violation() {
        return Ok(Verification::Dishonest { reason });
    }
    if let Some(g) = dec.expand()? {
        let diff = f.checked_sub(&g)?;
        return Ok(if diff.is_zero() {
            Verification::ExactMatch
        } else {
            Verification::Mismatch { diff }
        });
    }
    let prec = dec.precision();
    Ok(Verification::Numeric {
        residual: residual(dec, f, prec),
    })
}

fn residual(dec: &Decomposition, f: &BinaryForm, prec: u32) -> Mag {
    let g = dec.expand_approx(prec);
    numeric::max_mag(
        f.coeffs()
            .iter()
            .zip(&g)
            .map(|(c, e)| c.to_approx(prec).sub(e).abs_upper()),
    )
}

/// Root points `(α : β)` of `h` when `h` splits over a quadratic tower.
fn exact_points(h: &BinaryForm) -> Result<Option<Vec<(Scalar, Scalar)>>> {
    if !h.is_rational() {
        return Ok(None);
    }
    let shape = rational_and_quadratic_factor(h)?;
    if shape.remainder.degree() > 0 {
        return Ok(None);
    }
    let mut pts: Vec<(Scalar, Scalar)> = shape
        .rational_points()
        .into_iter()
        .map(|((a, b), _)| (Scalar::Rational(a), Scalar::Rational(b)))
        .collect();
    for q in &shape.quadratic_factors {
        pts.extend(q.roots()?);
    }
    Ok(Some(pts))
}

fn check_sylvester(f: &BinaryForm, h: &BinaryForm) -> Result<()> {
    let r = h.degree();
    if r == 0 || r > f.degree() {
        return Err(Error::Precondition(format!(
            "Sylvester form of degree {r} for a form of degree {}",
            f.degree()
        )));
    }
    if !apply_diffop(h, f)?.is_zero() {
        return Err(Error::Precondition(format!("{h} is not apolar to {f}")));
    }
    if !h.is_square_free() {
        return Err(Error::Precondition(format!("{h} is not square-free")));
    }
    Ok(())
}

/// Decomposition read off a Sylvester form `h` of `f`: exact when `h` splits
/// over a quadratic tower, otherwise numeric at the default precision.
pub fn extract_decomposition(f: &BinaryForm, h: &BinaryForm) -> Result<Decomposition> {
    extract_decomposition_at(f, h, DEFAULT_PRECISION)
}

pub fn extract_decomposition_at(f: &BinaryForm, h: &BinaryForm, prec: u32) -> Result<Decomposition> {
    check_sylvester(f, h)?;
    if let Some(pts) = exact_points(h)? {
        let mut domain = f.domain();
        let mut fits = true;
        for (a, b) in &pts {
            match domain.join(a.domain()).and_then(|d| d.join(b.domain())) {
                Ok(d) => domain = d,
                Err(_) => fits = false,
            }
        }
        if fits {
            return extract_exact(f, pts);
        }
    }
    extract_numeric(f, h, prec)
}

fn extract_exact(f: &BinaryForm, pts: Vec<(Scalar, Scalar)>) -> Result<Decomposition> {
    let d = f.degree();
    let m = Matrix::from_fn(d + 1, pts.len(), |i, k| {
        let (a, b) = &pts[k];
        &a.pow((d - i) as u32) * &b.pow(i as u32)
    });
    let lambdas = m
        .solve(&f.binomial_view().a)
        .map_err(|e| Error::Invariant(format!("power-moment system: {e}")))?;
    let triples = lambdas.into_iter().zip(pts).map(|(l, (a, b))| (l, a, b)).collect();
    let dec = Decomposition::exact(d, triples)?;
    match verify_decomposition(&dec, f)? {
        Verification::ExactMatch => Ok(dec),
        other => Err(Error::Invariant(format!("extracted decomposition fails: {other:?}"))),
    }
}

fn extract_numeric(f: &BinaryForm, h: &BinaryForm, prec: u32) -> Result<Decomposition> {
    let d = f.degree();
    let c: Vec<ComplexApprox> = h.coeffs().iter().map(|x| x.to_approx(prec)).collect();
    // h(1, s) = Σ cᵢ sⁱ; a vanishing top coefficient means the point (0 : 1)
    let at_infinity = h.coeff(h.degree()).is_zero();
    let finite = if at_infinity { &c[..c.len() - 1] } else { &c[..] };
    let roots = numeric::roots(finite, prec);
    let m = roots.len();
    let a: Vec<ComplexApprox> = f.binomial_view().a.iter().map(|x| x.to_approx(prec)).collect();
    let rows = (0..m).map(|i| roots.iter().map(|s| s.pow(i as u32)).collect()).collect();
    let mut lambdas = numeric::solve(rows, a[..m].to_vec())
        .ok_or_else(|| Error::Invariant("singular Vandermonde system".into()))?;
    let one = ComplexApprox::one(prec);
    let zero = ComplexApprox::zero(prec);
    let mut dirs: Vec<(ComplexApprox, ComplexApprox)> = roots.into_iter().map(|s| (one.clone(), s)).collect();
    if at_infinity {
        let tail = dirs
            .iter()
            .zip(&lambdas)
            .fold(a[d].clone(), |acc, ((_, s), l)| acc.sub(&l.mul(&s.pow(d as u32))));
        lambdas.push(tail.mid());
        dirs.push((zero, one.clone()));
    }
    let mut dec = Decomposition {
        degree: d,
        domain: None,
        summands: lambdas
            .into_iter()
            .zip(dirs)
            .map(|(l, (a, b))| Summand {
                lambda: Coef::Approx(l),
                alpha: Coef::Approx(a),
                beta: Coef::Approx(b),
            })
            .collect(),
        exactness: Exactness::Numeric {
            residual: Mag::ZERO,
            precision: prec,
        },
    };
    dec.exactness = Exactness::Numeric {
        residual: residual(&dec, f, prec),
        precision: prec,
    };
    Ok(dec)
}
