use serde::Serialize;

use super::complex_rank;
use crate::apolarity::apolar_kernel;
use crate::binform::{discriminant, rational_and_quadratic_factor, BinaryForm};
use crate::error::{Error, Result};
use crate::scalar::{is_square_in_q, Domain, Scalar, SquareTest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rank3Case {
    Case1Cyclic,
    Case2Generic,
    Case3Mixed,
    #[serde(rename = "splits_over_K")]
    SplitsOverK,
    NotRank3,
}

impl Rank3Case {
    pub fn name(self) -> &'static str {
        match self {
            Rank3Case::Case1Cyclic => "case1_cyclic",
            Rank3Case::Case2Generic => "case2_generic",
            Rank3Case::Case3Mixed => "case3_mixed",
            Rank3Case::SplitsOverK => "splits_over_K",
            Rank3Case::NotRank3 => "not_rank_3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rank3Classification {
    pub case: Rank3Case,
    /// Discriminant of the cubic Sylvester form scaled to have `x³`
    /// coefficient one (else `y³`, else the first nonzero coefficient).
    pub u: Scalar,
    pub field_description: String,
    pub sylvester_form: BinaryForm,
    /// False below degree 5, where the cubic Sylvester form need not be
    /// unique.
    pub unique: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmallRank {
    Rank1,
    Rank2 { u: Scalar, sylvester_form: BinaryForm },
    Rank3(Rank3Classification),
    Other { rank: usize },
}

fn field(base: Domain, extra: &[String]) -> String {
    let mut gens: Vec<String> = match base {
        Domain::Rational => Vec::new(),
        Domain::Quadratic(m) => vec![format!("sqrt({m})")],
        Domain::Tower(a, b) => vec![format!("sqrt({a})"), format!("sqrt({b})")],
    };
    gens.extend(extra.iter().cloned());
    if gens.is_empty() {
        "Q".into()
    } else {
        format!("Q({})", gens.join(", "))
    }
}

fn monic(h: &BinaryForm) -> Result<BinaryForm> {
    let c = h.coeffs();
    let lead = [&c[0], &c[h.degree()]]
        .into_iter()
        .chain(c.iter())
        .find(|x| !x.is_zero())
        .ok_or(Error::ZeroForm)?;
    h.scale(&lead.inverse()?)
}

fn classify_cubic(f: &BinaryForm, h: BinaryForm) -> Result<Rank3Classification> {
    if !h.is_rational() {
        return Err(Error::UnsupportedField(format!(
            "cubic Sylvester form {h} is not rational"
        )));
    }
    let u = discriminant(&monic(&h)?)?;
    let shape = rational_and_quadratic_factor(&h)?;
    let base = f.domain();
    let (case, field_description) = match shape.linear_factors.len() {
        3 => (Rank3Case::SplitsOverK, field(base, &[])),
        1 => {
            let m = shape
                .quadratic_factors
                .first()
                .ok_or_else(|| Error::Invariant(format!("{h}: one rational root but no quadratic factor")))?
                .radicand;
            let joined = base.join(Domain::Quadratic(m))?;
            (Rank3Case::Case3Mixed, field(joined, &[]))
        }
        0 => match is_square_in_q(u.as_rational().expect("rational")) {
            SquareTest::Yes(_) => (Rank3Case::Case1Cyclic, field(base, &["gamma".into()])),
            SquareTest::No(m) => (
                Rank3Case::Case2Generic,
                field(base, &["gamma".into(), format!("sqrt({m})")]),
            ),
        },
        n => {
            return Err(Error::Invariant(format!(
                "square-free cubic {h} with {n} rational roots"
            )))
        }
    };
    Ok(Rank3Classification {
        case,
        u,
        field_description,
        sylvester_form: h,
        unique: f.degree() >= 5,
    })
}

/// Rank one, rank two with its quadratic field datum, the rank-three field
/// classification, or the plain complex rank otherwise.
pub fn classify_small_rank(f: &BinaryForm) -> Result<SmallRank> {
    if f.is_power_of_linear() {
        return Ok(SmallRank::Rank1);
    }
    let (r, cert) = complex_rank(f)?;
    let witness = || {
        cert.witness
            .clone()
            .ok_or_else(|| Error::Invariant("rank certificate without witness".into()))
    };
    match r {
        1 => Ok(SmallRank::Rank1),
        2 => {
            // prefer the canonical kernel element when it is unique
            let kb = apolar_kernel(f, 2);
            let h = if kb.dim == 1 { kb.basis[0].clone() } else { witness()? };
            Ok(SmallRank::Rank2 {
                u: discriminant(&h)?,
                sylvester_form: h,
            })
        }
        3 => {
            let kb = apolar_kernel(f, 3);
            let h = if kb.dim == 1 { kb.basis[0].clone() } else { witness()? };
            Ok(SmallRank::Rank3(classify_cubic(f, h)?))
        }
        rank => Ok(SmallRank::Other { rank }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binform::parse_form;
    use crate::scalar::rational::rat;

    fn rank3(s: &str) -> Rank3Classification {
        match classify_small_rank(&parse_form(s).unwrap()).unwrap() {
            SmallRank::Rank3(c) => c,
            other => panic!("{s}: {other:?}"),
        }
    }

    #[test]
    fn cubic_cases() {
        let c = rank3("-15*x^5 + 90*x^4*y - 30*x^3*y^2 + 60*x^2*y^3 + 3*y^5");
        assert_eq!(c.case, Rank3Case::Case1Cyclic);
        assert_eq!(c.u, Scalar::from_int(81));
        assert_eq!(c.field_description, "Q(gamma)");
        assert!(c.unique);

        let c = rank3("3*x^7 + 210*x^4*y^3 + 84*x*y^6");
        assert_eq!(c.case, Rank3Case::Case2Generic);
        assert_eq!(c.u, Scalar::Rational(rat(-27, 4)));
        assert_eq!(c.field_description, "Q(gamma, sqrt(-3))");

        let c = rank3("x^5 + y^5 + (x + 2*y)^5");
        assert_eq!(c.case, Rank3Case::SplitsOverK);
        assert_eq!(c.field_description, "Q");
    }

    #[test]
    fn quartic_is_flagged() {
        let c = rank3("x^4 + 4*x^2*y^2 + y^4");
        assert!(!c.unique);
    }

    #[test]
    fn low_ranks() {
        let f = |s: &str| classify_small_rank(&parse_form(s).unwrap()).unwrap();
        assert_eq!(f("(2*x - y)^4"), SmallRank::Rank1);
        match f("x^5 + 20*x^3*y^2 + 20*x*y^4") {
            SmallRank::Rank2 { u, .. } => match is_square_in_q(u.as_rational().unwrap()) {
                SquareTest::No(m) => assert_eq!(m, 2.into()),
                SquareTest::Yes(_) => panic!("square"),
            },
            other => panic!("{other:?}"),
        }
        assert_eq!(f("x^3*y"), SmallRank::Other { rank: 4 });
    }
}
