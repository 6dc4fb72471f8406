use serde::Serialize;

use super::{numeric, Decomposition};
use crate::binform::BinaryForm;
use crate::error::{Error, Result};
use crate::scalar::approx::DEFAULT_PRECISION;
use crate::scalar::rational::{binomial, rational_kth_root};
use crate::scalar::{is_square_in_q, BigApprox, ComplexApprox, Mag, Rational, Scalar};

/// `x^(2k) + C(2k,k)·λ·x^k y^k + y^(2k)`.
pub fn gen_flambda(k: usize, lambda: &Scalar) -> Result<BinaryForm> {
    if k == 0 {
        return Err(Error::OutOfRange {
            what: "k",
            value: 0,
            range: ">= 1".into(),
        });
    }
    let mut c = vec![Scalar::zero(); 2 * k + 1];
    c[0] = Scalar::one();
    c[2 * k] = Scalar::one();
    c[k] = lambda.scale(&Rational::from_integer(binomial(2 * k, k)));
    BinaryForm::new(c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityCheck {
    /// `correction` is the weight `1 − λ²` of the extra `y^(2k)` term;
    /// `residual` is present for numeric checks.
    Verified {
        exact: bool,
        correction: Scalar,
        residual: Option<Mag>,
    },
    Failed { diff: String },
}

impl Serialize for IdentityCheck {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self {
            IdentityCheck::Verified {
                exact,
                correction,
                residual,
            } => {
                m.serialize_entry("status", "verified")?;
                m.serialize_entry("mode", if *exact { "exact" } else { "numeric" })?;
                m.serialize_entry("correction", correction)?;
                if let Some(r) = residual {
                    m.serialize_entry("residual", &r.to_sci_string())?;
                }
            }
            IdentityCheck::Failed { diff } => {
                m.serialize_entry("status", "failed")?;
                m.serialize_entry("diff", diff)?;
            }
        }
        m.end()
    }
}

/// Checks `f_λ = (1 − λ²) y^(2k) + (1/k) Σᵢ (x + μ ζⁱ y)^(2k)` with `μᵏ = λ`
/// and `ζ` a primitive `k`-th root of unity. When `μ` is rational the sum over
/// `i` keeps exactly the terms whose `y`-exponent is divisible by `k`;
/// otherwise the `k` values `μ ζⁱ` (the roots of `zᵏ = λ`) are computed in
/// ball arithmetic.
pub fn flambda_identity_check(k: usize, lambda: &Scalar) -> Result<IdentityCheck> {
    flambda_identity_check_at(k, lambda, DEFAULT_PRECISION)
}

pub fn flambda_identity_check_at(k: usize, lambda: &Scalar, prec: u32) -> Result<IdentityCheck> {
    if k < 2 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            range: ">= 2".into(),
        });
    }
    if lambda.is_zero() {
        return Err(Error::Precondition("lambda must be nonzero".into()));
    }
    let n = 2 * k;
    let f = gen_flambda(k, lambda)?;
    let correction = &Scalar::one() - &lambda.pow(2);
    let mu = lambda.as_rational().and_then(|q| rational_kth_root(q, k as u32));
    if let Some(mu) = mu {
        let mut c = vec![Scalar::zero(); n + 1];
        for (j, slot) in c.iter_mut().enumerate().step_by(k) {
            let w = Rational::from_integer(binomial(n, j)) * num_traits::pow(mu.clone(), j);
            *slot = Scalar::Rational(w);
        }
        c[n] = &c[n] + &correction;
        let rhs = BinaryForm::new(c)?;
        let diff = f.checked_sub(&rhs)?;
        return Ok(if diff.is_zero() {
            IdentityCheck::Verified {
                exact: true,
                correction,
                residual: None,
            }
        } else {
            IdentityCheck::Failed { diff: diff.to_string() }
        });
    }

    // z^k − λ
    let mut poly = vec![ComplexApprox::zero(prec); k + 1];
    poly[0] = lambda.to_approx(prec).neg();
    poly[k] = ComplexApprox::one(prec);
    let roots = numeric::roots(&poly, prec);
    let inv_k = BigApprox::from_rational(&Rational::new(1.into(), (k as i64).into()), prec);
    let mut worst = Mag::ZERO;
    for j in 0..=n {
        let binom = BigApprox::from_rational(&Rational::from_integer(binomial(n, j)), prec);
        let power_sum = roots
            .iter()
            .fold(ComplexApprox::zero(prec), |acc, w| acc.add(&w.pow(j as u32)));
        let mut rhs = power_sum.scale_real(&binom).scale_real(&inv_k);
        if j == n {
            rhs = rhs.add(&correction.to_approx(prec));
        }
        worst = worst.max(f.coeff(j).to_approx(prec).sub(&rhs).abs_upper());
    }
    let tolerance = Mag::pow2(-(prec as i64) / 2);
    Ok(if worst.cmp_value(&tolerance).is_lt() {
        IdentityCheck::Verified {
            exact: false,
            correction,
            residual: Some(worst),
        }
    } else {
        IdentityCheck::Failed {
            diff: format!("coefficient error up to {}", worst.to_sci_string()),
        }
    })
}

/// `p_d = Σᵢ C(d, 2i) γⁱ x^(d−2i) y^(2i)` with its two-term decomposition
/// `½ (x + √γ y)^d + ½ (x − √γ y)^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PdFamily {
    pub form: BinaryForm,
    pub decomposition: Decomposition,
    /// True when `√γ` is rational, so the rank is at most two already over ℚ.
    pub gamma_is_square: bool,
}

pub fn gen_pd(d: usize, gamma: &Rational) -> Result<PdFamily> {
    if d == 0 {
        return Err(Error::OutOfRange {
            what: "d",
            value: 0,
            range: ">= 1".into(),
        });
    }
    let mut c = vec![Scalar::zero(); d + 1];
    for i in 0..=d / 2 {
        let w = Rational::from_integer(binomial(d, 2 * i)) * num_traits::pow(gamma.clone(), i);
        c[2 * i] = Scalar::Rational(w);
    }
    let form = BinaryForm::new(c)?;
    let decomposition = if num_traits::Zero::is_zero(gamma) {
        Decomposition::exact(d, vec![(Scalar::one(), Scalar::one(), Scalar::zero())])?
    } else {
        let root = Scalar::sqrt_of(gamma)?;
        let half = Scalar::from_frac(1, 2);
        Decomposition::exact(
            d,
            vec![
                (half.clone(), Scalar::one(), root.clone()),
                (half, Scalar::one(), -&root),
            ],
        )?
    };
    Ok(PdFamily {
        form,
        decomposition,
        gamma_is_square: is_square_in_q(gamma).is_square(),
    })
}
