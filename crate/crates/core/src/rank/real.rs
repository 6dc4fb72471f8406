use num_traits::Zero;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{complex_rank, multiplicity_lower_bound, Claim, Evidence, RankCertificate};
use crate::apolarity::apolar_kernel;
use crate::binform::{descartes_gap_bound, discriminant, is_hyperbolic, real_root_count, BinaryForm};
use crate::decompose::gen_flambda;
use crate::decompose::numeric::aberth;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{isolate_real_roots, Poly};
use crate::scalar::{Rational, Scalar};

/// Search limits for kernels of dimension three or more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub samples: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            samples: 200,
            seed: 0x5eed,
        }
    }
}

enum Level {
    Found(BinaryForm),
    Excluded(Evidence),
    Undecided,
}

fn is_real_sylvester(h: &BinaryForm) -> Result<bool> {
    Ok(h.is_square_free() && real_root_count(h, false)? == h.degree())
}

fn combine(h0: &BinaryForm, h1: &BinaryForm, s: &Scalar) -> Result<BinaryForm> {
    h0.checked_add(&h1.scale(s)?)
}

/// `D(s) = disc(h0 + s·h1)` by interpolation through `2r − 1` points.
fn pencil_discriminant(h0: &BinaryForm, h1: &BinaryForm) -> Result<Poly> {
    let r = h0.degree();
    let n = 2 * r - 1;
    let xs: Vec<Scalar> = (0..n as i64).map(Scalar::from_int).collect();
    let ys = xs
        .iter()
        .map(|s| discriminant(&combine(h0, h1, s)?))
        .collect::<Result<Vec<_>>>()?;
    let v = Matrix::from_fn(n, n, |i, j| xs[i].pow(j as u32));
    Ok(Poly::new(v.solve(&ys)?))
}

/// Complete decision on the pencil `h0 + s·h1` (plus `h1`): real-rootedness is
/// constant between consecutive real roots of `D(s)`, so one sample per
/// interval suffices.
fn search_pencil(h0: &BinaryForm, h1: &BinaryForm) -> Result<Option<BinaryForm>> {
    if is_real_sylvester(h1)? {
        return Ok(Some(h1.clone()));
    }
    let d = pencil_discriminant(h0, h1)?;
    if d.is_zero() {
        return Ok(None);
    }
    let iv = isolate_real_roots(&d);
    let samples: Vec<Rational> = if iv.is_empty() {
        vec![Rational::zero()]
    } else {
        std::iter::once(iv[0].0.clone())
            .chain(iv.iter().map(|(_, b)| b.clone()))
            .collect()
    };
    for s in samples {
        let h = combine(h0, h1, &Scalar::Rational(s))?;
        if is_real_sylvester(&h)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n: i64 = rng.gen_range(-12..=12);
    let d: i64 = rng.gen_range(1..=3);
    Rational::new(n.into(), d.into())
}

/// Floating pre-check: all roots of `h` look real and separated. Only used to
/// skip hopeless candidates before the exact test.
fn looks_real_rooted(h: &BinaryForm) -> bool {
    let c: Vec<Complex64> = h
        .coeffs()
        .iter()
        .map(|x| {
            let (re, im) = x.to_f64_pair();
            Complex64::new(re, im)
        })
        .collect();
    // h(1, s) = Σ cᵢ sⁱ, dropping vanishing top terms (roots at (0 : 1))
    let top = c.iter().rposition(|z| z.norm() > 0.0).unwrap_or(0);
    let roots = aberth(&c[..=top]);
    roots.iter().all(|z| z.im.abs() <= 1e-7 * (1.0 + z.norm()))
}

/// Randomised search in a kernel of dimension `k ≥ 3`: alternately prescribe
/// `k − 1` random real roots (which pins down one member) and try random
/// integer combinations.
fn sample_kernel(basis: &[BinaryForm], budget: &Budget, r: usize) -> Result<Option<BinaryForm>> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ (r as u64).wrapping_mul(0x9e37_79b9));
    let k = basis.len();
    for i in 0..budget.samples {
        let coords: Vec<Scalar> = if i % 4 != 3 {
            let mut pts: Vec<Rational> = Vec::new();
            while pts.len() < k - 1 {
                let t = small_rational(&mut rng);
                if !pts.contains(&t) {
                    pts.push(t);
                }
            }
            let m = Matrix::from_fn(k - 1, k, |row, col| {
                let t = Scalar::Rational(pts[row].clone());
                basis[col].eval(&t, &Scalar::one()).expect("same field")
            });
            match m.kernel().into_iter().next() {
                Some(v) => v,
                None => continue,
            }
        } else {
            (0..k).map(|_| Scalar::from_int(rng.gen_range(-9..=9))).collect()
        };
        let mut h = BinaryForm::zero(r);
        for (b, s) in basis.iter().zip(&coords) {
            h = combine(&h, b, s)?;
        }
        if !h.is_zero() && looks_real_rooted(&h) && is_real_sylvester(&h)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

fn search_level(f: &BinaryForm, r: usize, budget: &Budget) -> Result<Level> {
    let kb = apolar_kernel(f, r);
    match kb.dim {
        0 => Ok(Level::Excluded(Evidence::KernelEmptyAt { r })),
        1 => {
            let h = &kb.basis[0];
            if is_real_sylvester(h)? {
                return Ok(Level::Found(h.clone()));
            }
            let gap = descartes_gap_bound(h);
            Ok(Level::Excluded(if gap > 0 {
                Evidence::GapBound { r, forced_nonreal: gap }
            } else {
                Evidence::NoRealSylvesterForm {
                    r,
                    dim: 1,
                    method: "unique apolar form checked by Sturm sequence".into(),
                }
            }))
        }
        2 => Ok(match search_pencil(&kb.basis[0], &kb.basis[1])? {
            Some(h) => Level::Found(h),
            None => Level::Excluded(Evidence::NoRealSylvesterForm {
                r,
                dim: 2,
                method: "pencil discriminant sign intervals".into(),
            }),
        }),
        _ => Ok(match sample_kernel(&kb.basis, budget, r)? {
            Some(h) => Level::Found(h),
            None => Level::Undecided,
        }),
    }
}

/// Real Waring rank of a real form: an exact value when the bounds meet or
/// every level below the witness is excluded, otherwise a certified bracket.
pub fn real_rank(f: &BinaryForm, budget: &Budget) -> Result<RankCertificate> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if !f.domain().is_real() {
        return Err(Error::NotReal);
    }
    let d = f.degree();
    if d == 0 {
        return Err(Error::Precondition("rank of a constant".into()));
    }
    if f.is_power_of_linear() {
        let (_, c) = complex_rank(f)?;
        return Ok(RankCertificate {
            claim: Claim::RealRank { r: 1 },
            witness: c.witness,
            lower_bound_evidence: Vec::new(),
            notes: vec!["power of a real linear form".into()],
        });
    }
    let mut evidence = Vec::new();
    let mut notes = Vec::new();
    let tau = real_root_count(f, true)?;
    evidence.push(Evidence::TauBound { tau });
    let mult = f.square_free_decompose()?.max_multiplicity();
    let mult_bound = multiplicity_lower_bound(f)?;
    evidence.push(Evidence::MultiplicityBound {
        multiplicity: mult,
        bound: mult_bound,
    });
    let (cr, ccert) = complex_rank(f)?;
    evidence.push(Evidence::ComplexRank { rank: cr });
    evidence.extend(ccert.lower_bound_evidence);
    let lb = tau.max(mult_bound).max(cr);
    let hyperbolic = is_hyperbolic(f)?;
    let ub = if d <= 2 || hyperbolic { d } else { d - 1 };
    if hyperbolic && d >= 3 {
        notes.push(format!("hyperbolic of degree {d}: real rank equals the degree"));
    } else if d >= 3 {
        notes.push(format!("not hyperbolic: real rank at most {}", d - 1));
    }
    if lb > ub {
        return Err(Error::Invariant(format!("lower bound {lb} exceeds upper bound {ub}")));
    }

    let mut lo = None;
    let mut witness = None;
    for r in lb..=ub {
        match search_level(f, r, budget)? {
            Level::Found(h) => {
                lo.get_or_insert(r);
                witness = Some(h);
                break;
            }
            Level::Excluded(e) => evidence.push(e),
            Level::Undecided => {
                let dim = apolar_kernel(f, r).dim;
                notes.push(format!("bracket only: kernel dim {dim} at r={r}"));
                lo.get_or_insert(r);
            }
        }
    }
    let hi = witness.as_ref().map_or(ub, BinaryForm::degree);
    let lo = match lo {
        Some(l) => l,
        None => {
            return Err(Error::Invariant(format!(
                "every level {lb}..={ub} excluded for {f}"
            )))
        }
    };
    let claim = if lo == hi {
        Claim::RealRank { r: lo }
    } else {
        Claim::RealRankIn { lo, hi }
    };
    // a witness below the bracket top would mislabel the claim
    let witness = witness.filter(|h| h.degree() == hi);
    Ok(RankCertificate {
        claim,
        witness,
        lower_bound_evidence: evidence,
        notes,
    })
}

/// Result of the `f_λ` real-rank bracket with its kernel cross-checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlambdaBracket {
    pub lo: usize,
    pub hi: usize,
    pub hyperbolic: bool,
    pub checks: Vec<GapCheck>,
}

/// Kernel structure at `r = k + j`: the basis satisfies `cᵢ = 0` for
/// `j < i < k`, `c₀ = −λ c_k` and `c_(k+j) = −λ c_j`; sampled members with
/// nonzero end coefficients show at least `min_gap` forced non-real roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapCheck {
    pub j: usize,
    pub r: usize,
    pub dim: usize,
    pub sampled: usize,
    pub min_gap: usize,
}

/// `(2k − 2, 2k − 1)` for `f_λ = x^(2k) + C(2k,k)·λ·x^k y^k + y^(2k)`, or
/// `(2k, 2k)` when `f_λ` is hyperbolic (possible only for `k = 2`, `λ ≤ −1/3`).
pub fn flambda_real_bracket(k: usize, lambda: &Rational) -> Result<FlambdaBracket> {
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
    let f = gen_flambda(k, &Scalar::Rational(lambda.clone()))?;
    let lam = Scalar::Rational(lambda.clone());
    let mut checks = Vec::new();
    for j in 1..k {
        let r = k + j;
        let kb = apolar_kernel(&f, r);
        for h in &kb.basis {
            let c = h.coeffs();
            let zeros = (j + 1..k).all(|i| c[i].is_zero());
            let ends = c[0] == -(&lam * &c[k]) && c[k + j] == -(&lam * &c[j]);
            if !zeros || !ends {
                return Err(Error::Invariant(format!(
                    "kernel element {h} at r={r} breaks the expected shape"
                )));
            }
        }
        let want = 2 * ((k - j - 1) / 2);
        let mut sampled = 0;
        let mut min_gap = usize::MAX;
        let n = kb.basis.len();
        for mask in 1u32..(1 << n.min(6)) {
            let mut h = BinaryForm::zero(r);
            for (i, b) in kb.basis.iter().enumerate().take(6) {
                if mask & (1 << i) != 0 {
                    h = combine(&h, b, &Scalar::from_int(i as i64 + 1))?;
                }
            }
            let c = h.coeffs();
            if c[0].is_zero() || c[r].is_zero() {
                continue;
            }
            let gap = descartes_gap_bound(&h);
            if gap < want {
                return Err(Error::Invariant(format!(
                    "kernel member {h} at r={r} has gap bound {gap} < {want}"
                )));
            }
            sampled += 1;
            min_gap = min_gap.min(gap);
        }
        checks.push(GapCheck {
            j,
            r,
            dim: kb.dim,
            sampled,
            min_gap: if sampled == 0 { 0 } else { min_gap },
        });
    }
    let hyperbolic = is_hyperbolic(&f)?;
    let (lo, hi) = if hyperbolic {
        (2 * k, 2 * k)
    } else {
        (2 * k - 2, 2 * k - 1)
    };
    Ok(FlambdaBracket {
        lo,
        hi,
        hyperbolic,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binform::parse_form;
    use crate::scalar::rational::rat;

    fn f(s: &str) -> BinaryForm {
        parse_form(s).unwrap()
    }

    fn exact(s: &str) -> usize {
        let g = f(s);
        let c = real_rank(&g, &Budget::default()).unwrap();
        c.check(&g).unwrap();
        match c.claim {
            Claim::RealRank { r } => r,
            other => panic!("{s}: {other:?}"),
        }
    }

    #[test]
    fn textbook_shapes() {
        assert_eq!(exact("x*y*(x - y)*(x + y)"), 4);
        assert_eq!(exact("x^3*(x^2 + y^2)"), 4);
        assert_eq!(exact("(x^2 + y^2)^2"), 3);
        assert_eq!(exact("x^4 + 3*x^2*y^2 + y^4"), 3);
        assert_eq!(exact("x^4 + 6*x^2*y^2 + y^4"), 2);
        assert_eq!(exact("x^5"), 1);
        assert_eq!(exact("x^2 + y^2"), 2);
    }

    #[test]
    fn pencil_discriminant_interpolates() {
        let h0 = f("x^2 - y^2");
        let h1 = f("x*y");
        // disc(x² + s·xy − y²) = s² + 4
        let d = pencil_discriminant(&h0, &h1).unwrap();
        assert_eq!(d, Poly::from_rationals([rat(4, 1), rat(0, 1), rat(1, 1)]));
    }

    #[test]
    fn flambda_brackets() {
        let b = flambda_real_bracket(2, &rat(1, 2)).unwrap();
        assert_eq!((b.lo, b.hi), (2, 3));
        let b = flambda_real_bracket(2, &rat(-1, 3)).unwrap();
        assert!(b.hyperbolic);
        assert_eq!((b.lo, b.hi), (4, 4));
        let b = flambda_real_bracket(4, &rat(3, 7)).unwrap();
        assert_eq!((b.lo, b.hi), (6, 7));
        assert!(b.checks.iter().all(|c| c.min_gap >= 2 * ((4 - c.j - 1) / 2)));
        assert!(flambda_real_bracket(2, &rat(0, 1)).is_err());
    }
}
