//! Waring rank engines: Sylvester's algorithm over ℂ, lower bounds, real-rank
//! brackets and the rank-three field classification.

mod classify;
mod real;

use serde::Serialize;

use crate::apolarity::{apolar_kernel, apply_diffop};
use crate::binform::{discriminant, gcd_forms, is_hyperbolic, real_root_count, BinaryForm};
use crate::error::{Error, Result};

pub use classify::{classify_small_rank, Rank3Case, Rank3Classification, SmallRank};
pub use real::{flambda_real_bracket, real_rank, Budget, FlambdaBracket, GapCheck};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    ComplexRank { r: usize },
    RealRank { r: usize },
    RealRankIn { lo: usize, hi: usize },
}

/// A re-checkable reason why the rank is at least some value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// No nonzero apolar form of degree `r`.
    KernelEmptyAt { r: usize },
    /// Every apolar form of degree `r` is divisible by the square of a factor
    /// of `common_factor` (or the kernel is a single non-square-free form).
    NoSquareFreeMember { r: usize, dim: usize, common_factor: BinaryForm },
    /// No square-free apolar form of degree `r` has only real roots; decided
    /// exactly for kernels of dimension one or two.
    NoRealSylvesterForm { r: usize, dim: usize, method: String },
    /// A root of multiplicity `multiplicity` forces rank `≥ multiplicity + 1`.
    MultiplicityBound { multiplicity: usize, bound: usize },
    /// `tau` real roots counted with multiplicity.
    TauBound { tau: usize },
    /// Non-real roots forced in the unique apolar form of degree `r` by
    /// vanishing coefficient runs.
    GapBound { r: usize, forced_nonreal: usize },
    /// The complex rank bounds the real rank.
    ComplexRank { rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub claim: Claim,
    pub witness: Option<BinaryForm>,
    pub lower_bound_evidence: Vec<Evidence>,
    pub notes: Vec<String>,
}

impl RankCertificate {
    /// Recomputes everything the certificate asserts about `f`.
    pub fn check(&self, f: &BinaryForm) -> Result<()> {
        let fail = |m: String| Err(Error::Invariant(m));
        if let Some(h) = &self.witness {
            if !apply_diffop(h, f)?.is_zero() {
                return fail(format!("witness {h} is not apolar"));
            }
            if !h.is_square_free() {
                return fail(format!("witness {h} is not square-free"));
            }
            let real = !matches!(self.claim, Claim::ComplexRank { .. });
            if real && real_root_count(h, true)? != h.degree() {
                return fail(format!("witness {h} has non-real roots"));
            }
            let r = h.degree();
            let ok = match self.claim {
                Claim::ComplexRank { r: c } | Claim::RealRank { r: c } => c == r,
                Claim::RealRankIn { hi, .. } => r == hi,
            };
            if !ok {
                return fail(format!("witness degree {r} does not match the claim"));
            }
        }
        for e in &self.lower_bound_evidence {
            match e {
                Evidence::KernelEmptyAt { r } => {
                    if apolar_kernel(f, *r).dim != 0 {
                        return fail(format!("kernel at {r} is not empty"));
                    }
                }
                Evidence::NoSquareFreeMember { r, common_factor, .. } => {
                    let kb = apolar_kernel(f, *r);
                    let all_divisible = kb.basis.iter().all(|h| common_factor.divides(h));
                    let degenerate = if kb.dim == 1 {
                        !kb.basis[0].is_square_free()
                    } else {
                        all_divisible && !common_factor.is_square_free()
                    };
                    if !degenerate {
                        return fail(format!("kernel at {r} has a square-free member"));
                    }
                }
                Evidence::TauBound { tau } => {
                    if real_root_count(f, true)? != *tau {
                        return fail("real root count differs".into());
                    }
                }
                Evidence::MultiplicityBound { multiplicity, .. } => {
                    let m = f.square_free_decompose()?.max_multiplicity();
                    if m != *multiplicity {
                        return fail("multiplicity differs".into());
                    }
                }
                Evidence::ComplexRank { rank } => {
                    if complex_rank(f)?.0 != *rank {
                        return fail("complex rank differs".into());
                    }
                }
                Evidence::NoRealSylvesterForm { .. } | Evidence::GapBound { .. } => {}
            }
        }
        Ok(())
    }
}

/// Kernel members `b₀ + Σ sᵢ bᵢ` on the grid `sᵢ ∈ {1, …, 2r−1}`.
fn grid_members(basis: &[BinaryForm], r: usize) -> impl Iterator<Item = BinaryForm> + '_ {
    let k = basis.len() - 1;
    let side = (2 * r - 1) as i64;
    let total = (side as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    (0..total).map(move |mut idx| {
        let mut h = basis[0].clone();
        for b in &basis[1..] {
            let s = (idx % side as u128) as i64 + 1;
            idx /= side as u128;
            let term = b
                .scale(&crate::scalar::Scalar::from_int(s))
                .expect("same field");
            h = h.checked_add(&term).expect("same field");
        }
        h
    })
}

/// A square-free member of the span of `basis` (forms of degree `r`), or the
/// common factor showing that none exists.
fn square_free_member(basis: &[BinaryForm], r: usize) -> Result<std::result::Result<BinaryForm, BinaryForm>> {
    if basis.len() == 1 {
        let h = &basis[0];
        return Ok(if h.is_square_free() { Ok(h.clone()) } else { Err(h.clone()) });
    }
    let mut g = basis[0].clone();
    for b in &basis[1..] {
        g = gcd_forms(&g, b)?;
    }
    if !g.is_square_free() {
        return Ok(Err(g));
    }
    if r == 1 {
        return Ok(Ok(basis[0].clone()));
    }
    for h in grid_members(basis, r) {
        if !discriminant(&h)?.is_zero() {
            return Ok(Ok(h));
        }
    }
    Ok(Err(g))
}

/// Complex Waring rank by Sylvester's algorithm, with the witnessing
/// square-free apolar form.
pub fn complex_rank(f: &BinaryForm) -> Result<(usize, RankCertificate)> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = f.degree();
    if d == 0 {
        return Err(Error::Precondition("rank of a constant".into()));
    }
    let mut evidence = Vec::new();
    for r in 1..=d {
        let kb = apolar_kernel(f, r);
        if kb.dim == 0 {
            evidence.push(Evidence::KernelEmptyAt { r });
            continue;
        }
        match square_free_member(&kb.basis, r)? {
            Ok(h) => {
                let cert = RankCertificate {
                    claim: Claim::ComplexRank { r },
                    witness: Some(h),
                    lower_bound_evidence: evidence,
                    notes: Vec::new(),
                };
                return Ok((r, cert));
            }
            Err(g) => evidence.push(Evidence::NoSquareFreeMember {
                r,
                dim: kb.dim,
                common_factor: g,
            }),
        }
    }
    Err(Error::Invariant(format!("no Sylvester form of degree <= {d} for {f}")))
}

/// Largest root multiplicity plus one; one for powers of a linear form.
pub fn multiplicity_lower_bound(f: &BinaryForm) -> Result<usize> {
    let sf = f.square_free_decompose()?;
    if f.is_power_of_linear() || f.degree() == 0 {
        return Ok(1);
    }
    Ok(sf.max_multiplicity() + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FullRank {
    pub complex_full: bool,
    pub real_full: bool,
}

impl FullRank {
    pub fn verdict(&self) -> &'static str {
        match (self.complex_full, self.real_full) {
            (true, true) => "complex_full and real_full",
            (true, false) => "complex_full",
            (false, true) => "real_full",
            (false, false) => "neither",
        }
    }
}

/// Rank equal to the degree: over ℂ iff `f = ℓ₀^(d−1) ℓ₁`, over ℝ iff `f`
/// is hyperbolic and not a `d`-th power.
pub fn full_rank_test(f: &BinaryForm) -> Result<FullRank> {
    let d = f.degree();
    if d < 3 {
        return Err(Error::Precondition("full-rank test needs degree at least 3".into()));
    }
    let sf = f.square_free_decompose()?;
    let mut mults: Vec<(usize, usize)> = sf.parts.iter().map(|(p, m)| (p.degree(), *m)).collect();
    mults.sort();
    let complex_full = mults == vec![(1, 1), (1, d - 1)];
    let power = f.is_power_of_linear();
    let real_full = f.domain().is_real() && !power && is_hyperbolic(f)?;
    Ok(FullRank {
        complex_full,
        real_full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binform::parse_form;

    fn f(s: &str) -> BinaryForm {
        parse_form(s).unwrap()
    }

    fn rank(s: &str) -> usize {
        let g = f(s);
        let (r, cert) = complex_rank(&g).unwrap();
        cert.check(&g).unwrap();
        r
    }

    #[test]
    fn quartic_table() {
        assert_eq!(rank("x^4"), 1);
        assert_eq!(rank("x^3*y"), 4);
        assert_eq!(rank("x^2*y^2"), 3);
        assert_eq!(rank("x^2*y*(x + y)"), 3);
        assert_eq!(rank("x^4 + y^4"), 2);
        assert_eq!(rank("x^4 + 4*x^2*y^2 + y^4"), 3);
    }

    #[test]
    fn sylvester_witness() {
        let g = f("-15*x^5 + 90*x^4*y - 30*x^3*y^2 + 60*x^2*y^3 + 3*y^5");
        let (r, cert) = complex_rank(&g).unwrap();
        assert_eq!(r, 3);
        assert_eq!(cert.witness, Some(f("x^3 - 3*x*y^2 + y^3")));
        assert_eq!(
            cert.lower_bound_evidence,
            vec![Evidence::KernelEmptyAt { r: 1 }, Evidence::KernelEmptyAt { r: 2 }]
        );
    }

    #[test]
    fn multiplicity_bounds() {
        assert_eq!(multiplicity_lower_bound(&f("x^2*y^2")).unwrap(), 3);
        assert_eq!(multiplicity_lower_bound(&f("x^3*(x + y)*(x - y)")).unwrap(), 4);
        assert_eq!(multiplicity_lower_bound(&f("(x^2 + y^2)^2")).unwrap(), 3);
        assert_eq!(multiplicity_lower_bound(&f("(x - y)^6")).unwrap(), 1);
    }

    #[test]
    fn full_rank() {
        let t = full_rank_test(&f("x^3*y")).unwrap();
        assert!(t.complex_full && t.real_full);
        let t = full_rank_test(&f("x*y*(x - y)*(x + y)")).unwrap();
        assert!(!t.complex_full && t.real_full);
        assert_eq!(full_rank_test(&f("x^4 + y^4")).unwrap().verdict(), "neither");
    }
}
