//! Catalecticant (Hankel) matrices, their kernels, and apolar forms.
//!
//! A degree-`r` form `h = Σ cₜ x^(r−t) yᵗ` is apolar to `f` (`h(∂x, ∂y) f = 0`)
//! exactly when `Σₜ a_(s+t) cₜ = 0` for `s = 0..=d−r`, where `aᵢ` are the
//! binomial coefficients of `f`.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::binform::{resultant, BinaryForm, BinomialView};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};

pub fn binomial_view(f: &BinaryForm) -> BinomialView {
    f.binomial_view()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Catalecticant {
    pub r: usize,
    pub matrix: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelBasis {
    pub r: usize,
    pub dim: usize,
    pub basis: Vec<BinaryForm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApolarPair {
    pub g1: BinaryForm,
    pub g2: BinaryForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Uniqueness {
    Empty,
    Unique(BinaryForm),
    HighDim(usize),
}

/// The `(d−r+1) × (r+1)` Hankel matrix with entries `a_(s+t)`, for `1 ≤ r ≤ d`.
pub fn build_catalecticant(f: &BinaryForm, r: usize) -> Result<Catalecticant> {
    let d = f.degree();
    if r == 0 || r > d {
        return Err(Error::OutOfRange {
            what: "r",
            value: r as i64,
            range: format!("1..={d}"),
        });
    }
    Ok(hankel(f, r))
}

/// Hankel matrix for any `r ≥ 1`; past `d` it has no rows.
fn hankel(f: &BinaryForm, r: usize) -> Catalecticant {
    let d = f.degree();
    let a = f.binomial_view().a;
    let rows = (d + 1).saturating_sub(r);
    Catalecticant {
        r,
        matrix: Matrix::from_fn(rows, r + 1, |s, t| a[s + t].clone()),
    }
}

pub fn kernel(c: &Catalecticant) -> KernelBasis {
    let basis: Vec<BinaryForm> = c.matrix.kernel().into_iter().map(BinaryForm::raw).collect();
    KernelBasis {
        r: c.r,
        dim: basis.len(),
        basis,
    }
}

/// Degree-`r` apolar forms of `f` for any `r ≥ 1` (all forms once `r > d`).
pub fn apolar_kernel(f: &BinaryForm, r: usize) -> KernelBasis {
    kernel(&hankel(f, r))
}

fn falling(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// `h(∂/∂x, ∂/∂y)` applied to `p`.
pub fn apply_diffop(h: &BinaryForm, p: &BinaryForm) -> Result<BinaryForm> {
    let (k, d) = (h.degree(), p.degree());
    if k > d {
        return Err(Error::Precondition(format!(
            "operator degree {k} exceeds form degree {d}"
        )));
    }
    h.domain().join(p.domain())?;
    let mut out = vec![Scalar::zero(); d - k + 1];
    for (t, ct) in h.coeffs().iter().enumerate() {
        if ct.is_zero() {
            continue;
        }
        // ∂x^(k−t) ∂y^t of pᵢ x^(d−i) yⁱ lands on index s = i − t
        for (s, slot) in out.iter_mut().enumerate() {
            let i = s + t;
            let pi = p.coeff(i);
            if pi.is_zero() {
                continue;
            }
            let w = falling(d - i, k - t) * falling(i, t);
            let term = (ct * pi).scale(&Rational::from_integer(w));
            *slot = &*slot + &term;
        }
    }
    BinaryForm::new(out)
}

/// Generators `(g1, g2)` of the apolar ideal: `deg g1 + deg g2 = d + 2` and no
/// common projective zero.
pub fn apolar_generators(f: &BinaryForm) -> Result<ApolarPair> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = f.degree();
    let (e1, g1) = (1..=d + 1)
        .find_map(|r| {
            let k = apolar_kernel(f, r);
            k.basis.into_iter().next().map(|g| (r, g))
        })
        .expect("every form of degree d+1 is apolar");
    let e2 = d + 2 - e1;
    let g2 = apolar_kernel(f, e2)
        .basis
        .into_iter()
        .find(|h| !g1.divides(h))
        .ok_or_else(|| Error::Invariant(format!("no second generator in degree {e2}")))?;
    if resultant(&g1, &g2).is_zero() {
        return Err(Error::Invariant(format!("generators {g1} and {g2} share a root")));
    }
    Ok(ApolarPair { g1, g2 })
}

/// Whether the degree-`k` apolar forms are empty or a single line, for
/// `k < (d+2)/2`.
pub fn kernel_uniqueness_check(f: &BinaryForm, k: usize) -> Result<Uniqueness> {
    let d = f.degree();
    if k == 0 || 2 * k >= d + 2 {
        return Err(Error::Precondition(format!(
            "uniqueness needs 1 <= k < (d+2)/2, got k = {k}, d = {d}"
        )));
    }
    let kb = apolar_kernel(f, k);
    Ok(match kb.dim {
        0 => Uniqueness::Empty,
        1 => {
            let h = kb.basis.into_iter().next().unwrap();
            if !f.domain().contains(h.domain()) {
                return Err(Error::Invariant(format!(
                    "apolar form {h} leaves the coefficient field of f"
                )));
            }
            Uniqueness::Unique(h)
        }
        n => Uniqueness::HighDim(n),
    })
}
