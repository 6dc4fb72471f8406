//! Exact dense linear algebra over [`Scalar`]: fraction-free elimination,
//! determinants, kernels and consistent overdetermined solves.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::rational::content_scale;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn new(data: Vec<Vec<Scalar>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let data = (0..rows).map(|i| (0..cols).map(|j| f(i, j)).collect()).collect();
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn row_data(&self) -> &[Vec<Scalar>] {
        &self.data
    }

    /// Bareiss elimination to row echelon form. Returns the echelon rows, the
    /// pivot columns, and the number of row swaps.
    fn bareiss(&self) -> (Vec<Vec<Scalar>>, Vec<usize>, usize) {
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut prev = Scalar::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap(p, r);
                swaps += 1;
            }
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let v = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                    a[i][j] = &v / &prev;
                }
                a[i][c] = Scalar::zero();
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        (a, pivots, swaps)
    }

    pub fn rank(&self) -> usize {
        self.bareiss().1.len()
    }

    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return Scalar::one();
        }
        let (a, pivots, swaps) = self.bareiss();
        if pivots.len() < self.rows {
            return Scalar::zero();
        }
        let d = a[self.rows - 1][self.cols - 1].clone();
        if swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let (mut a, pivots, _) = self.bareiss();
        a.truncate(pivots.len());
        for (r, &c) in pivots.iter().enumerate().rev() {
            let inv = a[r][c].inverse().expect("nonzero pivot");
            for x in a[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..r {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in c..self.cols {
                    let v = &a[i][j] - &(&f * &a[r][j]);
                    a[i][j] = v;
                }
            }
        }
        (a, pivots)
    }

    /// Canonical kernel basis: the reduced row echelon basis of the null
    /// space (pivot on the first nonzero coordinate), rational rows rescaled to
    /// primitive integers with a positive pivot.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let raw: Vec<Vec<Scalar>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[row][f];
                }
                v
            })
            .collect();
        if raw.is_empty() {
            return raw;
        }
        let (basis, _) = Matrix::new(raw).rref();
        basis.into_iter().map(normalize_vector).collect()
    }

    /// Solves `A x = b` for a full-column-rank, possibly overdetermined system,
    /// checking that the surplus equations hold.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let aug = Matrix::new(
            self.data
                .iter()
                .zip(b)
                .map(|(row, bi)| {
                    let mut r = row.clone();
                    r.push(bi.clone());
                    r
                })
                .collect(),
        );
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(Error::Invariant("inconsistent linear system".into()));
        }
        if pivots.len() < self.cols {
            return Err(Error::Invariant("singular linear system".into()));
        }
        Ok(r.into_iter().map(|row| row[self.cols].clone()).collect())
    }
}

/// Rescales a vector: rational vectors become primitive integer vectors with a
/// positive first nonzero entry; others get a leading one.
pub fn normalize_vector(v: Vec<Scalar>) -> Vec<Scalar> {
    let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() else {
        return v;
    };
    if v.iter().all(Scalar::is_rational) {
        let vals: Vec<Rational> = v.iter().map(|x| x.as_rational().unwrap().clone()).collect();
        let mut s = content_scale(vals.iter());
        if lead.is_negative_rational() {
            s = -s;
        }
        return v.iter().map(|x| x.scale(&s)).collect();
    }
    let inv = lead.inverse().expect("nonzero");
    v.iter().map(|x| x * &inv).collect()
}

/// True if two vectors are proportional (both nonzero).
pub fn proportional(a: &[Scalar], b: &[Scalar]) -> bool {
    a.len() == b.len() && normalize_vector(a.to_vec()) == normalize_vector(b.to_vec())
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}
