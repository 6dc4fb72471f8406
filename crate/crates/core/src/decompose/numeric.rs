//! Floating root finding refined into ball arithmetic.

use num_complex::Complex64;

use crate::scalar::{ComplexApprox, Mag};

/// All roots of `Σ cᵢ zⁱ` (ascending, nonzero leading term) by Aberth–Ehrlich
/// iteration in double precision.
pub(crate) fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let c: Vec<Complex64> = coeffs.iter().map(|x| x / lead).collect();
    let radius = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 0.4 + std::f64::consts::TAU * k as f64 / n as f64;
            Complex64::from_polar(radius * 0.5, t)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repel: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repel);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for x in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + x;
    }
    (p, dp)
}

fn horner_ball(c: &[ComplexApprox], z: &ComplexApprox) -> (ComplexApprox, ComplexApprox) {
    let prec = z.precision();
    let mut p = ComplexApprox::zero(prec);
    let mut dp = ComplexApprox::zero(prec);
    for x in c.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(x);
    }
    (p, dp)
}

/// Newton iteration on midpoints; the result is an exact dyadic point.
pub(crate) fn newton_refine(c: &[ComplexApprox], z0: Complex64, prec: u32) -> ComplexApprox {
    let mut z = ComplexApprox::from_f64(z0.re, z0.im, prec);
    let rounds = 6 + (prec as f64 / 53.0).log2().ceil().max(0.0) as usize;
    for _ in 0..rounds {
        let (p, dp) = horner_ball(c, &z);
        let Some(step) = p.mid().div(&dp.mid()) else {
            break;
        };
        z = z.sub(&step.mid()).mid();
    }
    z
}

/// Roots of `Σ cᵢ zⁱ` to about `prec` bits.
pub(crate) fn roots(c: &[ComplexApprox], prec: u32) -> Vec<ComplexApprox> {
    let start: Vec<Complex64> = c
        .iter()
        .map(|x| {
            let (re, im) = x.mid_f64();
            Complex64::new(re, im)
        })
        .collect();
    aberth(&start)
        .into_iter()
        .map(|z| newton_refine(c, z, prec))
        .collect()
}

/// Gaussian elimination with partial pivoting on midpoints.
pub(crate) fn solve(mut a: Vec<Vec<ComplexApprox>>, mut b: Vec<ComplexApprox>) -> Option<Vec<ComplexApprox>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| {
            let (x, y) = (a[i][col].mid_f64(), a[j][col].mid_f64());
            x.0.hypot(x.1).total_cmp(&y.0.hypot(y.1))
        })?;
        a.swap(col, p);
        b.swap(col, p);
        let piv = a[col][col].clone();
        for i in col + 1..n {
            let f = a[i][col].div(&piv)?.mid();
            for j in col..n {
                a[i][j] = a[i][j].sub(&f.mul(&a[col][j])).mid();
            }
            b[i] = b[i].sub(&f.mul(&b[col])).mid();
        }
    }
    let mut x = vec![ComplexApprox::zero(b.first()?.precision()); n];
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for j in i + 1..n {
            s = s.sub(&a[i][j].mul(&x[j]));
        }
        x[i] = s.div(&a[i][i])?.mid();
    }
    Some(x)
}

pub(crate) fn max_mag(values: impl IntoIterator<Item = Mag>) -> Mag {
    values.into_iter().fold(Mag::ZERO, Mag::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_roots_of_two() {
        // 2 − z³
        let c = [2.0, 0.0, 0.0, -1.0].map(|x| ComplexApprox::from_f64(x, 0.0, 256));
        let r = roots(&c, 256);
        assert_eq!(r.len(), 3);
        for z in &r {
            let cube = z.pow(3);
            let err = cube.sub(&ComplexApprox::from_f64(2.0, 0.0, 256));
            assert!(err.abs_upper().below_pow10(-70), "{}", err.to_decimal(5));
        }
    }

    #[test]
    fn vandermonde_solve() {
        let p = 128;
        let m = |x: f64| ComplexApprox::from_f64(x, 0.0, p);
        let a = vec![vec![m(1.0), m(1.0)], vec![m(1.0), m(2.0)]];
        let x = solve(a, vec![m(3.0), m(5.0)]).unwrap();
        assert_eq!(x[0].mid_f64().0, 1.0);
        assert_eq!(x[1].mid_f64().0, 2.0);
    }
}
