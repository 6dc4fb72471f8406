use super::BinaryForm;
use crate::error::{Error, Result};
use crate::poly::count_real_roots;

/// Real projective roots of a real form (square roots of positive radicands
/// taken positive). The root `(1 : 0)` counts when `y | f`.
pub fn real_root_count(f: &BinaryForm, with_multiplicity: bool) -> Result<usize> {
    if !f.domain().is_real() {
        return Err(Error::NotReal);
    }
    let sf = f.square_free_decompose()?;
    let mut n = 0;
    for (part, m) in &sf.parts {
        let k = part.y_multiplicity();
        let roots = k + count_real_roots(&part.dehomogenize());
        n += if with_multiplicity { roots * m } else { roots };
    }
    Ok(n)
}

/// All roots real, counted with multiplicity.
pub fn is_hyperbolic(f: &BinaryForm) -> Result<bool> {
    Ok(real_root_count(f, true)? == f.degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binform::parse_form;

    fn f(s: &str) -> BinaryForm {
        parse_form(s).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(real_root_count(&f("x^3*y - x*y^3"), true).unwrap(), 4);
        assert_eq!(real_root_count(&f("x^4 + y^4"), true).unwrap(), 0);
        let g = f("x^3*(x^2 + y^2)");
        assert_eq!(real_root_count(&g, true).unwrap(), 3);
        assert_eq!(real_root_count(&g, false).unwrap(), 1);
        assert_eq!(real_root_count(&f("x^2*y^3"), true).unwrap(), 5);
        assert_eq!(real_root_count(&f("x^2*y^3"), false).unwrap(), 2);
        assert!(matches!(real_root_count(&f("sqrt(-1)*x^2 + y^2"), true), Err(Error::NotReal)));
    }

    #[test]
    fn hyperbolicity() {
        assert!(is_hyperbolic(&f("x*y*(x - y)*(x + y)")).unwrap());
        assert!(!is_hyperbolic(&f("x^4 + 6*x^2*y^2 + y^4")).unwrap());
        assert!(!is_hyperbolic(&f("x^2*(x^2 + y^2)")).unwrap());
        // (x − √2 y)(x + √3 y) over Q(√2, √3)
        assert!(is_hyperbolic(&f("(x - sqrt(2)*y)*(x + sqrt(3)*y)")).unwrap());
    }
}
