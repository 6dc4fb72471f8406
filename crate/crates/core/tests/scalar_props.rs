mod common;

use common::*;
use proptest::prelude::*;

use waring_core::scalar::approx::DEFAULT_PRECISION;
use waring_core::scalar::{Mag, QuadExt};
use waring_core::Scalar;

fn field_axioms(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<(), TestCaseError> {
    prop_assert_eq!(&(a + b) + c, a + &(b + c));
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    prop_assert_eq!(a + b, b + a);
    prop_assert!((a + &(-a)).is_zero());
    if !a.is_zero() {
        prop_assert!((a * &a.inverse().unwrap()).is_one());
        prop_assert_eq!(&(b / a) * a, b.clone());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rational_field(a in rational(), b in rational(), c in rational()) {
        field_axioms(&a.into(), &b.into(), &c.into())?;
    }

    #[test]
    fn quadratic_field((a, b, c) in radicand().prop_flat_map(|m| (quad(m), quad(m), quad(m)))) {
        field_axioms(&a, &b, &c)?;
    }

    #[test]
    fn tower_field((a, b, c) in tower_pair().prop_flat_map(|(p, q)| (tower(p, q), tower(p, q), tower(p, q)))) {
        field_axioms(&a, &b, &c)?;
    }

    #[test]
    fn mixed_operands_join((a, b) in tower_pair().prop_flat_map(|(p, q)| (quad(p), quad(q)))) {
        // products of elements of two different quadratic fields live in the tower
        prop_assume!(!b.is_zero());
        prop_assert_eq!(&(&a * &b) / &b, a);
    }

    #[test]
    fn norm_is_multiplicative(m in radicand(), a in rational(), b in rational(), c in rational(), d in rational()) {
        let x = QuadExt::new(a, b, m).unwrap();
        let y = QuadExt::new(c, d, m).unwrap();
        prop_assert_eq!(x.checked_mul(&y).unwrap().norm(), x.norm() * y.norm());
    }

    #[test]
    fn rendering_parses_back((a, b) in tower_pair().prop_flat_map(|(p, q)| (tower(p, q), quad(p)))) {
        for s in [a, b] {
            prop_assert_eq!(s.to_string().parse::<Scalar>().unwrap(), s);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn balls_enclose_exact_values(
        (x, y, z) in tower_pair().prop_flat_map(|(p, q)| (tower(p, q), tower(p, q), tower(p, q)))
    ) {
        let prec = DEFAULT_PRECISION;
        let exact = &(&x * &y) + &z;
        let exact = if y.is_zero() { exact } else { &exact / &y };
        let ball = x.to_approx(prec).mul(&y.to_approx(prec)).add(&z.to_approx(prec));
        let ball = if y.is_zero() { ball } else { ball.div(&y.to_approx(prec)).unwrap() };
        // both balls contain the exact value, so their difference contains zero
        let diff = ball.sub(&exact.to_approx(prec));
        prop_assert!(diff.re.contains_zero() && diff.im.contains_zero());
        prop_assert!(diff.abs_upper().cmp_value(&Mag::pow2(-200)).is_lt());
    }
}

