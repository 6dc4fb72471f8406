mod common;

use std::cmp::Ordering;

use common::*;
use proptest::prelude::*;

use waring_core::binform::{
    descartes_gap_bound, discriminant, gcd_forms, parse_form, real_root_count, BinaryForm,
};
use waring_core::poly::{root_bound, Poly};
use waring_core::scalar::rational::rat;
use waring_core::scalar::Rational;
use waring_core::Scalar;

fn coefficient(m: i64) -> impl Strategy<Value = Scalar> {
    prop_oneof![
        2 => Just(Scalar::zero()),
        3 => rational().prop_map(Scalar::from),
        1 => quad(m),
    ]
}

fn mixed_form() -> impl Strategy<Value = BinaryForm> {
    (0usize..=12, radicand())
        .prop_flat_map(|(d, m)| prop::collection::vec(coefficient(m), d + 1))
        .prop_map(|c| BinaryForm::new(c).unwrap())
        .prop_filter("nonzero", |f| !f.is_zero())
}

/// Products of linear and definite quadratic factors, each raised to a small
/// power.
fn factored_form() -> impl Strategy<Value = BinaryForm> {
    let factor = prop_oneof![3 => linear(), 1 => definite_quadratic()];
    prop::collection::vec((factor, 1usize..=3), 1..=4).prop_map(|fs| {
        let powered: Vec<BinaryForm> = fs.iter().map(|(f, e)| f.pow(*e).unwrap()).collect();
        product(&powered)
    })
}

/// Distinct real roots of a square-free rational polynomial whose roots are
/// at least `1/36` apart, counted by scanning a rational grid of step `1/40`
/// across `[-B, B]`.
fn grid_root_count(p: &Poly) -> usize {
    let b = root_bound(p) + Rational::from_integer(1.into());
    let step = rat(1, 40);
    let mut t = -b.clone();
    let mut last = Ordering::Equal;
    let mut n = 0;
    while t <= b {
        let s = p.sign_at(&t);
        // a root on the grid is counted once; the next sign is not compared
        // with the one before it
        if s == Ordering::Equal || (last != Ordering::Equal && s != last) {
            n += 1;
        }
        last = s;
        t += &step;
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn render_round_trip(f in mixed_form()) {
        prop_assert_eq!(parse_form(&f.to_string()).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn square_free_reconstruction(f in factored_form(), scale in nonzero_rational()) {
        let f = f.scale(&Scalar::from(scale)).unwrap();
        let sf = f.square_free_decompose().unwrap();
        prop_assert_eq!(sf.expand().unwrap(), f.clone());
        for (i, (p, _)) in sf.parts.iter().enumerate() {
            prop_assert!(p.is_square_free());
            for (q, _) in &sf.parts[..i] {
                prop_assert_eq!(gcd_forms(p, q).unwrap().degree(), 0);
            }
        }
    }

    #[test]
    fn sturm_matches_grid(f in factored_form()) {
        let p = f.dehomogenize().square_free_part();
        let at_infinity = usize::from(f.y_multiplicity() > 0);
        prop_assert_eq!(real_root_count(&f, false).unwrap(), grid_root_count(&p) + at_infinity);
    }

    #[test]
    fn discriminant_detects_repeated_roots(f in prop_oneof![factored_form(), int_form(2..=8)]) {
        prop_assume!(f.degree() >= 2);
        // a common factor of both partials is a repeated factor of f
        let g = gcd_forms(&f.partial_x(), &f.partial_y()).unwrap();
        prop_assert_eq!(discriminant(&f).unwrap().is_zero(), g.degree() > 0);
        prop_assert_eq!(g.degree() > 0, !f.is_square_free());
    }

    #[test]
    fn gap_bound_is_sound(f in prop_oneof![int_form(2..=12), factored_form()]) {
        let real = real_root_count(&f, true).unwrap();
        prop_assert!(descartes_gap_bound(&f) <= f.degree() - real);
    }
}
