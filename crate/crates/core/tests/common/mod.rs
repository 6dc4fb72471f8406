#![allow(dead_code)]

use proptest::prelude::*;

use waring_core::binform::BinaryForm;
use waring_core::scalar::rational::rat;
use waring_core::scalar::{QuadExt, Rational, TowerScalar};
use waring_core::Scalar;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=12, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

pub fn radicand() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![-3i64, -1, 2, 3, 5, 6, 7, 10])
}

pub fn quad(m: i64) -> impl Strategy<Value = Scalar> {
    (rational(), rational()).prop_map(move |(a, b)| Scalar::from(QuadExt::new(a, b, m).unwrap()))
}

pub fn tower_pair() -> impl Strategy<Value = (i64, i64)> {
    prop::sample::select(vec![(2i64, 3i64), (2, 5), (-1, 2), (-1, 3), (3, 5), (2, 7), (-3, 2)])
}

pub fn tower(m1: i64, m2: i64) -> impl Strategy<Value = Scalar> {
    prop::array::uniform4(rational())
        .prop_map(move |c| Scalar::from(TowerScalar::new(c, m1, m2).unwrap()))
}

/// Integer coefficients in `-9..=9`, roughly a third of them zero.
pub fn int_form(degrees: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = BinaryForm> {
    degrees
        .prop_flat_map(|d| prop::collection::vec(prop_oneof![1 => Just(0i64), 2 => -9i64..=9], d + 1))
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(|c| BinaryForm::from_ints(&c))
}

/// `a x + b y` with small integer coefficients, not both zero.
pub fn linear() -> impl Strategy<Value = BinaryForm> {
    (-6i64..=6, -6i64..=6)
        .prop_filter("nonzero", |&(a, b)| a != 0 || b != 0)
        .prop_map(|(a, b)| BinaryForm::from_ints(&[a, b]))
}

/// `a x² + b xy + c y²` without real roots.
pub fn definite_quadratic() -> impl Strategy<Value = BinaryForm> {
    (1i64..=6, -6i64..=6, 1i64..=6)
        .prop_filter("definite", |&(a, b, c)| b * b < 4 * a * c)
        .prop_map(|(a, b, c)| BinaryForm::from_ints(&[a, b, c]))
}

pub fn product(parts: &[BinaryForm]) -> BinaryForm {
    parts
        .iter()
        .fold(BinaryForm::from_ints(&[1]), |acc, p| acc.checked_mul(p).unwrap())
}

/// Pairwise non-proportional linear forms.
pub fn distinct_linears(n: usize) -> impl Strategy<Value = Vec<BinaryForm>> {
    prop::collection::vec(linear(), n).prop_filter("distinct", |ls| {
        ls.iter()
            .enumerate()
            .all(|(i, a)| ls[..i].iter().all(|b| !a.projectively_equal(b)))
    })
}
