mod common;

use common::*;
use proptest::prelude::*;

use waring_core::binform::BinaryForm;
use waring_core::decompose::{
    extract_decomposition, extract_decomposition_at, gen_pd, verify_decomposition, Decomposition, Exactness,
    Verification,
};
use waring_core::rank::complex_rank;
use waring_core::scalar::rational::rat;
use waring_core::scalar::{Mag, Rational};
use waring_core::Scalar;

/// `(λ, α, β)` triples with pairwise distinct directions, normalised so the
/// first nonzero coordinate is one.
fn honest(r: usize) -> impl Strategy<Value = Vec<(Scalar, Scalar, Scalar)>> {
    let point = prop_oneof![1 => Just(None), 7 => rational().prop_map(Some)];
    prop::collection::vec((nonzero_rational(), point), r)
        .prop_filter("distinct directions", |v| {
            v.iter().enumerate().all(|(i, a)| v[..i].iter().all(|b| a.1 != b.1))
        })
        .prop_map(|v| {
            v.into_iter()
                .map(|(l, p)| match p {
                    None => (l.into(), Scalar::zero(), Scalar::one()),
                    Some(q) => (l.into(), Scalar::one(), q.into()),
                })
                .collect()
        })
}

fn decomposition() -> impl Strategy<Value = Decomposition> {
    (3usize..=8)
        .prop_flat_map(|d| (Just(d), 1..=(d + 1) / 2))
        .prop_flat_map(|(d, r)| (Just(d), honest(r)))
        .prop_map(|(d, t)| Decomposition::exact(d, t).unwrap())
}

fn residual(f: &BinaryForm, h: &BinaryForm, prec: u32) -> Option<Mag> {
    match extract_decomposition_at(f, h, prec).unwrap().exactness {
        Exactness::Exact => None,
        Exactness::Numeric { residual, .. } => Some(residual),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn expansion_round_trips(dec in decomposition()) {
        let f = dec.expand().unwrap().unwrap();
        let (r, cert) = complex_rank(&f).unwrap();
        prop_assert_eq!(r, dec.len());
        let again = extract_decomposition(&f, cert.witness.as_ref().unwrap()).unwrap();
        prop_assert!(again.is_exact());
        prop_assert_eq!(verify_decomposition(&again, &f).unwrap(), Verification::ExactMatch);
    }

    #[test]
    fn json_round_trips(dec in decomposition()) {
        let text = serde_json::to_string(&dec).unwrap();
        let back: Decomposition = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, dec);
    }

    #[test]
    fn extraction_verifies(f in int_form(2..=7)) {
        let (_, cert) = complex_rank(&f).unwrap();
        let dec = extract_decomposition(&f, cert.witness.as_ref().unwrap()).unwrap();
        prop_assert!(dec.honesty_violation().is_none());
        match verify_decomposition(&dec, &f).unwrap() {
            Verification::ExactMatch => prop_assert!(dec.is_exact()),
            Verification::Numeric { residual } => {
                prop_assert!(!dec.is_exact());
                prop_assert!(residual.below_pow10(-40));
            }
            other => prop_assert!(false, "{other:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn residual_shrinks_with_precision(f in int_form(5..=7)) {
        let (_, cert) = complex_rank(&f).unwrap();
        let h = cert.witness.unwrap();
        let r128 = residual(&f, &h, 128);
        prop_assume!(r128.is_some());
        let r256 = residual(&f, &h, 256).unwrap();
        let r512 = residual(&f, &h, 512).unwrap();
        prop_assert!(r256.cmp_value(&r128.unwrap()).is_lt());
        prop_assert!(r512.cmp_value(&r256).is_lt());
    }
}

#[test]
fn pd_has_rank_two() {
    for d in 3..=8 {
        for g in [2, 3, 5] {
            let p = gen_pd(d, &rat(g, 1)).unwrap();
            let (r, _) = complex_rank(&p.form).unwrap();
            assert_eq!(r, 2, "d={d} gamma={g}");
            assert_eq!(verify_decomposition(&p.decomposition, &p.form).unwrap(), Verification::ExactMatch);
        }
    }
    assert!(gen_pd(4, &Rational::from_integer(9.into())).unwrap().gamma_is_square);
}
