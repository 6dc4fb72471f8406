mod common;

use common::*;
use proptest::prelude::*;

use waring_core::apolarity::{
    apolar_generators, apolar_kernel, apply_diffop, build_catalecticant, kernel, kernel_uniqueness_check, Uniqueness,
};
use waring_core::binform::{resultant, BinaryForm};
use waring_core::linalg::Matrix;
use waring_core::Scalar;

fn in_span(basis: &[BinaryForm], h: &BinaryForm) -> bool {
    let rows = |extra: Option<&BinaryForm>| {
        let data: Vec<Vec<Scalar>> = basis.iter().chain(extra).map(|b| b.coeffs().to_vec()).collect();
        if data.is_empty() {
            0
        } else {
            Matrix::new(data).rank()
        }
    };
    rows(None) == rows(Some(h))
}

fn level() -> impl Strategy<Value = (BinaryForm, usize)> {
    int_form(2..=9).prop_flat_map(|f| {
        let d = f.degree();
        (Just(f), 1..=d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_is_the_apolar_space(
        (f, r) in level(),
        coords in prop::collection::vec(-5i64..=5, 10),
        probe in prop::collection::vec(-3i64..=3, 10),
    ) {
        let cat = build_catalecticant(&f, r).unwrap();
        let kb = kernel(&cat);
        prop_assert_eq!(kb.dim, r + 1 - cat.matrix.rank());
        for h in &kb.basis {
            prop_assert_eq!(h.degree(), r);
            prop_assert!(apply_diffop(h, &f).unwrap().is_zero());
        }
        // combinations of the basis are apolar
        let mut h = BinaryForm::zero(r);
        for (b, c) in kb.basis.iter().zip(&coords) {
            h = h.checked_add(&b.scale(&Scalar::from_int(*c)).unwrap()).unwrap();
        }
        prop_assert!(apply_diffop(&h, &f).unwrap().is_zero());
        // an arbitrary degree-r form is apolar exactly when it lies in the span
        let g = BinaryForm::from_ints(&probe[..=r]);
        prop_assert_eq!(apply_diffop(&g, &f).unwrap().is_zero(), in_span(&kb.basis, &g));
    }

    #[test]
    fn kernels_nest((f, r) in level()) {
        prop_assume!(r < f.degree());
        let next = apolar_kernel(&f, r + 1);
        let x = BinaryForm::from_ints(&[1, 0]);
        let y = BinaryForm::from_ints(&[0, 1]);
        for h in apolar_kernel(&f, r).basis {
            for l in [&x, &y] {
                let lh = h.checked_mul(l).unwrap();
                prop_assert!(apply_diffop(&lh, &f).unwrap().is_zero());
                prop_assert!(in_span(&next.basis, &lh));
            }
        }
    }

    #[test]
    fn first_short_kernel_is_a_line(f in int_form(2..=10)) {
        prop_assume!(!f.is_power_of_linear());
        let d = f.degree();
        let first = (1..).take_while(|k| 2 * k < d + 2).find(|&k| apolar_kernel(&f, k).dim > 0);
        if let Some(k) = first {
            prop_assert!(matches!(kernel_uniqueness_check(&f, k).unwrap(), Uniqueness::Unique(_)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn generator_pair(f in int_form(1..=10)) {
        let d = f.degree();
        let p = apolar_generators(&f).unwrap();
        prop_assert_eq!(p.g1.degree() + p.g2.degree(), d + 2);
        prop_assert!(!resultant(&p.g1, &p.g2).is_zero());
        for r in 1..p.g1.degree() {
            prop_assert_eq!(apolar_kernel(&f, r).dim, 0);
        }
    }
}

#[test]
fn kernel_dimension_grows_past_the_first_generator() {
    // x y⁵ is apolar to x²; at degree 3 both x³ and x²y are apolar
    let f = BinaryForm::monomial(1, 5);
    assert_eq!(apolar_kernel(&f, 2).dim, 1);
    assert_eq!(apolar_kernel(&f, 3).dim, 2);
    assert_eq!(kernel_uniqueness_check(&f, 3).unwrap(), Uniqueness::HighDim(2));
    // x y⁸ is apolar to x², hence to x⁴, x³y and x²y²
    assert_eq!(apolar_kernel(&BinaryForm::monomial(1, 8), 4).dim, 3);
}
