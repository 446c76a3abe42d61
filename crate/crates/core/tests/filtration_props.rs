use std::cmp::Ordering;
use std::sync::Arc;

use divfree_core::algebra::{AlgebraParams, DerivationVector};
use divfree_core::filtration::{
    admissible, build_with_leading_term, compare_degree, filtration_member, leading_term, s_alpha_level0_basis,
};
use divfree_core::rational::qvec;
use divfree_core::sample::{self, PROFILES};
use divfree_core::witt::dpq_expanded;
use divfree_core::Error;
use proptest::prelude::*;

fn degree() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=4, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn degree_order_is_total(a in degree(), b in degree(), c in degree()) {
        let ab = compare_degree(&a, &b).unwrap();
        prop_assert_eq!(ab.reverse(), compare_degree(&b, &a).unwrap());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        if ab != Ordering::Greater && compare_degree(&b, &c).unwrap() != Ordering::Greater {
            prop_assert_ne!(compare_degree(&a, &c).unwrap(), Ordering::Greater);
        }
    }

    /// Adding a common vector keeps the order (a monomial order).
    #[test]
    fn degree_order_is_translation_invariant(a in degree(), b in degree(), c in degree()) {
        let shift = |v: &[i64]| -> Vec<i64> { v.iter().zip(&c).map(|(x, y)| x + y).collect() };
        prop_assert_eq!(compare_degree(&a, &b).unwrap(), compare_degree(&shift(&a), &shift(&b)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Brackets of filtered elements stay in the filtration of the summed degree.
    #[test]
    fn brackets_respect_the_filtration(seed in any::<u64>(), shape in prop::sample::select(PROFILES.to_vec())) {
        let mut rng = sample::rng(seed);
        let p = sample::params(&mut rng, shape);
        let u = sample::s_generator(&mut rng, &p);
        let v = sample::s_generator(&mut rng, &p);
        prop_assume!(!u.is_zero() && !v.is_zero());
        let du = leading_term(&u, &u.support()[0]).unwrap().degree;
        let dv = leading_term(&v, &v.support()[0]).unwrap().degree;
        let sum: Vec<i64> = du.iter().zip(&dv).map(|(a, b)| a + b).collect();
        prop_assert!(filtration_member(&u.bracket(&v).unwrap(), &sum).unwrap());
    }

    /// Admissible data always builds, with exactly the requested leading term.
    #[test]
    fn built_elements_have_the_prescribed_lead(seed in any::<u64>(), shape in prop::sample::select(PROFILES.to_vec())) {
        let mut rng = sample::rng(seed);
        let p = sample::params(&mut rng, shape);
        let alpha = if seed % 2 == 0 { p.rho().to_vec() } else { sample::alpha(&mut rng, &p) };
        let ivec = sample::ivec(&mut rng, p.n_t(), 3);
        let beta: Vec<_> = alpha.iter().zip(p.rho()).map(|(a, r)| a - r).collect();
        let basis = p.d_alpha_basis(&beta).unwrap();
        prop_assume!(!basis.is_empty());
        let d = basis.iter().fold(DerivationVector::zero(p.ell()), |acc, b| acc.add(&b.scale(&sample::coeff(&mut rng))));
        prop_assume!(!d.is_zero());
        let ok = admissible(&p, &alpha, &ivec, &d).unwrap();
        match build_with_leading_term(&p, &alpha, &ivec, &d) {
            Ok(u) => {
                prop_assert!(ok);
                prop_assert!(u.is_in_s());
                let lead = leading_term(&u, &alpha).unwrap();
                prop_assert_eq!(lead.direction, d);
                prop_assert_eq!(lead.degree, ivec.iter().map(|&e| i64::from(e)).collect::<Vec<_>>());
            }
            Err(Error::AdmissibilityViolated(_)) => prop_assert!(!ok),
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }
}

fn params(l1: usize, l2: usize, l3: usize) -> Arc<AlgebraParams> {
    Arc::new(AlgebraParams::standard(l1, l2, l3).unwrap())
}

#[test]
fn base_point_cases() {
    let p = params(0, 0, 3);
    let d = DerivationVector::from_ints(&[0, 1, 0]);
    assert!(build_with_leading_term(&p, &qvec(&[0, 0, 0]), &[], &d).is_err());
    assert!(s_alpha_level0_basis(&p, &qvec(&[0, 0, 0])).unwrap().is_empty());
    assert_eq!(s_alpha_level0_basis(&p, &qvec(&[1, 0, 0])).unwrap().len(), 2);

    let p = params(1, 0, 2);
    assert_eq!(s_alpha_level0_basis(&p, &qvec(&[0, 0])).unwrap().len(), 2);

    // l1 + l2 = 2, direction d_2 at alpha = rho, i = (1, 0):
    // (i_1 + 1)^-1 D_{2,1}(x^{rho, i + e_1})
    let p = params(2, 0, 1);
    let d = DerivationVector::basic(3, 2);
    let u = build_with_leading_term(&p, &qvec(&[0]), &[1, 0], &d).unwrap();
    let expected = dpq_expanded(&p, 2, 1, &qvec(&[0]), &[2, 0]).unwrap().scale(&divfree_core::rational::qr(1, 2));
    assert_eq!(u, expected);
    assert_eq!(build_with_leading_term(&p, &qvec(&[0]), &[0, 1], &d).unwrap_err(), Error::AdmissibilityViolated(2));
}
