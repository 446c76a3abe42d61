use std::sync::Arc;

use divfree_core::algebra::{AlgebraElement, AlgebraParams};
use divfree_core::rational::{q, qvec, Q};
use divfree_core::sample::{self, PROFILES};
use divfree_core::witt::{dpq, dpq_expanded, span_reduce, WittElement};
use proptest::prelude::*;

fn profile() -> impl Strategy<Value = (u64, (usize, usize, usize))> {
    (any::<u64>(), prop::sample::select(PROFILES.to_vec()))
}

fn setup(seed: u64, shape: (usize, usize, usize)) -> (sample::Rng64, Arc<AlgebraParams>) {
    let mut rng = sample::rng(seed);
    let params = sample::params(&mut rng, shape);
    (rng, params)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `W` acts faithfully on `A`, so the bracket must be the commutator of
    /// the two actions.
    #[test]
    fn bracket_is_commutator_of_actions((seed, shape) in profile()) {
        let (mut rng, p) = setup(seed, shape);
        let u = sample::witt_element(&mut rng, &p, 2);
        let v = sample::witt_element(&mut rng, &p, 2);
        let f = sample::algebra_monomial(&mut rng, &p).add(&sample::algebra_monomial(&mut rng, &p)).unwrap();
        let lhs = u.bracket(&v).unwrap().apply_to(&f).unwrap();
        let rhs = u
            .apply_to(&v.apply_to(&f).unwrap())
            .unwrap()
            .sub(&v.apply_to(&u.apply_to(&f).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// For commuting partial derivations, `div [u,v] = u(div v) - v(div u)`.
    #[test]
    fn divergence_of_bracket((seed, shape) in profile()) {
        let (mut rng, p) = setup(seed, shape);
        let u = sample::witt_element(&mut rng, &p, 2);
        let v = sample::witt_element(&mut rng, &p, 2);
        let lhs = u.bracket(&v).unwrap().divergence();
        let rhs = u
            .apply_to(&v.divergence())
            .unwrap()
            .sub(&v.apply_to(&u.divergence()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Membership in `S` written out through the definition.
    #[test]
    fn membership_by_definition((seed, shape) in profile()) {
        let (mut rng, p) = setup(seed, shape);
        let u = sample::witt_element(&mut rng, &p, 2);
        let twist = AlgebraElement::x(&p, p.rho().iter().map(|x| -x).collect()).unwrap();
        let expected = u.mul_algebra(&twist).unwrap().divergence().is_zero();
        prop_assert_eq!(u.is_in_s(), expected);
        let g = sample::s_generator(&mut rng, &p);
        prop_assert!(g.is_in_s());
    }

    #[test]
    fn antisymmetric_in_p_q((seed, shape) in profile()) {
        let (mut rng, p) = setup(seed, shape);
        let f = sample::algebra_monomial(&mut rng, &p);
        let ell = p.ell();
        for a in 1..=ell {
            prop_assert!(dpq(a, a, &f).unwrap().is_zero());
            for b in 1..=ell {
                prop_assert_eq!(dpq(a, b, &f).unwrap(), dpq(b, a, &f).unwrap().neg());
            }
        }
    }

    #[test]
    fn grade_decompose_sums_back((seed, shape) in profile()) {
        let (mut rng, p) = setup(seed, shape);
        let u = sample::witt_element(&mut rng, &p, 4);
        let mut total = WittElement::zero(&p);
        for (alpha, part) in u.grade_decompose() {
            prop_assert!(part.support().iter().all(|b| *b == alpha));
            total = total.add(&part).unwrap();
        }
        prop_assert_eq!(total, u);
    }

    /// The reduced basis is independent of input order and has the rank of
    /// the span.
    #[test]
    fn span_reduce_is_order_independent((seed, shape) in profile()) {
        let (mut rng, p) = setup(seed, shape);
        let a = sample::alpha(&mut rng, &p);
        let mut elems: Vec<_> = (0..5).map(|_| sample::s_generator_at(&mut rng, &p, &a)).collect();
        let sum = elems[0].add(&elems[1]).unwrap();
        elems.push(sum);
        let forward = span_reduce(&p, &elems).unwrap();
        elems.reverse();
        let backward = span_reduce(&p, &elems).unwrap();
        prop_assert_eq!(&forward, &backward);
        prop_assert!(forward.rank <= 5);
    }
}

/// At `ivec = 0` the expansion reduces to a single derivation weighted by
/// the shifted exponent.
#[test]
fn expansion_at_level_zero() {
    for shape in PROFILES {
        let mut rng = sample::rng(5);
        let p = sample::params(&mut rng, shape);
        let (l1, ell) = (p.l1(), p.ell());
        for _ in 0..20 {
            let alpha = sample::alpha(&mut rng, &p);
            let zero = vec![0; p.n_t()];
            for a in 1..=ell {
                for b in a + 1..=ell {
                    let w = |k: usize| -> Q {
                        if k <= l1 {
                            Q::from_integer(0.into())
                        } else {
                            &alpha[k - l1 - 1] - &p.rho()[k - l1 - 1]
                        }
                    };
                    let x = AlgebraElement::x(&p, alpha.clone()).unwrap();
                    let mut coeffs = vec![q(0); ell];
                    coeffs[a - 1] = w(b);
                    coeffs[b - 1] = -w(a);
                    let d = divfree_core::algebra::DerivationVector::new(coeffs);
                    let expected = WittElement::from_derivation(&x, &d).unwrap();
                    assert_eq!(dpq_expanded(&p, a, b, &alpha, &zero).unwrap(), expected);
                }
            }
        }
    }
}

#[test]
fn bracket_by_hand() {
    let p = Arc::new(AlgebraParams::standard(0, 0, 2).unwrap());
    let u = WittElement::term(&p, q(1), qvec(&[1, 0]), vec![], 2).unwrap();
    let v = WittElement::term(&p, q(1), qvec(&[0, 1]), vec![], 1).unwrap();
    let expected = WittElement::term(&p, q(1), qvec(&[1, 1]), vec![], 1)
        .unwrap()
        .sub(&WittElement::term(&p, q(1), qvec(&[1, 1]), vec![], 2).unwrap())
        .unwrap();
    assert_eq!(u.bracket(&v).unwrap(), expected);

    let moved = Arc::new(p.with_rho(qvec(&[1, 0])).unwrap());
    let f = AlgebraElement::x(&moved, qvec(&[1, 1])).unwrap();
    let g = WittElement::term(&moved, q(1), qvec(&[1, 1]), vec![], 1).unwrap();
    assert_eq!(dpq(1, 2, &f).unwrap(), g);
}
