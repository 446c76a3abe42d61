use std::sync::Arc;

use divfree_core::algebra::AlgebraParams;
use divfree_core::classify::{
    invariants_match, search_witness, structure_descriptor, verify_witness, witness_from_unimodular, Verdict,
};
use divfree_core::lattice::{GroupElement, Lattice};
use divfree_core::rational::{q, qr, qvec};
use divfree_core::sample::{self, PROFILES};
use divfree_core::Error;
use num_traits::Signed;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Targets built from a small coordinate change are found again by the
    /// search, and every returned witness verifies.
    #[test]
    fn search_refinds_constructed_witnesses(seed in any::<u64>(), shape in prop::sample::select(PROFILES.to_vec())) {
        let mut rng = sample::rng(seed);
        let (l1, l2, l3) = shape;
        let p = sample::params(&mut rng, shape);
        let gamma2 = sample::lattice(&mut rng, l2 + l3);
        let u = sample::block_unimodular(&mut rng, l2, l3, 3);
        let g = witness_from_unimodular(p.gamma(), &gamma2, &u, l2, l3).unwrap();
        let rho2 = if l1 == 0 { g.act_vector(p.rho()).unwrap() } else { sample::lattice_point(&mut rng, &gamma2, 1) };
        let target = AlgebraParams::new(l1, l2, l3, gamma2, rho2).unwrap();
        prop_assert!(verify_witness(&p, &target, &g).unwrap());
        let v = search_witness(&p, &target, 3).unwrap();
        let w = v.witness().expect("witness within bound 3");
        prop_assert!(verify_witness(&p, &target, w).unwrap());
        prop_assert_eq!(v.exit_code(), 0);
    }

    /// Rational group elements: the image algebra always verifies.
    #[test]
    fn acted_params_verify(seed in any::<u64>(), shape in prop::sample::select(PROFILES.to_vec())) {
        let mut rng = sample::rng(seed);
        let (l1, l2, l3) = shape;
        let p = sample::params(&mut rng, shape);
        let g = sample::group_element(&mut rng, l2, l3);
        let target = AlgebraParams::new(l1, l2, l3, g.act_lattice(p.gamma()).unwrap(), g.act_vector(p.rho()).unwrap()).unwrap();
        prop_assert!(verify_witness(&p, &target, &g).unwrap());
    }
}

fn std_params(l1: usize, l2: usize, l3: usize) -> AlgebraParams {
    AlgebraParams::standard(l1, l2, l3).unwrap()
}

#[test]
fn scaled_axis_found_within_bound_two() {
    let p = std_params(0, 0, 3);
    let gamma2 = Lattice::canonicalize(3, &[qvec(&[2, 0, 0]), qvec(&[0, 1, 0]), qvec(&[0, 0, 1])]).unwrap();
    let target = p.with_gamma(gamma2.clone(), qvec(&[0, 0, 0])).unwrap();
    let v = search_witness(&p, &target, 2).unwrap();
    let g = v.witness().unwrap().clone();
    assert_eq!(g.act_lattice(p.gamma()).unwrap(), gamma2);
    // every witness here scales the first axis by 2 in absolute value
    assert_eq!(g.full().determinant().abs(), qr(1, 2));
}

#[test]
fn obstructions_and_mismatches() {
    let p = std_params(0, 0, 3);
    let moved = p.with_rho(qvec(&[1, 0, 0])).unwrap();
    for bound in 1..=3 {
        let v = search_witness(&p, &moved, bound).unwrap();
        assert!(matches!(v.verdict, Verdict::NotIsomorphic(_)), "{v}");
    }
    assert!(!verify_witness(&p, &moved, &GroupElement::identity(0, 3)).unwrap());

    assert!(!invariants_match(&std_params(1, 0, 2), &std_params(0, 1, 2)));
    let v = search_witness(&std_params(1, 0, 2), &std_params(0, 1, 2), 3).unwrap();
    assert_eq!(v.exit_code(), 1);
    assert!(v.details.is_empty());

    let a = std_params(2, 1, 0);
    let b = a.with_gamma(Lattice::canonicalize(1, &[vec![q(3)]]).unwrap(), vec![q(0)]).unwrap();
    assert!(invariants_match(&a, &b));

    assert_eq!(
        search_witness(&std_params(0, 0, 2), &std_params(0, 0, 2), 1).unwrap_err(),
        Error::HypothesisViolated(2)
    );
}

#[test]
fn content_obstruction() {
    let p = std_params(0, 1, 2);
    let a = p.with_rho(qvec(&[0, 2, 0])).unwrap();
    let b = p.with_rho(qvec(&[0, 1, 0])).unwrap();
    let v = search_witness(&a, &b, 3).unwrap();
    assert!(matches!(v.verdict, Verdict::NotIsomorphic(ref r) if r.contains("content")), "{v}");
}

#[test]
fn descriptors() {
    let p = Arc::new(std_params(1, 1, 1));
    let d = structure_descriptor(&p.with_rho(qvec(&[1, 0])).unwrap());
    assert!(d.rho.is_none());
    let z = std_params(0, 0, 3);
    assert_eq!(structure_descriptor(&z), structure_descriptor(&std_params(0, 0, 3)));
    assert!(structure_descriptor(&z).rho.is_some());
}
