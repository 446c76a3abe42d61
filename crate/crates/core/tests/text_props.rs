use std::sync::Arc;

use divfree_core::algebra::AlgebraParams;
use divfree_core::lattice::Lattice;
use divfree_core::rational::{q, qr, qvec};
use divfree_core::sample::{self, PROFILES};
use divfree_core::text::{parse, parse_algebra, parse_witt, print, print_algebra, print_witt, Parsed};
use divfree_core::witt::WittElement;
use divfree_core::Error;
use proptest::prelude::*;

/// `x + y` in the concrete syntax, which has no `+ -`.
fn join(x: &str, y: &str) -> String {
    match y.strip_prefix('-') {
        Some(rest) => format!("{x} - {rest}"),
        None => format!("{x} + {y}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn witt_round_trip(seed in any::<u64>(), shape in prop::sample::select(PROFILES.to_vec()), n in 0usize..5) {
        let mut rng = sample::rng(seed);
        let p = sample::params(&mut rng, shape);
        let u = sample::witt_element(&mut rng, &p, n);
        let text = print_witt(&u);
        let back = parse_witt(&text, &p).unwrap();
        prop_assert_eq!(&back, &u);
        prop_assert_eq!(print_witt(&back), text.clone());
        prop_assert_eq!(print(&parse(&text, &p).unwrap()), text);
    }

    #[test]
    fn algebra_round_trip(seed in any::<u64>(), shape in prop::sample::select(PROFILES.to_vec())) {
        let mut rng = sample::rng(seed);
        let p = sample::params(&mut rng, shape);
        let f = sample::algebra_monomial(&mut rng, &p).add(&sample::algebra_monomial(&mut rng, &p)).unwrap();
        let text = print_algebra(&f);
        prop_assert_eq!(parse_algebra(&text, &p).unwrap(), f);
    }

    /// Equal elements print identically whatever the input term order.
    #[test]
    fn printing_is_canonical(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let p = sample::params(&mut rng, (1, 1, 1));
        let a = sample::witt_monomial(&mut rng, &p);
        let b = sample::witt_monomial(&mut rng, &p);
        let ab = join(&print_witt(&a), &print_witt(&b));
        let ba = join(&print_witt(&b), &print_witt(&a));
        prop_assert_eq!(print_witt(&parse_witt(&ab, &p).unwrap()), print_witt(&parse_witt(&ba, &p).unwrap()));
    }

    /// Arbitrary input never panics the parser.
    #[test]
    fn parser_is_total(s in "[-+*/^ 0-9xtd\\[\\],]{0,24}") {
        let p = Arc::new(AlgebraParams::standard(1, 0, 2).unwrap());
        let _ = parse(&s, &p);
    }
}

#[test]
fn grammar_examples() {
    let p = Arc::new(AlgebraParams::standard(2, 0, 2).unwrap());
    let u = parse_witt("3/2*t1^2*x[0,1]*d1 - t1*d2", &p).unwrap();
    assert_eq!(u.len(), 2);
    let expected = WittElement::term(&p, qr(3, 2), qvec(&[0, 1]), vec![2, 0], 1)
        .unwrap()
        .sub(&WittElement::term(&p, q(1), qvec(&[0, 0]), vec![1, 0], 2).unwrap())
        .unwrap();
    assert_eq!(u, expected);
    assert!(matches!(parse(&print_witt(&u), &p).unwrap(), Parsed::Witt(_)));
    assert!(matches!(parse("t1^2 - 1", &p).unwrap(), Parsed::Algebra(_)));

    let z2 = Arc::new(AlgebraParams::new(0, 0, 2, Lattice::standard(2), qvec(&[0, 0])).unwrap());
    assert!(matches!(parse_witt("x[1/3,0]*d1", &z2), Err(Error::NotInGamma(_))));
    assert!(matches!(parse_witt("x[1,0,0]*d1", &z2), Err(Error::Arity(_))));
    assert!(matches!(parse_witt("x[1,0]*d1 +", &z2), Err(Error::Syntax { .. })));
    assert_eq!(print_witt(&WittElement::zero(&z2)), "0");
}
