use std::sync::Arc;

use divfree_core::algebra::{pairing, AlgebraParams};
use divfree_core::lattice::GroupElement;
use divfree_core::matrix::Matrix;
use divfree_core::morphisms::{
    derivation_kinds, group_induced_map, is_derivation_on, psi_map, rho_shift_target, shifts_to, Derivation,
    DerivationHandle, DerivationHandleJson,
};
use divfree_core::rational::{neg_vec, qvec};
use divfree_core::sample::{self, PROFILES};
use proptest::prelude::*;

fn with_l1() -> Vec<(usize, usize, usize)> {
    PROFILES.iter().copied().filter(|s| s.0 >= 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Inverse shifts undo `psi`, and the image of `S` lands in the moved `S`.
    #[test]
    fn psi_round_trip(seed in any::<u64>(), shape in prop::sample::select(with_l1())) {
        let mut rng = sample::rng(seed);
        let p = sample::params(&mut rng, shape);
        let target = sample::lattice_point(&mut rng, p.gamma(), 2);
        let shifts = shifts_to(&p, &target).unwrap();
        prop_assert_eq!(rho_shift_target(&p, &shifts).unwrap(), target.clone());
        let u = sample::s_element(&mut rng, &p, 2);
        let image = psi_map(&u, &shifts).unwrap();
        prop_assert!(image.is_in_s());
        prop_assert_eq!(image.params().rho(), &target[..]);
        let back: Vec<_> = shifts.iter().map(|s| neg_vec(s)).collect();
        let restored = psi_map(&image, &back).unwrap();
        prop_assert_eq!(restored.terms(), u.terms());
    }

    /// Handles survive a JSON round trip and stay derivations.
    #[test]
    fn handles_round_trip(seed in any::<u64>(), shape in prop::sample::select(PROFILES.to_vec())) {
        let mut rng = sample::rng(seed);
        let p = sample::params(&mut rng, shape);
        let pairs: Vec<_> = (0..4).map(|_| (sample::s_element(&mut rng, &p, 1), sample::s_element(&mut rng, &p, 1))).collect();
        for kind in derivation_kinds() {
            let Some(h) = kind.sample(&p, &mut rng) else { continue };
            let text = serde_json::to_string(&h.to_json(&p)).unwrap();
            let j: DerivationHandleJson = serde_json::from_str(&text).unwrap();
            let back = DerivationHandle::from_json(j).unwrap();
            prop_assert_eq!(&back, &h);
            prop_assert!(is_derivation_on(&back, &pairs).unwrap(), "{}", back.name());
        }
    }
}

/// For a pure `C` block the coefficient law is `a -> C a`, and
/// `(C a) . (alpha C^-1) = a . alpha`.
#[test]
fn pairing_law_for_pure_c_block() {
    let p = Arc::new(AlgebraParams::standard(0, 0, 3).unwrap());
    let mut rng = sample::rng(9);
    for _ in 0..10 {
        let g = sample::group_element(&mut rng, 0, 3);
        let target = Arc::new(p.with_gamma(g.act_lattice(p.gamma()).unwrap(), qvec(&[0, 0, 0])).unwrap());
        let (map, report) = group_induced_map(&p, &target, &g, 4, 10).unwrap();
        assert_eq!(report.pairing_cases, 10);
        for _ in 0..10 {
            let d = sample::derivation_vector(&mut rng, 3);
            let alpha = sample::alpha(&mut rng, &p);
            assert_eq!(
                pairing(&d, &alpha),
                pairing(&map.map_derivation(&d), &g.act_vector(&alpha).unwrap())
            );
        }
    }
}

#[test]
fn induced_maps_with_mixed_blocks() {
    for shape in [(0, 1, 2), (1, 1, 1), (0, 2, 1)] {
        let (_, l2, l3) = shape;
        let mut rng = sample::rng(21);
        let p = sample::params(&mut rng, shape);
        for _ in 0..3 {
            let g = sample::group_element(&mut rng, l2, l3);
            let rho = if shape.0 == 0 { g.act_vector(p.rho()).unwrap() } else { p.zero_alpha() };
            let target = Arc::new(p.with_gamma(g.act_lattice(p.gamma()).unwrap(), rho).unwrap());
            group_induced_map(&p, &target, &g, 8, 8).unwrap();
        }
    }
}

#[test]
fn identity_witness_gives_identity_map() {
    let p = Arc::new(AlgebraParams::standard(0, 1, 2).unwrap());
    let (map, _) = group_induced_map(&p, &p, &GroupElement::identity(1, 2), 1, 5).unwrap();
    let mut rng = sample::rng(2);
    for _ in 0..10 {
        let u = sample::s_element(&mut rng, &p, 2);
        assert_eq!(map.apply(&u).unwrap(), u);
    }
    let bad = Matrix::identity(3).block(0, 0, 2, 2);
    assert!(GroupElement::from_full(1, 2, &bad).is_err());
}
