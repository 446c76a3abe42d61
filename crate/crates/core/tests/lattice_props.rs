use divfree_core::lattice::{GroupElement, Lattice};
use divfree_core::matrix::Matrix;
use divfree_core::rational::{q, qr, Q};
use divfree_core::sample;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Solves `c M = v` for square invertible `M` by exact inversion.
fn coords_in(m: &Matrix, v: &[Q]) -> Vec<Q> {
    m.inverse().expect("independent rows").left_apply(v)
}

fn all_integer(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_integer())
}

fn independent_rows(rng: &mut sample::Rng64, n: usize) -> Vec<Vec<Q>> {
    loop {
        let rows: Vec<Vec<Q>> = (0..n)
            .map(|_| (0..n).map(|_| qr(rand::Rng::gen_range(rng, -3..=3), rand::Rng::gen_range(rng, 1..=2))).collect())
            .collect();
        let m = Matrix::from_rows(rows.clone(), n).unwrap();
        if !m.determinant().is_zero() {
            return rows;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// With independent generators, the canonical basis and the generators
    /// must express each other with integer coordinates.
    #[test]
    fn canonical_basis_spans_the_same_group(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = sample::rng(seed);
        let gens = independent_rows(&mut rng, n);
        let l = Lattice::canonicalize(n, &gens).unwrap();
        let g = Matrix::from_rows(gens.clone(), n).unwrap();
        for b in l.basis() {
            prop_assert!(all_integer(&coords_in(&g, b)));
        }
        for v in &gens {
            prop_assert!(all_integer(&coords_in(&l.basis_matrix(), v)));
        }
        for (i, b) in l.basis().iter().enumerate() {
            prop_assert!(b[i] > Q::zero());
            prop_assert!(b[i + 1..].iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn canonicalize_ignores_order_and_redundancy(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = sample::rng(seed);
        let mut gens = independent_rows(&mut rng, n);
        let l = Lattice::canonicalize(n, &gens).unwrap();
        let extra: Vec<Q> = (0..n).map(|k| &gens[0][k] * q(2) - &gens[n - 1][k]).collect();
        gens.push(extra);
        gens.reverse();
        prop_assert_eq!(&Lattice::canonicalize(n, &gens).unwrap(), &l);
        prop_assert_eq!(&Lattice::canonicalize(n, l.basis()).unwrap(), &l);
    }

    #[test]
    fn membership_matches_coordinates(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let l = sample::lattice(&mut rng, 3);
        let v = sample::lattice_point(&mut rng, &l, 3);
        prop_assert!(l.contains(&v));
        let half: Vec<Q> = v.iter().map(|x| x + qr(1, 7)).collect();
        let c = coords_in(&l.basis_matrix(), &half);
        prop_assert_eq!(l.contains(&half), all_integer(&c));
    }

    /// Acting by `h` then `g` equals acting by the product `g h`.
    #[test]
    fn action_is_compatible_with_composition(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let (l2, l3) = (1, 2);
        let g = sample::group_element(&mut rng, l2, l3);
        let h = sample::group_element(&mut rng, l2, l3);
        let gh = g.compose(&h).unwrap();
        let gamma = sample::lattice(&mut rng, 3);
        let alpha = sample::lattice_point(&mut rng, &gamma, 2);
        prop_assert_eq!(
            g.act_vector(&h.act_vector(&alpha).unwrap()).unwrap(),
            gh.act_vector(&alpha).unwrap()
        );
        prop_assert_eq!(
            g.act_lattice(&h.act_lattice(&gamma).unwrap()).unwrap(),
            gh.act_lattice(&gamma).unwrap()
        );
        prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
        prop_assert_eq!(g.act_vector(&vec![Q::zero(); 3]).unwrap(), vec![Q::zero(); 3]);
    }
}

/// Bounded enumeration of `span_Z(gens)` inside the box `|x_i| <= 2`.
fn box_points(gens: &[Vec<Q>], coeff: i64) -> std::collections::BTreeSet<Vec<Q>> {
    let n = gens[0].len();
    let mut out = std::collections::BTreeSet::new();
    let k = gens.len();
    let mut c = vec![-coeff; k];
    loop {
        let v: Vec<Q> = (0..n)
            .map(|j| (0..k).map(|i| q(c[i]) * &gens[i][j]).sum())
            .collect();
        if v.iter().all(|x| x.abs() <= q(2)) {
            out.insert(v);
        }
        let mut i = 0;
        while i < k && c[i] == coeff {
            c[i] = -coeff;
            i += 1;
        }
        if i == k {
            return out;
        }
        c[i] += 1;
    }
}

#[test]
fn redundant_generators_by_enumeration() {
    let gens = vec![vec![q(2), q(0)], vec![q(0), q(2)], vec![q(1), q(1)]];
    let l = Lattice::canonicalize(2, &gens).unwrap();
    assert_eq!(box_points(&gens, 4), box_points(l.basis(), 4));
    let expected = Lattice::canonicalize(2, &[vec![q(1), q(1)], vec![q(0), q(2)]]).unwrap();
    assert_eq!(l, expected);
}

#[test]
fn inverse_action_by_hand() {
    let m = |x: i64| Matrix::from_rows(vec![vec![q(x)]], 1).unwrap();
    let g = GroupElement::new(1, 1, m(2), m(1), m(1)).unwrap();
    // g^-1 = [[1/2, 0], [-1/2, 1]]
    assert_eq!(g.act_vector(&[q(1), q(0)]).unwrap(), vec![qr(1, 2), q(0)]);
    assert_eq!(g.act_vector(&[q(0), q(1)]).unwrap(), vec![qr(-1, 2), q(1)]);
}
