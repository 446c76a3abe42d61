//! Seeded random inputs for the validation and acceptance suites.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::algebra::{AlgebraElement, AlgebraParams, DerivationVector};
use crate::lattice::{GroupElement, Lattice};
use crate::matrix::Matrix;
use crate::rational::{q, qr, Q};
use crate::witt::{dpq_expanded, WittElement};

pub type Rng64 = ChaCha8Rng;

/// The shape profiles every law is checked on.
pub const PROFILES: [(usize, usize, usize); 7] = [
    (0, 0, 3),
    (0, 1, 2),
    (1, 1, 1),
    (2, 0, 1),
    (1, 0, 2),
    (0, 2, 1),
    (3, 0, 0),
];

pub const DEFAULT_SEED: u64 = 20_061_017;

/// Coefficient radius of the lattice ball exponents are drawn from.
pub const BALL: i64 = 3;

/// Maximum level `|i|` of sampled exponent vectors.
pub const MAX_LEVEL: u32 = 4;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small nonzero rational.
pub fn coeff(rng: &mut Rng64) -> Q {
    let mut n = rng.gen_range(-4..=4);
    if n == 0 {
        n = 1;
    }
    qr(n, rng.gen_range(1..=2))
}

/// A nondegenerate lattice with generators in a radius-3 box, some rows halved.
pub fn lattice(rng: &mut Rng64, dim: usize) -> Lattice {
    if dim == 0 {
        return Lattice::trivial();
    }
    loop {
        let rows: Vec<Vec<Q>> = (0..dim)
            .map(|_| {
                let den = rng.gen_range(1..=2);
                (0..dim).map(|_| qr(rng.gen_range(-3..=3), den)).collect()
            })
            .collect();
        if let Ok(l) = Lattice::canonicalize(dim, &rows) {
            return l;
        }
    }
}

/// `sum c_i b_i` with `|c_i| <= radius`.
pub fn lattice_point(rng: &mut Rng64, gamma: &Lattice, radius: i64) -> Vec<Q> {
    let c: Vec<BigInt> = (0..gamma.dim())
        .map(|_| BigInt::from(rng.gen_range(-radius..=radius)))
        .collect();
    gamma.combination(&c)
}

pub fn ivec(rng: &mut Rng64, n: usize, max_level: u32) -> Vec<u32> {
    let mut budget = rng.gen_range(0..=max_level);
    let mut v = vec![0u32; n];
    if n == 0 {
        return v;
    }
    while budget > 0 {
        v[rng.gen_range(0..n)] += 1;
        budget -= 1;
    }
    v
}

/// Random lattice and base point for the given shape.
pub fn params(rng: &mut Rng64, shape: (usize, usize, usize)) -> Arc<AlgebraParams> {
    let (l1, l2, l3) = shape;
    let gamma = lattice(rng, l2 + l3);
    let rho = lattice_point(rng, &gamma, 1);
    Arc::new(AlgebraParams::new(l1, l2, l3, gamma, rho).expect("sampled data is valid"))
}

pub fn derivation_vector(rng: &mut Rng64, ell: usize) -> DerivationVector {
    loop {
        let d = DerivationVector::new((0..ell).map(|_| q(rng.gen_range(-2..=2))).collect());
        if !d.is_zero() {
            return d;
        }
    }
}

pub fn alpha(rng: &mut Rng64, params: &AlgebraParams) -> Vec<Q> {
    lattice_point(rng, params.gamma(), BALL)
}

pub fn algebra_monomial(rng: &mut Rng64, params: &Arc<AlgebraParams>) -> AlgebraElement {
    let a = alpha(rng, params);
    let i = ivec(rng, params.n_t(), MAX_LEVEL);
    AlgebraElement::monomial(params, coeff(rng), a, i).expect("sampled monomial is valid")
}

pub fn witt_monomial(rng: &mut Rng64, params: &Arc<AlgebraParams>) -> WittElement {
    let a = alpha(rng, params);
    let i = ivec(rng, params.n_t(), MAX_LEVEL);
    let p = rng.gen_range(1..=params.ell());
    WittElement::term(params, coeff(rng), a, i, p).expect("sampled term is valid")
}

pub fn witt_element(rng: &mut Rng64, params: &Arc<AlgebraParams>, terms: usize) -> WittElement {
    let mut u = WittElement::zero(params);
    for _ in 0..terms {
        u = u.add(&witt_monomial(rng, params)).expect("same params");
    }
    u
}

/// `c D_{p,q}(x^{alpha,i})` with `p != q`, homogeneous of degree `alpha`.
pub fn s_generator_at(rng: &mut Rng64, params: &Arc<AlgebraParams>, alpha: &[Q]) -> WittElement {
    // S_rho vanishes when there are no polynomial variables
    if params.n_t() == 0 && alpha == params.rho() {
        return WittElement::zero(params);
    }
    loop {
        let p = rng.gen_range(1..=params.ell());
        let qi = rng.gen_range(1..=params.ell());
        if p == qi {
            continue;
        }
        let i = ivec(rng, params.n_t(), MAX_LEVEL);
        let g = dpq_expanded(params, p, qi, alpha, &i).expect("sampled generator is valid");
        if !g.is_zero() {
            return g.scale(&coeff(rng));
        }
    }
}

pub fn s_generator(rng: &mut Rng64, params: &Arc<AlgebraParams>) -> WittElement {
    let a = alpha(rng, params);
    s_generator_at(rng, params, &a)
}

/// A sum of `terms` generators of `S`.
pub fn s_element(rng: &mut Rng64, params: &Arc<AlgebraParams>, terms: usize) -> WittElement {
    let mut u = WittElement::zero(params);
    for _ in 0..terms {
        u = u.add(&s_generator(rng, params)).expect("same params");
    }
    u
}

fn small_matrix(rng: &mut Rng64, rows: usize, cols: usize, lo: i64, hi: i64) -> Matrix {
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| q(rng.gen_range(lo..=hi))).collect())
        .collect();
    Matrix::from_rows(data, cols).expect("rectangular")
}

fn invertible(rng: &mut Rng64, n: usize) -> Matrix {
    loop {
        let m = small_matrix(rng, n, n, -2, 2);
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// A random element of the block lower triangular group with small entries.
pub fn group_element(rng: &mut Rng64, l2: usize, l3: usize) -> GroupElement {
    let a = invertible(rng, l2);
    let c = invertible(rng, l3);
    let b = small_matrix(rng, l3, l2, -2, 2);
    GroupElement::new(l2, l3, a, b, c).expect("invertible blocks")
}

/// A block lower triangular integer matrix of determinant +-1, built from
/// elementary operations and sign flips that respect the block shape.
pub fn block_unimodular(rng: &mut Rng64, l2: usize, l3: usize, steps: usize) -> Matrix {
    let n = l2 + l3;
    let mut u = Matrix::identity(n);
    let block = |i: usize| usize::from(i >= l2);
    for _ in 0..steps {
        if n == 0 {
            break;
        }
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if rng.gen_bool(0.2) {
            for k in 0..n {
                let v = -u[(i, k)].clone();
                u[(i, k)] = v;
            }
            continue;
        }
        // row_i += s * row_j keeps the shape when j's block is not after i's
        if i == j || block(j) > block(i) {
            continue;
        }
        let s = *[-1i64, 1].choose(rng).expect("nonempty");
        for k in 0..n {
            let v = &u[(i, k)] + q(s) * &u[(j, k)];
            u[(i, k)] = v;
        }
    }
    u
}
