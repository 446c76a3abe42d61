//! Finitely generated nondegenerate subgroups of Q^n and the block
//! lower-triangular group that acts on them.
//!
//! A lattice is stored through its canonical basis: clear denominators, take
//! the Hermite normal form of the integer generator matrix, scale back. The
//! normal form used here is lower triangular (row `i` vanishes right of
//! column `i`, positive diagonal, entries below each pivot reduced into
//! `[0, pivot)`), so the first `k` basis rows always span the intersection of
//! the lattice with the first `k` coordinate axes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{fmt_vec, from_rats, is_integer, to_rats, Q, Rat};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<Q>>,
    scale: BigInt,
}

impl Lattice {
    /// The zero-dimensional lattice `{0}`.
    pub fn trivial() -> Self {
        Self {
            dim: 0,
            basis: Vec::new(),
            scale: BigInt::one(),
        }
    }

    /// `Z^n` with the standard basis.
    pub fn standard(dim: usize) -> Self {
        let basis = Matrix::identity(dim).to_rows();
        Self {
            dim,
            basis,
            scale: BigInt::one(),
        }
    }

    /// Canonical basis of the subgroup generated by `generators` in `Q^dim`.
    pub fn canonicalize(dim: usize, generators: &[Vec<Q>]) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: g.len(),
            });
        }
        if dim == 0 {
            return Ok(Self::trivial());
        }
        let scale = generators
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut rows: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|x| x.numer() * (&scale / x.denom()))
                    .collect()
            })
            .collect();
        let hnf = lower_hnf(&mut rows, dim).ok_or_else(|| Error::DegenerateLattice {
            rank: Matrix::from_rows(generators.to_vec(), dim).map_or(0, |m| m.rank()),
            dim,
        })?;
        let basis = hnf
            .into_iter()
            .map(|r| r.into_iter().map(|x| Q::new(x, scale.clone())).collect())
            .collect();
        Ok(Self { dim, basis, scale })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    /// Common denominator of all lattice vectors.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.basis.clone(), self.dim).expect("basis rows have lattice dimension")
    }

    /// Integer coordinates of `alpha` in the canonical basis, if it lies in the lattice.
    pub fn coords(&self, alpha: &[Q]) -> Option<Vec<BigInt>> {
        if alpha.len() != self.dim {
            return None;
        }
        let mut rest = alpha.to_vec();
        let mut out = vec![BigInt::zero(); self.dim];
        for i in (0..self.dim).rev() {
            let c = &rest[i] / &self.basis[i][i];
            if !is_integer(&c) {
                return None;
            }
            for (r, b) in rest.iter_mut().zip(&self.basis[i]).take(i + 1) {
                *r -= &c * b;
            }
            out[i] = c.to_integer();
        }
        Some(out)
    }

    pub fn contains(&self, alpha: &[Q]) -> bool {
        self.coords(alpha).is_some()
    }

    pub fn require(&self, alpha: &[Q]) -> Result<()> {
        if alpha.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: alpha.len(),
            });
        }
        if self.contains(alpha) {
            Ok(())
        } else {
            Err(Error::NotInGamma(fmt_vec(alpha)))
        }
    }

    pub fn combination(&self, coeffs: &[BigInt]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            let c = Q::from_integer(c.clone());
            for (x, y) in v.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        v
    }

    /// All `sum c_i b_i` with `|c_i| <= radius`, in lexicographic order of the coefficients.
    pub fn ball(&self, radius: i64) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        let mut coeffs = vec![-radius; self.dim];
        loop {
            let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
            out.push(self.combination(&c));
            let mut k = self.dim;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if coeffs[k] < radius {
                    coeffs[k] += 1;
                    break;
                }
                coeffs[k] = -radius;
            }
        }
    }
}

/// Lower-triangular Hermite normal form of the row span of `rows`; `None`
/// when the rows do not have full rank.
fn lower_hnf(rows: &mut Vec<Vec<BigInt>>, dim: usize) -> Option<Vec<Vec<BigInt>>> {
    let mut basis: Vec<Vec<BigInt>> = vec![Vec::new(); dim];
    let mut pool: Vec<Vec<BigInt>> = std::mem::take(rows);
    for c in (0..dim).rev() {
        pool.retain(|r| r.iter().any(|x| !x.is_zero()));
        // Euclid on column c until a single row carries a nonzero entry.
        loop {
            let mut nz: Vec<usize> = (0..pool.len()).filter(|&i| !pool[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&a, &b| pool[a][c].abs().cmp(&pool[b][c].abs()).then(a.cmp(&b)));
            let p = nz[0];
            let pivot_row = pool[p].clone();
            for &i in &nz[1..] {
                let f = pool[i][c].div_floor(&pivot_row[c]);
                for (x, y) in pool[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        let p = pool.iter().position(|r| !r[c].is_zero())?;
        let mut row = pool.swap_remove(p);
        if row[c].is_negative() {
            row.iter_mut().for_each(|x| *x = -&*x);
        }
        basis[c] = row;
    }
    for j in 1..dim {
        for i in (0..j).rev() {
            let f = basis[j][i].div_floor(&basis[i][i]);
            if f.is_zero() {
                continue;
            }
            let (lo, hi) = basis.split_at_mut(j);
            for (x, y) in hi[0].iter_mut().zip(&lo[i]) {
                *x -= &f * y;
            }
        }
    }
    Some(basis)
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.basis.iter().map(|r| fmt_vec(r)).collect();
        write!(f, "Lattice[{}]", rows.join(", "))
    }
}

/// JSON form `{"dim": n, "basis": [["1","0"],["0","1"]]}`. On input the basis
/// rows are treated as generators and canonicalized.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeJson {
    pub dim: usize,
    pub basis: Vec<Vec<Rat>>,
}

impl From<&Lattice> for LatticeJson {
    fn from(l: &Lattice) -> Self {
        Self {
            dim: l.dim,
            basis: l.basis.iter().map(|r| to_rats(r)).collect(),
        }
    }
}

impl TryFrom<LatticeJson> for Lattice {
    type Error = Error;
    fn try_from(j: LatticeJson) -> Result<Self> {
        let gens: Vec<Vec<Q>> = j.basis.into_iter().map(from_rats).collect();
        Lattice::canonicalize(j.dim, &gens)
    }
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = LatticeJson::deserialize(d)?;
        Lattice::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// An element of the group of invertible block matrices `[[A, 0], [B, C]]`
/// with `A` of size `l2`, `C` of size `l3`, `B` of shape `l3 x l2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    l2: usize,
    l3: usize,
    a: Matrix,
    b: Matrix,
    c: Matrix,
}

impl GroupElement {
    pub fn new(l2: usize, l3: usize, a: Matrix, b: Matrix, c: Matrix) -> Result<Self> {
        let shape = |m: &Matrix, r: usize, k: usize| m.rows() == r && m.cols() == k;
        if !shape(&a, l2, l2) || !shape(&b, l3, l2) || !shape(&c, l3, l3) {
            return Err(Error::InvalidParams(format!(
                "group element blocks must be {l2}x{l2}, {l3}x{l2}, {l3}x{l3}"
            )));
        }
        if a.determinant().is_zero() {
            return Err(Error::SingularBlock("A"));
        }
        if c.determinant().is_zero() {
            return Err(Error::SingularBlock("C"));
        }
        Ok(Self { l2, l3, a, b, c })
    }

    pub fn identity(l2: usize, l3: usize) -> Self {
        Self {
            l2,
            l3,
            a: Matrix::identity(l2),
            b: Matrix::zeros(l3, l2),
            c: Matrix::identity(l3),
        }
    }

    /// Splits a full `(l2+l3)`-square matrix into blocks; fails unless the
    /// upper-right block vanishes and the diagonal blocks are invertible.
    pub fn from_full(l2: usize, l3: usize, m: &Matrix) -> Result<Self> {
        let n = l2 + l3;
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.rows(),
            });
        }
        for i in 0..l2 {
            for j in l2..n {
                if !m[(i, j)].is_zero() {
                    return Err(Error::InvalidParams(
                        "upper-right block of a group element must vanish".into(),
                    ));
                }
            }
        }
        Self::new(
            l2,
            l3,
            m.block(0, 0, l2, l2),
            m.block(l2, 0, l3, l2),
            m.block(l2, l2, l3, l3),
        )
    }

    pub fn l2(&self) -> usize {
        self.l2
    }

    pub fn l3(&self) -> usize {
        self.l3
    }

    pub fn dim(&self) -> usize {
        self.l2 + self.l3
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn full(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        m.set_block(0, 0, &self.a);
        m.set_block(self.l2, 0, &self.b);
        m.set_block(self.l2, self.l2, &self.c);
        m
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.l2 != other.l2 || self.l3 != other.l3 {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Self::from_full(self.l2, self.l3, &self.full().mul(&other.full()))
    }

    pub fn inverse(&self) -> GroupElement {
        let inv = self
            .full()
            .inverse()
            .expect("group elements have invertible diagonal blocks");
        Self::from_full(self.l2, self.l3, &inv).expect("inverse stays block lower triangular")
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.l2, self.l3)
    }

    /// `alpha . g^{-1}` (row vector times matrix).
    pub fn act_vector(&self, alpha: &[Q]) -> Result<Vec<Q>> {
        if alpha.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: alpha.len(),
            });
        }
        Ok(self.inverse_full().left_apply(alpha))
    }

    pub fn act_lattice(&self, gamma: &Lattice) -> Result<Lattice> {
        if gamma.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: gamma.dim(),
            });
        }
        let inv = self.inverse_full();
        let gens: Vec<Vec<Q>> = gamma.basis().iter().map(|b| inv.left_apply(b)).collect();
        Lattice::canonicalize(self.dim(), &gens)
    }

    fn inverse_full(&self) -> Matrix {
        self.full()
            .inverse()
            .expect("group elements have invertible diagonal blocks")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{:?}", self.full())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupElementJson {
    pub l2: usize,
    pub l3: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Rat>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Rat>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<Rat>>,
}

fn mat_json(m: &Matrix) -> Vec<Vec<Rat>> {
    m.to_rows().iter().map(|r| to_rats(r)).collect()
}

fn mat_from_json(rows: Vec<Vec<Rat>>, r: usize, c: usize, name: &str) -> Result<Matrix> {
    // Empty blocks may be written as [] whatever their nominal shape.
    if r == 0 || c == 0 {
        return Ok(Matrix::zeros(r, c));
    }
    let rows: Vec<Vec<Q>> = rows.into_iter().map(from_rats).collect();
    if rows.len() != r {
        return Err(Error::InvalidParams(format!("block {name} must have {r} rows")));
    }
    Matrix::from_rows(rows, c)
        .ok_or_else(|| Error::InvalidParams(format!("block {name} must have {c} columns")))
}

impl From<&GroupElement> for GroupElementJson {
    fn from(g: &GroupElement) -> Self {
        Self {
            l2: g.l2,
            l3: g.l3,
            a: mat_json(&g.a),
            b: mat_json(&g.b),
            c: mat_json(&g.c),
        }
    }
}

impl TryFrom<GroupElementJson> for GroupElement {
    type Error = Error;
    fn try_from(j: GroupElementJson) -> Result<Self> {
        let a = mat_from_json(j.a, j.l2, j.l2, "A")?;
        let b = mat_from_json(j.b, j.l3, j.l2, "B")?;
        let c = mat_from_json(j.c, j.l3, j.l3, "C")?;
        GroupElement::new(j.l2, j.l3, a, b, c)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupElementJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GroupElementJson::deserialize(d)?;
        GroupElement::try_from(j).map_err(serde::de::Error::custom)
    }
}
