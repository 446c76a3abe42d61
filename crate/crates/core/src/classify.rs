//! Deciding isomorphism of divergence-free algebras of rank at least 3.
//!
//! Two algebras with the same shape are isomorphic iff some block lower
//! triangular `g` carries `Gamma` onto `Gamma'` (and `rho` to `rho'` when
//! `l1 = 0`). Any such `g` has the form `B'^-1 U^-1 B` where `B`, `B'` are
//! the canonical bases and `U` is an integer block lower triangular matrix
//! of determinant +-1, so the search enumerates `U`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraParams;
use crate::error::{Error, Result};
use crate::lattice::{GroupElement, GroupElementJson, Lattice};
use crate::matrix::Matrix;
use crate::morphisms::witness_conditions;
use crate::rational::{fmt_vec, to_rats, Q, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    IsomorphicWithWitness(GroupElement),
    NotIsomorphic(String),
    Unknown { bound: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoVerdict {
    pub verdict: Verdict,
    pub details: Vec<String>,
}

impl IsoVerdict {
    fn new(verdict: Verdict, details: Vec<String>) -> Self {
        Self { verdict, details }
    }

    pub fn status(&self) -> &'static str {
        match self.verdict {
            Verdict::IsomorphicWithWitness(_) => "isomorphic_with_witness",
            Verdict::NotIsomorphic(_) => "not_isomorphic",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    /// 0 isomorphic, 1 not isomorphic, 2 unknown.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::IsomorphicWithWitness(_) => 0,
            Verdict::NotIsomorphic(_) => 1,
            Verdict::Unknown { .. } => 2,
        }
    }

    pub fn witness(&self) -> Option<&GroupElement> {
        match &self.verdict {
            Verdict::IsomorphicWithWitness(g) => Some(g),
            _ => None,
        }
    }

    pub fn to_json(&self) -> IsoVerdictJson {
        let (witness, reason, bound) = match &self.verdict {
            Verdict::IsomorphicWithWitness(g) => (Some(g.into()), None, None),
            Verdict::NotIsomorphic(r) => (None, Some(r.clone()), None),
            Verdict::Unknown { bound } => (None, None, Some(*bound)),
        };
        IsoVerdictJson {
            status: self.status().to_string(),
            witness,
            reason,
            bound,
            details: self.details.clone(),
        }
    }
}

impl fmt::Display for IsoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::IsomorphicWithWitness(g) => write!(f, "isomorphic_with_witness {g:?}"),
            Verdict::NotIsomorphic(r) => write!(f, "not_isomorphic: {r}"),
            Verdict::Unknown { bound } => write!(f, "unknown: no witness with coordinates up to {bound}"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsoVerdictJson {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<GroupElementJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    pub details: Vec<String>,
}

pub fn invariants_match(a: &AlgebraParams, b: &AlgebraParams) -> bool {
    a.shape() == b.shape()
}

fn check_hypothesis(params: &AlgebraParams) -> Result<()> {
    if params.ell() < 3 {
        return Err(Error::HypothesisViolated(params.ell()));
    }
    Ok(())
}

/// Whether `g` is an isomorphism witness between the two algebras.
pub fn verify_witness(source: &AlgebraParams, target: &AlgebraParams, g: &GroupElement) -> Result<bool> {
    check_hypothesis(source)?;
    check_hypothesis(target)?;
    if !invariants_match(source, target) {
        return Ok(false);
    }
    witness_conditions(source, target, g)
}

fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Finite obstructions for `l1 = 0`: the base points must have coordinate
/// vectors in the same orbit of the integral block group, which preserves
/// vanishing, the content of the lower block, and (when that block is zero)
/// the content of the upper block.
fn rho_obstruction(source: &AlgebraParams, target: &AlgebraParams) -> Option<String> {
    if source.l1() != 0 {
        return None;
    }
    let c = source.gamma().coords(source.rho()).expect("rho in Gamma");
    let c2 = target.gamma().coords(target.rho()).expect("rho in Gamma");
    let zero = |v: &[BigInt]| v.iter().all(Zero::is_zero);
    if zero(&c) != zero(&c2) {
        return Some(format!(
            "origin obstruction: a linear action fixes 0, but rho = {} and rho' = {}",
            fmt_vec(source.rho()),
            fmt_vec(target.rho())
        ));
    }
    let l2 = source.l2();
    let (low, low2) = (gcd_all(&c[l2..]), gcd_all(&c2[l2..]));
    if low != low2 {
        return Some(format!(
            "content obstruction: gcd of the last {} lattice coordinates of rho is {low}, of rho' is {low2}",
            source.l3()
        ));
    }
    if low.is_zero() {
        let (high, high2) = (gcd_all(&c[..l2]), gcd_all(&c2[..l2]));
        if high != high2 {
            return Some(format!(
                "content obstruction: gcd of the lattice coordinates of rho is {high}, of rho' is {high2}"
            ));
        }
    }
    None
}

/// Integer determinant by fraction-free elimination.
fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

struct Search<'a> {
    n: usize,
    l2: usize,
    shell: i64,
    /// rho coordinates and target coordinates when the base point matters.
    rho: Option<(Vec<i128>, Vec<i128>)>,
    u: Vec<Vec<i128>>,
    visit: &'a mut dyn FnMut(&[Vec<i128>]) -> bool,
    examined: u64,
}

impl Search<'_> {
    fn free_rows(&self, col: usize) -> std::ops::Range<usize> {
        if col < self.l2 {
            0..self.n
        } else {
            self.l2..self.n
        }
    }

    /// Fills column `col` row by row; returns true once `visit` accepts.
    fn fill(&mut self, col: usize, row: usize) -> bool {
        if col == self.n {
            let at_shell = self.u.iter().flatten().any(|x| x.abs() as i64 == self.shell);
            if !at_shell {
                return false;
            }
            let d = det_i128(&self.u);
            if d != 1 && d != -1 {
                return false;
            }
            self.examined += 1;
            let u = self.u.clone();
            return (self.visit)(&u);
        }
        let rows = self.free_rows(col);
        if row == rows.end {
            if let Some((c, target)) = &self.rho {
                let dot: i128 = (0..self.n).map(|i| c[i] * self.u[i][col]).sum();
                if dot != target[col] {
                    return false;
                }
            }
            return self.fill(col + 1, self.free_rows(col + 1).start);
        }
        // identity entries first, then by absolute value, positive first
        let ident = i64::from(row == col);
        let mut values: Vec<i64> = (-self.shell..=self.shell).collect();
        values.sort_by_key(|&v| (v != ident, v.abs(), v < 0));
        for v in values {
            self.u[row][col] = i128::from(v);
            if self.fill(col, row + 1) {
                return true;
            }
        }
        self.u[row][col] = 0;
        false
    }
}

fn to_i128(v: &[BigInt]) -> Option<Vec<i128>> {
    v.iter().map(|x| i128::try_from(x).ok()).collect()
}

/// `g = B'^-1 U^-1 B`.
fn witness_from(source: &Lattice, target: &Lattice, u: &[Vec<i128>], l2: usize, l3: usize) -> Result<GroupElement> {
    let n = u.len();
    let um = Matrix::from_rows(
        u.iter().map(|r| r.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect()).collect(),
        n,
    )
    .expect("square");
    witness_from_unimodular(source, target, &um, l2, l3)
}

/// The group element `B'^-1 U^-1 B` attached to an invertible coordinate
/// change `U` between the canonical bases of `source` and `target`.
pub fn witness_from_unimodular(source: &Lattice, target: &Lattice, u: &Matrix, l2: usize, l3: usize) -> Result<GroupElement> {
    let u_inv = u.inverse().ok_or(Error::SingularBlock("U"))?;
    let g = target
        .basis_matrix()
        .inverse()
        .ok_or(Error::SingularBlock("target basis"))?
        .mul(&u_inv)
        .mul(&source.basis_matrix());
    GroupElement::from_full(l2, l3, &g)
}

/// Bounded search for a witness; `bound` caps the absolute value of the
/// entries of `U` (the images of the `Gamma` basis in `Gamma'` coordinates).
/// Candidates are visited shell by shell in the maximum entry, and within a
/// shell lexicographically in column-major order, each entry ranked by
/// agreement with the identity, then absolute value, then sign.
pub fn search_witness(source: &AlgebraParams, target: &AlgebraParams, bound: u32) -> Result<IsoVerdict> {
    check_hypothesis(source)?;
    check_hypothesis(target)?;
    if bound == 0 {
        return Err(Error::InvalidParams("search bound must be positive".into()));
    }
    if !invariants_match(source, target) {
        return Ok(IsoVerdict::new(
            Verdict::NotIsomorphic(format!(
                "shape mismatch: {:?} vs {:?}",
                source.shape(),
                target.shape()
            )),
            vec![],
        ));
    }
    if let Some(reason) = rho_obstruction(source, target) {
        return Ok(IsoVerdict::new(Verdict::NotIsomorphic(reason), vec![]));
    }
    let (l2, l3) = (source.l2(), source.l3());
    let n = l2 + l3;
    let rho = if source.l1() == 0 {
        let c = source.gamma().coords(source.rho()).expect("rho in Gamma");
        let c2 = target.gamma().coords(target.rho()).expect("rho in Gamma");
        match (to_i128(&c), to_i128(&c2)) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => return Err(Error::InvalidParams("base point coordinates too large to search".into())),
        }
    } else {
        None
    };
    if n == 0 {
        let g = GroupElement::identity(0, 0);
        return Ok(if witness_conditions(source, target, &g)? {
            IsoVerdict::new(Verdict::IsomorphicWithWitness(g), vec!["trivial lattice".into()])
        } else {
            IsoVerdict::new(Verdict::NotIsomorphic("trivial lattice, conditions fail".into()), vec![])
        });
    }
    let mut details = Vec::new();
    let mut found: Option<GroupElement> = None;
    let mut failure: Option<Error> = None;
    for shell in 1..=i64::from(bound) {
        let mut visit = |u: &[Vec<i128>]| -> bool {
            match witness_from(source.gamma(), target.gamma(), u, l2, l3)
                .and_then(|g| Ok((witness_conditions(source, target, &g)?, g)))
            {
                Ok((true, g)) => {
                    found = Some(g);
                    true
                }
                Ok((false, _)) => false,
                Err(e) => {
                    failure = Some(e);
                    true
                }
            }
        };
        let mut search = Search {
            n,
            l2,
            shell,
            rho: rho.clone(),
            u: vec![vec![0; n]; n],
            visit: &mut visit,
            examined: 0,
        };
        search.fill(0, 0);
        details.push(format!("shell {shell}: {} unimodular candidates examined", search.examined));
        if let Some(e) = failure {
            return Err(e);
        }
        if let Some(g) = found.take() {
            return Ok(IsoVerdict::new(Verdict::IsomorphicWithWitness(g), details));
        }
    }
    Ok(IsoVerdict::new(Verdict::Unknown { bound }, details))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDescriptor {
    pub l1: usize,
    pub l2: usize,
    pub l3: usize,
    pub gamma: Lattice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<Rat>>,
}

/// Shape, canonical lattice basis and (when `l1 = 0`) base point.
pub fn structure_descriptor(params: &AlgebraParams) -> StructureDescriptor {
    StructureDescriptor {
        l1: params.l1(),
        l2: params.l2(),
        l3: params.l3(),
        gamma: params.gamma().clone(),
        rho: (params.l1() == 0).then(|| to_rats(params.rho())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qr, qvec};

    fn params(l1: usize, l2: usize, l3: usize) -> AlgebraParams {
        AlgebraParams::standard(l1, l2, l3).unwrap()
    }

    #[test]
    fn identical_params() {
        let p = params(0, 0, 3);
        assert!(invariants_match(&p, &p));
        assert!(!invariants_match(&params(1, 0, 2), &params(0, 1, 2)));
        assert!(verify_witness(&p, &p, &GroupElement::identity(0, 3)).unwrap());
        let v = search_witness(&p, &p, 1).unwrap();
        assert_eq!(v.witness(), Some(&GroupElement::identity(0, 3)));
    }

    #[test]
    fn origin_obstruction() {
        let p = params(0, 0, 3);
        let q = p.with_rho(qvec(&[1, 0, 0])).unwrap();
        assert!(!verify_witness(&p, &q, &GroupElement::identity(0, 3)).unwrap());
        for bound in 1..=3 {
            let v = search_witness(&p, &q, bound).unwrap();
            assert_eq!(v.exit_code(), 1, "{v}");
        }
    }

    #[test]
    fn scaled_first_axis() {
        let p = params(0, 0, 3);
        let gamma = Lattice::canonicalize(3, &[qvec(&[2, 0, 0]), qvec(&[0, 1, 0]), qvec(&[0, 0, 1])]).unwrap();
        let q = p.with_gamma(gamma, qvec(&[0, 0, 0])).unwrap();
        let v = search_witness(&p, &q, 2).unwrap();
        let g = v.witness().expect("witness").clone();
        assert!(verify_witness(&p, &q, &g).unwrap());
        let diag = Matrix::from_rows(vec![vec![qr(1, 2), qr(0, 1), qr(0, 1)], qvec(&[0, 1, 0]), qvec(&[0, 0, 1])], 3).unwrap();
        let expected = GroupElement::from_full(0, 3, &diag).unwrap();
        assert!(verify_witness(&p, &q, &expected).unwrap());
        assert!(verify_witness(&q, &p, &g.inverse()).unwrap());
    }

    #[test]
    fn rho_constrained_search() {
        let p = params(0, 1, 2).with_rho(qvec(&[1, 2, 0])).unwrap();
        let q = params(0, 1, 2).with_rho(qvec(&[3, 2, 0])).unwrap();
        let v = search_witness(&p, &q, 2).unwrap();
        let g = v.witness().expect("witness");
        assert_eq!(g.act_vector(p.rho()).unwrap(), q.rho());
        let r = params(0, 1, 2).with_rho(qvec(&[0, 4, 0])).unwrap();
        assert_eq!(search_witness(&p, &r, 3).unwrap().exit_code(), 1);
    }

    #[test]
    fn hypothesis_and_shape() {
        let small = params(0, 0, 2);
        assert_eq!(search_witness(&small, &small, 1).unwrap_err(), Error::HypothesisViolated(2));
        let v = search_witness(&params(1, 0, 2), &params(0, 1, 2), 1).unwrap();
        assert_eq!(v.exit_code(), 1);
    }

    #[test]
    fn descriptors() {
        let d = structure_descriptor(&params(1, 0, 2));
        assert!(d.rho.is_none());
        assert_eq!(structure_descriptor(&params(0, 0, 3)), structure_descriptor(&params(0, 0, 3)));
        assert!(structure_descriptor(&params(0, 0, 3)).rho.is_some());
    }

    #[test]
    fn integer_determinant() {
        assert_eq!(det_i128(&[vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(det_i128(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det_i128(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), -3);
    }
}
