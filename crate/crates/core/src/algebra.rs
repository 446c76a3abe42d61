//! The commutative algebra `A = F[t_1..t_{l1+l2}] (x) F[Gamma]`, its basic
//! derivations `d_1..d_l`, and the pairing between derivations and lattice
//! exponents.
//!
//! Derivation indices `p` are 1-based everywhere in the public API, matching
//! the `d{p}` / `t{k}` names of the text syntax.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::Echelon;
use crate::rational::{dot, fmt_vec, from_rats, is_zero_vec, neg_vec, q, to_rats, Q, Rat};

/// The data `(l1, l2, l3, Gamma, rho)` naming one algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraParams {
    l1: usize,
    l2: usize,
    l3: usize,
    gamma: Lattice,
    rho: Vec<Q>,
}

impl AlgebraParams {
    pub fn new(l1: usize, l2: usize, l3: usize, gamma: Lattice, rho: Vec<Q>) -> Result<Self> {
        if l1 + l2 + l3 == 0 {
            return Err(Error::InvalidParams("l1 + l2 + l3 must be positive".into()));
        }
        if gamma.dim() != l2 + l3 {
            return Err(Error::DimensionMismatch {
                expected: l2 + l3,
                got: gamma.dim(),
            });
        }
        gamma.require(&rho)?;
        Ok(Self {
            l1,
            l2,
            l3,
            gamma,
            rho,
        })
    }

    /// `Gamma = Z^(l2+l3)`, `rho = 0`.
    pub fn standard(l1: usize, l2: usize, l3: usize) -> Result<Self> {
        let n = l2 + l3;
        Self::new(l1, l2, l3, Lattice::standard(n), vec![Q::zero(); n])
    }

    pub fn l1(&self) -> usize {
        self.l1
    }

    pub fn l2(&self) -> usize {
        self.l2
    }

    pub fn l3(&self) -> usize {
        self.l3
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.l1, self.l2, self.l3)
    }

    /// `l = l1 + l2 + l3`, the number of basic derivations.
    pub fn ell(&self) -> usize {
        self.l1 + self.l2 + self.l3
    }

    /// Number of polynomial variables `l1 + l2`.
    pub fn n_t(&self) -> usize {
        self.l1 + self.l2
    }

    /// Lattice dimension `l2 + l3`.
    pub fn n_x(&self) -> usize {
        self.l2 + self.l3
    }

    pub fn gamma(&self) -> &Lattice {
        &self.gamma
    }

    pub fn rho(&self) -> &[Q] {
        &self.rho
    }

    pub fn with_rho(&self, rho: Vec<Q>) -> Result<Self> {
        Self::new(self.l1, self.l2, self.l3, self.gamma.clone(), rho)
    }

    pub fn with_gamma(&self, gamma: Lattice, rho: Vec<Q>) -> Result<Self> {
        Self::new(self.l1, self.l2, self.l3, gamma, rho)
    }

    pub fn check_index(&self, p: usize) -> Result<()> {
        if (1..=self.ell()).contains(&p) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: p,
                max: self.ell(),
            })
        }
    }

    pub fn zero_alpha(&self) -> Vec<Q> {
        vec![Q::zero(); self.n_x()]
    }

    /// `alpha_{p - l1}`, or zero when `p` is not in the lattice block.
    pub fn alpha_at(&self, alpha: &[Q], p: usize) -> Q {
        if p > self.l1 && p <= self.ell() {
            alpha[p - self.l1 - 1].clone()
        } else {
            Q::zero()
        }
    }

    /// Basis of the derivation subspace `D_alpha`: `{0}` when `l1 = l2 = 0`
    /// and `alpha = 0`; the last `l3` coordinates when `l1 + l2 = 1` and
    /// `alpha = 0`; the kernel of `<., alpha>` otherwise.
    pub fn d_alpha_basis(&self, alpha: &[Q]) -> Result<Vec<DerivationVector>> {
        self.gamma.require(alpha)?;
        let ell = self.ell();
        let alpha_zero = is_zero_vec(alpha);
        if alpha_zero && self.n_t() == 0 {
            return Ok(Vec::new());
        }
        if alpha_zero && self.n_t() == 1 {
            return Ok((self.n_t() + 1..=ell)
                .map(|p| DerivationVector::basic(ell, p))
                .collect());
        }
        // Kernel of a single functional: pivot on its first nonzero coefficient,
        // one vector per free coordinate in ascending order.
        let functional: Vec<Q> = (1..=ell).map(|p| self.alpha_at(alpha, p)).collect();
        let Some(pivot) = functional.iter().position(|c| !c.is_zero()) else {
            return Ok((1..=ell).map(|p| DerivationVector::basic(ell, p)).collect());
        };
        let mut out = Vec::with_capacity(ell - 1);
        for j in (0..ell).filter(|&j| j != pivot) {
            let mut v = vec![Q::zero(); ell];
            v[j] = Q::one();
            v[pivot] = -(&functional[j] / &functional[pivot]);
            out.push(DerivationVector::new(v));
        }
        Ok(out)
    }

    /// Membership in `D_alpha` (same case split as `d_alpha_basis`).
    pub fn in_d_alpha(&self, d: &DerivationVector, alpha: &[Q]) -> Result<bool> {
        self.gamma.require(alpha)?;
        if d.len() != self.ell() {
            return Err(Error::DimensionMismatch {
                expected: self.ell(),
                got: d.len(),
            });
        }
        let alpha_zero = is_zero_vec(alpha);
        if alpha_zero && self.n_t() == 0 {
            return Ok(d.is_zero());
        }
        if alpha_zero && self.n_t() == 1 {
            return Ok(d.coeffs[..self.n_t()].iter().all(Zero::is_zero));
        }
        Ok(pairing(d, alpha).is_zero())
    }
}

impl fmt::Debug for AlgebraParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "S({},{},{}; rho={}, {:?})",
            self.l1,
            self.l2,
            self.l3,
            fmt_vec(&self.rho),
            self.gamma
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraParamsJson {
    pub l1: usize,
    pub l2: usize,
    pub l3: usize,
    pub gamma: Lattice,
    pub rho: Vec<Rat>,
}

impl From<&AlgebraParams> for AlgebraParamsJson {
    fn from(p: &AlgebraParams) -> Self {
        Self {
            l1: p.l1,
            l2: p.l2,
            l3: p.l3,
            gamma: p.gamma.clone(),
            rho: to_rats(&p.rho),
        }
    }
}

impl TryFrom<AlgebraParamsJson> for AlgebraParams {
    type Error = Error;
    fn try_from(j: AlgebraParamsJson) -> Result<Self> {
        AlgebraParams::new(j.l1, j.l2, j.l3, j.gamma, from_rats(j.rho))
    }
}

/// `x^{alpha, i} = t^i x^alpha`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub alpha: Vec<Q>,
    pub ivec: Vec<u32>,
}

impl Monomial {
    pub fn new(alpha: Vec<Q>, ivec: Vec<u32>) -> Self {
        Self { alpha, ivec }
    }

    pub fn level(&self) -> u64 {
        self.ivec.iter().map(|&i| u64::from(i)).sum()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            alpha: crate::rational::add_vec(&self.alpha, &other.alpha),
            ivec: self.ivec.iter().zip(&other.ivec).map(|(a, b)| a + b).collect(),
        }
    }

    /// `t_k`-exponent lowered by one (1-based `k`); `None` if it is already zero.
    pub fn lowered(&self, k: usize) -> Option<Monomial> {
        let e = *self.ivec.get(k - 1)?;
        if e == 0 {
            return None;
        }
        let mut m = self.clone();
        m.ivec[k - 1] -= 1;
        Some(m)
    }

    pub fn raised(&self, k: usize) -> Monomial {
        let mut m = self.clone();
        m.ivec[k - 1] += 1;
        m
    }

    pub fn shifted(&self, by: &[Q]) -> Monomial {
        Monomial {
            alpha: crate::rational::add_vec(&self.alpha, by),
            ivec: self.ivec.clone(),
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{{{},{:?}}}", fmt_vec(&self.alpha), self.ivec)
    }
}

/// `sum a_p d_p`; coefficients are stored 0-based, accessed 1-based via `get`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivationVector {
    coeffs: Vec<Q>,
}

impl DerivationVector {
    pub fn new(coeffs: Vec<Q>) -> Self {
        Self { coeffs }
    }

    pub fn zero(ell: usize) -> Self {
        Self::new(vec![Q::zero(); ell])
    }

    /// `d_p` (1-based).
    pub fn basic(ell: usize, p: usize) -> Self {
        let mut d = Self::zero(ell);
        d.coeffs[p - 1] = Q::one();
        d
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Self::new(xs.iter().map(|&x| q(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// `a_p` (1-based); this is also the coordinate functional `chi_p`.
    pub fn get(&self, p: usize) -> &Q {
        &self.coeffs[p - 1]
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coeffs)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i + 1, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(crate::rational::add_vec(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(crate::rational::scale_vec(c, &self.coeffs))
    }
}

impl fmt::Debug for DerivationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}", fmt_vec(&self.coeffs))
    }
}

/// `<d, alpha> = sum_i a_{l1+i} alpha_i`; the first `l1` coefficients are ignored.
pub fn pairing(d: &DerivationVector, alpha: &[Q]) -> Q {
    let l1 = d.len().saturating_sub(alpha.len());
    dot(&d.coeffs[l1..], alpha)
}

/// A sparse element of `A`.
#[derive(Clone)]
pub struct AlgebraElement {
    params: Arc<AlgebraParams>,
    terms: BTreeMap<Monomial, Q>,
}

pub(crate) fn same_params(a: &Arc<AlgebraParams>, b: &Arc<AlgebraParams>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_params(&self.params, &other.params) && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn zero(params: &Arc<AlgebraParams>) -> Self {
        Self {
            params: params.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(params: &Arc<AlgebraParams>) -> Self {
        let m = Monomial::new(params.zero_alpha(), vec![0; params.n_t()]);
        Self::from_terms_unchecked(params, [(m, Q::one())])
    }

    /// `c * x^{alpha, ivec}`, validating lattice membership and arity.
    pub fn monomial(params: &Arc<AlgebraParams>, c: Q, alpha: Vec<Q>, ivec: Vec<u32>) -> Result<Self> {
        check_monomial(params, &alpha, &ivec)?;
        Ok(Self::from_terms_unchecked(params, [(Monomial::new(alpha, ivec), c)]))
    }

    /// `x^alpha`.
    pub fn x(params: &Arc<AlgebraParams>, alpha: Vec<Q>) -> Result<Self> {
        Self::monomial(params, Q::one(), alpha, vec![0; params.n_t()])
    }

    /// `t_k` (1-based).
    pub fn t(params: &Arc<AlgebraParams>, k: usize) -> Result<Self> {
        if !(1..=params.n_t()).contains(&k) {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: params.n_t(),
            });
        }
        let mut ivec = vec![0; params.n_t()];
        ivec[k - 1] = 1;
        Self::monomial(params, Q::one(), params.zero_alpha(), ivec)
    }

    pub fn from_terms(params: &Arc<AlgebraParams>, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Result<Self> {
        let mut out = Self::zero(params);
        for (m, c) in terms {
            check_monomial(params, &m.alpha, &m.ivec)?;
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub(crate) fn from_terms_unchecked(
        params: &Arc<AlgebraParams>,
        terms: impl IntoIterator<Item = (Monomial, Q)>,
    ) -> Self {
        let mut out = Self::zero(params);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn params(&self) -> &Arc<AlgebraParams> {
        &self.params
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Q) {
        add_sparse(&mut self.terms, m, c);
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_params(&self.params, &other.params) {
            Ok(())
        } else {
            Err(Error::ParamsMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.params);
        }
        Self {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.params);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Multiplication by `x^shift`; the shift must lie in `Gamma`.
    pub fn shift(&self, by: &[Q]) -> Result<Self> {
        self.params.gamma().require(by)?;
        Ok(Self {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.shifted(by), c.clone())).collect(),
        })
    }

    /// `d_p(u)`: the `t_p`-partial for `p <= l1`; `alpha_{p-l1}` scaling plus
    /// the `t_p`-partial for `l1 < p <= l1+l2`; pure `alpha_{p-l1}` scaling above.
    pub fn apply_basic_derivation(&self, p: usize) -> Result<Self> {
        self.params.check_index(p)?;
        let mut out = Self::zero(&self.params);
        for (m, c) in &self.terms {
            basic_derivation_term(&self.params, p, m, c, |m2, c2| out.add_term(m2, c2));
        }
        Ok(out)
    }

    pub fn apply_derivation(&self, d: &DerivationVector) -> Result<Self> {
        if d.len() != self.params.ell() {
            return Err(Error::DimensionMismatch {
                expected: self.params.ell(),
                got: d.len(),
            });
        }
        let mut out = Self::zero(&self.params);
        for (p, a) in d.support() {
            for (m, c) in &self.terms {
                basic_derivation_term(&self.params, p, m, &(c * a), |m2, c2| out.add_term(m2, c2));
            }
        }
        Ok(out)
    }

    /// Splits by lattice degree.
    pub fn grade_decompose(&self) -> BTreeMap<Vec<Q>, AlgebraElement> {
        let mut out: BTreeMap<Vec<Q>, AlgebraElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.alpha.clone())
                .or_insert_with(|| Self::zero(&self.params))
                .add_term(m.clone(), c.clone());
        }
        out
    }
}

/// `map[k] += c`, removing the entry if it cancels.
pub(crate) fn add_sparse<K: Ord>(map: &mut BTreeMap<K, Q>, k: K, c: Q) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Emits the terms of `d_p(c * m)`.
pub(crate) fn basic_derivation_term(
    params: &AlgebraParams,
    p: usize,
    m: &Monomial,
    c: &Q,
    mut emit: impl FnMut(Monomial, Q),
) {
    if p > params.l1() {
        let a = &m.alpha[p - params.l1() - 1];
        if !a.is_zero() {
            emit(m.clone(), c * a);
        }
    }
    if p <= params.n_t() {
        let e = m.ivec[p - 1];
        if e > 0 {
            emit(m.lowered(p).expect("positive exponent"), c * q(i64::from(e)));
        }
    }
}

fn check_monomial(params: &AlgebraParams, alpha: &[Q], ivec: &[u32]) -> Result<()> {
    if ivec.len() != params.n_t() {
        return Err(Error::Arity(format!(
            "exponent vector has {} entries, expected {}",
            ivec.len(),
            params.n_t()
        )));
    }
    if alpha.len() != params.n_x() {
        return Err(Error::Arity(format!(
            "lattice exponent has {} entries, expected {}",
            alpha.len(),
            params.n_x()
        )));
    }
    params.gamma().require(alpha)
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::print_algebra(self))
    }
}

/// JSON record of one algebra term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraTermJson {
    pub alpha: Vec<Rat>,
    pub ivec: Vec<u32>,
    pub coeff: Rat,
}

impl AlgebraElement {
    pub fn to_json(&self) -> Vec<AlgebraTermJson> {
        self.terms
            .iter()
            .map(|(m, c)| AlgebraTermJson {
                alpha: to_rats(&m.alpha),
                ivec: m.ivec.clone(),
                coeff: Rat(c.clone()),
            })
            .collect()
    }

    pub fn from_json(params: &Arc<AlgebraParams>, terms: Vec<AlgebraTermJson>) -> Result<Self> {
        Self::from_terms(
            params,
            terms
                .into_iter()
                .map(|t| (Monomial::new(from_rats(t.alpha), t.ivec), t.coeff.0)),
        )
    }
}

/// Whether the joint kernel of `d_1..d_l` on the truncation
/// `{x^{alpha,i} : alpha in box_, |i| <= max_degree}` is exactly the constants.
pub fn joint_kernel_check(params: &Arc<AlgebraParams>, max_degree: u32, box_: &[Vec<Q>]) -> bool {
    let columns = truncation_monomials(params, max_degree, box_);
    let mut images = Echelon::new();
    for m in &columns {
        let mut row: BTreeMap<(usize, Monomial), Q> = BTreeMap::new();
        for p in 1..=params.ell() {
            basic_derivation_term(params, p, m, &Q::one(), |m2, c2| {
                add_sparse(&mut row, (p, m2), c2)
            });
        }
        images.insert(row);
    }
    let has_constant = box_.iter().any(|a| is_zero_vec(a));
    has_constant && columns.len() - images.rank() == 1
}

/// Every monomial with `alpha` in `box_` and total t-degree at most `max_degree`.
pub fn truncation_monomials(params: &AlgebraParams, max_degree: u32, box_: &[Vec<Q>]) -> Vec<Monomial> {
    let ivecs = exponent_vectors(params.n_t(), max_degree);
    let mut out = Vec::new();
    for a in box_ {
        for i in &ivecs {
            out.push(Monomial::new(a.clone(), i.clone()));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All exponent vectors of length `n` with total degree at most `max_degree`.
pub fn exponent_vectors(n: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn go(n: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=budget {
            cur.push(e);
            go(n, budget - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_degree, &mut Vec::new(), &mut out);
    out
}

pub fn neg_rho(params: &AlgebraParams) -> Vec<Q> {
    neg_vec(params.rho())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec, qr};

    fn params(l1: usize, l2: usize, l3: usize) -> Arc<AlgebraParams> {
        Arc::new(AlgebraParams::standard(l1, l2, l3).unwrap())
    }

    fn mono(p: &Arc<AlgebraParams>, c: i64, alpha: &[i64], ivec: &[u32]) -> AlgebraElement {
        AlgebraElement::monomial(p, q(c), qvec(alpha), ivec.to_vec()).unwrap()
    }

    #[test]
    fn identity_and_exponent_addition() {
        let p = params(1, 0, 2);
        let u = mono(&p, 3, &[1, -2], &[2]);
        assert_eq!(AlgebraElement::one(&p).multiply(&u).unwrap(), u);
        let a = AlgebraElement::x(&p, qvec(&[1, 0])).unwrap();
        let b = AlgebraElement::x(&p, qvec(&[0, 1])).unwrap();
        assert_eq!(a.multiply(&b).unwrap(), AlgebraElement::x(&p, qvec(&[1, 1])).unwrap());
        let l = mono(&p, 1, &[1, 1], &[1]);
        let r = mono(&p, 1, &[-1, -1], &[1]);
        assert_eq!(l.multiply(&r).unwrap(), mono(&p, 1, &[0, 0], &[2]));
    }

    #[test]
    fn params_mismatch() {
        let a = AlgebraElement::one(&params(1, 0, 2));
        let b = AlgebraElement::one(&params(2, 0, 1));
        assert_eq!(a.multiply(&b).unwrap_err(), Error::ParamsMismatch);
    }

    #[test]
    fn basic_derivations() {
        let p = params(2, 0, 1);
        assert!(AlgebraElement::one(&p).apply_basic_derivation(1).unwrap().is_zero());
        // l2 = 1: d_1(t_1 x^2) = 2 t_1 x^2 + x^2
        let p = params(0, 1, 0);
        let u = mono(&p, 1, &[2], &[1]);
        let expected = mono(&p, 2, &[2], &[1]).add(&mono(&p, 1, &[2], &[0])).unwrap();
        assert_eq!(u.apply_basic_derivation(1).unwrap(), expected);
        // pure lattice direction scales by alpha
        let p = params(0, 1, 2);
        let u = mono(&p, 1, &[4, 5, -6], &[0]);
        assert_eq!(u.apply_basic_derivation(3).unwrap(), mono(&p, -6, &[4, 5, -6], &[0]));
        assert_eq!(
            u.apply_basic_derivation(4).unwrap_err(),
            Error::IndexOutOfRange { index: 4, max: 3 }
        );
    }

    #[test]
    fn derivation_vectors() {
        let p = params(2, 0, 1);
        let u = mono(&p, 1, &[0], &[1, 1]);
        assert!(u.apply_derivation(&DerivationVector::zero(3)).unwrap().is_zero());
        let d = DerivationVector::from_ints(&[1, 1, 0]);
        let expected = mono(&p, 1, &[0], &[0, 1]).add(&mono(&p, 1, &[0], &[1, 0])).unwrap();
        assert_eq!(u.apply_derivation(&d).unwrap(), expected);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&DerivationVector::from_ints(&[1, 0]), &qvec(&[7])), q(0));
        assert_eq!(pairing(&DerivationVector::from_ints(&[0, 1]), &qvec(&[5])), q(5));
        assert_eq!(pairing(&DerivationVector::from_ints(&[3, 4, 5]), &qvec(&[0, 0])), q(0));
    }

    #[test]
    fn d_alpha_cases() {
        let p = params(0, 0, 3);
        assert!(p.d_alpha_basis(&qvec(&[0, 0, 0])).unwrap().is_empty());
        let b = p.d_alpha_basis(&qvec(&[1, 0, 0])).unwrap();
        assert_eq!(b, vec![DerivationVector::basic(3, 2), DerivationVector::basic(3, 3)]);
        let p = params(1, 0, 2);
        let b = p.d_alpha_basis(&qvec(&[0, 0])).unwrap();
        assert_eq!(b, vec![DerivationVector::basic(3, 2), DerivationVector::basic(3, 3)]);
        let p = params(0, 1, 2);
        assert_eq!(p.d_alpha_basis(&qvec(&[0, 0, 0])).unwrap().len(), 2);
        let p = params(2, 0, 1);
        assert_eq!(p.d_alpha_basis(&qvec(&[0])).unwrap().len(), 3);
        let err = params(0, 0, 2).d_alpha_basis(&[qr(1, 2), q(0)]).unwrap_err();
        assert!(matches!(err, Error::NotInGamma(_)));
    }

    #[test]
    fn kernel_single_variable() {
        let p = params(1, 0, 0);
        let box_ = vec![Vec::<Q>::new()];
        assert!(joint_kernel_check(&p, 3, &box_));
        // explicit nullspace of d/dt on {1, t, t^2, t^3}
        let basis: Vec<AlgebraElement> = (0..=3).map(|e| mono(&p, 1, &[], &[e])).collect();
        let kernel: Vec<_> = basis
            .iter()
            .filter(|u| u.apply_basic_derivation(1).unwrap().is_zero())
            .collect();
        assert_eq!(kernel, vec![&AlgebraElement::one(&p)]);
    }

    #[test]
    fn kernel_on_mixed_profile() {
        let p = params(1, 1, 1);
        let box_ = p.gamma().ball(1);
        assert!(joint_kernel_check(&p, 2, &box_));
        assert!(!joint_kernel_check(&p, 2, &box_[1..2]));
    }
}
