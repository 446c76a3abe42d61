//! The Witt-type Lie algebra `W = A . D` and its divergence-free subalgebra.
//!
//! A `WittElement` is a finite sum of `c * x^{alpha,i} d_p`. Terms are keyed
//! by `(monomial, p)`, so iteration follows the global monomial order and
//! then the derivation index.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    add_sparse, basic_derivation_term, same_params, AlgebraElement, AlgebraParams,
    DerivationVector, Monomial,
};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseRow};
use crate::rational::{from_rats, neg_vec, q, sub_vec, to_rats, Q, Rat};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WittKey {
    pub mono: Monomial,
    pub p: usize,
}

impl fmt::Debug for WittKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}d{}", self.mono, self.p)
    }
}

#[derive(Clone)]
pub struct WittElement {
    params: Arc<AlgebraParams>,
    terms: BTreeMap<WittKey, Q>,
}

impl PartialEq for WittElement {
    fn eq(&self, other: &Self) -> bool {
        same_params(&self.params, &other.params) && self.terms == other.terms
    }
}

impl Eq for WittElement {}

impl fmt::Debug for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::print_witt(self))
    }
}

impl WittElement {
    pub fn zero(params: &Arc<AlgebraParams>) -> Self {
        Self {
            params: params.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `c * x^{alpha,ivec} d_p`, validated.
    pub fn term(params: &Arc<AlgebraParams>, c: Q, alpha: Vec<Q>, ivec: Vec<u32>, p: usize) -> Result<Self> {
        params.check_index(p)?;
        let f = AlgebraElement::monomial(params, c, alpha, ivec)?;
        Ok(Self::from_component(&f, p))
    }

    /// `d_p` with constant coefficient.
    pub fn basic(params: &Arc<AlgebraParams>, p: usize) -> Result<Self> {
        params.check_index(p)?;
        Ok(Self::from_component(&AlgebraElement::one(params), p))
    }

    /// `f d_p`; `p` is assumed valid.
    pub fn from_component(f: &AlgebraElement, p: usize) -> Self {
        let mut out = Self::zero(f.params());
        for (m, c) in f.terms() {
            out.add_term(m.clone(), p, c.clone());
        }
        out
    }

    /// `f * d` for a constant-coefficient derivation `d`.
    pub fn from_derivation(f: &AlgebraElement, d: &DerivationVector) -> Result<Self> {
        if d.len() != f.params().ell() {
            return Err(Error::DimensionMismatch {
                expected: f.params().ell(),
                got: d.len(),
            });
        }
        let mut out = Self::zero(f.params());
        for (p, a) in d.support() {
            for (m, c) in f.terms() {
                out.add_term(m.clone(), p, c * a);
            }
        }
        Ok(out)
    }

    pub fn from_terms(params: &Arc<AlgebraParams>, terms: impl IntoIterator<Item = (Monomial, usize, Q)>) -> Result<Self> {
        let mut out = Self::zero(params);
        for (m, p, c) in terms {
            params.check_index(p)?;
            // validates the monomial
            AlgebraElement::monomial(params, Q::one(), m.alpha.clone(), m.ivec.clone())?;
            out.add_term(m, p, c);
        }
        Ok(out)
    }

    pub fn params(&self) -> &Arc<AlgebraParams> {
        &self.params
    }

    pub fn terms(&self) -> &BTreeMap<WittKey, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, p: usize, c: Q) {
        add_sparse(&mut self.terms, WittKey { mono, p }, c);
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
        for (k, c) in &other.terms {
            add_sparse(&mut out.terms, k.clone(), c.clone());
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
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// `f * u` for `f` in `A`.
    pub fn mul_algebra(&self, f: &AlgebraElement) -> Result<Self> {
        if !same_params(&self.params, f.params()) {
            return Err(Error::ParamsMismatch);
        }
        let mut out = Self::zero(&self.params);
        for (k, c) in &self.terms {
            for (m, a) in f.terms() {
                out.add_term(k.mono.times(m), k.p, c * a);
            }
        }
        Ok(out)
    }

    /// `x^by * u`.
    pub fn shift(&self, by: &[Q]) -> Result<Self> {
        self.params.gamma().require(by)?;
        Ok(self.shift_unchecked(by))
    }

    pub(crate) fn shift_unchecked(&self, by: &[Q]) -> Self {
        Self {
            params: self.params.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    (
                        WittKey {
                            mono: k.mono.shifted(by),
                            p: k.p,
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// The coefficient `u_p` of `d_p`.
    pub fn component(&self, p: usize) -> AlgebraElement {
        AlgebraElement::from_terms_unchecked(
            &self.params,
            self.terms
                .iter()
                .filter(|(k, _)| k.p == p)
                .map(|(k, c)| (k.mono.clone(), c.clone())),
        )
    }

    /// `u(f) = sum_p u_p d_p(f)`.
    pub fn apply_to(&self, f: &AlgebraElement) -> Result<AlgebraElement> {
        if !same_params(&self.params, f.params()) {
            return Err(Error::ParamsMismatch);
        }
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            for (m, a) in f.terms() {
                basic_derivation_term(&self.params, k.p, m, a, |m2, c2| {
                    add_sparse(&mut out, k.mono.times(&m2), c * c2)
                });
            }
        }
        Ok(AlgebraElement::from_terms_unchecked(&self.params, out))
    }

    /// `[f d_p, g d_q] = f d_p(g) d_q - g d_q(f) d_p`, extended bilinearly.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let params = &self.params;
        let mut out = Self::zero(params);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let c = c1 * c2;
                basic_derivation_term(params, k1.p, &k2.mono, &c, |m, v| {
                    out.add_term(k1.mono.times(&m), k2.p, v)
                });
                basic_derivation_term(params, k2.p, &k1.mono, &c, |m, v| {
                    out.add_term(k2.mono.times(&m), k1.p, -v)
                });
            }
        }
        Ok(out)
    }

    /// `sum_p d_p(u_p)`.
    pub fn divergence(&self) -> AlgebraElement {
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            basic_derivation_term(&self.params, k.p, &k.mono, c, |m, v| add_sparse(&mut out, m, v));
        }
        AlgebraElement::from_terms_unchecked(&self.params, out)
    }

    /// Membership in `x^rho . ker(div)`: the divergence of `x^{-rho} u` vanishes.
    pub fn is_in_s(&self) -> bool {
        let untwisted = self.shift_unchecked(&neg_vec(self.params.rho()));
        untwisted.divergence().is_zero()
    }

    /// Splits by lattice degree; each value is homogeneous.
    pub fn grade_decompose(&self) -> BTreeMap<Vec<Q>, WittElement> {
        let mut out: BTreeMap<Vec<Q>, WittElement> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry(k.mono.alpha.clone())
                .or_insert_with(|| Self::zero(&self.params))
                .add_term(k.mono.clone(), k.p, c.clone());
        }
        out
    }

    /// The lattice degrees carrying a nonzero part.
    pub fn support(&self) -> Vec<Vec<Q>> {
        let mut s: Vec<Vec<Q>> = self.terms.keys().map(|k| k.mono.alpha.clone()).collect();
        s.dedup();
        s
    }

    pub fn homogeneous_part(&self, alpha: &[Q]) -> Self {
        Self {
            params: self.params.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.mono.alpha == alpha)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn to_row(&self) -> SparseRow<WittKey> {
        self.terms.clone()
    }

    pub fn from_row(params: &Arc<AlgebraParams>, row: SparseRow<WittKey>) -> Self {
        Self {
            params: params.clone(),
            terms: row.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Rebinds the element to structurally equal parameters.
    pub fn rebind(&self, params: &Arc<AlgebraParams>) -> Result<Self> {
        if !same_params(&self.params, params) {
            return Err(Error::ParamsMismatch);
        }
        Ok(Self {
            params: params.clone(),
            terms: self.terms.clone(),
        })
    }
}

/// `D_{p,q}(u) = x^rho (d_q(x^{-rho} u) d_p - d_p(x^{-rho} u) d_q)`.
pub fn dpq(p: usize, q_: usize, u: &AlgebraElement) -> Result<WittElement> {
    let params = u.params();
    params.check_index(p)?;
    params.check_index(q_)?;
    let rho = params.rho().to_vec();
    let v = u.shift(&neg_vec(&rho))?;
    let dq = v.apply_basic_derivation(q_)?.shift(&rho)?;
    let dp = v.apply_basic_derivation(p)?.shift(&rho)?;
    WittElement::from_component(&dq, p).sub(&WittElement::from_component(&dp, q_))
}

/// The four-term expansion of `D_{p,q}(x^{alpha,i})`, computed directly from
/// exponents without going through the algebra operations.
pub fn dpq_expanded(params: &Arc<AlgebraParams>, p: usize, q_: usize, alpha: &[Q], ivec: &[u32]) -> Result<WittElement> {
    params.check_index(p)?;
    params.check_index(q_)?;
    // validates alpha and arity
    AlgebraElement::monomial(params, Q::one(), alpha.to_vec(), ivec.to_vec())?;
    let shifted = sub_vec(alpha, params.rho());
    let at = |k: usize| params.alpha_at(&shifted, k);
    let expo = |k: usize| -> u32 {
        if k <= params.n_t() {
            ivec[k - 1]
        } else {
            0
        }
    };
    let base = Monomial::new(alpha.to_vec(), ivec.to_vec());
    let mut out = WittElement::zero(params);
    out.add_term(base.clone(), p, at(q_));
    out.add_term(base.clone(), q_, -at(p));
    if expo(q_) > 0 {
        out.add_term(base.lowered(q_).expect("positive"), p, q(i64::from(expo(q_))));
    }
    if expo(p) > 0 {
        out.add_term(base.lowered(p).expect("positive"), q_, -q(i64::from(expo(p))));
    }
    Ok(out)
}

/// Reduced basis of a span together with its rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBasis {
    pub basis: Vec<WittElement>,
    pub rank: usize,
}

/// Exact reduced row echelon basis of `span(elems)`. Coordinates are ordered
/// by monomial then derivation index; the leftmost nonzero entry pivots, so
/// the basis does not depend on the input order.
pub fn span_reduce(params: &Arc<AlgebraParams>, elems: &[WittElement]) -> Result<SpanBasis> {
    let mut e = Echelon::new();
    for u in elems {
        if !same_params(params, u.params()) {
            return Err(Error::ParamsMismatch);
        }
        e.insert(u.to_row());
    }
    let rank = e.rank();
    let basis = e
        .into_rows()
        .into_iter()
        .map(|r| WittElement::from_row(params, r))
        .collect();
    Ok(SpanBasis { basis, rank })
}

/// JSON record of one Witt term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WittTermJson {
    pub alpha: Vec<Rat>,
    pub ivec: Vec<u32>,
    pub p: usize,
    pub coeff: Rat,
}

impl WittElement {
    pub fn to_json(&self) -> Vec<WittTermJson> {
        self.terms
            .iter()
            .map(|(k, c)| WittTermJson {
                alpha: to_rats(&k.mono.alpha),
                ivec: k.mono.ivec.clone(),
                p: k.p,
                coeff: Rat(c.clone()),
            })
            .collect()
    }

    pub fn from_json(params: &Arc<AlgebraParams>, terms: Vec<WittTermJson>) -> Result<Self> {
        Self::from_terms(
            params,
            terms
                .into_iter()
                .map(|t| (Monomial::new(from_rats(t.alpha), t.ivec), t.p, t.coeff.0)),
        )
    }
}
