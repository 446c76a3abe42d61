//! Leading terms and the filtration of `S_alpha` by exponent degree.
//!
//! Degrees are compared graded-lexicographically: first by total level,
//! then at the first differing coordinate. Comparison accepts negative
//! entries so that shifted degrees can be compared too.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{exponent_vectors, AlgebraParams, DerivationVector};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::rational::{is_zero_vec, q, sub_vec, to_rats, Q, Rat};
use crate::witt::{dpq_expanded, WittElement, WittKey};

pub fn compare_degree(i: &[i64], j: &[i64]) -> Result<Ordering> {
    if i.len() != j.len() {
        return Err(Error::LengthMismatch(i.len(), j.len()));
    }
    let li: i64 = i.iter().sum();
    let lj: i64 = j.iter().sum();
    Ok(li.cmp(&lj).then_with(|| i.cmp(j)))
}

fn degree_of(ivec: &[u32]) -> Vec<i64> {
    ivec.iter().map(|&e| i64::from(e)).collect()
}

fn cmp_u32(a: &[u32], b: &[u32]) -> Ordering {
    compare_degree(&degree_of(a), &degree_of(b)).expect("equal arity")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingData {
    pub degree: Vec<i64>,
    pub level: i64,
    pub direction: DerivationVector,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeadingDataJson {
    pub degree: Vec<i64>,
    pub level: i64,
    pub direction: Vec<Rat>,
}

impl From<&LeadingData> for LeadingDataJson {
    fn from(d: &LeadingData) -> Self {
        Self {
            degree: d.degree.clone(),
            level: d.level,
            direction: to_rats(d.direction.coeffs()),
        }
    }
}

/// Leading term of the `alpha`-homogeneous part of `u`.
pub fn leading_term(u: &WittElement, alpha: &[Q]) -> Result<LeadingData> {
    let params = u.params();
    params.gamma().require(alpha)?;
    let mut top: Option<&[u32]> = None;
    for k in u.terms().keys().filter(|k| k.mono.alpha == alpha) {
        if top.map_or(true, |t| cmp_u32(&k.mono.ivec, t) == Ordering::Greater) {
            top = Some(&k.mono.ivec);
        }
    }
    let Some(top) = top else {
        return Err(Error::ZeroPart(crate::rational::fmt_vec(alpha)));
    };
    let mut coeffs = vec![Q::zero(); params.ell()];
    for (k, c) in u.terms() {
        if k.mono.alpha == alpha && k.mono.ivec == top {
            coeffs[k.p - 1] += c;
        }
    }
    let degree = degree_of(top);
    Ok(LeadingData {
        level: degree.iter().sum(),
        degree,
        direction: DerivationVector::new(coeffs),
    })
}

/// An element of `S_alpha` whose leading term is `x^{alpha,ivec} d`.
pub fn build_with_leading_term(
    params: &Arc<AlgebraParams>,
    alpha: &[Q],
    ivec: &[u32],
    d: &DerivationVector,
) -> Result<WittElement> {
    params.gamma().require(alpha)?;
    if ivec.len() != params.n_t() {
        return Err(Error::Arity(format!(
            "exponent vector has {} entries, expected {}",
            ivec.len(),
            params.n_t()
        )));
    }
    if d.len() != params.ell() {
        return Err(Error::DimensionMismatch {
            expected: params.ell(),
            got: d.len(),
        });
    }
    if d.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let beta = sub_vec(alpha, params.rho());
    if !params.in_d_alpha(d, &beta)? {
        return Err(Error::NotInDAlphaRho(format!("{d:?}")));
    }
    let l1 = params.l1();
    if let Some(j) = beta.iter().position(|b| !b.is_zero()) {
        let qi = l1 + j + 1;
        let scale = beta[j].recip();
        return combine(params, d, qi, alpha, ivec, &scale);
    }
    // alpha = rho; in_d_alpha already excluded l1 + l2 = 0
    let m = params.n_t();
    let am = d.get(m).clone();
    if am.is_zero() {
        let mut raised = ivec.to_vec();
        raised[m - 1] += 1;
        let scale = q(i64::from(raised[m - 1])).recip();
        return combine(params, d, m, alpha, &raised, &scale);
    }
    if ivec[m - 1] != 0 {
        return Err(Error::AdmissibilityViolated(m));
    }
    let mut rest = d.clone();
    let mut coeffs = rest.coeffs().to_vec();
    coeffs[m - 1] = Q::zero();
    rest = DerivationVector::new(coeffs);
    let mut out = if rest.is_zero() {
        WittElement::zero(params)
    } else {
        build_with_leading_term(params, alpha, ivec, &rest)?
    };
    let mut raised = ivec.to_vec();
    raised[0] += 1;
    let top = dpq_expanded(params, m, 1, alpha, &raised)?;
    out = out.add(&top.scale(&(am / q(i64::from(raised[0])))))?;
    Ok(out)
}

/// `scale * sum_p a_p D_{p,qi}(x^{alpha,ivec})`.
fn combine(
    params: &Arc<AlgebraParams>,
    d: &DerivationVector,
    qi: usize,
    alpha: &[Q],
    ivec: &[u32],
    scale: &Q,
) -> Result<WittElement> {
    let mut out = WittElement::zero(params);
    for (p, a) in d.support() {
        if p == qi {
            continue;
        }
        out = out.add(&dpq_expanded(params, p, qi, alpha, ivec)?.scale(&(a * scale)))?;
    }
    Ok(out)
}

/// `{x^alpha d : d in basis(D_{alpha - rho})}`.
pub fn s_alpha_level0_basis(params: &Arc<AlgebraParams>, alpha: &[Q]) -> Result<Vec<WittElement>> {
    params.gamma().require(alpha)?;
    let beta = sub_vec(alpha, params.rho());
    let x = crate::algebra::AlgebraElement::x(params, alpha.to_vec())?;
    params
        .d_alpha_basis(&beta)?
        .iter()
        .map(|d| WittElement::from_derivation(&x, d))
        .collect()
}

/// Whether every homogeneous part of `u` has leading degree at most `bound`.
pub fn filtration_member(u: &WittElement, bound: &[i64]) -> Result<bool> {
    for alpha in u.grade_decompose().keys() {
        let lead = leading_term(u, alpha)?;
        if compare_degree(&lead.degree, bound)? == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every `D_{p,q}(x^{alpha,i})` with `p < q` and `|i| <= max_level`.
pub fn generators(params: &Arc<AlgebraParams>, alpha: &[Q], max_level: u32) -> Result<Vec<WittElement>> {
    let mut out = Vec::new();
    for ivec in exponent_vectors(params.n_t(), max_level) {
        for p in 1..=params.ell() {
            for qi in p + 1..=params.ell() {
                let g = dpq_expanded(params, p, qi, alpha, &ivec)?;
                if !g.is_zero() {
                    out.push(g);
                }
            }
        }
    }
    Ok(out)
}

/// Classes in column order: degrees above `bound` first, then equal, then below.
fn split_by_bound(gens: &[WittElement], bound: &[u32]) -> Echelon<(u8, WittKey)> {
    let mut e = Echelon::new();
    for g in gens {
        let row: BTreeMap<(u8, WittKey), Q> = g
            .terms()
            .iter()
            .map(|(k, c)| {
                let class = match cmp_u32(&k.mono.ivec, bound) {
                    Ordering::Greater => 0,
                    Ordering::Equal => 1,
                    Ordering::Less => 2,
                };
                ((class, k.clone()), c.clone())
            })
            .collect();
        e.insert(row);
    }
    e
}

/// Brute-force `S_alpha^[0]`: the level-0 part of the span of generators
/// with `|i| <= max_level`, as a reduced basis.
pub fn level0_subspace(params: &Arc<AlgebraParams>, alpha: &[Q], max_level: u32) -> Result<Vec<WittElement>> {
    let gens = generators(params, alpha, max_level)?;
    let zero = vec![0u32; params.n_t()];
    let e = split_by_bound(&gens, &zero);
    Ok(e.rows()
        .filter(|((class, _), _)| *class > 0)
        .map(|(_, row)| {
            WittElement::from_row(params, row.iter().map(|((_, k), c)| (k.clone(), c.clone())).collect())
        })
        .collect())
}

/// Brute-force test: does some element in the span of generators with
/// `|j| <= |ivec| + 2` have leading term `x^{alpha,ivec} d`?
pub fn leading_term_attainable(
    params: &Arc<AlgebraParams>,
    alpha: &[Q],
    ivec: &[u32],
    d: &DerivationVector,
) -> Result<bool> {
    if d.is_zero() {
        return Ok(false);
    }
    let level: u32 = ivec.iter().sum();
    let gens = generators(params, alpha, level + 2)?;
    let e = split_by_bound(&gens, ivec);
    let mut leads = Echelon::new();
    for ((class, _), row) in e.rows() {
        if *class != 1 {
            continue;
        }
        let lead: BTreeMap<usize, Q> = row
            .iter()
            .filter(|((c, _), _)| *c == 1)
            .map(|((_, k), v)| (k.p, v.clone()))
            .collect();
        leads.insert(lead);
    }
    let target: BTreeMap<usize, Q> = d.support().map(|(p, c)| (p, c.clone())).collect();
    Ok(leads.contains(&target))
}

/// The admissibility condition for a prescribed leading term.
pub fn admissible(params: &AlgebraParams, alpha: &[Q], ivec: &[u32], d: &DerivationVector) -> Result<bool> {
    if d.is_zero() {
        return Ok(false);
    }
    let beta = sub_vec(alpha, params.rho());
    if !params.in_d_alpha(d, &beta)? {
        return Ok(false);
    }
    if is_zero_vec(&beta) {
        let m = params.n_t();
        return Ok(ivec[m - 1] == 0 || d.get(m).is_zero());
    }
    Ok(true)
}
