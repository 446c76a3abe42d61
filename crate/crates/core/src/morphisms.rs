//! Maps between divergence-free algebras and derivations of them: the
//! base-point shifts `psi`, the isomorphism induced by a group element,
//! additive characters, derivation handles and bounded iteration probes.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    AlgebraElement, AlgebraParams, AlgebraParamsJson, DerivationVector, Monomial,
};
use crate::error::{Error, Result};
use crate::lattice::{GroupElement, Lattice};
use crate::linalg::Echelon;
use crate::matrix::Matrix;
use crate::rational::{add_vec, dot, from_rats, neg_vec, to_rats, Q, Rat};
use crate::sample;
use crate::witt::{WittElement, WittTermJson};

fn require_l1(params: &AlgebraParams) -> Result<()> {
    if params.l1() == 0 {
        Err(Error::RequiresL1)
    } else {
        Ok(())
    }
}

fn check_shifts(params: &AlgebraParams, shifts: &[Vec<Q>]) -> Result<()> {
    require_l1(params)?;
    if shifts.len() != params.l1() {
        return Err(Error::LengthMismatch(shifts.len(), params.l1()));
    }
    for s in shifts {
        params.gamma().require(s)?;
    }
    Ok(())
}

/// Base point of the algebra `psi_map` lands in: `rho - sum_p alpha^(p)`.
///
/// Conjugation by `psi` multiplies the volume by `x^{sum_p alpha^(p)}`, so the
/// twist moves against the shifts.
pub fn rho_shift_target(params: &AlgebraParams, shifts: &[Vec<Q>]) -> Result<Vec<Q>> {
    check_shifts(params, shifts)?;
    Ok(shifts
        .iter()
        .fold(params.rho().to_vec(), |acc, s| crate::rational::sub_vec(&acc, s)))
}

/// Shifts `(rho - rho', 0, ..., 0)` carrying base point `rho` to `rho'`.
pub fn shifts_to(params: &AlgebraParams, rho_target: &[Q]) -> Result<Vec<Vec<Q>>> {
    require_l1(params)?;
    let mut shifts = vec![params.zero_alpha(); params.l1()];
    shifts[0] = crate::rational::sub_vec(params.rho(), rho_target);
    params.gamma().require(&shifts[0])?;
    Ok(shifts)
}

/// The automorphism of `W` induced by `x^{alpha,i} -> x^{alpha + sum_p i_p alpha^(p), i}`
/// on `A`, landing in the algebra with base point `rho_shift_target`.
///
/// Conjugating `d_q` for `q > l1` produces `d_q - sum_p alpha^(p)_{q-l1} t_p d_p`;
/// each correction term is weighted by the matching shift coordinate.
pub fn psi_map(u: &WittElement, shifts: &[Vec<Q>]) -> Result<WittElement> {
    let params = u.params();
    let rho_star = rho_shift_target(params, shifts)?;
    let target = Arc::new(params.with_rho(rho_star)?);
    let l1 = params.l1();
    let mut out = WittElement::zero(&target);
    for (k, c) in u.terms() {
        let mut alpha = k.mono.alpha.clone();
        for (p, s) in shifts.iter().enumerate() {
            let e = Q::from_integer(BigInt::from(k.mono.ivec[p]));
            alpha = add_vec(&alpha, &crate::rational::scale_vec(&e, s));
        }
        let image = Monomial::new(alpha, k.mono.ivec.clone());
        if k.p <= l1 {
            let shifted = image.shifted(&neg_vec(&shifts[k.p - 1]));
            out.add_term(shifted, k.p, c.clone());
        } else {
            let j = k.p - l1 - 1;
            for (p, s) in shifts.iter().enumerate() {
                if s[j].is_zero() {
                    continue;
                }
                out.add_term(image.raised(p + 1), p + 1, -(c * &s[j]));
            }
            out.add_term(image, k.p, c.clone());
        }
    }
    Ok(out)
}

/// Moves `u` to the algebra with base point 0 (only possible when `l1 >= 1`).
pub fn normalize_rho(u: &WittElement) -> Result<WittElement> {
    let shifts = shifts_to(u.params(), &u.params().zero_alpha())?;
    psi_map(u, &shifts)
}

/// Whether `g` carries `Gamma` onto `Gamma'` and, when `l1 = 0`, `rho` to `rho'`.
pub fn witness_conditions(source: &AlgebraParams, target: &AlgebraParams, g: &GroupElement) -> Result<bool> {
    if source.shape() != target.shape() {
        return Err(Error::InvariantMismatch(source.shape(), target.shape()));
    }
    if g.l2() != source.l2() || g.l3() != source.l3() {
        return Err(Error::DimensionMismatch {
            expected: source.n_x(),
            got: g.dim(),
        });
    }
    if g.act_lattice(source.gamma())? != *target.gamma() {
        return Ok(false);
    }
    if source.l1() == 0 && g.act_vector(source.rho())? != target.rho() {
        return Ok(false);
    }
    Ok(true)
}

/// Outcome of the exact checks run on a candidate induced map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftReport {
    pub bracket_pairs: usize,
    pub membership_cases: usize,
    pub grading_cases: usize,
    pub pairing_cases: usize,
}

/// The candidate isomorphism `S(Gamma, rho) -> S(Gamma', rho')` attached to `g`.
///
/// On `A` it sends `x^alpha` to `x^{alpha g^-1}`, fixes `t_1..t_l1` and
/// substitutes `t_{l1+j} -> sum_m (A^-1)_{jm} t_{l1+m}`; on constant
/// derivations it acts by `a -> g a` on the last `l2 + l3` coefficients.
/// When `l1 >= 1` both base points are first moved to 0 by `psi_map`.
#[derive(Clone)]
pub struct GroupInducedMap {
    source: Arc<AlgebraParams>,
    target: Arc<AlgebraParams>,
    source0: Arc<AlgebraParams>,
    target0: Arc<AlgebraParams>,
    g: GroupElement,
    g_inv: Matrix,
    a_inv: Matrix,
}

impl fmt::Debug for GroupInducedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupInducedMap({:?})", self.g)
    }
}

impl GroupInducedMap {
    /// Builds the map without validating it; see [`group_induced_map`].
    pub fn candidate(source: &Arc<AlgebraParams>, target: &Arc<AlgebraParams>, g: &GroupElement) -> Result<Self> {
        if !witness_conditions(source, target, g)? {
            return Err(Error::WitnessInvalid(format!("{g:?}")));
        }
        let (source0, target0) = if source.l1() >= 1 {
            (
                Arc::new(source.with_rho(source.zero_alpha())?),
                Arc::new(target.with_rho(target.zero_alpha())?),
            )
        } else {
            (source.clone(), target.clone())
        };
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            source0,
            target0,
            g: g.clone(),
            g_inv: g.full().inverse().expect("invertible"),
            a_inv: g.a().inverse().expect("invertible"),
        })
    }

    pub fn group_element(&self) -> &GroupElement {
        &self.g
    }

    pub fn source(&self) -> &Arc<AlgebraParams> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraParams> {
        &self.target
    }

    /// The coefficient law on constant derivations.
    pub fn map_derivation(&self, d: &DerivationVector) -> DerivationVector {
        let l1 = self.source.l1();
        let mut coeffs = d.coeffs()[..l1].to_vec();
        coeffs.extend(self.g.full().apply(&d.coeffs()[l1..]));
        DerivationVector::new(coeffs)
    }

    fn map_alpha(&self, alpha: &[Q]) -> Vec<Q> {
        self.g_inv.left_apply(alpha)
    }

    /// The algebra part of the map, into base point 0 when `l1 >= 1`.
    pub fn map_algebra(&self, f: &AlgebraElement) -> Result<AlgebraElement> {
        let params = &self.target0;
        let l1 = self.source.l1();
        let l2 = self.source.l2();
        let subst: Vec<AlgebraElement> = (0..l2)
            .map(|j| {
                let terms = (0..l2).map(|m| {
                    let mut ivec = vec![0; params.n_t()];
                    ivec[l1 + m] = 1;
                    (Monomial::new(params.zero_alpha(), ivec), self.a_inv[(j, m)].clone())
                });
                AlgebraElement::from_terms_unchecked(params, terms)
            })
            .collect();
        let mut out = AlgebraElement::zero(params);
        for (m, c) in f.terms() {
            let mut ivec = vec![0; params.n_t()];
            ivec[..l1].copy_from_slice(&m.ivec[..l1]);
            let head = Monomial::new(self.map_alpha(&m.alpha), ivec);
            let mut term = AlgebraElement::from_terms_unchecked(params, [(head, c.clone())]);
            for (j, s) in subst.iter().enumerate() {
                for _ in 0..m.ivec[l1 + j] {
                    term = term.multiply(s)?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// The core map between base-point-0 (or `l1 = 0`) algebras.
    fn map_core(&self, u: &WittElement) -> Result<WittElement> {
        let ell = self.source.ell();
        let mut out = WittElement::zero(&self.target0);
        let mut by_p: BTreeMap<usize, AlgebraElement> = BTreeMap::new();
        for p in 1..=ell {
            let comp = u.component(p);
            if !comp.is_zero() {
                by_p.insert(p, comp);
            }
        }
        for (p, f) in by_p {
            let image = self.map_algebra(&f)?;
            let d = self.map_derivation(&DerivationVector::basic(ell, p));
            out = out.add(&WittElement::from_derivation(&image, &d)?)?;
        }
        Ok(out)
    }

    pub fn apply(&self, u: &WittElement) -> Result<WittElement> {
        let u = u.rebind(&self.source)?;
        if self.source.l1() == 0 {
            return self.map_core(&u);
        }
        let normalized = normalize_rho(&u)?.rebind(&self.source0)?;
        let core = self.map_core(&normalized)?;
        let shifts = shifts_to(&self.target0, self.target.rho())?;
        psi_map(&core, &shifts)?.rebind(&self.target)
    }

    /// Exact checks on seeded random inputs: brackets, membership in `S`,
    /// grading of the core map, and the pairing law.
    pub fn validate(&self, seed: u64, cases: usize) -> Result<LiftReport> {
        let mut rng = sample::rng(seed);
        let fail = |what: String| Err(Error::LiftValidationFailed(what));
        for _ in 0..cases {
            let u = sample::s_element(&mut rng, &self.source, 2);
            let v = sample::s_element(&mut rng, &self.source, 2);
            let (mu, mv) = (self.apply(&u)?, self.apply(&v)?);
            if !mu.is_in_s() {
                return fail(format!("image of {u:?} leaves S"));
            }
            if self.apply(&u.bracket(&v)?)? != mu.bracket(&mv)? {
                return fail(format!("bracket of {u:?} and {v:?} not preserved"));
            }
        }
        for _ in 0..cases {
            let alpha = sample::alpha(&mut rng, &self.source0);
            let w = sample::s_generator_at(&mut rng, &self.source0, &alpha);
            let image = self.map_core(&w)?;
            let expected = self.map_alpha(&alpha);
            if image.support().iter().any(|b| *b != expected) {
                return fail(format!("grading not preserved at {}", crate::rational::fmt_vec(&alpha)));
            }
            let d = sample::derivation_vector(&mut rng, self.source.ell());
            let lhs = crate::algebra::pairing(&d, &alpha);
            let rhs = crate::algebra::pairing(&self.map_derivation(&d), &expected);
            if lhs != rhs {
                return fail(format!("pairing law fails for {d:?}"));
            }
        }
        Ok(LiftReport {
            bracket_pairs: cases,
            membership_cases: cases,
            grading_cases: cases,
            pairing_cases: cases,
        })
    }
}

/// Builds and validates the induced map; a failed check is an error.
pub fn group_induced_map(
    source: &Arc<AlgebraParams>,
    target: &Arc<AlgebraParams>,
    g: &GroupElement,
    seed: u64,
    cases: usize,
) -> Result<(GroupInducedMap, LiftReport)> {
    let map = GroupInducedMap::candidate(source, target, g)?;
    let report = map.validate(seed, cases)?;
    Ok((map, report))
}

/// `mu` in `Hom(Gamma, F)`, given by its values on the canonical basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveCharacter {
    gamma: Lattice,
    values: Vec<Q>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdditiveCharacterJson {
    pub gamma: Lattice,
    pub values: Vec<Rat>,
}

impl AdditiveCharacter {
    pub fn new(gamma: &Lattice, values: Vec<Q>) -> Result<Self> {
        if values.len() != gamma.dim() {
            return Err(Error::DimensionMismatch {
                expected: gamma.dim(),
                got: values.len(),
            });
        }
        Ok(Self {
            gamma: gamma.clone(),
            values,
        })
    }

    pub fn zero(gamma: &Lattice) -> Self {
        Self::new(gamma, vec![Q::zero(); gamma.dim()]).expect("matching length")
    }

    /// The character `alpha -> <d, alpha>`.
    pub fn from_derivation(gamma: &Lattice, d: &DerivationVector) -> Self {
        let values = gamma.basis().iter().map(|b| crate::algebra::pairing(d, b)).collect();
        Self {
            gamma: gamma.clone(),
            values,
        }
    }

    pub fn gamma(&self) -> &Lattice {
        &self.gamma
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn eval(&self, alpha: &[Q]) -> Result<Q> {
        let coords = self
            .gamma
            .coords(alpha)
            .ok_or_else(|| Error::NotInGamma(crate::rational::fmt_vec(alpha)))?;
        Ok(coords
            .iter()
            .zip(&self.values)
            .map(|(c, v)| Q::from_integer(c.clone()) * v)
            .sum())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            gamma: self.gamma.clone(),
            values: crate::rational::sub_vec(&self.values, &other.values),
        }
    }

    pub fn to_json(&self) -> AdditiveCharacterJson {
        AdditiveCharacterJson {
            gamma: self.gamma.clone(),
            values: to_rats(&self.values),
        }
    }

    pub fn from_json(j: AdditiveCharacterJson) -> Result<Self> {
        Self::new(&j.gamma, from_rats(j.values))
    }
}

/// Splits `mu = <d, .> + mu*` with `d` supported on the last `l3`
/// derivations and `mu*` vanishing on the last `l3` canonical basis vectors.
pub fn split_character(params: &AlgebraParams, mu: &AdditiveCharacter) -> Result<(DerivationVector, AdditiveCharacter)> {
    if mu.gamma != *params.gamma() {
        return Err(Error::InvalidHandle("character defined on a different lattice".into()));
    }
    let (l2, l3) = (params.l2(), params.l3());
    let basis = params.gamma().basis_matrix();
    let block = basis.block(l2, l2, l3, l3);
    let rhs: Vec<Q> = mu.values[l2..].to_vec();
    let inv = block.inverse().expect("canonical basis has a triangular invertible block");
    let a = inv.apply(&rhs);
    let mut coeffs = vec![Q::zero(); params.l1() + l2];
    coeffs.extend(a);
    let d = DerivationVector::new(coeffs);
    let rest = mu.sub(&AdditiveCharacter::from_derivation(params.gamma(), &d));
    Ok((d, rest))
}

/// Something that maps `S` to `W` linearly and can be tested for the Leibniz rule.
pub trait Derivation {
    fn name(&self) -> String;
    fn apply(&self, v: &WittElement) -> Result<WittElement>;
}

/// A concrete derivation of `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationHandle {
    /// `ad u` for `u` in `S`.
    Inner(WittElement),
    /// `ad u` for `u` in `x^rho D`.
    OuterWRho0(WittElement),
    /// `v -> mu(beta) v` on degree `beta`.
    Character(AdditiveCharacter),
    /// `v -> [u, v] + mu(beta) v`.
    Combined(WittElement, AdditiveCharacter),
    /// `ad(t_l1 d_l1)`.
    TDegree(Arc<AlgebraParams>),
}

fn in_x_rho_d(u: &WittElement) -> bool {
    let params = u.params();
    u.terms()
        .keys()
        .all(|k| k.mono.alpha == params.rho() && k.mono.ivec.iter().all(|&e| e == 0))
}

fn check_character(params: &AlgebraParams, mu: &AdditiveCharacter) -> Result<()> {
    if mu.gamma != *params.gamma() {
        return Err(Error::InvalidHandle("character defined on a different lattice".into()));
    }
    Ok(())
}

impl DerivationHandle {
    pub fn inner(u: &WittElement) -> Result<Self> {
        if !u.is_in_s() {
            return Err(Error::InvalidHandle("inner derivation needs an element of S".into()));
        }
        Ok(Self::Inner(u.clone()))
    }

    pub fn outer_w_rho0(u: &WittElement) -> Result<Self> {
        if !in_x_rho_d(u) {
            return Err(Error::InvalidHandle("element is not in x^rho D".into()));
        }
        Ok(Self::OuterWRho0(u.clone()))
    }

    pub fn character(mu: &AdditiveCharacter) -> Self {
        Self::Character(mu.clone())
    }

    pub fn combined(u: &WittElement, mu: &AdditiveCharacter) -> Result<Self> {
        if !u.is_in_s() && !in_x_rho_d(u) {
            return Err(Error::InvalidHandle("element is neither in S nor in x^rho D".into()));
        }
        check_character(u.params(), mu)?;
        Ok(Self::Combined(u.clone(), mu.clone()))
    }

    pub fn t_degree(params: &Arc<AlgebraParams>) -> Result<Self> {
        require_l1(params)?;
        Ok(Self::TDegree(params.clone()))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Inner(_) => "inner",
            Self::OuterWRho0(_) => "outer_w_rho0",
            Self::Character(_) => "character",
            Self::Combined(..) => "combined",
            Self::TDegree(_) => "t_degree",
        }
    }

    /// The element whose adjoint action is part of the handle, if any.
    pub fn ad_element(&self) -> Option<WittElement> {
        match self {
            Self::Inner(u) | Self::OuterWRho0(u) | Self::Combined(u, _) => Some(u.clone()),
            Self::Character(_) => None,
            Self::TDegree(params) => {
                let l1 = params.l1();
                let mut ivec = vec![0; params.n_t()];
                ivec[l1 - 1] = 1;
                let one = Q::from_integer(1.into());
                Some(WittElement::term(params, one, params.zero_alpha(), ivec, l1).expect("valid term"))
            }
        }
    }

    fn character_part(&self) -> Option<&AdditiveCharacter> {
        match self {
            Self::Character(mu) | Self::Combined(_, mu) => Some(mu),
            _ => None,
        }
    }
}

pub fn apply_character(mu: &AdditiveCharacter, v: &WittElement) -> Result<WittElement> {
    check_character(v.params(), mu)?;
    let mut out = WittElement::zero(v.params());
    for (beta, part) in v.grade_decompose() {
        out = out.add(&part.scale(&mu.eval(&beta)?))?;
    }
    Ok(out)
}

impl Derivation for DerivationHandle {
    fn name(&self) -> String {
        self.kind().to_string()
    }

    fn apply(&self, v: &WittElement) -> Result<WittElement> {
        let mut out = WittElement::zero(v.params());
        if let Some(u) = self.ad_element() {
            out = u.rebind(v.params())?.bracket(v)?;
        }
        if let Some(mu) = self.character_part() {
            out = out.add(&apply_character(mu, v)?)?;
        }
        Ok(out)
    }
}

/// `ad u`, except negated on degree `flipped`; not a derivation in general.
#[derive(Debug, Clone)]
pub struct CorruptedAd {
    pub u: WittElement,
    pub flipped: Vec<Q>,
}

impl Derivation for CorruptedAd {
    fn name(&self) -> String {
        "corrupted_ad".into()
    }

    fn apply(&self, v: &WittElement) -> Result<WittElement> {
        let image = self.u.bracket(v)?;
        let mut out = WittElement::zero(v.params());
        for (beta, part) in image.grade_decompose() {
            let part = if beta == self.flipped { part.neg() } else { part };
            out = out.add(&part)?;
        }
        Ok(out)
    }
}

/// Exact Leibniz check `d[u,v] = [d u, v] + [u, d v]` on every pair.
pub fn is_derivation_on<D: Derivation + ?Sized>(d: &D, pairs: &[(WittElement, WittElement)]) -> Result<bool> {
    for (u, v) in pairs {
        for w in [u, v] {
            if !w.is_in_s() {
                return Err(Error::NotInS(crate::text::print_witt(w)));
            }
        }
        let lhs = d.apply(&u.bracket(v)?)?;
        let rhs = d.apply(u)?.bracket(v)?.add(&u.bracket(&d.apply(v)?)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First pair among `candidates` on which the Leibniz rule fails.
pub fn find_leibniz_failure<D: Derivation + ?Sized>(
    d: &D,
    candidates: &[WittElement],
) -> Result<Option<(WittElement, WittElement)>> {
    for u in candidates {
        for v in candidates {
            let pair = [(u.clone(), v.clone())];
            if !is_derivation_on(d, &pair)? {
                return Ok(Some((u.clone(), v.clone())));
            }
        }
    }
    Ok(None)
}

/// A named way of building derivation handles, for the CLI and the suites.
pub trait DerivationKind: Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// Builds a handle from an element and/or character values.
    fn build(
        &self,
        params: &Arc<AlgebraParams>,
        u: Option<&WittElement>,
        mu: Option<&AdditiveCharacter>,
    ) -> Result<DerivationHandle>;
    /// A random handle of this kind, or `None` if the kind does not apply.
    fn sample(&self, params: &Arc<AlgebraParams>, rng: &mut sample::Rng64) -> Option<DerivationHandle>;
}

fn need<'a, T>(x: Option<&'a T>, what: &str) -> Result<&'a T> {
    x.ok_or_else(|| Error::InvalidHandle(format!("missing {what}")))
}

struct InnerKind;
struct OuterKind;
struct CharacterKind;
struct CombinedKind;
struct TDegreeKind;

fn random_character(params: &AlgebraParams, rng: &mut sample::Rng64) -> AdditiveCharacter {
    let values = (0..params.n_x()).map(|_| sample::coeff(rng)).collect();
    AdditiveCharacter::new(params.gamma(), values).expect("matching length")
}

fn random_x_rho_d(params: &Arc<AlgebraParams>, rng: &mut sample::Rng64) -> WittElement {
    let x = AlgebraElement::x(params, params.rho().to_vec()).expect("rho in Gamma");
    let d = sample::derivation_vector(rng, params.ell());
    WittElement::from_derivation(&x, &d).expect("matching length")
}

impl DerivationKind for InnerKind {
    fn name(&self) -> &'static str {
        "inner"
    }
    fn summary(&self) -> &'static str {
        "ad u for u in S"
    }
    fn build(&self, _: &Arc<AlgebraParams>, u: Option<&WittElement>, _: Option<&AdditiveCharacter>) -> Result<DerivationHandle> {
        DerivationHandle::inner(need(u, "element u")?)
    }
    fn sample(&self, params: &Arc<AlgebraParams>, rng: &mut sample::Rng64) -> Option<DerivationHandle> {
        DerivationHandle::inner(&sample::s_element(rng, params, 2)).ok()
    }
}

impl DerivationKind for OuterKind {
    fn name(&self) -> &'static str {
        "outer_w_rho0"
    }
    fn summary(&self) -> &'static str {
        "ad u for u in x^rho D"
    }
    fn build(&self, _: &Arc<AlgebraParams>, u: Option<&WittElement>, _: Option<&AdditiveCharacter>) -> Result<DerivationHandle> {
        DerivationHandle::outer_w_rho0(need(u, "element u")?)
    }
    fn sample(&self, params: &Arc<AlgebraParams>, rng: &mut sample::Rng64) -> Option<DerivationHandle> {
        DerivationHandle::outer_w_rho0(&random_x_rho_d(params, rng)).ok()
    }
}

impl DerivationKind for CharacterKind {
    fn name(&self) -> &'static str {
        "character"
    }
    fn summary(&self) -> &'static str {
        "v -> mu(beta) v on degree beta"
    }
    fn build(&self, params: &Arc<AlgebraParams>, _: Option<&WittElement>, mu: Option<&AdditiveCharacter>) -> Result<DerivationHandle> {
        let mu = need(mu, "character values")?;
        check_character(params, mu)?;
        Ok(DerivationHandle::character(mu))
    }
    fn sample(&self, params: &Arc<AlgebraParams>, rng: &mut sample::Rng64) -> Option<DerivationHandle> {
        if params.n_x() == 0 {
            return None;
        }
        Some(DerivationHandle::character(&random_character(params, rng)))
    }
}

impl DerivationKind for CombinedKind {
    fn name(&self) -> &'static str {
        "combined"
    }
    fn summary(&self) -> &'static str {
        "v -> [u, v] + mu(beta) v"
    }
    fn build(&self, _: &Arc<AlgebraParams>, u: Option<&WittElement>, mu: Option<&AdditiveCharacter>) -> Result<DerivationHandle> {
        DerivationHandle::combined(need(u, "element u")?, need(mu, "character values")?)
    }
    fn sample(&self, params: &Arc<AlgebraParams>, rng: &mut sample::Rng64) -> Option<DerivationHandle> {
        let u = random_x_rho_d(params, rng);
        DerivationHandle::combined(&u, &random_character(params, rng)).ok()
    }
}

impl DerivationKind for TDegreeKind {
    fn name(&self) -> &'static str {
        "t_degree"
    }
    fn summary(&self) -> &'static str {
        "ad(t_l1 d_l1), needs l1 >= 1"
    }
    fn build(&self, params: &Arc<AlgebraParams>, _: Option<&WittElement>, _: Option<&AdditiveCharacter>) -> Result<DerivationHandle> {
        DerivationHandle::t_degree(params)
    }
    fn sample(&self, params: &Arc<AlgebraParams>, _: &mut sample::Rng64) -> Option<DerivationHandle> {
        DerivationHandle::t_degree(params).ok()
    }
}

static KINDS: [&dyn DerivationKind; 5] = [&InnerKind, &OuterKind, &CharacterKind, &CombinedKind, &TDegreeKind];

pub fn derivation_kinds() -> &'static [&'static dyn DerivationKind] {
    &KINDS
}

pub fn find_kind(name: &str) -> Option<&'static dyn DerivationKind> {
    let name = name.replace('-', "_");
    KINDS.iter().copied().find(|k| k.name() == name)
}

/// JSON form of a handle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DerivationHandleJson {
    pub kind: String,
    pub params: AlgebraParamsJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<WittTermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<AdditiveCharacterJson>,
}

impl DerivationHandle {
    pub fn to_json(&self, params: &AlgebraParams) -> DerivationHandleJson {
        let u = match self {
            Self::Inner(u) | Self::OuterWRho0(u) | Self::Combined(u, _) => Some(u.to_json()),
            _ => None,
        };
        DerivationHandleJson {
            kind: self.kind().to_string(),
            params: params.into(),
            u,
            mu: self.character_part().map(AdditiveCharacter::to_json),
        }
    }

    pub fn from_json(j: DerivationHandleJson) -> Result<Self> {
        let params = Arc::new(AlgebraParams::try_from(j.params)?);
        let u = j.u.map(|t| WittElement::from_json(&params, t)).transpose()?;
        let mu = j.mu.map(AdditiveCharacter::from_json).transpose()?;
        let kind = find_kind(&j.kind).ok_or_else(|| Error::InvalidHandle(format!("unknown kind {}", j.kind)))?;
        kind.build(&params, u.as_ref(), mu.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NilProbe {
    NilpotentAt(usize),
    Undecided,
}

/// Smallest `n <= max_n` with `(ad u)^n v = 0`.
pub fn nilpotency_probe(u: &WittElement, v: &WittElement, max_n: usize) -> Result<NilProbe> {
    if v.is_zero() {
        return Ok(NilProbe::NilpotentAt(0));
    }
    let mut cur = v.clone();
    for n in 1..=max_n {
        cur = u.bracket(&cur)?;
        if cur.is_zero() {
            return Ok(NilProbe::NilpotentAt(n));
        }
    }
    Ok(NilProbe::Undecided)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteProbe {
    /// The iterate span is `ad u`-invariant of this dimension.
    Finite(usize),
    Undecided,
}

/// Iterates `ad u` on `v` until an iterate falls in the span of the previous
/// ones (which proves the span invariant and finite) or `max_n` is reached.
pub fn locally_finite_probe(u: &WittElement, v: &WittElement, max_n: usize) -> Result<FiniteProbe> {
    let mut span = Echelon::new();
    let mut cur = v.clone();
    for _ in 0..=max_n {
        if !span.insert(cur.to_row()) {
            return Ok(FiniteProbe::Finite(span.rank()));
        }
        cur = u.bracket(&cur)?;
    }
    Ok(FiniteProbe::Undecided)
}

/// Pairing preserved by the coefficient law, as a standalone check.
pub fn pairing_preserved(map: &GroupInducedMap, d: &DerivationVector, alpha: &[Q]) -> Result<bool> {
    let image = map.g.act_vector(alpha)?;
    let lhs = dot(&d.coeffs()[map.source.l1()..], alpha);
    let rhs = dot(&map.map_derivation(d).coeffs()[map.source.l1()..], &image);
    Ok(lhs == rhs)
}
