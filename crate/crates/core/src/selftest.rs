//! The acceptance suites, one [`Law`] per criterion, run on seeded samples
//! over every shape profile.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;

use crate::algebra::{joint_kernel_check, AlgebraElement, AlgebraParams, DerivationVector};
use crate::classify::{search_witness, verify_witness, witness_from_unimodular, Verdict};
use crate::error::{Error, Result};
use crate::filtration::{
    admissible, build_with_leading_term, leading_term, leading_term_attainable, level0_subspace,
    s_alpha_level0_basis,
};
use crate::lattice::Lattice;
use crate::morphisms::{
    derivation_kinds, find_leibniz_failure, group_induced_map, is_derivation_on, psi_map, rho_shift_target,
    shifts_to, CorruptedAd, DerivationHandle,
};
use crate::rational::{fmt_vec, is_zero_vec, qvec, sub_vec, Q};
use crate::sample::{self, Rng64, PROFILES};
use crate::text::{parse_algebra, parse_witt, print_algebra, print_witt};
use crate::witt::{dpq, dpq_expanded, span_reduce, WittElement};

/// Random cases per law and profile.
pub const CASES: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub criterion: u8,
    pub law: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub failure: Option<String>,
    pub notes: Vec<String>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {:<22} {status} ({} cases)", self.criterion, self.law, self.cases)?;
        if let Some(why) = &self.failure {
            write!(f, ": {why}")?;
        }
        Ok(())
    }
}

/// Accumulates case counts and the first failure.
#[derive(Debug, Default)]
pub struct Tally {
    pub cases: usize,
    pub failure: Option<String>,
    pub notes: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    pub fn note(&mut self, s: String) {
        self.notes.push(s);
    }
}

pub trait Law: Sync {
    fn criterion(&self) -> u8;
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn check(&self, seed: u64, tally: &mut Tally) -> Result<()>;

    fn run(&self, seed: u64) -> Outcome {
        let mut tally = Tally::default();
        if let Err(e) = self.check(seed, &mut tally) {
            if tally.failure.is_none() {
                tally.failure = Some(format!("error: {e}"));
            }
        }
        Outcome {
            criterion: self.criterion(),
            law: self.name(),
            passed: tally.failure.is_none(),
            cases: tally.cases,
            failure: tally.failure,
            notes: tally.notes,
        }
    }
}

/// Independent stream per law and profile, so suites can run in any order.
fn stream(seed: u64, criterion: u8, profile: usize) -> Rng64 {
    sample::rng(seed ^ (u64::from(criterion) << 32) ^ (profile as u64).wrapping_mul(0x9e37_79b9))
}

fn profiles(seed: u64, criterion: u8) -> impl Iterator<Item = (Rng64, Arc<AlgebraParams>)> {
    PROFILES.iter().enumerate().map(move |(k, &shape)| {
        let mut rng = stream(seed, criterion, k);
        let params = sample::params(&mut rng, shape);
        (rng, params)
    })
}

fn distinct_pair(rng: &mut Rng64, ell: usize) -> (usize, usize) {
    loop {
        let p = rng.gen_range(1..=ell);
        let q = rng.gen_range(1..=ell);
        if p != q {
            return (p, q);
        }
    }
}

struct DivergenceFree;
struct GeneratorOracle;
struct LieLaws;
struct Grading;
struct LevelZero;
struct LeadingTerms;
struct PsiAutomorphism;
struct DerivationLaws;
struct Classification;
struct JointKernel;
struct RoundTrip;

impl Law for DivergenceFree {
    fn criterion(&self) -> u8 {
        1
    }
    fn name(&self) -> &'static str {
        "divergence_free"
    }
    fn summary(&self) -> &'static str {
        "div(x^-rho D_pq(u)) = 0"
    }
    fn check(&self, seed: u64, t: &mut Tally) -> Result<()> {
        for (mut rng, params) in profiles(seed, 1) {
            let x = AlgebraElement::x(&params, crate::algebra::neg_rho(&params))?;
            for _ in 0..CASES {
                let (p, q) = distinct_pair(&mut rng, params.ell());
                let u = sample::algebra_monomial(&mut rng, &params).add(&sample::algebra_monomial(&mut rng, &params))?;
                let g = dpq(p, q, &u)?;
                let div = g.mul_algebra(&x)?.divergence();
                t.check(div.is_zero(), || format!("{:?}: D_{p},{q}({}) has divergence {}", params.shape(), print_algebra(&u), print_algebra(&div)));
            }
        }
        Ok(())
    }
}

impl Law for GeneratorOracle {
    fn criterion(&self) -> u8 {
        2
    }
    fn name(&self) -> &'static str {
        "generator_oracle"
    }
    fn summary(&self) -> &'static str {
        "D_pq agrees with the four-term expansion"
    }
    fn check(&self, seed: u64, t: &mut Tally) -> Result<()> {
        for (mut rng, params) in profiles(seed, 2) {
            for _ in 0..CASES {
                let (p, q) = distinct_pair(&mut rng, params.ell());
                let alpha = sample::alpha(&mut rng, &params);
                let ivec = sample::ivec(&mut rng, params.n_t(), sample::MAX_LEVEL);
                let u = AlgebraElement::monomial(&params, Q::from_integer(1.into()), alpha.clone(), ivec.clone())?;
                let ok = dpq(p, q, &u)? == dpq_expanded(&params, p, q, &alpha, &ivec)?;
                t.check(ok, || format!("{:?}: D_{p},{q}({}) differs from its expansion", params.shape(), print_algebra(&u)));
            }
        }
        Ok(())
    }
}

impl Law for LieLaws {
    fn criterion(&self) -> u8 {
        3
    }
    fn name(&self) -> &'static str {
        "lie_laws"
    }
    fn summary(&self) -> &'static str {
        "antisymmetry, Jacobi, closure of S"
    }
    fn check(&self, seed: u64, t: &mut Tally) -> Result<()> {
        for (mut rng, params) in profiles(seed, 3) {
            for _ in 0..CASES {
                let u = sample::s_element(&mut rng, &params, 2);
                let v = sample::s_element(&mut rng, &params, 2);
                let w = sample::s_element(&mut rng, &params, 1);
                let uv = u.bracket(&v)?;
                t.check(uv.add(&v.bracket(&u)?)?.is_zero(), || {
                    format!("{:?}: [u,v] + [v,u] != 0 for u = {}, v = {}", params.shape(), print_witt(&u), print_witt(&v))
                });
                let jac = u
                    .bracket(&v.bracket(&w)?)?
                    .add(&v.bracket(&w.bracket(&u)?)?)?
                    .add(&w.bracket(&uv)?)?;
                t.check(jac.is_zero(), || format!("{:?}: Jacobi fails, remainder {}", params.shape(), print_witt(&jac)));
                t.check(uv.is_in_s(), || format!("{:?}: [u,v] = {} not in S", params.shape(), print_witt(&uv)));
            }
        }
        Ok(())
    }
}

impl Law for Grading {
    fn criterion(&self) -> u8 {
        4
    }
    fn name(&self) -> &'static str {
        "grading"
    }
    fn summary(&self) -> &'static str {
        "[S_a, S_b] lies in S_(a+b)"
    }
    fn check(&self, seed: u64, t: &mut Tally) -> Result<()> {
        for (mut rng, params) in profiles(seed, 4) {
            for _ in 0..CASES {
                let a = sample::alpha(&mut rng, &params);
                let b = sample::alpha(&mut rng, &params);
                let u = sample::s_generator_at(&mut rng, &params, &a);
                let v = sample::s_generator_at(&mut rng, &params, &b);
                let sum = crate::rational::add_vec(&a, &b);
                let support = u.bracket(&v)?.support();
                t.check(support.iter().all(|d| *d == sum), || {
                    format!("{:?}: bracket of degrees {} and {} has support outside {}", params.shape(), fmt_vec(&a), fmt_vec(&b), fmt_vec(&sum))
                });
            }
        }
        Ok(())
    }
}

/// Brute-force generator level for the level-0 comparison.
const LEVEL0_LEVEL: u32 = 2;
const LEVEL0_RADIUS: i64 = 2;

impl Law for LevelZero {
    fn criterion(&self) -> u8 {
        5
    }
    fn name(&self) -> &'static str {
        "level_zero_basis"
    }
    fn summary(&self) -> &'static str {
        "x^alpha D_(alpha-rho) spans the level-0 part of S_alpha"
    }
    fn check(&self, seed: u64, t: &mut Tally) -> Result<()> {
        for (_, params) in profiles(seed, 5) {
            let mut ball = params.gamma().ball(LEVEL0_RADIUS);
            if !ball.contains(&params.rho().to_vec()) {
                ball.push(params.rho().to_vec());
            }
            for alpha in &ball {
                let formula = s_alpha_level0_basis(&params, alpha)?;
                let brute = level0_subspace(&params, alpha, LEVEL0_LEVEL)?;
                let r1 = span_reduce(&params, &formula)?.rank;
                let r2 = span_reduce(&params, &brute)?.rank;
                let joint: Vec<_> = formula.iter().chain(&brute).cloned().collect();
                let r12 = span_reduce(&params, &joint)?.rank;
                t.check(r1 == r2 && r1 == r12, || {
                    format!("{:?} at {}: ranks {r1} (formula), {r2} (brute force), {r12} (joint)", params.shape(), fmt_vec(alpha))
                });
                if alpha == params.rho() {
                    let (l1, l2, _) = params.shape();
                    let expected = match l1 + l2 {
                        0 => Some(0),
                        1 => Some(params.l3()),
                        _ => None,
                    };
                    if let Some(e) = expected {
                        t.check(r1 == e, || format!("{:?}: level-0 part at rho has rank {r1}, expected {e}", params.shape()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A direction in `D_(alpha - rho)` (or, now and then, an arbitrary one).
fn leading_direction(rng: &mut Rng64, params: &AlgebraParams, alpha: &[Q]) -> Result<DerivationVector> {
    let basis = params.d_alpha_basis(&sub_vec(alpha, params.rho()))?;
    if basis.is_empty() || rng.gen_bool(0.15) {
        return Ok(sample::derivation_vector(rng, params.ell()));
    }
    loop {
        let mut d = DerivationVector::zero(params.ell());
        for b in &basis {
            d = d.add(&b.scale(&Q::from_integer(rng.gen_range(-2..=2).into())));
        }
        if !d.is_zero() {
            return Ok(d);
        }
    }
}

/// Cases per profile cross-checked against exhaustive attainability.
const EXHAUSTIVE_CASES: usize = 10;

impl Law for LeadingTerms {
    fn criterion(&self) -> u8 {
        6
    }
    fn name(&self) -> &'static str {
        "leading_terms"
    }
    fn summary(&self) -> &'static str {
        "prescribed leading terms exist exactly when admissible"
    }
    fn check(&self, seed: u64, t: &mut Tally) -> Result<()> {
        let mut exhaustive = 0;
        for (mut rng, params) in profiles(seed, 6) {
            for case in 0..CASES {
                let alpha = if rng.gen_bool(0.5) {
                    params.rho().to_vec()
                } else {
                    sample::lattice_point(&mut rng, params.gamma(), 1)
                };
                let ivec = sample::ivec(&mut rng, params.n_t(), 2);
                let d = leading_direction(&mut rng, &params, &alpha)?;
                let adm = admissible(&params, &alpha, &ivec, &d)?;
                let what = || format!("{:?}: alpha {}, i {:?}, d {:?}", params.shape(), fmt_vec(&alpha), ivec, d.coeffs());
                match build_with_leading_term(&params, &alpha, &ivec, &d) {
                    Ok(u) => {
                        let lead = leading_term(&u, &alpha)?;
                        let degree: Vec<i64> = ivec.iter().map(|&e| i64::from(e)).collect();
                        let ok = adm
                            && u.is_in_s()
                            && u.support().iter().all(|b| *b == alpha)
                            && lead.degree == degree
                            && lead.direction == d;
                        t.check(ok, || format!("built element has the wrong leading term or leaves S_alpha: {}", what()));
                    }
                    Err(Error::AdmissibilityViolated(_) | Error::NotInDAlphaRho(_)) => {
                        t.check(!adm, || format!("admissible leading term was rejected: {}", what()));
                    }
                    Err(e) => return Err(e),
                }
                if case < EXHAUSTIVE_CASES {
                    exhaustive += 1;
                    let found = leading_term_attainable(&params, &alpha, &ivec, &d)?;
                    t.check(found == adm, || format!("exhaustive search says {found}, admissibility says {adm}: {}", what()));
                }
            }
        }
        t.note(format!("{exhaustive} cases cross-checked by exhaustive search"));
        Ok(())
    }
}

/// Elements checked per profile for the psi automorphism.
const PSI_CASES: usize = 100;

impl Law for PsiAutomorphism {
    fn criterion(&self) -> u8 {
        7
    }
    fn name(&self) -> &'static str {
        "psi_automorphism"
    }
    fn summary(&self) -> &'static str {
        "psi moves S(rho) onto S(rho') and preserves brackets"
    }
    fn check(&self, seed: u64, t: &mut Tally) -> Result<()> {
        for (mut rng, params) in profiles(seed, 7) {
            if params.l1() == 0 {
                t.note(format!("{:?}: no polynomial variables, psi not defined", params.shape()));
                continue;
            }
            let mut off_target = 0;
            for _ in 0..PSI_CASES {
                let rho2 = sample::lattice_point(&mut rng, params.gamma(), 2);
                let shifts = shifts_to(&params, &rho2)?;
                let u = sample::s_element(&mut rng, &params, 2);
                let v = sample::s_element(&mut rng, &params, 2);
                let (pu, pv) = (psi_map(&u, &shifts)?, psi_map(&v, &shifts)?);
                t.check(pu.params().rho() == &rho2[..] && pu.is_in_s(), || {
                    format!("{:?}: psi({}) is not in S for rho' = {}", params.shape(), print_witt(&u), fmt_vec(&rho2))
                });
                let lhs = psi_map(&u.bracket(&v)?, &shifts)?;
                t.check(lhs == pu.bracket(&pv)?, || format!("{:?}: psi does not preserve [{}, {}]", params.shape(), print_witt(&u), print_witt(&v)));

                let mut literal = vec![params.zero_alpha(); params.l1()];
                literal[0] = sub_vec(&rho2, params.rho());
                if !is_zero_vec(&literal[0]) {
                    let lands = rho_shift_target(&params, &literal)?;
                    if lands != rho2 {
                        off_target += 1;
                    }
                }
            }
            t.note(format!(
                "{:?}: shifts (rho' - rho, 0, ...) land away from rho' in {off_target} of {PSI_CASES} cases",
                params.shape()
            ));
        }
        Ok(())
    }
}

/// S-pairs per derivation kind and profile.
const PAIRS: usize = 100;
const HANDLES: usize = 10;

impl Law for DerivationLaws {
    fn criterion(&self) -> u8 {
        8
    }
    fn name(&self) -> &'static str {
        "derivation_laws"
    }
    fn summary(&self) -> &'static str {
        "every handle kind satisfies the Leibniz rule; a corrupted map does not"
    }
    fn check(&self, seed: u64, t: &mut Tally) -> Result<()> {
        for (mut rng, params) in profiles(seed, 8) {
            for kind in derivation_kinds() {
                let mut used = 0;
                for _ in 0..HANDLES {
                    let Some(h) = kind.sample(&params, &mut rng) else {
                        break;
                    };
                    let pairs: Vec<_> = (0..PAIRS / HANDLES)
                        .map(|_| (sample::s_element(&mut rng, &params, 2), sample::s_element(&mut rng, &params, 2)))
                        .collect();
                    for (u, v) in &pairs {
                        let ok = is_derivation_on(&h, &[(u.clone(), v.clone())])?;
                        t.check(ok, || format!("{:?}: {} handle fails on ({}, {})", params.shape(), kind.name(), print_witt(u), print_witt(v)));
                    }
                    used += 1;
                }
                if used == 0 {
                    t.note(format!("{:?}: {} does not apply", params.shape(), kind.name()));
                }
            }
        }
        let std = Arc::new(AlgebraParams::standard(0, 0, 3)?);
        let u = dpq(1, 2, &AlgebraElement::x(&std, qvec(&[1, 0, 0]))?)?;
        let bad = CorruptedAd { u, flipped: qvec(&[1, 1, 0]) };
        let candidates: Vec<WittElement> = std
            .gamma()
            .ball(1)
            .iter()
            .map(|a| crate::filtration::generators(&std, a, 0))
            .collect::<Result<Vec<_>>>()?
            .concat();
        let caught = find_leibniz_failure(&bad, &candidates)?;
        t.check(caught.is_some(), || "corrupted control passed the Leibniz check".into());
        let honest = DerivationHandle::inner(&bad.u)?;
        let clean = find_leibniz_failure(&honest, &candidates[..20])?;
        t.check(clean.is_none(), || "uncorrupted control failed the Leibniz check".into());
        Ok(())
    }
}

/// Round trips drawn for the decision layer.
const ROUND_TRIPS: usize = 203;
const SEARCH_BOUND: u32 = 3;
const LIFT_CASES: usize = 5;

impl Law for Classification {
    fn criterion(&self) -> u8 {
        9
    }
    fn name(&self) -> &'static str {
        "classification"
    }
    fn summary(&self) -> &'static str {
        "witness round trips, obstructions, induced maps"
    }
    fn check(&self, seed: u64, t: &mut Tally) -> Result<()> {
        let mut rng = stream(seed, 9, 0);
        for k in 0..ROUND_TRIPS {
            let shape = PROFILES[k % PROFILES.len()];
            let (l1, l2, l3) = shape;
            let source = sample::params(&mut rng, shape);
            let gamma2 = sample::lattice(&mut rng, l2 + l3);
            let u0 = sample::block_unimodular(&mut rng, l2, l3, 3);
            let g = witness_from_unimodular(source.gamma(), &gamma2, &u0, l2, l3)?;
            let rho2 = if l1 == 0 {
                g.act_vector(source.rho())?
            } else {
                sample::lattice_point(&mut rng, &gamma2, 1)
            };
            let target = Arc::new(AlgebraParams::new(l1, l2, l3, gamma2, rho2)?);
            t.check(verify_witness(&source, &target, &g)?, || format!("{shape:?}: drawn witness {g:?} does not verify"));
            let verdict = search_witness(&source, &target, SEARCH_BOUND)?;
            match verdict.witness() {
                Some(w) => t.check(verify_witness(&source, &target, w)?, || format!("{shape:?}: search returned an invalid witness")),
                None => t.check(false, || format!("{shape:?}: search missed a witness at bound {SEARCH_BOUND}: {verdict}")),
            }
            match group_induced_map(&source, &target, &g, seed ^ k as u64, LIFT_CASES) {
                Ok(_) => t.check(true, String::new),
                Err(Error::LiftValidationFailed(why)) if l2 > 0 => {
                    t.note(format!("{shape:?}: induced map failed validation: {why}"));
                }
                Err(e) => t.check(false, || format!("{shape:?}: induced map failed: {e}")),
            }
        }

        for shape in PROFILES.iter().copied().filter(|s| s.0 == 0) {
            let (_, l2, l3) = shape;
            let zero = Arc::new(AlgebraParams::new(0, l2, l3, Lattice::standard(l2 + l3), vec![Q::from_integer(0.into()); l2 + l3])?);
            let mut rho2 = zero.zero_alpha();
            rho2[l2 + l3 - 1] = Q::from_integer(BigInt::from(1));
            let moved = Arc::new(zero.with_rho(rho2)?);
            let v = search_witness(&zero, &moved, SEARCH_BOUND)?;
            t.check(matches!(v.verdict, Verdict::NotIsomorphic(_)), || format!("{shape:?}: rho = 0 vs rho' != 0 gave {v}"));
        }

        for (a, b) in [((0, 0, 3), (0, 1, 2)), ((1, 1, 1), (2, 0, 1)), ((3, 0, 0), (1, 0, 2))] {
            let pa = AlgebraParams::standard(a.0, a.1, a.2)?;
            let pb = AlgebraParams::standard(b.0, b.1, b.2)?;
            let v = search_witness(&pa, &pb, SEARCH_BOUND)?;
            t.check(matches!(v.verdict, Verdict::NotIsomorphic(_)) && v.details.is_empty(), || format!("{a:?} vs {b:?} gave {v}"));
        }
        Ok(())
    }
}

impl Law for JointKernel {
    fn criterion(&self) -> u8 {
        10
    }
    fn name(&self) -> &'static str {
        "joint_kernel"
    }
    fn summary(&self) -> &'static str {
        "the common kernel of d_1..d_l is the constants"
    }
    fn check(&self, seed: u64, t: &mut Tally) -> Result<()> {
        for (_, params) in profiles(seed, 10) {
            let ball = params.gamma().ball(1);
            t.check(joint_kernel_check(&params, 3, &ball), || format!("{:?}: kernel larger than the constants", params.shape()));
        }
        for (mut rng, params) in profiles(seed, 10) {
            for _ in 0..CASES {
                let mut f = AlgebraElement::one(&params).scale(&sample::coeff(&mut rng));
                for _ in 0..rng.gen_range(0..=2) {
                    f = f.add(&sample::algebra_monomial(&mut rng, &params))?;
                }
                let constant = f.terms().keys().all(|m| is_zero_vec(&m.alpha) && m.ivec.iter().all(|&e| e == 0));
                let mut killed = true;
                for p in 1..=params.ell() {
                    killed &= f.apply_basic_derivation(p)?.is_zero();
                }
                t.check(killed == constant, || format!("{:?}: {} killed = {killed}, constant = {constant}", params.shape(), print_algebra(&f)));
            }
        }
        Ok(())
    }
}

/// Random elements per profile for the round trip.
const ROUND_TRIP_CASES: usize = 80;

impl Law for RoundTrip {
    fn criterion(&self) -> u8 {
        11
    }
    fn name(&self) -> &'static str {
        "parse_print_round_trip"
    }
    fn summary(&self) -> &'static str {
        "parse(print(u)) = u and print is canonical"
    }
    fn check(&self, seed: u64, t: &mut Tally) -> Result<()> {
        for (mut rng, params) in profiles(seed, 11) {
            for _ in 0..ROUND_TRIP_CASES {
                let n = rng.gen_range(0..=3);
                let u = sample::witt_element(&mut rng, &params, n);
                let text = print_witt(&u);
                let back = parse_witt(&text, &params)?;
                t.check(back == u && print_witt(&back) == text, || format!("{:?}: round trip of {text} failed", params.shape()));
                let f = sample::algebra_monomial(&mut rng, &params).add(&sample::algebra_monomial(&mut rng, &params))?;
                let text = print_algebra(&f);
                let back = parse_algebra(&text, &params)?;
                t.check(back == f && print_algebra(&back) == text, || format!("{:?}: round trip of {text} failed", params.shape()));
            }
        }
        Ok(())
    }
}

static LAWS: [&dyn Law; 11] = [
    &DivergenceFree,
    &GeneratorOracle,
    &LieLaws,
    &Grading,
    &LevelZero,
    &LeadingTerms,
    &PsiAutomorphism,
    &DerivationLaws,
    &Classification,
    &JointKernel,
    &RoundTrip,
];

pub fn laws() -> &'static [&'static dyn Law] {
    &LAWS
}

/// Looks a law up by criterion number or by name.
pub fn find_law(key: &str) -> Option<&'static dyn Law> {
    let key = key.trim().replace('-', "_");
    LAWS.iter()
        .copied()
        .find(|l| l.name() == key || key.parse::<u8>().map_or(false, |n| n == l.criterion()))
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    LAWS.iter().map(|l| l.run(seed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        assert_eq!(find_law("7").unwrap().name(), "psi_automorphism");
        assert_eq!(find_law("joint-kernel").unwrap().criterion(), 10);
        assert!(find_law("12").is_none());
        let numbers: Vec<u8> = laws().iter().map(|l| l.criterion()).collect();
        assert_eq!(numbers, (1..=11).collect::<Vec<_>>());
    }

    #[test]
    fn tally_keeps_first_failure() {
        let mut t = Tally::default();
        t.check(true, || "a".into());
        t.check(false, || "b".into());
        t.check(false, || "c".into());
        assert_eq!((t.cases, t.failure.as_deref()), (3, Some("b")));
        assert!(t.failed());
    }
}
