use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use divfree_core::algebra::{AlgebraParams, DerivationVector};
use divfree_core::classify::{search_witness, structure_descriptor, verify_witness, IsoVerdict, Verdict};
use divfree_core::filtration::{build_with_leading_term, leading_term, LeadingDataJson};
use divfree_core::lattice::{GroupElement, GroupElementJson, Lattice, LatticeJson};
use divfree_core::morphisms::{
    derivation_kinds, find_kind, is_derivation_on, nilpotency_probe, psi_map, shifts_to, AdditiveCharacter, NilProbe,
};
use divfree_core::rational::{fmt_vec, from_rats, to_rats, Q, Rat};
use divfree_core::selftest::{find_law, laws, Outcome};
use divfree_core::text::{parse_algebra, parse_vector, parse_witt, print_algebra, print_witt};
use divfree_core::witt::{dpq, WittElement};
use divfree_core::{sample, Error, Result};
use serde_json::{json, Value};

use crate::args::{AlgebraArgs, Cli, Command, TargetArgs};

pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

/// Text for humans or a JSON document, chosen by `--json`.
fn emit(json: bool, text: String, value: Value) -> String {
    if json {
        format!("{value}\n")
    } else {
        text
    }
}

fn parse_shape(s: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::InvalidParams(format!("expected L1,L2,L3, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let n: Vec<usize> = parts.iter().map(|p| p.parse().map_err(|_| bad())).collect::<Result<_>>()?;
    Ok((n[0], n[1], n[2]))
}

/// Arity of the first `x[...]` factor among the arguments.
fn x_arity(texts: &[&str]) -> Option<usize> {
    texts.iter().find_map(|t| {
        let start = t.find("x[")? + 2;
        let end = start + t[start..].find(']')?;
        Some(t[start..end].split(',').count())
    })
}

fn read_lattice(path: &Path, dim: usize) -> Result<Lattice> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidParams(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)?;
    let j: LatticeJson = if value.is_array() {
        LatticeJson {
            dim,
            basis: serde_json::from_value::<Vec<Vec<Rat>>>(value)?,
        }
    } else {
        serde_json::from_value(value)?
    };
    if j.dim != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: j.dim });
    }
    Lattice::try_from(j)
}

fn build_params(
    shape: Option<&str>,
    rho: Option<&str>,
    gamma: Option<&Path>,
    fallback: (usize, usize, usize),
) -> Result<AlgebraParams> {
    let (l1, l2, l3) = shape.map(parse_shape).transpose()?.unwrap_or(fallback);
    let n = l2 + l3;
    let gamma = match gamma {
        Some(path) => read_lattice(path, n)?,
        None => Lattice::standard(n),
    };
    let rho = match rho {
        Some(r) if !r.trim().is_empty() => parse_vector(r)?,
        _ => vec![Q::default(); n],
    };
    AlgebraParams::new(l1, l2, l3, gamma, rho)
}

fn source_params(a: &AlgebraArgs, texts: &[&str]) -> Result<Arc<AlgebraParams>> {
    let fallback = (0, 0, x_arity(texts).unwrap_or(3));
    build_params(a.params.as_deref(), a.rho.as_deref(), a.gamma_gens.as_deref(), fallback).map(Arc::new)
}

fn target_params(source: &AlgebraArgs, t: &TargetArgs, src: &AlgebraParams) -> Result<Arc<AlgebraParams>> {
    let shape = t.target_params.as_deref().or(source.params.as_deref());
    let rho = t.target_rho.as_deref().or(source.rho.as_deref());
    let gamma = t.target_gamma_gens.as_deref().or(source.gamma_gens.as_deref());
    build_params(shape, rho, gamma, src.shape()).map(Arc::new)
}

fn parse_ivec(s: &str) -> Result<Vec<u32>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| p.trim().parse().map_err(|_| Error::Arity(format!("bad exponent {p:?}"))))
        .collect()
}

fn witt_json(u: &WittElement) -> Value {
    json!({"text": print_witt(u), "terms": u.to_json()})
}

fn bool_out(json: bool, key: &str, b: bool) -> String {
    emit(json, format!("{b}\n"), json!({ key: b }))
}

fn verdict_output(json: bool, v: &IsoVerdict) -> Output {
    let j = serde_json::to_value(v.to_json()).expect("serializable");
    let mut text = format!("{}\n", v.status());
    match &v.verdict {
        Verdict::IsomorphicWithWitness(g) => {
            let _ = writeln!(text, "witness: {}", serde_json::to_string(&GroupElementJson::from(g)).expect("serializable"));
        }
        Verdict::NotIsomorphic(reason) => {
            let _ = writeln!(text, "reason: {reason}");
        }
        Verdict::Unknown { bound } => {
            let _ = writeln!(text, "no witness with entries up to {bound}");
        }
    }
    for d in &v.details {
        let _ = writeln!(text, "  {d}");
    }
    Output {
        stdout: emit(json, text, j),
        code: v.exit_code() as u8,
    }
}

fn read_witness(spec: &str, params: &AlgebraParams) -> Result<GroupElement> {
    if spec == "identity" {
        return Ok(GroupElement::identity(params.l2(), params.l3()));
    }
    let text = if Path::new(spec).exists() {
        fs::read_to_string(spec).map_err(|e| Error::InvalidParams(format!("cannot read {spec}: {e}")))?
    } else {
        spec.to_string()
    };
    let j: GroupElementJson = serde_json::from_str(&text)?;
    GroupElement::try_from(j)
}

fn selftest(json: bool, seed: u64, only: &[String]) -> Result<Output> {
    let chosen = if only.is_empty() {
        laws().to_vec()
    } else {
        only.iter()
            .map(|k| find_law(k).ok_or_else(|| Error::InvalidParams(format!("no suite named {k:?}"))))
            .collect::<Result<Vec<_>>>()?
    };
    let outcomes: Vec<Outcome> = chosen.iter().map(|l| l.run(seed)).collect();
    let passed = outcomes.iter().all(|o| o.passed);
    let mut text = String::new();
    for o in &outcomes {
        let _ = writeln!(text, "{o}");
        for n in &o.notes {
            let _ = writeln!(text, "    note: {n}");
        }
    }
    let _ = writeln!(
        text,
        "{} of {} suites passed (seed {seed})",
        outcomes.iter().filter(|o| o.passed).count(),
        outcomes.len()
    );
    let value = json!({"seed": seed, "passed": passed, "suites": outcomes});
    Ok(Output {
        stdout: emit(json, text, value),
        code: if passed { 0 } else { 1 },
    })
}

pub fn run(cli: Cli) -> Result<Output> {
    let json = cli.json;
    let a = &cli.algebra;
    match &cli.command {
        Command::Bracket { u, v } => {
            let params = source_params(a, &[u, v])?;
            let r = parse_witt(u, &params)?.bracket(&parse_witt(v, &params)?)?;
            Ok(Output::ok(emit(json, format!("{}\n", print_witt(&r)), witt_json(&r))))
        }
        Command::Div { u } => {
            let params = source_params(a, &[u])?;
            let d = parse_witt(u, &params)?.divergence();
            let text = print_algebra(&d);
            Ok(Output::ok(emit(json, format!("{text}\n"), json!({"text": text, "terms": d.to_json()}))))
        }
        Command::InS { u } => {
            let params = source_params(a, &[u])?;
            Ok(Output::ok(bool_out(json, "in_s", parse_witt(u, &params)?.is_in_s())))
        }
        Command::Dpq { p, q, f } => {
            let params = source_params(a, &[f])?;
            let r = dpq(*p, *q, &parse_algebra(f, &params)?)?;
            Ok(Output::ok(emit(json, format!("{}\n", print_witt(&r)), witt_json(&r))))
        }
        Command::Grade { u } => {
            let params = source_params(a, &[u])?;
            let parts = parse_witt(u, &params)?.grade_decompose();
            let mut text = String::new();
            let mut list = Vec::new();
            for (alpha, part) in &parts {
                let _ = writeln!(text, "{}: {}", fmt_vec(alpha), print_witt(part));
                list.push(json!({"degree": to_rats(alpha), "element": witt_json(part)}));
            }
            if parts.is_empty() {
                text.push_str("0\n");
            }
            Ok(Output::ok(emit(json, text, Value::Array(list))))
        }
        Command::Lead { u, alpha } => {
            let params = source_params(a, &[u])?;
            let lead = leading_term(&parse_witt(u, &params)?, &parse_vector(alpha)?)?;
            let text = format!(
                "degree {:?} level {} direction {}\n",
                lead.degree,
                lead.level,
                fmt_vec(lead.direction.coeffs())
            );
            let j = serde_json::to_value(LeadingDataJson::from(&lead))?;
            Ok(Output::ok(emit(json, text, j)))
        }
        Command::BuildLead { alpha, ivec, direction } => {
            let alpha = parse_vector(alpha)?;
            let fallback = [format!("x[{}]", vec!["0"; alpha.len()].join(","))];
            let params = source_params(a, &[&fallback[0]])?;
            let d = DerivationVector::new(parse_vector(direction)?);
            let u = build_with_leading_term(&params, &alpha, &parse_ivec(ivec)?, &d)?;
            Ok(Output::ok(emit(json, format!("{}\n", print_witt(&u)), witt_json(&u))))
        }
        Command::Psi { u, shifts, to_rho } => {
            let params = source_params(a, &[u])?;
            let shifts = match (shifts, to_rho) {
                (Some(s), _) => s.split(';').map(parse_vector).collect::<Result<Vec<_>>>()?,
                (None, Some(r)) => shifts_to(&params, &parse_vector(r)?)?,
                (None, None) => return Err(Error::InvalidParams("psi needs --shifts or --to-rho".into())),
            };
            let image = psi_map(&parse_witt(u, &params)?, &shifts)?;
            let rho = image.params().rho();
            let text = format!("{}\nrho' = {}\n", print_witt(&image), fmt_vec(rho));
            let mut j = witt_json(&image);
            j["rho"] = json!(to_rats(rho));
            Ok(Output::ok(emit(json, text, j)))
        }
        Command::DeriveCheck { kind, element, mu, pairs } => {
            let texts: Vec<&str> = element.iter().map(String::as_str).collect();
            let params = source_params(a, &texts)?;
            let k = find_kind(kind).ok_or_else(|| {
                let names: Vec<&str> = derivation_kinds().iter().map(|k| k.name()).collect();
                Error::InvalidHandle(format!("unknown kind {kind:?}; expected one of {}", names.join(", ")))
            })?;
            let u = element.as_deref().map(|e| parse_witt(e, &params)).transpose()?;
            let mu = mu
                .as_deref()
                .map(|m| AdditiveCharacter::new(params.gamma(), parse_vector(m)?))
                .transpose()?;
            let handle = k.build(&params, u.as_ref(), mu.as_ref())?;
            let mut rng = sample::rng(cli.seed);
            let sampled: Vec<_> = (0..*pairs)
                .map(|_| (sample::s_element(&mut rng, &params, 2), sample::s_element(&mut rng, &params, 2)))
                .collect();
            let ok = is_derivation_on(&handle, &sampled)?;
            let text = format!("{ok}\n");
            Ok(Output::ok(emit(json, text, json!({"kind": k.name(), "pairs": pairs, "derivation": ok}))))
        }
        Command::Nilprobe { u, v, max_n } => {
            let params = source_params(a, &[u, v])?;
            let r = nilpotency_probe(&parse_witt(u, &params)?, &parse_witt(v, &params)?, *max_n)?;
            let (text, j) = match r {
                NilProbe::NilpotentAt(n) => (format!("nilpotent_at {n}\n"), json!({"status": "nilpotent_at", "n": n})),
                NilProbe::Undecided => ("undecided\n".to_string(), json!({"status": "undecided", "max_n": max_n})),
            };
            Ok(Output::ok(emit(json, text, j)))
        }
        Command::IsoVerify { target, witness } => {
            let source = source_params(a, &[])?;
            let target = target_params(a, target, &source)?;
            let g = read_witness(witness, &source)?;
            let v = if verify_witness(&source, &target, &g)? {
                IsoVerdict {
                    verdict: Verdict::IsomorphicWithWitness(g),
                    details: vec![],
                }
            } else {
                IsoVerdict {
                    verdict: Verdict::NotIsomorphic("the given group element is not a witness".into()),
                    details: vec![],
                }
            };
            Ok(verdict_output(json, &v))
        }
        Command::IsoSearch { target, bound } => {
            let source = source_params(a, &[])?;
            let target = target_params(a, target, &source)?;
            Ok(verdict_output(json, &search_witness(&source, &target, *bound)?))
        }
        Command::Descriptor => {
            let params = source_params(a, &[])?;
            let d = structure_descriptor(&params);
            let mut text = format!("shape ({},{},{})\n", d.l1, d.l2, d.l3);
            for b in d.gamma.basis() {
                let _ = writeln!(text, "basis {}", fmt_vec(b));
            }
            if let Some(rho) = &d.rho {
                let _ = writeln!(text, "rho {}", fmt_vec(&from_rats(rho.clone())));
            }
            Ok(Output::ok(emit(json, text, serde_json::to_value(&d)?)))
        }
        Command::Selftest { only } => selftest(json, cli.seed, only),
    }
}
