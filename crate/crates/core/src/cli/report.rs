//! JSON reports. Keys come out sorted because `serde_json::Map` is a
//! `BTreeMap`; sizes that can outgrow `u64` are decimal strings.

use serde_json::{json, Map, Value};

use crate::code::{AdditiveCode, Distance, SymplecticVector};
use crate::decomp::{level_ranks, rho_profile, verify_prop_count, HyperbolicDecomposition};
use crate::error::Error;
use crate::extension::{Analysis, DistanceCase, EaqeccParams, SelfOrthogonalExtension};
use crate::pauli::{DistanceConvention, ErrorSearch};
use crate::Result;

pub const SCHEMA: u64 = 1;

pub fn vector(v: &SymplecticVector) -> Value {
    let parts: Vec<String> = v.to_flat().iter().map(|e| e.to_string()).collect();
    Value::String(parts.join(" "))
}

pub fn distance(d: Option<Distance>) -> Value {
    match d {
        Some(Distance::Finite(w)) => json!(w),
        Some(Distance::Infinite) => json!("Infinite"),
        None => json!("Unknown"),
    }
}

fn case_name(c: DistanceCase) -> &'static str {
    match c {
        DistanceCase::DualInCode => "dual-in-code",
        DistanceCase::DualMinusCode => "dual-minus-code",
    }
}

pub fn code_block(code: &AdditiveCode) -> Value {
    json!({
        "cardinality": code.cardinality().to_string(),
        "log_p_cardinality": code.log_cardinality(),
        "rank": code.rank(),
        "free": code.is_free(),
        "generators": code.canonical_generators().iter().map(vector).collect::<Vec<_>>(),
    })
}

/// Fields shared by every report.
pub fn header(command: &str, code: &AdditiveCode) -> Map<String, Value> {
    let ring = code.ring();
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert(
        "ring".into(),
        json!({
            "p": ring.p(),
            "b": ring.b(),
            "m": ring.m(),
            "h": ring.h(),
            "size": ring.size().to_string(),
        }),
    );
    m.insert("n".into(), json!(code.n()));
    m.insert("code".into(), code_block(code));
    m
}

pub fn params_block(p: &EaqeccParams, d: &HyperbolicDecomposition) -> Value {
    json!({
        "n": p.n,
        "c_min": p.c,
        "rho": p.rho,
        "K_exact": p.k_exact().to_string(),
        "K_upper": p.k_upper().to_string(),
        "K_lower": p.k_lower_reported().to_string(),
        "K_lower_raw": p.k_lower().to_string(),
        "D": distance(p.distance.value),
        "D_case": case_name(p.distance.case),
        "D_searched": p.distance.searched.to_string(),
        "card_code": num_bigint::BigUint::from(p.p).pow(p.log_code).to_string(),
        "card_extended": num_bigint::BigUint::from(p.p).pow(p.log_extended).to_string(),
        "decomposition": {
            "pairs": d.c(),
            "isotropic": d.isotropic().len(),
            "gamma_exponents": d.exponents(),
        },
    })
}

pub fn decomposition_block(code: &AdditiveCode, d: &HyperbolicDecomposition) -> Result<Value> {
    let ring = code.ring();
    let pairs: Vec<Value> = d
        .pairs()
        .iter()
        .zip(d.pair_vectors())
        .map(|(p, (u, v))| {
            json!({
                "first": vector(&u),
                "second": vector(&v),
                "gamma": p.gamma.to_string(),
                "exponent": p.exponent,
            })
        })
        .collect();
    let prop: Vec<bool> = (0..=ring.b())
        .map(|t| verify_prop_count(d, code, t))
        .collect::<Result<_>>()?;
    Ok(json!({
        "c": d.c(),
        "pairs": pairs,
        "isotropic": d.isotropic_vectors().iter().map(vector).collect::<Vec<_>>(),
        "rho": rho_profile(code)?,
        "level_ranks": level_ranks(code)?,
        "prop_count_holds": prop,
        "verified": d.verify().is_ok(),
    }))
}

pub fn extension_block(e: &SelfOrthogonalExtension) -> Value {
    json!({
        "c": e.c(),
        "n": e.extended().n(),
        "cardinality": e.card_extended().to_string(),
        "generators": e.extended().canonical_generators().iter().map(vector).collect::<Vec<_>>(),
        "self_orthogonal": e.extended().is_chi_self_orthogonal(),
        "preserves_cardinality": e.preserves_cardinality(),
        "verified": e.verify().is_ok(),
    })
}

pub fn structure_block(a: &Analysis) -> Value {
    json!({
        "decomposition": a.decomposition.verify().is_ok(),
        "extension": a.extension.verify().is_ok(),
    })
}

pub fn search_block(s: &ErrorSearch, theory: Option<Distance>, k_exact: &num_bigint::BigUint) -> Value {
    let convention = match s.convention {
        DistanceConvention::Undetectable => "undetectable",
        DistanceConvention::NonzeroCompression => "nonzero-compression",
    };
    json!({
        "status": "ok",
        "projector_dimension": s.dimension,
        "K_matches": num_bigint::BigUint::from(s.dimension) == *k_exact,
        "errors_checked": s.errors_checked,
        "undetectable": s.undetectable,
        "undetectable_set_matches": s.matches_theory(),
        "D_matrix": distance(Some(s.distance)),
        "D_convention": convention,
        "D_matches": theory.map(|d| d == s.distance),
    })
}

pub fn skipped(e: &Error) -> Value {
    json!({ "status": "skipped", "reason": e.kind(), "message": e.to_string() })
}

pub fn error_report(command: &str, e: &Error) -> Value {
    let mut err = Map::new();
    err.insert("kind".into(), json!(e.kind()));
    err.insert("message".into(), json!(e.to_string()));
    if let Error::Parse { line, column, .. } | Error::Range { line, column, .. } = e {
        err.insert("line".into(), json!(line));
        err.insert("column".into(), json!(column));
    }
    json!({ "schema": SCHEMA, "command": command, "error": err })
}
