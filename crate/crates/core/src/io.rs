//! JSON documents. Rationals are written as strings (`"-5/2"`) so nothing
//! passes through floating point; on input integers are accepted as numbers.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::chain::{Chain, ChainError};
use crate::cospec::{CospectralCertificate, Evidence};
use crate::opsbuild::BuildCertificate;
use crate::poly::{format_rational, parse_rational, Poly, PolyError, Rational};
use crate::pst::{PstBuild, PstCertificate, PstInterpolant};
use crate::pte::{PteChain, PteSolution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("field {field:?}: {reason}")]
    Field { field: String, reason: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

fn field_err(field: &str, reason: impl Into<String>) -> IoError {
    IoError::Field { field: field.to_string(), reason: reason.into() }
}

pub fn parse_json(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

/// A rational from a string such as `"3/4"` or from a JSON integer.
pub fn rational_from(v: &Value) -> Result<Rational, IoError> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) if n.is_i64() => Ok(crate::poly::int(n.as_i64().unwrap())),
        Value::Number(n) => Err(field_err("value", format!("{n} is not exact; write it as a string \"p/q\""))),
        other => Err(field_err("value", format!("expected a rational, got {other}"))),
    }
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, IoError> {
    v.get(key).ok_or_else(|| field_err(key, "missing"))
}

fn rational_list(v: &Value, key: &str) -> Result<Vec<Rational>, IoError> {
    get(v, key)?
        .as_array()
        .ok_or_else(|| field_err(key, "expected an array"))?
        .iter()
        .map(rational_from)
        .collect()
}

fn int_list(v: &Value, key: &str) -> Result<Vec<i64>, IoError> {
    get(v, key)?
        .as_array()
        .ok_or_else(|| field_err(key, "expected an array"))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| field_err(key, format!("{x} is not an integer"))))
        .collect()
}

/// `{"coeffs": [...], "text": ...}` with coefficients lowest degree first.
pub fn poly_json(p: &Poly) -> Value {
    json!({ "coeffs": rationals_json(p.coeffs()), "text": p.to_string() })
}

/// Accepts `{"coeffs": [...]}`, `{"roots": [...]}` (monic) or a bare
/// coefficient array.
pub fn poly_from(v: &Value) -> Result<Poly, IoError> {
    if let Value::Array(items) = v {
        return Ok(Poly::new(items.iter().map(rational_from).collect::<Result<_, _>>()?));
    }
    if v.get("coeffs").is_some() {
        return Ok(Poly::new(rational_list(v, "coeffs")?));
    }
    if v.get("roots").is_some() {
        return Ok(Poly::from_roots(&rational_list(v, "roots")?));
    }
    Err(field_err("coeffs", "expected coeffs, roots or a coefficient array"))
}

pub fn chain_json(c: &Chain) -> Value {
    json!({ "d": c.d(), "a": rationals_json(c.a()), "lambda_sq": rationals_json(c.lambda_sq()) })
}

pub fn chain_from(v: &Value) -> Result<Chain, IoError> {
    let a = rational_list(v, "a")?;
    let lambda_sq = match v.get("lambda_sq") {
        Some(_) => rational_list(v, "lambda_sq")?,
        None => Vec::new(),
    };
    Ok(Chain::new(a, lambda_sq)?)
}

pub fn pte_json(s: &PteSolution) -> Value {
    json!({ "n": s.n(), "E": s.e(), "F": s.f(), "class": s.class().name() })
}

/// The two sets of a solution document; validity is checked separately.
pub fn pte_sets_from(v: &Value) -> Result<(Vec<i64>, Vec<i64>), IoError> {
    Ok((int_list(v, "E")?, int_list(v, "F")?))
}

pub fn build_certificate_json(b: &BuildCertificate) -> Value {
    json!({
        "m": b.m,
        "d": b.d,
        "q_m": poly_json(&b.q_m),
        "q_top": poly_json(&b.q_top),
        "spectrum": rationals_json(&b.spectrum),
        "common_zeros": b.j,
        "mu": rationals_json(&b.mu),
        "q_hat": poly_json(&b.q_hat),
        "lambda": rational_json(&b.lambda),
        "rho": rationals_json(&b.rho),
        "tau": rationals_json(&b.tau),
        "q_d": poly_json(&b.q_d),
        "chain": chain_json(&b.chain),
        "verified": b.verify(),
    })
}

pub fn cospectral_json(c: &CospectralCertificate) -> Value {
    let mut out = Map::new();
    out.insert("l".into(), json!(c.l));
    out.insert("m".into(), json!(c.m));
    out.insert("scale_sq".into(), rational_json(&c.scale_sq));
    out.insert("scale".into(), c.scale().map_or(Value::Null, |s| rational_json(&s)));
    match &c.evidence {
        Evidence::Exact { deleted_charpoly } => {
            out.insert("evidence".into(), json!("exact"));
            out.insert("deleted_charpoly".into(), poly_json(deleted_charpoly));
        }
        Evidence::Numeric { table, max_deviation } => {
            out.insert("evidence".into(), json!("numeric"));
            out.insert("max_deviation".into(), json!(max_deviation));
            let rows: Vec<Value> = table.iter().map(|(t, x, y)| json!([t, x, y])).collect();
            out.insert("table".into(), Value::Array(rows));
        }
    }
    Value::Object(out)
}

pub fn pst_certificate_json(c: &PstCertificate) -> Value {
    let rows: Vec<Value> = c
        .rows
        .iter()
        .map(|r| {
            json!({
                "theta": rational_json(&r.theta),
                "normalized": r.normalized.to_string(),
                "p_l": rational_json(&r.p_l),
                "p_m": rational_json(&r.p_m),
                "parity": r.parity.symbol().to_string(),
            })
        })
        .collect();
    json!({
        "l": c.l,
        "m": c.m,
        "C": rational_json(&c.c),
        "orientation": c.orientation.symbol().to_string(),
        "shift": rational_json(&c.normalization.shift),
        "unit": rational_json(&c.normalization.unit),
        "time": c.time,
        "fidelity": c.fidelity,
        "phase": c.phase,
        "rows": rows,
    })
}

pub fn pst_interpolant_json(p: &PstInterpolant) -> Value {
    json!({
        "spectrum": p.spectrum,
        "m": p.m,
        "p_m": poly_json(&p.p_m),
        "C": rational_json(&p.c),
    })
}

pub fn pst_build_json(b: &PstBuild) -> Value {
    json!({
        "interpolant": pst_interpolant_json(&b.interpolant),
        "chain": chain_json(&b.build.chain),
        "certificate": pst_certificate_json(&b.certificate),
    })
}

pub fn pte_chain_json(p: &PteChain) -> Value {
    json!({
        "solution": pte_json(&p.solution),
        "d": p.d,
        "m": p.m,
        "xi": p.xi,
        "spectrum": p.spectrum,
        "p_m": poly_json(&p.p_m),
        "chain": chain_json(p.chain()),
        "cospectral": cospectral_json(&p.cospectral),
    })
}
