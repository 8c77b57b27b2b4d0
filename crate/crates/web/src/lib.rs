//! Browser bindings. Each export takes plain strings and numbers and
//! returns a JSON string; failures come back as `{"error": "..."}`.
//!
//! Vectors are written as sums of basis terms, indices 1-based:
//! `e[1,2] - 3/2 e[3,4] + e[5,6]`.

use plueckerlab::bundle_pairs::{search_plucker_form, DivisorReport};
use plueckerlab::grassmann::classify_small_m;
use plueckerlab::{
    det_map_rank, diagonal_factor_check, diagonal_multiplicity, eval_form, is_decomposable, make_pair,
    multiplicity_at, plucker_relations_hold, theorem31_classify, Error, ExteriorVector, Field, FieldElement,
    PointTuple,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest ambient dimension accepted from the page; tangent systems grow
/// quickly past this.
pub const MAX_N: usize = 12;

fn field(tag: &str) -> Result<Field, String> {
    match tag {
        "q" => Ok(Field::Rational),
        "fp" => Ok(Field::FP),
        other => Err(format!("unknown field {other:?}, expected q or fp")),
    }
}

fn scalar(field: Field, text: &str) -> Result<FieldElement, String> {
    let parse = |s: &str| s.parse::<i64>().map_err(|_| format!("bad coefficient {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => field.from_ratio(parse(n)?, parse(d)?).map_err(|e| e.to_string()),
        None => Ok(field.from_i64(parse(text)?)),
    }
}

/// Parses `c e[i,j,…] ± …` into a vector of `∧^r` of an `n`-dimensional space.
pub fn parse_vector(text: &str, n: usize, field: Field) -> Result<ExteriorVector, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if compact.is_empty() {
        return Err("empty vector".into());
    }
    let mut acc: Option<ExteriorVector> = None;
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ if acc.is_none() => (1, rest),
            _ => return Err(format!("expected + or - before {rest:?}")),
        };
        let open = body.find("e[").ok_or_else(|| format!("expected e[...] in {body:?}"))?;
        let close = body.find(']').ok_or("missing ]")?;
        let coef = match &body[..open] {
            "" => field.one(),
            c => scalar(field, c)?,
        };
        let idx = body[open + 2..close]
            .split(',')
            .map(|s| s.parse::<usize>().map_err(|_| format!("bad index {s:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        let term = ExteriorVector::basis(field, n, &idx).map_err(|e| e.to_string())?;
        let term = term.scale(&(&coef * &field.from_i64(sign)));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term).map_err(|e| e.to_string())?,
        });
        rest = &body[close + 1..];
    }
    Ok(acc.expect("nonempty input"))
}

fn check_n(n: usize) -> Result<(), String> {
    if n == 0 || n > MAX_N {
        return Err(format!("dimension must be between 1 and {MAX_N}"));
    }
    Ok(())
}

/// Decomposability of `w` by the Plücker relations, and the verdict of the
/// form-based classifier on its diagonal point when `n / deg w >= 2`.
pub fn classify(text: &str, n: usize, field_tag: &str) -> Result<Value, String> {
    check_n(n)?;
    let w = parse_vector(text, n, field(field_tag)?)?;
    if w.is_zero() {
        return Err(Error::ZeroVector.to_string());
    }
    let r = w.degree();
    let mut out = json!({
        "degree": r,
        "terms": w.len(),
        "decomposable": is_decomposable(&w).map_err(|e| e.to_string())?,
        "relations_hold": plucker_relations_hold(&w).map_err(|e| e.to_string())?,
    });
    if r > 0 && n % r == 0 && n / r >= 2 {
        let m = n / r;
        let verdict = if m >= 3 { theorem31_classify(&w) } else { classify_small_m(&w) };
        let verdict = verdict.map_err(|e| e.to_string())?;
        out["m"] = json!(m);
        // at m = 2 every point of multiplicity 1 has codimension 1
        out["membership_test"] = json!(m >= 3);
        out["diagonal_multiplicity"] = json!(diagonal_multiplicity(&w).map_err(|e| e.to_string())?);
        out["verdict"] = json!(verdict.tag.to_string());
        out["observed_codim"] = json!(verdict.observed_codim);
        out["threshold"] = json!(verdict.threshold);
    }
    Ok(out)
}

/// Value and multiplicity of the form at a tuple given one slot per line.
pub fn form_at(slots: &str, r: usize, field_tag: &str) -> Result<Value, String> {
    let field = field(field_tag)?;
    let lines: Vec<&str> = slots.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let m = lines.len();
    check_n(r * m)?;
    let vecs = lines
        .iter()
        .map(|l| parse_vector(l, r * m, field))
        .collect::<Result<Vec<_>, _>>()?;
    let p = PointTuple::new(r, m, vecs).map_err(|e| e.to_string())?;
    Ok(json!({
        "r": r,
        "m": m,
        "value": eval_form(&p).token(),
        "multiplicity": multiplicity_at(&p),
    }))
}

/// Determinant divisor of the monomial pair with the given splitting type.
pub fn divisor(splitting: &str, m: usize, trials: usize, seed: u64) -> Result<Value, String> {
    let split = splitting
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| format!("bad degree {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let pair = make_pair(&split, m, Field::FP).map_err(|e| e.to_string())?;
    if pair.r() * m > MAX_N {
        return Err(format!("rm must be at most {MAX_N}"));
    }
    let trials = trials.clamp(1, 500);
    let search = search_plucker_form(&pair, 20, seed).map_err(|e| e.to_string())?;
    let report = match diagonal_factor_check(&pair, trials, seed) {
        Err(Error::IdenticallyZero) => DivisorReport::identically_zero(pair.field(), trials),
        other => other.map_err(|e| e.to_string())?,
    };
    Ok(json!({
        "r": pair.r(),
        "m": m,
        "balanced": pair.is_balanced(),
        "has_plucker_form": search.exists,
        "failure_bound": search.failure_bound,
        "det_map_rank": det_map_rank(&pair),
        "report": serde_json::to_value(&report).expect("report serializes"),
    }))
}

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

#[wasm_bindgen(js_name = classifyVector)]
pub fn classify_vector(text: &str, n: usize, field: &str) -> String {
    respond(classify(text, n, field))
}

#[wasm_bindgen(js_name = evaluateForm)]
pub fn evaluate_form(slots: &str, r: usize, field: &str) -> String {
    respond(form_at(slots, r, field))
}

#[wasm_bindgen(js_name = checkDivisor)]
pub fn check_divisor(splitting: &str, m: usize, trials: usize, seed: u32) -> String {
    respond(divisor(splitting, m, trials, seed as u64))
}
