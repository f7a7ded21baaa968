//! Versioned JSON reports and their plain-text rendering.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::clifford::CliffordCtx;
use crate::field::Scalar;
use crate::groups::GroupElement;
use crate::reality::{InvolutionPair, RealityCertificate};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub field: String,
    pub form: String,
    pub seed: Option<u64>,
    pub passed: bool,
    pub body: Value,
}

impl Report {
    pub fn new(
        command: &str,
        field: String,
        form: String,
        seed: Option<u64>,
        passed: bool,
        body: Value,
    ) -> Report {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            field,
            form,
            seed,
            passed,
            body,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        render_text(&value)
    }
}

/// Indented `key: value` lines; short scalar arrays stay on one line.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    render(value, 0, &mut out);
    out
}

fn inline(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes".into() } else { "no".into() }),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.is_empty() => Some("[]".into()),
        Value::Array(items) if items.len() <= 8 => {
            let parts: Option<Vec<String>> = items
                .iter()
                .map(|v| match v {
                    Value::Array(_) | Value::Object(_) => inline(v).filter(|s| s.len() <= 40),
                    _ => inline(v),
                })
                .collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(map) if map.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn render(value: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match inline(v) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(v, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                match inline(v) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        // first line of the nested block carries the dash
                        let mut nested = String::new();
                        render(v, depth + 1, &mut nested);
                        let inner = "  ".repeat(depth + 1);
                        let body = nested.strip_prefix(&inner).unwrap_or(&nested);
                        out.push_str(&format!("{pad}- {body}"));
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other).unwrap_or_default())),
    }
}

pub fn element_json(g: &GroupElement) -> Value {
    json!({
        "terms": g.mv().to_json_terms(),
        "norm": g.norm(),
        "parity": g.parity(),
        "chi": g.chi().to_strings(),
    })
}

/// Certificate with every identity re-verified, and the observed `s²`
/// next to the predicted sign when there is one.
pub fn certificate_json(
    ctx: &CliffordCtx,
    cert: &RealityCertificate,
    expected: Option<&Scalar>,
) -> Value {
    let checks = cert.verify(ctx);
    json!({
        "t": cert.t.mv().to_json_terms(),
        "t_norm": cert.t.norm(),
        "s": cert.s.mv().to_json_terms(),
        "relation": cert.relation.to_string(),
        "s_norm": cert.s_norm,
        "s_in": cert.s_in,
        "s_squared": cert.s_squared,
        "expected_s_squared": expected,
        "s_squared_is_expected": expected.map(|e| cert.s_squared.as_ref() == Some(e)),
        "checks": checks,
        "verified": checks.all(),
    })
}

pub fn involution_json(ctx: &CliffordCtx, t: &GroupElement, pair: &InvolutionPair) -> Value {
    json!({
        "tau1": pair.tau1.mv().to_json_terms(),
        "tau2": pair.tau2.mv().to_json_terms(),
        "eps1": pair.eps1,
        "eps2": pair.eps2,
        "product_is_t": ctx.mul(pair.tau1.mv(), pair.tau2.mv()) == *t.mv(),
        "verified": pair.verify(ctx, t),
    })
}

/// `{"kind": …, "message": …}` from an error's variant name and text.
pub fn error_json<E: std::fmt::Debug + std::fmt::Display>(e: &E) -> Value {
    let debug = format!("{e:?}");
    let mut kind: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
    // unwrap one level of transparent wrapping, e.g. Reality(NotInSpin)
    if let Some(inner) = debug.strip_prefix(&format!("{kind}(")) {
        let k: String = inner.chars().take_while(|c| c.is_alphanumeric()).collect();
        if k.chars().next().is_some_and(char::is_uppercase) {
            kind = k;
        }
    }
    let mut m = Map::new();
    m.insert("kind".into(), Value::String(kind));
    m.insert("message".into(), Value::String(e.to_string()));
    Value::Object(m)
}
