use std::path::{Path, PathBuf};

use clap::Args;
use clifford_reality::oracle::Caps;
use clifford_reality::{CliffordCtx, Field, FieldSpec, GroupElement, Matrix, QSpace, Scalar};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::ConfigInvalid(msg.into())
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// `Q`, `rationals`, `F7`, `prime:7` or a bare prime.
    #[arg(long, visible_alias = "p", global = true)]
    pub field: Option<String>,
    /// Shorthand such as `hyperbolic:2+anisotropic:[1,2]`.
    #[arg(long, global = true, conflicts_with = "gram")]
    pub form: Option<String>,
    /// Gram matrix of the polar form `B`, inline JSON or a config file
    /// `{"field": …, "gram": [[…]]}`.
    #[arg(long, global = true)]
    pub gram: Option<String>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub cap_order: u64,
    #[arg(long, global = true, default_value_t = 5)]
    pub cap_dim: usize,
    /// Also write the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

/// A validated quadratic space plus the shared run options.
pub struct RunConfig {
    pub field: Field,
    pub ctx: CliffordCtx,
    pub form: String,
    pub seed: u64,
    pub caps: Caps,
}

pub fn read_json(source: &str) -> Result<Value, CliError> {
    let text = if source.trim_start().starts_with(['[', '{']) {
        source.to_string()
    } else {
        std::fs::read_to_string(Path::new(source)).map_err(|e| invalid(format!("cannot read {source}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| invalid(format!("malformed JSON in {source}: {e}")))
}

fn scalar_text(v: &Value) -> Result<String, CliError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(invalid(format!("expected a scalar, got {other}"))),
    }
}

pub fn parse_scalar(field: Field, v: &Value) -> Result<Scalar, CliError> {
    let text = scalar_text(v)?;
    field.parse(&text).map_err(|e| invalid(e.to_string()))
}

pub fn parse_matrix(field: Field, v: &Value) -> Result<Matrix, CliError> {
    let rows = v.as_array().ok_or_else(|| invalid("matrix must be an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| invalid("matrix rows must be arrays"))?;
        out.push(row.iter().map(|x| parse_scalar(field, x)).collect::<Result<Vec<_>, _>>()?);
    }
    if out.is_empty() || out.iter().any(|r| r.len() != out.len()) {
        return Err(invalid("matrix must be square and nonempty"));
    }
    Ok(Matrix::from_rows(field, out))
}

fn parse_field(s: &str) -> Result<Field, CliError> {
    let spec: FieldSpec = s.parse().map_err(|e: clifford_reality::FieldError| invalid(e.to_string()))?;
    Field::new(spec).map_err(|e| invalid(e.to_string()))
}

impl RunConfig {
    /// Resolves field and form from the flags, falling back to `input`
    /// (an element or matrix file that may carry them) and then to
    /// `default_form`.
    pub fn resolve(common: &Common, input: Option<&Value>, default_form: Option<String>) -> Result<RunConfig, CliError> {
        let from_input = |key: &str| input.and_then(|v| v.get(key)).cloned();
        let mut gram_value = None;
        let mut file_field = from_input("field");
        if let Some(g) = &common.gram {
            let v = read_json(g)?;
            match v {
                Value::Object(map) => {
                    if let Some(f) = map.get("field") {
                        file_field = Some(f.clone());
                    }
                    gram_value = Some(map.get("gram").cloned().ok_or_else(|| invalid("config file has no \"gram\""))?);
                }
                other => gram_value = Some(other),
            }
        }
        let field = match (&common.field, file_field) {
            (Some(s), _) => parse_field(s)?,
            (None, Some(Value::String(s))) => parse_field(&s)?,
            (None, Some(v @ Value::Object(_))) => {
                let spec: FieldSpec = serde_json::from_value(v).map_err(|e| invalid(e.to_string()))?;
                Field::new(spec).map_err(|e| invalid(e.to_string()))?
            }
            (None, Some(other)) => return Err(invalid(format!("bad field {other}"))),
            (None, None) => Field::rationals(),
        };
        if gram_value.is_none() && common.form.is_none() {
            gram_value = from_input("gram");
        }
        let (space, form) = match (gram_value, &common.form) {
            (Some(g), _) => {
                let m = parse_matrix(field, &g)?;
                let label = serde_json::to_string(&m.to_strings()).expect("strings serialize");
                (QSpace::from_gram(m).map_err(|e| invalid(e.to_string()))?, label)
            }
            (None, form) => {
                let form = form
                    .clone()
                    .or_else(|| from_input("form").and_then(|v| v.as_str().map(String::from)))
                    .or(default_form)
                    .ok_or_else(|| invalid("no quadratic form given; use --form or --gram"))?;
                (QSpace::from_shorthand(field, &form).map_err(|e| invalid(e.to_string()))?, form)
            }
        };
        let ctx = CliffordCtx::new(space).map_err(|e| invalid(e.to_string()))?;
        if common.cap_order == 0 || common.cap_dim == 0 {
            return Err(invalid("caps must be positive"));
        }
        Ok(RunConfig {
            field,
            ctx,
            form,
            seed: common.seed,
            caps: Caps {
                max_order: common.cap_order,
                max_dim: common.cap_dim,
            },
        })
    }

    pub fn field_label(&self) -> String {
        self.field.to_string()
    }
}

/// Comma-separated scalars, e.g. `2,3` or `-1,1/2`.
pub fn parse_list(field: Field, s: &str) -> Result<Vec<Scalar>, CliError> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| field.parse(x).map_err(|e| invalid(e.to_string())))
        .collect()
}

/// An element given by `"element"` (blade terms) or `"vectors"` (user
/// coordinates of vector factors).
pub fn parse_element(ctx: &CliffordCtx, v: &Value) -> Result<GroupElement, CliError> {
    let field = ctx.field();
    if let Some(terms) = v.get("element") {
        let items = terms.as_array().ok_or_else(|| invalid("\"element\" must be a list of terms"))?;
        let mut parsed = Vec::with_capacity(items.len());
        for item in items {
            let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(|| invalid("terms are [indices, scalar]"))?;
            let idx = pair[0]
                .as_array()
                .ok_or_else(|| invalid("blade indices must be a list"))?
                .iter()
                .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| invalid("blade indices are positive integers")))
                .collect::<Result<Vec<_>, _>>()?;
            parsed.push((idx, scalar_text(&pair[1])?));
        }
        let mv = ctx.parse_terms(&parsed).map_err(|e| invalid(e.to_string()))?;
        return GroupElement::new(ctx, mv).map_err(|e| invalid(e.to_string()));
    }
    if let Some(vs) = v.get("vectors") {
        let rows = vs.as_array().ok_or_else(|| invalid("\"vectors\" must be a list"))?;
        let mut vectors = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_array().ok_or_else(|| invalid("vectors are lists of scalars"))?;
            vectors.push(r.iter().map(|x| parse_scalar(field, x)).collect::<Result<Vec<_>, _>>()?);
        }
        return GroupElement::from_vectors(ctx, &vectors).map_err(|e| invalid(e.to_string()));
    }
    Err(invalid("input needs \"element\" or \"vectors\""))
}
