use clap::Args;
use clifford_reality::groups::{lift_so, spinor_norm};
use clifford_reality::oracle::{
    class_report, enumerate, is_semisimple_ff, kernel_and_spinor_check, GroupKind, OracleError,
};
use clifford_reality::reality::{
    corollary_sign, eigen_split, involution_decompose, is_real_semisimple_spin, standard_sign, Decision,
    TorusElement,
};
use clifford_reality::report::{certificate_json, element_json, error_json, involution_json, Report};
use clifford_reality::sampling::{self, random_plan};
use clifford_reality::strategy::{ConjugatorRegistry, DeciderRegistry};
use clifford_reality::suites::{verify_identities, SUITES};
use clifford_reality::{CliffordCtx, GroupElement, OrthMatrix, Scalar};
use serde_json::{json, Value};

use crate::config::{parse_element, parse_list, parse_matrix, read_json, CliError, Common, RunConfig};

#[derive(Args, Debug, Clone)]
pub struct ElementArgs {
    /// Element file: `{"element": [[[1,2], "3/2"], …]}` or `{"vectors": […]}`,
    /// optionally with `field`, `form` or `gram`.
    #[arg(long, conflicts_with = "lambdas")]
    pub input: Option<String>,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub lambda0: String,
    /// Torus parameters `λ₁,…,λ_m` relative to the space's Witt basis.
    #[arg(long, allow_hyphen_values = true)]
    pub lambdas: Option<String>,
}

fn report(cmd: &str, cfg: &RunConfig, passed: bool, body: Value) -> Report {
    Report::new(cmd, cfg.field_label(), cfg.form.clone(), Some(cfg.seed), passed, body)
}

fn failure(cmd: &str, cfg: &RunConfig, mut body: Value, err: Value) -> Report {
    body["error"] = err;
    report(cmd, cfg, false, body)
}

struct Input {
    cfg: RunConfig,
    t: GroupElement,
    torus: Option<TorusElement>,
}

fn load_element(common: &Common, args: &ElementArgs) -> Result<Input, CliError> {
    if let Some(path) = &args.input {
        let v = read_json(path)?;
        let cfg = RunConfig::resolve(common, Some(&v), None)?;
        let t = parse_element(&cfg.ctx, &v)?;
        return Ok(Input { cfg, t, torus: None });
    }
    let Some(lambdas) = &args.lambdas else {
        return Err(CliError::ConfigInvalid("give --input or --lambdas".into()));
    };
    let m = lambdas.split(',').filter(|x| !x.trim().is_empty()).count();
    let cfg = RunConfig::resolve(common, None, Some(format!("hyperbolic:{m}")))?;
    let ls = parse_list(cfg.field, lambdas)?;
    let l0 = cfg.field.parse(&args.lambda0).map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
    let basis = cfg
        .ctx
        .space()
        .witt_decompose()
        .map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
    let torus = TorusElement::new(l0, ls, basis).map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
    let t = torus.element(&cfg.ctx).map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
    Ok(Input {
        cfg,
        t,
        torus: Some(torus),
    })
}

fn witt_index(ctx: &CliffordCtx) -> usize {
    ctx.space().witt_decompose().map(|b| b.witt_index()).unwrap_or(0)
}

/// Predicted `s²` for the named construction, when there is one.
fn expected_square(ctx: &CliffordCtx, strategy: &str) -> Option<Scalar> {
    let m = witt_index(ctx);
    let f = ctx.field();
    match strategy {
        "standard" => Some(standard_sign(f, m)),
        "minus" => Some(standard_sign(f, m.saturating_sub(1))),
        "odd-split" if m % 2 == 1 => Some(corollary_sign(f, m)),
        "odd-split" => Some(standard_sign(f, m)),
        _ => None,
    }
}

pub fn verify(common: &Common, suites: &[String], samples: usize) -> Result<Report, CliError> {
    let cfg = RunConfig::resolve(common, None, None)?;
    let names: Vec<&str> = if suites.is_empty() {
        SUITES.to_vec()
    } else {
        suites.iter().map(String::as_str).collect()
    };
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(n)) {
        return Err(CliError::ConfigInvalid(format!("unknown suite {bad}; known: {}", SUITES.join(", "))));
    }
    let reports = verify_identities(&cfg.ctx, &names, cfg.seed, samples);
    let passed = reports.iter().all(|r| r.passed());
    Ok(report(
        "verify-identities",
        &cfg,
        passed,
        json!({ "samples": samples, "suites": reports }),
    ))
}

pub fn torus(common: &Common, args: &ElementArgs) -> Result<Report, CliError> {
    if args.input.is_some() {
        return Err(CliError::ConfigInvalid("torus takes --lambda0 and --lambdas".into()));
    }
    let Input { cfg, t, torus } = load_element(common, args)?;
    let torus = torus.expect("built from parameters");
    let ctx = &cfg.ctx;
    let chi_ok = *t.chi() == torus.predicted_chi(cfg.field);
    let norm_ok = *t.norm() == torus.norm();
    let registry = ConjugatorRegistry::default();
    let mut certs = serde_json::Map::new();
    let mut all = true;
    for name in ["standard", "minus", "odd-split"] {
        let strategy = registry.get(name).expect("default strategy");
        match strategy.conjugate(ctx, &torus.basis, &t) {
            Ok(cert) => {
                let v = certificate_json(ctx, &cert, expected_square(ctx, name).as_ref());
                all &= v["verified"] == true && v["s_squared_is_expected"] != false;
                certs.insert(name.into(), v);
            }
            Err(e) if name == "standard" => {
                all = false;
                certs.insert(name.into(), json!({ "error": error_json(&e) }));
            }
            Err(_) => {}
        }
    }
    let body = json!({
        "lambda0": torus.lambda0,
        "lambdas": torus.lambdas,
        "witt_index": torus.lambdas.len(),
        "t": element_json(&t),
        "norm_predicted": torus.norm(),
        "norm_matches": norm_ok,
        "chi_matches_diagonal": chi_ok,
        "in_spin": t.is_spin(),
        "certificates": certs,
    });
    Ok(report("torus", &cfg, chi_ok && norm_ok && all, body))
}

pub fn conjugate(common: &Common, args: &ElementArgs, strategy: Option<&str>) -> Result<Report, CliError> {
    let Input { cfg, t, .. } = load_element(common, args)?;
    let ctx = &cfg.ctx;
    let mut body = json!({ "t": element_json(&t), "in_spin": t.is_spin() });
    if !t.is_even() {
        return Ok(failure(
            "conjugate",
            &cfg,
            body,
            error_json(&clifford_reality::reality::RealityError::NotInGammaPlus),
        ));
    }
    let basis = ctx
        .space()
        .witt_decompose()
        .map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
    let registry = ConjugatorRegistry::default();
    let names: Vec<&'static str> = match strategy {
        Some(s) => vec![registry
            .get(s)
            .ok_or_else(|| CliError::ConfigInvalid(format!("unknown strategy {s}; known: {:?}", registry.names())))?
            .name()],
        None => registry.names(),
    };
    let mut attempts = Vec::new();
    for name in names {
        match registry.get(name).expect("listed").conjugate(ctx, &basis, &t) {
            Ok(cert) => {
                let v = certificate_json(ctx, &cert, expected_square(ctx, name).as_ref());
                let passed = v["verified"] == true;
                body["strategy"] = json!(name);
                body["certificate"] = v;
                body["attempts"] = json!(attempts);
                return Ok(report("conjugate", &cfg, passed, body));
            }
            Err(e) => attempts.push(json!({ "strategy": name, "error": error_json(&e) })),
        }
    }
    let kind_is = |a: &&Value, kinds: &[&str]| kinds.iter().any(|k| a["error"]["kind"] == *k);
    let err = attempts
        .iter()
        .find(|a| kind_is(a, &["EigenvaluesNotRational", "NotSemisimple"]))
        .or_else(|| attempts.iter().find(|a| !kind_is(a, &["PreconditionViolated"])))
        .or(attempts.last())
        .map(|a| a["error"].clone())
        .unwrap_or(Value::Null);
    body["attempts"] = json!(attempts);
    Ok(failure("conjugate", &cfg, body, err))
}

/// `+1` in dimensions `0, 1, 2 mod 8` and `-1` in dimension `4 mod 8`.
fn eps_expectation(ctx: &CliffordCtx) -> Option<Scalar> {
    let f = ctx.field();
    match ctx.dim() % 8 {
        0..=2 => Some(f.one()),
        4 => Some(-f.one()),
        _ => None,
    }
}

pub fn decompose(common: &Common, args: &ElementArgs) -> Result<Report, CliError> {
    let Input { cfg, t, .. } = load_element(common, args)?;
    let ctx = &cfg.ctx;
    let mut body = json!({ "t": element_json(&t), "dim": ctx.dim() });
    let decision = match is_real_semisimple_spin(ctx, &t) {
        Ok(d) => d,
        Err(e) => return Ok(failure("decompose", &cfg, body, error_json(&e))),
    };
    body["decision"] = json!(decision.label());
    let cert = match decision {
        Decision::Real(c) => c,
        Decision::NotReal(why) | Decision::Undecided(why) => {
            let err = json!({ "kind": "NotRealOrUndecided", "message": why });
            return Ok(failure("decompose", &cfg, body, err));
        }
    };
    body["certificate"] = certificate_json(ctx, &cert, None);
    match involution_decompose(ctx, &t, &cert) {
        Ok(pair) => {
            let v = involution_json(ctx, &t, &pair);
            let passed = v["verified"] == true;
            let expected = eps_expectation(ctx);
            body["eps_expected"] = json!(expected);
            body["eps_matches_expectation"] =
                json!(expected.map(|e| pair.eps1 == e && pair.eps2 == e));
            body["involutions"] = v;
            Ok(report("decompose", &cfg, passed, body))
        }
        Err(e) => Ok(failure("decompose", &cfg, body, error_json(&e))),
    }
}

pub fn enumerate_cmd(common: &Common, group: GroupKind) -> Result<Report, CliError> {
    let cfg = RunConfig::resolve(common, None, None)?;
    let ctx = &cfg.ctx;
    let body = json!({ "group": group, "dim": ctx.dim() });
    let table = match enumerate(ctx, group, cfg.caps, None) {
        Ok(t) => t,
        Err(e) => return Ok(failure("enumerate", &cfg, body, error_json(&e))),
    };
    let (classes, _) = match class_report(ctx, &table) {
        Ok(r) => r,
        Err(e) => return Ok(failure("enumerate", &cfg, body, error_json(&e))),
    };
    let mut checks = serde_json::Map::new();
    checks.insert("order_matches_prediction".into(), json!(classes.order as u64 == classes.predicted_order));
    checks.insert("sizes_sum_to_order".into(), json!(classes.sizes_sum() == classes.order));
    checks.insert(
        "real_witnesses_verified".into(),
        json!(classes.classes.iter().all(|c| c.is_real == c.witness_verified)),
    );
    if group == GroupKind::Spin && ctx.dim() % 4 <= 1 {
        checks.insert("semisimple_classes_real".into(), json!(classes.semisimple_all_real()));
    }
    let mut body = body;
    if group == GroupKind::GammaPlus {
        match kernel_and_spinor_check(ctx, &table) {
            Ok(seq) => {
                checks.insert("exact_sequence".into(), json!(seq.passed()));
                body["exact_sequence"] = json!(seq);
            }
            Err(e) => return Ok(failure("enumerate", &cfg, body, error_json(&e))),
        }
    }
    let passed = checks.values().all(|v| *v == true);
    body["checks"] = Value::Object(checks);
    body["report"] = json!(classes);
    Ok(report("enumerate", &cfg, passed, body))
}

fn verdicts(
    ctx: &CliffordCtx,
    deciders: &DeciderRegistry,
    t: &GroupElement,
) -> (Value, bool) {
    let mut rows = serde_json::Map::new();
    let mut decided: Vec<bool> = Vec::new();
    let mut verified = true;
    for d in deciders.iter() {
        let row = match d.decide(ctx, t) {
            Ok(Decision::Real(cert)) => {
                let checks = cert.verify(ctx);
                let ok = checks.relation_holds && checks.norm_is_one && checks.membership_holds;
                verified &= ok;
                decided.push(true);
                json!({ "verdict": "real", "witness": cert.s.mv().to_json_terms(), "witness_verified": ok })
            }
            Ok(Decision::NotReal(why)) => {
                decided.push(false);
                json!({ "verdict": "not-real", "reason": why })
            }
            Ok(Decision::Undecided(why)) => json!({ "verdict": "undecided", "reason": why }),
            Err(e) => json!({ "verdict": "skipped", "error": error_json(&e) }),
        };
        rows.insert(d.name().into(), row);
    }
    let agree = decided.windows(2).all(|w| w[0] == w[1]);
    let eigen = eigen_split(ctx, t).ok();
    let v = json!({
        "t": t.mv().to_json_terms(),
        "eigenvalues": eigen.as_ref().map(|s| s.eigenvalues()),
        "strongly_regular": eigen.as_ref().map(|s| s.is_strongly_regular()),
        "verdicts": rows,
        "agree": agree,
        "witnesses_verified": verified,
    });
    (v, agree && verified)
}

pub fn reality_report(
    common: &Common,
    args: &ElementArgs,
    samples: usize,
    budget: u64,
) -> Result<Report, CliError> {
    let deciders_for = |cfg: &RunConfig| DeciderRegistry::new(budget, cfg.caps);
    if args.input.is_some() || args.lambdas.is_some() {
        let Input { cfg, t, .. } = load_element(common, args)?;
        if !t.is_spin() {
            let body = json!({ "t": element_json(&t) });
            return Ok(failure(
                "reality-report",
                &cfg,
                body,
                error_json(&clifford_reality::reality::RealityError::NotInSpin),
            ));
        }
        let (v, passed) = verdicts(&cfg.ctx, &deciders_for(&cfg), &t);
        return Ok(report("reality-report", &cfg, passed, json!({ "elements": [v] })));
    }
    let cfg = RunConfig::resolve(common, None, None)?;
    let ctx = &cfg.ctx;
    if !cfg.field.is_finite() {
        let err = error_json(&OracleError::NotFiniteField(cfg.field));
        return Ok(failure("reality-report", &cfg, json!({}), err));
    }
    let deciders = deciders_for(&cfg);
    let mut rng = sampling::rng(cfg.seed);
    let mut rows = Vec::with_capacity(samples);
    let mut passed = true;
    let mut attempts = 0;
    while rows.len() < samples && attempts < 200 * samples.max(1) {
        attempts += 1;
        let Some(plan) = random_plan(cfg.field, ctx.dim(), &mut rng) else {
            continue;
        };
        let Some(t) = sampling::semisimple_spin(ctx, &plan, &mut rng) else {
            continue;
        };
        if !is_semisimple_ff(ctx, t.mv()).unwrap_or(false) {
            continue;
        }
        let (mut v, ok) = verdicts(ctx, &deciders, &t);
        v["plan"] = json!({ "one": plan.one, "minus_one": plan.minus_one, "lambdas": plan.lambdas });
        passed &= ok;
        rows.push(v);
    }
    let body = json!({
        "requested": samples,
        "sampled": rows.len(),
        "deciders": deciders.names(),
        "elements": rows,
    });
    Ok(report("reality-report", &cfg, passed && rows.len() == samples, body))
}

pub fn lift(common: &Common, matrix: &str) -> Result<Report, CliError> {
    let v = read_json(matrix)?;
    let input = if v.is_object() { Some(&v) } else { None };
    let cfg = RunConfig::resolve(common, input, None)?;
    let ctx = &cfg.ctx;
    let raw = v.get("matrix").unwrap_or(&v);
    let m = parse_matrix(cfg.field, raw)?;
    let mut body = json!({ "matrix": m.to_strings() });
    let orth = match OrthMatrix::new(ctx.space(), m) {
        Ok(o) => o,
        Err(e) => return Ok(failure("lift", &cfg, body, error_json(&e))),
    };
    body["det"] = json!(orth.det());
    let u = match lift_so(ctx, &orth) {
        Ok(u) => u,
        Err(e) => return Ok(failure("lift", &cfg, body, error_json(&e))),
    };
    let round_trip = u.chi() == orth.matrix();
    body["element"] = element_json(&u);
    body["spinor_norm"] = json!(spinor_norm(ctx.space(), &orth).ok());
    body["norm_class"] = json!(cfg.field.square_class(u.norm()).ok());
    body["in_spin"] = json!(u.is_spin());
    body["chi_round_trip"] = json!(round_trip);
    Ok(report("lift", &cfg, round_trip, body))
}
