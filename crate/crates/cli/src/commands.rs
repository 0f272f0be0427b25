//! Command implementations. Each returns the lines to print and whether a
//! verification failed; configuration problems come back as errors.

use serde::Serialize;
use serde_json::{json, Value};

use qtorus_core::der::unit_vec;
use qtorus_core::fmodule::checks::{
    default_beta_candidates, irreducibility_evidence, psi_check, search_twist_equivalence,
};
use qtorus_core::fmodule::{ad, box_points, in_box, t, witt, BoxVector, Flavor, Report};
use qtorus_core::semidirect::GWire;
use qtorus_core::suites::{run_suites, Suite};
use qtorus_core::{Error, GElement, LatticePoint};

use crate::config::InstanceConfig;
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// What a command printed and whether it found a defect.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub failed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed)
    }

    fn json(value: &impl Serialize, failed: bool) -> Self {
        Outcome { lines: vec![to_line(value)], failed }
    }
}

fn to_line(value: &impl Serialize) -> String {
    serde_json::to_string(value).expect("report values serialize")
}

fn report_text(r: &Report) -> String {
    let status = if r.pass { "PASS" } else { "FAIL" };
    let mut line = format!("{status}  {}  instance={} seed={} samples={}", r.check, r.instance, r.seed, r.samples);
    if !r.pass {
        line.push_str(&format!(" defect={}", r.defect.normalized()));
        for key in ["witness", "failure"] {
            if let Some(Value::String(w)) = r.details.get(key) {
                line.push_str(&format!(" {key}={w:?}"));
            }
        }
    }
    line
}

fn report_outcome(r: &Report, format: Format) -> Outcome {
    let line = match format {
        Format::Json => to_line(r),
        Format::Text => report_text(r),
    };
    Outcome { lines: vec![line], failed: !r.pass }
}

pub fn radical(cfg: &InstanceConfig, format: Format) -> Outcome {
    let sp = cfg.spec();
    let rad = sp.radical();
    let basis: Vec<Vec<i64>> = rad.basis.iter().map(|b| b.coords().to_vec()).collect();
    match format {
        Format::Json => Outcome::json(
            &json!({
                "instance": cfg.instance,
                "d": sp.rank(),
                "N": sp.order().get(),
                "basis": basis,
                "axis_orders": rad.axis_orders,
                "diagonal_orders": rad.diagonal_orders,
                "index": rad.index,
            }),
            false,
        ),
        Format::Text => {
            let mut lines = vec![format!("instance {}: d = {}, N = {}", cfg.instance, sp.rank(), sp.order())];
            lines.push(format!("basis: {basis:?}"));
            lines.push(format!("axis orders: {:?}", rad.axis_orders));
            lines.push(match &rad.diagonal_orders {
                Some(m) => format!("diagonal orders: {m:?}"),
                None => "diagonal orders: none (radical is not diagonal)".into(),
            });
            lines.push(format!("index: {}", rad.index));
            Outcome { lines, failed: false }
        }
    }
}

/// Homogeneous generators with degrees in `[-k, k]^d`.
pub fn structure_generators(cfg: &InstanceConfig, k: i64) -> Result<Vec<(String, GElement)>, CliError> {
    let sp = cfg.spec();
    let d = sp.rank();
    let mut out = Vec::new();
    for n in box_points(&vec![k; d]) {
        if sp.in_radical(&n) {
            for i in 0..d {
                out.push((format!("D(e_{},{n})", i + 1), witt(sp, &unit_vec(d, i), &n)?));
            }
        } else {
            out.push((format!("ad t^{n}"), ad(sp, &n)));
        }
        out.push((format!("t^{n}"), t(sp, &n)));
    }
    Ok(out)
}

pub fn structure(cfg: &InstanceConfig, k: i64, format: Format) -> Result<Outcome, CliError> {
    if k < 0 {
        return Err(CliError::Input("degree box must be nonnegative".into()));
    }
    let gens = structure_generators(cfg, k)?;
    let mut table = Vec::new();
    let mut lines = Vec::new();
    for (i, (xl, x)) in gens.iter().enumerate() {
        for (j, (yl, y)) in gens.iter().enumerate() {
            let b = x.gbracket(y)?;
            match format {
                Format::Json => table.push(json!({ "x": i, "y": j, "bracket": b.to_wire() })),
                Format::Text if !b.is_zero() => lines.push(format!("[{xl}, {yl}] = {}", to_line(&b.to_wire()))),
                Format::Text => {}
            }
        }
    }
    Ok(match format {
        Format::Json => {
            let labels: Vec<&str> = gens.iter().map(|(l, _)| l.as_str()).collect();
            Outcome::json(&json!({ "instance": cfg.instance, "degree_box": k, "generators": labels, "table": table }), false)
        }
        Format::Text => Outcome { lines, failed: false },
    })
}

pub fn verify(cfg: &InstanceConfig, suites: &[Suite], format: Format) -> Result<Outcome, CliError> {
    let reports = run_suites(&cfg.suite_config()?, suites)?;
    let passed = reports.iter().filter(|r| r.pass).count();
    let failed = reports.len() - passed;
    let mut lines: Vec<String> = reports
        .iter()
        .map(|r| match format {
            Format::Json => to_line(r),
            Format::Text => report_text(r),
        })
        .collect();
    let names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
    lines.push(match format {
        Format::Json => to_line(&json!({
            "summary": {
                "instance": cfg.instance,
                "seed": cfg.seed,
                "samples": cfg.samples,
                "suites": names,
                "checks": reports.len(),
                "passed": passed,
                "failed": failed,
                "pass": failed == 0,
            }
        })),
        Format::Text => format!("{passed}/{} checks passed ({})", reports.len(), names.join(",")),
    });
    Ok(Outcome { lines, failed: failed > 0 })
}

/// Accepts inline JSON, or `@path` to read it from a file.
pub fn read_json_arg(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

pub fn act(cfg: &InstanceConfig, element: &str, vector: &str, format: Format) -> Result<Outcome, CliError> {
    let ms = &cfg.module;
    let wire: GWire = serde_json::from_str(element).map_err(|e| CliError::Input(format!("element: {e}")))?;
    let x = GElement::from_wire(ms.spec(), wire)?;
    let w: BoxVector = serde_json::from_str(vector).map_err(|e| CliError::Input(format!("vector: {e}")))?;
    if w.radius().len() != ms.rank() {
        return Err(Error::DimensionMismatch { expected: ms.rank(), got: w.radius().len() }.into());
    }
    for (n, v) in w.entries() {
        if n.dim() != ms.rank() {
            return Err(Error::DimensionMismatch { expected: ms.rank(), got: n.dim() }.into());
        }
        if v.len() != ms.dim() {
            return Err(Error::DimensionMismatch { expected: ms.dim(), got: v.len() }.into());
        }
    }
    let out = ms.act(&x, &w)?;
    Ok(match format {
        Format::Json => Outcome::json(&out, false),
        Format::Text => {
            let mut lines: Vec<String> = out.entries().map(|(n, v)| format!("{n}: {}", to_line(v))).collect();
            lines.push(format!("truncated: {}", out.truncated()));
            Outcome { lines, failed: false }
        }
    })
}

pub fn parse_point(s: &str, d: usize) -> Result<LatticePoint, CliError> {
    let coords: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("bad lattice point {s:?}")))?;
    if coords.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: coords.len() }.into());
    }
    Ok(LatticePoint::new(coords))
}

/// `λ(s, n)` on every weight where it is defined, against the recursion, and the
/// character read back from `λ(·, 0)`.
pub fn lambda(cfg: &InstanceConfig, s: &LatticePoint, format: Format) -> Result<Outcome, CliError> {
    let ms = &cfg.module;
    let r = &cfg.radius;
    let zero = LatticePoint::zero(ms.rank());
    if !in_box(r, s) {
        return Err(CliError::Input(format!("s = {s} lies outside the box")));
    }
    let l0 = ms.lambda_scalar(s, &zero, r)?;
    let mut values = Vec::new();
    let mut failed = false;
    for n in box_points(r) {
        if !in_box(r, &(&n + s)) {
            continue;
        }
        let (value, rec) = match ms.lambda_scalar(s, &n, r) {
            Ok(l) => {
                let rec = ms.lambda_recursion(s, &n, &l0);
                failed |= l != rec;
                (Value::from(l.normalized().to_string()), rec.normalized().to_string())
            }
            Err(Error::NotScalar(_)) => {
                failed = true;
                (Value::Null, ms.lambda_recursion(s, &n, &l0).normalized().to_string())
            }
            Err(e) => return Err(e.into()),
        };
        values.push(json!({ "n": n, "lambda": value, "recursion": rec }));
    }
    let inner: Vec<i64> = r.iter().map(|x| x - 1).collect();
    let g = match ms.extract_g(&inner) {
        Ok(g) => json!({ "character": g.to_string(), "M": g.conductor().get(), "k": g.exponents() }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let doc = json!({
        "instance": cfg.instance,
        "flavor": ms.flavor().to_string(),
        "s": s,
        "lambda0": l0.normalized().to_string(),
        "values": values,
        "extracted_g": g,
        "pass": !failed,
    });
    Ok(match format {
        Format::Json => Outcome::json(&doc, failed),
        Format::Text => {
            let mut lines = vec![format!("lambda({s}, 0) = {}", l0.normalized())];
            for v in doc["values"].as_array().expect("array") {
                lines.push(format!("n = {}: lambda = {}, recursion = {}", v["n"], v["lambda"], v["recursion"]));
            }
            lines.push(format!("extracted g: {}", doc["extracted_g"]));
            Outcome { lines, failed }
        }
    })
}

/// Checks `Ψ: G_g → F_{g^{-1}}` for the configured twist.
pub fn iso(cfg: &InstanceConfig, format: Format) -> Result<Outcome, CliError> {
    let ms = &cfg.module;
    let gg = if ms.flavor() == Flavor::Gg { ms.clone() } else { ms.with_twist(ms.twist().clone(), Flavor::Gg)? };
    let rep = psi_check(&gg, &cfg.radius, &cfg.context())?;
    Ok(report_outcome(&rep, format))
}

/// Looks for `β` and a character `c` with the configured module isomorphic to `F^β`.
pub fn search_beta(cfg: &InstanceConfig, format: Format) -> Result<Outcome, CliError> {
    let ms = &cfg.module;
    let candidates = cfg.beta_candidates.clone().unwrap_or_else(|| default_beta_candidates(ms.alpha(), 1));
    let found = search_twist_equivalence(ms, &candidates, &cfg.radius)?;
    let doc = match &found {
        Some(m) => json!({
            "instance": cfg.instance,
            "found": true,
            "beta": m.beta.iter().map(|b| b.normalized().to_string()).collect::<Vec<_>>(),
            "shift": m.shift,
            "character": { "M": m.character.conductor().get(), "k": m.character.exponents(), "text": m.character.to_string() },
            "candidates": candidates.len(),
        }),
        None => json!({ "instance": cfg.instance, "found": false, "candidates": candidates.len() }),
    };
    Ok(match format {
        Format::Json => Outcome::json(&doc, found.is_none()),
        Format::Text => {
            let line = match &found {
                Some(m) => format!(
                    "found beta = {} with c(n) = {} (shift {})",
                    to_line(&doc["beta"]),
                    m.character,
                    m.shift
                ),
                None => format!("no intertwiner among {} candidates", candidates.len()),
            };
            Outcome { lines: vec![line], failed: found.is_none() }
        }
    })
}

pub fn irreducible(cfg: &InstanceConfig, format: Format) -> Result<Outcome, CliError> {
    let inner: Vec<i64> = cfg.radius.iter().map(|x| x - 1).collect();
    let (rep, _) = irreducibility_evidence(&cfg.module, &cfg.radius, &inner, cfg.samples.div_ceil(10), &cfg.context())?;
    Ok(report_outcome(&rep, format))
}
