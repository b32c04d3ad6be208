//! Job documents, flag merging, dispatch, and output documents for the
//! `nori` binary.
//!
//! A job is a JSON object with the fields of [`JobSpec`]; flags mirror those
//! fields and must agree with the document wherever both are given. Every
//! invocation writes one JSON document with `schema_version`, `command`,
//! the resolved `input`, and either `result` or `error`.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::{
    borel_wordlength_diagnostic, instantiate, point_count_bounds_check, Catalog, CatalogEntry,
};
use crate::error::Error;
use crate::expcore::{trunc_exp, trunc_log, NilpotentMatrix, UnipotentMatrix};
use crate::fingroup::{
    enumerate, exp_generated_subgroup, ndim, nilpotent_log_set, p_core, EnumeratedGroup,
    DEFAULT_CAP,
};
use crate::modring::{FpSubspace, PrecisionContext, ResidueMatrix};
use crate::padic::{filtration_report_of, growth_profile_of, lemma_batch};
use crate::sampling::{self, DEFAULT_SEED};
use crate::verify::{run_battery, BatterySettings};

pub const SCHEMA_VERSION: u32 = 1;

/// Trials for `lemma-check` when none are given.
pub const DEFAULT_TRIALS: usize = 100;

/// Pairs checked exhaustively by `enumerate` up to this order; sampled above.
const AXIOM_FULL_LIMIT: usize = 2_000;
const AXIOM_SAMPLES: usize = 4_096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Exp,
    Log,
    Ndim,
    Enumerate,
    Filtration,
    LemmaCheck,
    Census,
    Diagnostic,
    Verify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).expect("command serializes");
        f.write_str(v.as_str().expect("unit variant"))
    }
}

/// The input document. Absent fields take their defaults at dispatch.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Name of a catalog entry, used in place of `generators`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entry: Option<String>,
}

#[derive(Parser, Debug)]
#[command(
    name = "nori",
    version,
    about = "Exact computations with finite matrix groups over Z/p^k"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Job document; `-` reads standard input.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Write the output document here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub declared_dim: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub entry: Option<String>,
}

impl Cli {
    /// The flags as a partial job.
    pub fn flag_job(&self) -> JobSpec {
        JobSpec {
            command: Some(self.command),
            n: self.n,
            p: self.p,
            k: self.k,
            cap: self.cap,
            seed: self.seed,
            declared_dim: self.declared_dim,
            trials: self.trials,
            entry: self.entry.clone(),
            ..JobSpec::default()
        }
    }
}

/// Process exit status for each outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    InvalidInput = 2,
    CapExceeded = 3,
    InvariantViolation = 4,
    Internal = 5,
}

/// A failed job: its exit status and the `error` object of the document.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub exit: Exit,
    pub kind: &'static str,
    pub message: String,
    pub witness: Option<String>,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            exit: Exit::InvalidInput,
            kind: "invalid_input",
            message: message.into(),
            witness: None,
        }
    }

    fn to_value(&self) -> Value {
        let mut v =
            json!({ "kind": self.kind, "message": self.message, "exit_code": self.exit as i32 });
        if let Some(w) = &self.witness {
            v["witness"] = json!(w);
        }
        v
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (exit, kind, witness) = match &e {
            Error::CapExceeded { .. } => (Exit::CapExceeded, "cap_exceeded", None),
            Error::BoundExceeded { .. } => (Exit::CapExceeded, "bound_exceeded", None),
            Error::InvariantViolation { witness, .. } => (
                Exit::InvariantViolation,
                "invariant_violation",
                Some(witness.clone()),
            ),
            Error::NotDivisible { .. } => (Exit::Internal, "internal", None),
            _ => (Exit::InvalidInput, "precondition", None),
        };
        Failure {
            exit,
            kind,
            message,
            witness,
        }
    }
}

/// The document written for one invocation, and its exit status.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub document: Value,
    pub exit: Exit,
    /// Human-readable text for standard error, such as the verify table.
    pub diagnostics: Option<String>,
}

/// Parses a job document.
pub fn parse_job(text: &str) -> Result<JobSpec, Failure> {
    serde_json::from_str(text)
        .map_err(|e| Failure::invalid(format!("cannot parse job document: {e}")))
}

/// Combines a document with flags; any field set differently in both is an
/// error.
pub fn merge(doc: JobSpec, flags: JobSpec) -> Result<JobSpec, Failure> {
    fn pick<T: PartialEq + fmt::Debug>(
        name: &str,
        doc: Option<T>,
        flag: Option<T>,
    ) -> Result<Option<T>, Failure> {
        match (doc, flag) {
            (Some(d), Some(f)) if d != f => Err(Failure::invalid(format!(
                "flag --{} = {f:?} conflicts with document field {name} = {d:?}",
                name.replace('_', "-")
            ))),
            (d, f) => Ok(d.or(f)),
        }
    }
    Ok(JobSpec {
        command: pick("command", doc.command, flags.command)?,
        n: pick("n", doc.n, flags.n)?,
        p: pick("p", doc.p, flags.p)?,
        k: pick("k", doc.k, flags.k)?,
        generators: pick("generators", doc.generators, flags.generators)?,
        matrix: pick("matrix", doc.matrix, flags.matrix)?,
        cap: pick("cap", doc.cap, flags.cap)?,
        seed: pick("seed", doc.seed, flags.seed)?,
        declared_dim: pick("declared_dim", doc.declared_dim, flags.declared_dim)?,
        trials: pick("trials", doc.trials, flags.trials)?,
        entry: pick("entry", doc.entry, flags.entry)?,
    })
}

/// Runs a merged job and assembles its output document.
pub fn run(job: &JobSpec) -> Outcome {
    let command = job.command;
    let result = match command {
        Some(c) => dispatch(c, job),
        None => Err(Failure::invalid("no command given")),
    };
    let command_name = command.map(|c| c.to_string());
    let mut document = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command_name,
        "input": serde_json::to_value(job).expect("job serializes"),
    });
    match result {
        Ok(Done {
            result,
            exit,
            diagnostics,
        }) => {
            document["result"] = result;
            Outcome {
                document,
                exit,
                diagnostics,
            }
        }
        Err(f) => {
            document["error"] = f.to_value();
            Outcome {
                diagnostics: Some(format!("error: {}", f.message)),
                document,
                exit: f.exit,
            }
        }
    }
}

/// Document written when the job could not even be assembled.
pub fn failure_document(command: Option<Command>, failure: &Failure) -> Outcome {
    Outcome {
        document: json!({
            "schema_version": SCHEMA_VERSION,
            "command": command.map(|c| c.to_string()),
            "error": failure.to_value(),
        }),
        exit: failure.exit,
        diagnostics: Some(format!("error: {}", failure.message)),
    }
}

struct Done {
    result: Value,
    exit: Exit,
    diagnostics: Option<String>,
}

impl Done {
    fn ok(result: Value) -> Self {
        Done {
            result,
            exit: Exit::Ok,
            diagnostics: None,
        }
    }
}

fn dispatch(command: Command, job: &JobSpec) -> Result<Done, Failure> {
    match command {
        Command::Exp => exp_job(job),
        Command::Log => log_job(job),
        Command::Ndim => ndim_job(job),
        Command::Enumerate => enumerate_job(job),
        Command::Filtration => filtration_job(job),
        Command::LemmaCheck => lemma_job(job),
        Command::Census => census_job(job),
        Command::Diagnostic => diagnostic_job(job),
        Command::Verify => verify_job(job),
    }
}

fn require<T: Copy>(name: &str, v: Option<T>) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::invalid(format!("missing field {name}")))
}

fn matrix_value(m: &ResidueMatrix) -> Value {
    json!(m.entries())
}

fn basis_value(s: &FpSubspace) -> Value {
    Value::Array(s.basis().iter().map(|row| json!(row)).collect())
}

fn catalog_entry(name: &str) -> Result<&'static CatalogEntry, Failure> {
    Catalog::builtin()
        .get(name)
        .ok_or_else(|| Failure::invalid(format!("unknown catalog entry {name}")))
}

/// Context and generators from either `generators` or `entry`.
fn group_input(
    job: &JobSpec,
    default_k: u32,
) -> Result<(PrecisionContext, Vec<ResidueMatrix>), Failure> {
    let p = require("p", job.p)?;
    let k = job.k.unwrap_or(default_k);
    match (&job.entry, &job.generators) {
        (Some(_), Some(_)) => Err(Failure::invalid(
            "give either entry or generators, not both",
        )),
        (None, None) => Err(Failure::invalid("missing field generators (or entry)")),
        (Some(name), None) => {
            let e = catalog_entry(name)?;
            if let Some(n) = job.n.filter(|&n| n != e.n) {
                return Err(Failure::invalid(format!(
                    "n = {n} but entry {name} has n = {}",
                    e.n
                )));
            }
            let gens = instantiate(e, p, k)?;
            Ok((PrecisionContext::new(e.n, p, k)?, gens))
        }
        (None, Some(gens)) => {
            let n = require("n", job.n)?;
            let ctx = PrecisionContext::new(n, p, k)?;
            let gens = gens
                .iter()
                .map(|g| ResidueMatrix::from_ints(&ctx, g))
                .collect::<Result<_, _>>()?;
            Ok((ctx, gens))
        }
    }
}

fn single_matrix(job: &JobSpec) -> Result<ResidueMatrix, Failure> {
    let n = require("n", job.n)?;
    let p = require("p", job.p)?;
    let ctx = PrecisionContext::new(n, p, job.k.unwrap_or(1))?;
    let m = job
        .matrix
        .as_ref()
        .ok_or_else(|| Failure::invalid("missing field matrix"))?;
    Ok(ResidueMatrix::from_ints(&ctx, m)?)
}

fn cap(job: &JobSpec) -> usize {
    job.cap.unwrap_or(DEFAULT_CAP)
}

fn exp_job(job: &JobSpec) -> Result<Done, Failure> {
    let x = NilpotentMatrix::new(single_matrix(job)?)?;
    Ok(Done::ok(
        json!({ "matrix": matrix_value(trunc_exp(&x).matrix()) }),
    ))
}

fn log_job(job: &JobSpec) -> Result<Done, Failure> {
    let u = UnipotentMatrix::new(single_matrix(job)?)?;
    Ok(Done::ok(
        json!({ "matrix": matrix_value(trunc_log(&u).matrix()) }),
    ))
}

fn ndim_job(job: &JobSpec) -> Result<Done, Failure> {
    let (ctx, gens) = group_input(job, 1)?;
    let cap = cap(job);
    let group = enumerate(&ctx, &gens, cap)?;
    let report = ndim(&group)?;
    let core = p_core(&group, cap)?;
    let exp_generated = exp_generated_subgroup(&ctx, &report.log_set, cap)?;
    let mut result = json!({
        "order": group.order(),
        "p_core_order": core.order(),
        "p_core_generators": core.generators().len(),
        "exp_generated_order": exp_generated.order(),
        "exp_generated_equals_p_core": exp_generated.same_elements(&core),
        "log_set_size": report.log_set.len(),
        "span_dim": report.span_dim,
        "lie_dim": report.lie_dim,
        "ndim": report.ndim,
        "span_lie_agree": report.agreement,
        "p_core_index": group.order() / core.order(),
        "p_core_over_p_ndim": ratio(core.order() as u128, ctx.p(), report.ndim),
    });
    if let Some(d) = job.declared_dim {
        result["declared_dim"] = json!(d);
        if report.ndim > d {
            return Err(Error::InvariantViolation {
                invariant: "Ndim <= declared dimension".into(),
                witness: format!("ndim {} > declared_dim {d}", report.ndim),
            }
            .into());
        }
    }
    Ok(Done::ok(result))
}

/// `a / p^e` in lowest terms, as `"num/den"`.
fn ratio(a: u128, p: u64, e: usize) -> String {
    let mut num = a;
    let mut den = 1u128;
    for _ in 0..e {
        if num.is_multiple_of(p as u128) {
            num /= p as u128;
        } else {
            den *= p as u128;
        }
    }
    format!("{num}/{den}")
}

fn enumerate_job(job: &JobSpec) -> Result<Done, Failure> {
    let (ctx, gens) = group_input(job, 1)?;
    let group = enumerate(&ctx, &gens, cap(job))?;
    group.verify_group_axioms(AXIOM_FULL_LIMIT, AXIOM_SAMPLES)?;
    Ok(Done::ok(json!({
        "order": group.order(),
        "bfs_depth": group.bfs_depth(),
        "generators": gens.iter().map(matrix_value).collect::<Vec<_>>(),
        "axioms_checked": if group.order() <= AXIOM_FULL_LIMIT { "all pairs" } else { "sampled" },
    })))
}

fn filtration_job(job: &JobSpec) -> Result<Done, Failure> {
    let (ctx, gens) = group_input(job, 2)?;
    let group = enumerate(&ctx, &gens, cap(job))?;
    let report = filtration_report_of(&group)?;
    let growth = growth_profile_of(&group)?;
    let levels: Vec<Value> = report
        .levels
        .iter()
        .map(|l| json!({ "m": l.m, "dim": l.dim, "basis": basis_value(&l.subspace) }))
        .collect();
    let mut result = json!({
        "dims": report.dims(),
        "group_orders": report.group_orders,
        "growth_profile": growth,
        "ndim_mod_p": report.ndim_mod_p,
        "levels": levels,
    });
    if let Some(d) = job.declared_dim {
        result["declared_dim"] = json!(d);
        report.check_declared_dim(d)?;
    }
    Ok(Done::ok(result))
}

fn lemma_job(job: &JobSpec) -> Result<Done, Failure> {
    let n = require("n", job.n)?;
    let p = require("p", job.p)?;
    let k = job.k.unwrap_or(1);
    let trials = job.trials.unwrap_or(DEFAULT_TRIALS);
    let field = PrecisionContext::new(n, p, 1)?;
    let mut rng = sampling::rng(job.seed.unwrap_or(DEFAULT_SEED));
    let batch = lemma_batch(&field, k, trials, &mut rng)?;
    let mut result = json!({ "trials": batch.trials, "failures": batch.failures });
    if let Some(f) = &batch.first_failure {
        result["first_failure"] = json!({
            "lift": matrix_value(&f.lift),
            "m": f.m.as_ref().map(matrix_value),
        });
        return Err(Error::InvariantViolation {
            invariant: "A^{p^k} = I + p^k M with M = x (mod p)".into(),
            witness: result.to_string(),
        }
        .into());
    }
    Ok(Done::ok(result))
}

fn census_job(job: &JobSpec) -> Result<Done, Failure> {
    let p = require("p", job.p)?;
    let cap = cap(job);
    let mut skipped = Vec::new();
    let entries: Vec<&CatalogEntry> = match &job.entry {
        Some(name) => vec![catalog_entry(name)?],
        None => Catalog::builtin()
            .entries
            .iter()
            .filter(|e| {
                let over_cap = e.order_from_formula(p).is_some_and(|o| o > cap as i128);
                let keep = e.connected && e.fits_budget(p) && !over_cap;
                if !keep {
                    skipped.push(e.name.clone());
                }
                keep
            })
            .collect(),
    };
    let mut rows = Vec::new();
    for e in entries {
        let c = point_count_bounds_check(e, p, cap)?;
        if !c.ok || c.formula_matches == Some(false) {
            return Err(Error::InvariantViolation {
                invariant: "(p-1)^d <= |G(F_p)| <= (p+1)^d and order formula".into(),
                witness: format!("{} at p = {p}: {c:?}", e.name),
            }
            .into());
        }
        rows.push(json!({
            "entry": e.name,
            "known_dim": e.known_dim,
            "count": c.count,
            "lower": c.lower,
            "upper": c.upper,
            "ok": c.ok,
            "formula_order": c.formula_order.map(|o| o.to_string()),
            "formula_matches": c.formula_matches,
        }));
    }
    Ok(Done::ok(json!({ "entries": rows, "skipped": skipped })))
}

fn diagnostic_job(job: &JobSpec) -> Result<Done, Failure> {
    let (ctx, gens) = group_input(job, 1)?;
    let cap = cap(job);
    let group: EnumeratedGroup = enumerate(&ctx, &gens, cap)?;
    let logs = nilpotent_log_set(&group)?;
    let d = borel_wordlength_diagnostic(&ctx, &logs, cap)?;
    Ok(Done::ok(json!({
        "order": group.order(),
        "log_set_size": logs.len(),
        "exp_generated_order": d.order,
        "max_bfs_depth": d.max_bfs_depth,
        "budget": d.budget,
    })))
}

fn verify_job(job: &JobSpec) -> Result<Done, Failure> {
    let settings = BatterySettings {
        seed: job.seed.unwrap_or(DEFAULT_SEED),
        cap: job.cap,
    };
    let report = run_battery(&settings);
    let passed = report.criteria.len() - report.failures();
    Ok(Done {
        result: json!({
            "criteria": report.criteria,
            "passed": passed,
            "failed": report.failures(),
        }),
        exit: if report.all_pass() {
            Exit::Ok
        } else {
            Exit::InvariantViolation
        },
        diagnostics: Some(report.table()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(text: &str) -> JobSpec {
        parse_job(text).unwrap()
    }

    #[test]
    fn exp_example() {
        let out = run(&job(
            r#"{"command":"exp","n":2,"p":5,"k":1,"matrix":[0,1,0,0]}"#,
        ));
        assert_eq!(out.exit, Exit::Ok);
        assert_eq!(out.document["result"]["matrix"], json!([1, 1, 0, 1]));
        assert_eq!(out.document["schema_version"], json!(1));
        assert_eq!(out.document["input"]["matrix"], json!([0, 1, 0, 0]));
    }

    #[test]
    fn log_inverts_exp() {
        let out = run(&job(r#"{"command":"log","n":2,"p":5,"matrix":[1,1,0,1]}"#));
        assert_eq!(out.document["result"]["matrix"], json!([0, 1, 0, 0]));
        let bad = run(&job(r#"{"command":"log","n":2,"p":5,"matrix":[2,0,0,1]}"#));
        assert_eq!(bad.exit, Exit::InvalidInput);
    }

    #[test]
    fn ndim_on_sl2() {
        let out = run(&job(
            r#"{"command":"ndim","n":2,"p":5,"generators":[[1,1,0,1],[1,0,1,1]]}"#,
        ));
        let r = &out.document["result"];
        assert_eq!(out.exit, Exit::Ok);
        for (key, want) in [
            ("span_dim", 3),
            ("lie_dim", 3),
            ("ndim", 3),
            ("order", 120),
            ("p_core_order", 120),
        ] {
            assert_eq!(r[key], json!(want), "{key}");
        }
        let violated = run(&job(
            r#"{"command":"ndim","n":2,"p":5,"generators":[[1,1,0,1],[1,0,1,1]],"declared_dim":2}"#,
        ));
        assert_eq!(violated.exit, Exit::InvariantViolation);
        assert!(violated.document["error"]["witness"].is_string());
        assert_eq!(r["p_core_over_p_ndim"], json!("24/25"));
    }

    #[test]
    fn lemma_check_example() {
        let out = run(&job(
            r#"{"command":"lemma-check","n":2,"p":7,"k":2,"seed":0,"trials":50}"#,
        ));
        assert_eq!(out.exit, Exit::Ok);
        assert_eq!(
            out.document["result"],
            json!({ "trials": 50, "failures": 0 })
        );
    }

    #[test]
    fn error_kinds() {
        let cap = run(&job(
            r#"{"command":"enumerate","n":2,"p":5,"generators":[[1,1,0,1],[1,0,1,1]],"cap":100}"#,
        ));
        assert_eq!(cap.exit, Exit::CapExceeded);
        let shape = run(&job(r#"{"command":"exp","n":2,"p":5,"matrix":[0,1,0]}"#));
        assert_eq!(shape.exit, Exit::InvalidInput);
        let prime = run(&job(r#"{"command":"exp","n":2,"p":6,"matrix":[0,1,0,0]}"#));
        assert_eq!(prime.exit, Exit::InvalidInput);
        assert!(prime.document["error"]["message"]
            .as_str()
            .unwrap()
            .contains("not prime"));
        assert!(parse_job(r#"{"command":"exp","colour":1}"#).is_err());
        let missing = run(&job(r#"{"command":"ndim","n":2,"p":5}"#));
        assert_eq!(missing.exit, Exit::InvalidInput);
    }

    #[test]
    fn flags_conflict_only_when_different() {
        let doc = job(r#"{"command":"exp","n":2,"p":5}"#);
        let same = JobSpec {
            p: Some(5),
            ..JobSpec::default()
        };
        assert_eq!(merge(doc.clone(), same).unwrap().p, Some(5));
        let other = JobSpec {
            p: Some(7),
            ..JobSpec::default()
        };
        let err = merge(doc.clone(), other).unwrap_err();
        assert_eq!(err.exit, Exit::InvalidInput);
        assert!(err.message.contains("--p"));
        let cmd = JobSpec {
            command: Some(Command::Log),
            ..JobSpec::default()
        };
        assert!(merge(doc, cmd).is_err());
    }

    #[test]
    fn entry_and_filtration() {
        let out = run(&job(
            r#"{"command":"filtration","entry":"SL2","p":5,"k":2}"#,
        ));
        assert_eq!(out.exit, Exit::Ok, "{}", out.document);
        assert_eq!(out.document["result"]["dims"], json!([3]));
        assert_eq!(out.document["result"]["group_orders"], json!([120, 15000]));
        let too_big = run(&job(
            r#"{"command":"filtration","entry":"SL2","p":5,"k":2,"declared_dim":2}"#,
        ));
        assert_eq!(too_big.exit, Exit::InvariantViolation);
        let both = run(&job(
            r#"{"command":"ndim","entry":"SL2","p":5,"n":2,"generators":[[1,1,0,1]]}"#,
        ));
        assert_eq!(both.exit, Exit::InvalidInput);
    }

    #[test]
    fn census_and_diagnostic() {
        let out = run(&job(r#"{"command":"census","p":5}"#));
        assert_eq!(out.exit, Exit::Ok, "{}", out.document);
        let rows = out.document["result"]["entries"].as_array().unwrap();
        assert!(rows
            .iter()
            .any(|r| r["entry"] == "SL2" && r["count"] == 120));
        let d = run(&job(r#"{"command":"diagnostic","entry":"Borel2","p":5}"#));
        assert_eq!(d.exit, Exit::Ok, "{}", d.document);
        assert_eq!(d.document["result"]["budget"], json!(32));
        assert_eq!(d.document["result"]["exp_generated_order"], json!(5));
    }
}
