//! Batch runs: a key = value config names theorem ids and a parameter grid,
//! every grid point runs through `verify`, and the rows go to JSON and
//! optionally CSV.
//!
//! ```text
//! # comment
//! theorems = thm3.1, thm3.4
//! q = 5, 7, 8, 9          # or: p = 2 and m = 3..=5
//! k = 1..=3               # optional; absent means every valid k
//! eta = pair              # pair | all | packed element
//! mode = exhaustive
//! seed = 7
//! output = report.json
//! ```

use crate::code::DEFAULT_COSET_BUDGET;
use crate::verify::{theorem_info, verify_untimed, EtaChoice, Mode, Status, VerifyParams, VerifyReport};
use crate::verify::{DEFAULT_SAMPLES, DEFAULT_SUBSET_BUDGET};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};
use thiserror::Error;

pub const WORKERS_ENV: &str = "TRS_LAB_WORKERS";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: key `{key}`: {msg}")]
    Line { line: usize, key: String, msg: String },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot build worker pool: {0}")]
    Pool(String),
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub theorems: Vec<String>,
    /// Field orders.
    pub q: Vec<u64>,
    /// None runs every k the check accepts.
    pub k: Option<Vec<usize>>,
    pub l: Option<Vec<usize>>,
    pub eta: EtaChoice,
    pub mode: Mode,
    pub samples: u64,
    pub budget: u64,
    pub coset_budget: u64,
    /// Rows not started before this many seconds are reported as errors.
    pub wall_clock_s: Option<u64>,
    pub seed: u64,
    pub workers: usize,
    /// Adds runtime_ms to each row, which makes reports differ run to run.
    pub timing: bool,
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            theorems: Vec::new(),
            q: Vec::new(),
            k: None,
            l: None,
            eta: EtaChoice::Pair,
            mode: Mode::Exhaustive,
            samples: DEFAULT_SAMPLES,
            budget: DEFAULT_SUBSET_BUDGET,
            coset_budget: DEFAULT_COSET_BUDGET as u64,
            wall_clock_s: None,
            seed: 0,
            workers: default_workers(),
            timing: false,
            output: None,
            csv: None,
        }
    }
}

fn parse_list<T: std::str::FromStr>(v: &str) -> Result<Vec<T>, String> {
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let (b, inclusive) = match b.strip_prefix('=') {
                Some(b) => (b, true),
                None => (b, false),
            };
            let a: u64 = a.trim().parse().map_err(|_| format!("bad range start in {part:?}"))?;
            let b: u64 = b.trim().parse().map_err(|_| format!("bad range end in {part:?}"))?;
            let end = if inclusive { b + 1 } else { b };
            for x in a..end {
                out.push(x.to_string().parse().map_err(|_| format!("bad value {x}"))?);
            }
        } else {
            out.push(part.parse().map_err(|_| format!("bad value {part:?}"))?);
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

fn parse_one<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("bad value {v:?}"))
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut c = RunConfig::default();
    let (mut p, mut m): (Option<u64>, Option<Vec<u32>>) = (None, None);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, val) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let (key, val) = (key.trim(), val.trim());
        let res: Result<(), String> = match key {
            "theorems" | "theorem" => {
                parse_list::<String>(val).and_then(|ids| match ids.iter().find(|id| theorem_info(id).is_none()) {
                    Some(bad) => Err(format!("unknown theorem id {bad:?}")),
                    None => {
                        c.theorems = ids;
                        Ok(())
                    }
                })
            }
            "q" => parse_list(val).map(|v| c.q = v),
            "p" => parse_one(val).map(|v| p = Some(v)),
            "m" => parse_list(val).map(|v| m = Some(v)),
            "k" => parse_list(val).map(|v| c.k = Some(v)),
            "l" => parse_list(val).map(|v| c.l = Some(v)),
            "eta" => val.parse().map(|v| c.eta = v),
            "mode" => val.parse().map(|v| c.mode = v),
            "samples" => parse_one(val).map(|v| c.samples = v),
            "budget" => parse_one(val).map(|v| c.budget = v),
            "coset_budget" => parse_one(val).map(|v| c.coset_budget = v),
            "wall_clock_s" => parse_one(val).map(|v| c.wall_clock_s = Some(v)),
            "seed" => parse_one(val).map(|v| c.seed = v),
            "workers" => parse_one(val).map(|v| c.workers = v),
            "timing" => parse_one(val).map(|v| c.timing = v),
            "output" => {
                let _: () = c.output = Some(PathBuf::from(val));
                Ok(())
            }
            "csv" => {
                let _: () = c.csv = Some(PathBuf::from(val));
                Ok(())
            }
            _ => Err("unknown key".into()),
        };
        res.map_err(|msg| ConfigError::Line { line, key: key.to_string(), msg })?;
    }
    match (p, m) {
        (Some(p), ms) => {
            if !c.q.is_empty() {
                return Err(ConfigError::Invalid("give either q or p (with m), not both".into()));
            }
            for m in ms.unwrap_or_else(|| vec![1]) {
                c.q.push(p.checked_pow(m).ok_or_else(|| ConfigError::Invalid(format!("{p}^{m} overflows")))?);
            }
        }
        (None, Some(_)) => return Err(ConfigError::Invalid("m needs p".into())),
        (None, None) => {}
    }
    validate(&c)?;
    Ok(c)
}

pub fn validate(c: &RunConfig) -> Result<(), ConfigError> {
    let bad = |s: &str| Err(ConfigError::Invalid(s.into()));
    if c.theorems.is_empty() {
        return bad("no theorems given");
    }
    if c.q.is_empty() {
        return bad("no field order given");
    }
    if c.budget == 0 || c.coset_budget == 0 || c.samples == 0 || c.wall_clock_s == Some(0) {
        return bad("budgets and samples must be positive");
    }
    if c.workers == 0 {
        return bad("workers must be positive");
    }
    if let Some(id) = c.theorems.iter().find(|id| theorem_info(id).is_none()) {
        return Err(ConfigError::Invalid(format!("unknown theorem id {id:?}")));
    }
    Ok(())
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Writes a config that `parse_config` reads back unchanged.
pub fn emit_config(c: &RunConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "theorems = {}", join(&c.theorems));
    let _ = writeln!(s, "q = {}", join(&c.q));
    if let Some(k) = &c.k {
        let _ = writeln!(s, "k = {}", join(k));
    }
    if let Some(l) = &c.l {
        let _ = writeln!(s, "l = {}", join(l));
    }
    let _ = writeln!(s, "eta = {}", c.eta);
    let _ = writeln!(s, "mode = {}", c.mode);
    let _ = writeln!(s, "samples = {}", c.samples);
    let _ = writeln!(s, "budget = {}", c.budget);
    let _ = writeln!(s, "coset_budget = {}", c.coset_budget);
    if let Some(w) = c.wall_clock_s {
        let _ = writeln!(s, "wall_clock_s = {w}");
    }
    let _ = writeln!(s, "seed = {}", c.seed);
    let _ = writeln!(s, "workers = {}", c.workers);
    let _ = writeln!(s, "timing = {}", c.timing);
    if let Some(o) = &c.output {
        let _ = writeln!(s, "output = {}", o.display());
    }
    if let Some(o) = &c.csv {
        let _ = writeln!(s, "csv = {}", o.display());
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Pass,
    Fail,
    Vacuous,
    SampledConsistent,
    Error,
}

impl From<Status> for RowStatus {
    fn from(s: Status) -> RowStatus {
        match s {
            Status::Pass => RowStatus::Pass,
            Status::Fail => RowStatus::Fail,
            Status::Vacuous => RowStatus::Vacuous,
            Status::SampledConsistent => RowStatus::SampledConsistent,
        }
    }
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Pass => "pass",
            RowStatus::Fail => "fail",
            RowStatus::Vacuous => "vacuous",
            RowStatus::SampledConsistent => "sampled-consistent",
            RowStatus::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub theorem: String,
    pub params: VerifyParams,
    pub status: RowStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub witness: Option<Value>,
    pub counterexamples: Vec<Value>,
    pub counts: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl Row {
    fn from_report(r: VerifyReport) -> Row {
        Row {
            theorem: r.theorem,
            params: r.params,
            status: r.status.into(),
            error: None,
            witness: r.witnesses.into_iter().next(),
            counterexamples: r.counterexamples,
            counts: r.counts,
            notes: r.notes,
            runtime_ms: None,
        }
    }

    fn error(theorem: &str, params: VerifyParams, msg: String) -> Row {
        Row {
            theorem: theorem.to_string(),
            params,
            status: RowStatus::Error,
            error: Some(msg),
            witness: None,
            counterexamples: Vec::new(),
            counts: BTreeMap::new(),
            notes: Vec::new(),
            runtime_ms: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: u64,
    pub fail: u64,
    pub vacuous: u64,
    pub sampled_consistent: u64,
    pub error: u64,
}

impl Summary {
    pub fn ok(&self) -> bool {
        self.fail == 0 && self.error == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub config: RunConfig,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("theorem,q,k,l,eta,mode,seed,status,failures,error\n");
        for r in &self.rows {
            let opt = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
            let fields = [
                r.theorem.clone(),
                r.params.q.to_string(),
                opt(r.params.k),
                opt(r.params.l),
                r.params.eta.to_string(),
                r.params.mode.to_string(),
                r.params.seed.to_string(),
                r.status.as_str().to_string(),
                r.counts.get("failures").copied().unwrap_or(0).to_string(),
                r.error.clone().unwrap_or_default(),
            ];
            let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

fn csv_field(f: &str) -> String {
    if f.contains([',', '"', '\n']) {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}

/// Grid points in report order: theorem, then q, then k, then l.
pub fn grid(c: &RunConfig) -> Vec<(String, VerifyParams)> {
    let ks: Vec<Option<usize>> = c.k.as_ref().map_or(vec![None], |v| v.iter().map(|&x| Some(x)).collect());
    let ls: Vec<Option<usize>> = c.l.as_ref().map_or(vec![None], |v| v.iter().map(|&x| Some(x)).collect());
    let mut out = Vec::new();
    for id in &c.theorems {
        for &q in &c.q {
            for &k in &ks {
                for &l in &ls {
                    let p = VerifyParams {
                        q,
                        k,
                        l,
                        eta: c.eta,
                        mode: c.mode,
                        budget: c.budget,
                        coset_budget: c.coset_budget,
                        samples: c.samples,
                        seed: c.seed,
                    };
                    out.push((id.clone(), p));
                }
            }
        }
    }
    out
}

/// Worker count after the environment override.
pub fn effective_workers(c: &RunConfig) -> Result<usize, ConfigError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(ConfigError::Invalid(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(c.workers),
    }
}

pub fn run(config: &RunConfig) -> Result<Report, RunError> {
    validate(config)?;
    let workers = effective_workers(config)?;
    run_with_workers(config, workers)
}

pub fn run_with_workers(config: &RunConfig, workers: usize) -> Result<Report, RunError> {
    validate(config)?;
    let points = grid(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| RunError::Pool(e.to_string()))?;
    let start = Instant::now();
    let deadline = config.wall_clock_s.map(Duration::from_secs);
    let rows: Vec<Row> = pool.install(|| {
        points
            .par_iter()
            .map(|(id, p)| {
                if deadline.is_some_and(|d| start.elapsed() >= d) {
                    return Row::error(id, p.clone(), "wall-clock budget exceeded before start".into());
                }
                let t = Instant::now();
                let mut row = match verify_untimed(id, p) {
                    Ok(r) => Row::from_report(r),
                    Err(e) => Row::error(id, p.clone(), e.to_string()),
                };
                if config.timing {
                    row.runtime_ms = Some(t.elapsed().as_millis() as u64);
                }
                row
            })
            .collect()
    });
    let mut summary = Summary::default();
    for r in &rows {
        match r.status {
            RowStatus::Pass => summary.pass += 1,
            RowStatus::Fail => summary.fail += 1,
            RowStatus::Vacuous => summary.vacuous += 1,
            RowStatus::SampledConsistent => summary.sampled_consistent += 1,
            RowStatus::Error => summary.error += 1,
        }
    }
    Ok(Report { tool_version: env!("CARGO_PKG_VERSION").to_string(), config: config.clone(), rows, summary })
}

/// Writes the JSON report (and CSV if configured); returns the paths written.
pub fn write_outputs(report: &Report) -> Result<Vec<PathBuf>, RunError> {
    let mut written = Vec::new();
    let mut put = |path: &PathBuf, text: String| -> Result<(), RunError> {
        std::fs::write(path, text).map_err(|source| RunError::Write { path: path.display().to_string(), source })?;
        written.push(path.clone());
        Ok(())
    };
    if let Some(p) = &report.config.output {
        put(p, report.to_json())?;
    }
    if let Some(p) = &report.config.csv {
        put(p, report.to_csv())?;
    }
    Ok(written)
}
