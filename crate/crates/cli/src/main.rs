use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use trs_lab::char_sums::{conic_count, gauss_sum, kloosterman, quad_complete_sum, weil_power_sum};
use trs_lab::code::DEFAULT_ENUM_BUDGET;
use trs_lab::deephole::{
    completeness_scan, t4_syndrome, witness_appendix_c, witness_lemma410, witness_lemma411, witness_lemma47,
    witness_t4_vanishing, GroupSetting, ScanMode, SymCondition,
};
use trs_lab::report::{effective_workers, load_config, run_with_workers, write_outputs};
use trs_lab::trs::{TrsCode, TrsParams};
use trs_lab::verify::{theorem_info, verify, EtaChoice, Mode, Status, VerifyParams, THEOREMS};
use trs_lab::{Elem, Field};

#[derive(Parser)]
#[command(name = "trs-lab", version, about = "Twisted Reed-Solomon codes: covering radius, deep holes, character sums")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Field order: either --q, or --p with --m.
#[derive(Args, Clone)]
struct FieldArgs {
    /// Field order q = p^m
    #[arg(long, conflicts_with = "p")]
    q: Option<u64>,
    #[arg(long, requires = "m")]
    p: Option<u64>,
    #[arg(long, requires = "p")]
    m: Option<u32>,
}

impl FieldArgs {
    fn order(&self, default: Option<u64>) -> Result<u64, String> {
        match (self.q, self.p, self.m) {
            (Some(q), _, _) => Ok(q),
            (None, Some(p), Some(m)) => p.checked_pow(m).ok_or_else(|| format!("{p}^{m} overflows")),
            _ => default.ok_or_else(|| "give --q or --p with --m".into()),
        }
    }

    fn field(&self) -> Result<Field, String> {
        let q = self.order(None)?;
        Field::with_order(q).map_err(|e| format!("q = {q}: {e}"))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the field's modulus, generator and optionally its log table
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        table: bool,
    },
    /// Print generator and parity-check matrices of a TRS code
    TrsInfo {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        /// Packed twist coefficient
        #[arg(long, default_value_t = 1)]
        eta: u32,
        /// Evaluate on all of F_q instead of F_q^*
        #[arg(long)]
        full: bool,
    },
    /// Classify syndromes of the F_q^*, l = k − 1 code against the family (0,…,0,a)
    Scan {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        eta: u32,
        #[arg(long, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Evaluate one character sum exactly
    Charsum {
        #[command(subcommand)]
        kind: SumKind,
    },
    /// Run one theorem check and print its JSON report
    Verify {
        /// Theorem id; omit with --list
        id: Option<String>,
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// pair, all, or a packed element
        #[arg(long, default_value = "pair")]
        eta: EtaChoice,
        #[arg(long, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 100_000_000)]
        coset_budget: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Construct one witness subset
    Witness {
        #[command(subcommand)]
        kind: WitnessKind,
    },
    /// Run a batch config and write its JSON (and CSV) report
    Report {
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SumKind {
    /// G(χ_psi, ψ_a) with χ_psi(ξ) = ζ^psi
    Gauss {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        psi: u64,
        #[arg(long)]
        a: u32,
    },
    /// Σ_c ψ_1(ac + b/c)
    Kloosterman {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
    },
    /// Σ_c ψ_b(a2c² + a1c + a0) against its closed form
    Quad {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        a2: u32,
        #[arg(long)]
        a1: u32,
        #[arg(long)]
        a0: u32,
    },
    /// Σ_c ψ_1(ac^n + b)
    Weil {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        n: u64,
    },
    /// Points on a1X² + a2Y² = b (odd q)
    Conic {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        a1: u32,
        #[arg(long)]
        a2: u32,
        #[arg(long)]
        b: u32,
    },
}

#[derive(Subcommand)]
enum WitnessKind {
    /// r-subset of F_q^* summing to η⁻¹
    Sum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        eta: u32,
    },
    /// r-subset with c_1 − ηc_2 + ηc_1² + b = 0
    Quadratic {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        eta: u32,
        #[arg(long)]
        b: u32,
    },
    /// 3-subset rejecting the syndrome (0, 2bη, b, b/(4η))
    T1 {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        eta: u32,
        #[arg(long)]
        b: u32,
    },
    /// r-subset rejecting the geometric syndrome built from (a0, a1)
    T4 {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        eta: u32,
        #[arg(long)]
        a0: u32,
        #[arg(long)]
        a1: u32,
    },
    /// i-subset of F_q^* with the symmetric-function condition C1 or C2
    Sym {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<String> for Failure {
    fn from(s: String) -> Failure {
        Failure::Usage(s)
    }
}

fn elem(f: &Field, v: u32, name: &str) -> Result<Elem, String> {
    if v >= f.q() {
        return Err(format!("--{name} must be a packed element below {}, got {v}", f.q()));
    }
    Ok(f.from_packed(v))
}

fn unit(f: &Field, v: u32, name: &str) -> Result<Elem, String> {
    let e = elem(f, v, name)?;
    if e.is_zero() {
        return Err(format!("--{name} must be nonzero"));
    }
    Ok(e)
}

fn packed(f: &Field, xs: &[Elem]) -> Vec<u32> {
    xs.iter().map(|&x| f.packed(x)).collect()
}

fn matrix_json(f: &Field, m: &trs_lab::linalg::Matrix) -> Value {
    let rows: Vec<Vec<u32>> = (0..m.rows()).map(|i| packed(f, m.row(i))).collect();
    json!(rows)
}

// a closed pipe (e.g. `| head`) is not an error worth a panic
fn print(v: &Value) {
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn err<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn field_cmd(fa: &FieldArgs, table: bool) -> Result<(), Failure> {
    let f = fa.field()?;
    let mut v = json!({
        "p": f.p(),
        "m": f.m(),
        "q": f.q(),
        "modulus": f.modulus(),
        "xi": f.packed(f.xi()),
    });
    if table {
        let logs: Vec<Value> = f.nonzero().map(|x| json!({"packed": f.packed(x), "log": f.log(x)})).collect();
        v["log_table"] = json!(logs);
    }
    print(&v);
    Ok(())
}

fn trs_info(fa: &FieldArgs, k: usize, l: usize, eta: u32, full: bool) -> Result<(), Failure> {
    let f = fa.field()?;
    let eta = unit(&f, eta, "eta")?;
    let p = if full { TrsParams::full(&f, k, l, eta) } else { TrsParams::punctured(&f, k, l, eta) }.map_err(err)?;
    let c = TrsCode::new(&f, p).map_err(err)?;
    let v = json!({
        "q": f.q(),
        "n": c.n(),
        "k": c.k(),
        "l": l,
        "eta": f.packed(eta),
        "A": packed(&f, &c.params.a),
        "generator": matrix_json(&f, c.generator()),
        "parity_check": matrix_json(&f, c.parity_check()),
        "is_mds": c.code.is_mds(&f, DEFAULT_ENUM_BUDGET).ok(),
    });
    print(&v);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn scan(fa: &FieldArgs, k: usize, eta: u32, mode: Mode, samples: u64, seed: u64, budget: u64) -> Result<(), Failure> {
    let f = fa.field()?;
    let eta = unit(&f, eta, "eta")?;
    let gs = GroupSetting::new(&f, k, eta).map_err(err)?;
    let mode = match mode {
        Mode::Exhaustive => ScanMode::Exhaustive,
        Mode::Sampled => ScanMode::Sampled { samples, seed },
    };
    let rep = completeness_scan(&f, &gs, mode, budget as u128).map_err(err)?;
    let extra: Vec<Vec<u32>> = rep.extra_deep.iter().map(|a| packed(&f, a)).collect();
    print(&json!({
        "q": rep.q,
        "k": rep.k,
        "r": rep.r,
        "eta": f.packed(rep.eta),
        "mode": rep.mode,
        "range": rep.range,
        "in_range": rep.in_range,
        "checked": rep.checked,
        "deep": rep.deep,
        "extra_deep": extra,
        "extra_deep_count": rep.extra_deep_count,
        "missing_family": rep.missing_family,
        "family_only": rep.family_only(),
    }));
    if rep.in_range && !rep.family_only() {
        return Err(Failure::Checks);
    }
    Ok(())
}

fn charsum(kind: &SumKind) -> Result<(), Failure> {
    let (v, ok) = match kind {
        SumKind::Gauss { field, psi, a } => {
            let f = field.field()?;
            let a = elem(&f, *a, "a")?;
            let g = gauss_sum(&f, *psi, a);
            let abs2 = g.to_complex().norm_sqr();
            (json!({"sum": g.to_string(), "abs_square": abs2}), true)
        }
        SumKind::Kloosterman { field, a, b } => {
            let f = field.field()?;
            let r = kloosterman(&f, elem(&f, *a, "a")?, elem(&f, *b, "b")?).map_err(err)?;
            (json!({"sum": r.sum.to_string(), "bound": r.bound}), r.bound.holds != Some(false))
        }
        SumKind::Quad { field, b, a2, a1, a0 } => {
            let f = field.field()?;
            let r = quad_complete_sum(
                &f,
                elem(&f, *b, "b")?,
                elem(&f, *a2, "a2")?,
                elem(&f, *a1, "a1")?,
                elem(&f, *a0, "a0")?,
            )
            .map_err(err)?;
            (json!({"sum": r.sum.to_string(), "closed_form": r.closed_form.to_string(), "holds": r.holds()}), r.holds())
        }
        SumKind::Weil { field, a, b, n } => {
            let f = field.field()?;
            let r = weil_power_sum(&f, elem(&f, *a, "a")?, elem(&f, *b, "b")?, *n).map_err(err)?;
            let ok = r.gcd_bound.holds != Some(false) && r.exponent_bound.holds != Some(false);
            (
                json!({"sum": r.sum.to_string(), "d": r.d, "gcd_bound": r.gcd_bound, "exponent_bound": r.exponent_bound}),
                ok,
            )
        }
        SumKind::Conic { field, a1, a2, b } => {
            let f = field.field()?;
            let r = conic_count(&f, elem(&f, *a1, "a1")?, elem(&f, *a2, "a2")?, elem(&f, *b, "b")?).map_err(err)?;
            (json!({"count": r.count, "formula": r.formula, "holds": r.holds()}), r.holds())
        }
    };
    print(&v);
    if ok {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn witness(kind: &WitnessKind) -> Result<(), Failure> {
    let found: Result<Vec<Elem>, trs_lab::deephole::DeepholeError>;
    let f;
    match kind {
        WitnessKind::Sum { field, r, eta } => {
            f = field.field()?;
            found = witness_lemma47(&f, *r, unit(&f, *eta, "eta")?);
        }
        WitnessKind::Quadratic { field, r, eta, b } => {
            f = field.field()?;
            found = witness_lemma410(&f, elem(&f, *b, "b")?, *r, unit(&f, *eta, "eta")?).map(|w| w.subset);
        }
        WitnessKind::T1 { field, eta, b } => {
            f = field.field()?;
            if f.q() < 7 {
                return Err(Failure::Usage("needs q ≥ 7".into()));
            }
            let gs = GroupSetting::new(&f, f.q() as usize - 5, unit(&f, *eta, "eta")?).map_err(err)?;
            found = witness_lemma411(&f, &gs, unit(&f, *b, "b")?);
        }
        WitnessKind::T4 { field, r, eta, a0, a1 } => {
            f = field.field()?;
            let eta = unit(&f, *eta, "eta")?;
            if *r + 2 >= f.q() as usize {
                return Err(Failure::Usage(format!("r must be below q − 2 = {}", f.q() - 2)));
            }
            let gs = GroupSetting::new(&f, f.q() as usize - 2 - r, eta).map_err(err)?;
            let a = t4_syndrome(&f, eta, unit(&f, *a0, "a0")?, unit(&f, *a1, "a1")?, *r).map_err(err)?;
            found = witness_t4_vanishing(&f, &gs, &a);
        }
        WitnessKind::Sym { field, kind, i, j } => {
            f = field.field()?;
            let kind = match kind.as_str() {
                "C1" | "c1" => SymCondition::C1,
                "C2" | "c2" => SymCondition::C2,
                _ => return Err(Failure::Usage(format!("--kind must be C1 or C2, got {kind:?}"))),
            };
            found = witness_appendix_c(&f, kind, *i, *j).map(|w| w.subset);
        }
    }
    match found {
        Ok(s) => {
            print(&json!({"subset": packed(&f, &s)}));
            Ok(())
        }
        Err(trs_lab::deephole::DeepholeError::Exhausted(msg)) => {
            print(&json!({"subset": null, "exhausted": msg}));
            Err(Failure::Checks)
        }
        Err(e) => Err(err(e)),
    }
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    id: Option<&str>,
    list: bool,
    fa: &FieldArgs,
    k: Option<usize>,
    l: Option<usize>,
    eta: EtaChoice,
    mode: Mode,
    budget: u64,
    coset_budget: u64,
    samples: u64,
    seed: u64,
) -> Result<(), Failure> {
    if list {
        let mut out = std::io::stdout().lock();
        for t in THEOREMS {
            let _ = writeln!(out, "{:<16} q={:<3} {}", t.id, t.default_q, t.summary);
        }
        return Ok(());
    }
    let id = id.ok_or_else(|| "give a theorem id or --list".to_string())?;
    let info = theorem_info(id).ok_or_else(|| format!("unknown theorem id {id:?}; see verify --list"))?;
    let p = VerifyParams { q: fa.order(Some(info.default_q))?, k, l, eta, mode, budget, coset_budget, samples, seed };
    let rep = verify(id, &p).map_err(err)?;
    print(&serde_json::to_value(&rep).expect("json"));
    if rep.status == Status::Fail {
        return Err(Failure::Checks);
    }
    Ok(())
}

fn report_cmd(
    config: &Path,
    workers: Option<usize>,
    output: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> Result<(), Failure> {
    let mut c = load_config(config).map_err(err)?;
    if output.is_some() {
        c.output = output;
    }
    if csv.is_some() {
        c.csv = csv;
    }
    if let Some(w) = workers {
        c.workers = w;
    }
    let workers = effective_workers(&c).map_err(err)?;
    let rep = run_with_workers(&c, workers).map_err(err)?;
    let written = write_outputs(&rep).map_err(err)?;
    if written.is_empty() {
        let _ = write!(std::io::stdout().lock(), "{}", rep.to_json());
    }
    let s = &rep.summary;
    eprintln!(
        "{} rows: {} pass, {} fail, {} vacuous, {} sampled-consistent, {} error",
        rep.rows.len(),
        s.pass,
        s.fail,
        s.vacuous,
        s.sampled_consistent,
        s.error
    );
    for p in written {
        eprintln!("wrote {}", p.display());
    }
    if s.ok() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Field { field, table } => field_cmd(field, *table),
        Cmd::TrsInfo { field, k, l, eta, full } => trs_info(field, *k, *l, *eta, *full),
        Cmd::Scan { field, k, eta, mode, samples, seed, budget } => {
            scan(field, *k, *eta, *mode, *samples, *seed, *budget)
        }
        Cmd::Charsum { kind } => charsum(kind),
        Cmd::Verify { id, list, field, k, l, eta, mode, budget, coset_budget, samples, seed } => {
            verify_cmd(id.as_deref(), *list, field, *k, *l, *eta, *mode, *budget, *coset_budget, *samples, *seed)
        }
        Cmd::Witness { kind } => witness(kind),
        Cmd::Report { config, workers, output, csv } => report_cmd(config, *workers, output.clone(), csv.clone()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
