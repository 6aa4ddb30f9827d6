//! Command-line surface. Every command builds a JSON report; without `--json` the same report
//! is printed as indented `key: value` lines.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{
    classify, is_non_wandering, patching_check, search_returns, tmf_monoid, tmf_oracle, tmf_paper_bound, TmfMode,
    TmfReport, DEFAULT_ORACLE_LEN,
};
use crate::config::Limits;
use crate::corpus::{generate, CorpusSpec};
use crate::error::Error;
use crate::format::{load_presentation, PresentationDocument};
use crate::measure::{verify_decomposition_identity, verify_main_theorem, MeasureDocument, TheoremOutcome};
use crate::monoid::{monoid_stats, ContextMonoid};
use crate::presentation::Presentation;
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "soficlab", version, about = "Decision procedures for sofic shifts and exact Markov measures")]
pub struct Cli {
    /// Emit the JSON report instead of the text rendering.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cap on subset-construction states.
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_SUBSET_STATES)]
    pub max_states: usize,
    /// Maximal word length for oracle searches.
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    /// Seed for corpus generation.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Include wall-clock timing (makes reports non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full classification of a presentation.
    Classify { file: PathBuf },
    /// TMF decision in one mode.
    Tmf {
        file: PathBuf,
        #[arg(long, default_value = "monoid")]
        mode: String,
    },
    /// Transition monoid and follower/predecessor/context counts.
    Monoid { file: PathBuf },
    /// Brute-force searches compared against the fast decisions.
    Oracle { file: PathBuf },
    /// Exact measure checks.
    #[command(subcommand)]
    Measure(MeasureCommand),
    /// Random corpora.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Debug, Subcommand)]
pub enum MeasureCommand {
    /// Markov and MRF window checks.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = "2,2,2")]
        mrf_window: String,
        #[arg(long, default_value = "3,3")]
        markov_window: String,
    },
    /// Support of the measure as a presentation.
    Support {
        #[arg(long)]
        file: PathBuf,
    },
    /// Block decomposition identity for an irreducible chain.
    DecompIdentity {
        #[arg(long)]
        file: PathBuf,
        #[arg(long = "r")]
        r: usize,
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "i")]
        i: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Writes a seeded corpus of presentation files and a summary.
    Gen(GenArgs),
    /// Classifies every `.json` presentation in a directory.
    Run { dir: PathBuf },
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// State count range `MIN-MAX`.
    #[arg(long, default_value = "1-3")]
    pub states: String,
    /// Alphabet size range `MIN-MAX`.
    #[arg(long, default_value = "1-3")]
    pub symbols: String,
    /// Edge probability `p/q`.
    #[arg(long, default_value = "1/4")]
    pub density: String,
}

/// Failure carrying the exit code and, for resource caps, a partial report.
struct Failure {
    code: i32,
    message: String,
    partial: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceCap { .. } => EXIT_CAP,
            Error::Inconsistency(_) => EXIT_INCONSISTENT,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string(), partial: None }
    }
}

fn input_failure(message: String) -> Failure {
    Failure { code: EXIT_INPUT, message, partial: None }
}

struct Outcome {
    report: Value,
    code: i32,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let start = Instant::now();
    let limits = Limits { max_subset_states: cli.max_states, ..Limits::default() };
    match execute(&cli, &limits) {
        Ok(Outcome { mut report, code }) => {
            if cli.timing {
                report["timing_ms"] = json!(start.elapsed().as_millis());
            }
            emit(&cli, out, &report);
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            let report = match f.partial {
                Some(partial) => Some(partial),
                None if f.code == EXIT_CAP => {
                    Some(envelope(command_name(&cli.command), None, "resource_cap", json!({ "error": f.message })))
                }
                None => None,
            };
            if let Some(report) = report {
                emit(&cli, out, &report);
            }
            f.code
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify { .. } => "classify",
        Command::Tmf { .. } => "tmf",
        Command::Monoid { .. } => "monoid",
        Command::Oracle { .. } => "oracle",
        Command::Measure(MeasureCommand::Check { .. }) => "measure check",
        Command::Measure(MeasureCommand::Support { .. }) => "measure support",
        Command::Measure(MeasureCommand::DecompIdentity { .. }) => "measure decomp-identity",
        Command::Corpus(CorpusCommand::Gen(_)) => "corpus gen",
        Command::Corpus(CorpusCommand::Run { .. }) => "corpus run",
    }
}

fn emit(cli: &Cli, out: &mut dyn Write, report: &Value) {
    let text = if cli.json {
        serde_json::to_string_pretty(report).expect("reports serialize")
    } else {
        let mut s = String::new();
        render_text(report, 0, &mut s);
        s.trim_end().to_string()
    };
    let _ = writeln!(out, "{text}");
}

/// Indented `key: value` rendering of a JSON value.
pub fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(m) if !m.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(val, indent + 1, out);
                    }
                    Value::Array(a) if !a.iter().all(is_flat) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(val))),
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                if !is_flat(item) {
                    out.push_str(&format!("{pad}- [{i}]\n"));
                    render_text(item, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}- {}\n", scalar(item)));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

/// Scalars and arrays of scalars print on one line.
fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(_) => "{}".into(),
        other => other.to_string(),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(Vec<u8>, Presentation), Failure> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| input_failure(format!("{}: {e}", path.display())))?;
    let p = load_presentation(&text).map_err(|e| input_failure(format!("{}: {e}", path.display())))?;
    Ok((bytes, p))
}

fn envelope<T: Serialize>(command: &str, input: Option<&[u8]>, status: &'static str, result: T) -> Value {
    to_value(&Report::new(command, input, status, result))
}

/// Trims `p`, or produces the empty-shift report.
fn trimmed(command: &str, bytes: &[u8], p: &Presentation) -> Result<Result<Presentation, Outcome>, Failure> {
    match p.trim_essential() {
        Ok(t) => Ok(Ok(t)),
        Err(Error::EmptyShift) => {
            Ok(Err(Outcome { report: envelope(command, Some(bytes), "empty_shift", Value::Null), code: EXIT_OK }))
        }
        Err(e) => Err(e.into()),
    }
}

fn execute(cli: &Cli, limits: &Limits) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Classify { file } => cmd_classify(file, limits),
        Command::Tmf { file, mode } => cmd_tmf(file, mode, cli.max_len, limits),
        Command::Monoid { file } => cmd_monoid(file, limits),
        Command::Oracle { file } => cmd_oracle(file, cli.max_len.unwrap_or(DEFAULT_ORACLE_LEN), limits),
        Command::Measure(m) => cmd_measure(m, limits),
        Command::Corpus(CorpusCommand::Gen(args)) => cmd_corpus_gen(args, cli.seed),
        Command::Corpus(CorpusCommand::Run { dir }) => cmd_corpus_run(dir, limits),
    }
}

fn cmd_classify(file: &Path, limits: &Limits) -> Result<Outcome, Failure> {
    let (bytes, p) = load(file)?;
    let p = match trimmed("classify", &bytes, &p)? {
        Ok(p) => p,
        Err(o) => return Ok(o),
    };
    let r = classify(&p, limits)?;
    let code = if r.consistent { EXIT_OK } else { EXIT_INCONSISTENT };
    let status = if r.consistent { "ok" } else { "inconsistent" };
    Ok(Outcome { report: envelope("classify", Some(&bytes), status, r), code })
}

fn cmd_tmf(file: &Path, mode: &str, max_len: Option<usize>, limits: &Limits) -> Result<Outcome, Failure> {
    let mode: TmfMode = mode.parse()?;
    let (bytes, p) = load(file)?;
    let p = match trimmed("tmf", &bytes, &p)? {
        Ok(p) => p,
        Err(o) => return Ok(o),
    };
    let v = match mode {
        TmfMode::Oracle => tmf_oracle(&p, max_len.unwrap_or(DEFAULT_ORACLE_LEN), limits)?,
        TmfMode::Monoid => tmf_monoid(&ContextMonoid::build(&p, limits)?),
        TmfMode::PaperBound => tmf_paper_bound(&ContextMonoid::build(&p, limits)?, limits)?,
    };
    Ok(Outcome { report: envelope("tmf", Some(&bytes), "ok", TmfReport::new(&p, &v)), code: EXIT_OK })
}

#[derive(Serialize)]
struct MonoidReport {
    states: usize,
    symbols: usize,
    stats: crate::monoid::MonoidStats,
    end_sets: usize,
    start_sets: usize,
    context_count_bound: String,
    elements: Vec<MonoidElement>,
}

#[derive(Serialize)]
struct MonoidElement {
    witness: String,
    pairs: Vec<[String; 2]>,
    signature: usize,
}

fn cmd_monoid(file: &Path, limits: &Limits) -> Result<Outcome, Failure> {
    let (bytes, p) = load(file)?;
    let p = match trimmed("monoid", &bytes, &p)? {
        Ok(p) => p,
        Err(o) => return Ok(o),
    };
    let cm = ContextMonoid::build(&p, limits)?;
    let stats = monoid_stats(&cm, limits)?;
    let elements = (0..cm.monoid.len())
        .map(|id| MonoidElement {
            witness: p.render(cm.monoid.witness(id)),
            pairs: cm.monoid.element(id).pairs().map(|(a, b)| [p.states()[a].clone(), p.states()[b].clone()]).collect(),
            signature: cm.signature_id(id),
        })
        .collect();
    let report = MonoidReport {
        states: p.num_states(),
        symbols: p.num_symbols(),
        context_count_bound: stats.context_count_bound().to_string(),
        stats,
        end_sets: cm.families.end_sets.len(),
        start_sets: cm.families.start_sets.len(),
        elements,
    };
    Ok(Outcome { report: envelope("monoid", Some(&bytes), "ok", report), code: EXIT_OK })
}

fn cmd_oracle(file: &Path, max_len: usize, limits: &Limits) -> Result<Outcome, Failure> {
    let (bytes, p) = load(file)?;
    let p = match trimmed("oracle", &bytes, &p)? {
        Ok(p) => p,
        Err(o) => return Ok(o),
    };
    let cm = ContextMonoid::build(&p, limits)?;
    let fast_tmf = tmf_monoid(&cm);
    let fast_nw = is_non_wandering(&cm)?;
    let mut result = serde_json::Map::new();
    result.insert("max_len".into(), json!(max_len));
    result.insert("monoid_tmf".into(), to_value(&TmfReport::new(&p, &fast_tmf)));
    result.insert("monoid_non_wandering".into(), json!(fast_nw.is_non_wandering));
    let partial = |result: &serde_json::Map<String, Value>, e: Error| -> Failure {
        let mut f = Failure::from(e);
        if f.code == EXIT_CAP {
            f.partial = Some(envelope("oracle", Some(&bytes), "resource_cap", Value::Object(result.clone())));
        }
        f
    };
    let oracle = tmf_oracle(&p, max_len, limits).map_err(|e| partial(&result, e))?;
    let tmf_agrees = oracle.is_tmf == fast_tmf.is_tmf
        || (!fast_tmf.is_tmf && fast_tmf.witness.as_ref().is_some_and(|w| w.w.len() + w.x.len() + w.y.len() > max_len));
    result.insert("oracle_tmf".into(), to_value(&TmfReport::new(&p, &oracle)));
    result.insert("tmf_agrees".into(), json!(tmf_agrees));
    let returns = search_returns(&p, max_len, limits).map_err(|e| partial(&result, e))?;
    // a missing return within the bound is inconclusive; a return for the monoid's witness is a contradiction
    let nw_contradiction =
        fast_nw.witness.as_ref().is_some_and(|u| 2 * u.len() < max_len && has_return(&p, u, max_len - 2 * u.len()));
    result.insert(
        "return_search".into(),
        json!({
            "words_checked": returns.words_checked,
            "no_return_within_bound": returns.no_return.as_ref().map(|u| p.render(u)),
        }),
    );
    result.insert("non_wandering_agrees".into(), json!(!nw_contradiction));
    let patch = patching_check(&p, max_len, limits).map_err(|e| partial(&result, e))?;
    let patching_agrees = patch.is_none() == oracle.is_tmf;
    result.insert(
        "patching".into(),
        json!({
            "holds": patch.is_none(),
            "failure": patch.as_ref().map(|f| json!({
                "left": p.render(&f.left),
                "right": p.render(&f.right),
                "interior": f.interior,
                "spliced": p.render(&f.spliced),
            })),
        }),
    );
    result.insert("patching_agrees".into(), json!(patching_agrees));
    let agree = tmf_agrees && !nw_contradiction && patching_agrees;
    let code = if agree { EXIT_OK } else { EXIT_INCONSISTENT };
    let status = if agree { "ok" } else { "inconsistent" };
    Ok(Outcome { report: envelope("oracle", Some(&bytes), status, Value::Object(result)), code })
}

fn has_return(p: &Presentation, u: &crate::Word, max_v: usize) -> bool {
    let mut found = false;
    for len in 1..=max_v {
        p.for_each_word(len, &mut |v, _| {
            found = found || p.contains_word(&crate::Word([u.symbols(), v, u.symbols()].concat()));
        });
    }
    found
}

fn parse_window<const N: usize>(text: &str) -> Result<[usize; N], Failure> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| input_failure(format!("window `{text}`: {e}")))?;
    parts.try_into().map_err(|_| input_failure(format!("window `{text}` must have {N} comma-separated numbers")))
}

fn load_measure(file: &Path) -> Result<(Vec<u8>, crate::measure::HiddenMarkovMeasure), Failure> {
    let bytes = read(file)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| input_failure(format!("{}: {e}", file.display())))?;
    let m = MeasureDocument::parse(&text)
        .and_then(MeasureDocument::into_measure)
        .map_err(|e| input_failure(format!("{}: {e}", file.display())))?;
    Ok((bytes, m))
}

fn cmd_measure(cmd: &MeasureCommand, limits: &Limits) -> Result<Outcome, Failure> {
    match cmd {
        MeasureCommand::Check { file, mrf_window, markov_window } => {
            let [n, l, r] = parse_window::<3>(mrf_window)?;
            let [mn, ml] = parse_window::<2>(markov_window)?;
            let (bytes, m) = load_measure(file)?;
            let report = verify_main_theorem(&m, (n, l, r), (mn, ml), limits)?;
            let code = if report.outcome == TheoremOutcome::Inconsistent { EXIT_INCONSISTENT } else { EXIT_OK };
            let status = if code == EXIT_OK { "ok" } else { "inconsistent" };
            Ok(Outcome { report: envelope("measure check", Some(&bytes), status, report), code })
        }
        MeasureCommand::Support { file } => {
            let (bytes, m) = load_measure(file)?;
            match m.support() {
                Ok(s) => Ok(Outcome {
                    report: envelope(
                        "measure support",
                        Some(&bytes),
                        "ok",
                        PresentationDocument::from_presentation(&s),
                    ),
                    code: EXIT_OK,
                }),
                Err(Error::EmptyShift) => Ok(Outcome {
                    report: envelope("measure support", Some(&bytes), "empty_shift", Value::Null),
                    code: EXIT_OK,
                }),
                Err(e) => Err(e.into()),
            }
        }
        MeasureCommand::DecompIdentity { file, r, l, i } => {
            let (bytes, m) = load_measure(file)?;
            if !m.is_plain_chain() {
                return Err(input_failure("the decomposition identity needs an unlabelled chain".into()));
            }
            let check = verify_decomposition_identity(m.chain(), *r, *l, *i, limits)?;
            let code = if check.holds { EXIT_OK } else { EXIT_INCONSISTENT };
            let status = if check.holds { "ok" } else { "inconsistent" };
            Ok(Outcome { report: envelope("measure decomp-identity", Some(&bytes), status, check), code })
        }
    }
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || input_failure(format!("range `{text}` must look like MIN-MAX"));
    let (a, b) = text.split_once('-').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_density(text: &str) -> Result<(u32, u32), Failure> {
    let bad = || input_failure(format!("density `{text}` must look like p/q"));
    let (a, b) = text.split_once('/').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

#[derive(Serialize)]
struct CorpusGenReport {
    spec: CorpusSpec,
    files: Vec<String>,
}

fn cmd_corpus_gen(args: &GenArgs, seed: u64) -> Result<Outcome, Failure> {
    let (min_states, max_states) = parse_range(&args.states)?;
    let (min_symbols, max_symbols) = parse_range(&args.symbols)?;
    let spec = CorpusSpec {
        min_states,
        max_states,
        min_symbols,
        max_symbols,
        density: parse_density(&args.density)?,
        count: args.count,
        seed,
    };
    let items = generate(&spec).map_err(|e| input_failure(e.to_string()))?;
    std::fs::create_dir_all(&args.out).map_err(|e| input_failure(format!("{}: {e}", args.out.display())))?;
    let mut files = Vec::new();
    for (k, p) in items.iter().enumerate() {
        let name = format!("item-{k:04}.json");
        let text = PresentationDocument::from_presentation(p).to_json();
        if load_presentation(&text)? != *p {
            return Err(Failure::from(Error::Inconsistency(format!("{name} does not round-trip"))));
        }
        std::fs::write(args.out.join(&name), text + "\n")
            .map_err(|e| input_failure(format!("{}: {e}", args.out.display())))?;
        files.push(name);
    }
    let report = CorpusGenReport { spec, files };
    let json = serde_json::to_string_pretty(&envelope("corpus gen", None, "ok", &report)).expect("serializes");
    std::fs::write(args.out.join("summary.json"), json + "\n")
        .map_err(|e| input_failure(format!("{}: {e}", args.out.display())))?;
    Ok(Outcome { report: envelope("corpus gen", None, "ok", report), code: EXIT_OK })
}

#[derive(Default, Serialize)]
struct Strata {
    total: usize,
    empty: usize,
    capped: usize,
    tmf: usize,
    non_wandering: usize,
    tmc: usize,
    condition_c: usize,
    condition_d: usize,
    condition_e: usize,
    inconsistent: Vec<String>,
    tmc_not_tmf: Vec<String>,
}

fn cmd_corpus_run(dir: &Path, limits: &Limits) -> Result<Outcome, Failure> {
    let mut names: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| input_failure(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.file_name().is_some_and(|n| n != "summary.json"))
        .collect();
    names.sort();
    let mut s = Strata::default();
    let mut digest_input = Vec::new();
    for path in &names {
        let (bytes, p) = load(path)?;
        digest_input.extend_from_slice(&bytes);
        let name = path.file_name().expect("file").to_string_lossy().to_string();
        s.total += 1;
        let p = match p.trim_essential() {
            Ok(p) => p,
            Err(Error::EmptyShift) => {
                s.empty += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let r = match classify(&p, limits) {
            Ok(r) => r,
            Err(Error::ResourceCap { .. }) => {
                s.capped += 1;
                continue;
            }
            Err(Error::Inconsistency(_)) => {
                s.inconsistent.push(name);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        s.tmf += r.tmf.is_tmf as usize;
        s.non_wandering += r.nonwandering.is_non_wandering as usize;
        s.tmc += r.is_tmc as usize;
        s.condition_c += r.conditions.c as usize;
        s.condition_d += r.conditions.d as usize;
        s.condition_e += r.conditions.e as usize;
        if r.is_tmc && !r.tmf.is_tmf {
            s.tmc_not_tmf.push(name.clone());
        }
        if !r.consistent {
            s.inconsistent.push(name);
        }
    }
    let ok = s.inconsistent.is_empty() && s.tmc_not_tmf.is_empty();
    let code = if ok { EXIT_OK } else { EXIT_INCONSISTENT };
    let status = if ok { "ok" } else { "inconsistent" };
    Ok(Outcome { report: envelope("corpus run", Some(&digest_input), status, s), code })
}
