//! `schubgal`: command-line front end.
//!
//! Settings resolve as flag, then environment variable, then default:
//!
//! | flag        | variable          | default        |
//! |-------------|-------------------|----------------|
//! | `--prime`   | `SCHUBGAL_PRIME`  | 1009           |
//! | `--samples` | `SCHUBGAL_SAMPLES`| tiered budget  |
//! | `--seed`    | `SCHUBGAL_SEED`   | random, logged |
//! | `--workers` | `SCHUBGAL_WORKERS`| 1              |
//! | `--out`     | `SCHUBGAL_OUT`    | stdout         |
//! | `--format`  | `SCHUBGAL_FORMAT` | text           |
//!
//! Exit codes: 0 success, 64 bad arguments or unparsable input, 65 bad data
//! (I/O, corrupt logs, algebra failures), 2 when some survey record or the
//! classified problem failed with an error.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use schubgal::classifier::{
    classify, read_log, survey, write_summary_csv, ClassifierConfig, SampleBudget,
    SamplingPolicy, Verdict,
};
use schubgal::deficiency::{detect, predicted_bound_base};
use schubgal::ffalg::PrimeModulus;
use schubgal::groups::{census_symmetric, wreath_census_cached, Census, CycleType, WreathSpec};
use schubgal::sampler::{run_frobenius, SampleReport, SamplerConfig};
use schubgal::schubert::{
    enumerate_reduced, reduce_fully, BoxShape, CountFilter, ReductionOutcome,
};
use schubgal::SchubertProblem;

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_PARTIAL: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "schubgal", version, about = "Galois groups of Schubert problems")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Prime for the finite field.
    #[arg(long, global = true, env = "SCHUBGAL_PRIME", default_value_t = PrimeModulus::DEFAULT)]
    prime: u32,

    /// Attempts per problem; overrides the tiered budget.
    #[arg(long, global = true, env = "SCHUBGAL_SAMPLES")]
    samples: Option<u64>,

    /// Base seed. A random one is drawn and reported when absent.
    #[arg(long, global = true, env = "SCHUBGAL_SEED")]
    seed: Option<u64>,

    #[arg(long, global = true, env = "SCHUBGAL_WORKERS", default_value_t = 1)]
    workers: usize,

    /// Output file. For `survey` this is the JSONL log.
    #[arg(long, global = true, env = "SCHUBGAL_OUT")]
    out: Option<PathBuf>,

    #[arg(long, global = true, env = "SCHUBGAL_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Continue an existing survey log instead of truncating it.
    #[arg(long, global = true)]
    resume: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of solutions of a problem.
    Count { problem: String },
    /// Apply the degeneration relations until none applies.
    Reduce { problem: String },
    /// List reduced problems on a Grassmannian, e.g. `Gr(4,9)`.
    Enumerate {
        grassmannian: String,
        #[command(flatten)]
        window: Window,
    },
    /// Frobenius cycle-type census of random instances.
    Sample { problem: String },
    /// Verdict on the Galois group of a problem.
    Classify { problem: String },
    /// Classify every reduced problem on a Grassmannian into a JSONL log.
    Survey {
        grassmannian: String,
        #[command(flatten)]
        window: Window,
        /// Only sample problems a deficiency pattern matches.
        #[arg(long)]
        matched_only: bool,
    },
    /// Cycle-type census of `S_a wr S_b`.
    WreathTable { a: u32, b: u32 },
}

#[derive(Debug, Args)]
struct Window {
    /// Smallest solution count to keep.
    #[arg(long, default_value_t = 2)]
    min: u64,
    /// Largest solution count to keep.
    #[arg(long)]
    max: Option<u64>,
}

impl Window {
    fn filter(&self) -> CountFilter {
        CountFilter { min_solutions: Some(self.min), max_solutions: self.max }
    }
}

/// An error together with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: EX_USAGE, error: error.into() }
    }
}

impl From<schubgal::Error> for Failure {
    fn from(e: schubgal::Error) -> Self {
        use schubgal::Error as E;
        let code = match e {
            E::Parse { .. }
            | E::NotPrime(_)
            | E::InvalidBox { .. }
            | E::DoesNotFit { .. }
            | E::Containment { .. }
            | E::Codimension { .. } => EX_USAGE,
            _ => EX_DATAERR,
        };
        Failure { code, error: e.into() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: EX_DATAERR, error }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EX_DATAERR, error: e.into() }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EX_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Count { problem } => cmd_count(g, &parse_problem(problem)?),
        Command::Reduce { problem } => cmd_reduce(g, &parse_problem(problem)?),
        Command::Enumerate { grassmannian, window } => {
            cmd_enumerate(g, parse_shape(grassmannian)?, window.filter())
        }
        Command::Sample { problem } => cmd_sample(g, &parse_problem(problem)?),
        Command::Classify { problem } => cmd_classify(g, &parse_problem(problem)?),
        Command::Survey { grassmannian, window, matched_only } => {
            cmd_survey(g, parse_shape(grassmannian)?, window.filter(), *matched_only)
        }
        Command::WreathTable { a, b } => cmd_wreath_table(g, *a, *b),
    }
}

fn parse_problem(s: &str) -> Result<SchubertProblem, Failure> {
    let p: SchubertProblem = s.parse()?;
    p.check_codimension()?;
    Ok(p)
}

fn parse_shape(s: &str) -> Result<BoxShape, Failure> {
    Ok(s.parse()?)
}

fn output(g: &GlobalOpts) -> Result<Box<dyn Write>, Failure> {
    Ok(match &g.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn modulus(g: &GlobalOpts) -> Result<PrimeModulus, Failure> {
    Ok(PrimeModulus::new(g.prime)?)
}

fn effective_seed(g: &GlobalOpts) -> u64 {
    let seed = g.seed.unwrap_or_else(rand::random);
    eprintln!("seed: {seed}");
    seed
}

fn workers(g: &GlobalOpts) -> Result<usize, Failure> {
    if g.workers == 0 {
        return Err(Failure::usage(anyhow!("--workers must be at least 1")));
    }
    Ok(g.workers)
}

fn csv_writer(out: Box<dyn Write>) -> csv::Writer<Box<dyn Write>> {
    csv::Writer::from_writer(out)
}

fn csv_err(e: csv::Error) -> Failure {
    Failure { code: EX_DATAERR, error: e.into() }
}

fn cmd_count(g: &GlobalOpts, problem: &SchubertProblem) -> Result<u8, Failure> {
    let n = problem.count_solutions()?;
    let mut out = output(g)?;
    match g.format {
        Format::Text => writeln!(out, "{n}")?,
        Format::Jsonl => writeln!(out, "{}", json!({ "problem": problem, "n": n }))?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["problem", "n"]).map_err(csv_err)?;
            w.write_record([problem.to_string(), n.to_string()]).map_err(csv_err)?;
            w.flush()?;
            return Ok(0);
        }
    }
    out.flush()?;
    Ok(0)
}

fn cmd_reduce(g: &GlobalOpts, problem: &SchubertProblem) -> Result<u8, Failure> {
    let reduced = match reduce_fully(problem) {
        ReductionOutcome::NoSolutions => None,
        ReductionOutcome::Reduced(p) => Some(p),
        ReductionOutcome::AlreadyReduced => Some(problem.clone()),
    };
    let mut out = output(g)?;
    let text = reduced.as_ref().map_or_else(|| "no solutions".to_string(), |p| p.to_string());
    match g.format {
        Format::Text => writeln!(out, "{text}")?,
        Format::Jsonl => writeln!(out, "{}", json!({ "problem": problem, "reduced": reduced }))?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["problem", "reduced"]).map_err(csv_err)?;
            w.write_record([problem.to_string(), text]).map_err(csv_err)?;
            w.flush()?;
            return Ok(0);
        }
    }
    out.flush()?;
    Ok(0)
}

fn cmd_enumerate(g: &GlobalOpts, shape: BoxShape, filter: CountFilter) -> Result<u8, Failure> {
    let problems = enumerate_reduced(shape, filter);
    eprintln!("{} reduced problems on {shape}", problems.len());
    let rows = problems
        .into_iter()
        .map(|p| {
            let n = p.count_solutions()?;
            Ok((p, n))
        })
        .collect::<Result<Vec<_>, schubgal::Error>>()?;
    let mut out = output(g)?;
    match g.format {
        Format::Text => {
            for (p, n) in &rows {
                writeln!(out, "{n}\t{p}")?;
            }
        }
        Format::Jsonl => {
            for (p, n) in &rows {
                writeln!(out, "{}", json!({ "problem": p, "n": n }))?;
            }
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["problem", "n"]).map_err(csv_err)?;
            for (p, n) in &rows {
                w.write_record([p.to_string(), n.to_string()]).map_err(csv_err)?;
            }
            w.flush()?;
            return Ok(0);
        }
    }
    out.flush()?;
    Ok(0)
}

/// The census the sampled types are compared against: the predicted wreath
/// product when a pattern matches with a base-case auxiliary, otherwise
/// `S_n` when it is small enough to tabulate.
fn reference_census(problem: &SchubertProblem, n: u64) -> Option<(String, Census)> {
    let reduced = match reduce_fully(problem) {
        ReductionOutcome::Reduced(p) => p,
        _ => problem.clone(),
    };
    if let Some(m) = detect(&reduced) {
        if let Ok(bound) = predicted_bound_base(&m) {
            if bound.degree() as u64 == n {
                if let Ok(c) = wreath_census_cached(bound) {
                    return Some((format!("{bound} ({})", m.rule), (*c).clone()));
                }
            }
        }
    }
    (1..=20).contains(&n).then(|| (format!("S{n}"), census_symmetric(n as u32)))
}

fn cmd_sample(g: &GlobalOpts, problem: &SchubertProblem) -> Result<u8, Failure> {
    let seed = effective_seed(g);
    let config = SamplerConfig {
        modulus: modulus(g)?,
        samples: g.samples.unwrap_or(SampleBudget::default().for_solutions(problem.count_solutions()?)),
        seed,
        workers: workers(g)?,
        early_exit: false,
        ..Default::default()
    };
    let report = run_frobenius(problem, &config)?;
    let reference = reference_census(problem, report.n);
    let rows = sample_rows(&report, reference.as_ref().map(|(_, c)| c));
    let mut out = output(g)?;
    match g.format {
        Format::Text => write_sample_text(&mut out, &report, reference.as_ref(), &rows)?,
        Format::Jsonl => {
            let mut v = serde_json::to_value(&report).map_err(anyhow::Error::from)?;
            if let Some((name, c)) = &reference {
                v["reference"] = json!({ "group": name, "order": c.order() });
                v["fractions"] = rows
                    .iter()
                    .map(|r| json!({ "type": r.ct.parts(), "count": r.count, "fraction": r.fraction, "expected": r.expected }))
                    .collect();
            }
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["type", "count", "fraction", "expected"]).map_err(csv_err)?;
            for r in &rows {
                w.write_record([
                    r.ct.to_string(),
                    r.count.to_string(),
                    r.fraction.map(|f| format!("{f:.4}")).unwrap_or_default(),
                    r.expected.map(|e| e.to_string()).unwrap_or_default(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
            return Ok(0);
        }
    }
    out.flush()?;
    Ok(0)
}

struct SampleRow {
    ct: CycleType,
    count: u64,
    fraction: Option<f64>,
    expected: Option<u64>,
}

/// One row per type that was observed or occurs in the reference census,
/// longest cycles first.
fn sample_rows(report: &SampleReport, reference: Option<&Census>) -> Vec<SampleRow> {
    let accepted = report.accepted();
    let mut types: BTreeMap<CycleType, u64> = report.census.clone();
    if let Some(c) = reference {
        for t in c.counts.keys() {
            types.entry(t.clone()).or_insert(0);
        }
    }
    types
        .into_iter()
        .rev()
        .map(|(ct, count)| {
            let fraction = match (reference, accepted) {
                (Some(c), a) if a > 0 => Some(c.order() as f64 * count as f64 / a as f64),
                _ => None,
            };
            let expected = reference.map(|c| c.count(&ct));
            SampleRow { ct, count, fraction, expected }
        })
        .collect()
}

fn write_sample_text(
    out: &mut dyn Write,
    report: &SampleReport,
    reference: Option<&(String, Census)>,
    rows: &[SampleRow],
) -> io::Result<()> {
    writeln!(out, "{}", report.problem)?;
    writeln!(out, "n = {}  p = {}  seed = {}", report.n, report.p, report.seed)?;
    let d = &report.discards;
    writeln!(
        out,
        "attempts = {}  accepted = {}  discarded = {} (degree drop {}, not squarefree {}, singular {})",
        report.attempts,
        report.accepted(),
        d.total(),
        d.degree_drop,
        d.not_squarefree,
        d.singular_draw
    )?;
    let group = reference.map_or("", |(name, _)| name.as_str());
    if let Some((_, c)) = reference {
        writeln!(out, "reference {group}, order {}", c.order())?;
    }
    writeln!(out, "{:<24} {:>8} {:>10} {:>10}", "type", "count", "fraction", "census")?;
    for r in rows {
        writeln!(
            out,
            "{:<24} {:>8} {:>10} {:>10}",
            r.ct.to_string(),
            r.count,
            r.fraction.map(|f| format!("{f:.4}")).unwrap_or_else(|| "-".into()),
            r.expected.map(|e| e.to_string()).unwrap_or_else(|| "-".into()),
        )?;
    }
    Ok(())
}

fn classifier_config(g: &GlobalOpts, seed: u64) -> Result<ClassifierConfig, Failure> {
    Ok(ClassifierConfig {
        modulus: modulus(g)?,
        seed,
        workers: workers(g)?,
        budget: g.samples.map(SampleBudget::uniform).unwrap_or_default(),
        ..Default::default()
    })
}

fn verdict_note(v: &Verdict) -> String {
    match v {
        Verdict::Inconclusive { note: Some(n), .. } => n.clone(),
        _ => String::new(),
    }
}

fn cmd_classify(g: &GlobalOpts, problem: &SchubertProblem) -> Result<u8, Failure> {
    let seed = effective_seed(g);
    let config = classifier_config(g, seed)?;
    let c = classify(problem, &config)?;
    let mut out = output(g)?;
    let rule = c.pattern.as_ref().map(|m| m.rule.to_string()).unwrap_or_default();
    match g.format {
        Format::Text => {
            writeln!(out, "{}", c.problem)?;
            if let Some(r) = &c.reduced {
                writeln!(out, "reduced: {r}")?;
            }
            writeln!(out, "n = {}  seed = {seed}", c.n)?;
            if let Some(m) = &c.pattern {
                writeln!(out, "pattern: {} with auxiliary {} (x{})", m.rule, m.auxiliary, m.outer)?;
            }
            write!(out, "verdict: {}", c.verdict.label())?;
            let group = c.verdict.group();
            if !group.is_empty() {
                write!(out, " {group}")?;
            }
            writeln!(out)?;
            if let Verdict::Deficient { evidence: e, .. } = &c.verdict {
                writeln!(
                    out,
                    "evidence: {} samples, max deviation {:.4}, chi-square {:.2} <= {:.2}",
                    e.samples, e.max_abs_deviation, e.chi_square, e.threshold
                )?;
            }
            let note = verdict_note(&c.verdict);
            if !note.is_empty() {
                writeln!(out, "note: {note}")?;
            }
        }
        Format::Jsonl => {
            let mut v = serde_json::to_value(&c).map_err(anyhow::Error::from)?;
            v["seed"] = json!(seed);
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["problem", "n", "verdict", "group", "rule", "seed"]).map_err(csv_err)?;
            w.write_record([
                c.problem.to_string(),
                c.n.to_string(),
                c.verdict.label().to_string(),
                c.verdict.group(),
                rule,
                seed.to_string(),
            ])
            .map_err(csv_err)?;
            w.flush()?;
            return Ok(0);
        }
    }
    out.flush()?;
    Ok(0)
}

fn cmd_survey(
    g: &GlobalOpts,
    shape: BoxShape,
    filter: CountFilter,
    matched_only: bool,
) -> Result<u8, Failure> {
    let log_path = g
        .out
        .clone()
        .ok_or_else(|| Failure::usage(anyhow!("survey needs --out for its JSONL log")))?;
    let seed = effective_seed(g);
    let mut config = classifier_config(g, seed)?;
    if matched_only {
        config.policy = SamplingPolicy::MatchedOnly;
    }
    let summary = survey(shape, filter, &config, &log_path, g.resume, |r| {
        let group = r.verdict.group();
        eprintln!("{} {} {} ({} ms)", r.verdict.label(), group, r.problem, r.wall_ms);
    })?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    match g.format {
        Format::Text => {
            writeln!(out, "{shape}  seed = {seed}  log = {}", log_path.display())?;
            writeln!(out, "records {} (new {}), errors {}", summary.total, summary.new, summary.errors)?;
            for (k, v) in &summary.by_verdict {
                writeln!(out, "{k:<16} {v:>8}")?;
            }
            for (k, v) in &summary.by_group {
                writeln!(out, "  {k:<14} {v:>8}")?;
            }
        }
        Format::Jsonl => {
            let mut v = serde_json::to_value(&summary).map_err(anyhow::Error::from)?;
            v["seed"] = json!(seed);
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            let records = read_log(&log_path)?;
            write_summary_csv(&records, &mut out)?;
        }
    }
    out.flush()?;
    Ok(if summary.errors > 0 { EX_PARTIAL } else { 0 })
}

fn cmd_wreath_table(g: &GlobalOpts, a: u32, b: u32) -> Result<u8, Failure> {
    if a == 0 || b == 0 {
        return Err(Failure::usage(anyhow!("wreath-table needs a, b >= 1")));
    }
    let spec = WreathSpec::new(a, b);
    let census = wreath_census_cached(spec)?;
    let mut out = output(g)?;
    match g.format {
        Format::Text => {
            writeln!(out, "{spec}  order {}", census.order())?;
            writeln!(out, "{:<24} {:>10}", "type", "count")?;
            for (ct, n) in census.rows() {
                writeln!(out, "{:<24} {:>10}", ct.to_string(), n)?;
            }
        }
        Format::Jsonl => {
            for (ct, n) in census.rows() {
                writeln!(out, "{}", json!({ "type": ct.parts(), "count": n }))?;
            }
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["type", "count"]).map_err(csv_err)?;
            for (ct, n) in census.rows() {
                w.write_record([ct.to_string(), n.to_string()]).map_err(csv_err)?;
            }
            w.flush()?;
            return Ok(0);
        }
    }
    out.flush()?;
    Ok(0)
}
