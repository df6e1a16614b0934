//! Per-problem verdicts and whole-Grassmannian surveys.

use std::collections::{BTreeMap, HashSet};
use std::fs::OpenOptions;
use std::hash::Hasher;
use std::io::{BufRead, BufReader, BufWriter, Seek, SeekFrom, Write};
use std::path::Path;
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::deficiency::{detect, predicted_bound, PatternMatch, RuleId};
use crate::error::{Error, Result};
use crate::ffalg::PrimeModulus;
use crate::groups::{consistency_score, wreath_census_cached, CycleType, WreathSpec};
use crate::instances::IdealOptions;
use crate::sampler::{census_list, run_frobenius, SampleReport, SamplerConfig, SamplerVerdict};
use crate::schubert::{
    for_each_reduced, reduce_fully, BoxShape, CountFilter, ReductionOutcome, SchubertProblem,
};

/// Auxiliary problems are classified recursively at most this deep.
const MAX_AUX_DEPTH: usize = 2;

/// Attempts per problem by solution count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleBudget {
    /// `n < 6`.
    pub small: u64,
    /// `6 ≤ n ≤ 20`.
    pub medium: u64,
    /// `n > 20`.
    pub large: u64,
}

impl Default for SampleBudget {
    fn default() -> Self {
        SampleBudget { small: 200, medium: 2_000, large: 10_000 }
    }
}

impl SampleBudget {
    pub fn uniform(n: u64) -> Self {
        SampleBudget { small: n, medium: n, large: n }
    }

    pub fn for_solutions(&self, n: u64) -> u64 {
        match n {
            0..=5 => self.small,
            6..=20 => self.medium,
            _ => self.large,
        }
    }
}

/// Which problems a survey samples. `MatchedOnly` skips sampling for
/// problems no detector fires on and reports them as unsampled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingPolicy {
    #[default]
    All,
    MatchedOnly,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub modulus: PrimeModulus,
    pub seed: u64,
    pub workers: usize,
    pub budget: SampleBudget,
    /// Consistency with a predicted wreath product is rejected when the
    /// chi-square p-value falls below this.
    pub p_value: f64,
    pub ideal: IdealOptions,
    pub policy: SamplingPolicy,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            modulus: PrimeModulus::new(PrimeModulus::DEFAULT).unwrap(),
            seed: 0,
            workers: 1,
            budget: SampleBudget::default(),
            p_value: 1e-6,
            ideal: IdealOptions::default(),
            policy: SamplingPolicy::All,
        }
    }
}

/// How well a sampled census fits the predicted wreath product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub samples: u64,
    pub contained: bool,
    pub max_abs_deviation: f64,
    pub chi_square: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    NoSolutions,
    Trivial {
        n: u64,
    },
    FullSymmetric {
        n: u64,
    },
    Deficient {
        bound: WreathSpec,
        rule: RuleId,
        evidence: Evidence,
    },
    Inconclusive {
        #[serde(with = "census_list")]
        census: BTreeMap<CycleType, u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::NoSolutions => "no_solutions",
            Verdict::Trivial { .. } => "trivial",
            Verdict::FullSymmetric { .. } => "full_symmetric",
            Verdict::Deficient { .. } => "deficient",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    /// Group name for reports: `S_n`, the wreath bound, or empty.
    pub fn group(&self) -> String {
        match self {
            Verdict::Trivial { n } | Verdict::FullSymmetric { n } => format!("S{n}"),
            Verdict::Deficient { bound, .. } => bound.to_string(),
            _ => String::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub problem: SchubertProblem,
    /// The fully reduced problem, when it differs from the input.
    pub reduced: Option<SchubertProblem>,
    pub n: u64,
    pub verdict: Verdict,
    pub pattern: Option<PatternMatch>,
    pub report: Option<SampleReport>,
}

/// Upper `p`-quantile of the chi-square distribution with `df` degrees of
/// freedom.
pub fn chi_square_threshold(df: usize, p: f64) -> f64 {
    if df == 0 {
        return 0.0;
    }
    ChiSquared::new(df as f64).expect("positive degrees of freedom").inverse_cdf(1.0 - p)
}

pub fn classify(problem: &SchubertProblem, config: &ClassifierConfig) -> Result<Classification> {
    classify_at_depth(problem, config, 0)
}

fn classify_at_depth(
    problem: &SchubertProblem,
    config: &ClassifierConfig,
    depth: usize,
) -> Result<Classification> {
    problem.check_codimension()?;
    let mut out = Classification {
        problem: problem.clone(),
        reduced: None,
        n: 0,
        verdict: Verdict::NoSolutions,
        pattern: None,
        report: None,
    };
    let reduced = match reduce_fully(problem) {
        ReductionOutcome::NoSolutions => return Ok(out),
        ReductionOutcome::Reduced(p) => {
            out.reduced = Some(p.clone());
            p
        }
        ReductionOutcome::AlreadyReduced => problem.clone(),
    };
    let n = reduced.count_solutions()?;
    out.n = n;
    if n == 0 {
        return Ok(out);
    }
    if n <= 1 {
        out.verdict = Verdict::Trivial { n };
        return Ok(out);
    }

    let pattern = detect(&reduced);
    let mut note = None;
    let bound = match &pattern {
        Some(m) => {
            let resolved = predicted_bound(m, |aux| {
                if depth + 1 > MAX_AUX_DEPTH {
                    return Ok(None);
                }
                Ok(match classify_at_depth(aux, config, depth + 1)?.verdict {
                    Verdict::Trivial { n } | Verdict::FullSymmetric { n } => Some(n as u32),
                    _ => None,
                })
            });
            match resolved {
                Ok(b) if b.degree() as u64 == n => Some(b),
                Ok(b) => {
                    note = Some(format!("{} bound {b} has degree {} != {n}", m.rule, b.degree()));
                    None
                }
                Err(e @ Error::UnresolvedAuxiliary(_)) => {
                    note = Some(format!("{}: {e}", m.rule));
                    None
                }
                Err(e) => return Err(e),
            }
        }
        None => None,
    };
    out.pattern = pattern;

    if pattern_missing_and_skipped(&out.pattern, config.policy) {
        out.verdict = Verdict::Inconclusive {
            census: BTreeMap::new(),
            note: Some("not sampled".into()),
        };
        return Ok(out);
    }

    let sampler = SamplerConfig {
        modulus: config.modulus,
        samples: config.budget.for_solutions(n),
        seed: config.seed,
        workers: config.workers,
        ideal: config.ideal,
        // A predicted bound needs the whole budget for its statistics.
        early_exit: bound.is_none(),
    };
    let report = run_frobenius(&reduced, &sampler)?;

    out.verdict = match (&out.pattern, bound) {
        (Some(m), Some(bound)) => {
            let census = wreath_census_cached(bound)?;
            let score = consistency_score(&report.census, &census);
            let observed_types = census.counts.len();
            let evidence = Evidence {
                samples: report.accepted(),
                contained: score.contained,
                max_abs_deviation: score.max_abs_deviation.to_f64().unwrap_or(f64::INFINITY),
                chi_square: score.chi_square.to_f64().unwrap_or(f64::INFINITY),
                threshold: chi_square_threshold(observed_types.saturating_sub(1), config.p_value),
            };
            if !evidence.contained {
                note = Some(format!("{} retracted: a sampled type lies outside {bound}", m.rule));
                sampler_verdict(&report, n, note.take())
            } else if evidence.samples == 0 || evidence.chi_square > evidence.threshold {
                note = Some(format!(
                    "{} bound {bound}: chi-square {:.2} over threshold {:.2}",
                    m.rule, evidence.chi_square, evidence.threshold
                ));
                sampler_verdict(&report, n, note.take())
            } else {
                Verdict::Deficient { bound, rule: m.rule, evidence }
            }
        }
        _ => sampler_verdict(&report, n, note),
    };
    out.report = Some(report);
    Ok(out)
}

fn pattern_missing_and_skipped(pattern: &Option<PatternMatch>, policy: SamplingPolicy) -> bool {
    pattern.is_none() && policy == SamplingPolicy::MatchedOnly
}

fn sampler_verdict(report: &SampleReport, n: u64, note: Option<String>) -> Verdict {
    match report.verdict {
        SamplerVerdict::FullSymmetric => Verdict::FullSymmetric { n },
        SamplerVerdict::Inconclusive => {
            Verdict::Inconclusive { census: report.census.clone(), note }
        }
    }
}

/// One line of a survey log.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub problem: SchubertProblem,
    pub n: u64,
    pub seed: u64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auxiliary: Option<SchubertProblem>,
    pub attempts: u64,
    pub accepted: u64,
    pub discarded: u64,
    /// Set when classification failed; the verdict is then `Inconclusive`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_ms: u64,
}

impl SurveyRecord {
    pub fn rule(&self) -> Option<RuleId> {
        match &self.verdict {
            Verdict::Deficient { rule, .. } => Some(*rule),
            _ => None,
        }
    }
}

/// Seed for one problem of a survey, independent of the visiting order.
pub fn problem_seed(base: u64, problem: &SchubertProblem) -> u64 {
    let mut h = fnv::FnvHasher::default();
    h.write(problem.to_string().as_bytes());
    base ^ h.finish()
}

fn record_for(problem: &SchubertProblem, n: u64, config: &ClassifierConfig) -> SurveyRecord {
    let seed = problem_seed(config.seed, problem);
    let cfg = ClassifierConfig { seed, workers: 1, ..config.clone() };
    let start = Instant::now();
    let result = classify(problem, &cfg);
    let wall_ms = start.elapsed().as_millis() as u64;
    match result {
        Ok(c) => {
            let (attempts, accepted, discarded) = c
                .report
                .as_ref()
                .map_or((0, 0, 0), |r| (r.attempts, r.accepted(), r.discards.total()));
            SurveyRecord {
                problem: problem.clone(),
                n: c.n,
                seed,
                verdict: c.verdict,
                auxiliary: c.pattern.map(|m| m.auxiliary),
                attempts,
                accepted,
                discarded,
                error: None,
                wall_ms,
            }
        }
        Err(e) => SurveyRecord {
            problem: problem.clone(),
            n,
            seed,
            verdict: Verdict::Inconclusive { census: BTreeMap::new(), note: None },
            auxiliary: None,
            attempts: 0,
            accepted: 0,
            discarded: 0,
            error: Some(e.to_string()),
            wall_ms,
        },
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySummary {
    /// Records in the log after this run, including resumed ones.
    pub total: u64,
    /// Records written by this run.
    pub new: u64,
    pub by_verdict: BTreeMap<String, u64>,
    /// Deficient records per predicted group.
    pub by_group: BTreeMap<String, u64>,
    pub errors: u64,
}

impl SurveySummary {
    fn add(&mut self, r: &SurveyRecord) {
        self.total += 1;
        *self.by_verdict.entry(r.verdict.label().to_string()).or_default() += 1;
        if let Verdict::Deficient { bound, .. } = &r.verdict {
            *self.by_group.entry(bound.to_string()).or_default() += 1;
        }
        if r.error.is_some() {
            self.errors += 1;
        }
    }

    pub fn deficient(&self) -> u64 {
        self.by_verdict.get("deficient").copied().unwrap_or(0)
    }
}

/// Reads the records of an existing log. A malformed final line (an
/// interrupted write) is cut off; malformed lines elsewhere are errors.
pub fn read_log(path: &Path) -> Result<Vec<SurveyRecord>> {
    let mut file = OpenOptions::new().read(true).write(true).open(path)?;
    let mut records = Vec::new();
    let mut good_len = 0u64;
    let mut reader = BufReader::new(&mut file);
    let mut line = String::new();
    let mut torn = false;
    loop {
        line.clear();
        let read = reader.read_line(&mut line)?;
        if read == 0 {
            break;
        }
        if torn {
            return Err(Error::parse(path.display().to_string().as_str(), "malformed record"));
        }
        if line.trim().is_empty() {
            good_len += read as u64;
            continue;
        }
        match serde_json::from_str::<SurveyRecord>(&line) {
            Ok(r) if line.ends_with('\n') => {
                records.push(r);
                good_len += read as u64;
            }
            _ => torn = true,
        }
    }
    drop(reader);
    if torn {
        log::warn!("dropping a torn final record in {}", path.display());
        file.set_len(good_len)?;
        file.seek(SeekFrom::End(0))?;
    }
    Ok(records)
}

/// Classifies every reduced problem on `shape` that passes `filter`,
/// appending one JSON line per problem to `log`. With `resume`, problems
/// already in the log are skipped; otherwise the log is truncated.
/// Problems are classified in parallel chunks and written in canonical
/// order, each flushed before the next chunk starts.
pub fn survey(
    shape: BoxShape,
    filter: CountFilter,
    config: &ClassifierConfig,
    log_path: &Path,
    resume: bool,
    mut on_record: impl FnMut(&SurveyRecord),
) -> Result<SurveySummary> {
    let mut summary = SurveySummary::default();
    let mut done = HashSet::new();
    if resume && log_path.exists() {
        for r in read_log(log_path)? {
            done.insert(r.problem.to_string());
            summary.add(&r);
        }
    }
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .truncate(false)
        .open(log_path)?;
    if !resume {
        file.set_len(0)?;
    }
    let mut writer = BufWriter::new(file);

    let mut todo = Vec::new();
    for_each_reduced(shape, filter, |p, n| {
        if !done.contains(&p.to_string()) {
            todo.push((p, n));
        }
    });
    let todo: Vec<(SchubertProblem, u64)> = todo
        .into_iter()
        .map(|(p, n)| {
            let n = match n {
                Some(n) => n,
                None => p.count_solutions()?,
            };
            Ok((p, n))
        })
        .collect::<Result<_>>()?;

    let workers = config.workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    for chunk in todo.chunks(workers * 4) {
        let records: Vec<SurveyRecord> = pool.install(|| {
            chunk.par_iter().map(|(p, n)| record_for(p, *n, config)).collect()
        });
        for r in &records {
            serde_json::to_writer(&mut writer, r)?;
            writer.write_all(b"\n")?;
            summary.add(r);
            summary.new += 1;
            on_record(r);
        }
        writer.flush()?;
    }
    Ok(summary)
}

/// Writes `problem,n,verdict,group,rule` rows.
pub fn write_summary_csv<W: Write>(records: &[SurveyRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["problem", "n", "verdict", "group", "rule"])
        .map_err(|e| Error::Io(e.into()))?;
    for r in records {
        let rule = r.rule().map(|x| x.to_string()).unwrap_or_default();
        w.write_record([
            r.problem.to_string(),
            r.n.to_string(),
            r.verdict.label().to_string(),
            r.verdict.group(),
            rule,
        ])
        .map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SchubertProblem {
        s.parse().unwrap()
    }

    #[test]
    fn budget_tiers() {
        let b = SampleBudget::default();
        assert_eq!(b.for_solutions(5), 200);
        assert_eq!(b.for_solutions(6), 2_000);
        assert_eq!(b.for_solutions(20), 2_000);
        assert_eq!(b.for_solutions(21), 10_000);
    }

    #[test]
    fn threshold_matches_known_quantile() {
        // Upper 1% point of chi-square with 3 degrees of freedom.
        assert!((chi_square_threshold(3, 0.01) - 11.3449).abs() < 1e-3);
    }

    #[test]
    fn four_lines_full_symmetric() {
        let c = classify(&p("Gr(2,4): (1)^4"), &ClassifierConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::FullSymmetric { n: 2 });
    }

    #[test]
    fn reducible_and_empty_problems() {
        let c = classify(&p("Gr(2,4): (2,2)"), &ClassifierConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Trivial { n: 1 });
        let c = classify(&p("Gr(2,4): (2)*(2)"), &ClassifierConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Trivial { n: 1 });
        let c = classify(&p("Gr(2,4): (2)*(1,1)"), &ClassifierConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::NoSolutions);
    }

    #[test]
    fn seeds_depend_on_problem_only() {
        let a = p("Gr(2,4): (1)^4");
        assert_eq!(problem_seed(5, &a), problem_seed(5, &a.clone()));
        assert_ne!(problem_seed(5, &a), problem_seed(5, &p("Gr(2,5): (1)^6")));
    }
}
