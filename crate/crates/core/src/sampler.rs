//! Frobenius sampling: random instances over `F_p`, eliminant factor
//! shapes, and certificates for the full symmetric group.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffalg::{
    multiplication_matrix_by, standard_monomials, GroebnerBasis, MultiPoly, PrimeModulus,
};
use crate::groups::{implies_p_cycle, CycleType};
use crate::instances::{build_instance_ideal, random_flags, IdealOptions};
use crate::schubert::SchubertProblem;

/// Attempts are evaluated in fixed-size batches and folded in index order,
/// so results do not depend on the worker count.
const BATCH: u64 = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscardReason {
    /// The quotient algebra does not have dimension `n`.
    DegreeDrop,
    NotSquarefree,
    /// Positive-dimensional ideal or degenerate flags.
    SingularDraw,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub modulus: PrimeModulus,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub ideal: IdealOptions,
    /// Stop once the Jordan certificate is complete (`n ≥ 6` only).
    pub early_exit: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            modulus: PrimeModulus::new(PrimeModulus::DEFAULT).unwrap(),
            samples: 200,
            seed: 0,
            workers: 1,
            ideal: IdealOptions::default(),
            early_exit: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discards {
    pub degree_drop: u64,
    pub not_squarefree: u64,
    pub singular_draw: u64,
}

impl Discards {
    pub fn total(&self) -> u64 {
        self.degree_drop + self.not_squarefree + self.singular_draw
    }

    fn record(&mut self, r: DiscardReason) {
        match r {
            DiscardReason::DegreeDrop => self.degree_drop += 1,
            DiscardReason::NotSquarefree => self.not_squarefree += 1,
            DiscardReason::SingularDraw => self.singular_draw += 1,
        }
    }
}

/// Witnesses for an `n`-cycle, an `(n−1,1)` element and a type whose power
/// is a `q`-cycle for a prime `q < n − 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub c_n: Option<CycleType>,
    pub c_n_minus_1: Option<CycleType>,
    pub c_prime: Option<CycleType>,
}

impl Certificates {
    pub fn complete(&self) -> bool {
        self.c_n.is_some() && self.c_n_minus_1.is_some() && self.c_prime.is_some()
    }
}

pub fn certificate_update(state: &mut Certificates, ct: &CycleType, n: u32) {
    if ct.parts() == [n] {
        state.c_n.get_or_insert_with(|| ct.clone());
    }
    if n >= 2 && ct.parts() == [n - 1, 1] {
        state.c_n_minus_1.get_or_insert_with(|| ct.clone());
    }
    if implies_p_cycle(ct).is_some_and(|q| q + 2 < n) {
        state.c_prime.get_or_insert_with(|| ct.clone());
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerVerdict {
    FullSymmetric,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleReport {
    pub problem: SchubertProblem,
    pub n: u64,
    pub p: u32,
    pub seed: u64,
    pub attempts: u64,
    #[serde(with = "census_list")]
    pub census: BTreeMap<CycleType, u64>,
    pub discards: Discards,
    pub certificates: Certificates,
    pub verdict: SamplerVerdict,
}

impl SampleReport {
    pub fn accepted(&self) -> u64 {
        self.census.values().sum()
    }
}

/// Serializes a cycle-type map as `[{"type": [..], "count": k}, ..]`.
pub mod census_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Row {
        #[serde(rename = "type")]
        ct: CycleType,
        count: u64,
    }

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<CycleType, u64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().rev().map(|(c, &n)| Row { ct: c.clone(), count: n }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<CycleType, u64>, D::Error> {
        let rows = Vec::<Row>::deserialize(d)?;
        Ok(rows.into_iter().map(|r| (r.ct, r.count)).collect())
    }
}

/// Random number stream for attempt `index` of a run seeded with `seed`.
pub fn attempt_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One draw: random flags, instance ideal, Gröbner basis, and the factor
/// degrees of the characteristic polynomial of a random linear form.
pub fn sample_once(
    problem: &SchubertProblem,
    n: u64,
    modulus: PrimeModulus,
    options: IdealOptions,
    rng: &mut ChaCha8Rng,
) -> std::result::Result<CycleType, DiscardReason> {
    let flags = random_flags(problem, modulus, options.coordinates, rng);
    let ideal = match build_instance_ideal(problem, &flags, options) {
        Ok(i) => i,
        Err(Error::DegenerateFlags { .. }) => return Err(DiscardReason::SingularDraw),
        Err(e) => panic!("instance construction failed for a validated problem: {e}"),
    };
    let nvars = ideal.nvars();
    if nvars == 0 {
        return if n == 1 { Ok(CycleType::identity(1)) } else { Err(DiscardReason::DegreeDrop) };
    }
    let gb = GroebnerBasis::compute(modulus, nvars, &ideal.generators);
    let basis = match standard_monomials(&gb) {
        Ok(b) => b,
        Err(_) => {
            log::debug!("singular draw, flags: {}", flag_log(&flags));
            return Err(DiscardReason::SingularDraw);
        }
    };
    if basis.len() as u64 != n {
        log::debug!("degree {} != {n}, flags: {}", basis.len(), flag_log(&flags));
        return Err(DiscardReason::DegreeDrop);
    }
    // A random linear form separates the solutions with high probability;
    // single coordinates often do not when the solutions come in blocks.
    let form = (0..nvars).fold(MultiPoly::zero(modulus, nvars), |acc, v| {
        let c = rng.gen_range(1..modulus.value());
        acc.add_scaled(&MultiPoly::var(modulus, nvars, v), c)
    });
    let g = multiplication_matrix_by(&gb, &basis, &form).char_poly(modulus);
    match g.factor_degrees() {
        Ok(d) => Ok(CycleType::new(d)),
        Err(_) => Err(DiscardReason::NotSquarefree),
    }
}

fn flag_log(flags: &[crate::instances::FlagMatrix]) -> String {
    flags.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" | ")
}

/// Decision rule for `2 ≤ n ≤ 5`: true when the observed types force `S_n`
/// inside a transitive group.
pub fn small_n_decision<'a>(observed: impl IntoIterator<Item = &'a CycleType>, n: u32) -> bool {
    let types: Vec<&CycleType> = observed.into_iter().collect();
    let has = |pred: &dyn Fn(&CycleType) -> bool| types.iter().any(|c| pred(c));
    match n {
        0 | 1 => !types.is_empty(),
        2 => !types.is_empty(),
        3 => has(&|c| c.parts() == [3]) && has(&|c| c.parts() == [2, 1]),
        4 => has(&|c| c.parts() == [4]) && has(&|c| c.contains_part(3)),
        5 => has(&|c| c.contains_part(4)) && has(&|c| c.contains_part(3)),
        _ => panic!("small_n_decision applies for n <= 5"),
    }
}

/// Runs up to `config.samples` attempts; discards count toward the budget.
pub fn run_frobenius(problem: &SchubertProblem, config: &SamplerConfig) -> Result<SampleReport> {
    let n = problem.count_solutions()?;
    let mut report = SampleReport {
        problem: problem.clone(),
        n,
        p: config.modulus.value(),
        seed: config.seed,
        attempts: 0,
        census: BTreeMap::new(),
        discards: Discards::default(),
        certificates: Certificates::default(),
        verdict: SamplerVerdict::Inconclusive,
    };
    let pool = if config.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        Some(pool)
    } else {
        None
    };
    let n32 = u32::try_from(n).unwrap_or(u32::MAX);
    let mut next = 0u64;
    'outer: while next < config.samples {
        let end = (next + BATCH).min(config.samples);
        let run = |i: u64| {
            let mut rng = attempt_rng(config.seed, i);
            sample_once(problem, n, config.modulus, config.ideal, &mut rng)
        };
        let results: Vec<_> = match &pool {
            Some(pool) => pool.install(|| (next..end).into_par_iter().map(run).collect()),
            None => (next..end).map(run).collect(),
        };
        for r in results {
            report.attempts += 1;
            match r {
                Ok(ct) => {
                    if n >= 6 {
                        certificate_update(&mut report.certificates, &ct, n32);
                    }
                    *report.census.entry(ct).or_default() += 1;
                }
                Err(reason) => report.discards.record(reason),
            }
            if config.early_exit && n >= 6 && report.certificates.complete() {
                break 'outer;
            }
        }
        next = end;
    }
    let full = if n >= 6 {
        report.certificates.complete()
    } else {
        small_n_decision(report.census.keys(), n32)
    };
    if full {
        report.verdict = SamplerVerdict::FullSymmetric;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn certificate_examples() {
        let mut s = Certificates::default();
        certificate_update(&mut s, &ct("(8,2)"), 10);
        assert_eq!(s, Certificates::default());
        certificate_update(&mut s, &ct("(7,2,1)"), 10);
        assert_eq!(s.c_prime, Some(ct("(7,2,1)")));
        let mut t = Certificates::default();
        certificate_update(&mut t, &ct("(3,3)"), 6);
        assert!(t.c_prime.is_none());
    }

    #[test]
    fn small_n_examples() {
        assert!(small_n_decision(&[ct("(5)"), ct("(4,1)"), ct("(3,1,1)")], 5));
        assert!(!small_n_decision(&[ct("(2,2)"), ct("(4)")], 4));
        assert!(small_n_decision(&[ct("(1,1)")], 2));
        assert!(!small_n_decision(&[], 2));
    }

    #[test]
    fn zero_budget_gives_empty_report() {
        let p: SchubertProblem = "Gr(2,4): (1)^4".parse().unwrap();
        let cfg = SamplerConfig { samples: 0, ..Default::default() };
        let r = run_frobenius(&p, &cfg).unwrap();
        assert_eq!(r.attempts, 0);
        assert!(r.census.is_empty());
        assert_eq!(r.verdict, SamplerVerdict::Inconclusive);
    }

    #[test]
    fn single_solution_problem() {
        let p: SchubertProblem = "Gr(2,4): (2,2)".parse().unwrap();
        let cfg = SamplerConfig { samples: 3, ..Default::default() };
        let r = run_frobenius(&p, &cfg).unwrap();
        assert_eq!(r.census.get(&ct("(1)")), Some(&3));
    }

    #[test]
    fn report_json_shape() {
        let p: SchubertProblem = "Gr(2,4): (1)^4".parse().unwrap();
        let cfg = SamplerConfig { samples: 20, seed: 7, ..Default::default() };
        let r = run_frobenius(&p, &cfg).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["problem"], "Gr(2,4): (1)^4");
        assert_eq!(v["n"], 2);
        assert!(v["census"][0]["type"].is_array());
        let back: SampleReport = serde_json::from_value(v).unwrap();
        assert_eq!(back.census, r.census);
    }
}
