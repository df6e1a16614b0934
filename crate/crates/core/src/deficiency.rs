//! Detectors for Schubert problems whose solutions split into blocks, which
//! bounds the Galois group by a wreath product `G ≀ S_b`.
//!
//! The general rules (`R1`–`R3`) are containment patterns on any `Gr(k,m)`
//! and come with an auxiliary problem whose Galois group is the inner factor.
//! The remaining rules are specific to `Gr(4,9)`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::WreathSpec;
use crate::schubert::{reduce_fully, BoxShape, Partition, ReductionOutcome, SchubertProblem};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R9,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PatternMatch {
    pub rule: RuleId,
    /// Positions in the canonical condition list, in the order the rule
    /// consumes them. Empty for the fixed-list rules.
    pub indices: Vec<usize>,
    /// Problem whose Galois group is the inner factor. Well-posed on its box.
    pub auxiliary: SchubertProblem,
    /// Degree of the outer symmetric group.
    pub outer: u32,
}

impl PatternMatch {
    pub fn inner_box(&self) -> BoxShape {
        self.auxiliary.shape()
    }
}

/// Runs the detectors in order `R1, R2, R3`, then the `Gr(4,9)` rules, and
/// returns the first match.
pub fn detect(problem: &SchubertProblem) -> Option<PatternMatch> {
    detect_relation1(problem)
        .or_else(|| detect_relation2(problem))
        .or_else(|| detect_relation3(problem))
        .or_else(|| detect_gr49_special(problem))
}

fn ones(n: usize) -> Partition {
    Partition::rectangle(n, 1)
}

fn row(n: usize) -> Partition {
    Partition::rectangle(1, n as u32)
}

/// `λ − μ` coordinatewise, re-sorted.
fn difference(lambda: &Partition, mu: &Partition) -> Partition {
    let len = lambda.len().max(mu.len());
    let parts = (1..=len).map(|i| lambda.part(i) - mu.part(i)).collect();
    Partition::from_unsorted(parts)
}

/// Assigns distinct conditions to the slots of `pattern` (one slot per
/// entry, repeated by multiplicity), each containing its slot's partition.
/// Within a run of equal slots the indices increase. Candidates are visited
/// in lexicographic order and the first one whose auxiliary problem fits
/// `small` and has at least two solutions is returned.
fn containment_match(
    problem: &SchubertProblem,
    pattern: &[(Partition, usize)],
    small: BoxShape,
    rule: RuleId,
    outer: u32,
) -> Option<PatternMatch> {
    let slots: Vec<(usize, &Partition)> = pattern
        .iter()
        .enumerate()
        .flat_map(|(g, (mu, mult))| std::iter::repeat((g, mu)).take(*mult))
        .collect();
    let conds = problem.conditions();
    let mut chosen = Vec::with_capacity(slots.len());
    let mut used = vec![false; conds.len()];
    search(problem, &slots, small, &mut chosen, &mut used).map(|(indices, auxiliary)| PatternMatch {
        rule,
        indices,
        auxiliary,
        outer,
    })
}

fn search(
    problem: &SchubertProblem,
    slots: &[(usize, &Partition)],
    small: BoxShape,
    chosen: &mut Vec<usize>,
    used: &mut [bool],
) -> Option<(Vec<usize>, SchubertProblem)> {
    let conds = problem.conditions();
    let depth = chosen.len();
    if depth == slots.len() {
        let mut aux: Vec<Partition> =
            chosen.iter().zip(slots).map(|(&i, (_, mu))| difference(&conds[i], mu)).collect();
        aux.extend(conds.iter().enumerate().filter(|(i, _)| !used[*i]).map(|(_, c)| c.clone()));
        let aux = SchubertProblem::new(small, aux).ok()?;
        return is_block_structure(&aux).then(|| (chosen.clone(), aux));
    }
    let (group, mu) = slots[depth];
    let start = match depth.checked_sub(1) {
        Some(prev) if slots[prev].0 == group => chosen[prev] + 1,
        _ => 0,
    };
    for i in start..conds.len() {
        if used[i] || !conds[i].contains(mu) {
            continue;
        }
        used[i] = true;
        chosen.push(i);
        let found = search(problem, slots, small, chosen, used);
        chosen.pop();
        used[i] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

/// An auxiliary problem with at most one solution gives blocks of size one,
/// which bound nothing.
fn is_block_structure(aux: &SchubertProblem) -> bool {
    aux.is_well_posed() && aux.count_solutions().is_ok_and(|n| n >= 2)
}

/// Two conditions containing `(1^{k−1})`, two containing `(m−k−1)`;
/// auxiliary on `Gr(k−2, m−4)`, outer `S_2`.
pub fn detect_relation1(problem: &SchubertProblem) -> Option<PatternMatch> {
    let (k, m) = (problem.shape().k(), problem.shape().m());
    if k < 3 || k + 3 > m {
        return None;
    }
    let pattern = [(ones(k - 1), 2), (row(m - k - 1), 2)];
    let small = BoxShape::new(k - 2, m - 4).ok()?;
    containment_match(problem, &pattern, small, RuleId::R1, 2)
}

/// Three conditions containing `(1^{k−1})`, one containing
/// `(m−k−1, m−k−2)`; auxiliary on `Gr(k−2, m−5)`, outer `S_2`.
pub fn detect_relation2(problem: &SchubertProblem) -> Option<PatternMatch> {
    let (k, m) = (problem.shape().k(), problem.shape().m());
    if k < 3 || k + 3 > m {
        return None;
    }
    let w = (m - k) as u32;
    let mu2 = Partition::from_unsorted(vec![w - 1, w - 2]);
    let pattern = [(ones(k - 1), 3), (mu2, 1)];
    let small = BoxShape::new(k - 2, m - 5).ok()?;
    containment_match(problem, &pattern, small, RuleId::R2, 2)
}

/// One condition containing `(m−k−1)`, another containing `(m−k−2)`, three
/// containing `(1^{k−1})`; auxiliary on `Gr(k−2, m−5)`, outer `S_3`.
pub fn detect_relation3(problem: &SchubertProblem) -> Option<PatternMatch> {
    let (k, m) = (problem.shape().k(), problem.shape().m());
    if k < 3 || k + 4 > m {
        return None;
    }
    let pattern = [(row(m - k - 1), 1), (row(m - k - 2), 1), (ones(k - 1), 3)];
    let small = BoxShape::new(k - 2, m - 5).ok()?;
    containment_match(problem, &pattern, small, RuleId::R3, 3)
}

fn gr49() -> BoxShape {
    BoxShape::new(4, 9).expect("valid box")
}

fn four_lines() -> SchubertProblem {
    SchubertProblem::new(BoxShape::new(2, 4).expect("valid box"), vec![Partition::box1(); 4])
        .expect("fits")
}

/// The fixed `Gr(4,9)` lists, each with its outer degree. Their inner factor
/// is the four-lines problem.
fn fixed_lists() -> &'static [(RuleId, u32, Vec<SchubertProblem>)] {
    static LISTS: OnceLock<Vec<(RuleId, u32, Vec<SchubertProblem>)>> = OnceLock::new();
    LISTS.get_or_init(|| {
        let parse = |conds: &[&str]| -> Vec<SchubertProblem> {
            conds
                .iter()
                .map(|c| format!("Gr(4,9): {c}").parse().expect("well-formed rule table"))
                .collect()
        };
        vec![
            (
                RuleId::R5,
                2,
                parse(&[
                    "(4,2,2)*(2,2)*(1,1,1)^2*(1)^2",
                    "(4,2,2)*(2,2)*(2,1,1)*(1,1,1)*(1)",
                    "(4,2,2)*(2,2)*(2,1,1)^2",
                ]),
            ),
            (
                RuleId::R6,
                2,
                parse(&["(3,3,2)*(2,2)^2*(1,1,1)*(1)", "(3,3,2)*(2,2)^2*(2,1,1)"]),
            ),
            (
                RuleId::R7,
                2,
                parse(&[
                    "(3,3)*(3,2)*(4)*(1,1,1)*(1)^2",
                    "(3,3)*(3,2)*(4)*(2,1,1)*(1)",
                    "(3,3)*(3,2)*(4,1)*(1,1,1)*(1)",
                    "(3,3)*(3,2)*(4,1)*(2,1,1)",
                    "(3,3,1)*(4)*(2,2)*(1,1,1)*(1)^2",
                    "(3,3,1)*(4)*(2,2)*(2,1,1)*(1)",
                    "(3,3,1)*(4,1)*(2,2)*(1,1,1)*(1)",
                    "(3,3,1)*(4,1)*(2,2)*(2,1,1)",
                ]),
            ),
            (
                RuleId::R9,
                3,
                parse(&[
                    "(1)^2*(1,1,1)^2*(2,2)^2*(4)",
                    "(1)*(1,1,1)*(2,1,1)*(2,2)^2*(4)",
                    "(1)*(1,1,1)^2*(2,2)^2*(4,1)",
                    "(2,1,1)^2*(2,2)^2*(4)",
                    "(1,1,1)*(2,1,1)*(2,2)^2*(4,1)",
                ]),
            ),
        ]
    })
}

/// `λ¹ = (3,3)`, `λ² = (2,2)`, `λ³ ⊇ (4)`, `λ⁴ ⊇ (1,1,1)` with auxiliary
/// `((2), (1), λ³ − (4), λ⁴ − (1,1,1), λ⁵, …)` on `Gr(2,5)`; then the
/// fixed lists.
pub fn detect_gr49_special(problem: &SchubertProblem) -> Option<PatternMatch> {
    if problem.shape() != gr49() {
        return None;
    }
    relation4(problem).or_else(|| {
        fixed_lists().iter().find_map(|(rule, outer, list)| {
            list.contains(problem).then(|| PatternMatch {
                rule: *rule,
                indices: Vec::new(),
                auxiliary: four_lines(),
                outer: *outer,
            })
        })
    })
}

fn relation4(problem: &SchubertProblem) -> Option<PatternMatch> {
    let conds = problem.conditions();
    let a = conds.iter().position(|c| c.parts() == [3, 3])?;
    let b = conds.iter().position(|c| c.parts() == [2, 2])?;
    let exact = [Partition::from_unsorted(vec![2]), Partition::box1()];
    let pattern = [(row(4), 1), (ones(3), 1)];
    let small = BoxShape::new(2, 5).expect("valid box");
    // The two fixed conditions are consumed first; the rest is a containment
    // search over the remaining ones.
    let rest: Vec<(usize, &Partition)> =
        conds.iter().enumerate().filter(|&(i, _)| i != a && i != b).collect();
    for (ci, c) in &rest {
        if !c.contains(&pattern[0].0) {
            continue;
        }
        for (di, d) in &rest {
            if di == ci || !d.contains(&pattern[1].0) {
                continue;
            }
            let mut aux = exact.to_vec();
            aux.push(difference(c, &pattern[0].0));
            aux.push(difference(d, &pattern[1].0));
            aux.extend(rest.iter().filter(|(i, _)| i != ci && i != di).map(|(_, p)| (*p).clone()));
            let Ok(aux) = SchubertProblem::new(small, aux) else { continue };
            if is_block_structure(&aux) {
                return Some(PatternMatch {
                    rule: RuleId::R4,
                    indices: vec![a, b, *ci, *di],
                    auxiliary: aux,
                    outer: 2,
                });
            }
        }
    }
    None
}

/// Degree `j` of the inner group `S_j` when the reduced auxiliary problem is
/// one of the base cases: four lines on `Gr(2,4)` (`S_2`), `□⁴·(2)` on
/// `Gr(2,5)` (`S_3`), `□⁶` on `Gr(2,5)` (`S_5`). A problem with one or two
/// solutions has group `S_1` or `S_2` since the action is transitive.
pub fn base_case_degree(auxiliary: &SchubertProblem) -> Result<Option<u32>> {
    let reduced = match reduce_fully(auxiliary) {
        ReductionOutcome::NoSolutions => return Ok(Some(0)),
        ReductionOutcome::Reduced(p) => p,
        ReductionOutcome::AlreadyReduced => auxiliary.clone(),
    };
    let n = reduced.count_solutions()?;
    if n <= 2 {
        return Ok(Some(n as u32));
    }
    let known = ["Gr(2,5): (2)*(1)^4", "Gr(2,5): (1)^6"];
    Ok(known.iter().any(|s| reduced.to_string() == *s).then_some(n as u32))
}

/// The wreath product bounding the Galois group of the matched problem.
/// `resolver` is consulted for auxiliary problems that are not base cases;
/// it returns `Some(j)` when the auxiliary group is known to be `S_j`.
pub fn predicted_bound(
    m: &PatternMatch,
    resolver: impl FnOnce(&SchubertProblem) -> Result<Option<u32>>,
) -> Result<WreathSpec> {
    let inner = match base_case_degree(&m.auxiliary)? {
        Some(j) => Some(j),
        None => resolver(&m.auxiliary)?,
    };
    match inner {
        Some(j) if j >= 1 => Ok(WreathSpec::new(j, m.outer)),
        _ => Err(Error::UnresolvedAuxiliary(m.auxiliary.to_string())),
    }
}

/// [`predicted_bound`] with base cases only.
pub fn predicted_bound_base(m: &PatternMatch) -> Result<WreathSpec> {
    predicted_bound(m, |_| Ok(None))
}
