//! Degeneration relations between pairs of conditions: overlap (no
//! solutions), a filled row, or a filled column.

use super::lr::count_solutions;
use super::partition::{partitions_in_box, Partition};
use super::problem::{BoxShape, SchubertProblem};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ReductionOutcome {
    NoSolutions,
    Reduced(SchubertProblem),
    AlreadyReduced,
}

/// How a pair `(λ, μ)` sits in the box with `λ` at the top left and `μ`
/// rotated into the bottom right.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum PairRelation {
    Overlap,
    /// 1-based row of `λ`; `μ` loses row `k + 1 − i`.
    Row(usize),
    /// 1-based column of `λ`; `μ` loses column `m − k + 1 − j`.
    Column(usize),
    Independent,
}

pub(crate) fn pair_relation(shape: BoxShape, lambda: &Partition, mu: &Partition) -> PairRelation {
    let (k, w) = (shape.k(), shape.cols() as u32);
    let rows = (1..=k).map(|i| (i, lambda.part(i) + mu.part(k + 1 - i)));
    if rows.clone().any(|(_, s)| s > w) {
        return PairRelation::Overlap;
    }
    if let Some((i, _)) = rows.clone().find(|&(_, s)| s == w) {
        return PairRelation::Row(i);
    }
    let (lc, mc) = (lambda.conjugate(), mu.conjugate());
    let w = shape.cols();
    if let Some(j) = (1..=w).find(|&j| (lc.part(j) + mc.part(w + 1 - j)) as usize == k) {
        return PairRelation::Column(j);
    }
    PairRelation::Independent
}

/// Applies the first applicable relation. Overlaps are looked for across all
/// pairs before any row or column is removed.
pub fn reduction_step(problem: &SchubertProblem) -> ReductionOutcome {
    let shape = problem.shape();
    let conds = problem.conditions();
    let mut first: Option<(usize, usize, PairRelation)> = None;
    for a in 0..conds.len() {
        for b in a + 1..conds.len() {
            match pair_relation(shape, &conds[a], &conds[b]) {
                PairRelation::Overlap => return ReductionOutcome::NoSolutions,
                PairRelation::Independent => {}
                rel => {
                    first.get_or_insert((a, b, rel));
                }
            }
        }
    }
    let Some((a, b, rel)) = first else {
        return ReductionOutcome::AlreadyReduced;
    };
    let (k, m) = (shape.k(), shape.m());
    let (new_shape, la, lb) = match rel {
        PairRelation::Row(i) => (
            BoxShape::allowing_degenerate(k - 1, m - 1),
            conds[a].remove_row(i),
            conds[b].remove_row(k + 1 - i),
        ),
        PairRelation::Column(j) => (
            BoxShape::allowing_degenerate(k, m - 1),
            conds[a].remove_column(j),
            conds[b].remove_column(m - k + 1 - j),
        ),
        _ => unreachable!(),
    };
    let mut rest: Vec<Partition> = conds
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != a && i != b)
        .map(|(_, c)| c.clone())
        .collect();
    rest.push(la);
    rest.push(lb);
    // A bystander condition that no longer fits cannot be met in the
    // smaller space.
    if rest.iter().any(|c| !new_shape.fits(c)) {
        return ReductionOutcome::NoSolutions;
    }
    ReductionOutcome::Reduced(SchubertProblem::new_unchecked(new_shape, rest))
}

/// Iterates [`reduction_step`] to a fixed point. Returns `AlreadyReduced`
/// only when the input itself is reduced.
pub fn reduce_fully(problem: &SchubertProblem) -> ReductionOutcome {
    let mut current = match reduction_step(problem) {
        ReductionOutcome::Reduced(p) => p,
        other => return other,
    };
    loop {
        match reduction_step(&current) {
            ReductionOutcome::Reduced(p) => current = p,
            ReductionOutcome::NoSolutions => return ReductionOutcome::NoSolutions,
            ReductionOutcome::AlreadyReduced => return ReductionOutcome::Reduced(current),
        }
    }
}

/// Solution-count window applied after the reducedness test.
#[derive(Clone, Copy, Debug, Default)]
pub struct CountFilter {
    pub min_solutions: Option<u64>,
    pub max_solutions: Option<u64>,
}

impl CountFilter {
    pub fn accepts(&self, n: u64) -> bool {
        self.min_solutions.map_or(true, |lo| n >= lo) && self.max_solutions.map_or(true, |hi| n <= hi)
    }

    fn is_trivial(&self) -> bool {
        self.min_solutions.is_none() && self.max_solutions.is_none()
    }
}

/// Visits every reduced, well-posed problem on `shape` exactly once, in
/// canonical order. Multisets are built from non-increasing indices into the
/// descending list of nonzero partitions, and a branch is cut as soon as two
/// chosen conditions are related, since reducedness is a pairwise property.
pub fn for_each_reduced(
    shape: BoxShape,
    filter: CountFilter,
    mut visit: impl FnMut(SchubertProblem, Option<u64>),
) {
    let mut parts: Vec<Partition> =
        partitions_in_box(shape.k(), shape.cols()).into_iter().filter(|p| !p.is_zero()).collect();
    parts.reverse();
    let n = parts.len();
    let compatible: Vec<Vec<bool>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| pair_relation(shape, &parts[a], &parts[b]) == PairRelation::Independent)
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = parts.iter().map(|p| p.size() as usize).collect();

    struct Walk<'a, F> {
        shape: BoxShape,
        parts: &'a [Partition],
        sizes: &'a [usize],
        compatible: &'a [Vec<bool>],
        filter: CountFilter,
        chosen: Vec<usize>,
        visit: F,
    }

    impl<F: FnMut(SchubertProblem, Option<u64>)> Walk<'_, F> {
        fn go(&mut self, start: usize, remaining: usize) {
            if remaining == 0 {
                let conds = self.chosen.iter().map(|&i| self.parts[i].clone()).collect();
                let p = SchubertProblem::new_unchecked(self.shape, conds);
                if self.filter.is_trivial() {
                    (self.visit)(p, None);
                } else {
                    let c = count_solutions(&p).expect("well-posed by construction");
                    if self.filter.accepts(c) {
                        (self.visit)(p, Some(c));
                    }
                }
                return;
            }
            for i in start..self.parts.len() {
                if self.sizes[i] > remaining {
                    continue;
                }
                if !self.chosen.iter().all(|&c| self.compatible[c][i]) {
                    continue;
                }
                self.chosen.push(i);
                self.go(i, remaining - self.sizes[i]);
                self.chosen.pop();
            }
        }
    }

    let mut walk = Walk {
        shape,
        parts: &parts,
        sizes: &sizes,
        compatible: &compatible,
        filter,
        chosen: Vec::new(),
        visit: &mut visit,
    };
    walk.go(0, shape.area());
}

/// Collects [`for_each_reduced`] into a vector.
pub fn enumerate_reduced(shape: BoxShape, filter: CountFilter) -> Vec<SchubertProblem> {
    let mut out = Vec::new();
    for_each_reduced(shape, filter, |p, _| out.push(p));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prob(s: &str) -> SchubertProblem {
        s.parse().unwrap()
    }

    #[test]
    fn row_reduction_example() {
        let p = prob("Gr(4,9): (3,3,1)*(4,2,2)*(2)^2*(1)");
        assert_eq!(
            reduction_step(&p),
            ReductionOutcome::Reduced(prob("Gr(3,8): (3,1)*(4,2)*(2)^2*(1)"))
        );
    }

    #[test]
    fn four_lines_is_reduced() {
        assert_eq!(reduction_step(&prob("Gr(2,4): (1)^4")), ReductionOutcome::AlreadyReduced);
        assert_eq!(reduce_fully(&prob("Gr(2,4): (1)^4")), ReductionOutcome::AlreadyReduced);
    }

    #[test]
    fn overlap_means_no_solutions() {
        let p = SchubertProblem::new_unchecked(
            BoxShape::new(2, 4).unwrap(),
            vec!["(2,1)".parse().unwrap(), "(2,1)".parse().unwrap()],
        );
        assert_eq!(reduction_step(&p), ReductionOutcome::NoSolutions);
    }

    #[test]
    fn gr24_reduced_list() {
        // Hand check: (2) and (1,1) each fill a row or column against any
        // other condition, so only the four-lines problem survives.
        let v = enumerate_reduced(BoxShape::new(2, 4).unwrap(), CountFilter::default());
        let s: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, vec!["Gr(2,4): (2,2)", "Gr(2,4): (1)^4"]);
    }
}
