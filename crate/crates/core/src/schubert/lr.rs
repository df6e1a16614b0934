//! Solution counts by multiplying Schubert classes in the cohomology ring of
//! the Grassmannian with the Littlewood–Richardson rule.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;

use super::partition::{partitions_in_box, Partition};
use super::problem::{BoxShape, SchubertProblem};
use crate::error::Result;

/// Littlewood–Richardson coefficients `c^κ_{λν}` for all `κ` in the
/// `rows × cols` box.
///
/// Labels `1, 2, …` are added as horizontal strips of sizes `ν_1, ν_2, …`.
/// The reading word (rows top to bottom, each right to left) is a lattice
/// word iff for every row `r` and label `j ≥ 2`, the number of `j`s in rows
/// `1..=r` is at most the number of `j−1`s in rows `1..r`.
pub fn lr_product(
    rows: usize,
    cols: usize,
    lambda: &Partition,
    nu: &Partition,
) -> Vec<(Partition, u64)> {
    let mut out: FxHashMap<Vec<u32>, u64> = FxHashMap::default();
    if !lambda.fits(rows, cols) {
        return Vec::new();
    }
    let shape = lambda.padded(rows);
    let mut counts = vec![vec![0u32; rows]; nu.len()];
    add_strips(cols as u32, nu.parts(), 0, shape, &mut counts, &mut out);
    let mut v: Vec<(Partition, u64)> =
        out.into_iter().map(|(s, c)| (Partition::from_sorted(s), c)).collect();
    v.sort();
    v
}

fn add_strips(
    cols: u32,
    nu: &[u32],
    label: usize,
    shape: Vec<u32>,
    counts: &mut Vec<Vec<u32>>,
    out: &mut FxHashMap<Vec<u32>, u64>,
) {
    if label == nu.len() {
        *out.entry(shape).or_default() += 1;
        return;
    }
    let mut new = shape.clone();
    strip_rows(cols, nu, label, &shape, 0, nu[label], &mut new, counts, out);

    #[allow(clippy::too_many_arguments)]
    fn strip_rows(
        cols: u32,
        nu: &[u32],
        label: usize,
        old: &[u32],
        row: usize,
        remaining: u32,
        new: &mut Vec<u32>,
        counts: &mut Vec<Vec<u32>>,
        out: &mut FxHashMap<Vec<u32>, u64>,
    ) {
        let rows = old.len();
        if remaining == 0 {
            for r in row..rows {
                counts[label][r] = 0;
                new[r] = old[r];
            }
            if lattice_ok(counts, label) {
                add_strips(cols, nu, label + 1, new.clone(), counts, out);
            }
            return;
        }
        if row == rows {
            return;
        }
        let cap = if row == 0 { cols } else { old[row - 1] }.min(cols);
        let room = cap.saturating_sub(old[row]);
        // A label j can only appear from row j onward.
        let max_here = if row < label { 0 } else { room.min(remaining) };
        for take in (0..=max_here).rev() {
            counts[label][row] = take;
            new[row] = old[row] + take;
            strip_rows(cols, nu, label, old, row + 1, remaining - take, new, counts, out);
        }
        counts[label][row] = 0;
        new[row] = old[row];
    }
}

fn lattice_ok(counts: &[Vec<u32>], label: usize) -> bool {
    if label == 0 {
        return true;
    }
    let (cur, prev) = (&counts[label], &counts[label - 1]);
    let (mut c, mut p) = (0, 0);
    for r in 0..cur.len() {
        c += cur[r];
        if c > p {
            return false;
        }
        p += prev[r];
    }
    true
}

/// Cached multiplication table of one box.
struct Ring {
    shape: BoxShape,
    index: FxHashMap<Partition, usize>,
    basis: Vec<Partition>,
    products: Mutex<FxHashMap<(usize, usize), Arc<Vec<(usize, u64)>>>>,
}

impl Ring {
    fn new(shape: BoxShape) -> Self {
        let basis = partitions_in_box(shape.k(), shape.cols());
        let index = basis.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ring { shape, index, basis, products: Mutex::new(FxHashMap::default()) }
    }

    fn product(&self, a: usize, b: usize) -> Arc<Vec<(usize, u64)>> {
        if let Some(v) = self.products.lock().unwrap().get(&(a, b)) {
            return v.clone();
        }
        let v: Vec<(usize, u64)> =
            lr_product(self.shape.k(), self.shape.cols(), &self.basis[a], &self.basis[b])
                .into_iter()
                .map(|(p, c)| (self.index[&p], c))
                .collect();
        let v = Arc::new(v);
        self.products.lock().unwrap().insert((a, b), v.clone());
        v
    }
}

fn ring(shape: BoxShape) -> Arc<Ring> {
    static RINGS: OnceLock<Mutex<HashMap<BoxShape, Arc<Ring>>>> = OnceLock::new();
    let rings = RINGS.get_or_init(Default::default);
    rings.lock().unwrap().entry(shape).or_insert_with(|| Arc::new(Ring::new(shape))).clone()
}

/// Coefficient of the full-box class in the product of the condition
/// classes, multiplied largest first.
pub fn count_solutions(problem: &SchubertProblem) -> Result<u64> {
    problem.check_codimension()?;
    count_in_order(problem.shape(), problem.conditions())
}

/// Same as [`count_solutions`] but multiplies in the given order.
pub fn count_in_order(shape: BoxShape, conditions: &[Partition]) -> Result<u64> {
    if shape.is_degenerate() {
        return Ok(1);
    }
    let ring = ring(shape);
    let mut vec: FxHashMap<usize, u64> = FxHashMap::default();
    vec.insert(ring.index[&Partition::zero()], 1);
    for c in conditions {
        let ci = ring.index[c];
        let mut next: FxHashMap<usize, u64> = FxHashMap::default();
        for (&kappa, &coeff) in &vec {
            for &(t, d) in ring.product(kappa, ci).iter() {
                *next.entry(t).or_default() += coeff * d;
            }
        }
        vec = next;
    }
    let full = Partition::rectangle(shape.k(), shape.cols() as u32);
    Ok(vec.get(&ring.index[&full]).copied().unwrap_or(0))
}
