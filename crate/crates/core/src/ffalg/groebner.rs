//! Gröbner bases in grevlex order. The default driver is F4: all pairs of
//! the lowest sugar degree are reduced together as rows of one sparse
//! matrix. A pair-at-a-time Buchberger driver is kept as a cross-check.
//! Both use the Gebauer–Möller pair criteria.

use std::collections::BinaryHeap;

use rustc_hash::{FxHashMap, FxHashSet};

use super::field::{FieldElem, PrimeModulus};
use super::monomial::Monomial;
use super::poly::MultiPoly;

/// Reduced Gröbner basis of an ideal, sorted by increasing leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    modulus: PrimeModulus,
    nvars: usize,
    polys: Vec<MultiPoly>,
}

#[derive(Clone, Copy, Debug)]
struct Pair {
    sugar: u32,
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Working polynomial for reductions: coefficients keyed by monomial plus a
/// max-heap of monomials that may still carry a nonzero coefficient.
struct Accumulator {
    modulus: PrimeModulus,
    coeffs: FxHashMap<Monomial, FieldElem>,
    heap: BinaryHeap<Monomial>,
}

impl Accumulator {
    fn new(modulus: PrimeModulus) -> Self {
        Accumulator { modulus, coeffs: FxHashMap::default(), heap: BinaryHeap::new() }
    }

    #[inline]
    fn add(&mut self, m: Monomial, c: FieldElem) {
        if c == 0 {
            return;
        }
        let f = self.modulus;
        match self.coeffs.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let v = f.add(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
                self.heap.push(m);
            }
        }
    }

    /// Adds `c * shift * p`.
    fn add_multiple(&mut self, p: &[(Monomial, FieldElem)], shift: &Monomial, c: FieldElem) {
        let f = self.modulus;
        for (m, a) in p {
            self.add(m.mul(shift), f.mul(*a, c));
        }
    }

    /// Pops the largest live term.
    fn pop(&mut self) -> Option<(Monomial, FieldElem)> {
        while let Some(m) = self.heap.pop() {
            if let Some(c) = self.coeffs.remove(&m) {
                return Some((m, c));
            }
        }
        None
    }
}

/// Fully reduces the accumulator by the monic `reducers`, returning the
/// remainder with descending terms.
fn reduce_accumulator(
    acc: &mut Accumulator,
    reducers: &[&MultiPoly],
    nvars: usize,
) -> MultiPoly {
    let f = acc.modulus;
    let mut rem = Vec::new();
    while let Some((m, c)) = acc.pop() {
        let mut best: Option<&MultiPoly> = None;
        for g in reducers {
            let lm = &g.terms()[0].0;
            if lm.divides(&m) && best.map_or(true, |b| g.len() < b.len()) {
                best = Some(g);
            }
        }
        match best {
            Some(g) => {
                let shift = g.terms()[0].0.quotient_of(&m);
                acc.add_multiple(&g.terms()[1..], &shift, f.neg(c));
            }
            None => rem.push((m, c)),
        }
    }
    MultiPoly::from_sorted_terms(f, nvars, rem)
}

fn reduce_by(p: &MultiPoly, reducers: &[&MultiPoly]) -> MultiPoly {
    let mut acc = Accumulator::new(p.modulus());
    for &(m, c) in p.terms() {
        acc.add(m, c);
    }
    reduce_accumulator(&mut acc, reducers, p.nvars())
}

struct Builder {
    modulus: PrimeModulus,
    nvars: usize,
    polys: Vec<MultiPoly>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl Builder {
    fn lm(&self, i: usize) -> &Monomial {
        &self.polys[i].terms()[0].0
    }

    fn reducers(&self) -> Vec<&MultiPoly> {
        self.polys.iter().zip(&self.active).filter(|(_, a)| **a).map(|(p, _)| p).collect()
    }

    /// Inserts a monic, reduced polynomial and updates the pair set.
    fn insert(&mut self, h: MultiPoly, sugar: u32) {
        let lh = h.terms()[0].0;
        let t = self.polys.len();

        // Chain criterion on the old pairs.
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !lh.divides(&p.lcm) {
                return true;
            }
            let li = polys[p.i].terms()[0].0.lcm(&lh);
            let lj = polys[p.j].terms()[0].0.lcm(&lh);
            li == p.lcm || lj == p.lcm
        });

        // New pairs: keep only those whose lcm is minimal, then drop the
        // coprime ones.
        let mut fresh: Vec<(Monomial, usize, bool)> = (0..t)
            .filter(|&j| self.active[j])
            .map(|j| {
                let lj = self.lm(j);
                (lj.lcm(&lh), j, lj.coprime(&lh))
            })
            .collect();
        fresh.sort_by(|a, b| a.0.cmp(&b.0).then(b.2.cmp(&a.2)));
        let mut kept: Vec<(Monomial, usize, bool)> = Vec::with_capacity(fresh.len());
        for cand in fresh {
            if cand.2 || !kept.iter().any(|k| k.0.divides(&cand.0)) {
                kept.push(cand);
            }
        }
        let deg_h = lh.degree();
        for (lcm, j, coprime) in kept {
            if coprime {
                continue;
            }
            let sj = self.sugar[j] + lcm.degree() - self.lm(j).degree();
            let sh = sugar + lcm.degree() - deg_h;
            self.pairs.push(Pair { sugar: sj.max(sh), lcm, i: j, j: t });
        }

        for j in 0..t {
            if self.active[j] && lh.divides(self.lm(j)) {
                self.active[j] = false;
            }
        }
        self.polys.push(h);
        self.sugar.push(sugar);
        self.active.push(true);
    }

    /// Removes and returns every pair of the lowest sugar degree.
    fn take_lowest_pairs(&mut self) -> Vec<Pair> {
        let Some(d) = self.pairs.iter().map(|p| p.sugar).min() else {
            return Vec::new();
        };
        let (low, rest): (Vec<Pair>, Vec<Pair>) =
            std::mem::take(&mut self.pairs).into_iter().partition(|p| p.sugar == d);
        self.pairs = rest;
        low
    }

    /// Reducer for monomial `m`: the shortest active polynomial whose
    /// leading monomial divides `m`.
    fn reducer_for(&self, m: &Monomial) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, p) in self.polys.iter().enumerate() {
            if self.active[i]
                && p.terms()[0].0.divides(m)
                && best.map_or(true, |b| p.len() < self.polys[b].len())
            {
                best = Some(i);
            }
        }
        best
    }

    /// One F4 step on the given pairs. Returns the new monic polynomials,
    /// or `None` when a nonzero constant appears.
    fn f4_step(&self, pairs: &[Pair]) -> Option<Vec<MultiPoly>> {
        let f = self.modulus;
        let p = f.value() as u64;

        // Rows are `shift * polys[idx]`.
        let mut seen: FxHashSet<(Monomial, usize)> = FxHashSet::default();
        let mut targets: Vec<(Monomial, usize)> = Vec::new();
        for pair in pairs {
            for idx in [pair.i, pair.j] {
                let row = (self.lm(idx).quotient_of(&pair.lcm), idx);
                if seen.insert(row) {
                    targets.push(row);
                }
            }
        }

        // Symbolic preprocessing: every monomial divisible by an active
        // leading monomial gets exactly one reducer row.
        let mut reducers: FxHashMap<Monomial, (Monomial, usize)> = FxHashMap::default();
        let mut monomials: FxHashSet<Monomial> = FxHashSet::default();
        let mut queue: Vec<Monomial> = Vec::new();
        for (shift, idx) in &targets {
            for (m, _) in self.polys[*idx].terms() {
                let t = m.mul(shift);
                if monomials.insert(t) {
                    queue.push(t);
                }
            }
        }
        while let Some(m) = queue.pop() {
            let Some(r) = self.reducer_for(&m) else { continue };
            let shift = self.lm(r).quotient_of(&m);
            reducers.insert(m, (shift, r));
            for (t, _) in &self.polys[r].terms()[1..] {
                let t = t.mul(&shift);
                if monomials.insert(t) {
                    queue.push(t);
                }
            }
        }

        let mut columns: Vec<Monomial> = monomials.into_iter().collect();
        columns.sort_unstable_by(|a, b| b.cmp(a));
        let col_of: FxHashMap<Monomial, u32> =
            columns.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        let sparse = |shift: &Monomial, idx: usize| -> Vec<(u32, u32)> {
            self.polys[idx].terms().iter().map(|(m, c)| (col_of[&m.mul(shift)], *c)).collect()
        };
        let mut pivot_rows: Vec<Option<Vec<(u32, u32)>>> = vec![None; columns.len()];
        for (m, (shift, idx)) in &reducers {
            pivot_rows[col_of[m] as usize] = Some(sparse(shift, *idx));
        }

        // With a small modulus the products can be summed unreduced and
        // reduced once per column.
        let lazy = (p as u128).pow(2) * (columns.len() as u128 + 1) < (1u128 << 63);
        let mut dense = vec![0u64; columns.len()];
        let mut out = Vec::new();
        for (shift, idx) in &targets {
            let row = sparse(shift, *idx);
            let first = row[0].0 as usize;
            for &(c, v) in &row {
                dense[c as usize] = v as u64;
            }
            // Reduce by the preprocessed reducers and by the rows found so
            // far in this step; both have distinct pivots.
            let mut lead: Option<usize> = None;
            for c in first..columns.len() {
                let v = dense[c] % p;
                dense[c] = v;
                if v == 0 {
                    continue;
                }
                match &pivot_rows[c] {
                    Some(prow) => {
                        let factor = p - v;
                        if lazy {
                            for &(cc, pv) in prow {
                                dense[cc as usize] += factor * pv as u64;
                            }
                        } else {
                            for &(cc, pv) in prow {
                                let d = &mut dense[cc as usize];
                                *d = (*d + factor * pv as u64) % p;
                            }
                        }
                        // Lazily this is left at p rather than 0.
                        dense[c] = 0;
                    }
                    None => {
                        if lead.is_none() {
                            lead = Some(c);
                        }
                    }
                }
            }
            let Some(lead) = lead else { continue };
            let inv = f.inv(dense[lead] as u32) as u64;
            let mut new_row = Vec::new();
            for (c, d) in dense.iter_mut().enumerate().skip(lead) {
                if *d != 0 {
                    new_row.push((c as u32, (*d * inv % p) as u32));
                    *d = 0;
                }
            }
            if columns[lead].is_one() {
                return None;
            }
            pivot_rows[lead] = Some(new_row.clone());
            out.push(new_row);
        }
        // Later rows were reduced by earlier ones but not the reverse; the
        // final inter-reduction of the basis takes care of that.
        Some(
            out.into_iter()
                .map(|row| {
                    let terms = row.into_iter().map(|(c, v)| (columns[c as usize], v)).collect();
                    MultiPoly::from_sorted_terms(f, self.nvars, terms)
                })
                .collect(),
        )
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let (idx, _) = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.sugar.cmp(&b.sugar).then(a.lcm.cmp(&b.lcm)))?;
        Some(self.pairs.swap_remove(idx))
    }

    fn spoly_remainder(&self, p: &Pair) -> MultiPoly {
        let f = self.modulus;
        let gi = &self.polys[p.i];
        let gj = &self.polys[p.j];
        let si = gi.terms()[0].0.quotient_of(&p.lcm);
        let sj = gj.terms()[0].0.quotient_of(&p.lcm);
        let mut acc = Accumulator::new(f);
        acc.add_multiple(&gi.terms()[1..], &si, 1);
        acc.add_multiple(&gj.terms()[1..], &sj, f.neg(1));
        let reducers = self.reducers();
        reduce_accumulator(&mut acc, &reducers, self.nvars)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Driver {
    F4,
    Buchberger,
}

impl GroebnerBasis {
    /// Computes the reduced Gröbner basis of the ideal generated by `gens`.
    pub fn compute(modulus: PrimeModulus, nvars: usize, gens: &[MultiPoly]) -> GroebnerBasis {
        Self::compute_with(modulus, nvars, gens, Driver::F4)
    }

    /// Same result as [`GroebnerBasis::compute`], one S-pair at a time.
    pub fn compute_buchberger(
        modulus: PrimeModulus,
        nvars: usize,
        gens: &[MultiPoly],
    ) -> GroebnerBasis {
        Self::compute_with(modulus, nvars, gens, Driver::Buchberger)
    }

    fn compute_with(
        modulus: PrimeModulus,
        nvars: usize,
        gens: &[MultiPoly],
        driver: Driver,
    ) -> GroebnerBasis {
        let mut b = Builder {
            modulus,
            nvars,
            polys: Vec::new(),
            sugar: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
        };
        let unit = || GroebnerBasis {
            modulus,
            nvars,
            polys: vec![MultiPoly::constant(modulus, nvars, 1)],
        };

        let mut input: Vec<&MultiPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
        input.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
        for g in input {
            assert_eq!(g.nvars(), nvars);
            let sugar = g.total_degree().unwrap_or(0);
            let r = reduce_by(g, &b.reducers());
            if r.is_zero() {
                continue;
            }
            if r.is_constant() {
                return unit();
            }
            b.insert(r.monic(), sugar);
        }

        match driver {
            Driver::F4 => loop {
                let pairs = b.take_lowest_pairs();
                let Some(sugar) = pairs.first().map(|p| p.sugar) else { break };
                let Some(mut fresh) = b.f4_step(&pairs) else { return unit() };
                fresh.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
                for h in fresh {
                    b.insert(h, sugar);
                }
            },
            Driver::Buchberger => {
                while let Some(pair) = b.next_pair() {
                    let r = b.spoly_remainder(&pair);
                    if r.is_zero() {
                        continue;
                    }
                    if r.is_constant() {
                        return unit();
                    }
                    b.insert(r.monic(), pair.sugar);
                }
            }
        }

        let mut basis: Vec<MultiPoly> = b
            .polys
            .into_iter()
            .zip(b.active)
            .filter(|(_, a)| *a)
            .map(|(p, _)| p)
            .collect();
        basis.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
        // F4 can add several polynomials in one step whose leading monomials
        // divide each other; keep a minimal basis.
        let lms: Vec<Monomial> = basis.iter().map(|p| p.terms()[0].0).collect();
        let mut i = 0;
        basis.retain(|_| {
            let keep = !lms[..i].iter().any(|l| l.divides(&lms[i]));
            i += 1;
            keep
        });
        let mut reduced = Vec::with_capacity(basis.len());
        for i in 0..basis.len() {
            let others: Vec<&MultiPoly> =
                basis.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
            let head = MultiPoly::from_sorted_terms(modulus, nvars, vec![basis[i].terms()[0]]);
            let tail = MultiPoly::from_sorted_terms(modulus, nvars, basis[i].terms()[1..].to_vec());
            reduced.push(head.add(&reduce_by(&tail, &others)));
        }
        GroebnerBasis { modulus, nvars, polys: reduced }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.polys.iter().map(|p| &p.terms()[0].0)
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    /// Normal form of `p` modulo the ideal.
    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        let reducers: Vec<&MultiPoly> = self.polys.iter().collect();
        reduce_by(p, &reducers)
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        self.normal_form(p).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeModulus {
        PrimeModulus::new(1009).unwrap()
    }

    fn poly(nvars: usize, terms: &[(i64, &[u32])]) -> MultiPoly {
        let p = f();
        MultiPoly::from_terms(
            p,
            nvars,
            terms.iter().map(|(c, e)| (Monomial::from_exponents(e), p.from_i64(*c))).collect(),
        )
    }

    /// Every S-polynomial of the basis reduces to zero.
    fn check_buchberger(gb: &GroebnerBasis) {
        let polys = gb.polys();
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                let (a, b) = (&polys[i], &polys[j]);
                let l = a.terms()[0].0.lcm(&b.terms()[0].0);
                let s = a
                    .mul_term(&a.terms()[0].0.quotient_of(&l), 1)
                    .sub(&b.mul_term(&b.terms()[0].0.quotient_of(&l), 1));
                assert!(gb.contains(&s), "S({i},{j}) does not reduce to zero");
            }
        }
    }

    #[test]
    fn circle_and_line() {
        // x^2 + y^2 - 1, x - y
        let g = vec![
            poly(2, &[(1, &[2, 0]), (1, &[0, 2]), (-1, &[0, 0])]),
            poly(2, &[(1, &[1, 0]), (-1, &[0, 1])]),
        ];
        let gb = GroebnerBasis::compute(f(), 2, &g);
        check_buchberger(&gb);
        // Reduced basis: y^2 - 1/2, x - y
        assert_eq!(gb.polys().len(), 2);
        let half = f().inv(2);
        assert_eq!(gb.polys()[1], poly(2, &[(1, &[0, 2]), (-(half as i64), &[0, 0])]));
        for g in &g {
            assert!(gb.contains(g));
        }
    }

    #[test]
    fn inconsistent_system_gives_unit() {
        let g = vec![poly(1, &[(1, &[1]), (-1, &[0])]), poly(1, &[(1, &[1]), (-2, &[0])])];
        assert!(GroebnerBasis::compute(f(), 1, &g).is_unit());
    }

    #[test]
    fn cyclic_three() {
        let g = vec![
            poly(3, &[(1, &[1, 0, 0]), (1, &[0, 1, 0]), (1, &[0, 0, 1])]),
            poly(3, &[(1, &[1, 1, 0]), (1, &[0, 1, 1]), (1, &[1, 0, 1])]),
            poly(3, &[(1, &[1, 1, 1]), (-1, &[0, 0, 0])]),
        ];
        let gb = GroebnerBasis::compute(f(), 3, &g);
        check_buchberger(&gb);
        for p in &g {
            assert!(gb.contains(p));
        }
        // Known reduced grevlex basis has leading monomials x, y^2, z^3.
        let lms: Vec<Vec<u32>> = gb.leading_monomials().map(|m| m.exponents(3)).collect();
        assert_eq!(lms, vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]);
    }
}
