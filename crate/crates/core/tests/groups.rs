//! Wreath-product censuses against the published tables, and the
//! certificate logic against brute force on small groups.

use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;

use schubgal::groups::{
    census_symmetric, census_wreath, implies_p_cycle, jordan_certificate, permutations, CycleType,
    WreathSpec,
};
use schubgal::sampler::small_n_decision;

fn ct(s: &str) -> CycleType {
    s.parse().unwrap()
}

fn assert_table(spec: WreathSpec, rows: &[(&str, u64)]) {
    let census = census_wreath(spec).unwrap();
    assert_eq!(census.counts.len(), rows.len(), "{spec}");
    for &(t, n) in rows {
        assert_eq!(census.count(&ct(t)), n, "{spec} {t}");
    }
    assert_eq!(census.order() as u128, spec.order().unwrap());
}

#[test]
fn d4_table() {
    assert_table(
        WreathSpec::new(2, 2),
        &[("(4)", 2), ("(2,2)", 3), ("(2,1,1)", 2), ("(1,1,1,1)", 1)],
    );
}

#[test]
fn s3_wr_s2_table() {
    assert_table(
        WreathSpec::new(3, 2),
        &[
            ("(6)", 12),
            ("(4,2)", 18),
            ("(3,3)", 4),
            ("(3,2,1)", 12),
            ("(3,1,1,1)", 4),
            ("(2,2,2)", 6),
            ("(2,2,1,1)", 9),
            ("(2,1,1,1,1)", 6),
            ("(1,1,1,1,1,1)", 1),
        ],
    );
}

#[test]
fn s2_wr_s3_table() {
    assert_table(
        WreathSpec::new(2, 3),
        &[
            ("(6)", 8),
            ("(4,2)", 6),
            ("(4,1,1)", 6),
            ("(3,3)", 8),
            ("(2,2,2)", 7),
            ("(2,2,1,1)", 9),
            ("(2,1,1,1,1)", 3),
            ("(1,1,1,1,1,1)", 1),
        ],
    );
}

#[test]
fn s5_wr_s2_table() {
    assert_table(
        WreathSpec::new(5, 2),
        &[
            ("(10)", 2880),
            ("(8,2)", 3600),
            ("(6,4)", 2400),
            ("(6,2,2)", 2400),
            ("(5,5)", 576),
            ("(5,4,1)", 1440),
            ("(5,3,2)", 960),
            ("(5,3,1,1)", 960),
            ("(5,2,2,1)", 720),
            ("(5,2,1,1,1)", 480),
            ("(5,1,1,1,1,1)", 48),
            ("(4,4,2)", 1800),
            ("(4,4,1,1)", 900),
            ("(4,3,2,1)", 1200),
            ("(4,3,1,1,1)", 1200),
            ("(4,2,2,2)", 1200),
            ("(4,2,2,1,1)", 900),
            ("(4,2,1,1,1,1)", 600),
            ("(4,1,1,1,1,1,1)", 60),
            ("(3,3,2,2)", 400),
            ("(3,3,2,1,1)", 800),
            ("(3,3,1,1,1,1)", 400),
            ("(3,2,2,2,1)", 600),
            ("(3,2,2,1,1,1)", 1000),
            ("(3,2,1,1,1,1,1)", 440),
            ("(3,1,1,1,1,1,1,1)", 40),
            ("(2,2,2,2,2)", 120),
            ("(2,2,2,2,1,1)", 225),
            ("(2,2,2,1,1,1,1)", 300),
            ("(2,2,1,1,1,1,1,1)", 130),
            ("(2,1,1,1,1,1,1,1,1)", 20),
            ("(1,1,1,1,1,1,1,1,1,1)", 1),
        ],
    );
    assert_eq!(census_wreath(WreathSpec::new(5, 2)).unwrap().order(), 28_800);
}

#[test]
fn wreath_orders() {
    for a in 1..=4u32 {
        for b in 1..=3u32 {
            let spec = WreathSpec::new(a, b);
            let fact = |n: u32| (1..=n as u64).product::<u64>();
            let want = fact(a).pow(b) * fact(b);
            assert_eq!(census_wreath(spec).unwrap().order(), want, "{spec}");
        }
    }
}

#[test]
fn symmetric_census_by_brute_force() {
    for n in 1..=6u32 {
        let c = census_symmetric(n);
        let mut brute = std::collections::BTreeMap::new();
        for p in permutations(n as usize) {
            *brute.entry(CycleType::of_permutation(&p)).or_insert(0u64) += 1;
        }
        assert_eq!(c.counts, brute, "S{n}");
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn closure(gens: &[Vec<usize>], n: usize) -> BTreeSet<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut group = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = compose(s, &g);
            if group.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    group
}

fn transitive(group: &BTreeSet<Vec<usize>>, n: usize) -> bool {
    let orbit: HashSet<usize> = group.iter().map(|g| g[0]).collect();
    orbit.len() == n
}

/// Transitive subgroups of `S_n` generated by at most two elements, which
/// covers every transitive subgroup for `n ≤ 5`.
fn transitive_subgroups(n: usize) -> Vec<BTreeSet<Vec<usize>>> {
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in &perms {
        for b in &perms {
            let g = closure(&[a.clone(), b.clone()], n);
            if transitive(&g, n) && seen.insert(g.clone()) {
                out.push(g);
            }
        }
    }
    out
}

#[test]
fn small_n_rule_separates_transitive_groups() {
    let expected_classes = [(2, 1), (3, 2), (4, 5), (5, 5)];
    for (n, classes) in expected_classes {
        let groups = transitive_subgroups(n);
        // Conjugacy classes of transitive subgroups are told apart here by
        // their cycle-type profiles.
        let profiles: BTreeSet<Vec<(CycleType, usize)>> = groups
            .iter()
            .map(|g| {
                let mut m = std::collections::BTreeMap::new();
                for p in g {
                    *m.entry(CycleType::of_permutation(p)).or_insert(0) += 1;
                }
                m.into_iter().collect()
            })
            .collect();
        assert_eq!(profiles.len(), classes, "S{n}");
        let full = (1..=n).product::<usize>();
        for g in &groups {
            let types: BTreeSet<CycleType> =
                g.iter().map(|p| CycleType::of_permutation(p)).collect();
            assert_eq!(
                small_n_decision(&types, n as u32),
                g.len() == full,
                "S{n} subgroup of order {}",
                g.len()
            );
        }
    }
}

fn permutation_of_type(parts: &[u32]) -> Vec<usize> {
    let n: u32 = parts.iter().sum();
    let mut perm: Vec<usize> = (0..n as usize).collect();
    let mut start = 0usize;
    for &p in parts {
        let p = p as usize;
        for i in 0..p {
            perm[start + i] = start + (i + 1) % p;
        }
        start += p;
    }
    perm
}

fn power(perm: &[usize], e: u64) -> Vec<usize> {
    // Each cycle of length L only needs the exponent mod L.
    let mut out = perm.to_vec();
    let mut seen = vec![false; perm.len()];
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut cycle = vec![s];
        seen[s] = true;
        let mut x = perm[s];
        while x != s {
            seen[x] = true;
            cycle.push(x);
            x = perm[x];
        }
        let l = cycle.len();
        let k = (e % l as u64) as usize;
        for (i, &c) in cycle.iter().enumerate() {
            out[c] = cycle[(i + k) % l];
        }
    }
    out
}

fn cycle_type_strategy() -> impl Strategy<Value = CycleType> {
    prop::collection::vec(1u32..=12, 1..6)
        .prop_map(|mut v| {
            let mut total = 0;
            v.retain(|&p| {
                total += p;
                total <= 12
            });
            CycleType::new(v)
        })
        .prop_filter("nonempty", |c| c.n() > 0)
}

proptest! {
    #[test]
    fn p_cycle_power_is_a_q_cycle(c in cycle_type_strategy()) {
        if let Some(q) = implies_p_cycle(&c) {
            let fact = (1..q as u64).fold(1u64, |acc, x| acc * x);
            let perm = power(&permutation_of_type(c.parts()), fact);
            let got = CycleType::of_permutation(&perm);
            let mut want = vec![q];
            want.extend(std::iter::repeat(1).take((c.n() - q) as usize));
            prop_assert_eq!(got, CycleType::new(want));
        }
    }

    #[test]
    fn jordan_is_monotone(
        n in 6u32..=12,
        picks in prop::collection::vec(0usize..40, 0..8),
        extra in 0usize..40,
    ) {
        let all: Vec<CycleType> = schubgal::groups::integer_partitions(n)
            .into_iter()
            .map(CycleType::new)
            .collect();
        let mut set: Vec<CycleType> = picks.iter().map(|&i| all[i % all.len()].clone()).collect();
        let before = jordan_certificate(&set, n);
        set.push(all[extra % all.len()].clone());
        prop_assert!(!before || jordan_certificate(&set, n));
    }
}

#[test]
fn jordan_needs_all_three() {
    let n = 10;
    let full = ct("(10)");
    let minus = ct("(9,1)");
    let prime = ct("(7,2,1)");
    assert!(jordan_certificate([&full, &minus, &prime], n));
    assert!(!jordan_certificate([&full, &minus], n));
    assert!(!jordan_certificate([&full, &prime], n));
    assert!(!jordan_certificate([&minus, &prime], n));
    // A 7-cycle is too long for n = 9.
    assert!(!jordan_certificate([&ct("(9)"), &ct("(8,1)"), &ct("(7,2)")], 9));
}
