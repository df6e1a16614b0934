//! The detectors over every reduced problem on Gr(4,9) with 2..=300
//! solutions, compared with the reference listing in `data/`.

use std::collections::{BTreeMap, BTreeSet};

use schubgal::deficiency::{detect, predicted_bound_base, RuleId};
use schubgal::groups::WreathSpec;
use schubgal::schubert::{for_each_reduced, BoxShape, CountFilter};
use schubgal::SchubertProblem;

const LISTING: &str = include_str!("data/gr49_deficient.tsv");

struct Row {
    ty: u32,
    rule: String,
    bound: String,
    problem: SchubertProblem,
}

fn listing() -> Vec<Row> {
    LISTING
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            Row {
                ty: f[0].parse().unwrap(),
                rule: f[1].to_string(),
                bound: f[2].to_string(),
                problem: format!("Gr(4,9): {}", f[3]).parse().unwrap(),
            }
        })
        .collect()
}

/// `(rule, bound, problem)` for every detector hit whose predicted wreath
/// product has degree `n`.
fn detected() -> BTreeSet<(String, String, String)> {
    let shape = BoxShape::new(4, 9).unwrap();
    let filter = CountFilter { min_solutions: Some(2), max_solutions: Some(300) };
    let mut out = BTreeSet::new();
    for_each_reduced(shape, filter, |p, n| {
        let n = n.unwrap_or_else(|| p.count_solutions().unwrap());
        if let Some(m) = detect(&p) {
            let bound = predicted_bound_base(&m).expect("Gr(4,9) auxiliaries are base cases");
            assert_eq!(bound.degree() as u64, n, "{p}");
            assert_eq!(m.auxiliary.count_solutions().unwrap() * m.outer as u64, n, "{p}");
            out.insert((m.rule.to_string(), bound.to_string(), p.to_string()));
        }
    });
    out
}

#[test]
fn detectors_reproduce_the_listing() {
    let rows = listing();
    let want: BTreeSet<(String, String, String)> = rows
        .iter()
        .map(|r| (r.rule.clone(), r.bound.clone(), r.problem.to_string()))
        .collect();
    assert_eq!(want.len(), rows.len(), "duplicate rows");
    let got = detected();
    let missing: Vec<_> = want.difference(&got).collect();
    let extra: Vec<_> = got.difference(&want).collect();
    assert!(missing.is_empty() && extra.is_empty(), "missing {missing:?}\nextra {extra:?}");
    assert_eq!(got.len(), 149);
}

#[test]
fn listing_types_and_groups() {
    let rows = listing();
    let mut per_type: BTreeMap<u32, usize> = BTreeMap::new();
    for r in &rows {
        *per_type.entry(r.ty).or_default() += 1;
        let n = r.problem.count_solutions().unwrap();
        assert!([4, 6, 10].contains(&n), "{}", r.problem);
        let group = match r.ty {
            1..=6 => WreathSpec::new(2, 2),
            7 | 10 => WreathSpec::new(3, 2),
            8 | 9 => WreathSpec::new(2, 3),
            11 => WreathSpec::new(5, 2),
            t => panic!("unknown type {t}"),
        };
        assert_eq!(r.bound, group.to_string(), "{}", r.problem);
    }
    let want = BTreeMap::from([
        (1, 67),
        (2, 8),
        (3, 3),
        (4, 7),
        (5, 2),
        (6, 8),
        (7, 21),
        (8, 15),
        (9, 5),
        (10, 4),
        (11, 9),
    ]);
    assert_eq!(per_type, want);
}

#[test]
fn named_theorem_problems_are_detected() {
    for (s, rule) in [
        ("Gr(4,9): (4,2,2)*(2,2)*(1,1,1)^2*(1)^2", RuleId::R5),
        ("Gr(4,9): (4,2,2)*(2,2)*(2,1,1)*(1,1,1)*(1)", RuleId::R5),
        ("Gr(4,9): (4,2,2)*(2,2)*(2,1,1)^2", RuleId::R5),
        ("Gr(4,9): (3,3,2)*(2,2)^2*(1,1,1)*(1)", RuleId::R6),
        ("Gr(4,9): (3,3,2)*(2,2)^2*(2,1,1)", RuleId::R6),
    ] {
        let p: SchubertProblem = s.parse().unwrap();
        let m = detect(&p).unwrap_or_else(|| panic!("{s}"));
        assert_eq!(m.rule, rule, "{s}");
        assert_eq!(predicted_bound_base(&m).unwrap(), WreathSpec::new(2, 2));
    }
}
