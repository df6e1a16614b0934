//! Cycle-type censuses of symmetric groups and wreath products, and the
//! certificates that force the full symmetric group.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffalg::is_prime;

/// Cycle lengths of a permutation, sorted in decreasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<u32>", into = "Vec<u32>")]
pub struct CycleType(Vec<u32>);

impl CycleType {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(parts)
    }

    pub fn identity(n: usize) -> Self {
        CycleType(vec![1; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Degree of the permutation.
    pub fn n(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn largest(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn contains_part(&self, len: u32) -> bool {
        self.0.contains(&len)
    }

    /// Cycle type of a permutation given as images `perm[i]`.
    pub fn of_permutation(perm: &[usize]) -> Self {
        let mut seen = vec![false; perm.len()];
        let mut parts = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            parts.push(len);
        }
        CycleType::new(parts)
    }
}

impl From<Vec<u32>> for CycleType {
    fn from(v: Vec<u32>) -> Self {
        CycleType::new(v)
    }
}

impl From<CycleType> for Vec<u32> {
    fn from(c: CycleType) -> Self {
        c.0
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CycleType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(s, "expected (a,b,...)"))?;
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|e| Error::parse(s, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycleType::new(parts))
    }
}

/// Exact number of group elements of each cycle type.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Census {
    pub degree: u32,
    pub counts: BTreeMap<CycleType, u64>,
}

impl Census {
    pub fn order(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, ct: &CycleType) -> u64 {
        self.counts.get(ct).copied().unwrap_or(0)
    }

    /// Rows sorted like the published tables: longest cycles first.
    pub fn rows(&self) -> Vec<(&CycleType, u64)> {
        self.counts.iter().rev().map(|(c, &n)| (c, n)).collect()
    }
}

/// `S_a ≀ S_b` acting imprimitively on `a·b` points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct WreathSpec {
    pub a: u32,
    pub b: u32,
}

impl WreathSpec {
    pub fn new(a: u32, b: u32) -> Self {
        assert!(a >= 1 && b >= 1);
        WreathSpec { a, b }
    }

    pub fn degree(&self) -> u32 {
        self.a * self.b
    }

    /// `(a!)^b · b!`, or `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        let fa = factorial(self.a)?;
        let mut o = factorial(self.b)?;
        for _ in 0..self.b {
            o = o.checked_mul(fa)?;
        }
        Some(o)
    }
}

impl fmt::Display for WreathSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{} wr S{}", self.a, self.b)
    }
}

fn factorial(n: u32) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, x| acc.checked_mul(x))
}

/// Partitions of `n`, each in decreasing order.
pub fn integer_partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Census of `S_n` from the class-size formula `n! / Π c^{m_c} m_c!`.
pub fn census_symmetric(n: u32) -> Census {
    assert!((1..=20).contains(&n), "census_symmetric supports 1 <= n <= 20");
    let nf = factorial(n).unwrap();
    let counts = integer_partitions(n)
        .into_iter()
        .map(|parts| {
            let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
            for &p in &parts {
                *mult.entry(p).or_default() += 1;
            }
            let denom: u128 = mult
                .iter()
                .map(|(&c, &m)| (c as u128).pow(m) * factorial(m).unwrap())
                .product();
            (CycleType::new(parts), (nf / denom) as u64)
        })
        .collect();
    Census { degree: n, counts }
}

/// Default cap on the number of elements [`census_wreath`] will enumerate.
pub const WREATH_BUDGET: u128 = 100_000_000;

/// All permutations of `0..n` as image vectors.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    // Lexicographic successor.
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Census of `S_a ≀ S_b` by enumerating every element
/// `(σ_1, …, σ_b; τ)`, which sends point `(j, i)` to `(τ(j), σ_j(i))`.
pub fn census_wreath(spec: WreathSpec) -> Result<Census> {
    census_wreath_with_budget(spec, WREATH_BUDGET)
}

pub fn census_wreath_with_budget(spec: WreathSpec, limit: u128) -> Result<Census> {
    let order = spec.order().unwrap_or(u128::MAX);
    if order > limit {
        return Err(Error::BudgetExceeded { order, limit });
    }
    let (a, b) = (spec.a as usize, spec.b as usize);
    let inner = permutations(a);
    let outer = permutations(b);
    let mut counts: BTreeMap<CycleType, u64> = BTreeMap::new();
    let mut choice = vec![0usize; b];
    let mut image = vec![0usize; a * b];
    loop {
        for tau in &outer {
            for j in 0..b {
                let sigma = &inner[choice[j]];
                for i in 0..a {
                    image[j * a + i] = tau[j] * a + sigma[i];
                }
            }
            *counts.entry(CycleType::of_permutation(&image)).or_default() += 1;
        }
        // Odometer over (σ_1, …, σ_b).
        let mut pos = 0;
        loop {
            if pos == b {
                return Ok(Census { degree: spec.degree(), counts });
            }
            choice[pos] += 1;
            if choice[pos] < inner.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Cached [`census_wreath`].
pub fn wreath_census_cached(spec: WreathSpec) -> Result<Arc<Census>> {
    static CACHE: OnceLock<Mutex<HashMap<WreathSpec, Arc<Census>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&spec) {
        return Ok(c.clone());
    }
    let c = Arc::new(census_wreath(spec)?);
    cache.lock().unwrap().insert(spec, c.clone());
    Ok(c)
}

/// `order · count / samples` for every observed type.
pub fn empirical_fractions(
    observed: &BTreeMap<CycleType, u64>,
    group_order: u64,
    samples: u64,
) -> BTreeMap<CycleType, BigRational> {
    assert!(samples > 0, "empirical fractions need at least one sample");
    observed
        .iter()
        .map(|(c, &n)| {
            let v = BigRational::new(
                BigInt::from(group_order) * BigInt::from(n),
                BigInt::from(samples),
            );
            (c.clone(), v)
        })
        .collect()
}

#[derive(Clone, PartialEq, Debug)]
pub struct ConsistencyScore {
    /// Every observed type occurs in the group.
    pub contained: bool,
    /// Largest `|empirical fraction − census count|` over all types.
    pub max_abs_deviation: BigRational,
    /// Pearson statistic over the census types, with expected counts
    /// `samples · count / order`.
    pub chi_square: BigRational,
}

pub fn consistency_score(observed: &BTreeMap<CycleType, u64>, census: &Census) -> ConsistencyScore {
    let samples: u64 = observed.values().sum();
    let order = census.order();
    let contained = observed.iter().all(|(c, &n)| n == 0 || census.count(c) > 0);
    if samples == 0 {
        return ConsistencyScore {
            contained,
            max_abs_deviation: BigRational::zero(),
            chi_square: BigRational::zero(),
        };
    }
    let fractions = empirical_fractions(observed, order, samples);
    let mut max_dev = BigRational::zero();
    let types = census.counts.keys().chain(observed.keys());
    for c in types {
        let emp = fractions.get(c).cloned().unwrap_or_else(BigRational::zero);
        let dev = (emp - BigRational::from_integer(census.count(c).into())).abs();
        if dev > max_dev {
            max_dev = dev;
        }
    }
    let mut chi = BigRational::zero();
    for (c, &cnt) in &census.counts {
        let expected =
            BigRational::new(BigInt::from(samples) * BigInt::from(cnt), BigInt::from(order));
        let obs = BigRational::from_integer(observed.get(c).copied().unwrap_or(0).into());
        let d = obs - &expected;
        chi += &d * &d / expected;
    }
    ConsistencyScore { contained, max_abs_deviation: max_dev, chi_square: chi }
}

/// The prime `q` when the largest part is prime and strictly exceeds all
/// others; then a suitable power of the permutation is a `q`-cycle.
pub fn implies_p_cycle(ct: &CycleType) -> Option<u32> {
    let parts = ct.parts();
    let q = *parts.first()?;
    let strictly_largest = parts.get(1).map_or(true, |&second| second < q);
    (strictly_largest && is_prime(q as u64)).then_some(q)
}

/// An `n`-cycle, an `(n−1)`-cycle and a `q`-cycle power with prime
/// `q < n − 2` together generate `S_n`.
pub fn jordan_certificate<'a>(observed: impl IntoIterator<Item = &'a CycleType>, n: u32) -> bool {
    assert!(n >= 6, "the Jordan certificate applies for n >= 6");
    let (mut full, mut minus_one, mut prime) = (false, false, false);
    for ct in observed {
        full |= ct.parts() == [n];
        minus_one |= ct.parts() == [n - 1, 1];
        prime |= implies_p_cycle(ct).is_some_and(|q| q < n - 2);
    }
    full && minus_one && prime
}
