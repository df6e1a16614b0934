use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of non-negative integers. Trailing zeros are
/// dropped, so `(2,1,0)` and `(2,1)` are the same partition.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::parse(&format!("{parts:?}"), "parts must be weakly decreasing"));
        }
        Ok(Self::from_sorted(parts))
    }

    pub(crate) fn from_sorted(mut parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    /// Sorts arbitrary non-negative parts into a partition.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::from_sorted(parts)
    }

    pub fn zero() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The single-box partition `(1)`.
    pub fn box1() -> Self {
        Partition { parts: vec![1] }
    }

    pub fn rectangle(rows: usize, cols: u32) -> Self {
        Self::from_sorted(vec![cols; rows])
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Part `i` counted from 1, zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i.wrapping_sub(1)).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Parts padded with zeros to length `k`.
    pub fn padded(&self, k: usize) -> Vec<u32> {
        let mut v = self.parts.clone();
        v.resize(k.max(v.len()), 0);
        v
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.parts.len() <= rows && self.parts.first().map_or(true, |&p| p as usize <= cols)
    }

    pub fn contains(&self, mu: &Partition) -> bool {
        mu.parts.len() <= self.parts.len()
            && mu.parts.iter().zip(&self.parts).all(|(m, l)| m <= l)
    }

    /// Coordinate-wise difference `λ − μ`, re-sorted into a partition.
    pub fn subtract(&self, mu: &Partition) -> Result<Partition> {
        if !self.contains(mu) {
            return Err(Error::Containment { lambda: self.to_string(), mu: mu.to_string() });
        }
        let diff = self.parts.iter().enumerate().map(|(i, &l)| l - mu.part(i + 1)).collect();
        Ok(Partition::from_unsorted(diff))
    }

    /// Drops row `i` (1-based).
    pub(crate) fn remove_row(&self, i: usize) -> Partition {
        let mut v = self.parts.clone();
        if i <= v.len() {
            v.remove(i - 1);
        }
        Partition::from_sorted(v)
    }

    /// Drops column `j` (1-based).
    pub(crate) fn remove_column(&self, j: usize) -> Partition {
        self.conjugate().remove_row(j).conjugate()
    }

    /// Formats with zeros padded to `k` parts, e.g. `(2,2,1,0)`.
    pub fn display_padded(&self, k: usize) -> String {
        let v = self.padded(k);
        let body: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        format!("({})", body.join(","))
    }
}

/// Canonical order: by size, then lexicographically by parts.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "(0)");
        }
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(s, "expected a parenthesized list like (3,2,1)"))?;
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|e| Error::parse(s, e.to_string())))
            .collect::<Result<Vec<u32>>>()?;
        Partition::new(parts).map_err(|_| Error::parse(s, "parts must be weakly decreasing"))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

/// All partitions fitting a `rows × cols` box, in increasing canonical order.
pub fn partitions_in_box(rows: usize, cols: usize) -> Vec<Partition> {
    fn rec(rows: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        out.push(Partition::from_sorted(cur.clone()));
        if cur.len() == rows {
            return;
        }
        for p in 1..=max {
            cur.push(p);
            rec(rows, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(rows, cols as u32, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_normalize() {
        assert_eq!(p("(2,2,1,0)"), p("(2,2,1)"));
        assert_eq!(p("(2,2,1,0)").to_string(), "(2,2,1)");
        assert_eq!(p("(0,0)"), Partition::zero());
        assert_eq!(p("( 3, 1 )").parts(), &[3, 1]);
        assert!("(1,2)".parse::<Partition>().is_err());
        assert!("3,2".parse::<Partition>().is_err());
        assert_eq!(p("(2,2,1)").display_padded(4), "(2,2,1,0)");
    }

    #[test]
    fn subtraction() {
        assert_eq!(p("(3,2,1,0)").subtract(&p("(3)")).unwrap(), p("(2,1)"));
        assert_eq!(p("(3,2,1)").subtract(&p("(3,2,1)")).unwrap(), Partition::zero());
        assert_eq!(p("(2,1)").subtract(&Partition::zero()).unwrap(), p("(2,1)"));
        assert!(matches!(p("(2,1)").subtract(&p("(1,1,1)")), Err(Error::Containment { .. })));
    }

    #[test]
    fn conjugate_and_removal() {
        assert_eq!(p("(4,2,2)").conjugate(), p("(3,3,1,1)"));
        assert_eq!(p("(3,3,1)").remove_row(2), p("(3,1)"));
        assert_eq!(p("(4,2,2)").remove_column(1), p("(3,1,1)"));
    }

    #[test]
    fn box_partitions_are_binomial() {
        // Number of partitions in a k x (m-k) box is C(m, k).
        assert_eq!(partitions_in_box(2, 2).len(), 6);
        assert_eq!(partitions_in_box(4, 5).len(), 126);
        let v = partitions_in_box(3, 3);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
