use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::partition::Partition;
use crate::error::{Error, Result};

/// The Grassmannian `Gr(k,m)` of `k`-planes in `m`-space, drawn as a
/// `k × (m−k)` box of cells.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BoxShape {
    k: usize,
    m: usize,
}

impl BoxShape {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if k == 0 || k >= m {
            return Err(Error::InvalidBox { k, m });
        }
        Ok(BoxShape { k, m })
    }

    /// Allows the single-point Grassmannians `Gr(0,m)` and `Gr(m,m)` that
    /// reductions can land on.
    pub(crate) fn allowing_degenerate(k: usize, m: usize) -> Self {
        assert!(k <= m);
        BoxShape { k, m }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of columns, `m − k`.
    pub fn cols(&self) -> usize {
        self.m - self.k
    }

    /// `dim Gr(k,m) = k(m−k)`.
    pub fn area(&self) -> usize {
        self.k * self.cols()
    }

    pub fn is_degenerate(&self) -> bool {
        self.area() == 0
    }

    pub fn fits(&self, lambda: &Partition) -> bool {
        lambda.fits(self.k, self.cols())
    }

    /// Rows `i` with `λ_i > λ_{i+1}` together with the flag index
    /// `m − k + i − λ_i` of the rank condition they impose.
    pub fn essential_corners(&self, lambda: &Partition) -> Vec<(usize, usize)> {
        (1..=self.k)
            .filter(|&i| lambda.part(i) > lambda.part(i + 1))
            .map(|i| (i, self.cols() + i - lambda.part(i) as usize))
            .collect()
    }
}

impl fmt::Display for BoxShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gr({},{})", self.k, self.m)
    }
}

impl FromStr for BoxShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix("Gr(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(s, "expected Gr(k,m)"))?;
        let (k, m) = inner.split_once(',').ok_or_else(|| Error::parse(s, "expected Gr(k,m)"))?;
        let k = k.trim().parse().map_err(|_| Error::parse(s, "bad k"))?;
        let m = m.trim().parse().map_err(|_| Error::parse(s, "bad m"))?;
        BoxShape::new(k, m)
    }
}

/// True iff `λ` is a partition fitting the box.
pub fn validate_condition(shape: BoxShape, lambda: &Partition) -> bool {
    shape.fits(lambda)
}

/// A multiset of nonzero Schubert conditions on a Grassmannian, stored in
/// canonical (descending) order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SchubertProblem {
    shape: BoxShape,
    conditions: Vec<Partition>,
}

impl SchubertProblem {
    /// Zero partitions are dropped. The codimension sum is not checked here.
    pub fn new(shape: BoxShape, conditions: Vec<Partition>) -> Result<Self> {
        if let Some(bad) = conditions.iter().find(|c| !shape.fits(c)) {
            return Err(Error::DoesNotFit {
                partition: bad.to_string(),
                rows: shape.k(),
                cols: shape.cols(),
            });
        }
        Ok(Self::new_unchecked(shape, conditions))
    }

    pub(crate) fn new_unchecked(shape: BoxShape, mut conditions: Vec<Partition>) -> Self {
        conditions.retain(|c| !c.is_zero());
        conditions.sort_unstable_by(|a, b| b.cmp(a));
        SchubertProblem { shape, conditions }
    }

    pub fn shape(&self) -> BoxShape {
        self.shape
    }

    pub fn conditions(&self) -> &[Partition] {
        &self.conditions
    }

    pub fn codimension(&self) -> usize {
        self.conditions.iter().map(|c| c.size() as usize).sum()
    }

    pub fn is_well_posed(&self) -> bool {
        self.codimension() == self.shape.area()
    }

    pub fn check_codimension(&self) -> Result<()> {
        if self.is_well_posed() {
            Ok(())
        } else {
            Err(Error::Codimension { expected: self.shape.area(), actual: self.codimension() })
        }
    }

    /// Conditions grouped as `(partition, multiplicity)` in canonical order.
    pub fn grouped(&self) -> Vec<(&Partition, usize)> {
        let mut out: Vec<(&Partition, usize)> = Vec::new();
        for c in &self.conditions {
            match out.last_mut() {
                Some((p, n)) if *p == c => *n += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }
}

impl fmt::Display for SchubertProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.shape)?;
        if self.conditions.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, n)) in self.grouped().into_iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{p}")?;
            if n > 1 {
                write!(f, "^{n}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SchubertProblem {
    type Err = Error;

    /// Parses `"Gr(4,9): (3,3,2)*(2,2)^2*(2,1,1)"`; `"Gr(k,m): 1"` is the
    /// problem with no conditions.
    fn from_str(s: &str) -> Result<Self> {
        let (head, body) = s.split_once(':').ok_or_else(|| Error::parse(s, "missing ':'"))?;
        let shape: BoxShape = head.parse()?;
        let body = body.trim();
        let mut conditions = Vec::new();
        if body != "1" {
            for factor in body.split('*') {
                let factor = factor.trim();
                let (base, exp) = match factor.rsplit_once('^') {
                    Some((b, e)) => {
                        let e: usize =
                            e.trim().parse().map_err(|_| Error::parse(s, "bad exponent"))?;
                        (b, e)
                    }
                    None => (factor, 1),
                };
                let p: Partition = base.parse().map_err(|e| match e {
                    Error::Parse { message, .. } => Error::parse(s, message),
                    other => other,
                })?;
                conditions.extend(std::iter::repeat(p).take(exp));
            }
        }
        SchubertProblem::new(shape, conditions)
    }
}

impl Serialize for SchubertProblem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SchubertProblem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_display_roundtrip() {
        let p: SchubertProblem = "Gr(4,9): (2,1,1)*(3,3,2)*(2,2)^2".parse().unwrap();
        assert_eq!(p.to_string(), "Gr(4,9): (3,3,2)*(2,2)^2*(2,1,1)");
        assert!(p.is_well_posed());
        let again: SchubertProblem = p.to_string().parse().unwrap();
        assert_eq!(again, p);
        let empty: SchubertProblem = "Gr(2,4): 1".parse().unwrap();
        assert_eq!(empty.to_string(), "Gr(2,4): 1");
    }

    #[test]
    fn parse_errors() {
        assert!("Gr(2,4) (1)".parse::<SchubertProblem>().is_err());
        assert!("Gr(4,2): (1)".parse::<SchubertProblem>().is_err());
        assert!(matches!(
            "Gr(2,4): (3)".parse::<SchubertProblem>(),
            Err(Error::DoesNotFit { .. })
        ));
        assert!("Gr(2,4): (1)^x".parse::<SchubertProblem>().is_err());
    }

    #[test]
    fn conditions_and_corners() {
        let b = BoxShape::new(4, 9).unwrap();
        let l: Partition = "(2,2,1,0)".parse().unwrap();
        assert!(validate_condition(b, &l));
        assert!(validate_condition(b, &Partition::zero()));
        assert!(!validate_condition(BoxShape::new(2, 4).unwrap(), &"(3,0)".parse().unwrap()));
        assert_eq!(b.essential_corners(&l), vec![(2, 5), (3, 7)]);
        assert_eq!(b.essential_corners(&Partition::zero()), vec![]);
        assert_eq!(BoxShape::new(2, 4).unwrap().essential_corners(&Partition::box1()), vec![(1, 2)]);
    }
}
