use std::fmt;

use super::field::{FieldElem, PrimeModulus};
use super::monomial::Monomial;

/// Sparse polynomial over `F_p` in a fixed number of variables.
///
/// Terms are kept sorted strictly descending in grevlex order with no zero
/// coefficients, so the leading term is `terms[0]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    modulus: PrimeModulus,
    nvars: usize,
    terms: Vec<(Monomial, FieldElem)>,
}

impl MultiPoly {
    pub fn zero(modulus: PrimeModulus, nvars: usize) -> Self {
        MultiPoly { modulus, nvars, terms: Vec::new() }
    }

    pub fn constant(modulus: PrimeModulus, nvars: usize, c: FieldElem) -> Self {
        let c = modulus.reduce(c as u64);
        let terms = if c == 0 { vec![] } else { vec![(Monomial::one(), c)] };
        MultiPoly { modulus, nvars, terms }
    }

    pub fn var(modulus: PrimeModulus, nvars: usize, index: usize) -> Self {
        assert!(index < nvars);
        MultiPoly { modulus, nvars, terms: vec![(Monomial::var(index), 1)] }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(
        modulus: PrimeModulus,
        nvars: usize,
        mut terms: Vec<(Monomial, FieldElem)>,
    ) -> Self {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, FieldElem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = modulus.reduce(c as u64);
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = modulus.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        MultiPoly { modulus, nvars, terms: out }
    }

    /// Trusts that `terms` are already sorted descending with nonzero coefficients.
    pub(crate) fn from_sorted_terms(
        modulus: PrimeModulus,
        nvars: usize,
        terms: Vec<(Monomial, FieldElem)>,
    ) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        MultiPoly { modulus, nvars, terms }
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, FieldElem)] {
        &self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<FieldElem> {
        self.terms.first().map(|t| t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_one())
    }

    pub fn scale(&self, c: FieldElem) -> MultiPoly {
        let f = self.modulus;
        if c == 0 {
            return MultiPoly::zero(f, self.nvars);
        }
        let terms = self.terms.iter().map(|&(m, a)| (m, f.mul(a, c))).collect();
        MultiPoly { modulus: f, nvars: self.nvars, terms }
    }

    pub fn monic(&self) -> MultiPoly {
        match self.leading_coeff() {
            None | Some(1) => self.clone(),
            Some(c) => self.scale(self.modulus.inv(c)),
        }
    }

    /// `c * m * self`
    pub fn mul_term(&self, m: &Monomial, c: FieldElem) -> MultiPoly {
        let f = self.modulus;
        if c == 0 {
            return MultiPoly::zero(f, self.nvars);
        }
        let terms = self.terms.iter().map(|(t, a)| (t.mul(m), f.mul(*a, c))).collect();
        MultiPoly { modulus: f, nvars: self.nvars, terms }
    }

    /// `self + c * other`, by merging the sorted term lists.
    pub fn add_scaled(&self, other: &MultiPoly, c: FieldElem) -> MultiPoly {
        let f = self.modulus;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let v = f.mul(b[j].1, c);
                    if v != 0 {
                        out.push((b[j].0, v));
                    }
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let v = f.mul_add(a[i].1, b[j].1, c);
                    if v != 0 {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let v = f.mul(t.1, c);
            if v != 0 {
                out.push((t.0, v));
            }
        }
        MultiPoly { modulus: f, nvars: self.nvars, terms: out }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add_scaled(other, self.modulus.neg(1))
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let f = self.modulus;
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), f.mul(*ca, *cb)));
            }
        }
        MultiPoly::from_terms(f, self.nvars, terms)
    }

    pub fn evaluate(&self, point: &[FieldElem]) -> FieldElem {
        assert_eq!(point.len(), self.nvars);
        let f = self.modulus;
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut v = *c;
            for (i, &x) in point.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    v = f.mul(v, f.pow(x, e as u64));
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}
