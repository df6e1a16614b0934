use std::fmt;

use super::field::{FieldElem, PrimeModulus};
use crate::error::{Error, Result};

/// Dense univariate polynomial over `F_p`, coefficients from low to high
/// degree with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    modulus: PrimeModulus,
    coeffs: Vec<FieldElem>,
}

impl UniPoly {
    pub fn new(modulus: PrimeModulus, coeffs: Vec<FieldElem>) -> Self {
        let mut p = UniPoly {
            modulus,
            coeffs: coeffs.into_iter().map(|c| modulus.reduce(c as u64)).collect(),
        };
        p.trim();
        p
    }

    pub fn zero(modulus: PrimeModulus) -> Self {
        UniPoly { modulus, coeffs: Vec::new() }
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        UniPoly { modulus, coeffs: vec![1] }
    }

    /// The polynomial `x`.
    pub fn x(modulus: PrimeModulus) -> Self {
        UniPoly { modulus, coeffs: vec![0, 1] }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(modulus: PrimeModulus, roots: &[FieldElem]) -> Self {
        let mut p = UniPoly::one(modulus);
        for &r in roots {
            p = p.mul(&UniPoly::new(modulus, vec![modulus.neg(r), 1]));
        }
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let f = self.modulus;
        let inv = f.inv(self.leading_coeff());
        UniPoly { modulus: f, coeffs: self.coeffs.iter().map(|&c| f.mul(c, inv)).collect() }
    }

    pub fn evaluate(&self, x: FieldElem) -> FieldElem {
        let f = self.modulus;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.mul_add(c, acc, x))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                f.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        UniPoly::new(f, coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let f = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                f.sub(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        UniPoly::new(f, coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.modulus);
        }
        let f = self.modulus;
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        UniPoly::new(f, out)
    }

    /// Quotient and remainder. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let f = self.modulus;
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(f), self.clone());
        }
        let inv = f.inv(divisor.leading_coeff());
        let mut quot = vec![0; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dd], inv);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = f.mul_add(rem[i + j], nc, d);
            }
        }
        rem.truncate(dd);
        (UniPoly::new(f, quot), UniPoly::new(f, rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        let f = self.modulus;
        let coeffs =
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, f.reduce(i as u64)));
        UniPoly::new(f, coeffs.collect())
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &UniPoly) -> UniPoly {
        let mut base = self.rem(m);
        let mut acc = UniPoly::one(self.modulus).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// A nonconstant polynomial is squarefree when it is coprime to its
    /// derivative.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, sorted
    /// in decreasing order, by distinct-degree factorization.
    pub fn factor_degrees(&self) -> Result<Vec<u32>> {
        if !self.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let f = self.modulus;
        let p = f.value() as u64;
        let mut rest = self.monic();
        let x = UniPoly::x(f);
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut d = 1usize;
        while let Some(deg) = rest.degree() {
            if deg < 2 * d {
                if deg > 0 {
                    out.push(deg as u32);
                }
                break;
            }
            h = h.pow_mod(p, &rest);
            let g = rest.gcd(&h.sub(&x));
            let gd = g.degree().unwrap_or(0);
            if gd > 0 {
                out.extend(std::iter::repeat(d as u32).take(gd / d));
                rest = rest.div_rem(&g).0;
                h = h.rem(&rest);
            }
            d += 1;
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        Ok(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> PrimeModulus {
        PrimeModulus::new(7).unwrap()
    }

    #[test]
    fn factor_degrees_small() {
        let f = f7();
        // (x - 1)(x - 2)(x^2 + 1): x^2 + 1 is irreducible mod 7.
        let p = UniPoly::from_roots(f, &[1, 2]).mul(&UniPoly::new(f, vec![1, 0, 1]));
        assert_eq!(p.factor_degrees().unwrap(), vec![2, 1, 1]);
        // x^3 - 2 is irreducible mod 7 (2 is not a cube).
        let q = UniPoly::new(f, vec![5, 0, 0, 1]);
        assert_eq!(q.factor_degrees().unwrap(), vec![3]);
        let sq = UniPoly::from_roots(f, &[3, 3]);
        assert!(matches!(sq.factor_degrees(), Err(Error::NotSquarefree)));
    }

    /// Counts irreducible monic polynomials of degree `d` over `F_7` by
    /// brute force and checks against the factorization.
    #[test]
    fn irreducible_quadratics_match_count() {
        let f = f7();
        let mut irreducible = 0;
        for a in 0..7 {
            for b in 0..7 {
                let p = UniPoly::new(f, vec![b, a, 1]);
                let has_root = (0..7).any(|x| p.evaluate(x) == 0);
                if let Ok(d) = p.factor_degrees() {
                    assert_eq!(d == vec![2], !has_root);
                    if d == vec![2] {
                        irreducible += 1;
                    }
                }
            }
        }
        // (q^2 - q) / 2
        assert_eq!(irreducible, 21);
    }

    proptest! {
        #[test]
        fn div_rem_identity(a in prop::collection::vec(0u32..1009, 0..12),
                            b in prop::collection::vec(0u32..1009, 1..8)) {
            let f = PrimeModulus::new(1009).unwrap();
            let a = UniPoly::new(f, a);
            let b = UniPoly::new(f, b);
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn split_polynomials_factor_into_linears(roots in prop::collection::btree_set(0u32..1009, 1..10)) {
            let f = PrimeModulus::new(1009).unwrap();
            let r: Vec<u32> = roots.into_iter().collect();
            let p = UniPoly::from_roots(f, &r);
            prop_assert_eq!(p.factor_degrees().unwrap(), vec![1; r.len()]);
        }
    }
}
