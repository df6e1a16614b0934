use std::cmp::Ordering;
use std::fmt;

/// Maximum number of variables a [`Monomial`] can carry.
pub const MAX_VARS: usize = 32;

const WORDS: usize = MAX_VARS / 8;
const HIGH_BITS: u64 = 0x8080_8080_8080_8080;

/// Exponent vector over at most [`MAX_VARS`] variables, ordered by graded
/// reverse lexicographic order.
///
/// Exponents are packed one byte per variable into little-endian words, so the
/// reverse-lexicographic tie break is an integer comparison of words taken from
/// the last one down. Exponents must stay below 128.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    words: [u64; WORDS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(index: usize) -> Self {
        let mut m = Monomial::one();
        m.set(index, 1);
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables: {}", exps.len());
        let mut m = Monomial::one();
        for (i, &e) in exps.iter().enumerate() {
            m.set(i, e);
        }
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn exponent(&self, index: usize) -> u32 {
        ((self.words[index / 8] >> (8 * (index % 8))) & 0xff) as u32
    }

    pub fn set(&mut self, index: usize, exp: u32) {
        assert!(index < MAX_VARS && exp < 128, "monomial overflow: x{index}^{exp}");
        let old = self.exponent(index);
        let shift = 8 * (index % 8);
        let w = &mut self.words[index / 8];
        *w = (*w & !(0xffu64 << shift)) | ((exp as u64) << shift);
        self.degree = self.degree - old + exp;
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut words = [0u64; WORDS];
        for (w, (a, b)) in words.iter_mut().zip(self.words.iter().zip(&other.words)) {
            *w = a + b;
        }
        let out = Monomial { degree: self.degree + other.degree, words };
        debug_assert!(out.words.iter().all(|w| w & HIGH_BITS == 0), "exponent overflow");
        out
    }

    /// True when `self` divides `other`.
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        if self.degree > other.degree {
            return false;
        }
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| ((b | HIGH_BITS) - a) & HIGH_BITS == HIGH_BITS)
    }

    /// `other / self`, assuming `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        let mut words = [0u64; WORDS];
        for (w, (a, b)) in words.iter_mut().zip(self.words.iter().zip(&other.words)) {
            *w = b - a;
        }
        Monomial { degree: other.degree - self.degree, words }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = Monomial::one();
        for i in 0..MAX_VARS {
            let e = self.exponent(i).max(other.exponent(i));
            if e > 0 {
                out.set(i, e);
            }
        }
        out
    }

    /// True when the two monomials share no variable.
    #[inline]
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| {
            // nonzero bytes in both words
            let nz = |w: u64| ((w & !HIGH_BITS) + !HIGH_BITS | w) & HIGH_BITS;
            nz(*a) & nz(*b) == 0
        })
    }

    /// Index of the single variable when this is a pure power `x_i^e`, `e > 0`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for i in 0..MAX_VARS {
            if self.exponent(i) > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for j in (0..WORDS).rev() {
                if self.words[j] != other.words[j] {
                    // smaller exponent in the last differing variable wins
                    return other.words[j].cmp(&self.words[j]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for i in 0..MAX_VARS {
            let e = self.exponent(i);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}
