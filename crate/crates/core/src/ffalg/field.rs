use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of a prime field, stored as its canonical representative in `[0, p)`.
pub type FieldElem = u32;

/// An odd prime `p < 2^31`, checked at construction.
///
/// All arithmetic on [`FieldElem`] values goes through this type so that every
/// result stays reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeModulus {
    p: u32,
}

impl PrimeModulus {
    pub const DEFAULT: u32 = 1009;

    pub fn new(p: u32) -> Result<Self> {
        if p < 3 || p >= (1 << 31) || !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(PrimeModulus { p })
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: u64) -> FieldElem {
        (x % self.p as u64) as u32
    }

    #[inline]
    pub fn from_i64(self, x: i64) -> FieldElem {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: FieldElem, b: FieldElem) -> FieldElem {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: FieldElem) -> FieldElem {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: FieldElem, b: FieldElem) -> FieldElem {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(self, a: FieldElem, b: FieldElem, c: FieldElem) -> FieldElem {
        ((a as u64 + b as u64 * c as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: FieldElem, mut exp: u64) -> FieldElem {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    ///
    /// Panics on zero.
    pub fn inv(self, a: FieldElem) -> FieldElem {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        self.from_i64(t0)
    }
}

impl TryFrom<u32> for PrimeModulus {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        PrimeModulus::new(p)
    }
}

impl From<PrimeModulus> for u32 {
    fn from(m: PrimeModulus) -> u32 {
        m.p
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin; the witness set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
    }

    #[test]
    fn rejects_composites_and_two() {
        assert!(PrimeModulus::new(1009).is_ok());
        assert!(PrimeModulus::new(1000).is_err());
        assert!(PrimeModulus::new(2).is_err());
        assert!(PrimeModulus::new(1).is_err());
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u32..1009, b in 0u32..1009, c in 0u32..1009) {
            let f = PrimeModulus::new(1009).unwrap();
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(f.sub(a, b), b), a);
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }

        #[test]
        fn fermat(a in 1u32..65521) {
            let f = PrimeModulus::new(65521).unwrap();
            prop_assert_eq!(f.pow(a, 65520), 1);
        }
    }
}
