//! Arithmetic in prime fields F_p.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Coefficient type; always reduced modulo the field prime.
pub type Coeff = u32;

/// A validated prime, the characteristic of the coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Prime(u32);

impl Prime {
    pub const TWO: Prime = Prime(2);

    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    /// Reduce a signed integer into the field.
    #[inline]
    pub fn from_i64(self, x: i64) -> Coeff {
        x.rem_euclid(self.0 as i64) as Coeff
    }

    /// `(-1)^k` as a field element.
    #[inline]
    pub fn sign(self, k: usize) -> Coeff {
        if k % 2 == 0 {
            1
        } else {
            self.neg(1)
        }
    }

    #[inline]
    pub fn add(self, a: Coeff, b: Coeff) -> Coeff {
        let s = a as u64 + b as u64;
        (s % self.0 as u64) as Coeff
    }

    #[inline]
    pub fn sub(self, a: Coeff, b: Coeff) -> Coeff {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(self, a: Coeff) -> Coeff {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: Coeff, b: Coeff) -> Coeff {
        ((a as u64 * b as u64) % self.0 as u64) as Coeff
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: Coeff) -> Coeff {
        assert!(a != 0, "inverse of zero in F_{}", self.0);
        // Fermat: a^(p-2)
        let mut base = a as u64;
        let mut exp = self.0 as u64 - 2;
        let m = self.0 as u64;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as Coeff
    }

    #[inline]
    pub fn div(self, a: Coeff, b: Coeff) -> Coeff {
        self.mul(a, self.inv(b))
    }
}

impl Default for Prime {
    fn default() -> Self {
        Prime::TWO
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
