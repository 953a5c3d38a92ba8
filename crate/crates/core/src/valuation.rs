//! Primes and p-adic valuations of integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub const TWO: Prime = Prime(2);
    pub const THREE: Prime = Prime(3);

    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation; zero has valuation `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => v.fmt(f),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn valuation(m: &BigInt, p: Prime) -> Valuation {
    if m.is_zero() {
        return Valuation::Infinite;
    }
    if let Some(small) = m.to_i128() {
        return Valuation::Finite(valuation_u128(small.unsigned_abs(), p));
    }
    let pb = BigInt::from(p.get());
    let mut v = 0;
    let mut rest = m.clone();
    loop {
        let (q, r) = rest.div_rem(&pb);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        rest = q;
        v += 1;
    }
}

/// Valuation of a nonzero machine integer. Returns 0 for `m == 0` by convention of callers
/// that never pass zero; use [`valuation`] when zero is possible.
pub fn valuation_u128(mut m: u128, p: Prime) -> u32 {
    debug_assert!(m != 0);
    let p = p.get() as u128;
    let mut v = 0;
    while m != 0 && m.is_multiple_of(p) {
        m /= p;
        v += 1;
    }
    v
}

pub fn valuation_u64(m: u64, p: Prime) -> u32 {
    valuation_u128(m as u128, p)
}

/// Legendre's formula for ν_p(n!).
pub fn factorial_valuation(n: u64, p: Prime) -> u32 {
    let p = p.get() as u64;
    let mut v = 0;
    let mut q = n / p;
    while q > 0 {
        v += q as u32;
        q /= p;
    }
    v
}

/// ν_p of the multinomial coefficient (Σ k_i)! / Π k_i!.
pub fn multinomial_valuation(parts: &[u64], p: Prime) -> u32 {
    let total: u64 = parts.iter().sum();
    factorial_valuation(total, p)
        - parts
            .iter()
            .map(|&k| factorial_valuation(k, p))
            .sum::<u32>()
}

pub fn binomial_valuation(n: u64, k: u64, p: Prime) -> u32 {
    assert!(k <= n);
    multinomial_valuation(&[k, n - k], p)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}
