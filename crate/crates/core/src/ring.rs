//! Coefficient arithmetic over `Z/pZ` for word-sized primes.
//!
//! Elements are plain `u64` canonical residues; all arithmetic goes through a
//! [`Ring`] instance so that an instrumented wrapper ([`CountedField`]) can
//! observe every multiplication and addition.

use std::cell::Cell;
use std::fmt;

use crate::error::{Error, Result};

/// Arithmetic on canonical residues. Implementors must keep results in
/// `[0, modulus)`.
pub trait Ring {
    fn modulus(&self) -> u64;
    fn add(&self, a: u64, b: u64) -> u64;
    fn sub(&self, a: u64, b: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;

    fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    /// `acc + a*b`, counted as one multiplication and one addition.
    #[inline]
    fn mul_add(&self, acc: u64, a: u64, b: u64) -> u64 {
        self.add(acc, self.mul(a, b))
    }

    fn reduce(&self, v: u64) -> u64 {
        v % self.modulus()
    }
}

/// The prime field `Z/pZ` with `2 <= p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1u64 << 63).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn counted(self) -> CountedField {
        CountedField::new(self)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl Ring for PrimeField {
    #[inline]
    fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        // p < 2^63 so a + b cannot overflow
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
}

/// Snapshot of ring operation counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub mul: u64,
    pub add: u64,
}

impl std::ops::Sub for OpCounts {
    type Output = OpCounts;
    fn sub(self, rhs: OpCounts) -> OpCounts {
        OpCounts {
            mul: self.mul - rhs.mul,
            add: self.add - rhs.add,
        }
    }
}

/// A [`PrimeField`] that counts multiplications and additions/subtractions.
///
/// Counters live in `Cell`s, so a counted field is single-owner and not `Sync`.
#[derive(Debug)]
pub struct CountedField {
    field: PrimeField,
    muls: Cell<u64>,
    adds: Cell<u64>,
}

impl CountedField {
    pub fn new(field: PrimeField) -> Self {
        CountedField {
            field,
            muls: Cell::new(0),
            adds: Cell::new(0),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn counts(&self) -> OpCounts {
        OpCounts {
            mul: self.muls.get(),
            add: self.adds.get(),
        }
    }

    pub fn mul_count(&self) -> u64 {
        self.muls.get()
    }

    pub fn add_count(&self) -> u64 {
        self.adds.get()
    }

    pub fn reset(&self) {
        self.muls.set(0);
        self.adds.set(0);
    }
}

impl Ring for CountedField {
    #[inline]
    fn modulus(&self) -> u64 {
        self.field.p
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        self.adds.set(self.adds.get() + 1);
        self.field.add(a, b)
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        self.adds.set(self.adds.get() + 1);
        self.field.sub(a, b)
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.muls.set(self.muls.get() + 1);
        self.field.mul(a, b)
    }

    // negation is not a ring operation in the cost model
    fn neg(&self, a: u64) -> u64 {
        self.field.neg(a)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
