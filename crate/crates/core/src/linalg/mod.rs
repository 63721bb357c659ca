//! Exact dense linear algebra over a prime field 𝔽p.
//!
//! Vectors are plain `u16` slices of reduced residues. Matrices act on column
//! vectors; subspaces are stored as row bases in reduced row echelon form, so
//! two subspaces are equal exactly when their stored bases are equal.

mod gf2;
mod matrix;
mod subspace;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

pub use matrix::{FpMatrix, Rref};
pub use subspace::Subspace;
pub(crate) use subspace::Echelon;

/// Errors raised by the linear algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("characteristic {0} is outside the supported range 2 <= p < 65536")]
    PrimeOutOfRange(u32),
    #[error("entry {value} is not a residue modulo {p}")]
    NotReduced { value: u64, p: u32 },
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("characteristics differ: {left} vs {right}")]
    CharacteristicMismatch { left: u32, right: u32 },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
}

/// A prime characteristic `p < 2^16` with a precomputed inverse table.
#[derive(Clone)]
pub struct Prime {
    p: u16,
    inverses: Arc<[u16]>,
}

impl Prime {
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if !(2..=u16::MAX as u32).contains(&p) {
            return Err(LinalgError::PrimeOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        // inv(i) = -(p / i) * inv(p mod i)
        let mut inverses = vec![0u16; p as usize];
        inverses[1] = 1;
        for i in 2..p {
            let q = p / i;
            let r = (p % i) as usize;
            let v = (p - q) as u64 * inverses[r] as u64 % p as u64;
            inverses[i as usize] = v as u16;
        }
        Ok(Prime {
            p: p as u16,
            inverses: inverses.into(),
        })
    }

    #[inline]
    pub fn value(&self) -> u32 {
        self.p as u32
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        let s = a as u32 + b as u32;
        if s >= self.p as u32 {
            (s - self.p as u32) as u16
        } else {
            s as u16
        }
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        if a >= b {
            a - b
        } else {
            (a as u32 + self.p as u32 - b as u32) as u16
        }
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        (a as u32 * b as u32 % self.p as u32) as u16
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u16) -> Option<u16> {
        if a == 0 {
            None
        } else {
            Some(self.inverses[a as usize])
        }
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn reduce(&self, v: i64) -> u16 {
        v.rem_euclid(self.p as i64) as u16
    }

    /// Checks that `v` is already a residue.
    pub fn residue(&self, v: u64) -> Result<u16, LinalgError> {
        if v < self.p as u64 {
            Ok(v as u16)
        } else {
            Err(LinalgError::NotReduced {
                value: v,
                p: self.value(),
            })
        }
    }

    /// Checked `p^e`, `None` on `u64` overflow.
    pub fn checked_pow(&self, e: u32) -> Option<u64> {
        (self.p as u64).checked_pow(e)
    }

    pub(crate) fn same_as(&self, other: &Prime) -> Result<(), LinalgError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(LinalgError::CharacteristicMismatch {
                left: self.value(),
                right: other.value(),
            })
        }
    }
}

impl PartialEq for Prime {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for Prime {}

impl std::hash::Hash for Prime {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prime({})", self.p)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

/// Trial division.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A single element of 𝔽p carrying its characteristic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpScalar {
    value: u16,
    prime: Prime,
}

impl FpScalar {
    pub fn new(prime: &Prime, value: i64) -> Self {
        FpScalar {
            value: prime.reduce(value),
            prime: prime.clone(),
        }
    }

    pub fn value(&self) -> u16 {
        self.value
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    pub fn inv(&self) -> Option<FpScalar> {
        self.prime.inv(self.value).map(|value| FpScalar {
            value,
            prime: self.prime.clone(),
        })
    }

    fn with(&self, value: u16) -> FpScalar {
        FpScalar {
            value,
            prime: self.prime.clone(),
        }
    }
}

impl Add for &FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: &FpScalar) -> FpScalar {
        assert_eq!(self.prime, rhs.prime, "mixed characteristics");
        self.with(self.prime.add(self.value, rhs.value))
    }
}

impl Sub for &FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: &FpScalar) -> FpScalar {
        assert_eq!(self.prime, rhs.prime, "mixed characteristics");
        self.with(self.prime.sub(self.value, rhs.value))
    }
}

impl Mul for &FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: &FpScalar) -> FpScalar {
        assert_eq!(self.prime, rhs.prime, "mixed characteristics");
        self.with(self.prime.mul(self.value, rhs.value))
    }
}

impl Neg for &FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        self.with(self.prime.neg(self.value))
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
