//! Exact arithmetic in F_q[T] for odd prime q.
//!
//! Polynomials are dense coefficient vectors over F_q, lowest degree first,
//! with no trailing zeros; the zero polynomial is the empty vector, so the
//! degree of zero is `None` rather than a -inf sentinel.

mod enumerate;
mod factor;
mod poly;
mod text;

pub use enumerate::{monic_by_index, monic_count, MonicIter};
pub use factor::{
    factor, is_irreducible, is_squarefull, squarefree_decomposition, Factorization,
    IrreducibleSieve,
};
pub use poly::Poly;
pub use text::{format_human, format_numeric, parse_poly};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldPolyError {
    #[error("q must be an odd prime (got {0})")]
    InvalidModulus(u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("coefficient {0} is not a residue mod {1}")]
    CoefficientOutOfRange(u64, u64),
    #[error("cannot parse polynomial from {0:?}: {1}")]
    Parse(String, String),
    #[error("enumeration space q^{0} exceeds budget {1}")]
    BudgetExceeded(usize, u64),
}

/// The coefficient field F_q.  q is an odd prime; elements are residues in
/// `0..q` stored as u64, so products fit in u64 for q < 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldCtx {
    q: u64,
}

impl FieldCtx {
    pub fn new(q: u64) -> Result<Self, FieldPolyError> {
        if q < 3 || q % 2 == 0 || !is_prime_u64(q) || q >= (1 << 31) {
            return Err(FieldPolyError::InvalidModulus(q));
        }
        Ok(FieldCtx { q })
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; a must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.q != 0);
        self.pow(a, self.q - 2)
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
