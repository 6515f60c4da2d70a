use super::{FieldCtx, FieldPolyError};
use std::cmp::Ordering;

/// Dense polynomial over F_q, coefficients lowest degree first, canonical
/// (no trailing zeros; zero polynomial = empty vector).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(ctx: &FieldCtx, c: u64) -> Self {
        Poly::from_raw(vec![c % ctx.q()])
    }

    /// The monomial T^deg.
    pub fn monomial(deg: usize) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = 1;
        Poly { coeffs }
    }

    pub fn x() -> Self {
        Poly::monomial(1)
    }

    /// Takes ownership of a raw coefficient vector and trims trailing zeros.
    /// Coefficients must already be reduced mod q.
    pub(crate) fn from_raw(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// In-place access for the enumeration odometer.  Callers must keep the
    /// vector canonical (reduced coefficients, no trailing zero).
    pub(crate) fn coeffs_mut(&mut self) -> &mut [u64] {
        &mut self.coeffs
    }

    /// Builds a polynomial from arbitrary u64 coefficients, reducing mod q.
    pub fn from_coeffs(ctx: &FieldCtx, coeffs: &[u64]) -> Self {
        Poly::from_raw(coeffs.iter().map(|&c| c % ctx.q()).collect())
    }

    /// Builds from coefficients that must already be residues; errors if not.
    pub fn checked_from_coeffs(ctx: &FieldCtx, coeffs: &[u64]) -> Result<Self, FieldPolyError> {
        for &c in coeffs {
            if c >= ctx.q() {
                return Err(FieldPolyError::CoefficientOutOfRange(c, ctx.q()));
            }
        }
        Ok(Poly::from_raw(coeffs.to_vec()))
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// None for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with zero mapped to 0; callers must handle zero separately
    /// where the distinction matters.
    #[inline]
    pub fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    #[inline]
    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ctx.add(self.coeff(i), other.coeff(i)));
        }
        Poly::from_raw(out)
    }

    pub fn sub(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ctx.sub(self.coeff(i), other.coeff(i)));
        }
        Poly::from_raw(out)
    }

    pub fn mul(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let q = ctx.q();
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % q;
            }
        }
        Poly::from_raw(out)
    }

    pub fn scale(&self, c: u64, ctx: &FieldCtx) -> Poly {
        let c = c % ctx.q();
        Poly::from_raw(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    /// Quotient and remainder; errors when dividing by zero.
    pub fn divrem(&self, divisor: &Poly, ctx: &FieldCtx) -> Result<(Poly, Poly), FieldPolyError> {
        if divisor.is_zero() {
            return Err(FieldPolyError::DivisionByZero);
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() < divisor.coeffs.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = ctx.inv(divisor.leading_coeff());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let f = ctx.mul(c, lead_inv);
            quot[i - dd] = f;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = ctx.sub(rem[i - dd + j], ctx.mul(f, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_raw(quot), Poly::from_raw(rem)))
    }

    pub fn rem(&self, divisor: &Poly, ctx: &FieldCtx) -> Result<Poly, FieldPolyError> {
        Ok(self.divrem(divisor, ctx)?.1)
    }

    /// Monic gcd; gcd(f, 0) is the monic multiple of f.
    pub fn gcd(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, ctx).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic(ctx)
    }

    pub fn make_monic(&self, ctx: &FieldCtx) -> Poly {
        let lc = self.leading_coeff();
        if lc == 0 || lc == 1 {
            return self.clone();
        }
        self.scale(ctx.inv(lc), ctx)
    }

    /// Formal derivative; in characteristic p this can vanish for nonconstant
    /// inputs (exactly when f is a p-th power).
    pub fn derivative(&self, ctx: &FieldCtx) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let q = ctx.q();
        let out = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 1) % q * c % q)
            .collect();
        Poly::from_raw(out)
    }

    pub fn eval(&self, x: u64, ctx: &FieldCtx) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = ctx.add(ctx.mul(acc, x), c);
        }
        acc
    }

    pub fn pow(&self, mut exp: u64, ctx: &FieldCtx) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base, ctx);
            }
        }
        acc
    }

    /// Modular power: self^exp mod modulus.
    pub fn pow_mod(&self, mut exp: u64, modulus: &Poly, ctx: &FieldCtx) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.rem(modulus, ctx).expect("nonzero modulus");
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base, ctx).rem(modulus, ctx).unwrap();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base, ctx).rem(modulus, ctx).unwrap();
            }
        }
        acc
    }

    /// Shift by T^k (multiply by the monomial).
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0u64; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }
}

/// Order: by degree, then lexicographically on the coefficient vector read
/// from the constant term up.  This matches the enumeration order of
/// `monic_by_index`.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&super::text::format_human(self))
    }
}
