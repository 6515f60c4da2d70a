//! Arithmetic statistics of square-full polynomials over F_q[T].
//!
//! A monic polynomial f is square-full when every irreducible factor P of f
//! satisfies P^2 | f.  This crate provides the machinery to study how
//! square-full polynomials distribute in arithmetic progressions and in short
//! intervals of M_n (the monic polynomials of degree n):
//!
//! * [`field_poly`]: exact arithmetic, enumeration and factorization in F_q[T];
//! * [`chargroup`]: the unit group (F_q[T]/Q)^x and its Dirichlet characters;
//! * [`lfunc`]: L-polynomials of characters, their inverse roots, and twisted
//!   square-full sums;
//! * [`arithstats`]: counting and variance experiments with their predicted
//!   asymptotics;
//! * [`rmt`]: Haar-unitary sampling and Monte Carlo checks of the matrix
//!   integrals behind the predictions.
//!
//! Everything is deterministic: enumeration orders are fixed, random number
//! streams are seeded and indexed per sample, and parallel reductions merge in
//! a fixed order, so a given configuration reproduces byte-identical results
//! at any worker count.

pub mod arithstats;
pub mod chargroup;
pub mod field_poly;
pub mod lfunc;
pub mod parallel;
pub mod rmt;
pub mod symfunc;

pub use field_poly::{FieldCtx, Poly};
