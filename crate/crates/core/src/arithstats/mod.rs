//! Counting square-full polynomials and measuring the variance of their
//! distribution in arithmetic progressions and short intervals, against the
//! closed-form predictions.

mod ap;
mod si;
mod sn;

pub use ap::{ap_variance, cubic_characters, predict_ap, quadratic_character, APExperiment, APPrediction, APRegime};
pub use si::{predict_si, si_variance, SIExperiment, SIPrediction};
pub use sn::{sn_bruteforce, sn_predicted_exponent, SnClosedForm, SnPrediction, SnRegime};

use crate::field_poly::{is_squarefull, monic_by_index, FieldCtx};
use crate::parallel::{chunked_reduce, SWEEP_CHUNK};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArithError {
    #[error("modulus must be prime for progression experiments")]
    NonPrimeModulus,
    #[error("enumeration of {needed} polynomials exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("interval parameters need 0 <= h <= n-2 (got n = {n}, h = {h})")]
    DegenerateInterval { n: usize, h: i64 },
    #[error(transparent)]
    CharGroup(#[from] crate::chargroup::CharGroupError),
}

/// The number of monic square-full polynomials of degree n: the exact
/// series coefficient, the exhaustive count when affordable, and the mean
/// against its large-q approximation.
#[derive(Debug, Clone, Serialize)]
pub struct SquarefullCount {
    pub q: u64,
    pub n: usize,
    /// Coefficient of u^n in Z(u^2) Z(u^3) / Z(u^6), exact.
    pub series_count: u128,
    /// Exhaustive count; None when q^n exceeds the budget (flagged, the
    /// series value stands alone).
    pub brute_count: Option<u128>,
    /// series_count / q^n.
    pub mean: f64,
    /// mean / q^{floor(n/2) - n}: approaches 1 for large q at fixed n.
    pub mean_vs_asymptotic: f64,
}

/// Coefficients of Z(u^2) Z(u^3) / Z(u^6) = (1 - q u^6) / ((1 - q u^2)(1 - q u^3))
/// by the linear recurrence the denominator imposes:
/// c[m] = q c[m-2] + q c[m-3] - q^2 c[m-5] + [m=0] - q [m=6].
pub fn squarefull_series_counts(q: u64, n: usize) -> Vec<u128> {
    let q = q as u128;
    let mut c = vec![0u128; n + 1];
    for m in 0..=n {
        let mut v: i128 = 0;
        if m == 0 {
            v += 1;
        }
        if m == 6 {
            v -= q as i128;
        }
        if m >= 2 {
            v += (q * c[m - 2]) as i128;
        }
        if m >= 3 {
            v += (q * c[m - 3]) as i128;
        }
        if m >= 5 {
            v -= (q * q * c[m - 5]) as i128;
        }
        assert!(v >= 0, "count coefficients are nonnegative");
        c[m] = v as u128;
    }
    c
}

pub fn squarefull_count(ctx: &FieldCtx, n: usize, budget: u64) -> SquarefullCount {
    let q = ctx.q();
    let series_count = *squarefull_series_counts(q, n).last().unwrap();

    let needed = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let brute_count = if needed <= budget as u128 {
        let total = needed as u64;
        let count = chunked_reduce(
            total,
            SWEEP_CHUNK,
            |range| {
                let mut c = 0u128;
                for k in range {
                    if is_squarefull(&monic_by_index(ctx, n, k), ctx) {
                        c += 1;
                    }
                }
                c
            },
            |a, b| a + b,
            0u128,
        );
        Some(count)
    } else {
        None
    };

    let qn = (q as f64).powi(n as i32);
    let mean = series_count as f64 / qn;
    let asym = (q as f64).powi((n / 2) as i32 - n as i32);
    SquarefullCount {
        q,
        n,
        series_count,
        brute_count,
        mean,
        mean_vs_asymptotic: mean / asym,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: multiply the three factors as integer series and compare.
    fn series_by_multiplication(q: u128, n: usize) -> Vec<u128> {
        let mut a = vec![0u128; n + 1]; // Z(u^2)
        let mut b = vec![0u128; n + 1]; // Z(u^3)
        for m in 0..=n {
            if m % 2 == 0 {
                a[m] = q.pow((m / 2) as u32);
            }
            if m % 3 == 0 {
                b[m] = q.pow((m / 3) as u32);
            }
        }
        let mut prod = vec![0u128; n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                prod[i + j] += a[i] * b[j];
            }
        }
        // divide by Z(u^6): multiply by (1 - q u^6)
        let mut out = prod.clone();
        for m in 6..=n {
            out[m] -= q * prod[m - 6];
        }
        out
    }

    #[test]
    fn recurrence_matches_series_multiplication() {
        for q in [3u64, 5, 7, 11] {
            let rec = squarefull_series_counts(q, 24);
            let mul = series_by_multiplication(q as u128, 24);
            assert_eq!(rec, mul, "q = {q}");
        }
    }

    #[test]
    fn low_degree_counts_mod_3() {
        let c = squarefull_series_counts(3, 8);
        // degrees 0..8: 1, 0, q, q, q^2, q^2, q^3+q^2-q, q^3, q^4+q^3-q^2
        assert_eq!(c[0], 1);
        assert_eq!(c[1], 0);
        assert_eq!(c[2], 3);
        assert_eq!(c[3], 3);
        assert_eq!(c[4], 9);
        assert_eq!(c[5], 9);
        assert_eq!(c[6], 33);
        assert_eq!(c[7], 27);
    }

    #[test]
    fn brute_force_agrees_with_series() {
        let ctx = FieldCtx::new(3).unwrap();
        for n in 0..=9 {
            let r = squarefull_count(&ctx, n, 1 << 20);
            assert_eq!(r.brute_count, Some(r.series_count), "n = {n}");
        }
        let ctx5 = FieldCtx::new(5).unwrap();
        for n in [2usize, 4, 7] {
            let r = squarefull_count(&ctx5, n, 1 << 20);
            assert_eq!(r.brute_count, Some(r.series_count), "n = {n} over F_5");
        }
    }

    #[test]
    fn budget_flag_leaves_series_value() {
        let ctx = FieldCtx::new(3).unwrap();
        let r = squarefull_count(&ctx, 30, 1000);
        assert!(r.brute_count.is_none());
        assert!(r.series_count > 0);
    }

    #[test]
    fn mean_approaches_asymptotic_in_q() {
        // <alpha_2>_n / q^{floor(n/2)-n} -> 1 as q grows, n fixed
        let n = 7;
        let mut prev_gap = f64::MAX;
        for q in [3u64, 5, 7, 11, 13, 17] {
            let ctx = FieldCtx::new(q).unwrap();
            let r = squarefull_count(&ctx, n, 0); // series only
            let gap = (r.mean_vs_asymptotic - 1.0).abs();
            assert!(gap < prev_gap || gap < 1e-9, "q = {q}: {gap} vs {prev_gap}");
            prev_gap = gap;
        }
        assert!(prev_gap < 0.1);
    }
}
