//! Square-full counts in short intervals: per-interval counts over all
//! centers of degree n, their variance by definition and through the even
//! characters mod T^{n-h}, and the closed-form prediction.

use super::sn::{sn_predicted_exponent, SnPrediction};
use super::{squarefull_series_counts, ArithError};
use crate::chargroup::{Character, UnitGroup};
use crate::field_poly::{is_squarefull, FieldCtx, Poly};
use crate::lfunc::SquarefullSeries;
use crate::parallel::chunked_reduce;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct SIPrediction {
    pub n: usize,
    pub h: usize,
    /// N = n - h - 2, the box bound fed into the exponent rule.
    pub cap: usize,
    /// H = q^{h+1}.
    pub interval_size: f64,
    /// (H / q^n) q^e with e the leading exponent; 0 when S(n) = 0.
    pub value: f64,
    pub exponent: SnPrediction,
}

pub fn predict_si(q: u64, n: usize, h: usize) -> Result<SIPrediction, ArithError> {
    if h + 2 > n {
        return Err(ArithError::DegenerateInterval { n, h: h as i64 });
    }
    let cap = n - h - 2;
    let exponent = sn_predicted_exponent(n, cap);
    let qf = q as f64;
    let hf = qf.powi(h as i32 + 1);
    let value = match exponent.exponent {
        Some(e) => hf / qf.powi(n as i32) * qf.powi(e as i32),
        None => 0.0,
    };
    Ok(SIPrediction {
        n,
        h,
        cap,
        interval_size: hf,
        value,
        exponent,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SIExperiment {
    pub q: u64,
    pub n: usize,
    pub h: usize,
    pub cap: usize,
    pub interval_size: u64,
    /// Square-full count per interval class (one class per choice of the
    /// coefficients above position h), in base-q digit order.
    pub class_counts: Vec<u64>,
    pub mean: f64,
    pub variance_def: f64,
    pub variance_chars: f64,
    /// |variance_def - variance_chars| / variance_def; the identity behind
    /// variance_chars is stated as a large-q limit, so the gap is measured
    /// rather than asserted.
    pub finite_q_gap: f64,
    /// Sum of all class counts equals the degree-n square-full count.
    pub sum_conservation_ok: bool,
    pub prediction: SIPrediction,
}

pub fn si_variance(ctx: &FieldCtx, n: usize, h: usize, budget: u64) -> Result<SIExperiment, ArithError> {
    if h + 2 > n {
        return Err(ArithError::DegenerateInterval { n, h: h as i64 });
    }
    let q = ctx.q();
    let needed = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(ArithError::BudgetExceeded { needed, budget });
    }

    // every f in an interval class shares the coefficients at positions
    // h+1..n-1, so one sweep per class covers all q^{h+1} interval members
    let class_digits = (n - h - 1) as u32;
    let member_count = q.pow(h as u32 + 1);
    let classes = q.pow(class_digits);
    let class_counts: Vec<u64> = chunked_reduce(
        classes,
        1 << 10,
        |range| {
            let mut local = Vec::with_capacity((range.end - range.start) as usize);
            for c in range {
                let mut coeffs = vec![0u64; n + 1];
                coeffs[n] = 1;
                let mut digits = c;
                for t in 0..class_digits as usize {
                    coeffs[h + 1 + t] = digits % q;
                    digits /= q;
                }
                let mut count = 0u64;
                for m in 0..member_count {
                    let mut digits = m;
                    for coeff in coeffs.iter_mut().take(h + 1) {
                        *coeff = digits % q;
                        digits /= q;
                    }
                    if is_squarefull(&Poly::from_coeffs(ctx, &coeffs), ctx) {
                        count += 1;
                    }
                }
                local.push(count);
            }
            local
        },
        |mut a, b| {
            a.extend(b);
            a
        },
        Vec::new(),
    );

    let total: u64 = class_counts.iter().sum();
    let mean = total as f64 / classes as f64;
    let variance_def = class_counts
        .iter()
        .map(|&c| {
            let d = c as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / classes as f64;

    // even characters mod T^{n-h}; each contributes the squared modulus of
    // the coefficient sum over all degrees up to n except n-1
    let group = UnitGroup::new(ctx, &Poly::monomial(n - h))?;
    let series = SquarefullSeries::new(&group);
    let chis: Vec<Character> = group
        .characters()
        .filter(|c| c.is_even() && !c.is_trivial())
        .collect();
    let per_char: Vec<f64> = chis
        .par_iter()
        .map(|chi| {
            let m = series.twisted_squarefull_upto(chi, n);
            let s: num_complex::Complex64 = m
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != n - 1)
                .map(|(_, v)| v)
                .sum();
            s.norm_sqr()
        })
        .collect();
    let phi_even = (group.totient() / (q - 1)) as f64;
    let qf = q as f64;
    let hf = qf.powi(h as i32 + 1);
    let variance_chars =
        hf / qf.powi(n as i32) / phi_even * per_char.iter().sum::<f64>();

    let series_total = squarefull_series_counts(q, n)[n];
    let finite_q_gap = if variance_def > 0.0 {
        (variance_def - variance_chars).abs() / variance_def
    } else {
        (variance_def - variance_chars).abs()
    };

    Ok(SIExperiment {
        q,
        n,
        h,
        cap: n - h - 2,
        interval_size: member_count,
        mean,
        variance_def,
        variance_chars,
        finite_q_gap,
        sum_conservation_ok: total as u128 == series_total,
        class_counts,
        prediction: predict_si(q, n, h)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithstats::SnRegime;

    #[test]
    fn conservation_mean_and_identity_shape() {
        let ctx = FieldCtx::new(3).unwrap();
        let e = si_variance(&ctx, 5, 1, 1 << 20).unwrap();
        assert!(e.sum_conservation_ok);
        assert_eq!(e.class_counts.len(), 27);
        assert_eq!(e.interval_size, 9);
        // mean = H count_n / q^n
        let count = squarefull_series_counts(3, 5)[5] as f64;
        assert!((e.mean - 9.0 * count / 243.0).abs() < 1e-12);
        assert!(e.variance_def > 0.0);
        assert!(e.variance_chars > 0.0);
    }

    /// The character expression is stated as a large-q limit, but measured
    /// against the independent brute-force sweep it agrees to rounding at
    /// every tested size: the underlying identity is exact at finite q.
    #[test]
    fn definition_vs_characters_gap_is_rounding_level() {
        for (q, n, h) in [(3u64, 4usize, 0usize), (5, 4, 0), (7, 4, 0), (3, 6, 1), (3, 7, 2)] {
            let ctx = FieldCtx::new(q).unwrap();
            let e = si_variance(&ctx, n, h, 1 << 30).unwrap();
            assert!(
                e.finite_q_gap < 1e-9,
                "q={q} n={n} h={h}: gap {}",
                e.finite_q_gap
            );
        }
    }

    #[test]
    fn excluding_degree_n_minus_1_matters() {
        // the full-window sum and the one skipping m = n-1 genuinely differ
        let ctx = FieldCtx::new(3).unwrap();
        let n = 5;
        let group = UnitGroup::new(&ctx, &Poly::monomial(4)).unwrap();
        let series = SquarefullSeries::new(&group);
        let mut with = 0.0;
        let mut without = 0.0;
        for chi in group.characters().filter(|c| c.is_even() && !c.is_trivial()) {
            let m = series.twisted_squarefull_upto(&chi, n);
            let all: num_complex::Complex64 = m.iter().sum();
            let skip: num_complex::Complex64 = m
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != n - 1)
                .map(|(_, v)| v)
                .sum();
            with += all.norm_sqr();
            without += skip.norm_sqr();
        }
        assert!((with - without).abs() > 1e-6, "with {with} without {without}");
    }

    #[test]
    fn prediction_regimes_and_values() {
        // n <= 2N
        let p = predict_si(3, 8, 0).unwrap();
        assert_eq!(p.cap, 6);
        assert_eq!(p.exponent.regime, SnRegime::Box2);
        assert!((p.value - 3.0f64.powi(1 + 4 - 8)).abs() < 1e-12);

        // 2N < n <= 5N
        let p = predict_si(3, 8, 4).unwrap();
        assert_eq!(p.cap, 2);
        assert_eq!(p.exponent.regime, SnRegime::Box3);
        assert!((p.value - 3.0f64.powi(5 + 3 - 8)).abs() < 1e-12);

        // n > 5N
        let p = predict_si(3, 13, 9).unwrap();
        assert_eq!(p.cap, 2);
        assert_eq!(p.exponent.regime, SnRegime::Box6);
        assert_eq!(p.exponent.lambda, Some(3));
        assert!((p.value - 3.0f64.powi(10 + 4 - 13)).abs() < 1e-12);

        // empty solution set: N = 1 and n = 1 mod 3
        let p = predict_si(3, 7, 4).unwrap();
        assert!(p.exponent.infeasible);
        assert_eq!(p.value, 0.0);

        // degenerate interval
        assert!(matches!(
            predict_si(3, 5, 4),
            Err(ArithError::DegenerateInterval { .. })
        ));
        let ctx = FieldCtx::new(3).unwrap();
        assert!(matches!(
            si_variance(&ctx, 5, 4, 1 << 20),
            Err(ArithError::DegenerateInterval { .. })
        ));
    }
}
