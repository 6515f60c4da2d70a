//! Square-full counts in arithmetic progressions mod a prime polynomial Q:
//! the per-residue sums, their variance both by definition and through the
//! character decomposition, and the closed-form prediction per regime.

use super::{squarefull_series_counts, ArithError};
use crate::chargroup::{Character, UnitGroup};
use crate::field_poly::{format_human, is_squarefull, monic_by_index};
use crate::lfunc::{l_polynomial, SquarefullSeries};
use crate::parallel::{chunked_reduce, SWEEP_CHUNK};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum APRegime {
    /// n < deg Q - 1: residue classes hold at most one polynomial each.
    SmallN,
    /// N <= n <= 2N: the bulk character sum dominates.
    Main,
    /// n > 2N, n even: the quadratic character dominates.
    LargeEven,
    /// n > 2N, n odd: the quadratic character's root sum sets the size.
    LargeOdd,
}

#[derive(Debug, Clone, Serialize)]
pub struct APPrediction {
    pub regime: APRegime,
    pub value: f64,
    /// |sum of inverse roots of the quadratic L-function| (odd regime).
    pub quad_root_sum: Option<f64>,
    /// Rigorous cap N^2 q^{n-2} / Phi^2 on the odd-regime value.
    pub odd_upper_bound: Option<f64>,
    /// n below the first stated regime; the small-n value is used.
    pub outside_theorem: bool,
}

/// The unique order-2 character, when the group has even order components.
pub fn quadratic_character(group: &UnitGroup) -> Option<Character> {
    let exps: Vec<u64> = group.orders().iter().map(|&d| if d % 2 == 0 { d / 2 } else { 0 }).collect();
    if exps.iter().all(|&e| e == 0) {
        return None;
    }
    Some(group.character_from_exponents(exps).expect("valid exponents"))
}

/// An order-3 character and its conjugate, when 3 divides a component order.
pub fn cubic_characters(group: &UnitGroup) -> Vec<Character> {
    let orders = group.orders();
    match orders.iter().position(|&d| d % 3 == 0) {
        Some(i) => [1u64, 2]
            .iter()
            .map(|&t| {
                let mut exps = vec![0u64; orders.len()];
                exps[i] = t * orders[i] / 3;
                group.character_from_exponents(exps).expect("valid exponents")
            })
            .collect(),
        None => Vec::new(),
    }
}

pub fn predict_ap(group: &UnitGroup, n: usize) -> Result<APPrediction, ArithError> {
    if !group.is_prime_modulus() {
        return Err(ArithError::NonPrimeModulus);
    }
    let q = group.ctx().q();
    let qf = q as f64;
    let phi = group.totient() as f64;
    let cap = group.modulus().degree().unwrap() - 1;

    if n < cap {
        // every residue class holds 0 or 1 of the counted polynomials, so
        // the variance is the count over Phi up to a second-order term
        let count = squarefull_series_counts(q, n)[n] as f64;
        return Ok(APPrediction {
            regime: APRegime::SmallN,
            value: count / phi,
            quad_root_sum: None,
            odd_upper_bound: None,
            outside_theorem: true,
        });
    }
    if n <= 2 * cap {
        return Ok(APPrediction {
            regime: APRegime::Main,
            value: qf.powi((n / 2) as i32) / phi,
            quad_root_sum: None,
            odd_upper_bound: None,
            outside_theorem: false,
        });
    }
    if n % 2 == 0 {
        return Ok(APPrediction {
            regime: APRegime::LargeEven,
            value: qf.powi(n as i32) / (phi * phi),
            quad_root_sum: None,
            odd_upper_bound: None,
            outside_theorem: false,
        });
    }
    // odd: q^{n-3}/Phi^2 times |sum of inverse roots|^2, where the root sum
    // is read off the degree-1 coefficient of the quadratic L-polynomial
    let chi2 = quadratic_character(group).expect("even group order");
    let lp = l_polynomial(group, &chi2).expect("chi2 is nontrivial");
    let s = lp.coeffs.get(1).map_or(0.0, |c| {
        debug_assert!(c.im.abs() < 1e-9);
        -c.re
    });
    Ok(APPrediction {
        regime: APRegime::LargeOdd,
        value: qf.powi(n as i32 - 3) * s * s / (phi * phi),
        quad_root_sum: Some(s.abs()),
        odd_upper_bound: Some((cap * cap) as f64 * qf.powi(n as i32 - 2) / (phi * phi)),
        outside_theorem: false,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct APExperiment {
    pub q: u64,
    pub modulus: String,
    pub n: usize,
    /// Square-full counts per invertible residue, in canonical unit order.
    pub class_sums: Vec<u64>,
    pub mean: f64,
    pub variance_def: f64,
    pub variance_chars: f64,
    /// Share of variance_chars from the order-2 character.
    pub quadratic_contrib: f64,
    /// Share from the order-3 characters (lambda3 of them).
    pub cubic_contrib: f64,
    pub lambda3: u8,
    pub coprime_squarefull: u64,
    pub shared_factor_squarefull: u64,
    /// Coefficient of u^n in the generating function; checks the partition.
    pub total_squarefull: u128,
    pub partition_ok: bool,
    pub prediction: APPrediction,
}

pub fn ap_variance(group: &UnitGroup, n: usize, budget: u64) -> Result<APExperiment, ArithError> {
    if !group.is_prime_modulus() {
        return Err(ArithError::NonPrimeModulus);
    }
    let ctx = group.ctx();
    let q = ctx.q();
    let needed = (q as u128).pow(n as u32);
    if needed > budget as u128 {
        return Err(ArithError::BudgetExceeded { needed, budget });
    }
    let modulus = group.modulus();
    let units = group.units();
    let index_of: HashMap<_, _> = units.iter().cloned().zip(0usize..).collect();
    let phi = group.totient() as f64;

    // one pass over all monic f of degree n, binning square-full ones by
    // residue class
    let total = needed as u64;
    let (class_sums, shared) = chunked_reduce(
        total,
        SWEEP_CHUNK,
        |range| {
            let mut sums = vec![0u64; units.len()];
            let mut shared = 0u64;
            for k in range {
                let f = monic_by_index(ctx, n, k);
                if is_squarefull(&f, ctx) {
                    let r = f.rem(modulus, ctx).unwrap();
                    match index_of.get(&r) {
                        Some(&i) => sums[i] += 1,
                        None => shared += 1,
                    }
                }
            }
            (sums, shared)
        },
        |(mut a, sa), (b, sb)| {
            for (x, y) in a.iter_mut().zip(&b) {
                *x += y;
            }
            (a, sa + sb)
        },
        (vec![0u64; units.len()], 0u64),
    );

    let coprime: u64 = class_sums.iter().sum();
    let mean = coprime as f64 / phi;
    let variance_def = class_sums
        .iter()
        .map(|&s| {
            let d = s as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / phi;

    // the same variance through the character decomposition
    let series = SquarefullSeries::new(group);
    let chis: Vec<Character> = group.characters().filter(|c| !c.is_trivial()).collect();
    let per_char: Vec<(u64, f64)> = chis
        .par_iter()
        .map(|chi| (chi.order(), series.twisted_squarefull(chi, n).norm_sqr()))
        .collect();
    let phi2 = phi * phi;
    let mut variance_chars = 0.0;
    let mut quadratic_contrib = 0.0;
    let mut cubic_contrib = 0.0;
    for &(order, m2) in &per_char {
        variance_chars += m2 / phi2;
        match order {
            2 => quadratic_contrib += m2 / phi2,
            3 => cubic_contrib += m2 / phi2,
            _ => {}
        }
    }

    let total_squarefull = super::squarefull_series_counts(q, n)[n];
    let lambda3 = if pow_mod3(q, modulus.degree().unwrap() as u32) == 1 { 2 } else { 0 };

    Ok(APExperiment {
        q,
        modulus: format_human(modulus),
        n,
        partition_ok: coprime as u128 + shared as u128 == total_squarefull,
        class_sums,
        mean,
        variance_def,
        variance_chars,
        quadratic_contrib,
        cubic_contrib,
        lambda3,
        coprime_squarefull: coprime,
        shared_factor_squarefull: shared,
        total_squarefull,
        prediction: predict_ap(group, n)?,
    })
}

fn pow_mod3(q: u64, d: u32) -> u64 {
    let mut acc = 1u64;
    for _ in 0..d {
        acc = acc * (q % 3) % 3;
    }
    acc
}
