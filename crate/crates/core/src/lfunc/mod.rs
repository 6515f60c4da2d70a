//! Dirichlet L-polynomials over F_q[T] and the twisted square-full sums.
//!
//! For nontrivial chi mod Q, L(u, chi) = sum_f chi(f) u^{deg f} is a
//! polynomial of degree at most deg Q - 1; its coefficients are computed by
//! direct summation over monic polynomials.  The trivial character gives the
//! rational function Z(u) prod_{P|Q} (1 - u^{deg P}) instead.  Both kinds
//! feed a truncated-series engine that expands
//! L(u^2, chi^2) L(u^3, chi^3) / L(u^6, chi^6),
//! whose u^n coefficient is the degree-n sum of chi over square-full monic
//! polynomials.  That identity is exact for every character, so the series
//! route and exhaustive enumeration agree to rounding.

mod roots;
mod series;
mod sprime;

pub use roots::{inverse_roots, UnitarizedFrobenius};
pub(crate) use roots::polynomial_roots;
pub use sprime::s_prime;

use crate::chargroup::{Character, UnitGroup};
use crate::field_poly::{is_squarefull, MonicIter};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LfuncError {
    #[error("the trivial character has a rational L-series, not a polynomial")]
    TrivialCharacter,
    #[error("L-polynomial has no nonconstant part to factor")]
    DegreeTooSmall,
    #[error("inverse root of modulus {modulus} outside the admissible set: {detail}")]
    AnomalousRoot { modulus: f64, detail: String },
    #[error("root iteration left residual {residual}")]
    RootFindingFailed { residual: f64 },
    #[error("enumeration of {needed} polynomials exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
}

/// The zeta function of the rational function field: Z(u) = 1/(1 - qu),
/// zeta_q(s) = Z(q^{-s}).
#[derive(Debug, Clone, Copy)]
pub struct ZetaFq {
    q: u64,
}

impl ZetaFq {
    pub fn new(q: u64) -> Self {
        ZetaFq { q }
    }

    /// Coefficient of u^m in Z(u): the number of monic polynomials of
    /// degree m.
    pub fn series_coeff(&self, m: u32) -> f64 {
        (self.q as f64).powi(m as i32)
    }

    pub fn z_at(&self, u: f64) -> f64 {
        1.0 / (1.0 - self.q as f64 * u)
    }

    pub fn zeta(&self, s: f64) -> f64 {
        self.z_at((self.q as f64).powf(-s))
    }
}

/// L(u, chi) for nontrivial chi, in coefficient form.
#[derive(Debug, Clone)]
pub struct LPolynomial {
    /// coeffs[m] = sum of chi over monic polynomials of degree m,
    /// for m < deg Q (beyond that the sums vanish).
    pub coeffs: Vec<Complex64>,
    pub q: u64,
    pub modulus_degree: usize,
    /// Even nontrivial characters vanish at u = 1.
    pub trivial_zero_at_one: bool,
    /// |coefficient at deg Q|, computed for validation; cancellation is
    /// exact in theory so this is pure rounding noise.
    pub tail_deviation: f64,
}

impl LPolynomial {
    /// L(1, chi) = sum of all coefficients.
    pub fn at_one(&self) -> Complex64 {
        self.coeffs.iter().sum()
    }

    /// Degree after trimming numerically-zero leading coefficients
    /// (imprimitive characters fall short of deg Q - 1).
    pub fn degree(&self) -> usize {
        let max_mag = self.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let mut d = self.coeffs.len() - 1;
        while d > 0 && self.coeffs[d].norm() <= 1e-9 * max_mag {
            d -= 1;
        }
        d
    }
}

/// Exact coefficients of L(u, chi) by summation over monic polynomials of
/// each degree below deg Q, plus the vanishing check at deg Q.
pub fn l_polynomial(group: &UnitGroup, chi: &Character) -> Result<LPolynomial, LfuncError> {
    if chi.is_trivial() {
        return Err(LfuncError::TrivialCharacter);
    }
    let engine = SquarefullSeries::new(group);
    Ok(engine.l_polynomial(chi))
}

/// Descriptor of L(u, chi_0) = Z(u) prod_{P | Q} (1 - u^{deg P}): the
/// polynomial numerator together with q for the geometric pole.
#[derive(Debug, Clone)]
pub struct TrivialLSeries {
    pub q: u64,
    /// prod over distinct primes P | Q of (1 - u^{deg P})
    pub numerator: Vec<f64>,
}

impl TrivialLSeries {
    /// Coefficients of the full series Z(u) * numerator up to the given
    /// length: c[m] = sum_j num[j] q^{m-j}.
    pub fn series(&self, len: usize) -> Vec<Complex64> {
        let q = self.q as f64;
        (0..len)
            .map(|m| {
                let acc: f64 = self
                    .numerator
                    .iter()
                    .enumerate()
                    .take(m + 1)
                    .map(|(j, &nj)| nj * q.powi((m - j) as i32))
                    .sum();
                Complex64::new(acc, 0.0)
            })
            .collect()
    }
}

pub fn l_trivial(group: &UnitGroup) -> TrivialLSeries {
    let mut numerator = vec![1.0f64];
    for (prime, _) in group.prime_factors() {
        let d = prime.degree().unwrap();
        let mut next = vec![0.0; numerator.len() + d];
        for (i, &c) in numerator.iter().enumerate() {
            next[i] += c;
            next[i + d] -= c;
        }
        numerator = next;
    }
    TrivialLSeries {
        q: group.ctx().q(),
        numerator,
    }
}

enum LSeriesKind {
    Poly(LPolynomial),
    Trivial(TrivialLSeries),
}

impl LSeriesKind {
    fn coeffs_upto(&self, len: usize) -> Vec<Complex64> {
        match self {
            LSeriesKind::Poly(lp) => {
                let mut out = lp.coeffs.clone();
                out.resize(len, Complex64::new(0.0, 0.0));
                out.truncate(len);
                out
            }
            LSeriesKind::Trivial(t) => t.series(len),
        }
    }
}

/// Shared engine for the square-full generating function: caches discrete
/// logs of all low-degree monic polynomials and the L-series of every
/// character power it encounters (keyed by exponent vector).
pub struct SquarefullSeries<'g> {
    group: &'g UnitGroup,
    /// For each degree m < deg Q (plus deg Q for the validation row):
    /// discrete logs of the units among monic degree-m polynomials.
    unit_dlogs: Vec<Vec<Arc<Vec<u64>>>>,
    memo: RwLock<HashMap<Vec<u64>, Arc<LSeriesKind>>>,
}

impl<'g> SquarefullSeries<'g> {
    pub fn new(group: &'g UnitGroup) -> Self {
        let ctx = group.ctx();
        let deg_q = group.modulus().degree().unwrap();
        let mut unit_dlogs = Vec::with_capacity(deg_q + 1);
        for m in 0..=deg_q {
            let mut row = Vec::new();
            MonicIter::new(ctx, m).visit(|f| {
                if let Some(x) = group.dlog(f) {
                    row.push(x);
                }
            });
            unit_dlogs.push(row);
        }
        SquarefullSeries {
            group,
            unit_dlogs,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &UnitGroup {
        self.group
    }

    /// L(u, chi) for nontrivial chi, from the precomputed dlog table.
    pub fn l_polynomial(&self, chi: &Character) -> LPolynomial {
        assert!(!chi.is_trivial(), "trivial character: use l_trivial");
        let deg_q = self.group.modulus().degree().unwrap();
        let mut coeffs = Vec::with_capacity(deg_q + 1);
        for row in &self.unit_dlogs {
            let mut s = Complex64::new(0.0, 0.0);
            for x in row {
                s += self.group.root(chi.root_index(self.group, x));
            }
            coeffs.push(s);
        }
        let tail = coeffs.pop().unwrap();
        LPolynomial {
            coeffs,
            q: self.group.ctx().q(),
            modulus_degree: deg_q,
            trivial_zero_at_one: chi.is_even(),
            tail_deviation: tail.norm(),
        }
    }

    fn series_for(&self, chi: &Character, len: usize) -> Vec<Complex64> {
        let key = chi.exponents().to_vec();
        let hit = self.memo.read().unwrap().get(&key).cloned();
        let kind = match hit {
            Some(k) => k,
            None => {
                let k = Arc::new(if chi.is_trivial() {
                    LSeriesKind::Trivial(l_trivial(self.group))
                } else {
                    LSeriesKind::Poly(self.l_polynomial(chi))
                });
                self.memo
                    .write()
                    .unwrap()
                    .entry(key)
                    .or_insert(k)
                    .clone()
            }
        };
        kind.coeffs_upto(len)
    }

    /// Coefficients 0..=n of L(u^2, chi^2) L(u^3, chi^3) / L(u^6, chi^6);
    /// entry m is the sum of chi over square-full monic polynomials of
    /// degree m.
    pub fn twisted_squarefull_upto(&self, chi: &Character, n: usize) -> Vec<Complex64> {
        let len = n + 1;
        let a = self.series_for(&chi.power(self.group, 2), n / 2 + 1);
        let b = self.series_for(&chi.power(self.group, 3), n / 3 + 1);
        let c = self.series_for(&chi.power(self.group, 6), n / 6 + 1);
        let a2 = series::inflate(&a, 2, len);
        let b3 = series::inflate(&b, 3, len);
        let c6 = series::inflate(&c, 6, len);
        let num = series::mul_trunc(&a2, &b3, len);
        series::div_trunc(&num, &c6, len)
    }

    pub fn twisted_squarefull(&self, chi: &Character, n: usize) -> Complex64 {
        *self.twisted_squarefull_upto(chi, n).last().unwrap()
    }
}

/// M(n; alpha_2 chi) by exhaustive enumeration of monic degree-n
/// polynomials.  The identity with the series route is exact, so this is the
/// oracle the series engine is tested against.
pub fn m_alpha2_direct(
    group: &UnitGroup,
    chi: &Character,
    n: usize,
    budget: u64,
) -> Result<Complex64, LfuncError> {
    let ctx = group.ctx();
    let needed = (ctx.q() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(LfuncError::BudgetExceeded {
            needed,
            budget,
        });
    }
    let mut total = Complex64::new(0.0, 0.0);
    MonicIter::new(ctx, n).visit(|f| {
        if is_squarefull(f, ctx) {
            if let Some(x) = group.dlog(f) {
                total += group.root(chi.root_index(group, &x));
            }
        }
    });
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::{parse_poly, FieldCtx};

    fn group(q: u64, m: &str) -> UnitGroup {
        let ctx = FieldCtx::new(q).unwrap();
        let modulus = parse_poly(&ctx, m).unwrap();
        UnitGroup::new(&ctx, &modulus).unwrap()
    }

    #[test]
    fn trivial_series_for_prime_modulus() {
        // (1 - u^2) / (1 - 3u): c_0 = 1, c_1 = 3, c_m = 3^m - 3^{m-2}
        let g = group(3, "T^2+1");
        let t = l_trivial(&g);
        let s = t.series(7);
        assert_eq!(s[0].re, 1.0);
        assert_eq!(s[1].re, 3.0);
        for m in 2..7 {
            let expect = 3f64.powi(m as i32) - 3f64.powi(m as i32 - 2);
            assert_eq!(s[m].re, expect, "m = {m}");
            assert_eq!(s[m].im, 0.0);
        }
    }

    #[test]
    fn trivial_series_counts_coprime_monics() {
        // coefficient m of L(u, chi_0) counts monic degree-m polynomials
        // coprime to Q, for any Q
        for (q, m) in [(3u64, "T^2+T"), (3, "T^3"), (5, "T^2")] {
            let ctx = FieldCtx::new(q).unwrap();
            let g = group(q, m);
            let s = l_trivial(&g).series(6);
            for n in 0..6 {
                let mut count = 0u64;
                MonicIter::new(&ctx, n).visit(|f| {
                    if g.is_unit(f) {
                        count += 1;
                    }
                });
                assert_eq!(s[n].re, count as f64, "{m} mod {q}, degree {n}");
            }
        }
    }

    #[test]
    fn l_polynomial_shape_and_tail() {
        let g = group(3, "T^2+1");
        for chi in g.characters().filter(|c| !c.is_trivial()) {
            let lp = l_polynomial(&g, &chi).unwrap();
            assert_eq!(lp.coeffs.len(), 2);
            assert!((lp.coeffs[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            assert!(lp.tail_deviation < 1e-9);
            if chi.is_even() {
                assert!(lp.at_one().norm() < 1e-9, "{chi}");
            }
        }
        assert!(matches!(
            l_polynomial(&g, &g.trivial_character()),
            Err(LfuncError::TrivialCharacter)
        ));
    }

    #[test]
    fn weil_moduli_for_prime_moduli() {
        // every inverse root of every nontrivial character sits on one of
        // the two admissible circles; odd primitive characters fill
        // deg Q - 1 phases, even ones leave one unit root
        for (q, m) in [
            (3u64, "T^2+1"),
            (3, "T^3+2T+1"),
            (5, "T^2+2"),
            (5, "T^3+T+1"),
            (7, "T^2+1"),
            (7, "T^3+2"),
        ] {
            let g = group(q, m);
            assert!(g.is_prime_modulus(), "{m} mod {q} must be prime");
            let deg_q = g.modulus().degree().unwrap();
            for chi in g.characters().filter(|c| !c.is_trivial()) {
                let lp = l_polynomial(&g, &chi).unwrap();
                let fr = inverse_roots(&lp).unwrap_or_else(|e| {
                    panic!("{chi} mod {m} over F_{q}: {e}");
                });
                if chi.is_odd() {
                    assert_eq!(fr.unit_roots, 0, "{chi}");
                    assert_eq!(fr.dim(), deg_q - 1, "{chi}");
                } else {
                    assert_eq!(fr.unit_roots, 1, "{chi}");
                    assert_eq!(fr.dim(), deg_q - 2, "{chi}");
                }
                for w in fr.eigenphases {
                    assert!((0.0..2.0 * std::f64::consts::PI).contains(&w));
                }
            }
        }
    }

    #[test]
    fn series_matches_direct_enumeration() {
        // the generating-function identity is exact for every character,
        // including the trivial one and characters of order 2 and 3
        for (q, m) in [(3u64, "T^2+1"), (3, "T^3"), (3, "T^2+T")] {
            let g = group(q, m);
            let engine = SquarefullSeries::new(&g);
            for chi in g.characters() {
                let series = engine.twisted_squarefull_upto(&chi, 8);
                for n in 0..=8 {
                    let direct = m_alpha2_direct(&g, &chi, n, 1 << 20).unwrap();
                    let err = (series[n] - direct).norm();
                    assert!(
                        err < 1e-8 * (1.0 + direct.norm()),
                        "{chi} mod {m}, n = {n}: series {} vs direct {direct}",
                        series[n]
                    );
                }
            }
        }
    }

    #[test]
    fn no_squarefull_polynomials_in_degree_one() {
        let g = group(3, "T^2+1");
        let engine = SquarefullSeries::new(&g);
        for chi in g.characters() {
            assert_eq!(engine.twisted_squarefull(&chi, 1).norm(), 0.0);
            assert!((engine.twisted_squarefull(&chi, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn sprime_base_cases_and_difference_identity() {
        // Even primitive characters mod T^3 over F_7: powers 2, 3, 6 stay
        // primitive and even (exponent below the characteristic), so the
        // alternating trace sums reproduce the twisted square-full sums via
        // M(m) = S'(m) - S'(m-2).
        let g = group(7, "T^3");
        let engine = SquarefullSeries::new(&g);
        let n_bound = g.modulus().degree().unwrap() - 2;
        let mut tested = 0;
        for chi in g.characters() {
            if !chi.is_even() || !chi.is_primitive() || chi.is_trivial() {
                continue;
            }
            let powers: Vec<_> = [2u64, 3, 6]
                .iter()
                .map(|&d| chi.power(&g, d))
                .collect();
            if powers.iter().any(|p| !p.is_primitive() || !p.is_even()) {
                continue;
            }
            let thetas: Vec<_> = powers
                .iter()
                .map(|p| inverse_roots(&engine.l_polynomial(p)).unwrap())
                .collect();
            for th in &thetas {
                assert_eq!(th.unit_roots, 1);
                assert_eq!(th.dim(), n_bound);
            }

            assert_eq!(
                s_prime(0, &thetas[0], &thetas[1], &thetas[2], n_bound),
                Complex64::new(1.0, 0.0)
            );
            for m in [-2i64, -1, 1] {
                assert_eq!(
                    s_prime(m, &thetas[0], &thetas[1], &thetas[2], n_bound).norm(),
                    0.0
                );
            }

            let series = engine.twisted_squarefull_upto(&chi, 8);
            for m in 0..=8i64 {
                let lhs = series[m as usize];
                let rhs = s_prime(m, &thetas[0], &thetas[1], &thetas[2], n_bound)
                    - s_prime(m - 2, &thetas[0], &thetas[1], &thetas[2], n_bound);
                assert!(
                    (lhs - rhs).norm() < 1e-6 * (1.0 + lhs.norm()),
                    "{chi}, m = {m}: {lhs} vs {rhs}"
                );
            }
            tested += 1;
            if tested >= 6 {
                break;
            }
        }
        assert!(tested >= 3, "expected several qualifying characters");
    }

    #[test]
    fn direct_budget_is_enforced() {
        let g = group(3, "T^2+1");
        let chi = g.trivial_character();
        assert!(matches!(
            m_alpha2_direct(&g, &chi, 40, 1000),
            Err(LfuncError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn zeta_descriptor() {
        let z = ZetaFq::new(3);
        assert_eq!(z.series_coeff(4), 81.0);
        // zeta_q(s) = 1/(1 - q^{1-s})
        let s = 2.0;
        assert!((z.zeta(s) - 1.0 / (1.0 - 3f64.powf(1.0 - s))).abs() < 1e-12);
    }
}
