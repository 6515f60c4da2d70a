//! Moment tables for unitarized Frobenii over character families, reported
//! against the Haar values E[tr U] = 0, E[|tr U|^2] = 1, E[tr U^2] = 0.
//!
//! The families match the hypotheses of the equidistribution theorems the
//! variance asymptotics rest on; since those are q -> infinity statements
//! the report carries no pass/fail verdict, only deviations in units of the
//! expected 1/sqrt(q) scale.

use super::RmtError;
use crate::chargroup::{Character, UnitGroup};
use crate::field_poly::{format_human, Poly};
use crate::lfunc::{inverse_roots, l_polynomial};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquidistFamily {
    /// Primitive odd characters; the modulus must be squarefree.
    OddPrimitive,
    /// Primitive even characters; the modulus must be a power of T.
    EvenPrimitive,
    /// Characters whose square, cube, and sixth power are all primitive and
    /// all odd (squarefree modulus) or all even (power-of-T modulus); each
    /// member contributes three Frobenii, one per power.
    SixthPower,
}

impl EquidistFamily {
    pub fn name(self) -> &'static str {
        match self {
            EquidistFamily::OddPrimitive => "odd-primitive",
            EquidistFamily::EvenPrimitive => "even-primitive",
            EquidistFamily::SixthPower => "sixth-power",
        }
    }
}

/// Empirical moments of one Frobenius component over the family, next to
/// the Haar targets (0, 1, 0).  `deviation_over_scale` divides each
/// |measured - target| by 1/sqrt(q).
#[derive(Debug, Clone, Serialize)]
pub struct EquidistMoments {
    pub component: String,
    pub dim: usize,
    pub mean_trace: Complex64,
    pub mean_abs_trace_sq: f64,
    pub mean_trace_square: Complex64,
    pub haar_values: [f64; 3],
    pub deviation_over_scale: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct EquidistReport {
    pub family: EquidistFamily,
    pub q: u64,
    pub modulus: String,
    pub family_size: usize,
    /// Order of the full character group mod Q.
    pub total_characters: u64,
    /// Frobenius dimension shared by every member.
    pub dim: usize,
    /// 1/sqrt(q), the expected magnitude of the deviations.
    pub scale: f64,
    pub moments: Vec<EquidistMoments>,
}

struct MomentAcc {
    component: String,
    dim: Option<usize>,
    expected_unit_roots: usize,
    sum_trace: Complex64,
    sum_abs_sq: f64,
    sum_square: Complex64,
    count: usize,
}

impl MomentAcc {
    fn new(component: &str, expected_unit_roots: usize) -> Self {
        MomentAcc {
            component: component.to_string(),
            dim: None,
            expected_unit_roots,
            sum_trace: Complex64::new(0.0, 0.0),
            sum_abs_sq: 0.0,
            sum_square: Complex64::new(0.0, 0.0),
            count: 0,
        }
    }

    fn add(&mut self, group: &UnitGroup, chi: &Character) -> Result<(), RmtError> {
        let lp = l_polynomial(group, chi)?;
        let frob = inverse_roots(&lp)?;
        // primitive characters put every inverse root on the sqrt(q) circle,
        // except the single forced zero at u = 1 when the character is even
        assert_eq!(
            frob.unit_roots, self.expected_unit_roots,
            "unexpected unit-circle inverse root for a primitive character"
        );
        match self.dim {
            None => self.dim = Some(frob.dim()),
            Some(d) => assert_eq!(d, frob.dim(), "Frobenius dimension varies inside the family"),
        }
        let mut tr = Complex64::new(0.0, 0.0);
        let mut tr2 = Complex64::new(0.0, 0.0);
        for &theta in &frob.eigenphases {
            tr += Complex64::from_polar(1.0, theta);
            tr2 += Complex64::from_polar(1.0, 2.0 * theta);
        }
        self.sum_trace += tr;
        self.sum_abs_sq += tr.norm_sqr();
        self.sum_square += tr2;
        self.count += 1;
        Ok(())
    }

    fn finish(self, sqrt_q: f64) -> EquidistMoments {
        let n = self.count as f64;
        let mean_trace = self.sum_trace / n;
        let mean_abs_trace_sq = self.sum_abs_sq / n;
        let mean_trace_square = self.sum_square / n;
        EquidistMoments {
            component: self.component,
            dim: self.dim.unwrap_or(0),
            mean_trace,
            mean_abs_trace_sq,
            mean_trace_square,
            haar_values: [0.0, 1.0, 0.0],
            deviation_over_scale: [
                mean_trace.norm() * sqrt_q,
                (mean_abs_trace_sq - 1.0).abs() * sqrt_q,
                mean_trace_square.norm() * sqrt_q,
            ],
        }
    }
}

fn is_power_of_t(factors: &[(Poly, u32)]) -> bool {
    factors.len() == 1 && factors[0].0 == Poly::monomial(1)
}

fn is_squarefree(factors: &[(Poly, u32)]) -> bool {
    factors.iter().all(|&(_, e)| e == 1)
}

/// Collects the family of characters mod the group's modulus, computes each
/// member's unitarized Frobenius, and averages the first traces against the
/// Haar predictions.
pub fn equidist_report(
    group: &UnitGroup,
    family: EquidistFamily,
) -> Result<EquidistReport, RmtError> {
    let q = group.ctx().q();
    let factors = group.prime_factors();
    let power_of_t = is_power_of_t(&factors);

    // (member, Frobenius components with labels)
    let mut members: Vec<Vec<(usize, Character)>> = Vec::new();
    let mut accs: Vec<MomentAcc>;
    match family {
        EquidistFamily::OddPrimitive => {
            if !is_squarefree(&factors) {
                return Err(RmtError::ModulusShape(format!(
                    "the odd-primitive family needs a squarefree modulus, got {}",
                    format_human(group.modulus())
                )));
            }
            accs = vec![MomentAcc::new("chi", 0)];
            for chi in group.characters() {
                if chi.is_primitive() && chi.is_odd() {
                    members.push(vec![(0, chi)]);
                }
            }
        }
        EquidistFamily::EvenPrimitive => {
            if !power_of_t {
                return Err(RmtError::ModulusShape(format!(
                    "the even-primitive family needs a power-of-T modulus, got {}",
                    format_human(group.modulus())
                )));
            }
            accs = vec![MomentAcc::new("chi", 1)];
            for chi in group.characters() {
                if chi.is_primitive() && chi.is_even() {
                    members.push(vec![(0, chi)]);
                }
            }
        }
        EquidistFamily::SixthPower => {
            let want_even = if power_of_t {
                if q <= 13 {
                    return Err(RmtError::SmallCharacteristic { needed: 13, got: q });
                }
                true
            } else if is_squarefree(&factors) {
                if q <= 6 {
                    return Err(RmtError::SmallCharacteristic { needed: 6, got: q });
                }
                false
            } else {
                return Err(RmtError::ModulusShape(format!(
                    "the sixth-power family needs a squarefree or power-of-T modulus, got {}",
                    format_human(group.modulus())
                )));
            };
            let unit = usize::from(want_even);
            accs = vec![
                MomentAcc::new("chi^2", unit),
                MomentAcc::new("chi^3", unit),
                MomentAcc::new("chi^6", unit),
            ];
            for chi in group.characters() {
                let powers = [
                    chi.power(group, 2),
                    chi.power(group, 3),
                    chi.power(group, 6),
                ];
                let ok = powers
                    .iter()
                    .all(|c| c.is_primitive() && c.is_even() == want_even);
                if ok {
                    members.push(powers.into_iter().enumerate().collect());
                }
            }
        }
    }

    if members.is_empty() {
        return Err(RmtError::EmptyFamily(family.name().to_string()));
    }

    for comps in &members {
        for (slot, chi) in comps {
            accs[*slot].add(group, chi)?;
        }
    }

    let sqrt_q = (q as f64).sqrt();
    let moments: Vec<EquidistMoments> = accs.into_iter().map(|a| a.finish(sqrt_q)).collect();
    Ok(EquidistReport {
        family,
        q,
        modulus: format_human(group.modulus()),
        family_size: members.len(),
        total_characters: group.totient(),
        dim: moments[0].dim,
        scale: 1.0 / sqrt_q,
        moments,
    })
}
