//! Inverse roots of L-polynomials and their unitarization.

use super::{LPolynomial, LfuncError};
use num_complex::Complex64;

/// Tolerances fixed for the whole artifact: root iteration stops at 1e-12
/// relative steps; modulus classification allows 1e-6 relative error.
const ROOT_TOL: f64 = 1e-12;
const ROOT_MAX_ITER: usize = 200;
const MODULUS_TOL: f64 = 1e-6;

/// The inverse roots of an L-polynomial, split by modulus: roots with
/// |alpha| = sqrt(q) carry the eigenphases Theta_j (alpha_j = sqrt(q)
/// e^{i Theta_j}), roots with |alpha| = 1 are counted separately.
#[derive(Debug, Clone)]
pub struct UnitarizedFrobenius {
    /// Phases in [0, 2 pi), ascending.
    pub eigenphases: Vec<f64>,
    /// Number of inverse roots on the unit circle (the trivial zero of an
    /// even character contributes one).
    pub unit_roots: usize,
    /// sqrt(q).
    pub scale: f64,
    /// det(I - u sqrt(q) Theta): the L-polynomial with all unit-modulus
    /// inverse roots divided out.  Kept in coefficient form so trace
    /// computations do not depend on root-finding accuracy twice.
    det_coeffs: Vec<Complex64>,
}

impl UnitarizedFrobenius {
    pub fn dim(&self) -> usize {
        self.eigenphases.len()
    }

    /// Coefficients of det(I - u sqrt(q) Theta); entry j equals
    /// (-1)^j q^{j/2} tr Lambda_j(Theta).
    pub fn det_poly(&self) -> &[Complex64] {
        &self.det_coeffs
    }

    /// Series of 1/det(I - u sqrt(q) Theta) to the given length; entry k
    /// equals q^{k/2} tr Sym^k(Theta).
    pub fn det_inverse_series(&self, len: usize) -> Vec<Complex64> {
        let one = [Complex64::new(1.0, 0.0)];
        super::series::div_trunc(&one, &self.det_coeffs, len)
    }
}

/// Finds all inverse roots of the L-polynomial, verifies the two admissible
/// moduli, and packages the sqrt(q)-modulus phases.  A root with any other
/// modulus is reported as an error, never dropped.
pub fn inverse_roots(lp: &LPolynomial) -> Result<UnitarizedFrobenius, LfuncError> {
    let scale = (lp.q as f64).sqrt();
    let max_mag = lp
        .coeffs
        .iter()
        .map(|c| c.norm())
        .fold(1.0f64, f64::max);
    let mut coeffs = lp.coeffs.clone();
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= 1e-9 * max_mag {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(LfuncError::DegreeTooSmall);
    }

    let mut unit_roots = 0usize;
    if lp.trivial_zero_at_one {
        let (quot, rem) = deflate(&coeffs, Complex64::new(1.0, 0.0));
        if rem.norm() > 1e-7 * max_mag {
            return Err(LfuncError::AnomalousRoot {
                modulus: rem.norm(),
                detail: "expected zero at u = 1 is missing".into(),
            });
        }
        coeffs = quot;
        unit_roots += 1;
    }

    let mut eigenphases = Vec::new();
    let mut det_coeffs = coeffs.clone();
    if coeffs.len() > 1 {
        // inverse roots = roots of the degree-reversed polynomial
        let reversed: Vec<Complex64> = coeffs.iter().rev().copied().collect();
        let roots = polynomial_roots(&reversed, ROOT_TOL, ROOT_MAX_ITER)?;
        for alpha in roots {
            let m = alpha.norm();
            if (m - scale).abs() <= MODULUS_TOL * scale {
                let mut phase = alpha.im.atan2(alpha.re);
                if phase < 0.0 {
                    phase += 2.0 * std::f64::consts::PI;
                }
                eigenphases.push(phase);
            } else if (m - 1.0).abs() <= MODULUS_TOL {
                unit_roots += 1;
                let (quot, _rem) = deflate(&det_coeffs, alpha);
                det_coeffs = quot;
            } else {
                return Err(LfuncError::AnomalousRoot {
                    modulus: m,
                    detail: format!("inverse root {alpha} is neither unit nor sqrt(q)"),
                });
            }
        }
    }
    eigenphases.sort_by(|a, b| a.partial_cmp(b).unwrap());

    Ok(UnitarizedFrobenius {
        eigenphases,
        unit_roots,
        scale,
        det_coeffs,
    })
}

/// Synthetic division by (1 - alpha u); returns (quotient, remainder).
fn deflate(coeffs: &[Complex64], alpha: Complex64) -> (Vec<Complex64>, Complex64) {
    let d = coeffs.len() - 1;
    let mut quot = vec![Complex64::new(0.0, 0.0); d];
    let mut carry = Complex64::new(0.0, 0.0);
    for i in 0..d {
        carry = coeffs[i] + alpha * carry;
        quot[i] = carry;
    }
    let rem = coeffs[d] + alpha * carry;
    (quot, rem)
}

/// All complex roots by the Aberth-Ehrlich simultaneous iteration.
/// Coefficients are low-to-high; the leading coefficient must be nonzero.
pub(crate) fn polynomial_roots(
    coeffs: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<Complex64>, LfuncError> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[d];
    assert!(lead.norm() > 0.0, "leading coefficient must be nonzero");
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();

    // initial guesses on a circle scaled by the geometric mean of the root
    // magnitudes, angles offset to avoid the real-axis symmetry trap
    let r0 = monic[0].norm().powf(1.0 / d as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.4;
            Complex64::new(r0 * ang.cos(), r0 * ang.sin())
        })
        .collect();

    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };

    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() > 0.0 { p / dp } else { p };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() > 1e-300 { w / denom } else { w };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < tol {
            break;
        }
    }

    let residual_cap = 1e-6 * monic.iter().map(|c| c.norm()).fold(1.0, f64::max);
    for &zi in &z {
        let (p, _) = eval(zi);
        // relative to the polynomial magnitude near the root
        let local = (1.0 + zi.norm()).powi(d as i32);
        if p.norm() > residual_cap * local {
            return Err(LfuncError::RootFindingFailed {
                residual: p.norm(),
            });
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in roots {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i] -= a * r;
                next[i + 1] += a;
            }
            coeffs = next;
        }
        coeffs
    }

    #[test]
    fn recovers_known_roots() {
        let roots = [c(2.0, 1.0), c(-0.5, 0.25), c(0.0, -3.0), c(1.5, 0.0)];
        let coeffs = poly_from_roots(&roots);
        let mut found = polynomial_roots(&coeffs, 1e-12, 200).unwrap();
        let mut expect = roots.to_vec();
        let key = |z: &Complex64| (z.re * 1e6) as i64;
        found.sort_by_key(key);
        expect.sort_by_key(key);
        for (a, b) in found.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn deflation_removes_a_root() {
        // (1 - 2u)(1 + u) = 1 - u - 2u^2
        let coeffs = [c(1.0, 0.0), c(-1.0, 0.0), c(-2.0, 0.0)];
        let (quot, rem) = deflate(&coeffs, c(2.0, 0.0));
        assert!(rem.norm() < 1e-12);
        assert!((quot[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((quot[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn repeated_roots_still_converge_to_residual_tolerance() {
        let roots = [c(1.0, 1.0), c(1.0, 1.0), c(-2.0, 0.0)];
        let coeffs = poly_from_roots(&roots);
        let found = polynomial_roots(&coeffs, 1e-12, 200).unwrap();
        for z in found {
            let best = roots.iter().map(|r| (z - r).norm()).fold(f64::MAX, f64::min);
            assert!(best < 1e-5, "{z}");
        }
    }
}
