//! Truncated power-series arithmetic over complex coefficients.
//! All vectors are coefficient lists c[0..=n] for a fixed truncation order n.

use num_complex::Complex64;

pub fn mul_trunc(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai.norm_sqr() == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// a / b as a truncated series; requires b[0] != 0.
pub fn div_trunc(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let b0 = b[0];
    assert!(b0.norm() > 0.0, "series division by a series with zero constant term");
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for m in 0..len {
        let mut acc = a.get(m).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0));
        for i in 1..=m.min(b.len() - 1) {
            acc -= b[i] * out[m - i];
        }
        out[m] = acc / b0;
    }
    out
}

/// Substitute u -> u^d: interleaves d-1 zeros between coefficients.
pub fn inflate(a: &[Complex64], d: usize, len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, &ai) in a.iter().enumerate() {
        match i.checked_mul(d) {
            Some(k) if k < len => out[k] = ai,
            _ => break,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(vals: &[f64]) -> Vec<Complex64> {
        vals.iter().map(|&v| Complex64::new(v, 0.0)).collect()
    }

    #[test]
    fn multiply_then_divide_round_trips() {
        let a = s(&[1.0, 2.0, -1.0, 0.5, 3.0]);
        let b = s(&[1.0, -3.0, 0.25, 2.0, -1.5]);
        let prod = mul_trunc(&a, &b, 5);
        let back = div_trunc(&prod, &b, 5);
        for (x, y) in back.iter().zip(&a) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn geometric_series_inverse() {
        // 1/(1 - 3u) = sum 3^m u^m
        let denom = s(&[1.0, -3.0]);
        let one = s(&[1.0]);
        let inv = div_trunc(&one, &denom, 6);
        for (m, c) in inv.iter().enumerate() {
            assert!((c.re - 3f64.powi(m as i32)).abs() < 1e-9);
            assert_eq!(c.im, 0.0);
        }
    }

    #[test]
    fn inflate_places_coefficients_at_multiples() {
        let a = s(&[1.0, 4.0, 9.0]);
        let out = inflate(&a, 3, 8);
        let expect = [1.0, 0.0, 0.0, 4.0, 0.0, 0.0, 9.0, 0.0];
        for (c, e) in out.iter().zip(expect) {
            assert_eq!(c.re, e);
        }
    }
}
