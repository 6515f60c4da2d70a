//! Exterior and symmetric power traces of a unitary matrix, computed from
//! its eigenvalues through power sums and Newton's identities.
//!
//! With e_j the elementary symmetric polynomial of the eigenvalues and h_k
//! the complete homogeneous one:
//! `det(I - uU) = sum_j (-u)^j e_j` and `1/det(I - uU) = sum_k u^k h_k`,
//! i.e. e_j is the trace of the j-th exterior power and h_k the trace of the
//! k-th symmetric power.

use num_complex::Complex64;

/// p[m] = sum of m-th powers of the values, for m = 0..=max (p[0] = count).
pub fn power_sums(values: &[Complex64], max: usize) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(0.0, 0.0); max + 1];
    p[0] = Complex64::new(values.len() as f64, 0.0);
    let mut pows: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); values.len()];
    for m in 1..=max {
        let mut s = Complex64::new(0.0, 0.0);
        for (acc, v) in pows.iter_mut().zip(values) {
            *acc *= v;
            s += *acc;
        }
        p[m] = s;
    }
    p
}

/// e_0..e_max from power sums by Newton's identity
/// j e_j = sum_{m=1}^{j} (-1)^{m-1} e_{j-m} p_m.
/// Entries beyond `dim` are exactly zero for a dim-dimensional spectrum, so
/// they are pinned rather than left to rounding.
pub fn elementary_from_power_sums(p: &[Complex64], dim: usize, max: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); max + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for j in 1..=max {
        if j > dim {
            break; // e_j = 0 identically
        }
        let mut s = Complex64::new(0.0, 0.0);
        let mut sign = 1.0;
        for m in 1..=j {
            s += sign * e[j - m] * p[m];
            sign = -sign;
        }
        e[j] = s / j as f64;
    }
    e
}

/// h_0..h_max from power sums by k h_k = sum_{m=1}^{k} p_m h_{k-m}.
pub fn complete_from_power_sums(p: &[Complex64], max: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); max + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for k in 1..=max {
        let mut s = Complex64::new(0.0, 0.0);
        for m in 1..=k {
            s += p[m] * h[k - m];
        }
        h[k] = s / k as f64;
    }
    h
}

/// Convenience: e and h traces straight from eigenvalues.
pub fn traces_from_eigenvalues(
    values: &[Complex64],
    max_e: usize,
    max_h: usize,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let p = power_sums(values, max_e.max(max_h));
    (
        elementary_from_power_sums(&p, values.len(), max_e),
        complete_from_power_sums(&p, max_h),
    )
}
