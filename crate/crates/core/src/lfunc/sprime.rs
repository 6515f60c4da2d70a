//! The alternating trace sums feeding the short-interval variance.

use super::roots::UnitarizedFrobenius;
use num_complex::Complex64;

/// S'(m) = sum over 2j+3l+6k+3i = m, 0 <= j,l <= bound, k,i >= 0 of
/// (-1)^i q^{(j+k+l)/2} trLambda_j(Theta2) trLambda_l(Theta3) trSym^k(Theta6),
/// in the convention det(I - u sqrt(q) Theta) = sum_j u^j q^{j/2} trLambda_j.
///
/// Negative m and m = 1 give the empty sum, hence 0.  The q-power weights are
/// absorbed exactly: q^{j/2} trLambda_j is a coefficient of the deflated
/// L-polynomial and q^{k/2} trSym^k a coefficient of its reciprocal series,
/// so no square roots are taken here.
pub fn s_prime(
    m: i64,
    theta2: &UnitarizedFrobenius,
    theta3: &UnitarizedFrobenius,
    theta6: &UnitarizedFrobenius,
    bound: usize,
) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    let mut total = zero;
    if m < 0 {
        return total;
    }
    let m = m as usize;
    let pad = |v: &[Complex64], idx: usize| v.get(idx).copied().unwrap_or(zero);
    let e2: Vec<Complex64> = (0..=bound).map(|j| pad(theta2.det_poly(), j)).collect();
    let e3: Vec<Complex64> = (0..=bound).map(|l| pad(theta3.det_poly(), l)).collect();
    let h6 = theta6.det_inverse_series(m / 6 + 1);

    let mut i = 0usize;
    while 3 * i <= m {
        let rem = m - 3 * i;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        for j in 0..=bound.min(rem / 2) {
            let rem_j = rem - 2 * j;
            for l in 0..=bound.min(rem_j / 3) {
                let r = rem_j - 3 * l;
                if r % 6 == 0 {
                    total += sign * e2[j] * e3[l] * h6[r / 6];
                }
            }
        }
        i += 1;
    }
    total
}
