//! Enumeration of monic polynomials of fixed degree.
//!
//! The k-th monic polynomial of degree n (k in 0..q^n) has coefficients
//! (c_0, ..., c_{n-1}) given by the base-q digits of k with c_0 the most
//! significant digit, plus the leading 1.  This is the lexicographic order on
//! coefficient vectors and allows splitting an index range across workers.

use super::{FieldCtx, Poly};

/// q^n as u64; panics on overflow (enumeration spaces that large are far
/// beyond any budget this crate accepts).
pub fn monic_count(ctx: &FieldCtx, n: usize) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(ctx.q()).expect("enumeration space overflows u64");
    }
    acc
}

/// The k-th monic polynomial of degree n in lexicographic coefficient order.
pub fn monic_by_index(ctx: &FieldCtx, n: usize, k: u64) -> Poly {
    debug_assert!(k < monic_count(ctx, n));
    let q = ctx.q();
    let mut coeffs = vec![0u64; n + 1];
    coeffs[n] = 1;
    let mut rest = k;
    for i in (0..n).rev() {
        // least significant digit of k is c_{n-1}, so c_0 compares first
        coeffs[i] = rest % q;
        rest /= q;
    }
    Poly::from_raw(coeffs)
}

/// Iterator over a contiguous index range of monic degree-n polynomials.
/// Increments an internal odometer, so iteration is O(1) amortized per step.
pub struct MonicIter {
    q: u64,
    current: Poly,
    next_index: u64,
    end: u64,
    fresh: bool,
}

impl MonicIter {
    /// All q^n monic polynomials of degree n.
    pub fn new(ctx: &FieldCtx, n: usize) -> Self {
        Self::range(ctx, n, 0, monic_count(ctx, n))
    }

    /// The subrange [start, end) in index order.
    pub fn range(ctx: &FieldCtx, n: usize, start: u64, end: u64) -> Self {
        let total = monic_count(ctx, n);
        assert!(start <= end && end <= total, "range out of bounds");
        let current = if start < end {
            monic_by_index(ctx, n, start)
        } else {
            Poly::zero()
        };
        MonicIter {
            q: ctx.q(),
            current,
            next_index: start,
            end,
            fresh: true,
        }
    }

    /// Visits each polynomial in order without allocating per item.
    pub fn visit(mut self, mut f: impl FnMut(&Poly)) {
        while let Some(p) = self.advance() {
            f(p);
        }
    }

    fn advance(&mut self) -> Option<&Poly> {
        if self.next_index >= self.end {
            return None;
        }
        if self.fresh {
            self.fresh = false;
        } else {
            // odometer: c_{n-1} is the fastest-moving digit; the leading 1 is
            // untouched, so the representation stays canonical
            let q = self.q;
            let coeffs = self.current.coeffs_mut();
            let n = coeffs.len() - 1;
            for i in (0..n).rev() {
                coeffs[i] += 1;
                if coeffs[i] < q {
                    break;
                }
                coeffs[i] = 0;
            }
        }
        self.next_index += 1;
        Some(&self.current)
    }
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        self.advance().cloned()
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next_index) as usize;
        (left, Some(left))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::format_human;

    #[test]
    fn degree_zero_is_just_one() {
        let ctx = FieldCtx::new(3).unwrap();
        let all: Vec<Poly> = MonicIter::new(&ctx, 0).collect();
        assert_eq!(all, vec![Poly::one()]);
    }

    #[test]
    fn nine_monic_quadratics_mod_3() {
        let ctx = FieldCtx::new(3).unwrap();
        let all: Vec<Poly> = MonicIter::new(&ctx, 2).collect();
        assert_eq!(all.len(), 9);
        for p in &all {
            assert!(p.is_monic());
            assert_eq!(p.degree(), Some(2));
        }
        // strictly increasing in the canonical order, hence all distinct
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn endpoints_mod_5_degree_3() {
        let ctx = FieldCtx::new(5).unwrap();
        assert_eq!(monic_count(&ctx, 3), 125);
        let first = monic_by_index(&ctx, 3, 0);
        let last = monic_by_index(&ctx, 3, 124);
        assert_eq!(format_human(&first), "T^3");
        assert_eq!(format_human(&last), "T^3+4T^2+4T+4");
    }

    #[test]
    fn range_splitting_agrees_with_full_enumeration() {
        let ctx = FieldCtx::new(3).unwrap();
        let full: Vec<Poly> = MonicIter::new(&ctx, 3).collect();
        let mut glued = Vec::new();
        for (a, b) in [(0u64, 7u64), (7, 13), (13, 27)] {
            glued.extend(MonicIter::range(&ctx, 3, a, b));
        }
        assert_eq!(full, glued);
        for (k, p) in full.iter().enumerate() {
            assert_eq!(&monic_by_index(&ctx, 3, k as u64), p);
        }
    }

    #[test]
    fn visit_matches_iterator() {
        let ctx = FieldCtx::new(5).unwrap();
        let collected: Vec<Poly> = MonicIter::new(&ctx, 2).collect();
        let mut visited = Vec::new();
        MonicIter::new(&ctx, 2).visit(|p| visited.push(p.clone()));
        assert_eq!(collected, visited);
    }
}
