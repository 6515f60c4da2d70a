//! Monte-Carlo estimates of the unitary-group integrals that the variance
//! predictions reduce to: orthogonality of representation traces, and the
//! triple integral whose diagonal terms sum to the box-constrained power sum.

use super::{haar_sample, tr_rep, RepKind};
use crate::parallel::chunked_reduce;
use num_complex::Complex64;
use serde::Serialize;

/// Samples per accumulation chunk; fixed so that the reduction order (and
/// therefore the floating-point result) is independent of the worker count.
const MC_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Serialize)]
pub struct MCEstimate {
    pub mean: Complex64,
    /// Sample standard deviation over sqrt(samples).
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl MCEstimate {
    /// Distance from a known target in standard errors.
    pub fn z_score(&self, target: Complex64) -> f64 {
        if self.stderr == 0.0 {
            return if (self.mean - target).norm() == 0.0 { 0.0 } else { f64::INFINITY };
        }
        (self.mean - target).norm() / self.stderr
    }
}

fn estimate(samples: u64, seed: u64, f: impl Fn(u64) -> Complex64 + Sync) -> MCEstimate {
    assert!(samples >= 2);
    let (sum, sum_sq) = chunked_reduce(
        samples,
        MC_CHUNK,
        |range| {
            let mut s = Complex64::new(0.0, 0.0);
            let mut s2 = 0.0f64;
            for i in range {
                let x = f(i);
                s += x;
                s2 += x.norm_sqr();
            }
            (s, s2)
        },
        |(a, a2), (b, b2)| (a + b, a2 + b2),
        (Complex64::new(0.0, 0.0), 0.0),
    );
    let mean = sum / samples as f64;
    let var = (sum_sq - samples as f64 * mean.norm_sqr()).max(0.0) / (samples - 1) as f64;
    MCEstimate {
        mean,
        stderr: (var / samples as f64).sqrt(),
        samples,
        seed,
    }
}

/// Estimates the pairing integral of tr(rep_j) against tr(rep_i) over U(n);
/// distinct irreducible representations integrate to 0, matching ones to 1.
/// `kind` is the representation constructor, `RepKind::Exterior` or
/// `RepKind::Symmetric`, applied to both indices.
pub fn mc_orthogonality(
    n: usize,
    j: usize,
    i: usize,
    kind: fn(usize) -> RepKind,
    samples: u64,
    seed: u64,
) -> MCEstimate {
    let (rep_j, rep_i) = (kind(j), kind(i));
    estimate(samples, seed, |s| {
        let v = haar_sample(n, seed, s);
        tr_rep(&v, rep_j) * tr_rep(&v, rep_i).conj()
    })
}

/// The (j, l, k) solutions of 2j + 3l + 6k = n with j, l <= cap.
pub(crate) fn weight_solutions(n: usize, cap: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for j in 0..=cap.min(n / 2) {
        let rem_j = n - 2 * j;
        for l in 0..=cap.min(rem_j / 3) {
            let r = rem_j - 3 * l;
            if r % 6 == 0 {
                out.push((j, l, r / 6));
            }
        }
    }
    out
}

/// The integrand of the triple integral at a sample: the squared modulus of
/// sum q^{(j+k+l)/2} tr Lambda_j(U1) tr Lambda_l(U2) tr Sym^k(U3).
pub(crate) fn triple_integrand(
    solutions: &[(usize, usize, usize)],
    sqrt_q: f64,
    u1: &super::EigenphaseVector,
    u2: &super::EigenphaseVector,
    u3: &super::EigenphaseVector,
) -> f64 {
    let max_j = solutions.iter().map(|s| s.0).max().unwrap_or(0);
    let max_l = solutions.iter().map(|s| s.1).max().unwrap_or(0);
    let max_k = solutions.iter().map(|s| s.2).max().unwrap_or(0);
    let e1 = u1.exterior_traces(max_j);
    let e2 = u2.exterior_traces(max_l);
    let h3 = u3.symmetric_traces(max_k);
    let mut total = Complex64::new(0.0, 0.0);
    for &(j, l, k) in solutions {
        total += sqrt_q.powi((j + l + k) as i32) * e1[j] * e2[l] * h3[k];
    }
    total.norm_sqr()
}

/// Monte-Carlo value of the triple integral over U(cap)^3 for weight q; by
/// representation orthogonality only the diagonal survives, so the exact
/// value is S(n) (sum of q^{j+k+l} over the solution triples).
pub fn mc_triple_variance(n: usize, cap: usize, q: u64, samples: u64, seed: u64) -> MCEstimate {
    let solutions = weight_solutions(n, cap);
    let sqrt_q = (q as f64).sqrt();
    estimate(samples, seed, |s| {
        let u1 = haar_sample(cap, seed, 3 * s);
        let u2 = haar_sample(cap, seed, 3 * s + 1);
        let u3 = haar_sample(cap, seed, 3 * s + 2);
        Complex64::new(triple_integrand(&solutions, sqrt_q, &u1, &u2, &u3), 0.0)
    })
}
