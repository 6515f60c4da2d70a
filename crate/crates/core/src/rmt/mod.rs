//! Haar-random unitary matrices, representation traces on their spectra,
//! and Monte-Carlo estimates of the matrix integrals the variance formulas
//! reduce to, plus empirical equidistribution of unitarized Frobenii.

mod equidist;
mod mc;

pub use equidist::{equidist_report, EquidistFamily, EquidistMoments, EquidistReport};
pub use mc::{mc_orthogonality, mc_triple_variance, MCEstimate};

use crate::symfunc;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RmtError {
    #[error("the {0} family is empty for this modulus")]
    EmptyFamily(String),
    #[error("{0}")]
    ModulusShape(String),
    #[error("field characteristic must exceed {needed} for this family (got {got})")]
    SmallCharacteristic { needed: u64, got: u64 },
    #[error(transparent)]
    Lfunc(#[from] crate::lfunc::LfuncError),
}

/// A conjugacy class of U(N): the multiset of eigenvalue angles in [0, 2pi).
#[derive(Debug, Clone, Serialize)]
pub struct EigenphaseVector {
    phases: Vec<f64>,
}

impl EigenphaseVector {
    /// Normalizes angles into [0, 2pi) and sorts them.
    pub fn new(mut phases: Vec<f64>) -> Self {
        let tau = std::f64::consts::TAU;
        for t in &mut phases {
            *t = t.rem_euclid(tau);
        }
        phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
        EigenphaseVector { phases }
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.phases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect()
    }

    /// The class of e^{i phi} U; scalar rotation shifts every phase.
    pub fn rotated(&self, phi: f64) -> Self {
        EigenphaseVector::new(self.phases.iter().map(|t| t + phi).collect())
    }

    /// tr Lambda_j for j = 0..max (elementary symmetric polynomials of the
    /// eigenvalues; zero above the dimension).
    pub fn exterior_traces(&self, max: usize) -> Vec<Complex64> {
        let p = symfunc::power_sums(&self.eigenvalues(), max);
        symfunc::elementary_from_power_sums(&p, self.dim(), max)
    }

    /// tr Sym^k for k = 0..max (complete homogeneous symmetric polynomials).
    pub fn symmetric_traces(&self, max: usize) -> Vec<Complex64> {
        let p = symfunc::power_sums(&self.eigenvalues(), max);
        symfunc::complete_from_power_sums(&p, max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RepKind {
    Exterior(usize),
    Symmetric(usize),
}

/// Trace of the given irreducible representation at the class `v`.
pub fn tr_rep(v: &EigenphaseVector, rep: RepKind) -> Complex64 {
    match rep {
        RepKind::Exterior(j) => {
            if j > v.dim() {
                Complex64::new(0.0, 0.0)
            } else {
                v.exterior_traces(j)[j]
            }
        }
        RepKind::Symmetric(k) => v.symmetric_traces(k)[k],
    }
}

struct Mat {
    n: usize,
    a: Vec<Complex64>,
}

impl Mat {
    fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let s = self.a[i * n + k];
                if s.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += s * o.a[k * n + j];
                }
            }
        }
        Mat { n, a: out }
    }

    fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.a[i * self.n + i]).sum()
    }
}

/// Gram-Schmidt on Ginibre columns with re-orthogonalization.  The QR
/// factorization with positive diagonal R is unique, so the resulting Q is
/// exactly Haar distributed.
fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> Mat {
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    for i in 0..n {
        for _pass in 0..2 {
            for j in 0..i {
                let r: Complex64 = (0..n).map(|t| cols[j][t].conj() * cols[i][t]).sum();
                for t in 0..n {
                    let d = r * cols[j][t];
                    cols[i][t] -= d;
                }
            }
        }
        let norm = cols[i].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for t in 0..n {
            cols[i][t] /= norm;
        }
    }
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            a[r * n + c] = z;
        }
    }
    Mat { n, a }
}

/// Eigenphases via the characteristic polynomial: power-sum traces of U^k
/// feed Newton's identities, and the resulting polynomial is solved by the
/// same simultaneous root iteration the L-polynomials use.
fn eigenphases(u: &Mat) -> Vec<f64> {
    let n = u.n;
    let mut p = vec![Complex64::new(0.0, 0.0); n + 1];
    p[0] = Complex64::new(n as f64, 0.0);
    let mut m = Mat { n, a: u.a.clone() };
    p[1] = m.trace();
    for k in 2..=n {
        m = m.mul(u);
        p[k] = m.trace();
    }
    let e = symfunc::elementary_from_power_sums(&p, n, n);
    // det(xI - U) = sum_j (-1)^j e_j x^{n-j}, low-to-high in x
    let coeffs: Vec<Complex64> = (0..=n)
        .map(|i| {
            let j = n - i;
            if j % 2 == 0 { e[j] } else { -e[j] }
        })
        .collect();
    let roots = crate::lfunc::polynomial_roots(&coeffs, 1e-12, 200).expect("unitary spectrum");
    roots
        .into_iter()
        .map(|z| {
            debug_assert!((z.norm() - 1.0).abs() < 1e-6, "non-unimodular eigenvalue {z}");
            z.arg()
        })
        .collect()
}

/// Eigenphases of a Haar-random U(n) matrix, fully determined by
/// (seed, index): the RNG stream is keyed by the sample index, so sampling
/// is reproducible under any parallel schedule.
pub fn haar_sample(n: usize, seed: u64, index: u64) -> EigenphaseVector {
    assert!(n >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let u = haar_unitary(n, &mut rng);
    EigenphaseVector::new(eigenphases(&u))
}
