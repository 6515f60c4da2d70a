//! Factorization over F_q[T]: squarefree decomposition in characteristic p,
//! trial division against a deterministic sieve of monic irreducibles, and
//! the square-full indicator.

use super::{FieldCtx, MonicIter, Poly};

/// f = unit * prod factors[i].0 ^ factors[i].1, factors monic irreducible,
/// sorted by degree then coefficient order, pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u64,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn to_poly(&self, ctx: &FieldCtx) -> Poly {
        let mut acc = Poly::constant(ctx, self.unit);
        for (p, m) in &self.factors {
            acc = acc.mul(&p.pow(*m as u64, ctx), ctx);
        }
        acc
    }

    /// Every irreducible factor has multiplicity >= 2.  Units and constants
    /// are square-full (the empty product).
    pub fn is_squarefull(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m >= 2)
    }
}

/// Monic irreducibles enumerated degree by degree: a monic polynomial is kept
/// when no previously found irreducible of at most half its degree divides
/// it.  Enumeration order within a degree is the canonical index order.
pub struct IrreducibleSieve {
    ctx: FieldCtx,
    by_degree: Vec<Vec<Poly>>,
}

impl IrreducibleSieve {
    pub fn new(ctx: &FieldCtx) -> Self {
        IrreducibleSieve {
            ctx: *ctx,
            by_degree: vec![Vec::new()], // degree 0: none
        }
    }

    /// Irreducibles of exactly degree d, extending the sieve on demand.
    pub fn of_degree(&mut self, d: usize) -> &[Poly] {
        while self.by_degree.len() <= d {
            let next = self.by_degree.len();
            let found = self.sieve_degree(next);
            self.by_degree.push(found);
        }
        &self.by_degree[d]
    }

    fn sieve_degree(&self, d: usize) -> Vec<Poly> {
        let ctx = self.ctx;
        let mut found = Vec::new();
        MonicIter::new(&ctx, d).visit(|f| {
            let mut composite = false;
            'outer: for step in 1..=d / 2 {
                for p in &self.by_degree[step] {
                    if f.rem(p, &ctx).unwrap().is_zero() {
                        composite = true;
                        break 'outer;
                    }
                }
            }
            if !composite {
                found.push(f.clone());
            }
        });
        found
    }
}

/// Squarefree decomposition f = unit * prod g_i^{m_i} with the g_i monic,
/// squarefree, pairwise coprime, and m_i the exact multiplicity of every
/// irreducible dividing g_i.  Handles multiplicities divisible by p through
/// p-th roots (on F_p coefficients the root is the identity).
pub fn squarefree_decomposition(f: &Poly, ctx: &FieldCtx) -> (u64, Vec<(Poly, u32)>) {
    assert!(!f.is_zero(), "zero polynomial has no factorization");
    let unit = f.leading_coeff();
    let monic = f.make_monic(ctx);
    let mut parts = Vec::new();
    sqf_inner(&monic, 1, ctx, &mut parts);
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    (unit, parts)
}

fn sqf_inner(f: &Poly, mult_scale: u32, ctx: &FieldCtx, out: &mut Vec<(Poly, u32)>) {
    if f.is_constant() {
        return;
    }
    let fp = f.derivative(ctx);
    if fp.is_zero() {
        let g = pth_root(f, ctx);
        sqf_inner(&g, mult_scale * ctx.q() as u32, ctx, out);
        return;
    }
    // c picks up P^{e-1} for p∤e and P^e for p|e; w = f/c is the product of
    // the distinct P with p∤e.
    let mut c = f.gcd(&fp, ctx);
    let mut w = f.divrem(&c, ctx).unwrap().0;
    let mut i = 1u32;
    while !w.is_constant() {
        let y = w.gcd(&c, ctx);
        let part = w.divrem(&y, ctx).unwrap().0;
        if !part.is_constant() {
            out.push((part, i * mult_scale));
        }
        w = y;
        c = c.divrem(&w, ctx).unwrap().0;
        i += 1;
    }
    if !c.is_constant() {
        // all remaining multiplicities are divisible by p
        let g = pth_root(&c, ctx);
        sqf_inner(&g, mult_scale * ctx.q() as u32, ctx, out);
    }
}

/// For f with f' = 0: f(T) = g(T)^p where g takes every p-th coefficient
/// (coefficient p-th roots are the identity on F_p).
fn pth_root(f: &Poly, ctx: &FieldCtx) -> Poly {
    let p = ctx.q() as usize;
    let coeffs: Vec<u64> = f.coeffs().iter().step_by(p).copied().collect();
    debug_assert!(f
        .coeffs()
        .iter()
        .enumerate()
        .all(|(i, &c)| i % p == 0 || c == 0));
    Poly::from_raw(coeffs)
}

/// Full factorization: squarefree decomposition first, then trial division
/// of each squarefree part against sieved irreducibles up to half its degree.
pub fn factor(f: &Poly, ctx: &FieldCtx, sieve: &mut IrreducibleSieve) -> Factorization {
    let (unit, parts) = squarefree_decomposition(f, ctx);
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (g, mult) in parts {
        split_squarefree(&g, mult, ctx, sieve, &mut factors);
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Factorization { unit, factors }
}

fn split_squarefree(
    g: &Poly,
    mult: u32,
    ctx: &FieldCtx,
    sieve: &mut IrreducibleSieve,
    out: &mut Vec<(Poly, u32)>,
) {
    let mut rest = g.clone();
    let mut d = 1usize;
    while rest.degree().unwrap_or(0) >= 2 * d {
        for p in sieve.of_degree(d).to_vec() {
            if rest.is_constant() {
                break;
            }
            let (quot, rem) = rest.divrem(&p, ctx).unwrap();
            if rem.is_zero() {
                out.push((p, mult));
                rest = quot; // g squarefree: each irreducible divides once
            }
        }
        d += 1;
    }
    if !rest.is_constant() {
        out.push((rest, mult));
    }
}

pub fn is_irreducible(f: &Poly, ctx: &FieldCtx, sieve: &mut IrreducibleSieve) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(d) => {
            let monic = f.make_monic(ctx);
            for step in 1..=d / 2 {
                for p in sieve.of_degree(step).to_vec() {
                    if monic.rem(&p, ctx).unwrap().is_zero() {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// True when every irreducible factor P of f has P^2 | f; nonzero constants
/// count as square-full.  Avoids full factorization: with c = gcd(f, f') and
/// w = f/c, the multiplicity-one factors are exactly the irreducibles
/// dividing w but not c, so f is square-full iff w | c.
pub fn is_squarefull(f: &Poly, ctx: &FieldCtx) -> bool {
    assert!(!f.is_zero(), "zero polynomial is not classified");
    if f.is_constant() {
        return true;
    }
    let fp = f.derivative(ctx);
    if fp.is_zero() {
        // f = g^p with p >= 3: every multiplicity is a multiple of p
        return true;
    }
    let c = f.gcd(&fp, ctx);
    if c.is_constant() {
        return false; // squarefree of positive degree
    }
    let w = f.divrem(&c, ctx).unwrap().0;
    if w.is_constant() {
        return true;
    }
    c.rem(&w, ctx).unwrap().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::parse_poly;

    fn f3() -> FieldCtx {
        FieldCtx::new(3).unwrap()
    }

    fn p(ctx: &FieldCtx, s: &str) -> Poly {
        parse_poly(ctx, s).unwrap()
    }

    /// Oracle: irreducible iff no monic polynomial of degree 1..=d/2 divides.
    fn irreducible_by_exhaustion(f: &Poly, ctx: &FieldCtx) -> bool {
        let d = match f.degree() {
            None | Some(0) => return false,
            Some(d) => d,
        };
        for step in 1..=d / 2 {
            let mut divides = false;
            MonicIter::new(ctx, step).visit(|g| {
                if f.rem(g, ctx).unwrap().is_zero() {
                    divides = true;
                }
            });
            if divides {
                return false;
            }
        }
        true
    }

    #[test]
    fn sieve_matches_exhaustive_irreducibility_and_counts() {
        let ctx = f3();
        let mut sieve = IrreducibleSieve::new(&ctx);
        // Gauss: counts of monic irreducibles over F_3 by degree
        assert_eq!(sieve.of_degree(1).len(), 3);
        assert_eq!(sieve.of_degree(2).len(), 3);
        assert_eq!(sieve.of_degree(3).len(), 8);
        assert_eq!(sieve.of_degree(4).len(), 18);
        for d in 1..=4 {
            for f in sieve.of_degree(d).to_vec() {
                assert!(irreducible_by_exhaustion(&f, &ctx), "{f}");
            }
        }
    }

    #[test]
    fn quadratic_without_roots_is_irreducible_mod_3() {
        let ctx = f3();
        let mut sieve = IrreducibleSieve::new(&ctx);
        let f = p(&ctx, "T^2+1");
        assert!((0..3).all(|x| f.eval(x, &ctx) != 0));
        assert!(is_irreducible(&f, &ctx, &mut sieve));
        let fact = factor(&f, &ctx, &mut sieve);
        assert_eq!(fact.factors, vec![(f.clone(), 1)]);
    }

    #[test]
    fn frozen_factorizations_mod_3() {
        let ctx = f3();
        let mut sieve = IrreducibleSieve::new(&ctx);
        // T^2 = (T)^2
        let f = p(&ctx, "T^2");
        assert_eq!(
            factor(&f, &ctx, &mut sieve).factors,
            vec![(Poly::x(), 2)]
        );
        // T^3 + T^2 = (T)^2 (T+1)
        let f = p(&ctx, "T^3+T^2");
        assert_eq!(
            factor(&f, &ctx, &mut sieve).factors,
            vec![(Poly::x(), 2), (p(&ctx, "T+1"), 1)]
        );
    }

    #[test]
    fn pth_power_multiplicities() {
        let ctx = f3();
        let mut sieve = IrreducibleSieve::new(&ctx);
        // (T+1)^3 has zero derivative mod 3
        let f = p(&ctx, "T+1").pow(3, &ctx);
        assert!(f.derivative(&ctx).is_zero());
        assert_eq!(
            factor(&f, &ctx, &mut sieve).factors,
            vec![(p(&ctx, "T+1"), 3)]
        );
        // (T+1)^3 (T+2)^6 mixes p-power multiplicities
        let g = f.mul(&p(&ctx, "T+2").pow(6, &ctx), &ctx);
        assert_eq!(
            factor(&g, &ctx, &mut sieve).factors,
            vec![(p(&ctx, "T+1"), 3), (p(&ctx, "T+2"), 6)]
        );
    }

    #[test]
    fn squarefull_examples() {
        let ctx = f3();
        let t2 = p(&ctx, "T^2");
        let t1sq = p(&ctx, "T+1").pow(2, &ctx);
        assert!(is_squarefull(&t2.mul(&t1sq, &ctx), &ctx));
        assert!(!is_squarefull(&t2.mul(&p(&ctx, "T+1"), &ctx), &ctx));
        assert!(is_squarefull(&Poly::one(), &ctx));
        assert!(is_squarefull(&p(&ctx, "2"), &ctx));
        assert!(!is_squarefull(&Poly::x(), &ctx));
    }

    #[test]
    fn squarefull_agrees_with_factorization() {
        // exhaustive cross-check on all monic f with deg <= 6 over F_3
        let ctx = f3();
        let mut sieve = IrreducibleSieve::new(&ctx);
        for d in 0..=6 {
            MonicIter::new(&ctx, d).visit(|f| {
                let via_factor = factor(f, &ctx, &mut sieve).is_squarefull();
                assert_eq!(is_squarefull(f, &ctx), via_factor, "{f}");
            });
        }
    }

    #[test]
    fn factorization_reconstructs_input() {
        let ctx = FieldCtx::new(5).unwrap();
        let mut sieve = IrreducibleSieve::new(&ctx);
        for d in 1..=5 {
            MonicIter::range(&ctx, d, 0, monic_cap(&ctx, d)).visit(|f| {
                let fact = factor(f, &ctx, &mut sieve);
                assert_eq!(&fact.to_poly(&ctx), f, "{f}");
                for w in fact.factors.windows(2) {
                    assert!(w[0].0 < w[1].0, "ordering of factors");
                }
                for (p, _) in &fact.factors {
                    assert!(is_irreducible(p, &ctx, &mut sieve), "{p}");
                }
            });
        }
        // non-monic unit capture
        let f = parse_poly(&ctx, "2T^2+2").unwrap();
        let fact = factor(&f, &ctx, &mut sieve);
        assert_eq!(fact.unit, 2);
        assert_eq!(fact.to_poly(&ctx), f);
    }

    fn monic_cap(ctx: &FieldCtx, d: usize) -> u64 {
        crate::field_poly::monic_count(ctx, d).min(200)
    }
}
