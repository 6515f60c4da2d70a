//! The unit group (F_q[T]/Q)^x and its Dirichlet characters.
//!
//! The group is split by CRT into prime-power components P^a.  Each component
//! is the direct product of a cyclic part of order q^d - 1 (d = deg P),
//! generated by a lifted generator of the residue field, and the principal
//! units 1 + P R, a p-group with the explicit basis
//! `1 + T^j P^i mod P^a` for `0 <= j < d`, `1 <= i < a`, p not dividing i,
//! where such a basis element has exact order p^e, e minimal with i p^e >= a (in
//! characteristic p, (1+x)^p = 1+x^p).  Discrete logs use baby-step/giant-step
//! in the residue field and filtration peeling for principal units, with a
//! memoized table of already-resolved residues.
//!
//! Character values are exact roots of unity exp(2 pi i k / L), carried as
//! the integer pair (k, L) with L the exponent lcm; conversion to complex
//! doubles happens only at summation time.

mod character;

pub use character::{
    char_stats, orthogonality_check, CharStats, CharValue, Character, OrthogonalityReport,
};

use crate::field_poly::{factor, FieldCtx, IrreducibleSieve, Poly};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharGroupError {
    #[error("modulus must be nonconstant (characters mod a unit are trivial)")]
    ConstantModulus,
    #[error("group scale exceeds supported range: {0}")]
    ScaleExceeded(String),
    #[error("character evaluation requires the trivial character to be excluded: {0}")]
    TrivialCharacter(String),
}

/// The largest root-of-unity order for which a value table is precomputed.
const ROOT_TABLE_CAP: u64 = 1 << 20;

struct PUnitGen {
    elem: Poly, // 1 + T^j P^i mod P^a
    level: u32, // i
    order: u64, // p^e
}

/// Per-t inverse of the matrix whose columns are T^{j p^t} mod P: maps a
/// residue-field element to its coordinates in the Frobenius-twisted basis.
struct LevelSolve {
    inv: Vec<Vec<u64>>, // d x d over F_q
}

struct Component {
    prime: Poly,
    exponent: u32,
    modulus: Poly, // P^a
    prime_powers: Vec<Poly>, // P^0..P^a
    cyclic_gen: Poly, // order q^d - 1 mod P^a
    cyclic_order: u64,
    baby: HashMap<Poly, u64>,
    baby_m: u64,
    giant: Poly, // g^{-baby_m} mod P
    punit_gens: Vec<PUnitGen>,
    level_solve: Vec<LevelSolve>, // indexed by t
}

pub struct UnitGroup {
    ctx: FieldCtx,
    modulus: Poly,
    components: Vec<Component>,
    generators: Vec<Poly>, // CRT-lifted to mod Q, aligned with orders
    orders: Vec<u64>,
    totient: u64,
    value_order: u64, // L = lcm of orders
    root_table: Vec<Complex64>,
    /// dlog of a fixed generator of F_q^x, for O(1) evenness tests.
    const_gen_dlog: Vec<u64>,
    /// For each maximal proper divisor Q/P_i: dlogs of the units in
    /// {f = 1 + t (Q/P_i)}.  Empty when Q is prime (divisor 1: the subgroup
    /// is everything, and primitivity degenerates to nontriviality).
    subgroup_dlogs: Vec<Vec<Arc<Vec<u64>>>>,
    prime_modulus: bool,
    dlog_cache: RwLock<HashMap<Poly, Arc<Vec<u64>>>>,
}

impl UnitGroup {
    pub fn new(ctx: &FieldCtx, modulus: &Poly) -> Result<Self, CharGroupError> {
        if modulus.degree().unwrap_or(0) == 0 {
            return Err(CharGroupError::ConstantModulus);
        }
        let q = ctx.q();
        let modulus = modulus.make_monic(ctx);
        let mut sieve = IrreducibleSieve::new(ctx);
        let factorization = factor(&modulus, ctx, &mut sieve);

        let mut components = Vec::new();
        for &(ref prime, a) in &factorization.factors {
            components.push(Component::build(ctx, prime, a)?);
        }

        // CRT-lift every component generator to mod Q.
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        for comp in &components {
            let rest = modulus.divrem(&comp.modulus, ctx).unwrap().0;
            // idempotent e = rest * (rest^{-1} mod P^a): 1 mod P^a, 0 elsewhere
            let (g, s, _) = ext_gcd(&rest, &comp.modulus, ctx);
            assert!(g.is_one(), "CRT parts must be coprime");
            let idem = rest.mul(&s, ctx).rem(&modulus, ctx).unwrap();
            let lift = |x: &Poly| -> Poly {
                let shifted = x.sub(&Poly::one(), ctx);
                idem.mul(&shifted, ctx)
                    .add(&Poly::one(), ctx)
                    .rem(&modulus, ctx)
                    .unwrap()
            };
            generators.push(lift(&comp.cyclic_gen));
            orders.push(comp.cyclic_order);
            for pg in &comp.punit_gens {
                generators.push(lift(&pg.elem));
                orders.push(pg.order);
            }
        }

        let totient = orders
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| CharGroupError::ScaleExceeded("totient overflows u64".into()))?;
        let value_order = orders
            .iter()
            .try_fold(1u64, |acc, &d| checked_lcm(acc, d))
            .ok_or_else(|| CharGroupError::ScaleExceeded("exponent lcm overflows u64".into()))?;

        let root_table = if value_order <= ROOT_TABLE_CAP {
            (0..value_order)
                .map(|k| root_of_unity(k, value_order))
                .collect()
        } else {
            Vec::new()
        };

        let prime_modulus = factorization.factors.len() == 1 && factorization.factors[0].1 == 1;

        let mut group = UnitGroup {
            ctx: *ctx,
            modulus,
            components,
            generators,
            orders,
            totient,
            value_order,
            root_table,
            const_gen_dlog: Vec::new(),
            subgroup_dlogs: Vec::new(),
            prime_modulus,
            dlog_cache: RwLock::new(HashMap::new()),
        };

        // Sanity: product of component shares equals the totient.
        let phi_check: u64 = group
            .components
            .iter()
            .map(|c| {
                let d = c.prime.degree().unwrap() as u32;
                c.cyclic_order * q.pow(d * (c.exponent - 1))
            })
            .product();
        assert_eq!(phi_check, totient, "component orders inconsistent");

        let cg = primitive_root(q);
        group.const_gen_dlog = group
            .dlog(&Poly::constant(ctx, cg))
            .expect("field generator is a unit")
            .to_vec();

        if !prime_modulus {
            let primes: Vec<Poly> = factorization.factors.iter().map(|f| f.0.clone()).collect();
            for p in &primes {
                let q_div = group.modulus.divrem(p, ctx).unwrap().0;
                let dp = p.degree().unwrap();
                let mut dlogs = Vec::new();
                for k in 0..ctx.q().pow(dp as u32) {
                    let t = residue_by_index(ctx, dp, k);
                    let f = t
                        .mul(&q_div, ctx)
                        .add(&Poly::one(), ctx)
                        .rem(&group.modulus, ctx)
                        .unwrap();
                    if let Some(x) = group.dlog(&f) {
                        dlogs.push(x);
                    }
                }
                group.subgroup_dlogs.push(dlogs);
            }
        }

        Ok(group)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Phi(Q), the unit group order.
    pub fn totient(&self) -> u64 {
        self.totient
    }

    /// CRT-lifted generators g_i mod Q with the group = direct product of
    /// the <g_i>.
    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// L: every character value is a power of exp(2 pi i / L).
    pub fn value_order(&self) -> u64 {
        self.value_order
    }

    pub fn is_prime_modulus(&self) -> bool {
        self.prime_modulus
    }

    /// Distinct monic prime factors of Q with multiplicities.
    pub fn prime_factors(&self) -> Vec<(Poly, u32)> {
        self.components
            .iter()
            .map(|c| (c.prime.clone(), c.exponent))
            .collect()
    }

    /// All invertible residues mod Q, in the canonical residue enumeration
    /// order (coefficient vectors read as base-q digits).
    pub fn units(&self) -> Vec<Poly> {
        let d = self.modulus.degree().unwrap();
        let mut out = Vec::with_capacity(self.totient as usize);
        for k in 0..self.ctx.q().pow(d as u32) {
            let f = residue_by_index(&self.ctx, d, k);
            if self.is_unit(&f) {
                out.push(f);
            }
        }
        out
    }

    pub fn is_unit(&self, f: &Poly) -> bool {
        let r = f.rem(&self.modulus, &self.ctx).unwrap();
        if r.is_zero() {
            return false;
        }
        self.components
            .iter()
            .all(|c| !r.rem(&c.prime, &self.ctx).unwrap().is_zero())
    }

    /// Exponent vector x with f = prod g_i^{x_i} mod Q, or None for
    /// non-units.  Results are memoized per residue.
    pub fn dlog(&self, f: &Poly) -> Option<Arc<Vec<u64>>> {
        let r = f.rem(&self.modulus, &self.ctx).unwrap();
        if let Some(hit) = self.dlog_cache.read().unwrap().get(&r) {
            return Some(hit.clone());
        }
        let mut exps = Vec::with_capacity(self.orders.len());
        for comp in &self.components {
            comp.dlog(&self.ctx, &r, &mut exps)?;
        }
        let arc = Arc::new(exps);
        self.dlog_cache
            .write()
            .unwrap()
            .insert(r, arc.clone());
        Some(arc)
    }

    /// exp(2 pi i k / L) from the precomputed table (or directly when the
    /// order exceeds the table cap).
    #[inline]
    pub fn root(&self, k: u64) -> Complex64 {
        if self.root_table.is_empty() {
            root_of_unity(k, self.value_order)
        } else {
            self.root_table[k as usize]
        }
    }
}

impl Component {
    fn build(ctx: &FieldCtx, prime: &Poly, a: u32) -> Result<Self, CharGroupError> {
        let q = ctx.q();
        let d = prime.degree().unwrap() as u32;
        let cyclic_order = q
            .checked_pow(d)
            .and_then(|x| x.checked_sub(1))
            .ok_or_else(|| CharGroupError::ScaleExceeded("residue field too large".into()))?;

        let mut prime_powers = vec![Poly::one()];
        for _ in 0..a {
            prime_powers.push(prime_powers.last().unwrap().mul(prime, ctx));
        }
        let modulus = prime_powers[a as usize].clone();

        let gen_mod_p = find_field_generator(ctx, prime, cyclic_order);

        // Lift: raising any lift to the power |principal units| kills the
        // p-part and fixes the image mod P, giving an exact complement.
        let cyclic_gen = if a == 1 {
            gen_mod_p.clone()
        } else {
            let punit_order = q
                .checked_pow(d * (a - 1))
                .ok_or_else(|| CharGroupError::ScaleExceeded("principal unit order".into()))?;
            gen_mod_p.pow_mod(punit_order, &modulus, ctx)
        };

        // BSGS tables for the residue field.
        let baby_m = (cyclic_order as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(baby_m as usize);
        let mut acc = Poly::one();
        for idx in 0..baby_m {
            baby.entry(acc.clone()).or_insert(idx);
            acc = acc.mul(&gen_mod_p, ctx).rem(prime, ctx).unwrap();
        }
        let giant = gen_mod_p.pow_mod(cyclic_order - baby_m % cyclic_order, prime, ctx);

        let p = q as u32;
        let mut punit_gens = Vec::new();
        for i in 1..a {
            if i % p == 0 {
                continue;
            }
            let mut e = 0u32;
            let mut reach = i as u64;
            while reach < a as u64 {
                reach *= q;
                e += 1;
            }
            let order = q.pow(e);
            for j in 0..d {
                let elem = Poly::monomial(j as usize)
                    .mul(&prime_powers[i as usize], ctx)
                    .add(&Poly::one(), ctx)
                    .rem(&modulus, ctx)
                    .unwrap();
                punit_gens.push(PUnitGen {
                    elem,
                    level: i,
                    order,
                });
            }
        }

        // For each Frobenius power t, invert the matrix with columns
        // T^{j p^t} mod P so level contributions can be expressed in the
        // generator basis.
        let mut max_t = 0u32;
        {
            let mut reach = 1u64;
            while reach < a as u64 {
                reach *= q;
                max_t += 1;
            }
        }
        let mut level_solve = Vec::new();
        for t in 0..max_t.max(1) {
            let mut cols = Vec::new();
            let pw = pow_u64(q, t);
            for j in 0..d {
                let col = Poly::monomial(j as usize).pow_mod(pw, prime, ctx); // T^{j p^t} mod P
                let mut v = col.coeffs().to_vec();
                v.resize(d as usize, 0);
                cols.push(v);
            }
            let inv = invert_matrix(ctx, &cols)
                .expect("Frobenius images of a basis form a basis");
            level_solve.push(LevelSolve { inv });
        }

        Ok(Component {
            prime: prime.clone(),
            exponent: a,
            modulus,
            prime_powers,
            cyclic_gen,
            cyclic_order,
            baby,
            baby_m,
            giant,
            punit_gens,
            level_solve,
        })
    }

    /// Appends this component's exponents for f (reduced mod Q) to `out`.
    fn dlog(&self, ctx: &FieldCtx, f: &Poly, out: &mut Vec<u64>) -> Option<()> {
        let fc = f.rem(&self.modulus, ctx).unwrap();
        let fp = fc.rem(&self.prime, ctx).unwrap();
        if fp.is_zero() {
            return None;
        }
        let x0 = self.bsgs(ctx, &fp);
        out.push(x0);
        if self.exponent == 1 {
            return Some(());
        }

        // Strip the cyclic part, peel principal-unit filtration levels.
        let mut v = self
            .cyclic_gen
            .pow_mod(self.cyclic_order - x0 % self.cyclic_order, &self.modulus, ctx)
            .mul(&fc, ctx)
            .rem(&self.modulus, ctx)
            .unwrap();
        let d = self.prime.degree().unwrap();
        let q = ctx.q();
        let mut exps: HashMap<(u32, u32), u64> = HashMap::new();
        for m in 1..self.exponent {
            // v = 1 + w P^m mod P^{m+1}
            let shifted = v.sub(&Poly::one(), ctx);
            let w = shifted
                .divrem(&self.prime_powers[m as usize], ctx)
                .unwrap()
                .0
                .rem(&self.prime, ctx)
                .unwrap();
            if w.is_zero() {
                continue;
            }
            // m = i p^t with p not dividing i
            let mut i = m;
            let mut t = 0u32;
            while i % q as u32 == 0 {
                i /= q as u32;
                t += 1;
            }
            let solve = &self.level_solve[t as usize];
            let mut wv = w.coeffs().to_vec();
            wv.resize(d, 0);
            let beta = mat_vec(ctx, &solve.inv, &wv);
            let step = pow_u64(q, t);
            for (j, &b) in beta.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                *exps.entry((i, j as u32)).or_insert(0) += b * step;
                // divide out (1 + T^j P^i)^{b p^t}
                let gen = &self.punit_gens[self.punit_index(i, j as u32)];
                let inv_pow = gen.order - (b * step) % gen.order;
                v = gen
                    .elem
                    .pow_mod(inv_pow, &self.modulus, ctx)
                    .mul(&v, ctx)
                    .rem(&self.modulus, ctx)
                    .unwrap();
            }
        }
        debug_assert!(v.is_one(), "filtration peel must terminate at 1");
        for (idx, g) in self.punit_gens.iter().enumerate() {
            let j = idx as u32 % self.prime.degree().unwrap() as u32;
            out.push(*exps.get(&(g.level, j)).unwrap_or(&0) % g.order);
        }
        Some(())
    }

    fn punit_index(&self, i: u32, j: u32) -> usize {
        self.punit_gens
            .iter()
            .position(|g| g.level == i)
            .expect("level present")
            + j as usize
    }

    fn bsgs(&self, ctx: &FieldCtx, f: &Poly) -> u64 {
        let mut gamma = f.clone();
        for step in 0..=self.baby_m {
            if let Some(&j) = self.baby.get(&gamma) {
                return (step * self.baby_m + j) % self.cyclic_order;
            }
            gamma = gamma.mul(&self.giant, ctx).rem(&self.prime, ctx).unwrap();
        }
        unreachable!("unit has a discrete log");
    }
}

/// Smallest generator of the residue field (F_q[T]/P)^x in residue
/// enumeration order.
fn find_field_generator(ctx: &FieldCtx, prime: &Poly, order: u64) -> Poly {
    let prime_factors = factor_u64(order);
    let d = prime.degree().unwrap();
    let total = ctx.q().pow(d as u32);
    for k in 1..total {
        let cand = residue_by_index(ctx, d, k);
        if prime_factors
            .iter()
            .all(|&r| !cand.pow_mod(order / r, prime, ctx).is_one())
        {
            return cand;
        }
    }
    unreachable!("finite field has a multiplicative generator");
}

/// k-th residue of degree < d: base-q digits of k, least significant = c_0.
fn residue_by_index(ctx: &FieldCtx, d: usize, k: u64) -> Poly {
    let q = ctx.q();
    let mut coeffs = vec![0u64; d];
    let mut rest = k;
    for c in coeffs.iter_mut() {
        *c = rest % q;
        rest /= q;
    }
    Poly::from_raw(coeffs)
}

/// Smallest primitive root mod q.
pub(crate) fn primitive_root(q: u64) -> u64 {
    let order = q - 1;
    let fac = factor_u64(order);
    'cand: for g in 2..q {
        for &r in &fac {
            if pow_mod_u64(g, order / r, q) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("prime field has a primitive root");
}

pub(crate) fn factor_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn pow_u64(b: u64, e: u32) -> u64 {
    b.checked_pow(e).expect("exponent within u64")
}

fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    (a / gcd_u64(a, b)).checked_mul(b)
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn root_of_unity(k: u64, order: u64) -> Complex64 {
    let angle = 2.0 * std::f64::consts::PI * (k as f64) / (order as f64);
    Complex64::new(angle.cos(), angle.sin())
}

/// Extended gcd: returns (g, s, t) monic g with s a + t b = g.
fn ext_gcd(a: &Poly, b: &Poly, ctx: &FieldCtx) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (quot, rem) = r0.divrem(&r1, ctx).unwrap();
        (r0, r1) = (r1, rem);
        (s0, s1) = (s1.clone(), s0.sub(&quot.mul(&s1, ctx), ctx));
        (t0, t1) = (t1.clone(), t0.sub(&quot.mul(&t1, ctx), ctx));
    }
    let lc = r0.leading_coeff();
    if lc > 1 {
        let inv = ctx.inv(lc);
        r0 = r0.scale(inv, ctx);
        s0 = s0.scale(inv, ctx);
        t0 = t0.scale(inv, ctx);
    }
    (r0, s0, t0)
}

/// Inverse of a d x d matrix over F_q given as a list of columns.
fn invert_matrix(ctx: &FieldCtx, cols: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let d = cols.len();
    // rows of [A | I]
    let mut aug: Vec<Vec<u64>> = (0..d)
        .map(|r| {
            let mut row: Vec<u64> = (0..d).map(|c| cols[c][r]).collect();
            row.extend((0..d).map(|c| u64::from(c == r)));
            row
        })
        .collect();
    for col in 0..d {
        let pivot = (col..d).find(|&r| aug[r][col] != 0)?;
        aug.swap(col, pivot);
        let inv = ctx.inv(aug[col][col]);
        for x in aug[col].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for r in 0..d {
            if r != col && aug[r][col] != 0 {
                let f = aug[r][col];
                for c in 0..2 * d {
                    let sub = ctx.mul(f, aug[col][c]);
                    aug[r][c] = ctx.sub(aug[r][c], sub);
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[d..].to_vec()).collect())
}

fn mat_vec(ctx: &FieldCtx, m: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0u64, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)))
        })
        .collect()
}
