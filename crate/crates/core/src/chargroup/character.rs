//! Characters of (F_q[T]/Q)^x as exponent vectors against the group basis.

use super::{gcd_u64, CharGroupError, UnitGroup};
use crate::field_poly::Poly;
use num_complex::Complex64;
use serde::Serialize;
use std::fmt;

/// An exact character value: zero on non-units, otherwise the root of unity
/// exp(2 pi i num / order) with `order` the group's exponent lcm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Root { num: u64, order: u64 },
}

impl CharValue {
    pub fn to_c64(self, group: &UnitGroup) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root { num, .. } => group.root(num),
        }
    }

    pub fn is_one(self) -> bool {
        matches!(self, CharValue::Root { num: 0, .. })
    }
}

/// A character, identified by its exponent vector (e_1,...,e_r) against the
/// group generators: chi(g_i) = exp(2 pi i e_i / d_i).  The classification
/// flags are computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    exps: Vec<u64>,
    even: bool,
    primitive: bool,
    order: u64,
}

impl Character {
    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_odd(&self) -> bool {
        !self.even
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// Multiplicative order: least k >= 1 with chi^k trivial.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Root index of the value on an element with discrete log `x`:
    /// k with chi(f) = exp(2 pi i k / L), L = group.value_order().
    #[inline]
    pub fn root_index(&self, group: &UnitGroup, x: &[u64]) -> u64 {
        let l = group.value_order();
        let mut acc: u128 = 0;
        for ((&e, &xi), &d) in self.exps.iter().zip(x).zip(group.orders()) {
            acc = (acc + (e as u128) * (xi as u128) * ((l / d) as u128)) % l as u128;
        }
        acc as u64
    }

    pub fn value(&self, group: &UnitGroup, f: &Poly) -> CharValue {
        match group.dlog(f) {
            None => CharValue::Zero,
            Some(x) => CharValue::Root {
                num: self.root_index(group, &x),
                order: group.value_order(),
            },
        }
    }

    pub fn value_c64(&self, group: &UnitGroup, f: &Poly) -> Complex64 {
        self.value(group, f).to_c64(group)
    }

    /// chi^d, exponentwise.
    pub fn power(&self, group: &UnitGroup, d: u64) -> Character {
        let exps = self
            .exps
            .iter()
            .zip(group.orders())
            .map(|(&e, &di)| ((e as u128 * d as u128) % di as u128) as u64)
            .collect();
        group.character_from_exponents(exps).unwrap()
    }

    /// Pointwise product chi * psi.
    pub fn mul(&self, group: &UnitGroup, other: &Character) -> Character {
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .zip(group.orders())
            .map(|((&a, &b), &d)| (a + b) % d)
            .collect();
        group.character_from_exponents(exps).unwrap()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi[")?;
        for (i, e) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

impl UnitGroup {
    pub fn character_from_exponents(&self, exps: Vec<u64>) -> Result<Character, CharGroupError> {
        if exps.len() != self.orders().len()
            || exps.iter().zip(self.orders()).any(|(&e, &d)| e >= d)
        {
            return Err(CharGroupError::ScaleExceeded(format!(
                "exponent vector {exps:?} does not match generator orders {:?}",
                self.orders()
            )));
        }
        let order = exps
            .iter()
            .zip(self.orders())
            .fold(1u64, |acc, (&e, &d)| {
                let k = d / gcd_u64(e, d); // order of g^e in <g>; gcd(0, d) = d
                acc / gcd_u64(acc, k) * k
            });
        let even = {
            let l = self.value_order();
            let mut acc: u128 = 0;
            for ((&e, &xi), &d) in exps.iter().zip(&self.const_gen_dlog).zip(self.orders()) {
                acc = (acc + (e as u128) * (xi as u128) * ((l / d) as u128)) % l as u128;
            }
            acc == 0
        };
        let trivial = exps.iter().all(|&e| e == 0);
        let primitive = if self.is_prime_modulus() {
            !trivial
        } else {
            // nontrivial on {f = 1 mod Q/P} for every prime P | Q
            self.subgroup_dlogs.iter().all(|subgroup| {
                subgroup.iter().any(|x| {
                    let l = self.value_order();
                    let mut acc: u128 = 0;
                    for ((&e, &xi), &d) in exps.iter().zip(x.iter()).zip(self.orders()) {
                        acc = (acc + (e as u128) * (xi as u128) * ((l / d) as u128)) % l as u128;
                    }
                    acc != 0
                })
            })
        };
        Ok(Character {
            exps,
            even,
            primitive,
            order,
        })
    }

    pub fn trivial_character(&self) -> Character {
        self.character_from_exponents(vec![0; self.orders().len()])
            .unwrap()
    }

    /// All Phi(Q) characters in lexicographic exponent order (last coordinate
    /// fastest), so the trivial character comes first.
    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        let orders = self.orders().to_vec();
        (0..self.totient()).map(move |k| {
            let mut exps = vec![0u64; orders.len()];
            let mut rest = k;
            for (e, &d) in exps.iter_mut().zip(&orders).rev() {
                *e = rest % d;
                rest /= d;
            }
            self.character_from_exponents(exps).unwrap()
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrthogonalityReport {
    /// Pairs (chi, psi) tested against (1/Phi) sum_A conj(chi(A)) psi(A).
    pub character_pairs: u64,
    /// Pairs (A, N) tested against (1/Phi) sum_chi conj(chi(A)) chi(N).
    pub residue_pairs: u64,
    pub max_character_deviation: f64,
    pub max_residue_deviation: f64,
}

impl OrthogonalityReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_character_deviation.max(self.max_residue_deviation)
    }
}

/// Checks both orthogonality relations by direct summation.  The number of
/// tested pairs is capped at `pair_budget` per relation; pairs are then
/// thinned by a fixed stride, so results stay deterministic.
pub fn orthogonality_check(group: &UnitGroup, pair_budget: u64) -> OrthogonalityReport {
    let ctx = group.ctx();
    let q = ctx.q();
    let deg = group.modulus().degree().unwrap();
    let mut units: Vec<Vec<u64>> = Vec::new();
    for k in 0..q.pow(deg as u32) {
        let f = super::residue_by_index(ctx, deg, k);
        if let Some(x) = group.dlog(&f) {
            units.push(x.to_vec());
        }
    }
    let phi = group.totient();
    assert_eq!(units.len() as u64, phi);
    let chars: Vec<Character> = group.characters().collect();

    let total_pairs = phi * phi;
    let stride = total_pairs.div_ceil(pair_budget).max(1);
    let inv_phi = 1.0 / phi as f64;

    let mut max_char = 0.0f64;
    let mut max_res = 0.0f64;
    let mut char_pairs = 0;
    let mut res_pairs = 0;
    let mut pair = 0;
    while pair < total_pairs {
        let (i, j) = ((pair / phi) as usize, (pair % phi) as usize);

        // sum over residues of conj(chi_i) chi_j
        let mut s = Complex64::new(0.0, 0.0);
        for x in &units {
            let a = chars[i].root_index(group, x);
            let b = chars[j].root_index(group, x);
            let l = group.value_order();
            s += group.root((l + b - a) % l);
        }
        let expect = if i == j { 1.0 } else { 0.0 };
        max_char = max_char.max((s * inv_phi - expect).norm());
        char_pairs += 1;

        // sum over characters of conj(chi(A)) chi(N)
        let mut s = Complex64::new(0.0, 0.0);
        for chi in &chars {
            let a = chi.root_index(group, &units[i]);
            let b = chi.root_index(group, &units[j]);
            let l = group.value_order();
            s += group.root((l + b - a) % l);
        }
        max_res = max_res.max((s * inv_phi - expect).norm());
        res_pairs += 1;

        pair += stride;
    }

    OrthogonalityReport {
        character_pairs: char_pairs,
        residue_pairs: res_pairs,
        max_character_deviation: max_char,
        max_residue_deviation: max_res,
    }
}

/// Census of the character group: evenness, primitivity, and the families
/// where a fixed power chi^d is primitive (and odd).
#[derive(Debug, Clone, Serialize)]
pub struct CharStats {
    pub total: u64,
    pub even: u64,
    pub odd: u64,
    pub primitive: u64,
    pub primitive_even: u64,
    pub primitive_odd: u64,
    /// (d, #chi with chi^d primitive)
    pub power_primitive: Vec<(u64, u64)>,
    /// (d, #chi with chi^d primitive and odd)
    pub power_primitive_odd: Vec<(u64, u64)>,
}

pub fn char_stats(group: &UnitGroup, powers: &[u64]) -> CharStats {
    let mut stats = CharStats {
        total: 0,
        even: 0,
        odd: 0,
        primitive: 0,
        primitive_even: 0,
        primitive_odd: 0,
        power_primitive: powers.iter().map(|&d| (d, 0)).collect(),
        power_primitive_odd: powers.iter().map(|&d| (d, 0)).collect(),
    };
    for chi in group.characters() {
        stats.total += 1;
        if chi.is_even() {
            stats.even += 1;
        } else {
            stats.odd += 1;
        }
        if chi.is_primitive() {
            stats.primitive += 1;
            if chi.is_even() {
                stats.primitive_even += 1;
            } else {
                stats.primitive_odd += 1;
            }
        }
        for (slot, &d) in stats
            .power_primitive
            .iter_mut()
            .zip(powers)
        {
            let pw = chi.power(group, d);
            if pw.is_primitive() {
                slot.1 += 1;
            }
        }
        for (slot, &d) in stats.power_primitive_odd.iter_mut().zip(powers) {
            let pw = chi.power(group, d);
            if pw.is_primitive() && pw.is_odd() {
                slot.1 += 1;
            }
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::{parse_poly, FieldCtx};
    use std::collections::HashSet;

    fn group(q: u64, m: &str) -> (FieldCtx, UnitGroup) {
        let ctx = FieldCtx::new(q).unwrap();
        let modulus = parse_poly(&ctx, m).unwrap();
        (ctx, UnitGroup::new(&ctx, &modulus).unwrap())
    }

    #[test]
    fn character_count_and_enumeration_order() {
        let (_, g) = group(3, "T^2+1");
        let chars: Vec<Character> = g.characters().collect();
        assert_eq!(chars.len(), 8);
        assert!(chars[0].is_trivial());
        let distinct: HashSet<Vec<u64>> =
            chars.iter().map(|c| c.exponents().to_vec()).collect();
        assert_eq!(distinct.len(), 8);
        // lexicographic on the single coordinate
        for (k, c) in chars.iter().enumerate() {
            assert_eq!(c.exponents(), &[k as u64]);
        }

        let (_, g5) = group(3, "T^5");
        assert_eq!(g5.characters().count(), 162);
    }

    #[test]
    fn even_character_count_mod_t5_is_81() {
        let (_, g) = group(3, "T^5");
        let even = g.characters().filter(|c| c.is_even()).count();
        assert_eq!(even, 81); // q^{m-1}
        assert_eq!(even as u64, g.totient() / (3 - 1)); // Phi / (q-1)
    }

    #[test]
    fn trivial_character_is_one_on_units_zero_elsewhere() {
        let (ctx, g) = group(3, "T^2+T");
        let chi0 = g.trivial_character();
        assert!(chi0.is_even());
        assert!(!chi0.is_primitive());
        for k in 0..9 {
            let f = super::super::residue_by_index(&ctx, 2, k);
            let v = chi0.value(&g, &f);
            if g.is_unit(&f) {
                assert!(v.is_one());
            } else {
                assert_eq!(v, CharValue::Zero);
            }
        }
    }

    #[test]
    fn values_are_periodic_and_multiplicative() {
        let (ctx, g) = group(3, "T^3");
        let chars: Vec<Character> = g.characters().collect();
        let fs: Vec<Poly> = (0..27)
            .map(|k| super::super::residue_by_index(&ctx, 3, k))
            .collect();
        let hs = [
            Poly::constant(&ctx, 1),
            Poly::constant(&ctx, 2),
            parse_poly(&ctx, "T+2").unwrap(),
        ];
        for chi in chars.iter().step_by(5) {
            for f in &fs {
                // period Q: f + h Q for a few h
                for h in &hs {
                    let shifted = f.add(&h.mul(g.modulus(), &ctx), &ctx);
                    let a = chi.value_c64(&g, f);
                    let b = chi.value_c64(&g, &shifted);
                    assert!((a - b).norm() < 1e-12);
                }
            }
            // multiplicative on units
            for f in fs.iter().filter(|f| g.is_unit(f)) {
                for h in fs.iter().filter(|h| g.is_unit(h)) {
                    let prod = f.mul(h, &ctx);
                    let lhs = chi.value_c64(&g, &prod);
                    let rhs = chi.value_c64(&g, f) * chi.value_c64(&g, h);
                    assert!((lhs - rhs).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn product_character_matches_pointwise_product() {
        let (ctx, g) = group(3, "T^2+T");
        let chars: Vec<Character> = g.characters().collect();
        let fs: Vec<Poly> = (0..9)
            .map(|k| super::super::residue_by_index(&ctx, 2, k))
            .collect();
        for a in &chars {
            for b in &chars {
                let ab = a.mul(&g, b);
                for f in &fs {
                    let lhs = ab.value_c64(&g, f);
                    let rhs = a.value_c64(&g, f) * b.value_c64(&g, f);
                    // both zero on non-units, roots of unity on units
                    assert!((lhs - rhs).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn quadratic_character_mod_prime_takes_pm_one() {
        let (ctx, g) = group(3, "T^2+1");
        let quad = g.character_from_exponents(vec![4]).unwrap(); // order 8/gcd(4,8)=2
        assert_eq!(quad.order(), 2);
        let mut seen_minus = false;
        for k in 0..9 {
            let f = super::super::residue_by_index(&ctx, 2, k);
            match quad.value(&g, &f) {
                CharValue::Zero => assert!(!g.is_unit(&f)),
                CharValue::Root { num, order } => {
                    assert!(num == 0 || num == order / 2);
                    seen_minus |= num == order / 2;
                }
            }
        }
        assert!(seen_minus);
    }

    #[test]
    fn nontrivial_characters_mod_prime_are_primitive() {
        let (_, g) = group(3, "T^2+1");
        for chi in g.characters() {
            assert_eq!(chi.is_primitive(), !chi.is_trivial());
        }
    }

    #[test]
    fn primitive_counts_for_split_squarefree_modulus() {
        // Q = T(T+1) over F_5: characters are pairs mod T and mod T+1;
        // primitive iff both components nontrivial.
        let (_, g) = group(5, "T^2+T");
        assert_eq!(g.totient(), 16);
        let stats = char_stats(&g, &[2, 3, 6]);
        assert_eq!(stats.total, 16);
        assert_eq!(stats.primitive, 9); // (q-2)^2
        assert_eq!(stats.even, 4); // Phi/(q-1)
        assert_eq!(stats.even + stats.odd, 16);
    }

    #[test]
    fn power_by_unit_exponent_permutes_characters() {
        let (_, g) = group(3, "T^3"); // Phi = 18
        for d in [5u64, 7, 11] {
            assert_eq!(gcd_u64(d, g.totient()), 1);
            let image: HashSet<Vec<u64>> = g
                .characters()
                .map(|c| c.power(&g, d).exponents().to_vec())
                .collect();
            assert_eq!(image.len() as u64, g.totient());
        }
    }

    #[test]
    fn quadratic_squares_to_trivial() {
        let (_, g) = group(3, "T^2+1");
        let quad = g.character_from_exponents(vec![4]).unwrap();
        assert!(quad.power(&g, 2).is_trivial());
    }

    #[test]
    fn even_power_primitivity_mod_prime_power_small_exponent() {
        // mod T^4 over F_3: for even chi and d = 2 < p, chi and chi^d are
        // primitive together.
        let (_, g) = group(3, "T^4");
        for chi in g.characters().filter(|c| c.is_even()) {
            let sq = chi.power(&g, 2);
            assert_eq!(chi.is_primitive(), sq.is_primitive(), "{chi}");
        }
    }

    #[test]
    fn orthogonality_relations_hold_exactly() {
        for (q, m) in [(3, "T^2+1"), (3, "T^2+T"), (5, "T^2")] {
            let (_, g) = group(q, m);
            let report = orthogonality_check(&g, u64::MAX);
            assert_eq!(report.character_pairs, g.totient() * g.totient());
            assert!(
                report.max_deviation() < 1e-10,
                "{m} mod {q}: {report:?}"
            );
        }
    }

    #[test]
    fn char_stats_power_families_on_prime_modulus() {
        // Phi = 8 cyclic: chi^2 primitive iff chi^2 nontrivial iff e not in {0,4}
        let (_, g) = group(3, "T^2+1");
        let stats = char_stats(&g, &[2, 3, 6]);
        assert_eq!(stats.power_primitive[0], (2, 6));
        // gcd(3,8)=1: chi^3 nontrivial iff chi nontrivial
        assert_eq!(stats.power_primitive[1], (3, 7));
        assert_eq!(stats.power_primitive[2], (6, 6));
    }
}
