//! SU(2) x SU(2) representation algebra.
//!
//! Irreducible representations are labelled by doubled spins `(jl2, jr2)` =
//! `(2j_L, 2j_R)`, so keys stay integral and the parity of a state is the
//! parity of `jl2 + jr2`. A [`SpinTable`] is a finitely supported assignment
//! of rational multiplicities to such labels; its character realization is
//! the symmetric Laurent polynomial `sum c * [j_L]_y [j_R]_u`.
//!
//! `decompose` inverts the character map by peeling the lexicographically
//! maximal `(e_y, e_u)` bidegree; the character basis is triangular with
//! respect to that order, so any extremal order gives the same table.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::SerializeSeq;
use serde::Serialize;
use thiserror::Error;

use crate::laurent::{rat, BiLaurent, Rat, ULaurent};

/// Which character variable a single SU(2) factor lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharVar {
    /// Right spin, variable u.
    U,
    /// Left spin, variable y.
    Y,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Su2Error {
    #[error("polynomial is not symmetric under {0} -> 1/{0}")]
    Asymmetric(char),
    #[error("character peeling produced a negative extremal bidegree (input not a character sum)")]
    BadExtremal,
    #[error("genus-basis change produced a non-integral multiplicity at g = {0}")]
    NonIntegralGenus(u32),
    #[error("genus-basis change left a nonzero remainder")]
    GenusRemainder,
}

/// Character of the spin-(j2/2) representation: x^{-j2} + x^{-j2+2} + ... + x^{j2}.
pub fn character(j2: u32, var: CharVar) -> BiLaurent {
    let mut p = BiLaurent::zero();
    let j2 = j2 as i64;
    let mut e = -j2;
    while e <= j2 {
        match var {
            CharVar::U => p.add_term(e, 0, rat(1)),
            CharVar::Y => p.add_term(0, e, rat(1)),
        }
        e += 2;
    }
    p
}

/// Serialized form of one `SpinTable` entry.
#[derive(Serialize)]
struct SpinEntryRepr {
    jl2: u32,
    jr2: u32,
    num: String,
    den: String,
}

/// Finitely supported multiplicities of SU(2) x SU(2) representations,
/// keyed by doubled spins (2j_L, 2j_R). Multiplicities may be negative or
/// rational; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SpinTable {
    entries: BTreeMap<(u32, u32), Rat>,
}

impl SpinTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(pairs: impl IntoIterator<Item = ((u32, u32), Rat)>) -> Self {
        let mut t = Self::new();
        for ((l, r), c) in pairs {
            t.add_entry(l, r, c);
        }
        t
    }

    pub fn from_int_entries(pairs: &[(u32, u32, i64)]) -> Self {
        Self::from_entries(pairs.iter().map(|&(l, r, c)| ((l, r), rat(c))))
    }

    /// The one-dimensional trivial representation [0,0].
    pub fn unit() -> Self {
        Self::from_int_entries(&[(0, 0, 1)])
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn add_entry(&mut self, jl2: u32, jr2: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.entries.entry((jl2, jr2)).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.entries.remove(&(jl2, jr2));
        }
    }

    pub fn multiplicity(&self, jl2: u32, jr2: u32) -> Rat {
        self.entries
            .get(&(jl2, jr2))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.entries.iter()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        Self {
            entries: self.entries.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(l, r), c) in &other.entries {
            out.add_entry(l, r, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(l, r), c) in &other.entries {
            out.add_entry(l, r, -c.clone());
        }
        out
    }

    /// Largest doubled left spin present (0 for the empty table).
    pub fn max_jl2(&self) -> u32 {
        self.entries.keys().map(|&(l, _)| l).max().unwrap_or(0)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.values().all(|c| c.is_integer())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|c| !c.is_negative())
    }

    /// Character realization: sum of c * [j_L]_y [j_R]_u.
    pub fn realize(&self) -> BiLaurent {
        let mut p = BiLaurent::zero();
        for (&(jl2, jr2), c) in &self.entries {
            let prod = character(jl2, CharVar::Y).mul(&character(jr2, CharVar::U));
            p = p.add(&prod.scale(c));
        }
        p
    }
}

impl Serialize for SpinTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for (&(jl2, jr2), c) in &self.entries {
            seq.serialize_element(&SpinEntryRepr {
                jl2,
                jr2,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })?;
        }
        seq.end()
    }
}

/// Decompose a symmetric Laurent polynomial into characters, inverting
/// `SpinTable::realize`. Multiplicities may come out negative or rational.
pub fn decompose(p: &BiLaurent) -> Result<SpinTable, Su2Error> {
    if !p.is_u_symmetric() {
        return Err(Su2Error::Asymmetric('u'));
    }
    if !p.is_y_symmetric() {
        return Err(Su2Error::Asymmetric('y'));
    }
    let mut rem = p.clone();
    let mut table = SpinTable::new();
    while !rem.is_zero() {
        // Peel at the lexicographically maximal (e_y, e_u).
        let (&(eu, ey), _) = rem
            .terms()
            .max_by_key(|(&(eu, ey), _)| (ey, eu))
            .expect("nonempty");
        if ey < 0 || eu < 0 {
            return Err(Su2Error::BadExtremal);
        }
        let c = rem.coeff(eu, ey);
        let prod = character(ey as u32, CharVar::Y).mul(&character(eu as u32, CharVar::U));
        rem = rem.sub(&prod.scale(&c));
        table.add_entry(ey as u32, eu as u32, c);
    }
    Ok(table)
}

/// Clebsch-Gordan range for doubled spins: |a - b|, |a - b| + 2, ..., a + b.
fn clebsch_gordan(a: u32, b: u32) -> impl Iterator<Item = u32> {
    let lo = a.abs_diff(b);
    (lo..=a + b).step_by(2)
}

/// Tensor product of spin tables: Clebsch-Gordan on each SU(2) factor
/// independently, extended bilinearly. The character realization of the
/// result equals the product of the character realizations.
pub fn tensor(a: &SpinTable, b: &SpinTable) -> SpinTable {
    let mut out = SpinTable::new();
    for (&(la, ra), ca) in a.entries() {
        for (&(lb, rb), cb) in b.entries() {
            let c = ca * cb;
            for l in clebsch_gordan(la, lb) {
                for r in clebsch_gordan(ra, rb) {
                    out.add_entry(l, r, c.clone());
                }
            }
        }
    }
    out
}

/// Integer genus multiplicities n_g (finitely supported).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GenusTable {
    entries: BTreeMap<u32, BigInt>,
}

impl GenusTable {
    pub fn from_entries(pairs: &[(u32, i64)]) -> Self {
        Self::from_bigint_entries(pairs.iter().map(|&(g, n)| (g, BigInt::from(n))))
    }

    pub fn from_bigint_entries(pairs: impl IntoIterator<Item = (u32, BigInt)>) -> Self {
        Self {
            entries: pairs.into_iter().filter(|(_, n)| !n.is_zero()).collect(),
        }
    }

    pub fn value(&self, g: u32) -> BigInt {
        self.entries.get(&g).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&u32, &BigInt)> {
        self.entries.iter()
    }

    pub fn max_genus(&self) -> Option<u32> {
        self.entries.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Serialize for GenusTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct GenusEntryRepr {
            g: u32,
            n: String,
        }
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for (&g, n) in &self.entries {
            seq.serialize_element(&GenusEntryRepr {
                g,
                n: n.to_string(),
            })?;
        }
        seq.end()
    }
}

/// The left-spin content of an abelian variety of dimension g: the character
/// of (2[0] + [1/2])^{tensor g} is (2 + y + 1/y)^g.
fn genus_basis_char(g: u32) -> ULaurent {
    let base = ULaurent::from_int_terms(&[(-1, 1), (0, 2), (1, 1)]);
    let mut acc = ULaurent::one();
    for _ in 0..g {
        acc = acc.mul(&base);
    }
    acc
}

/// Change of basis from refined multiplicities to genus multiplicities:
/// sum over the table of (-1)^{2j_R} (2j_R + 1) c [j_L]_y, re-expanded in the
/// abelian-variety basis. Errors if the solution is not integral (an
/// inconsistent table).
pub fn unrefine(t: &SpinTable) -> Result<GenusTable, Su2Error> {
    // Weighted left character content.
    let mut lhs = ULaurent::zero();
    for (&(jl2, jr2), c) in t.entries() {
        let weight = rat((jr2 as i64 + 1) * if jr2 % 2 == 1 { -1 } else { 1 });
        let ch = character(jl2, CharVar::Y).collapse_u(1);
        lhs = lhs.add(&ch.scale(&(weight * c)));
    }
    // Solve upper-triangularly from the top y-degree down.
    let mut solution: Vec<(u32, Rat)> = Vec::new();
    while let Some(top) = lhs.max_exp() {
        if top < 0 {
            return Err(Su2Error::GenusRemainder);
        }
        let g = top as u32;
        let n = lhs.coeff(top);
        lhs = lhs.sub(&genus_basis_char(g).scale(&n));
        solution.push((g, n));
    }
    let mut entries = BTreeMap::new();
    for (g, n) in solution {
        if !n.is_integer() {
            return Err(Su2Error::NonIntegralGenus(g));
        }
        if !n.is_zero() {
            entries.insert(g, n.to_integer());
        }
    }
    Ok(GenusTable { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters() {
        assert!(character(0, CharVar::U).is_one());
        assert_eq!(
            character(1, CharVar::Y),
            BiLaurent::from_int_terms(&[(0, -1, 1), (0, 1, 1)])
        );
        assert_eq!(
            character(2, CharVar::U),
            BiLaurent::from_int_terms(&[(-2, 0, 1), (0, 0, 1), (2, 0, 1)])
        );
    }

    #[test]
    fn decompose_constant() {
        let t = decompose(&BiLaurent::one()).unwrap();
        assert_eq!(t, SpinTable::unit());
    }

    #[test]
    fn decompose_rejects_asymmetric() {
        let p = BiLaurent::from_int_terms(&[(1, 0, 1)]);
        assert_eq!(decompose(&p), Err(Su2Error::Asymmetric('u')));
    }

    #[test]
    fn decompose_realize_round_trip() {
        let mut state: u64 = 42;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            state
        };
        for _ in 0..30 {
            let mut t = SpinTable::new();
            for _ in 0..4 {
                let l = (next() % 4) as u32;
                let r = (next() % 4) as u32;
                let c = (next() % 11) as i64 - 5;
                t.add_entry(l, r, rat(c));
            }
            let back = decompose(&t.realize()).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn tensor_examples() {
        // [1/2,1/2] (x) [0,1/2] = [1/2,0] + [1/2,1]
        let a = SpinTable::from_int_entries(&[(1, 1, 1)]);
        let b = SpinTable::from_int_entries(&[(0, 1, 1)]);
        assert_eq!(
            tensor(&a, &b),
            SpinTable::from_int_entries(&[(1, 0, 1), (1, 2, 1)])
        );

        // unit acts as identity
        let t = SpinTable::from_int_entries(&[(2, 0, 3), (1, 1, -2)]);
        assert_eq!(tensor(&t, &SpinTable::unit()), t);

        // [1] (x) [1] = [0] + [1] + [2] on a single factor
        let c = SpinTable::from_int_entries(&[(2, 0, 1)]);
        assert_eq!(
            tensor(&c, &c),
            SpinTable::from_int_entries(&[(0, 0, 1), (2, 0, 1), (4, 0, 1)])
        );
    }

    #[test]
    fn tensor_realization_is_multiplicative() {
        let a = SpinTable::from_int_entries(&[(1, 1, 1), (0, 0, 2)]);
        let b = SpinTable::from_int_entries(&[(2, 1, 1), (1, 0, -1)]);
        assert_eq!(tensor(&a, &b).realize(), a.realize().mul(&b.realize()));
        assert_eq!(tensor(&a, &b), tensor(&b, &a));
        let c = SpinTable::from_int_entries(&[(1, 0, 1)]);
        assert_eq!(tensor(&tensor(&a, &b), &c), tensor(&a, &tensor(&b, &c)));
    }

    #[test]
    fn unrefine_trivial_and_first_table() {
        assert_eq!(
            unrefine(&SpinTable::unit()).unwrap(),
            GenusTable::from_entries(&[(0, 1)])
        );
        // 20[0,0] + [1/2,1/2] -> 24 at genus 0, -2 at genus 1.
        let t = SpinTable::from_int_entries(&[(0, 0, 20), (1, 1, 1)]);
        assert_eq!(
            unrefine(&t).unwrap(),
            GenusTable::from_entries(&[(0, 24), (1, -2)])
        );
    }

    #[test]
    fn unrefine_is_linear() {
        let a = SpinTable::from_int_entries(&[(0, 0, 5), (2, 2, 1)]);
        let b = SpinTable::from_int_entries(&[(1, 1, 2), (0, 2, 1)]);
        let ga = unrefine(&a).unwrap();
        let gb = unrefine(&b).unwrap();
        let gsum = unrefine(&a.add(&b)).unwrap();
        for g in 0..4 {
            assert_eq!(gsum.value(g), ga.value(g) + gb.value(g));
        }
    }

    #[test]
    fn unrefine_matches_euler_specialization() {
        // At u = -1 the weighted character content is the y-character of the
        // realization; cross-check the genus expansion against it for a
        // handful of tables.
        let tables = [
            SpinTable::from_int_entries(&[(0, 0, 20), (1, 1, 1)]),
            SpinTable::from_int_entries(&[(0, 0, 231), (1, 1, 21), (2, 2, 1)]),
        ];
        for t in &tables {
            let g = unrefine(t).unwrap();
            let direct = t.realize().collapse_u(-1);
            let mut recon = ULaurent::zero();
            for (&gg, n) in g.entries() {
                let c = genus_basis_char(gg);
                recon = recon.add(&c.scale(&Rat::from_integer(n.clone())));
            }
            assert_eq!(recon, direct);
        }
    }
}
