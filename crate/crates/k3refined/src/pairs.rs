//! The stable-pairs side: multiple-cover products and consistency checks.
//!
//! For a table of refined multiplicities N_{jL,jR}, the pairs partition
//! function in multiples of a primitive class is the product over cover
//! degree k of
//!
//! ```text
//! prod (1 + u^{-m+1+2j-2mR} y^{m-2mL} v^k)^{(-1)^{2(jL+jR)} N_{jL,jR}}
//! ```
//!
//! with mL, mR running over the weights of the two spins, m >= 1 and
//! 0 <= j <= m-1. The product over m is infinite in the positive y
//! direction; only finitely many factors touch a requested y-exponent, and
//! the builders here enumerate exactly those, stamping the resulting
//! validity window on the output series.
//!
//! The v^1 coefficient, multiplied by the prefactor `y + 1/y - u - 1/u`,
//! reassembles the Hodge series of the Hilbert schemes; `kawai_yoshioka_check`
//! verifies that identity coefficientwise. The full product with per-k
//! tables N = R^{h[k]}, h[k] = k^2 (h-1) + 1, is the divisibility-invariance
//! partition function; its coefficients are the predicted virtual Poincare
//! polynomials of the pairs moduli spaces (see `pairs_table`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeSeq;
use serde::Serialize;
use thiserror::Error;

use crate::hodge::{hodge_product, refined_r_tables, HodgeError};
use crate::laurent::{BiLaurent, Rat, ULaurent};
use crate::series::{GradingVar, SeriesError, TruncatedSeries, YWindow};
use crate::su2::SpinTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PairsError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error("multiplicity at (2jL, 2jR) = ({jl2}, {jr2}) is {value}, not an integer exponent")]
    NonIntegerMultiplicity { jl2: u32, jr2: u32, value: String },
    #[error("y-window must be at least 1, got {0}")]
    WindowTooSmall(i64),
    #[error("falsified: entry (n = {n}, k = {k}) is {value}, expected integer coefficients")]
    NonIntegralEntry { n: i64, k: u32, value: String },
    #[error("falsified: entry (n = {n}, k = {k}) is {value}, not palindromic in u")]
    NonPalindromicEntry { n: i64, k: u32, value: String },
    #[error("internal identity failed: {0}")]
    Inconsistent(String),
}

/// Sign of a state: (-1)^{2(jL + jR)} in doubled-spin parity.
fn state_sign(jl2: u32, jr2: u32) -> i64 {
    if (jl2 + jr2) % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Aggregate the index product over (mL, mR, m, j) into a map from monomial
/// exponents (e_u, e_y) to total integer exponents, keeping only monomials
/// with e_y <= cap. With `signed` unset, the state sign is omitted (the
/// normalization used for Poincare-polynomial predictions).
fn aggregate_monomials(
    table: &SpinTable,
    cap: i64,
    signed: bool,
) -> Result<BTreeMap<(i64, i64), BigInt>, PairsError> {
    let mut acc: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
    for (&(jl2, jr2), mult) in table.entries() {
        if !mult.is_integer() {
            return Err(PairsError::NonIntegerMultiplicity {
                jl2,
                jr2,
                value: mult.to_string(),
            });
        }
        let mut e = mult.to_integer();
        if signed && state_sign(jl2, jr2) == -1 {
            e = -e;
        }
        let mut ml2 = -(jl2 as i64);
        while ml2 <= jl2 as i64 {
            // e_y = m - ml2 <= cap bounds the factor index m.
            let m_max = cap + ml2;
            let mut m = 1i64;
            while m <= m_max {
                let ey = m - ml2;
                let mut mr2 = -(jr2 as i64);
                while mr2 <= jr2 as i64 {
                    for j in 0..m {
                        let eu = -m + 1 + 2 * j - mr2;
                        let slot = acc.entry((eu, ey)).or_insert_with(BigInt::zero);
                        *slot += &e;
                    }
                    mr2 += 2;
                }
                m += 1;
            }
            ml2 += 2;
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(acc)
}

/// The v^1 content of the product for a single table: the predicted series
/// `sum_n H(P_n) y^n`, returned as y-slices (u-polynomial per Euler
/// characteristic n), exact for n <= y_hi.
pub fn pairs_poincare_series(
    table: &SpinTable,
    y_hi: i64,
) -> Result<BTreeMap<i64, ULaurent>, PairsError> {
    let monos = aggregate_monomials(table, y_hi, true)?;
    let mut slices: BTreeMap<i64, ULaurent> = BTreeMap::new();
    for ((eu, ey), e) in monos {
        slices
            .entry(ey)
            .or_default()
            .add_term(eu, Rat::from_integer(e));
    }
    slices.retain(|_, p| !p.is_zero());
    Ok(slices)
}

/// Level-one expansion without the state sign, used for Poincare-polynomial
/// predictions of pairs moduli spaces: for a state of half-integer total
/// spin the factor sign (-1)^{2(jL+jR)} cancels against the sign carried by
/// odd-degree cohomology in the virtual realization, so honest Betti
/// predictions read off with the plain multiplicities.
pub fn poincare_prediction_series(
    table: &SpinTable,
    y_hi: i64,
) -> Result<BTreeMap<i64, ULaurent>, PairsError> {
    let monos = aggregate_monomials(table, y_hi, false)?;
    let mut slices: BTreeMap<i64, ULaurent> = BTreeMap::new();
    for ((eu, ey), e) in monos {
        slices
            .entry(ey)
            .or_default()
            .add_term(eu, Rat::from_integer(e));
    }
    slices.retain(|_, p| !p.is_zero());
    Ok(slices)
}

/// Multiple-cover product and its logarithm, truncated at v^kmax with all
/// y-exponents <= window exact. `tables[k-1]` is the multiplicity table for
/// cover degree k (empty tables contribute no factors).
pub fn refined_gv_product_with_log(
    tables: &[SpinTable],
    window: i64,
) -> Result<(TruncatedSeries, Vec<BiLaurent>), PairsError> {
    if window < 1 {
        return Err(PairsError::WindowTooSmall(window));
    }
    let kmax = tables.len();
    let l_max = tables.iter().map(|t| t.max_jl2()).max().unwrap_or(0) as i64;
    // A dropped factor contributes y-exponent > window + slack; combined
    // with at most kmax - 1 further factors, each contributing at least
    // 1 - l_max, it cannot reach the window.
    let slack = (kmax as i64 - 1).max(0) * (l_max - 1).max(0);
    let cap = window + slack;

    // Log coefficients F_d: each factor (1 + mono v^k)^e contributes
    // e (-1)^{r+1} mono^r / r at v^{kr}.
    let mut log_coeffs: Vec<BiLaurent> = vec![BiLaurent::zero(); kmax + 1];
    for (idx, table) in tables.iter().enumerate() {
        let k = idx + 1;
        if table.is_empty() {
            continue;
        }
        let monos = aggregate_monomials(table, cap, true)?;
        for ((eu, ey), e) in monos {
            let mut r = 1usize;
            while k * r <= kmax {
                let sign = if r % 2 == 0 { -1 } else { 1 };
                let c = Rat::new(e.clone() * BigInt::from(sign), BigInt::from(r as i64));
                log_coeffs[k * r].add_term(eu * r as i64, ey * r as i64, c);
                r += 1;
            }
        }
    }

    // Z = exp(F) via kappa * Z_kappa = sum_d d * F_d * Z_{kappa - d}.
    let mut z: Vec<BiLaurent> = Vec::with_capacity(kmax + 1);
    z.push(BiLaurent::one());
    for kappa in 1..=kmax {
        let mut acc = BiLaurent::zero();
        for d in 1..=kappa {
            if log_coeffs[d].is_zero() {
                continue;
            }
            let term = log_coeffs[d].mul(&z[kappa - d]);
            acc = acc.add(&term.scale(&crate::laurent::rat(d as i64)));
        }
        z.push(acc.scale(&crate::laurent::rat_frac(1, kappa as i64)));
    }

    // Keep only the guaranteed window; beyond it the enumeration is partial.
    let prune = |p: &BiLaurent| {
        BiLaurent::from_terms(
            p.terms()
                .filter(|(&(_, ey), _)| ey <= window)
                .map(|(&(eu, ey), c)| (eu, ey, c.clone())),
        )
    };
    // Support bound over every coefficient, including the constant term.
    let lo = (kmax as i64 * (1 - l_max)).min(0);
    let mut series = TruncatedSeries::zero(GradingVar::V, kmax);
    series.set_coeff(0, BiLaurent::one());
    for (kappa, c) in z.iter().enumerate().skip(1) {
        series.set_coeff(kappa, prune(c));
    }
    let series = series.with_y_window(Some(YWindow { lo, hi: window }));
    let log_pruned = log_coeffs.iter().map(prune).collect();
    Ok((series, log_pruned))
}

/// Multiple-cover product alone.
pub fn refined_gv_product(
    tables: &[SpinTable],
    window: i64,
) -> Result<TruncatedSeries, PairsError> {
    Ok(refined_gv_product_with_log(tables, window)?.0)
}

/// One coefficientwise mismatch between the pairs series and the Hodge
/// product.
#[derive(Clone, Debug, Serialize)]
pub struct KyWitness {
    pub h: usize,
    pub n: i64,
    pub pairs_side: ULaurent,
    pub hodge_side: ULaurent,
}

/// Result of the consistency check between the pairs product and the Hodge
/// series. Failure is a result, not an error.
#[derive(Clone, Debug, Serialize)]
pub struct KyReport {
    pub hmax: usize,
    pub nmax: i64,
    pub mismatches: Vec<KyWitness>,
}

impl KyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Check that `(y + 1/y - u - 1/u) * sum_n H(P_n(S,h)) y^n` equals the q^h
/// coefficient of the Hodge product for every h <= hmax, on y-exponents up
/// to nmax (the window on which the truncated product is exact).
pub fn kawai_yoshioka_check(hmax: usize, nmax: i64) -> Result<KyReport, PairsError> {
    if nmax < 1 {
        return Err(PairsError::WindowTooSmall(nmax));
    }
    let tables = refined_r_tables(hmax)?;
    let hodge = hodge_product(hmax)?;
    let u_shift = ULaurent::from_int_terms(&[(-1, 1), (1, 1)]);
    let mut mismatches = Vec::new();
    for (h, table) in tables.iter().enumerate() {
        // Exact for n <= nmax + 1, so the prefactor product is exact for
        // n <= nmax.
        let slices = pairs_poincare_series(table, nmax + 1)?;
        let lo = slices.keys().next().copied().unwrap_or(0).min(-nmax);
        let rhs_slices = hodge.coeff(h)?.y_slices();
        for n in lo..=nmax {
            let s = |m: i64| slices.get(&m).cloned().unwrap_or_default();
            // y-shift by +/-1 plus the -(u + 1/u) term.
            let lhs = s(n - 1).add(&s(n + 1)).sub(&s(n).mul(&u_shift));
            let rhs = rhs_slices.get(&n).cloned().unwrap_or_default();
            if lhs != rhs {
                mismatches.push(KyWitness {
                    h,
                    n,
                    pairs_side: lhs,
                    hodge_side: rhs,
                });
            }
        }
    }
    Ok(KyReport {
        hmax,
        nmax,
        mismatches,
    })
}

/// Predicted virtual Poincare polynomials of the pairs moduli spaces in
/// multiples of a primitive class of arithmetic genus h, indexed by
/// (Euler characteristic n, multiplicity k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairsTable {
    pub h: usize,
    pub kmax: usize,
    pub window: i64,
    entries: BTreeMap<(u32, i64), ULaurent>,
}

impl PairsTable {
    pub fn entry(&self, n: i64, k: u32) -> ULaurent {
        self.entries.get(&(k, n)).cloned().unwrap_or_default()
    }

    /// Entries keyed by (k, n), ascending.
    pub fn entries(&self) -> impl Iterator<Item = (&(u32, i64), &ULaurent)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Serialize for PairsTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct EntryRepr<'a> {
            n: i64,
            k: u32,
            poly: &'a ULaurent,
        }
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for (&(k, n), poly) in &self.entries {
            seq.serialize_element(&EntryRepr { n, k, poly })?;
        }
        seq.end()
    }
}

/// Arithmetic genus of the k-fold multiple of a primitive class of genus h.
pub fn multiple_class_genus(h: i64, k: i64) -> i64 {
    k * k * (h - 1) + 1
}

/// Build the divisibility partition function for a primitive class of genus
/// h truncated at multiplicity kmax, and read off the predicted pairs
/// invariants. Internal identities checked along the way: the generic
/// series logarithm agrees with the directly accumulated log, and the k = 1
/// slice reproduces the Kawai-Yoshioka Poincare series.
pub fn pairs_table(h: i64, kmax: usize, window: i64) -> Result<PairsTable, PairsError> {
    assert!(h >= 0, "genus parameter must be nonnegative");
    assert!(kmax >= 1, "multiplicity truncation must be at least 1");
    if window < 1 {
        return Err(PairsError::WindowTooSmall(window));
    }

    // Per-multiplicity tables R^{h[k]}; h[k] < 0 gives the empty table.
    let genera: Vec<i64> = (1..=kmax as i64)
        .map(|k| multiple_class_genus(h, k))
        .collect();
    let max_genus = genera.iter().copied().max().unwrap_or(0);
    let all_tables = if max_genus >= 0 {
        refined_r_tables(max_genus as usize)?
    } else {
        Vec::new()
    };
    let tables: Vec<SpinTable> = genera
        .iter()
        .map(|&g| {
            if g < 0 {
                SpinTable::new()
            } else {
                all_tables[g as usize].clone()
            }
        })
        .collect();

    let (z, log_direct) = refined_gv_product_with_log(&tables, window)?;

    // Generic log against the accumulated one, within the window the
    // generic route can guarantee.
    let generic_log = z.log()?;
    if let Some(w) = generic_log.y_window() {
        for (d, direct) in log_direct.iter().enumerate().skip(1) {
            let a = restrict_ey(&generic_log.coeff(d)?, w.hi);
            let b = restrict_ey(direct, w.hi);
            if a != b {
                return Err(PairsError::Inconsistent(format!(
                    "series log disagrees with accumulated log at v^{d}"
                )));
            }
        }
    }

    // k = 1 slice must be the Kawai-Yoshioka series.
    let ky = pairs_poincare_series(&tables[0], window)?;
    let z1 = z.coeff(1)?.y_slices();
    if z1 != ky {
        return Err(PairsError::Inconsistent(
            "v^1 slice differs from the level-one Poincare series".into(),
        ));
    }

    let mut entries: BTreeMap<(u32, i64), ULaurent> = BTreeMap::new();
    for k in 1..=kmax {
        for (n, poly) in z.coeff(k)?.y_slices() {
            if poly.is_zero() {
                continue;
            }
            if !poly.is_integral() {
                return Err(PairsError::NonIntegralEntry {
                    n,
                    k: k as u32,
                    value: poly.to_string(),
                });
            }
            if !poly.is_palindromic() {
                return Err(PairsError::NonPalindromicEntry {
                    n,
                    k: k as u32,
                    value: poly.to_string(),
                });
            }
            entries.insert((k as u32, n), poly);
        }
    }
    Ok(PairsTable {
        h: h as usize,
        kmax,
        window,
        entries,
    })
}

fn restrict_ey(p: &BiLaurent, hi: i64) -> BiLaurent {
    BiLaurent::from_terms(
        p.terms()
            .filter(|(&(_, ey), _)| ey <= hi)
            .map(|(&(eu, ey), c)| (eu, ey, c.clone())),
    )
}

/// Substitute u = -1 in every entry, recovering the unrefined stable pairs
/// invariants. Results must be integers.
pub fn pairs_unrefine(table: &PairsTable) -> Result<BTreeMap<(u32, i64), BigInt>, PairsError> {
    let mut out = BTreeMap::new();
    for (&(k, n), poly) in table.entries() {
        let v = poly.eval_pm_one(-1);
        if !v.is_integer() {
            return Err(PairsError::NonIntegralEntry {
                n,
                k,
                value: v.to_string(),
            });
        }
        if !v.is_zero() {
            out.insert((k, n), v.to_integer());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;

    /// Independent closed form for genus 0: H(P_n) is the normalized
    /// Poincare polynomial of P^{n-1}, u^{1-n} + u^{3-n} + ... + u^{n-1}.
    fn projective_space_poincare(n: i64) -> ULaurent {
        let mut p = ULaurent::zero();
        let mut e = 1 - n;
        while e <= n - 1 {
            p.add_term(e, rat(1));
            e += 2;
        }
        p
    }

    #[test]
    fn genus_zero_series_is_projective_tower() {
        let slices = pairs_poincare_series(&SpinTable::unit(), 8).unwrap();
        for n in 1..=8 {
            assert_eq!(slices[&n], projective_space_poincare(n), "n = {n}");
        }
        assert!(!slices.contains_key(&0));
    }

    #[test]
    fn genus_one_low_slices() {
        // Table for h = 1: 20[0,0] + [1/2,1/2].
        let t = SpinTable::from_int_entries(&[(0, 0, 20), (1, 1, 1)]);
        let slices = pairs_poincare_series(&t, 6).unwrap();
        assert_eq!(slices[&0], ULaurent::from_int_terms(&[(-1, 1), (1, 1)]));
        assert_eq!(
            slices[&1],
            ULaurent::from_int_terms(&[(-2, 1), (0, 22), (2, 1)])
        );
    }

    #[test]
    fn prefactor_identity() {
        // (uy - 1)(1/u - 1/y) = y + 1/y - u - 1/u.
        let a = BiLaurent::from_int_terms(&[(1, 1, 1), (0, 0, -1)]);
        let b = BiLaurent::from_int_terms(&[(-1, 0, 1), (0, -1, -1)]);
        let expected = BiLaurent::from_int_terms(&[(0, 1, 1), (0, -1, 1), (1, 0, -1), (-1, 0, -1)]);
        assert_eq!(a.mul(&b), expected);
    }

    #[test]
    fn consistency_check_small() {
        let report = kawai_yoshioka_check(3, 8).unwrap();
        assert!(report.passed(), "mismatches: {:?}", report.mismatches);
    }

    #[test]
    fn product_window_enlargement_stable() {
        // Enlarging the window must not change coefficients inside it.
        let t = SpinTable::from_int_entries(&[(0, 0, 20), (1, 1, 1)]);
        let tables = vec![t.clone(), t];
        let (z1, _) = refined_gv_product_with_log(&tables, 6).unwrap();
        let (z2, _) = refined_gv_product_with_log(&tables, 11).unwrap();
        for k in 0..=2 {
            let a = z1.coeff(k).unwrap();
            let b = restrict_ey(&z2.coeff(k).unwrap(), 6);
            assert_eq!(a, b, "window instability at v^{k}");
        }
    }

    #[test]
    fn double_cover_entry_matches_symmetric_square_geometry() {
        // Euler characteristic 0 at multiplicity 2 for the fiber class:
        // the branched double cover of the plane of divisors.
        let table = pairs_table(1, 2, 8).unwrap();
        assert_eq!(
            table.entry(0, 2),
            ULaurent::from_int_terms(&[(-1, 1), (0, 1), (1, 1)])
        );
    }

    #[test]
    fn level_one_slice_is_ky_series_for_small_genus() {
        for h in 0..=3 {
            let table = pairs_table(h, 2, 7).unwrap();
            let hk = multiple_class_genus(h, 1);
            let r = refined_r_tables(hk as usize).unwrap();
            let ky = pairs_poincare_series(&r[hk as usize], 7).unwrap();
            for (n, poly) in ky {
                assert_eq!(table.entry(n, 1), poly, "h = {h}, n = {n}");
            }
        }
    }

    #[test]
    fn negative_genus_multiples_have_no_factors() {
        // h = 0, k = 2: h[2] = -3 < 0, so the multiplicity-two table is
        // empty and contributes no factors to the product.
        assert_eq!(multiple_class_genus(0, 2), -3);
        let table = pairs_table(0, 2, 6).unwrap();
        // The k = 2 coefficients are then determined purely by the k = 1
        // tower (two-part configurations); spot-check integrality and
        // palindromicity, which `pairs_table` enforces.
        assert!(table
            .entries()
            .all(|(_, p)| p.is_integral() && p.is_palindromic()));
    }

    #[test]
    fn entries_vanish_below_the_genus_bound() {
        // For multiplicity k the Euler characteristic is bounded below by
        // 1 - h[k].
        let table = pairs_table(2, 2, 6).unwrap();
        for (&(k, n), _) in table.entries() {
            let bound = 1 - multiple_class_genus(2, k as i64);
            assert!(n >= bound, "k = {k}, n = {n} below {bound}");
        }
        // And the bound is attained at k = 2: h[2] = 5 gives n = -4.
        assert!(!table.entry(-4, 2).is_zero());
    }

    #[test]
    fn unrefine_values() {
        let table = pairs_table(1, 2, 6).unwrap();
        let euler = pairs_unrefine(&table).unwrap();
        // 1 + u + 1/u at u = -1 gives -1.
        assert_eq!(euler[&(2, 0)], BigInt::from(-1));
        // u^-2 + 22 + u^2 at u = -1 gives 24.
        assert_eq!(euler[&(1, 1)], BigInt::from(24));
        // u^-1 + u at u = -1 gives -2.
        assert_eq!(euler[&(1, 0)], BigInt::from(-2));
    }

    #[test]
    fn rejects_fractional_multiplicities() {
        let t = SpinTable::from_entries([((0, 0), crate::laurent::rat_frac(1, 2))]);
        assert!(matches!(
            pairs_poincare_series(&t, 3),
            Err(PairsError::NonIntegerMultiplicity { .. })
        ));
    }
}
