//! Master generating functions for the refined invariants of K3 surfaces.
//!
//! The Hodge series of the Hilbert schemes of points of a K3 surface is the
//! infinite product
//!
//! ```text
//! prod_{n>=1} [ (1 - u^-1 y^-1 q^n)(1 - u^-1 y q^n)(1 - q^n)^20
//!               (1 - u y^-1 q^n)(1 - u y q^n) ]^-1
//! ```
//!
//! whose q^h coefficient decomposes into SU(2) x SU(2) characters with the
//! refined multiplicities R^h as coefficients. The diamond variant omits the
//! `(1 - q^n)^20` factors and produces the fiberwise part R^{h,diamond} used
//! by the refined correspondence for K3 fibrations; the circle part is the
//! difference, which is expected to be a table of nonnegative integers.
//!
//! Coefficient index equals h throughout: no q-shift is applied, so the
//! specialization u = y = 1 of the full product begins 1, 24, 324, 3200, ...

use num_bigint::BigInt;
use thiserror::Error;

use crate::laurent::{BiLaurent, Rat};
use crate::par::par_map;
use crate::series::{expand_factor, GradingVar, SeriesError, TruncatedSeries};
use crate::su2::{decompose, unrefine, GenusTable, SpinTable, Su2Error};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HodgeError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Su2(#[from] Su2Error),
    #[error("falsified: R^({h},circle) has entry {value} at (2jL, 2jR) = ({jl2}, {jr2}), expected a nonnegative integer")]
    CircleNegative {
        h: usize,
        jl2: u32,
        jr2: u32,
        value: String,
    },
    #[error("falsified: genus expansion of the Euler product is non-integral at h = {0}")]
    NonIntegralDirectGenus(usize),
}

/// The four character monomials u^{±1} y^{±1}.
fn corner_monomials() -> [BiLaurent; 4] {
    [
        BiLaurent::monomial(-1, -1, crate::laurent::rat(1)),
        BiLaurent::monomial(-1, 1, crate::laurent::rat(1)),
        BiLaurent::monomial(1, -1, crate::laurent::rat(1)),
        BiLaurent::monomial(1, 1, crate::laurent::rat(1)),
    ]
}

fn product_series(hmax: usize, middle_exponent: i64) -> Result<TruncatedSeries, SeriesError> {
    let mut acc = TruncatedSeries::one(GradingVar::Q, hmax);
    // Only factors with n <= hmax contribute below q^{hmax+1}.
    for n in 1..=hmax {
        for m in corner_monomials() {
            acc = acc.mul(&expand_factor(&m, n, -1, GradingVar::Q, hmax)?)?;
        }
        if middle_exponent != 0 {
            acc = acc.mul(&expand_factor(
                &BiLaurent::one(),
                n,
                middle_exponent,
                GradingVar::Q,
                hmax,
            )?)?;
        }
    }
    Ok(acc)
}

/// Hodge series of the Hilbert schemes of points, truncated at q^hmax.
pub fn hodge_product(hmax: usize) -> Result<TruncatedSeries, SeriesError> {
    product_series(hmax, -20)
}

/// The same product with the (1 - q^n)^20 factors omitted.
pub fn diamond_product(hmax: usize) -> Result<TruncatedSeries, SeriesError> {
    product_series(hmax, 0)
}

/// chi_y-genus shaped product prod (1 - y q^n)^-2 (1 - q^n)^-20 (1 - y^-1 q^n)^-2.
/// This is also the unrefined (genus) generating product.
pub fn euler_genus_product(hmax: usize) -> Result<TruncatedSeries, SeriesError> {
    let mut acc = TruncatedSeries::one(GradingVar::Q, hmax);
    for n in 1..=hmax {
        let ym = BiLaurent::monomial(0, -1, crate::laurent::rat(1));
        let yp = BiLaurent::monomial(0, 1, crate::laurent::rat(1));
        acc = acc.mul(&expand_factor(&ym, n, -2, GradingVar::Q, hmax)?)?;
        acc = acc.mul(&expand_factor(&yp, n, -2, GradingVar::Q, hmax)?)?;
        acc = acc.mul(&expand_factor(
            &BiLaurent::one(),
            n,
            -20,
            GradingVar::Q,
            hmax,
        )?)?;
    }
    Ok(acc)
}

/// Refined multiplicities for one weight h: full, diamond, and circle parts.
#[derive(Clone, Debug)]
pub struct RefinedTriple {
    pub h: usize,
    pub full: SpinTable,
    pub diamond: SpinTable,
    pub circle: SpinTable,
}

/// Refined tables R^h, R^{h,diamond}, R^{h,circle} for every h <= hmax.
///
/// The circle part is the difference of the two decompositions; any negative
/// or fractional entry there is reported as a falsification rather than
/// dropped.
pub fn refined_tables(hmax: usize) -> Result<Vec<RefinedTriple>, HodgeError> {
    let full_series = hodge_product(hmax)?;
    let diamond_series = diamond_product(hmax)?;
    let coeff_pairs: Vec<(usize, BiLaurent, BiLaurent)> = (0..=hmax)
        .map(|h| Ok((h, full_series.coeff(h)?, diamond_series.coeff(h)?)))
        .collect::<Result<_, SeriesError>>()?;
    let triples = par_map(coeff_pairs, |(h, full_c, diamond_c)| {
        let full = decompose(&full_c)?;
        let diamond = decompose(&diamond_c)?;
        Ok((h, full, diamond))
    });
    let mut out = Vec::with_capacity(hmax + 1);
    for t in triples {
        let (h, full, diamond) = t.map_err(HodgeError::Su2)?;
        let circle = full.sub(&diamond);
        for (&(jl2, jr2), c) in circle.entries() {
            if !c.is_integer() || c < &Rat::from_integer(BigInt::from(0)) {
                return Err(HodgeError::CircleNegative {
                    h,
                    jl2,
                    jr2,
                    value: c.to_string(),
                });
            }
        }
        out.push(RefinedTriple {
            h,
            full,
            diamond,
            circle,
        });
    }
    Ok(out)
}

/// Refined tables R^h alone for every h <= hmax.
pub fn refined_r_tables(hmax: usize) -> Result<Vec<SpinTable>, HodgeError> {
    let series = hodge_product(hmax)?;
    let coeffs: Vec<BiLaurent> = (0..=hmax)
        .map(|h| series.coeff(h))
        .collect::<Result<_, SeriesError>>()?;
    par_map(coeffs, |c| decompose(&c).map_err(HodgeError::Su2))
        .into_iter()
        .collect()
}

/// Genus multiplicities r^h_g obtained from the refined tables by the
/// genus-basis change (the right-spin trace at u = -1).
pub fn kkv_tables(tables: &[SpinTable]) -> Result<Vec<GenusTable>, Su2Error> {
    tables.iter().map(unrefine).collect()
}

/// Independent route to r^h_g: expand the unrefined Euler product directly
/// and solve for the genus multiplicities in the basis
/// (-1)^g (y - 2 + 1/y)^g, peeling from the top y-degree.
pub fn kkv_from_euler_product(hmax: usize) -> Result<Vec<GenusTable>, HodgeError> {
    let series = euler_genus_product(hmax)?;
    let mut out = Vec::with_capacity(hmax + 1);
    for h in 0..=hmax {
        let mut rem = series.coeff(h)?.collapse_u(1);
        let mut entries: Vec<(u32, BigInt)> = Vec::new();
        let base = crate::laurent::ULaurent::from_int_terms(&[(-1, 1), (0, -2), (1, 1)]);
        while let Some(top) = rem.max_exp() {
            if top < 0 {
                return Err(HodgeError::NonIntegralDirectGenus(h));
            }
            let g = top as u32;
            // Coefficient of y^g in (-1)^g (y - 2 + 1/y)^g is (-1)^g.
            let mut r = rem.coeff(top);
            if g % 2 == 1 {
                r = -r;
            }
            if !r.is_integer() {
                return Err(HodgeError::NonIntegralDirectGenus(h));
            }
            let mut basis = crate::laurent::ULaurent::one();
            for _ in 0..g {
                basis = basis.mul(&base);
            }
            let signed = if g % 2 == 1 { -r.clone() } else { r.clone() };
            rem = rem.sub(&basis.scale(&signed));
            entries.push((g, r.to_integer()));
        }
        out.push(GenusTable::from_bigint_entries(entries));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;

    #[test]
    fn first_coefficients() {
        let s = hodge_product(2).unwrap();
        assert!(s.coeff(0).unwrap().is_one());
        // q^1 coefficient is the five-term character sum.
        let c1 = s.coeff(1).unwrap();
        assert_eq!(
            c1,
            BiLaurent::from_int_terms(&[
                (-1, -1, 1),
                (-1, 1, 1),
                (0, 0, 20),
                (1, -1, 1),
                (1, 1, 1)
            ])
        );
        assert_eq!(c1.eval_pm_one(1, 1), rat(24));
    }

    #[test]
    fn euler_specialization_counts_hilbert_schemes() {
        let s = hodge_product(4).unwrap();
        let euler = s.specialize_pm_one(1, 1);
        assert_eq!(
            euler,
            vec![rat(1), rat(24), rat(324), rat(3200), rat(25650)]
        );
    }

    #[test]
    fn coefficients_are_palindromic() {
        let s = hodge_product(5).unwrap();
        let d = diamond_product(5).unwrap();
        for h in 0..=5 {
            for c in [s.coeff(h).unwrap(), d.coeff(h).unwrap()] {
                assert!(c.is_u_symmetric(), "u symmetry at h = {h}");
                assert!(c.is_y_symmetric(), "y symmetry at h = {h}");
            }
        }
    }

    #[test]
    fn low_weight_tables() {
        let tables = refined_r_tables(2).unwrap();
        assert_eq!(tables[0], SpinTable::unit());
        assert_eq!(
            tables[1],
            SpinTable::from_int_entries(&[(0, 0, 20), (1, 1, 1)])
        );
        assert_eq!(
            tables[2],
            SpinTable::from_int_entries(&[(0, 0, 231), (1, 1, 21), (2, 2, 1)])
        );
    }

    #[test]
    fn diamond_low_weight_tables() {
        let triples = refined_tables(3).unwrap();
        assert_eq!(triples[0].diamond, SpinTable::unit());
        assert_eq!(
            triples[1].diamond,
            SpinTable::from_int_entries(&[(1, 1, 1)])
        );
        assert_eq!(
            triples[3].diamond,
            SpinTable::from_int_entries(&[
                (0, 0, 1),
                (0, 2, 1),
                (1, 1, 2),
                (2, 0, 1),
                (2, 2, 1),
                (3, 3, 1)
            ])
        );
    }

    #[test]
    fn circle_parts_nonnegative_and_integral() {
        let triples = refined_tables(4).unwrap();
        for t in &triples {
            assert!(t.circle.is_integral());
            assert!(t.circle.is_nonnegative());
            assert_eq!(t.full, t.circle.add(&t.diamond));
        }
    }

    #[test]
    fn stabilization_along_the_diagonal() {
        let tables = refined_r_tables(6).unwrap();
        for (h, t) in tables.iter().enumerate() {
            let h2 = h as u32;
            assert_eq!(t.multiplicity(h2, h2), rat(1), "top diagonal at h = {h}");
            if h >= 2 {
                assert_eq!(
                    t.multiplicity(h2 - 1, h2 - 1),
                    rat(21),
                    "subdiagonal at h = {h}"
                );
            }
        }
    }

    #[test]
    fn chi_y_alignment_at_u_minus_one() {
        // Substituting u = -1 and then y -> -y in the Hodge product matches
        // the chi_y-shaped Euler product coefficientwise.
        let hodge = hodge_product(4).unwrap();
        let chi = euler_genus_product(4).unwrap();
        for h in 0..=4 {
            let lhs = hodge.coeff(h).unwrap().collapse_u(-1).negate_var();
            let rhs = chi.coeff(h).unwrap().collapse_u(1);
            assert_eq!(lhs, rhs, "h = {h}");
        }
    }

    #[test]
    fn genus_values_alternate_in_sign() {
        let r = refined_r_tables(6).unwrap();
        for (h, g) in kkv_tables(&r).unwrap().iter().enumerate() {
            for (&genus, n) in g.entries() {
                let expect_negative = genus % 2 == 1;
                assert_eq!(
                    n < &num_bigint::BigInt::from(0),
                    expect_negative,
                    "sign at h = {h}, g = {genus}"
                );
            }
        }
    }

    #[test]
    fn genus_tables_two_routes_agree() {
        let r = refined_r_tables(4).unwrap();
        let via_basis = kkv_tables(&r).unwrap();
        let via_product = kkv_from_euler_product(4).unwrap();
        assert_eq!(via_basis, via_product);
        assert_eq!(via_basis[4].value(4), num_bigint::BigInt::from(5));
        assert_eq!(via_basis[3].value(2), num_bigint::BigInt::from(88));
    }
}
