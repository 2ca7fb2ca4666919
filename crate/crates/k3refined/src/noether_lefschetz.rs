//! Noether-Lefschetz numbers and refined invariants of the STU model.
//!
//! The STU model is the Calabi-Yau 3-fold elliptically fibered over
//! P^1 x P^1 and K3-fibered over P^1, with rank-2 fiber lattice
//! [[0,1],[1,0]]. Its Noether-Lefschetz numbers in fiber degrees (d1, d2)
//! are coefficients of the weight-10 form -2 E_4 E_6:
//!
//! ```text
//! NL_{h,(d1,d2)} = [q^{1 + d1 d2 - h}] (-2 E_4(q) E_6(q))
//! ```
//!
//! The refinement replaces the number by a representation: a discriminant-0
//! lattice vector contributes a line in the base, recorded as [0,1/2]; all
//! other contributions are points, recorded as multiples of [0,0]. The
//! refined correspondence then pairs these with the circle/diamond split of
//! the K3 tables to produce the refined invariants of the 3-fold itself.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::hodge::{refined_tables, HodgeError};
use crate::laurent::{Rat, ULaurent};
use crate::pairs::{poincare_prediction_series, PairsError};
use crate::su2::{tensor, SpinTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NlError {
    #[error("unsupported Eisenstein weight {0} (only 4 and 6)")]
    UnsupportedWeight(u32),
    #[error("degrees ({0}, {1}) are not positive for the quasi-polarization")]
    InvalidDegrees(i64, i64),
    #[error("falsified: invariant at (2jL, 2jR) = ({jl2}, {jr2}) is {value}, expected a nonnegative integer")]
    NegativeInvariant { jl2: u32, jr2: u32, value: String },
    #[error(
        "falsified: Poincare prediction at Euler characteristic {m} is {value}, not palindromic"
    )]
    NonPalindromicPrediction { m: i64, value: String },
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Pairs(#[from] PairsError),
}

/// Divisor power sum sigma_k(n) by trial division.
fn sigma(k: u32, n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(k);
            let q = n / d;
            if q != d {
                acc += BigInt::from(q).pow(k);
            }
        }
        d += 1;
    }
    acc
}

/// q-expansion of the Eisenstein series E_4 or E_6 to order q^n.
pub fn eisenstein(weight: u32, n: usize) -> Result<Vec<BigInt>, NlError> {
    let scale: i64 = match weight {
        4 => 240,
        6 => -504,
        _ => return Err(NlError::UnsupportedWeight(weight)),
    };
    let power = weight - 1;
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigInt::one());
    for m in 1..=n as u64 {
        out.push(BigInt::from(scale) * sigma(power, m));
    }
    Ok(out)
}

/// q-expansion of -2 E_4 E_6 to order q^n.
pub fn minus_two_e4_e6(n: usize) -> Vec<BigInt> {
    let e4 = eisenstein(4, n).expect("weight 4");
    let e6 = eisenstein(6, n).expect("weight 6");
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, a) in e4.iter().enumerate() {
        for (j, b) in e6.iter().enumerate() {
            if i + j > n {
                break;
            }
            out[i + j] += a * b;
        }
    }
    for c in &mut out {
        *c *= -2;
    }
    out
}

/// Discriminant of the bordered lattice pairing for a general Gram matrix:
/// (-1)^r det of the Gram matrix extended by the degree column and the
/// norm-square corner 2h - 2.
pub fn bordered_discriminant(gram: &[Vec<i64>], degrees: &[i64], h: i64) -> BigInt {
    let r = gram.len();
    assert!(
        gram.iter().all(|row| row.len() == r),
        "Gram matrix must be square"
    );
    assert_eq!(degrees.len(), r, "degree vector length must match rank");
    let n = r + 1;
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for i in 0..r {
        for j in 0..r {
            m[i][j] = BigInt::from(gram[i][j]);
        }
        m[i][r] = BigInt::from(degrees[i]);
        m[r][i] = BigInt::from(degrees[i]);
    }
    m[r][r] = BigInt::from(2 * h - 2);
    let det = bareiss_determinant(m);
    if r % 2 == 1 {
        -det
    } else {
        det
    }
}

/// Fraction-free determinant with row pivoting.
fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone() * sign
}

/// Discriminant for the STU lattice [[0,1],[1,0]]: 2 (1 + d1 d2 - h).
pub fn stu_discriminant(h: i64, d1: i64, d2: i64) -> i64 {
    2 * (1 + d1 * d2 - h)
}

/// Noether-Lefschetz data for one (h, d1, d2) cell of the STU model.
#[derive(Clone, Debug, Serialize)]
pub struct NlProfile {
    pub h: i64,
    pub d1: i64,
    pub d2: i64,
    pub discriminant: i64,
    #[serde(serialize_with = "ser_bigint")]
    pub nl_number: BigInt,
    pub rnl_circ: SpinTable,
    pub rnl_diamond: SpinTable,
}

fn ser_bigint<S: serde::Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Noether-Lefschetz number and its two refinements for the STU model.
pub fn stu_profile(h: i64, d1: i64, d2: i64) -> NlProfile {
    let discriminant = stu_discriminant(h, d1, d2);
    let t = 1 + d1 * d2 - h;
    let nl_number = if t < 0 {
        BigInt::zero()
    } else {
        minus_two_e4_e6(t as usize)[t as usize].clone()
    };
    let nl_rat = Rat::from_integer(nl_number.clone());
    let rnl_circ = SpinTable::unit().scale(&nl_rat);
    let rnl_diamond = if t == 0 {
        SpinTable::from_int_entries(&[(0, 1, 1)])
    } else {
        rnl_circ.clone()
    };
    NlProfile {
        h,
        d1,
        d2,
        discriminant,
        nl_number,
        rnl_circ,
        rnl_diamond,
    }
}

fn check_degrees(d1: i64, d2: i64) -> Result<(), NlError> {
    if d1 < 0 || d2 < 0 || d1 + d2 == 0 {
        return Err(NlError::InvalidDegrees(d1, d2));
    }
    Ok(())
}

/// All Noether-Lefschetz profiles contributing to fiber degrees (d1, d2):
/// the discriminant is nonnegative exactly for h <= 1 + d1 d2.
pub fn stu_profiles(d1: i64, d2: i64) -> Result<Vec<NlProfile>, NlError> {
    check_degrees(d1, d2)?;
    Ok((0..=1 + d1 * d2).map(|h| stu_profile(h, d1, d2)).collect())
}

/// Refined invariants of the STU model in fiber degrees (d1, d2) via the
/// refined correspondence:
///
/// ```text
/// N^{(d1,d2)} = sum_h  R^{h,circle} (x) RNL^{circle}_{h,(d1,d2)}
///             + sum_h  R^{h,diamond} (x) RNL^{diamond}_{h,(d1,d2)}
/// ```
///
/// Every multiplicity in the result must be a nonnegative integer; a
/// violation is reported as a falsification.
pub fn stu_invariants(d1: i64, d2: i64) -> Result<SpinTable, NlError> {
    check_degrees(d1, d2)?;
    let hmax = (1 + d1 * d2) as usize;
    let triples = refined_tables(hmax)?;
    let mut acc = SpinTable::new();
    for (h, triple) in triples.iter().enumerate() {
        let profile = stu_profile(h as i64, d1, d2);
        acc = acc.add(&tensor(&triple.circle, &profile.rnl_circ));
        acc = acc.add(&tensor(&triple.diamond, &profile.rnl_diamond));
    }
    for (&(jl2, jr2), c) in acc.entries() {
        if !c.is_integer() || c.is_negative() {
            return Err(NlError::NegativeInvariant {
                jl2,
                jr2,
                value: c.to_string(),
            });
        }
    }
    Ok(acc)
}

/// Predicted (normalized) Poincare polynomials of the pairs moduli spaces
/// P_m(X, (d1, d2)) of the STU model, for Euler characteristics 0..=mmax.
pub fn stu_betti_predictions(d1: i64, d2: i64, mmax: i64) -> Result<Vec<ULaurent>, NlError> {
    let table = stu_invariants(d1, d2)?;
    let slices = poincare_prediction_series(&table, mmax)?;
    let mut out = Vec::with_capacity(mmax as usize + 1);
    for m in 0..=mmax {
        let p = slices.get(&m).cloned().unwrap_or_default();
        if !p.is_palindromic() {
            return Err(NlError::NonPalindromicPrediction {
                m,
                value: p.to_string(),
            });
        }
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;

    #[test]
    fn eisenstein_low_coefficients() {
        let e4 = eisenstein(4, 2).unwrap();
        assert_eq!(
            e4,
            vec![BigInt::from(1), BigInt::from(240), BigInt::from(2160)]
        );
        let e6 = eisenstein(6, 2).unwrap();
        assert_eq!(
            e6,
            vec![BigInt::from(1), BigInt::from(-504), BigInt::from(-16632)]
        );
        assert!(matches!(
            eisenstein(8, 1),
            Err(NlError::UnsupportedWeight(8))
        ));
    }

    #[test]
    fn weight_ten_product() {
        let p = minus_two_e4_e6(3);
        assert_eq!(
            p,
            vec![
                BigInt::from(-2),
                BigInt::from(528),
                BigInt::from(270864),
                BigInt::from(10393152)
            ]
        );
    }

    #[test]
    fn discriminants_match_determinant_oracle() {
        let gram = vec![vec![0, 1], vec![1, 0]];
        for (h, d1, d2) in [(1, 0, 1), (0, 0, 1), (3, 1, 1), (2, 0, 1), (5, 2, 3)] {
            let closed = stu_discriminant(h, d1, d2);
            let det = bordered_discriminant(&gram, &[d1, d2], h);
            assert_eq!(BigInt::from(closed), det, "(h,d1,d2)=({h},{d1},{d2})");
            assert_eq!(
                closed.rem_euclid(2),
                0,
                "even lattice gives even discriminant"
            );
        }
        assert_eq!(stu_discriminant(1, 0, 1), 0);
        assert_eq!(stu_discriminant(0, 0, 1), 2);
        assert_eq!(stu_discriminant(3, 1, 1), -2);
    }

    #[test]
    fn profiles() {
        let p = stu_profile(0, 0, 1);
        assert_eq!(p.nl_number, BigInt::from(528));
        assert_eq!(p.rnl_diamond, SpinTable::unit().scale(&rat(528)));

        let p = stu_profile(1, 0, 1);
        assert_eq!(p.discriminant, 0);
        assert_eq!(p.nl_number, BigInt::from(-2));
        assert_eq!(p.rnl_diamond, SpinTable::from_int_entries(&[(0, 1, 1)]));
        assert_eq!(p.rnl_circ, SpinTable::unit().scale(&rat(-2)));

        let p = stu_profile(2, 0, 1);
        assert!(p.discriminant < 0);
        assert!(p.nl_number.is_zero());
        assert!(p.rnl_circ.is_empty() && p.rnl_diamond.is_empty());
    }

    #[test]
    fn elliptic_fiber_class_invariants() {
        let t = stu_invariants(0, 1).unwrap();
        assert_eq!(
            t,
            SpinTable::from_int_entries(&[(0, 0, 488), (1, 0, 1), (1, 2, 1)])
        );
    }

    #[test]
    fn degree_one_one_block() {
        let t = stu_invariants(1, 1).unwrap();
        assert_eq!(
            t,
            SpinTable::from_int_entries(&[
                (0, 0, 280964),
                (0, 1, 1),
                (1, 0, 1),
                (1, 1, 488),
                (1, 2, 1),
                (2, 1, 1),
                (2, 3, 1),
            ])
        );
    }

    #[test]
    fn betti_predictions_for_the_elliptic_fiber() {
        let b = stu_betti_predictions(0, 1, 2).unwrap();
        assert_eq!(b[0], ULaurent::from_int_terms(&[(-2, 1), (0, 2), (2, 1)]));
        assert_eq!(
            b[1],
            ULaurent::from_int_terms(&[(-3, 1), (-1, 3), (0, 488), (1, 3), (3, 1)])
        );
        assert!(b[2].is_palindromic());
        assert!(b[2].is_nonnegative());
    }

    #[test]
    fn invariants_unrefine_to_integers() {
        // The genus-basis change of every computed block must land on
        // integer multiplicities.
        for d1 in 0..=2 {
            let t = stu_invariants(d1, 1).unwrap();
            let g = crate::su2::unrefine(&t).unwrap();
            assert!(!g.is_empty(), "degenerate genus table for ({d1}, 1)");
        }
    }

    #[test]
    fn degree_validation() {
        assert!(matches!(
            stu_invariants(0, 0),
            Err(NlError::InvalidDegrees(0, 0))
        ));
        assert!(matches!(
            stu_invariants(-1, 2),
            Err(NlError::InvalidDegrees(-1, 2))
        ));
    }
}
