//! Exact Laurent polynomials in the character variables.
//!
//! Two sparse types built on arbitrary-precision rationals:
//!
//! - [`ULaurent`]: Laurent polynomial in the single variable `u` (the
//!   right-spin / Poincaré variable).
//! - [`BiLaurent`]: Laurent polynomial in `u` and `y` (right- and left-spin
//!   variables), the universal coefficient object for every generating
//!   function in the crate.
//!
//! Nonzero coefficients only are stored; exponents may be negative; all
//! arithmetic is exact. Term order is lexicographic on `(e_u, e_y)`, so
//! iteration and serialization are deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize};

/// Exact rational coefficient type used throughout the crate.
pub type Rat = BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational n/d.
pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Generalized binomial coefficient C(e, r) for integer e (possibly negative).
/// Always integral for integral e.
pub fn binomial(e: i64, r: u64) -> Rat {
    let mut num = BigInt::one();
    for i in 0..r as i64 {
        num *= BigInt::from(e - i);
    }
    let mut den = BigInt::one();
    for i in 1..=r as i64 {
        den *= BigInt::from(i);
    }
    Rat::new(num, den)
}

fn fmt_coeff(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_var(name: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{e}"),
    }
}

/// Join (coefficient, monomial-string) pairs with explicit signs.
fn fmt_terms(terms: Vec<(Rat, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (c, mono)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&fmt_coeff(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&fmt_coeff(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

/// Serialized form of one `ULaurent` term.
#[derive(Serialize, Deserialize)]
struct UTermRepr {
    e: i64,
    num: String,
    den: String,
}

/// Sparse Laurent polynomial in `u` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ULaurent {
    terms: BTreeMap<i64, Rat>,
}

impl ULaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, rat(1))
    }

    pub fn monomial(e: i64, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c);
        }
        p
    }

    /// Convenience: integer coefficients at the given exponents.
    pub fn from_int_terms(pairs: &[(i64, i64)]) -> Self {
        Self::from_terms(pairs.iter().map(|&(e, c)| (e, rat(c))))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: i64) -> Rat {
        self.terms.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &other.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Multiply by the monomial u^e.
    pub fn shift(&self, e: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k + e, c.clone()))
                .collect(),
        }
    }

    /// Substitute u = 1 (sign = 1) or u = -1 (sign = -1).
    pub fn eval_pm_one(&self, sign: i64) -> Rat {
        let mut acc = Rat::zero();
        for (&e, c) in &self.terms {
            if sign == 1 || e.rem_euclid(2) == 0 {
                acc += c.clone();
            } else {
                acc -= c.clone();
            }
        }
        acc
    }

    /// Substitute u -> -u.
    pub fn negate_var(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| {
                    (
                        e,
                        if e.rem_euclid(2) == 0 {
                            c.clone()
                        } else {
                            -c.clone()
                        },
                    )
                })
                .collect(),
        }
    }

    /// Invariant under u -> 1/u.
    pub fn is_palindromic(&self) -> bool {
        self.terms.iter().all(|(&e, c)| self.coeff(-e) == *c)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

impl fmt::Display for ULaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .terms
            .iter()
            .map(|(&e, c)| (c.clone(), fmt_var("u", e)))
            .collect();
        write!(f, "{}", fmt_terms(parts))
    }
}

impl Serialize for ULaurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (&e, c) in &self.terms {
            seq.serialize_element(&UTermRepr {
                e,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ULaurent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let reprs = Vec::<UTermRepr>::deserialize(d)?;
        let mut out = ULaurent::zero();
        for t in reprs {
            let num: BigInt = t.num.parse().map_err(serde::de::Error::custom)?;
            let den: BigInt = t.den.parse().map_err(serde::de::Error::custom)?;
            if den.is_zero() {
                return Err(serde::de::Error::custom("zero denominator"));
            }
            out.add_term(t.e, Rat::new(num, den));
        }
        Ok(out)
    }
}

/// Serialized form of one `BiLaurent` term.
#[derive(Serialize, Deserialize)]
struct BiTermRepr {
    eu: i64,
    ey: i64,
    num: String,
    den: String,
}

/// Sparse Laurent polynomial in `u` and `y` with exact rational coefficients.
///
/// Keys are `(e_u, e_y)` exponent pairs in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiLaurent {
    terms: BTreeMap<(i64, i64), Rat>,
}

impl BiLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, rat(1))
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(eu: i64, ey: i64, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((eu, ey), c);
        }
        Self { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, i64, Rat)>) -> Self {
        let mut p = Self::zero();
        for (eu, ey, c) in pairs {
            p.add_term(eu, ey, c);
        }
        p
    }

    pub fn from_int_terms(pairs: &[(i64, i64, i64)]) -> Self {
        Self::from_terms(pairs.iter().map(|&(eu, ey, c)| (eu, ey, rat(c))))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0, 0).is_one()
    }

    pub fn add_term(&mut self, eu: i64, ey: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((eu, ey)).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(eu, ey));
        }
    }

    pub fn coeff(&self, eu: i64, ey: i64) -> Rat {
        self.terms.get(&(eu, ey)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(eu, ey), c) in &other.terms {
            out.add_term(eu, ey, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(eu, ey), c) in &other.terms {
            out.add_term(eu, ey, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(ua, ya), ca) in &self.terms {
            for (&(ub, yb), cb) in &other.terms {
                out.add_term(ua + ub, ya + yb, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn min_ey(&self) -> Option<i64> {
        self.terms.keys().map(|&(_, ey)| ey).min()
    }

    pub fn max_ey(&self) -> Option<i64> {
        self.terms.keys().map(|&(_, ey)| ey).max()
    }

    pub fn max_eu(&self) -> Option<i64> {
        self.terms.keys().map(|&(eu, _)| eu).max()
    }

    /// Substitute u = ±1, leaving a polynomial in y alone (exponent = e_y).
    pub fn collapse_u(&self, sign: i64) -> ULaurent {
        let mut out = ULaurent::zero();
        for (&(eu, ey), c) in &self.terms {
            let s = if sign == 1 || eu.rem_euclid(2) == 0 {
                c.clone()
            } else {
                -c.clone()
            };
            out.add_term(ey, s);
        }
        out
    }

    /// Substitute y = ±1, leaving a polynomial in u alone (exponent = e_u).
    pub fn collapse_y(&self, sign: i64) -> ULaurent {
        let mut out = ULaurent::zero();
        for (&(eu, ey), c) in &self.terms {
            let s = if sign == 1 || ey.rem_euclid(2) == 0 {
                c.clone()
            } else {
                -c.clone()
            };
            out.add_term(eu, s);
        }
        out
    }

    /// Substitute u = su, y = sy for signs ±1.
    pub fn eval_pm_one(&self, su: i64, sy: i64) -> Rat {
        let mut acc = Rat::zero();
        for (&(eu, ey), c) in &self.terms {
            let mut neg = false;
            if su == -1 && eu.rem_euclid(2) == 1 {
                neg = !neg;
            }
            if sy == -1 && ey.rem_euclid(2) == 1 {
                neg = !neg;
            }
            if neg {
                acc -= c.clone();
            } else {
                acc += c.clone();
            }
        }
        acc
    }

    /// Substitute y -> -y.
    pub fn negate_y(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(eu, ey), c)| {
                    (
                        (eu, ey),
                        if ey.rem_euclid(2) == 0 {
                            c.clone()
                        } else {
                            -c.clone()
                        },
                    )
                })
                .collect(),
        }
    }

    /// Invariant under u -> 1/u.
    pub fn is_u_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(&(eu, ey), c)| self.coeff(-eu, ey) == *c)
    }

    /// Invariant under y -> 1/y.
    pub fn is_y_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(&(eu, ey), c)| self.coeff(eu, -ey) == *c)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// The coefficient of y^ey as a polynomial in u.
    pub fn y_slice(&self, ey: i64) -> ULaurent {
        let mut out = ULaurent::zero();
        for (&(eu, e), c) in &self.terms {
            if e == ey {
                out.add_term(eu, c.clone());
            }
        }
        out
    }

    /// Split into (e_y, u-polynomial) slices.
    pub fn y_slices(&self) -> BTreeMap<i64, ULaurent> {
        let mut out: BTreeMap<i64, ULaurent> = BTreeMap::new();
        for (&(eu, ey), c) in &self.terms {
            out.entry(ey).or_default().add_term(eu, c.clone());
        }
        out
    }

    /// Embed a u-polynomial at a fixed power of y.
    pub fn from_u_poly(p: &ULaurent, ey: i64) -> Self {
        Self::from_terms(p.terms().map(|(&e, c)| (e, ey, c.clone())))
    }
}

impl fmt::Display for BiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .terms
            .iter()
            .map(|(&(eu, ey), c)| {
                let up = fmt_var("u", eu);
                let yp = fmt_var("y", ey);
                let mono = match (up.is_empty(), yp.is_empty()) {
                    (true, true) => String::new(),
                    (false, true) => up,
                    (true, false) => yp,
                    (false, false) => format!("{up}*{yp}"),
                };
                (c.clone(), mono)
            })
            .collect();
        write!(f, "{}", fmt_terms(parts))
    }
}

impl Serialize for BiLaurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (&(eu, ey), c) in &self.terms {
            seq.serialize_element(&BiTermRepr {
                eu,
                ey,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })?;
        }
        seq.end()
    }
}
