//! Truncated formal power series over bivariate Laurent coefficients.
//!
//! A [`TruncatedSeries`] is a series in one grading variable (`q` for the
//! genus/fiber-degree direction, `v` for class multiplicity) whose
//! coefficients are [`BiLaurent`] polynomials. Truncation is a hard validity
//! bound: every coefficient of degree <= `trunc` is exact, and extraction
//! beyond it is an error, never silently zero.
//!
//! Some series (the multiple-cover products) are additionally only exact for
//! a finite range of y-exponents. That range is tracked as a [`YWindow`]:
//! `lo` is a guaranteed lower bound on the y-support of every coefficient and
//! all terms with y-exponent <= `hi` are exact. Arithmetic propagates windows
//! conservatively; `None` means exact for all y-exponents.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::laurent::{binomial, rat, rat_frac, BiLaurent, Rat};

/// Grading variable of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingVar {
    /// Genus / fiber-degree direction.
    Q,
    /// Class-multiplicity direction.
    V,
}

impl fmt::Display for GradingVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingVar::Q => write!(f, "q"),
            GradingVar::V => write!(f, "v"),
        }
    }
}

/// Validity range for y-exponents: support is bounded below by `lo` and all
/// terms with exponent <= `hi` are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct YWindow {
    pub lo: i64,
    pub hi: i64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("grading variables differ: {0} vs {1}")]
    GradingMismatch(GradingVar, GradingVar),
    #[error("coefficient of degree {requested} is beyond truncation order {trunc}")]
    BeyondTruncation { requested: usize, trunc: usize },
    #[error("y-exponent {requested} is beyond the exact window (hi = {hi})")]
    BeyondWindow { requested: i64, hi: i64 },
    #[error("expand_factor requires a single-monomial base, got {0} terms")]
    NotMonomial(usize),
    #[error("series_log requires constant term 1")]
    LogConstantTerm,
    #[error("series_exp requires constant term 0")]
    ExpConstantTerm,
}

/// Truncated formal power series with `BiLaurent` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    var: GradingVar,
    trunc: usize,
    y_window: Option<YWindow>,
    coeffs: BTreeMap<usize, BiLaurent>,
}

impl TruncatedSeries {
    pub fn zero(var: GradingVar, trunc: usize) -> Self {
        Self {
            var,
            trunc,
            y_window: None,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(var: GradingVar, trunc: usize) -> Self {
        let mut s = Self::zero(var, trunc);
        s.set_coeff(0, BiLaurent::one());
        s
    }

    /// c * x^d + O(x^{trunc+1}).
    pub fn monomial(var: GradingVar, d: usize, c: BiLaurent, trunc: usize) -> Self {
        let mut s = Self::zero(var, trunc);
        s.set_coeff(d, c);
        s
    }

    pub fn var(&self) -> GradingVar {
        self.var
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn y_window(&self) -> Option<YWindow> {
        self.y_window
    }

    /// Stamp a y-validity window established by the caller's own
    /// completeness analysis (used by the multiple-cover builders, which
    /// know sharper bounds than generic propagation can derive).
    pub fn with_y_window(mut self, w: Option<YWindow>) -> Self {
        self.y_window = w;
        self
    }

    pub fn set_coeff(&mut self, d: usize, c: BiLaurent) {
        assert!(
            d <= self.trunc,
            "degree {d} beyond truncation {}",
            self.trunc
        );
        if c.is_zero() {
            self.coeffs.remove(&d);
        } else {
            self.coeffs.insert(d, c);
        }
    }

    /// Exact coefficient of degree d. Extraction beyond the truncation
    /// order is an error.
    pub fn coeff(&self, d: usize) -> Result<BiLaurent, SeriesError> {
        if d > self.trunc {
            return Err(SeriesError::BeyondTruncation {
                requested: d,
                trunc: self.trunc,
            });
        }
        Ok(self.coeffs.get(&d).cloned().unwrap_or_else(BiLaurent::zero))
    }

    pub fn coeff_ref(&self, d: usize) -> Option<&BiLaurent> {
        self.coeffs.get(&d)
    }

    /// Coefficient of x^d restricted to the y-exponent `ey`; errors if `ey`
    /// lies outside the exact window.
    pub fn coeff_at(&self, d: usize, ey: i64) -> Result<crate::laurent::ULaurent, SeriesError> {
        if let Some(w) = self.y_window {
            if ey > w.hi {
                return Err(SeriesError::BeyondWindow {
                    requested: ey,
                    hi: w.hi,
                });
            }
        }
        Ok(self.coeff(d)?.y_slice(ey))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &BiLaurent)> {
        self.coeffs.iter()
    }

    /// Effective window for propagation: exact series use their actual
    /// y-support lower bound and an unbounded top.
    fn effective_window(&self) -> (i64, Option<i64>) {
        match self.y_window {
            Some(w) => (w.lo, Some(w.hi)),
            None => {
                let lo = self
                    .coeffs
                    .values()
                    .filter_map(|c| c.min_ey())
                    .min()
                    .unwrap_or(0);
                (lo, None)
            }
        }
    }

    fn check_var(&self, other: &Self) -> Result<(), SeriesError> {
        if self.var != other.var {
            return Err(SeriesError::GradingMismatch(self.var, other.var));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = Self::zero(self.var, trunc);
        for d in 0..=trunc {
            let mut c = self.coeffs.get(&d).cloned().unwrap_or_else(BiLaurent::zero);
            if let Some(b) = other.coeffs.get(&d) {
                c = c.add(b);
            }
            out.set_coeff(d, c);
        }
        out.y_window = match (self.y_window, other.y_window) {
            (None, None) => None,
            _ => {
                let (lo_a, hi_a) = self.effective_window();
                let (lo_b, hi_b) = other.effective_window();
                let hi = match (hi_a, hi_b) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => unreachable!(),
                };
                Some(YWindow {
                    lo: lo_a.min(lo_b),
                    hi,
                })
            }
        };
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.var, self.trunc);
        for (&d, p) in &self.coeffs {
            out.set_coeff(d, p.scale(c));
        }
        out.y_window = self.y_window;
        out
    }

    /// Cauchy product, truncated at the minimum of the two orders. The
    /// y-window of the result is the conservative combination
    /// min(hi_a + lo_b, hi_b + lo_a).
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = Self::zero(self.var, trunc);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(out);
        }
        let mut acc: BTreeMap<usize, BiLaurent> = BTreeMap::new();
        for (&da, ca) in &self.coeffs {
            if da > trunc {
                break;
            }
            for (&db, cb) in &other.coeffs {
                if da + db > trunc {
                    break;
                }
                let prod = ca.mul(cb);
                acc.entry(da + db)
                    .and_modify(|p| *p = p.add(&prod))
                    .or_insert(prod);
            }
        }
        for (d, c) in acc {
            out.set_coeff(d, c);
        }
        out.y_window = match (self.y_window, other.y_window) {
            (None, None) => None,
            _ => {
                let (lo_a, hi_a) = self.effective_window();
                let (lo_b, hi_b) = other.effective_window();
                let hi = match (hi_a, hi_b) {
                    (Some(a), Some(b)) => (a + lo_b).min(b + lo_a),
                    (Some(a), None) => a + lo_b,
                    (None, Some(b)) => b + lo_a,
                    (None, None) => unreachable!(),
                };
                Some(YWindow {
                    lo: lo_a + lo_b,
                    hi,
                })
            }
        };
        Ok(out)
    }

    /// Formal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeff(0)?.is_one() {
            return Err(SeriesError::LogConstantTerm);
        }
        let mut x = self.clone();
        x.set_coeff(0, BiLaurent::zero());
        // log(1 + X) = sum_{k>=1} (-1)^{k+1} X^k / k; X has valuation >= 1.
        let mut acc = x.clone();
        let mut power = x.clone();
        for k in 2..=self.trunc {
            power = power.mul(&x)?;
            let sign = if k % 2 == 0 { -1 } else { 1 };
            acc = acc.add(&power.scale(&rat_frac(sign, k as i64)))?;
        }
        Ok(acc)
    }

    /// Formal exponential of a series with constant term 0.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeff(0)?.is_zero() {
            return Err(SeriesError::ExpConstantTerm);
        }
        let mut acc = Self::one(self.var, self.trunc);
        let mut power = Self::one(self.var, self.trunc);
        let mut factorial = rat(1);
        for k in 1..=self.trunc {
            power = power.mul(self)?;
            factorial *= rat(k as i64);
            acc = acc.add(&power.scale(&(rat(1) / factorial.clone())))?;
        }
        Ok(acc)
    }

    /// Substitute u = su, y = sy (signs) in every coefficient, producing the
    /// sequence of scalar coefficients.
    pub fn specialize_pm_one(&self, su: i64, sy: i64) -> Vec<Rat> {
        (0..=self.trunc)
            .map(|d| {
                self.coeffs
                    .get(&d)
                    .map(|c| c.eval_pm_one(su, sy))
                    .unwrap_or_else(Rat::zero)
            })
            .collect()
    }
}

/// Binomial expansion of (1 - m x^n)^e truncated at x^trunc, where m is a
/// single monomial and e may be negative (geometric / negative-binomial
/// expansion). Coefficients are integral whenever e is integral.
pub fn expand_factor(
    m: &BiLaurent,
    n: usize,
    e: i64,
    var: GradingVar,
    trunc: usize,
) -> Result<TruncatedSeries, SeriesError> {
    if m.num_terms() != 1 {
        return Err(SeriesError::NotMonomial(m.num_terms()));
    }
    assert!(n >= 1, "factor degree must be positive");
    let (&(eu, ey), c) = m.terms().next().expect("nonempty");
    let mut out = TruncatedSeries::zero(var, trunc);
    let mut r: u64 = 0;
    loop {
        let d = (r as usize) * n;
        if d > trunc {
            break;
        }
        // C(e, r) * (-m)^r
        let mut coeff = binomial(e, r);
        if r % 2 == 1 {
            coeff = -coeff;
        }
        let mut cpow = rat(1);
        for _ in 0..r {
            cpow *= c.clone();
        }
        out.set_coeff(
            d,
            BiLaurent::monomial(eu * r as i64, ey * r as i64, coeff * cpow),
        );
        r += 1;
    }
    Ok(out)
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct CoeffRepr<'a> {
            deg: usize,
            terms: &'a BiLaurent,
        }
        #[derive(Serialize)]
        struct SeriesRepr<'a> {
            var: GradingVar,
            trunc: usize,
            ywindow: Option<YWindow>,
            coeffs: Vec<CoeffRepr<'a>>,
        }
        SeriesRepr {
            var: self.var,
            trunc: self.trunc,
            ywindow: self.y_window,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&deg, terms)| CoeffRepr { deg, terms })
                .collect(),
        }
        .serialize(s)
    }
}
