//! Exact computation of refined BPS invariants of K3 surfaces and of the
//! STU Calabi-Yau 3-fold.
//!
//! The crate expands the generating function of Hodge polynomials of
//! Hilbert schemes of points of a K3 surface, decomposes its coefficients
//! into SU(2) x SU(2) characters to obtain the refined invariants
//! R^h_{jL,jR}, reduces them to the unrefined genus counts, assembles the
//! stable-pairs multiple-cover products built from them, and evaluates the
//! refined Pairs/Noether-Lefschetz correspondence for the STU model. All
//! arithmetic is exact, over arbitrary-precision rationals.
//!
//! Modules:
//! - [`laurent`], [`series`]: the computational substrate (bivariate
//!   Laurent polynomials, truncated series with exact validity windows).
//! - [`su2`]: characters, decomposition, Clebsch-Gordan tensor products,
//!   and the genus-basis change.
//! - [`hodge`]: the master products and the refined tables R, R-diamond,
//!   R-circle.
//! - [`pairs`]: multiple-cover products, the Kawai-Yoshioka consistency
//!   check, and predicted pairs invariants for multiple classes.
//! - [`noether_lefschetz`]: Eisenstein series, lattice discriminants,
//!   refined Noether-Lefschetz data and the STU invariants.
//! - [`motivic`]: mu_2-equivariant virtual Poincare calculus for monomial
//!   superpotentials and the elliptic-K3 example suite.
//! - [`moonshine`]: minimal decompositions into M24 irreducible dimensions.

pub mod hodge;
pub mod laurent;
pub mod moonshine;
pub mod motivic;
pub mod noether_lefschetz;
pub mod pairs;
pub mod par;
pub mod series;
pub mod su2;

pub use laurent::{BiLaurent, Rat, ULaurent};
pub use series::{GradingVar, TruncatedSeries, YWindow};
pub use su2::{GenusTable, SpinTable};

use thiserror::Error;

/// Any error produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Series(#[from] series::SeriesError),
    #[error(transparent)]
    Su2(#[from] su2::Su2Error),
    #[error(transparent)]
    Hodge(#[from] hodge::HodgeError),
    #[error(transparent)]
    Pairs(#[from] pairs::PairsError),
    #[error(transparent)]
    Nl(#[from] noether_lefschetz::NlError),
    #[error(transparent)]
    Motivic(#[from] motivic::MotivicError),
}

impl Error {
    /// True when the error reports a failed expected identity (a falsified
    /// prediction) rather than an invalid invocation. The command line maps
    /// falsifications and usage errors to distinct exit codes.
    pub fn is_falsification(&self) -> bool {
        match self {
            Error::Hodge(hodge::HodgeError::CircleNegative { .. })
            | Error::Hodge(hodge::HodgeError::NonIntegralDirectGenus(_))
            | Error::Pairs(pairs::PairsError::NonIntegralEntry { .. })
            | Error::Pairs(pairs::PairsError::NonPalindromicEntry { .. })
            | Error::Pairs(pairs::PairsError::Inconsistent(_))
            | Error::Nl(noether_lefschetz::NlError::NegativeInvariant { .. })
            | Error::Nl(noether_lefschetz::NlError::NonPalindromicPrediction { .. })
            | Error::Su2(su2::Su2Error::NonIntegralGenus(_))
            | Error::Su2(su2::Su2Error::GenusRemainder) => true,
            Error::Pairs(pairs::PairsError::Hodge(e)) => matches!(
                e,
                hodge::HodgeError::CircleNegative { .. }
                    | hodge::HodgeError::NonIntegralDirectGenus(_)
            ),
            Error::Nl(noether_lefschetz::NlError::Hodge(e)) => matches!(
                e,
                hodge::HodgeError::CircleNegative { .. }
                    | hodge::HodgeError::NonIntegralDirectGenus(_)
            ),
            _ => false,
        }
    }
}
