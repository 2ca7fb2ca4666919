//! mu_2-equivariant virtual Poincare calculus for monomial superpotentials.
//!
//! Works in the virtual-Poincare realization of equivariant motives: a class
//! is a pair (even, odd) of Laurent polynomials in u recording the invariant
//! and anti-invariant parts of compactly supported cohomology. The
//! realization of such a pair is `even - u * odd`, so the regular
//! representation class [mu_2, rho] = (1, 1) realizes to 1 - u and its
//! square realizes to (1 - u)^2 = realization of L; the half Tate class
//! L^{1/2} = 1 - [mu_2, rho] realizes to u.
//!
//! For a monomial superpotential f = prod z_i^{n_i}, the nearby cycle is
//! built from the strata E_I (z_i = 0 exactly for i in I) and their cyclic
//! covers, and the vanishing cycle is
//!
//! ```text
//! L^{-dim U / 2} ( [U_0] - sum_{I != empty} (1 - L)^{|I|-1} [E~_I, rho_I] )
//! ```
//!
//! The strata data (Poincare polynomials, cover parities) is supplied as
//! input; this module does not derive scheme structures.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{Rat, ULaurent};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MotivicError {
    #[error("invalid strata data: {0}")]
    InvalidStrata(String),
}

/// Virtual Poincare realization of a mu_2-equivariant motive: invariant and
/// anti-invariant parts of compactly supported cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EqPoincare {
    pub even: ULaurent,
    pub odd: ULaurent,
}

impl EqPoincare {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Multiplicative identity: the class of a point with trivial action.
    pub fn one() -> Self {
        Self::trivial(ULaurent::one())
    }

    /// A class with trivial mu_2 action.
    pub fn trivial(p: ULaurent) -> Self {
        Self {
            even: p,
            odd: ULaurent::zero(),
        }
    }

    /// The regular representation class [mu_2, rho].
    pub fn mu2_regular() -> Self {
        Self {
            even: ULaurent::one(),
            odd: ULaurent::one(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            even: self.even.add(&other.even),
            odd: self.odd.add(&other.odd),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            even: self.even.sub(&other.even),
            odd: self.odd.sub(&other.odd),
        }
    }

    /// Convolution product: the odd-odd part lands in the even part with a
    /// Tate twist, realized as u^2.
    pub fn mul(&self, other: &Self) -> Self {
        let twist = ULaurent::from_int_terms(&[(2, 1)]);
        let even = self
            .even
            .mul(&other.even)
            .add(&self.odd.mul(&other.odd).mul(&twist));
        let odd = self.even.mul(&other.odd).add(&self.odd.mul(&other.even));
        Self { even, odd }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            even: self.even.scale(c),
            odd: self.odd.scale(c),
        }
    }

    /// Virtual Poincare polynomial: even - u * odd.
    pub fn realize(&self) -> ULaurent {
        self.even.sub(&self.odd.shift(1))
    }
}

/// One stratum E_I of a monomial superpotential, with its cover data.
///
/// `indices` are the 1-based coordinates vanishing on the stratum. When the
/// gcd of the corresponding exponents is greater than 1, the cyclic cover
/// E~_I carries a nontrivial action and `cover` must supply its equivariant
/// class (whose invariant part is the stratum itself); otherwise the cover
/// is trivial and `cover` must be absent.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Stratum {
    pub indices: Vec<usize>,
    pub poincare: ULaurent,
    #[serde(default)]
    pub cover: Option<EqPoincare>,
}

/// Strata presentation of a monomial superpotential f = prod z_i^{n_i} on an
/// ambient chart of dimension `ambient_dim`. For f = 0 (no exponents) the
/// class of the ambient space itself is required instead.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrataInput {
    pub ambient_dim: u32,
    pub exponents: Vec<u32>,
    #[serde(default)]
    pub strata: Vec<Stratum>,
    #[serde(default)]
    pub ambient: Option<ULaurent>,
}

impl StrataInput {
    /// Parse from the JSON strata document format.
    pub fn from_json(text: &str) -> Result<Self, MotivicError> {
        serde_json::from_str(text).map_err(|e| MotivicError::InvalidStrata(e.to_string()))
    }

    fn validate(&self) -> Result<(), MotivicError> {
        if self.exponents.is_empty() {
            if self.ambient.is_none() {
                return Err(MotivicError::InvalidStrata(
                    "empty superpotential requires the ambient class".into(),
                ));
            }
            return Ok(());
        }
        if self.exponents.contains(&0) {
            return Err(MotivicError::InvalidStrata(
                "exponents must be positive".into(),
            ));
        }
        let k = self.exponents.len();
        if k > 8 {
            return Err(MotivicError::InvalidStrata(
                "too many divisor components".into(),
            ));
        }
        let mut seen = vec![false; 1 << k];
        for s in &self.strata {
            let mut mask = 0usize;
            for &i in &s.indices {
                if i == 0 || i > k {
                    return Err(MotivicError::InvalidStrata(format!(
                        "index {i} out of range 1..={k}"
                    )));
                }
                mask |= 1 << (i - 1);
            }
            if s.indices.is_empty() {
                return Err(MotivicError::InvalidStrata("empty index set".into()));
            }
            if seen[mask] {
                return Err(MotivicError::InvalidStrata("duplicate index set".into()));
            }
            seen[mask] = true;
            let m = self.cover_order(&s.indices);
            match (&s.cover, m > 1) {
                (None, true) => {
                    return Err(MotivicError::InvalidStrata(format!(
                        "stratum {:?} has cover order {m} but no cover data",
                        s.indices
                    )))
                }
                (Some(_), false) => {
                    return Err(MotivicError::InvalidStrata(format!(
                        "stratum {:?} has trivial cover but cover data supplied",
                        s.indices
                    )))
                }
                (Some(c), true) => {
                    if c.even != s.poincare {
                        return Err(MotivicError::InvalidStrata(format!(
                            "stratum {:?}: invariant part of the cover must equal the stratum",
                            s.indices
                        )));
                    }
                }
                (None, false) => {}
            }
        }
        if seen.iter().skip(1).any(|&b| !b) {
            return Err(MotivicError::InvalidStrata(
                "strata must cover every nonempty index set".into(),
            ));
        }
        Ok(())
    }

    /// Cover order m_I = gcd of the exponents selected by I.
    pub fn cover_order(&self, indices: &[usize]) -> u32 {
        indices
            .iter()
            .map(|&i| self.exponents[i - 1])
            .fold(0u32, |a, b| a.gcd(&b))
    }
}

/// Motivic nearby cycle in the equivariant realization:
/// `sum_{I != empty} (1 - L)^{|I|-1} [E~_I, rho_I]`.
pub fn nearby_cycle(input: &StrataInput) -> Result<EqPoincare, MotivicError> {
    input.validate()?;
    let one_minus_l = EqPoincare::trivial(ULaurent::from_int_terms(&[(0, 1), (2, -1)]));
    let mut acc = EqPoincare::zero();
    for s in &input.strata {
        let cover_class = match &s.cover {
            Some(c) => c.clone(),
            None => EqPoincare::trivial(s.poincare.clone()),
        };
        let mut term = cover_class;
        for _ in 1..s.indices.len() {
            term = term.mul(&one_minus_l);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Realized motivic vanishing cycle:
/// `u^{-dim U} ( [U_0] - realization of the nearby cycle )`, with the
/// convention that the empty superpotential gives `u^{-dim U} [U]`.
pub fn vanishing_cycle(input: &StrataInput) -> Result<ULaurent, MotivicError> {
    input.validate()?;
    let dim = input.ambient_dim as i64;
    if input.exponents.is_empty() {
        let u = input.ambient.as_ref().expect("validated");
        return Ok(u.shift(-dim));
    }
    let zero_fiber = input
        .strata
        .iter()
        .fold(ULaurent::zero(), |acc, s| acc.add(&s.poincare));
    let nearby = nearby_cycle(input)?.realize();
    Ok(zero_fiber.sub(&nearby).shift(-dim))
}

/// Virtual class of a moduli space M nonreduced along a divisor D, in terms
/// of the branched double cover: the realization of
/// `L^{-(dim M + 1)/2} ( [M - D] - [M~ - D~, iota] + L [D] )`,
/// where `odd_cover` is the anti-invariant part of the cover minus
/// ramification. The reduced class cancels, leaving
/// `u^{-(dim M + 1)} ( u * odd_cover + u^2 * [D] )`.
pub fn double_cover_virtual(
    m_reduced: &ULaurent,
    d: &ULaurent,
    odd_cover: &ULaurent,
    dim_m: u32,
) -> ULaurent {
    let base = m_reduced.sub(d);
    let cover = EqPoincare {
        even: base.clone(),
        odd: odd_cover.clone(),
    };
    let twisted_d = d.shift(2);
    base.sub(&cover.realize())
        .add(&twisted_d)
        .shift(-(dim_m as i64) - 1)
}

/// Virtual class of a moduli space with two nonsingular components meeting
/// transversally: the realization of
/// `L^{-dim M / 2} ( [M] + [E_12] (L^{1/2} - L) )`.
pub fn two_component_virtual(total: &ULaurent, intersection: &ULaurent, dim_m: u32) -> ULaurent {
    let correction = intersection.mul(&ULaurent::from_int_terms(&[(1, 1), (2, -1)]));
    total.add(&correction).shift(-(dim_m as i64))
}

/// Results of the elliptically fibered K3 example suite.
#[derive(Clone, Debug, Serialize)]
pub struct EllipticK3Report {
    /// Class of the two-component Euler-characteristic-1 moduli space.
    pub component_class: ULaurent,
    /// Coefficients of v^{s+f} in the logarithm of the partition function.
    pub sf_q0: ULaurent,
    pub sf_q1: ULaurent,
    /// Coefficients of v^f for comparison.
    pub f_q0: ULaurent,
    pub f_q1: ULaurent,
    /// Branched-double-cover computation for the doubled fiber class.
    pub double_fiber: ULaurent,
    /// Strata-sum route for the two-component virtual class, which must
    /// agree with the closed form.
    pub strata_route_matches: bool,
}

impl EllipticK3Report {
    /// All equalities the example is expected to satisfy.
    pub fn passed(&self) -> bool {
        self.sf_q0 == self.f_q0 && self.sf_q1 == self.f_q1 && self.strata_route_matches
    }
}

/// Worked example: an elliptically fibered K3 surface with section s and
/// fiber f. Assembles the partition function in the classes s, f, s + f to
/// order q, takes the v-logarithm, and compares the v^{s+f} coefficients
/// with the v^f ones (deformation invariance). Also runs the doubled-fiber
/// branched-cover computation.
pub fn elliptic_k3_suite() -> EllipticK3Report {
    let p1 = ULaurent::from_int_terms(&[(0, 1), (2, 1)]);
    let k3 = ULaurent::from_int_terms(&[(0, 1), (2, 22), (4, 1)]);
    let p1xp1 = p1.mul(&p1);

    // Euler characteristic 1 moduli in class s + f: a copy of the surface
    // and P^1 x P^1 glued along the section.
    let component_class = k3.add(&p1xp1).sub(&p1);
    let virt_sf_q1 = two_component_virtual(&component_class, &p1, 2);

    // Strata route for the same class: ambient chart of dimension 3,
    // superpotential z1^2 z2^2, disconnected double covers throughout.
    let strata = StrataInput {
        ambient_dim: 3,
        exponents: vec![2, 2],
        strata: vec![
            stratum_with_disconnected_cover(vec![1], k3.sub(&p1)),
            stratum_with_disconnected_cover(vec![2], p1xp1.sub(&p1)),
            stratum_with_disconnected_cover(vec![1, 2], p1.clone()),
        ],
        ambient: None,
    };
    let strata_route = vanishing_cycle(&strata).expect("valid strata");
    let strata_route_matches = strata_route == virt_sf_q1;

    // Partition function coefficients to order q.
    let l_half_p1 = p1.shift(-1); // L^{-1/2} [P^1]
    let f_q0 = l_half_p1.clone();
    let f_q1 = k3.shift(-2); // L^{-1} [S]
    let sf_q0 = l_half_p1.clone();
    // v^{s+f} log coefficient at q: subtract the v^s * v^f cross term.
    let sf_q1 = virt_sf_q1.sub(&l_half_p1);

    // Doubled fiber class, Euler characteristic 0: divisors form a plane,
    // nonreduced along the conic of doubled fibers. The double cover of the
    // plane branched along the conic is a quadric; the odd part of the
    // cover minus ramification is L.
    let p2 = ULaurent::from_int_terms(&[(0, 1), (2, 1), (4, 1)]);
    let conic = p1.clone();
    let quadric = p1.mul(&p1);
    let odd_cover = quadric.sub(&conic).sub(&p2.sub(&conic));
    let double_fiber = double_cover_virtual(&p2, &conic, &odd_cover, 2);

    EllipticK3Report {
        component_class,
        sf_q0,
        sf_q1,
        f_q0,
        f_q1,
        double_fiber,
        strata_route_matches,
    }
}

/// Stratum whose cyclic cover is the disconnected double cover, so the
/// equivariant class is the stratum times [mu_2, rho].
fn stratum_with_disconnected_cover(indices: Vec<usize>, poincare: ULaurent) -> Stratum {
    let cover = EqPoincare::trivial(poincare.clone()).mul(&EqPoincare::mu2_regular());
    Stratum {
        indices,
        poincare,
        cover: Some(cover),
    }
}
