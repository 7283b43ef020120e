//! Schmidt polynomials and the weighted sums whose coefficients are checked
//! for divisibility.
//!
//! The multi-variable Schmidt polynomial is
//!
//! ```text
//! S_n^(r)(x_0, ..., x_n) = sum_{k=0}^{n} C(n+k, 2k)^r C(2k, k) x_k
//! ```
//!
//! and the single-variable one is `S_n^(r)(x) = sum_k C(n,k)^r C(n+k,k)^r x^k`.
//! Since `C(n+k, 2k) C(2k, k) = C(n, k) C(n+k, k)`, substituting
//! `x_k -> C(2k,k)^(r-1) x^k` turns the first into the second
//! (see [`AperyRule`]).

use std::fmt;

use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::arith::{binom_i, central_binom, Integer};
use crate::error::{Error, Result};
use crate::mpoly::{Monomial, MultiPoly, SpecializationRule, UniPoly};

/// The sign `ε` in front of the alternating sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];

    /// `ε^k`.
    pub fn pow(self, k: u64) -> i64 {
        match self {
            Sign::Minus if k % 2 == 1 => -1,
            _ => 1,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be +1 or -1, got {v}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-1",
            Sign::Plus => "+1",
        })
    }
}

/// Extra factor `w(k)` multiplying `(2k+1)` in a weighted sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    /// `w(k) = 1`.
    Plain,
    /// `w(k) = k^a (k+1)^a`.
    Kk1PowA,
    /// `w(k) = (2k+1)^(2a)`.
    OddSquarePowA,
}

impl Weight {
    pub fn factor(self, k: u64, a: u32) -> Integer {
        match self {
            Weight::Plain => Integer::one(),
            Weight::Kk1PowA => Pow::pow(Integer::from(k * (k + 1)), a),
            Weight::OddSquarePowA => Pow::pow(Integer::from(2 * k + 1), 2 * a),
        }
    }
}

/// Parameters of one congruence instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SchmidtParams {
    pub n: u32,
    pub m: u32,
    pub r: u32,
    pub epsilon: Sign,
    #[serde(default)]
    pub a: u32,
}

impl SchmidtParams {
    pub fn new(n: u32, m: u32, r: u32, epsilon: Sign) -> Result<Self> {
        Self::with_a(n, m, r, epsilon, 0)
    }

    pub fn with_a(n: u32, m: u32, r: u32, epsilon: Sign, a: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        Ok(SchmidtParams { n, m, r, epsilon, a })
    }
}

/// Coefficient `C(n+k, 2k)^r C(2k, k)` of `x_k` in `S_n^(r)`.
pub fn schmidt_coeff(n: u32, k: u32, r: u32) -> Integer {
    Pow::pow(binom_i(i64::from(n + k), i64::from(2 * k)), r) * central_binom(u64::from(k))
}

/// `S_n^(r)(x_0, ..., x_n)`.
pub fn schmidt_multi(n: u32, r: u32) -> MultiPoly {
    MultiPoly::from_terms((0..=n).map(|k| (Monomial::var(k as usize), schmidt_coeff(n, k, r))))
}

/// `S_n^(r)(x) = sum_k C(n,k)^r C(n+k,k)^r x^k`.
pub fn schmidt_single(n: u32, r: u32) -> UniPoly {
    UniPoly::from_coeffs(
        (0..=n)
            .map(|k| {
                let (n, k) = (i64::from(n), i64::from(k));
                Pow::pow(binom_i(n, k) * binom_i(n + k, k), r)
            })
            .collect(),
    )
}

/// `sum_{k=0}^{n-1} ε^k w(k) (2k+1) S_k^(r)(x_0..x_k)^m`.
pub fn weighted_sum(p: &SchmidtParams, weight: Weight) -> MultiPoly {
    let mut total = MultiPoly::zero();
    for k in 0..p.n {
        let s_k = schmidt_multi(k, p.r);
        let k64 = u64::from(k);
        let scalar = weight.factor(k64, p.a) * (2 * k64 + 1) * p.epsilon.pow(k64);
        total += &s_k.pow(p.m).scale(&scalar);
    }
    total
}

/// `sum_{k=0}^{n-1} ε^k w(k) (2k+1) S_k^(r)(x)^m` over the single-variable
/// polynomials.
pub fn weighted_sum_single(p: &SchmidtParams, weight: Weight) -> UniPoly {
    let mut total = UniPoly::zero();
    for k in 0..p.n {
        let k64 = u64::from(k);
        let scalar = weight.factor(k64, p.a) * (2 * k64 + 1) * p.epsilon.pow(k64);
        total += &schmidt_single(k, p.r).pow(p.m).scale(&scalar);
    }
    total
}

/// The substitution `x_k -> C(2k, k)^(r-1) x^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AperyRule {
    pub r: u32,
}

pub fn apery_specialization_rule(r: u32) -> AperyRule {
    assert!(r >= 1, "r must be at least 1");
    AperyRule { r }
}

impl SpecializationRule for AperyRule {
    fn coefficient(&self, var: usize) -> Option<Integer> {
        Some(Pow::pow(central_binom(var as u64), self.r - 1))
    }
}
