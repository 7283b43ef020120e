//! Degree-bound certificates for polynomial identities.
//!
//! Two polynomials of degree at most `d` that agree at `d + 1` distinct
//! points are equal. Every identity in the crate is a polynomial identity in
//! one integer variable, so exact evaluation at enough sample points is a
//! proof, not a spot check.

use std::collections::BTreeSet;

use crate::arith::{Integer, Rational};
use crate::error::{Error, Result};

/// Outcome of sampling an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Both sides agreed at this many distinct points.
    Pass { points: usize },
    /// First sample where the sides differ.
    Fail {
        point: Integer,
        lhs: Rational,
        rhs: Rational,
    },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

/// `start, start+1, ..., start+count-1` as sample points.
pub fn range_samples(start: i64, count: usize) -> Vec<Integer> {
    (0..count as i64).map(|i| Integer::from(start + i)).collect()
}

/// Compares `lhs` and `rhs` at every sample. Fails with
/// [`Error::InvalidParameter`] when fewer than `degree + 1` distinct samples
/// are supplied, since agreement would then prove nothing.
pub fn certify(
    samples: &[Integer],
    degree: usize,
    lhs: impl Fn(&Integer) -> Rational,
    rhs: impl Fn(&Integer) -> Rational,
) -> Result<Verdict> {
    let distinct: BTreeSet<&Integer> = samples.iter().collect();
    if distinct.len() < degree + 1 {
        return Err(Error::InvalidParameter(format!(
            "need at least {} distinct sample points for a degree-{degree} identity, got {}",
            degree + 1,
            distinct.len()
        )));
    }
    for point in distinct.iter().copied() {
        let (l, r) = (lhs(point), rhs(point));
        if l != r {
            return Ok(Verdict::Fail {
                point: point.clone(),
                lhs: l,
                rhs: r,
            });
        }
    }
    Ok(Verdict::Pass {
        points: distinct.len(),
    })
}

/// [`certify`] for identities whose sides are integer-valued.
pub fn certify_integer(
    samples: &[Integer],
    degree: usize,
    lhs: impl Fn(&Integer) -> Integer,
    rhs: impl Fn(&Integer) -> Integer,
) -> Result<Verdict> {
    certify(
        samples,
        degree,
        |x| Rational::from_integer(lhs(x)),
        |x| Rational::from_integer(rhs(x)),
    )
}
