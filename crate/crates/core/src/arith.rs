//! Exact integer primitives: polynomially continued binomials, rising
//! factorials and central binomials.
//!
//! Binomials use the falling-factorial definition
//!
//! ```text
//! C(t, k) = t (t-1) ... (t-k+1) / k!      (k >= 0),    C(t, k) = 0  (k < 0)
//! ```
//!
//! for every integer `t`, so `C(-1, 2) = 1`. This agrees with the counting
//! definition when `t >= 0` and turns every binomial identity in the crate
//! into a polynomial identity that can be sampled at negative points too.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision signed integer used for every scalar in the crate.
pub type Integer = BigInt;

/// Exact rational with a positive, coprime denominator.
pub type Rational = BigRational;

/// `C(top, k)` with the falling-factorial continuation to negative `top`.
///
/// The product is divided incrementally by `1, 2, ..., k`; every prefix
/// `t (t-1) ... (t-i) / (i+1)!` is itself a binomial, so each division is
/// exact and no factorial is ever materialised.
pub fn binom(top: impl Into<Integer>, k: i64) -> Integer {
    let top: Integer = top.into();
    if k < 0 {
        return Integer::zero();
    }
    let mut k = k;
    if !top.is_negative() {
        if top < Integer::from(k) {
            return Integer::zero();
        }
        // Symmetry only holds on the counting domain.
        let other = &top - k;
        if other < Integer::from(k) {
            k = i64::try_from(&other).expect("k already fits in i64");
        }
    }
    let mut acc = Integer::one();
    for i in 0..k {
        acc *= &top - i;
        let (q, r) = acc.div_rem(&Integer::from(i + 1));
        debug_assert!(r.is_zero());
        acc = q;
    }
    acc
}

/// Convenience wrapper for small arguments.
pub fn binom_i(top: i64, k: i64) -> Integer {
    binom(Integer::from(top), k)
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, with `(x)_0 = 1`.
pub fn rising_factorial(x: impl Into<Integer>, n: u64) -> Integer {
    let x: Integer = x.into();
    (0..n).fold(Integer::one(), |acc, i| acc * (&x + i))
}

/// `C(2k, k)`.
pub fn central_binom(k: u64) -> Integer {
    binom(Integer::from(2 * k), k as i64)
}

/// `n!` for small `n`.
pub fn factorial(n: u64) -> Integer {
    (1..=n).fold(Integer::one(), |acc, i| acc * i)
}

/// The coefficient `(m+k)! i! / ((m+i)! k!)` appearing in the rewritten
/// Pfaff–Saalschütz sum. It is generally not an integer on its own.
pub fn saalschutz_coeff(m: u64, k: u64, i: u64) -> Rational {
    assert!(i <= k, "saalschutz_coeff requires i <= k (got i={i}, k={k})");
    // (m+k)!/(m+i)! = (m+i+1)...(m+k) and i!/k! = 1/((i+1)...k).
    let num = rising_factorial(Integer::from(m + i + 1), k - i);
    let den = rising_factorial(Integer::from(i + 1), k - i);
    Rational::new(num, den)
}

/// Exact quotient `num / den`, or `None` if `den` does not divide `num`.
pub fn exact_div(num: &Integer, den: &Integer) -> Option<Integer> {
    if den.is_zero() {
        return None;
    }
    let (q, r) = num.div_rem(den);
    r.is_zero().then_some(q)
}
