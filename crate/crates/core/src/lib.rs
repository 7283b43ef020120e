//! Exact verification of divisibility congruences for sums of powers of
//! multi-variable Schmidt polynomials.
//!
//! The direct route expands a sum such as
//! `sum_{k<n} ε^k (2k+1) S_k(x_0..x_k)^m` and checks every coefficient
//! modulo `n`:
//!
//! ```
//! use schmidt_congruence::congruence::theorem_check;
//! use schmidt_congruence::schmidt::{SchmidtParams, Sign};
//!
//! let p = SchmidtParams::new(10, 2, 3, Sign::Plus).unwrap();
//! assert!(theorem_check(&p).unwrap().passed());
//! ```
//!
//! The constructive route ([`linearizer`], [`congruence::inner_sum_constructive`])
//! rebuilds each coefficient as `n` times an integer from binomial identities
//! that are certified by exact evaluation ([`certify`]).
//!
//! Module map:
//!
//! - [`arith`]: binomials with negative top, factorials, exact division
//! - [`mpoly`]: sparse multi-variable and dense one-variable polynomials
//! - [`schmidt`]: Schmidt polynomials and weighted sums
//! - [`linearizer`]: the `B_t` basis, b-tables, product rule
//! - [`congruence`]: divisibility checks, partial sums, cross-checks
//! - [`extension`]: the `k^a (k+1)^a` and `(2k+1)^(2a+1)` weights
//! - [`cache`], [`sweep`], [`identities`]: support for the `schmidt` binary

pub mod arith;
pub mod cache;
pub mod certify;
pub mod congruence;
mod decimal;
pub mod error;
pub mod extension;
pub mod identities;
pub mod linearizer;
pub mod mpoly;
pub mod schmidt;
pub mod sweep;

/// The guide under `book/`, compiled so its snippets run as doc-tests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/binomials.md")]
    pub mod binomials {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    pub mod polynomials {}
    #[doc = include_str!("../../../book/src/schmidt.md")]
    pub mod schmidt {}
    #[doc = include_str!("../../../book/src/linearization.md")]
    pub mod linearization {}
    #[doc = include_str!("../../../book/src/congruences.md")]
    pub mod congruences {}
    #[doc = include_str!("../../../book/src/weights.md")]
    pub mod weights {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
