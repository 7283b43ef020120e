//! Weighted generalizations: sums carrying an extra factor `k^a (k+1)^a` or
//! `(2k+1)^(2a)`.
//!
//! The `k^a (k+1)^a` weight is absorbed into the binomial basis through
//!
//! ```text
//! k^a (k+1)^a C(k+j, 2j) = sum_{i=0}^{a} c_i(j, a) C(k+j+i, 2j+2i) (2j+1)_{2i}
//! ```
//!
//! with integers `c_i(j, a)` that do not depend on `k`. The lower index of the
//! basis binomial is `2j + 2i`: each basis term then has degree `2j + 2i` in
//! `k`, matching the left side's degree `2a + 2j` at `i = a`. (With lower
//! index `j + i` the right side would only reach degree `j + a`, and no
//! choice of `c_i` could work.)
//!
//! Writing `K = k(k+1)`, the basis term equals
//! `prod_{t=1}^{j+i} (K - t(t-1)) / (2j)!`, so the expansion is Newton
//! interpolation of `K^a` at the nodes `t(t-1)` and the `c_i` are integers.
//! [`c_table`] solves it triangularly: the `i`-th basis term vanishes at
//! `k = j, ..., j+i-1`.
//!
//! The odd-power weight follows from `(2k+1)^(2a) = (4K + 1)^a =
//! sum_i C(a, i) 4^i K^i` ([`square_weight_coeffs`]).

use std::fmt;

use num_traits::{Pow, Zero};

use crate::arith::{binom, binom_i, exact_div, rising_factorial, Integer};
use crate::certify::{certify_integer, range_samples, Verdict};
use crate::congruence::{check_multi, CheckKind, CongruenceReport};
use crate::error::{Error, Result};
use crate::schmidt::SchmidtParams;

/// `c_0(j, a), ..., c_a(j, a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CTable {
    pub j: u32,
    pub a: u32,
    entries: Vec<Integer>,
}

impl CTable {
    pub fn from_entries(j: u32, a: u32, entries: Vec<Integer>) -> Result<Self> {
        if entries.len() != a as usize + 1 {
            return Err(Error::InvalidParameter(format!(
                "c-table for j={j}, a={a} needs {} entries, got {}",
                a + 1,
                entries.len()
            )));
        }
        Ok(CTable { j, a, entries })
    }

    pub fn entries(&self) -> &[Integer] {
        &self.entries
    }

    /// Value of the expansion at `k`.
    pub fn eval(&self, k: &Integer) -> Integer {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, c)| c * c_basis_value(self.j, i as u32, k))
            .sum()
    }

    /// Certifies the expansion at `2j + 2a + 1` points.
    pub fn certify(&self) -> Verdict {
        let degree = 2 * (self.j + self.a) as usize;
        verify_c_identity_with(self, &range_samples(0, degree + 1))
            .expect("sample count matches degree")
    }
}

impl fmt::Display for CTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "c[{i}]={c}")?;
        }
        Ok(())
    }
}

/// `C(k+j+i, 2j+2i) (2j+1)_{2i}`.
pub fn c_basis_value(j: u32, i: u32, k: &Integer) -> Integer {
    binom(k + (j + i), 2 * i64::from(j + i)) * rising_factorial(2 * j + 1, 2 * u64::from(i))
}

/// `k^a (k+1)^a C(k+j, 2j)`.
pub fn kk1_weighted_binom(j: u32, a: u32, k: &Integer) -> Integer {
    Pow::pow(k * (k + 1u32), a) * binom(k + j, 2 * i64::from(j))
}

/// Solves for `c_0(j,a) .. c_a(j,a)` by evaluating at `k = j, j+1, ..., j+a`.
/// The diagonal entry at `k = j+s` is `(2j+1)_{2s}`; a nonzero remainder
/// would contradict integrality and is returned as
/// [`Error::InexactDivision`].
pub fn c_table(j: u32, a: u32) -> Result<CTable> {
    let mut entries: Vec<Integer> = Vec::with_capacity(a as usize + 1);
    for s in 0..=a {
        let k = Integer::from(j + s);
        let mut rest = kk1_weighted_binom(j, a, &k);
        for (i, c) in entries.iter().enumerate() {
            rest -= c * c_basis_value(j, i as u32, &k);
        }
        let pivot = rising_factorial(2 * j + 1, 2 * u64::from(s));
        let c = exact_div(&rest, &pivot).ok_or_else(|| Error::InexactDivision {
            context: format!("c-table j={j} a={a} at i={s}"),
            numerator: rest.to_string(),
            denominator: pivot.to_string(),
        })?;
        entries.push(c);
    }
    CTable::from_entries(j, a, entries)
}

/// Solves for the table and certifies it at the given points, which must
/// number at least `2j + 2a + 1`.
pub fn verify_c_identity(j: u32, a: u32, samples: &[Integer]) -> Result<Verdict> {
    verify_c_identity_with(&c_table(j, a)?, samples)
}

fn verify_c_identity_with(table: &CTable, samples: &[Integer]) -> Result<Verdict> {
    let (j, a) = (table.j, table.a);
    certify_integer(
        samples,
        2 * (j + a) as usize,
        |k| kk1_weighted_binom(j, a, k),
        |k| table.eval(k),
    )
}

/// `C(a, i) 4^i` for `i = 0..=a`, the coefficients of `k^i (k+1)^i` in
/// `(2k+1)^(2a)`.
pub fn square_weight_coeffs(a: u32) -> Vec<Integer> {
    (0..=a)
        .map(|i| binom_i(i64::from(a), i64::from(i)) * Pow::pow(Integer::from(4), i))
        .collect()
}

/// Certifies `(2k+1)^(2a) = sum_i C(a,i) 4^i k^i (k+1)^i` at `2a + 1` points.
pub fn verify_square_weight(a: u32) -> Verdict {
    let coeffs = square_weight_coeffs(a);
    let degree = 2 * a as usize;
    certify_integer(
        &range_samples(0, degree + 1),
        degree,
        |k| Pow::pow(k * 2u32 + 1u32, 2 * a),
        |k| {
            let kk1 = k * (k + 1u32);
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * Pow::pow(&kk1, i as u32))
                .fold(Integer::zero(), |acc, t| acc + t)
        },
    )
    .expect("sample count matches degree")
}

/// The two weighted forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneralizedForm {
    /// `sum ε^k (2k+1) k^a (k+1)^a S_k^m`, any `m`.
    Kk1,
    /// `sum ε^k (2k+1)^(2a+1) S_k`, stated for `m = 1`.
    OddPower,
}

/// Checks a weighted congruence. The odd-power form with `m > 1` is not a
/// stated result and is refused unless `exploratory` is set.
pub fn generalized_check(
    p: &SchmidtParams,
    form: GeneralizedForm,
    exploratory: bool,
) -> Result<CongruenceReport> {
    match form {
        GeneralizedForm::Kk1 => check_multi(p, CheckKind::Kk1),
        GeneralizedForm::OddPower => {
            if p.m != 1 && !exploratory {
                return Err(Error::InvalidParameter(
                    "the odd-power form is only established for m = 1; pass the exploratory flag to run m > 1".into(),
                ));
            }
            check_multi(p, CheckKind::OddPower)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schmidt::{weighted_sum, Sign, Weight};

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn c_tables() {
        for j in 0..6 {
            assert_eq!(c_table(j, 0).unwrap().entries(), ints(&[1]).as_slice());
        }
        assert_eq!(c_table(0, 1).unwrap().entries(), ints(&[0, 1]).as_slice());
        // Frozen from an independent rational solve.
        assert_eq!(c_table(1, 1).unwrap().entries(), ints(&[2, 1]).as_slice());
        assert_eq!(c_table(0, 2).unwrap().entries(), ints(&[0, 2, 1]).as_slice());
        assert_eq!(c_table(1, 2).unwrap().entries(), ints(&[4, 8, 1]).as_slice());
        assert_eq!(c_table(2, 2).unwrap().entries(), ints(&[36, 18, 1]).as_slice());
        assert_eq!(
            c_table(3, 3).unwrap().entries(),
            ints(&[1728, 784, 62, 1]).as_slice()
        );
        assert_eq!(c_table(0, 1).unwrap().to_string(), "c[0]=0 c[1]=1");
    }

    #[test]
    fn c_identity_certificates() {
        assert!(verify_c_identity(0, 1, &ints(&[0, 1, 2])).unwrap().passed());
        assert!(verify_c_identity(2, 0, &range_samples(-2, 5)).unwrap().passed());
        assert!(verify_c_identity(3, 3, &range_samples(0, 13)).unwrap().passed());
        assert!(verify_c_identity(3, 3, &range_samples(0, 12)).is_err());
        for j in 0..=5 {
            for a in 0..=5 {
                let t = c_table(j, a).unwrap();
                assert_eq!(t.entries().len(), a as usize + 1);
                assert!(t.certify().passed(), "j={j} a={a}");
            }
        }
    }

    #[test]
    fn corrupted_c_table_fails_certificate() {
        let t = CTable::from_entries(1, 1, ints(&[2, 2])).unwrap();
        assert!(!t.certify().passed());
    }

    #[test]
    fn square_weights() {
        assert_eq!(square_weight_coeffs(0), ints(&[1]));
        assert_eq!(square_weight_coeffs(1), ints(&[1, 4]));
        assert_eq!(square_weight_coeffs(2), ints(&[1, 8, 16]));
        // (2*1+1)^4 = 81 = 1 + 8*2 + 16*4
        assert_eq!(1 + 8 * 2 + 16 * 4, 81);
        for a in 0..=8 {
            assert!(verify_square_weight(a).passed());
        }
    }

    #[test]
    fn generalized_examples() {
        let p = SchmidtParams::with_a(2, 1, 1, Sign::Plus, 1).unwrap();
        let r = generalized_check(&p, GeneralizedForm::Kk1, false).unwrap();
        assert!(r.passed());
        assert_eq!(r.polynomial, "6 * x_0 + 12 * x_1");

        let p = SchmidtParams::with_a(3, 1, 2, Sign::Minus, 1).unwrap();
        assert!(generalized_check(&p, GeneralizedForm::Kk1, false).unwrap().passed());

        let p = SchmidtParams::with_a(3, 2, 1, Sign::Plus, 1).unwrap();
        assert!(generalized_check(&p, GeneralizedForm::OddPower, false).is_err());
        assert!(generalized_check(&p, GeneralizedForm::OddPower, true).is_ok());
    }

    #[test]
    fn zero_exponent_degenerates_to_plain() {
        for n in 1..8 {
            for e in Sign::BOTH {
                let p = SchmidtParams::with_a(n, 1, 2, e, 0).unwrap();
                let plain = weighted_sum(&p, Weight::Plain).to_string();
                for form in [GeneralizedForm::Kk1, GeneralizedForm::OddPower] {
                    let r = generalized_check(&p, form, false).unwrap();
                    assert!(r.passed());
                    assert_eq!(r.polynomial, plain);
                }
            }
        }
    }

    #[test]
    fn odd_square_sum_decomposes_into_kk1_sums() {
        for n in 1..=6 {
            for r in 1..=2 {
                for a in 0..=2 {
                    for e in Sign::BOTH {
                        let target =
                            weighted_sum(&SchmidtParams::with_a(n, 1, r, e, a).unwrap(), Weight::OddSquarePowA);
                        let mut acc = crate::mpoly::MultiPoly::zero();
                        for (i, c) in square_weight_coeffs(a).iter().enumerate() {
                            let q = SchmidtParams::with_a(n, 1, r, e, i as u32).unwrap();
                            acc += &weighted_sum(&q, Weight::Kk1PowA).scale(c);
                        }
                        assert_eq!(acc, target);
                    }
                }
            }
        }
    }
}
