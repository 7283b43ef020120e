//! Expansion of binomial products in the basis
//!
//! ```text
//! B_t(k) = C(k+t, 2t) C(2t, t),      t = 0, 1, 2, ...
//! ```
//!
//! `B_t` is a polynomial in `k` of degree `2t`, so the family is linearly
//! independent and every expansion below is unique. Three facts drive the
//! divisibility proofs:
//!
//! * an `r`-th power `C(k+m, 2m)^r C(2m, m)` is `sum_{t=m}^{rm} b_{m,t} B_t(k)`
//!   with integers `b_{m,t}` divisible by `C(t, m)` ([`b_table`]);
//! * for `i <= j`, `B_i B_j = sum_{s=0}^{i} C(i+j, i) C(j, i-s) C(j+s, s) B_{j+s}`
//!   ([`product_linearize`]);
//! * consequently any product of such powers is an integer combination of
//!   `B_t` with `t` at least the largest index involved ([`tuple_linearize`]).
//!
//! The product rule is a rewriting of a special case of the Pfaff–Saalschütz
//! summation, checked directly by [`pfaff_check`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Pow, Zero};

use crate::arith::{binom, binom_i, central_binom, exact_div, saalschutz_coeff, Integer, Rational};
use crate::certify::{certify, certify_integer, range_samples, Verdict};
use crate::error::{Error, Result};

/// `B_t(k) = C(k+t, 2t) C(2t, t)` with polynomially continued binomials.
pub fn basis_value(t: u32, k: &Integer) -> Integer {
    binom(k + t, 2 * i64::from(t)) * central_binom(u64::from(t))
}

/// Finite integer combination `sum_t c_t B_t`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BasisCombo {
    coeffs: BTreeMap<u32, Integer>,
}

impl BasisCombo {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant function 1, i.e. `B_0`.
    pub fn one() -> Self {
        Self::single(0, 1)
    }

    pub fn single(t: u32, c: impl Into<Integer>) -> Self {
        let mut out = Self::zero();
        out.add_term(t, c.into());
        out
    }

    pub fn from_pairs<C: Into<Integer>>(pairs: impl IntoIterator<Item = (u32, C)>) -> Self {
        let mut out = Self::zero();
        for (t, c) in pairs {
            out.add_term(t, c.into());
        }
        out
    }

    pub fn add_term(&mut self, t: u32, c: Integer) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(t).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&t);
        }
    }

    pub fn coeff(&self, t: u32) -> Integer {
        self.coeffs.get(&t).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Integer)> {
        self.coeffs.iter().map(|(&t, c)| (t, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_index(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Degree of the represented polynomial in `k`.
    pub fn degree(&self) -> usize {
        self.max_index().map_or(0, |t| 2 * t as usize)
    }

    /// Pointwise value `sum_t c_t B_t(k)`.
    pub fn eval(&self, k: &Integer) -> Integer {
        self.iter().map(|(t, c)| c * basis_value(t, k)).sum()
    }

    /// The combination representing the pointwise product, by bilinear
    /// extension of [`product_linearize`].
    pub fn mul(&self, other: &BasisCombo) -> BasisCombo {
        let mut out = BasisCombo::zero();
        for (i, ci) in self.iter() {
            for (j, cj) in other.iter() {
                let scale = ci * cj;
                for (t, c) in product_linearize(i, j).iter() {
                    out.add_term(t, c * &scale);
                }
            }
        }
        out
    }
}

impl fmt::Display for BasisCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, (t, c)) in self.iter().enumerate() {
            if pos > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}: {c}")?;
        }
        f.write_str("}")
    }
}

/// Free-function form of [`BasisCombo::mul`].
pub fn combo_mul(p: &BasisCombo, q: &BasisCombo) -> BasisCombo {
    p.mul(q)
}

/// Free-function form of [`BasisCombo::eval`].
pub fn combo_eval(c: &BasisCombo, k: &Integer) -> Integer {
    c.eval(k)
}

/// The integers `b_{m,t}^(r)` for `t = m ..= r*m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BTable {
    pub m: u32,
    pub r: u32,
    entries: Vec<Integer>,
}

impl BTable {
    /// Wraps precomputed entries; the caller vouches for them. Use
    /// [`BTable::certify`] before trusting values read from outside.
    pub fn from_entries(m: u32, r: u32, entries: Vec<Integer>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        let expected = ((r - 1) * m + 1) as usize;
        if entries.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "b-table for m={m}, r={r} needs {expected} entries, got {}",
                entries.len()
            )));
        }
        Ok(BTable { m, r, entries })
    }

    pub fn entries(&self) -> &[Integer] {
        &self.entries
    }

    /// `(t, b_{m,t})` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Integer)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(pos, b)| (self.m + pos as u32, b))
    }

    pub fn get(&self, t: u32) -> Option<&Integer> {
        t.checked_sub(self.m)
            .and_then(|pos| self.entries.get(pos as usize))
    }

    pub fn to_combo(&self) -> BasisCombo {
        BasisCombo::from_pairs(self.iter().map(|(t, b)| (t, b.clone())))
    }

    /// Every entry is divisible by `C(t, m)`.
    pub fn divisibility_holds(&self) -> bool {
        self.iter().all(|(t, b)| {
            exact_div(b, &binom_i(i64::from(t), i64::from(self.m))).is_some()
        })
    }

    /// Certifies the expansion of `C(l+m, 2m)^r C(2m, m)` at `2rm + 1` points.
    pub fn certify(&self) -> Verdict {
        let (m, r) = (self.m, self.r);
        let degree = 2 * (r * m) as usize;
        let combo = self.to_combo();
        certify_integer(
            &range_samples(0, degree + 1),
            degree,
            |l| Pow::pow(binom(l + m, 2 * i64::from(m)), r) * central_binom(u64::from(m)),
            |l| combo.eval(l),
        )
        .expect("sample count matches degree")
    }
}

impl fmt::Display for BTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pos, (t, b)) in self.iter().enumerate() {
            if pos > 0 {
                f.write_str(" ")?;
            }
            write!(f, "b[{t}]={b}")?;
        }
        Ok(())
    }
}

/// Runs the recursion
///
/// ```text
/// b^(1)_{m,m}   = 1
/// b^(r+1)_{m,j} = C(j,m) sum_{k=m}^{rm} (b^(r)_{m,k} / C(k,m)) C(m, j-k) C(m+k, 2m)
/// ```
///
/// for `m <= j <= (r+1)m`. Each quotient `b / C(k, m)` must be exact; a
/// remainder would mean a bug, and is reported as
/// [`Error::InexactDivision`].
pub fn b_table(m: u32, r: u32) -> Result<BTable> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let mi = i64::from(m);
    let mut entries = vec![Integer::from(1)];
    for step in 1..r {
        // entries currently hold b^(step) for k = m ..= step*m
        let mut reduced = Vec::with_capacity(entries.len());
        for (pos, b) in entries.iter().enumerate() {
            let k = mi + pos as i64;
            let d = binom_i(k, mi);
            let q = exact_div(b, &d).ok_or_else(|| Error::InexactDivision {
                context: format!("b-table m={m} r={step} at k={k}"),
                numerator: b.to_string(),
                denominator: d.to_string(),
            })?;
            reduced.push(q * binom_i(mi + k, 2 * mi));
        }
        let top = (i64::from(step) + 1) * mi;
        let mut next = Vec::with_capacity((top - mi + 1) as usize);
        for j in mi..=top {
            let mut acc = Integer::zero();
            for (pos, q) in reduced.iter().enumerate() {
                let k = mi + pos as i64;
                let c = binom_i(mi, j - k);
                if !c.is_zero() {
                    acc += q * c;
                }
            }
            next.push(acc * binom_i(j, mi));
        }
        entries = next;
    }
    BTable::from_entries(m, r, entries)
}

/// `C(k+i, 2i)^r C(2i, i)` in the `B_t` basis.
pub fn power_linearize(i: u32, r: u32) -> Result<BasisCombo> {
    Ok(b_table(i, r)?.to_combo())
}

/// `B_i B_j` in the `B_t` basis.
pub fn product_linearize(i: u32, j: u32) -> BasisCombo {
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    let (lo, hi) = (i64::from(lo), i64::from(hi));
    let lead = binom_i(lo + hi, lo);
    BasisCombo::from_pairs((0..=lo).map(|s| {
        let c = &lead * binom_i(hi, lo - s) * binom_i(hi + s, s);
        ((hi + s) as u32, c)
    }))
}

/// `prod_j C(k+i_j, 2i_j)^r C(2i_j, i_j)` in the `B_t` basis: each factor is
/// expanded with [`power_linearize`] and the results are multiplied left to
/// right.
pub fn tuple_linearize(indices: &[u32], r: u32) -> Result<BasisCombo> {
    if indices.is_empty() {
        return Err(Error::InvalidParameter("index list must be nonempty".into()));
    }
    let mut acc = BasisCombo::one();
    for &i in indices {
        acc = acc.mul(&power_linearize(i, r)?);
    }
    Ok(acc)
}

/// Checks
///
/// ```text
/// C(l+k, 2k) C(2k, k) = sum_{i=0}^{k} (m+k)! i! / ((m+i)! k!) C(m, k-i) C(l-m, i) C(l+m+i, i)
/// ```
///
/// at each `l` in `samples`. Both sides have degree `2k` in `l`.
pub fn pfaff_check(m: u32, k: u32, samples: &[Integer]) -> Result<Verdict> {
    let (mi, ki) = (i64::from(m), i64::from(k));
    let coeffs: Vec<Rational> = (0..=k)
        .map(|i| saalschutz_coeff(u64::from(m), u64::from(k), u64::from(i)))
        .collect();
    certify(
        samples,
        2 * k as usize,
        |l| Rational::from_integer(binom(l + k, 2 * ki) * central_binom(u64::from(k))),
        |l| {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, coeff)| {
                    let i = i as i64;
                    let prod = binom_i(mi, ki - i) * binom(l - m, i) * binom(l + m + i as u32, i);
                    coeff * Rational::from_integer(prod)
                })
                .sum()
        },
    )
}

/// Certifies the expansion of `C(l+m, 2m)^r C(2m, m)` produced by
/// [`b_table`] at `2rm + 1` points.
pub fn verify_power_identity(m: u32, r: u32) -> Result<Verdict> {
    Ok(b_table(m, r)?.certify())
}

/// Certifies [`product_linearize`] at `2(i+j) + 1` points.
pub fn verify_product_identity(i: u32, j: u32) -> Verdict {
    let combo = product_linearize(i, j);
    let degree = 2 * (i + j) as usize;
    certify_integer(
        &range_samples(0, degree + 1),
        degree,
        |l| basis_value(i, l) * basis_value(j, l),
        |l| combo.eval(l),
    )
    .expect("sample count matches degree")
}

/// `prod_j C(k+i_j, 2i_j)^r C(2i_j, i_j)` evaluated directly.
pub fn tuple_product_value(indices: &[u32], r: u32, k: &Integer) -> Integer {
    indices
        .iter()
        .map(|&i| Pow::pow(binom(k + i, 2 * i64::from(i)), r) * central_binom(u64::from(i)))
        .product()
}

/// Linearizes the tuple and certifies the result against
/// [`tuple_product_value`] at `2r(i_1 + ... + i_m) + 1` points.
pub fn verify_tuple_identity(combo: &BasisCombo, indices: &[u32], r: u32) -> Verdict {
    let degree = 2 * (r * indices.iter().sum::<u32>()) as usize;
    certify_integer(
        &range_samples(0, degree + 1),
        degree,
        |k| tuple_product_value(indices, r, k),
        |k| combo.eval(k),
    )
    .expect("sample count matches degree")
}
