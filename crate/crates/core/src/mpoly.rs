//! Sparse multivariate polynomials over [`Integer`] in the variables
//! `x_0, x_1, ...`, plus dense univariate polynomials for specializations.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], so equality is
//! structural and iteration follows the canonical term order: total degree
//! ascending, and within one degree lexicographic with `x_0` leading
//! (`x_0^2`, `x_0 x_1`, `x_0 x_2`, `x_1^2`, ...). The first offending term of
//! a divisibility scan is therefore reproducible.
//!
//! The text form is `c * x_i^e * ...` per term, terms joined by ` + `, with
//! every coefficient written as a decimal integer, e.g. `4 * x_0 + -6 * x_1^2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer as _;
use num_traits::{One, Pow, Zero};

use crate::arith::Integer;
use crate::error::{Error, Result};

/// Exponent vector stored sparsely as `(variable, exponent)` pairs sorted by
/// variable. Zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        Monomial(vec![(index, 1)])
    }

    /// Builds a monomial from arbitrary pairs; repeated variables are merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0u32) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    /// The monomial `x_{i_1} x_{i_2} ... x_{i_m}`.
    pub fn from_indices(indices: &[usize]) -> Self {
        Self::from_pairs(indices.iter().map(|&i| (i, 1)))
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| u64::from(e)).sum()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|pos| self.0[pos].1)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(v, _)| v)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // Within a degree, the larger exponent at the first differing
            // variable sorts first.
            for (a, b) in self.0.iter().zip(&other.0) {
                if a.0 != b.0 {
                    return a.0.cmp(&b.0);
                }
                if a.1 != b.1 {
                    return b.1.cmp(&a.1);
                }
            }
            other.0.len().cmp(&self.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (pos, &(v, e)) in self.0.iter().enumerate() {
            if pos > 0 {
                f.write_str(" * ")?;
            }
            if e == 1 {
                write!(f, "x_{v}")?;
            } else {
                write!(f, "x_{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial over [`Integer`] with no fixed number of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Integer>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Integer::one())
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(index: usize) -> Self {
        Self::term(Monomial::var(index), 1)
    }

    pub fn term(monomial: Monomial, c: impl Into<Integer>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(monomial, c);
        }
        MultiPoly { terms }
    }

    /// Sums the given terms; repeated monomials are combined and zero
    /// results dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Integer)>) -> Self {
        let mut out = MultiPoly::zero();
        for (mono, c) in terms {
            out.add_term(mono, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Integer)> {
        self.terms.iter()
    }

    pub fn coeff(&self, monomial: &Monomial) -> Integer {
        self.terms.get(monomial).cloned().unwrap_or_default()
    }

    /// Coefficients in canonical term order.
    pub fn coefficients(&self) -> impl Iterator<Item = &Integer> {
        self.terms.values()
    }

    pub fn add_term(&mut self, monomial: Monomial, c: Integer) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Integer) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(mono, v)| (mono.clone(), v * c))
                .collect(),
        }
    }

    /// `self^m`; `m = 0` gives 1.
    pub fn pow(&self, m: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..m {
            acc = &acc * self;
        }
        acc
    }

    /// `true` iff every coefficient is a multiple of `n`.
    pub fn all_coeffs_divisible(&self, n: &Integer) -> bool {
        self.non_divisible_term(n).is_none()
    }

    /// The first term, in canonical order, whose coefficient is not a
    /// multiple of `n`.
    pub fn non_divisible_term(&self, n: &Integer) -> Option<(&Monomial, &Integer)> {
        if n.is_zero() {
            return self.terms.iter().next();
        }
        self.terms.iter().find(|(_, c)| !c.is_multiple_of(n))
    }

    /// Evaluates with `x_i := value(i)`.
    pub fn evaluate(&self, value: impl Fn(usize) -> Integer) -> Integer {
        self.terms
            .iter()
            .map(|(mono, c)| {
                mono.iter()
                    .fold(c.clone(), |acc, (v, e)| acc * Pow::pow(value(v), e))
            })
            .sum()
    }

    /// Substitutes `x_k -> c_k x^k` and collects into a univariate polynomial.
    pub fn specialize<R: SpecializationRule + ?Sized>(&self, rule: &R) -> Result<UniPoly> {
        let mut coeffs: Vec<Integer> = Vec::new();
        let mut cache: BTreeMap<usize, Integer> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let mut value = c.clone();
            let mut degree = 0usize;
            for (v, e) in mono.iter() {
                let ck = match cache.get(&v) {
                    Some(ck) => ck.clone(),
                    None => {
                        let ck = rule.coefficient(v).ok_or(Error::MissingSubstitution(v))?;
                        cache.insert(v, ck.clone());
                        ck
                    }
                };
                value *= Pow::pow(ck, e);
                degree += v * e as usize;
            }
            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, Integer::zero());
            }
            coeffs[degree] += value;
        }
        Ok(UniPoly::from_coeffs(coeffs))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (pos, (mono, c)) in self.terms.iter().enumerate() {
            if pos > 0 {
                f.write_str(" + ")?;
            }
            if mono.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} * {mono}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for MultiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(MultiPoly::zero());
        }
        let mut out = MultiPoly::zero();
        for term in s.split(" + ") {
            let mut coeff = Integer::one();
            let mut pairs = Vec::new();
            for (pos, factor) in term.split('*').map(str::trim).enumerate() {
                if let Some(rest) = factor.strip_prefix("x_") {
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (v, e),
                        None => (rest, "1"),
                    };
                    let var: usize = var
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable in {factor:?}")))?;
                    let exp: u32 = exp
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                    pairs.push((var, exp));
                } else if pos == 0 {
                    coeff = factor
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {factor:?}")))?;
                } else {
                    return Err(Error::Parse(format!("unexpected factor {factor:?}")));
                }
            }
            out.add_term(Monomial::from_pairs(pairs), coeff);
        }
        Ok(out)
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (mono, c) in &rhs.terms {
            self.add_term(mono.clone(), c.clone());
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;

    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

/// A substitution `x_k -> c_k x^k`; `coefficient` returns `c_k`, or `None`
/// when the rule does not cover `x_k`.
pub trait SpecializationRule {
    fn coefficient(&self, var: usize) -> Option<Integer>;
}

impl SpecializationRule for BTreeMap<usize, Integer> {
    fn coefficient(&self, var: usize) -> Option<Integer> {
        self.get(&var).cloned()
    }
}

impl SpecializationRule for [Integer] {
    fn coefficient(&self, var: usize) -> Option<Integer> {
        self.get(var).cloned()
    }
}

impl SpecializationRule for Vec<Integer> {
    fn coefficient(&self, var: usize) -> Option<Integer> {
        self.get(var).cloned()
    }
}

/// Dense polynomial in one variable `x`; `coeffs[i]` multiplies `x^i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Integer>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_coeffs(vec![Integer::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &Integer) -> UniPoly {
        Self::from_coeffs(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn pow(&self, m: u32) -> UniPoly {
        let mut acc = UniPoly::one();
        for _ in 0..m {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, x: &Integer) -> Integer {
        self.coeffs
            .iter()
            .rev()
            .fold(Integer::zero(), |acc, c| acc * x + c)
    }

    /// The lowest-degree nonzero coefficient that is not a multiple of `n`.
    pub fn non_divisible_term(&self, n: &Integer) -> Option<(usize, &Integer)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero() && (n.is_zero() || !c.is_multiple_of(n)))
    }

    pub fn all_coeffs_divisible(&self, n: &Integer) -> bool {
        self.non_divisible_term(n).is_none()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c} * x")?,
                _ => write!(f, "{c} * x^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl AddAssign<&UniPoly> for UniPoly {
    fn add_assign(&mut self, rhs: &UniPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Integer::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;

    fn add(self, rhs: &UniPoly) -> UniPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;

    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Integer::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}
