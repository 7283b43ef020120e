//! Divisibility checks for the weighted Schmidt sums, plus the constructive
//! route that exhibits the factor `n` explicitly.
//!
//! The direct route expands `sum_k ε^k (2k+1) S_k^(r)^m` and scans every
//! coefficient. The constructive route works per ordered index tuple
//! `(i_1, ..., i_m)`: the inner sum over `k` of `ε^k (2k+1) prod_j
//! C(k+i_j, 2i_j)^r C(2i_j, i_j)` is linearized in the `B_t` basis and summed
//! with the closed forms
//!
//! ```text
//! sum_{l=t}^{n-1}       (2l+1) B_t(l) = n C(n, t+1) C(n+t, t)
//! sum_{l=t}^{n-1} (-1)^l (2l+1) B_t(l) = (-1)^(n-1) n C(n-1, t) C(n+t, t)
//! ```
//!
//! both of which carry the factor `n` outright. The two routes must agree;
//! if they do not, that is a bug, reported as
//! [`Error::InvariantViolation`], never as a counterexample.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binom_i, central_binom, Integer};
use crate::cache::TableCache;
use crate::error::{Error, Result};
use crate::linearizer::{basis_value, BasisCombo, BTable};
use crate::mpoly::{Monomial, MultiPoly, UniPoly};
use crate::schmidt::{
    apery_specialization_rule, weighted_sum, weighted_sum_single, SchmidtParams, Sign, Weight,
};

/// Which statement a report is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Multi-variable sum with weight `(2k+1)`.
    Theorem,
    /// Single-variable sum, cross-checked against the specialization.
    Pan,
    /// Multi-variable sum with weight `(2k+1) k^a (k+1)^a`.
    Kk1,
    /// Multi-variable sum with weight `(2k+1)^(2a+1)`.
    OddPower,
}

impl CheckKind {
    pub fn weight(self) -> Weight {
        match self {
            CheckKind::Theorem | CheckKind::Pan => Weight::Plain,
            CheckKind::Kk1 => Weight::Kk1PowA,
            CheckKind::OddPower => Weight::OddSquarePowA,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
}

/// A coefficient that is not a multiple of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub monomial: String,
    #[serde(with = "crate::decimal")]
    pub coefficient: Integer,
    #[serde(with = "crate::decimal")]
    pub residue: Integer,
}

/// Result of one divisibility check. `witness` is present exactly when the
/// verdict is [`Outcome::Fail`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub params: SchmidtParams,
    pub check: CheckKind,
    pub weight: Weight,
    pub verdict: Outcome,
    pub witness: Option<Witness>,
    /// Canonical text form of the sum that was scanned.
    pub polynomial: String,
    /// Its coefficients in canonical term order.
    #[serde(with = "crate::decimal::vec")]
    pub coefficients: Vec<Integer>,
    pub elapsed_us: u64,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.verdict == Outcome::Pass
    }

    pub fn elapsed(&self) -> Duration {
        Duration::from_micros(self.elapsed_us)
    }

    fn from_multi(
        params: SchmidtParams,
        check: CheckKind,
        sum: &MultiPoly,
        started: Instant,
    ) -> Self {
        let n = Integer::from(params.n);
        let witness = sum.non_divisible_term(&n).map(|(mono, c)| Witness {
            monomial: mono.to_string(),
            coefficient: c.clone(),
            residue: num_integer::Integer::mod_floor(c, &n),
        });
        Self::assemble(params, check, witness, sum.to_string(), sum.coefficients().cloned().collect(), started)
    }

    fn from_single(params: SchmidtParams, sum: &UniPoly, started: Instant) -> Self {
        let n = Integer::from(params.n);
        let witness = sum.non_divisible_term(&n).map(|(e, c)| Witness {
            monomial: match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            },
            coefficient: c.clone(),
            residue: num_integer::Integer::mod_floor(c, &n),
        });
        Self::assemble(params, CheckKind::Pan, witness, sum.to_string(), sum.coeffs().to_vec(), started)
    }

    fn assemble(
        params: SchmidtParams,
        check: CheckKind,
        witness: Option<Witness>,
        polynomial: String,
        coefficients: Vec<Integer>,
        started: Instant,
    ) -> Self {
        CongruenceReport {
            params,
            check,
            weight: check.weight(),
            verdict: if witness.is_some() { Outcome::Fail } else { Outcome::Pass },
            witness,
            polynomial,
            coefficients,
            elapsed_us: started.elapsed().as_micros() as u64,
        }
    }
}

fn require_n(p: &SchmidtParams) -> Result<()> {
    if p.n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(())
}

/// Builds the multi-variable weighted sum for `check` and scans it.
pub fn check_multi(p: &SchmidtParams, check: CheckKind) -> Result<CongruenceReport> {
    require_n(p)?;
    if check == CheckKind::Pan {
        return pan_check(p);
    }
    let started = Instant::now();
    let sum = weighted_sum(p, check.weight());
    Ok(CongruenceReport::from_multi(*p, check, &sum, started))
}

/// `sum_{k<n} ε^k (2k+1) S_k^(r)(x_0..x_k)^m ≡ 0 (mod n)`.
pub fn theorem_check(p: &SchmidtParams) -> Result<CongruenceReport> {
    check_multi(p, CheckKind::Theorem)
}

/// The single-variable sum `sum_{k<n} ε^k (2k+1) S_k^(r)(x)^m`, checked for
/// divisibility by `n`. The sum must also equal the specialization of the
/// multi-variable sum under `x_k -> C(2k,k)^(r-1) x^k`; a mismatch is an
/// [`Error::InvariantViolation`].
pub fn pan_check(p: &SchmidtParams) -> Result<CongruenceReport> {
    require_n(p)?;
    let started = Instant::now();
    let single = weighted_sum_single(p, Weight::Plain);
    let specialized = weighted_sum(p, Weight::Plain).specialize(&apery_specialization_rule(p.r))?;
    if specialized != single {
        return Err(Error::InvariantViolation(format!(
            "specialized multi-variable sum differs from single-variable sum for {p:?}: {specialized} vs {single}"
        )));
    }
    Ok(CongruenceReport::from_single(*p, &single, started))
}

/// `n C(n, k+1) C(n+k, k)`.
pub fn partial_sum_plus(n: u32, k: u32) -> Integer {
    let (n, k) = (i64::from(n), i64::from(k));
    binom_i(n, k + 1) * binom_i(n + k, k) * n
}

/// `(-1)^(n-1) n C(n-1, k) C(n+k, k)`.
pub fn partial_sum_minus(n: u32, k: u32) -> Integer {
    let sign = Sign::Minus.pow(u64::from(n) + 1);
    let (n, k) = (i64::from(n), i64::from(k));
    binom_i(n - 1, k) * binom_i(n + k, k) * (n * sign)
}

/// `sum_{l=k}^{n-1} ε^l (2l+1) B_k(l)`, term by term.
pub fn partial_sum_direct(n: u32, k: u32, epsilon: Sign) -> Integer {
    (k..n)
        .map(|l| {
            let l64 = u64::from(l);
            basis_value(k, &Integer::from(l)) * ((2 * l64 as i64 + 1) * epsilon.pow(l64))
        })
        .sum()
}

/// Closed form for the partial sum with sign `ε`.
pub fn partial_sum_closed(n: u32, k: u32, epsilon: Sign) -> Integer {
    match epsilon {
        Sign::Plus => partial_sum_plus(n, k),
        Sign::Minus => partial_sum_minus(n, k),
    }
}

/// `partial_sum_closed / n`, computed without dividing.
fn partial_sum_cofactor(n: u32, t: u32, epsilon: Sign) -> Integer {
    let (ni, ti) = (i64::from(n), i64::from(t));
    match epsilon {
        Sign::Plus => binom_i(ni, ti + 1) * binom_i(ni + ti, ti),
        Sign::Minus => {
            binom_i(ni - 1, ti) * binom_i(ni + ti, ti) * Sign::Minus.pow(u64::from(n) + 1)
        }
    }
}

fn check_tuple(n: u32, indices: &[u32]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if indices.is_empty() {
        return Err(Error::InvalidParameter("index list must be nonempty".into()));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidParameter(format!("index {bad} exceeds n-1 = {}", n - 1)));
    }
    Ok(())
}

/// `sum_{k=max(indices)}^{n-1} ε^k (2k+1) prod_j C(k+i_j, 2i_j)^r C(2i_j, i_j)`,
/// term by term.
pub fn inner_sum_direct(n: u32, indices: &[u32], r: u32, epsilon: Sign) -> Result<Integer> {
    check_tuple(n, indices)?;
    let start = *indices.iter().max().expect("nonempty");
    let mut total = Integer::zero();
    for k in start..n {
        let k64 = u64::from(k);
        let mut term = Integer::from((2 * k64 as i64 + 1) * epsilon.pow(k64));
        for &i in indices {
            term *= Pow::pow(binom_i(i64::from(k + i), 2 * i64::from(i)), r)
                * central_binom(u64::from(i));
        }
        total += term;
    }
    Ok(total)
}

/// Output of [`inner_sum_constructive`]: the inner sum is `n * cofactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructiveSum {
    pub combo: BasisCombo,
    pub cofactor: Integer,
    pub value: Integer,
}

/// Linearizes the tuple product and applies the closed partial sums, so the
/// result is produced as `n * q` with no division by `n`. The value is
/// compared with [`inner_sum_direct`].
pub fn inner_sum_constructive(
    cache: &TableCache,
    n: u32,
    indices: &[u32],
    r: u32,
    epsilon: Sign,
) -> Result<ConstructiveSum> {
    check_tuple(n, indices)?;
    let combo = cache.tuple_linearize(indices, r)?;
    let cofactor = combo_cofactor(&combo, n, epsilon);
    let value = &cofactor * n;
    let direct = inner_sum_direct(n, indices, r, epsilon)?;
    if value != direct {
        return Err(Error::InvariantViolation(format!(
            "constructive inner sum {value} != direct {direct} for n={n}, indices={indices:?}, r={r}, ε={epsilon}"
        )));
    }
    Ok(ConstructiveSum {
        combo,
        cofactor,
        value,
    })
}

fn combo_cofactor(combo: &BasisCombo, n: u32, epsilon: Sign) -> Integer {
    combo
        .iter()
        .map(|(t, c)| c * partial_sum_cofactor(n, t, epsilon))
        .sum()
}

/// Coefficient of `x_i` in the `m = 1` plain weighted sum, rebuilt from the
/// b-table of `i`: `n sum_j b_{i,j} C(n, j+1) C(n+j, j)` for `ε = +1`, and
/// `(-1)^(n-1) n sum_j b_{i,j} C(n-1, j) C(n+j, j)` for `ε = -1`.
pub fn m1_coefficient(table: &BTable, n: u32, epsilon: Sign) -> Integer {
    combo_cofactor(&table.to_combo(), n, epsilon) * n
}

/// The plain weighted sum rebuilt entirely along the constructive route:
/// every ordered tuple `(i_1..i_m)` with entries below `n` contributes
/// `n q(i_1..i_m) x_{i_1} ... x_{i_m}`. Tuples that are permutations of one
/// another share a linearization.
pub fn constructive_weighted_sum(cache: &TableCache, p: &SchmidtParams) -> Result<MultiPoly> {
    require_n(p)?;
    let mut memo: HashMap<Vec<u32>, Integer> = HashMap::new();
    let mut out = MultiPoly::zero();
    let mut tuple = vec![0u32; p.m as usize];
    loop {
        let mut key = tuple.clone();
        key.sort_unstable();
        let value = match memo.get(&key) {
            Some(v) => v.clone(),
            None => {
                let v = inner_sum_constructive(cache, p.n, &key, p.r, p.epsilon)?.value;
                memo.insert(key, v.clone());
                v
            }
        };
        let indices: Vec<usize> = tuple.iter().map(|&i| i as usize).collect();
        out.add_term(Monomial::from_indices(&indices), value);
        // odometer over {0..n-1}^m
        let mut pos = 0;
        loop {
            if pos == tuple.len() {
                return Ok(out);
            }
            tuple[pos] += 1;
            if tuple[pos] < p.n {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

/// Verifies that the constructive rebuild equals the directly expanded sum.
pub fn cross_check(cache: &TableCache, p: &SchmidtParams) -> Result<()> {
    let built = constructive_weighted_sum(cache, p)?;
    let direct = weighted_sum(p, Weight::Plain);
    if built != direct {
        return Err(Error::InvariantViolation(format!(
            "constructive sum differs from direct expansion for {p:?}"
        )));
    }
    if p.m == 1 {
        for i in 0..p.n {
            let expected = m1_coefficient(&*cache.b_table(i, p.r)?, p.n, p.epsilon);
            let actual = direct.coeff(&Monomial::var(i as usize));
            if expected != actual {
                return Err(Error::InvariantViolation(format!(
                    "coefficient of x_{i} is {actual}, b-table formula gives {expected} for {p:?}"
                )));
            }
        }
    }
    Ok(())
}
