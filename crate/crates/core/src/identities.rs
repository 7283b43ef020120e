//! Named identity checks, one per binomial identity the library relies on.
//! Each run produces a list of labelled results; polynomial identities are
//! certified at `degree + 1` points.

use std::fmt;
use std::str::FromStr;

use crate::cache::TableCache;
use crate::certify::{range_samples, Verdict};
use crate::congruence::{partial_sum_closed, partial_sum_direct};
use crate::error::{Error, Result};
use crate::extension::verify_square_weight;
use crate::linearizer::{pfaff_check, verify_product_identity};
use crate::schmidt::Sign;

/// Identity selector. The short names `main5`, `main8`, `main12`, `main13`,
/// `repeat`, `main14` and `sq_weight` are the stable command-line names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityKind {
    /// `C(l+m,2m)^r C(2m,m) = sum_t b_{m,t} B_t(l)`; parameters `m`, `r`.
    PowerExpansion,
    /// Rewritten Pfaff–Saalschütz sum; parameters `m`, `k`.
    Pfaff,
    /// `sum_{l=k}^{n-1} (2l+1) B_k(l) = n C(n,k+1) C(n+k,k)` for all `k < n`.
    PartialSumPlus,
    /// Alternating version of the above.
    PartialSumMinus,
    /// `B_i B_j` expansion; parameters `i`, `j`.
    Product,
    /// `k^a (k+1)^a C(k+j, 2j)` expansion; parameters `j`, `a`.
    Kk1Expansion,
    /// `(2k+1)^(2a) = sum_i C(a,i) 4^i k^i (k+1)^i`; parameter `a`.
    SquareWeight,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 7] = [
        IdentityKind::PowerExpansion,
        IdentityKind::Pfaff,
        IdentityKind::PartialSumPlus,
        IdentityKind::PartialSumMinus,
        IdentityKind::Product,
        IdentityKind::Kk1Expansion,
        IdentityKind::SquareWeight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::PowerExpansion => "main5",
            IdentityKind::Pfaff => "main8",
            IdentityKind::PartialSumPlus => "main12",
            IdentityKind::PartialSumMinus => "main13",
            IdentityKind::Product => "repeat",
            IdentityKind::Kk1Expansion => "main14",
            IdentityKind::SquareWeight => "sq_weight",
        }
    }

    /// Parameter names the identity takes, in order.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            IdentityKind::PowerExpansion => &["m", "r"],
            IdentityKind::Pfaff => &["m", "k"],
            IdentityKind::PartialSumPlus | IdentityKind::PartialSumMinus => &["n"],
            IdentityKind::Product => &["i", "j"],
            IdentityKind::Kk1Expansion => &["j", "a"],
            IdentityKind::SquareWeight => &["a"],
        }
    }
}

impl FromStr for IdentityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let alias = match s {
            "power" => Some(IdentityKind::PowerExpansion),
            "pfaff" => Some(IdentityKind::Pfaff),
            "partial-plus" => Some(IdentityKind::PartialSumPlus),
            "partial-minus" => Some(IdentityKind::PartialSumMinus),
            "product" => Some(IdentityKind::Product),
            "kk1" => Some(IdentityKind::Kk1Expansion),
            "sq-weight" => Some(IdentityKind::SquareWeight),
            _ => None,
        };
        alias
            .or_else(|| IdentityKind::ALL.into_iter().find(|k| k.name() == s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown identity {s:?}")))
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One labelled sub-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityLine {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl IdentityLine {
    fn from_verdict(label: String, v: &Verdict) -> Self {
        let detail = match v {
            Verdict::Pass { points } => format!("certified at {points} points"),
            Verdict::Fail { point, lhs, rhs } => format!("mismatch at {point}: {lhs} != {rhs}"),
        };
        IdentityLine {
            label,
            passed: v.passed(),
            detail,
        }
    }
}

/// Runs an identity with named parameters given as `(name, value)` pairs.
/// The parameter set must match [`IdentityKind::parameters`] exactly.
pub fn run_identity(
    kind: IdentityKind,
    params: &[(&str, u32)],
    cache: &TableCache,
) -> Result<Vec<IdentityLine>> {
    let expected = kind.parameters();
    let mut names: Vec<&str> = params.iter().map(|(n, _)| *n).collect();
    names.sort_unstable();
    let mut wanted = expected.to_vec();
    wanted.sort_unstable();
    if names != wanted {
        return Err(Error::InvalidParameter(format!(
            "identity {kind} takes --{}, got {}",
            expected.join(" --"),
            if names.is_empty() {
                "no parameters".to_string()
            } else {
                format!("--{}", names.join(" --"))
            }
        )));
    }
    let get = |name: &str| params.iter().find(|(n, _)| *n == name).map(|&(_, v)| v).unwrap();

    let lines = match kind {
        IdentityKind::PowerExpansion => {
            let (m, r) = (get("m"), get("r"));
            if r == 0 {
                return Err(Error::InvalidParameter("r must be at least 1".into()));
            }
            let table = cache.b_table(m, r)?;
            vec![
                IdentityLine {
                    label: format!("b[{m},*] for r={r} divisible by C(t,{m})"),
                    passed: table.divisibility_holds(),
                    detail: table.to_string(),
                },
                IdentityLine::from_verdict(format!("expansion m={m} r={r}"), &table.certify()),
            ]
        }
        IdentityKind::Pfaff => {
            let (m, k) = (get("m"), get("k"));
            // 2k+3 points, two of them negative
            let samples = range_samples(-2, 2 * k as usize + 3);
            vec![IdentityLine::from_verdict(
                format!("pfaff m={m} k={k}"),
                &pfaff_check(m, k, &samples)?,
            )]
        }
        IdentityKind::PartialSumPlus | IdentityKind::PartialSumMinus => {
            let n = get("n");
            if n == 0 {
                return Err(Error::InvalidParameter("n must be at least 1".into()));
            }
            let sign = if kind == IdentityKind::PartialSumPlus { Sign::Plus } else { Sign::Minus };
            (0..n)
                .map(|k| {
                    let closed = partial_sum_closed(n, k, sign);
                    let direct = partial_sum_direct(n, k, sign);
                    IdentityLine {
                        label: format!("n={n} k={k}"),
                        passed: closed == direct,
                        detail: format!("closed {closed}, direct {direct}"),
                    }
                })
                .collect()
        }
        IdentityKind::Product => {
            let (i, j) = (get("i"), get("j"));
            vec![IdentityLine::from_verdict(
                format!("product i={i} j={j}"),
                &verify_product_identity(i, j),
            )]
        }
        IdentityKind::Kk1Expansion => {
            let (j, a) = (get("j"), get("a"));
            let table = cache.c_table(j, a)?;
            vec![IdentityLine::from_verdict(
                format!("expansion j={j} a={a}: {table}"),
                &table.certify(),
            )]
        }
        IdentityKind::SquareWeight => {
            let a = get("a");
            vec![IdentityLine::from_verdict(format!("square weight a={a}"), &verify_square_weight(a))]
        }
    };
    Ok(lines)
}
