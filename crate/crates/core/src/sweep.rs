//! Parameter sweeps over `(n, m, r, ε, a)` grids and the JSON run manifest.
//!
//! Cells are independent and run on a rayon pool of the requested size;
//! results are collected in grid order, so the manifest does not depend on
//! scheduling. With `stable_output` every timing field is zero and two runs
//! of the same spec produce byte-identical JSON.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::TableCache;
use crate::congruence::{check_multi, cross_check, CheckKind, CongruenceReport, Outcome};
use crate::error::{Error, Result};
use crate::extension::{generalized_check, GeneralizedForm};
use crate::schmidt::{SchmidtParams, Sign};

pub const MANIFEST_SCHEMA: &str = "schmidt-congruence/manifest/v1";

/// Inclusive range `lo..hi`; a single value `v` means `v..v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusiveRange {
    pub lo: u32,
    pub hi: u32,
}

impl InclusiveRange {
    pub fn new(lo: u32, hi: u32) -> Self {
        InclusiveRange { lo, hi }
    }

    pub fn single(v: u32) -> Self {
        InclusiveRange { lo: v, hi: v }
    }

    pub fn iter(self) -> impl Iterator<Item = u32> + Clone {
        self.lo..=self.hi
    }
}

impl FromStr for InclusiveRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("expected N or LO..HI, got {s:?}"));
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        let range = match s.split_once("..") {
            Some((lo, hi)) => InclusiveRange::new(parse(lo)?, parse(hi)?),
            None => InclusiveRange::single(parse(s)?),
        };
        if range.lo > range.hi {
            return Err(Error::InvalidParameter(format!("empty range {s:?}")));
        }
        Ok(range)
    }
}

impl fmt::Display for InclusiveRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignSelector {
    Plus,
    Minus,
    Both,
}

impl SignSelector {
    pub fn signs(self) -> &'static [Sign] {
        match self {
            SignSelector::Plus => &[Sign::Plus],
            SignSelector::Minus => &[Sign::Minus],
            SignSelector::Both => &Sign::BOTH,
        }
    }
}

impl FromStr for SignSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "+1" | "1" | "plus" => Ok(SignSelector::Plus),
            "-" | "-1" | "minus" => Ok(SignSelector::Minus),
            "both" | "±" => Ok(SignSelector::Both),
            _ => Err(Error::InvalidParameter(format!(
                "sign must be +, -, or both; got {s:?}"
            ))),
        }
    }
}

/// Everything needed to reproduce a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub check: CheckKind,
    pub n: InclusiveRange,
    pub m: InclusiveRange,
    pub r: InclusiveRange,
    /// Only used by the weighted checks; ignored (treated as 0) otherwise.
    pub a: InclusiveRange,
    pub sign: SignSelector,
    #[serde(skip)]
    pub jobs: usize,
    pub cross_check: bool,
    pub exploratory: bool,
    pub include_sums: bool,
    pub stable_output: bool,
}

impl SweepSpec {
    /// A spec with `m = r = 1`, both signs, serial execution.
    pub fn new(check: CheckKind, n: InclusiveRange) -> Self {
        SweepSpec {
            check,
            n,
            m: InclusiveRange::single(1),
            r: InclusiveRange::single(1),
            a: InclusiveRange::single(0),
            sign: SignSelector::Both,
            jobs: 1,
            cross_check: false,
            exploratory: false,
            include_sums: true,
            stable_output: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lower = |name: &str, range: InclusiveRange, min: u32| {
            if range.lo < min {
                Err(Error::InvalidParameter(format!("{name} must be at least {min}, got {range}")))
            } else if range.lo > range.hi {
                Err(Error::InvalidParameter(format!("{name} range is empty")))
            } else {
                Ok(())
            }
        };
        lower("n", self.n, 1)?;
        lower("m", self.m, 1)?;
        lower("r", self.r, 1)?;
        lower("a", self.a, 0)?;
        if self.jobs == 0 {
            return Err(Error::InvalidParameter("jobs must be at least 1".into()));
        }
        if self.check == CheckKind::OddPower && self.m.hi > 1 && !self.exploratory {
            return Err(Error::InvalidParameter(
                "the odd-power check is only established for m = 1; pass --exploratory for m > 1"
                    .into(),
            ));
        }
        if self.cross_check && self.check != CheckKind::Theorem {
            return Err(Error::InvalidParameter(
                "cross-checking is only available for the theorem check".into(),
            ));
        }
        Ok(())
    }

    fn uses_a(&self) -> bool {
        matches!(self.check, CheckKind::Kk1 | CheckKind::OddPower)
    }

    /// Grid cells in ascending `(n, m, r, ε, a)` order.
    pub fn cells(&self) -> Vec<SchmidtParams> {
        let a_range = if self.uses_a() { self.a } else { InclusiveRange::single(0) };
        let mut out = Vec::new();
        for n in self.n.iter() {
            for m in self.m.iter() {
                for r in self.r.iter() {
                    for &epsilon in self.sign.signs() {
                        for a in a_range.iter() {
                            out.push(SchmidtParams { n, m, r, epsilon, a });
                        }
                    }
                }
            }
        }
        out
    }
}

/// One JSON document per run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub tool_version: String,
    pub spec: SweepSpec,
    pub cells: Vec<CongruenceReport>,
    pub verdict: Outcome,
    pub passed: usize,
    pub failed: usize,
    pub total_elapsed_us: u64,
}

impl RunManifest {
    pub fn passed(&self) -> bool {
        self.verdict == Outcome::Pass
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

fn run_cell(spec: &SweepSpec, cache: &TableCache, p: &SchmidtParams) -> Result<CongruenceReport> {
    let mut report = match spec.check {
        CheckKind::Theorem | CheckKind::Pan => check_multi(p, spec.check)?,
        CheckKind::Kk1 => generalized_check(p, GeneralizedForm::Kk1, spec.exploratory)?,
        CheckKind::OddPower => generalized_check(p, GeneralizedForm::OddPower, spec.exploratory)?,
    };
    if spec.cross_check {
        cross_check(cache, p)?;
    }
    if !spec.include_sums {
        report.polynomial.clear();
        report.coefficients.clear();
    }
    if spec.stable_output {
        report.elapsed_us = 0;
    }
    Ok(report)
}

/// Runs every cell of the grid. Counterexamples are recorded in the
/// manifest; internal errors abort the sweep.
pub fn run_sweep(spec: &SweepSpec, cache: &TableCache) -> Result<RunManifest> {
    spec.validate()?;
    let started = Instant::now();
    let cells = spec.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    let reports: Vec<CongruenceReport> = pool.install(|| {
        cells
            .par_iter()
            .map(|p| run_cell(spec, cache, p))
            .collect::<Result<_>>()
    })?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    Ok(RunManifest {
        schema: MANIFEST_SCHEMA.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        spec: spec.clone(),
        passed: reports.len() - failed,
        failed,
        verdict: if failed == 0 { Outcome::Pass } else { Outcome::Fail },
        cells: reports,
        total_elapsed_us: if spec.stable_output {
            0
        } else {
            started.elapsed().as_micros() as u64
        },
    })
}
