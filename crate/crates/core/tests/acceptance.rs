//! Acceptance suite. Comparisons are exact integer equality; the only pinned
//! tolerance is the wall-clock budget of criterion 1 (`THEOREM_BUDGET`).
//!
//! Runs as a plain binary (`harness = false`) so each criterion prints one
//! PASS/FAIL line even without `--nocapture`:
//!
//! ```text
//! cargo test -p schmidt-congruence --test acceptance
//! ```

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use schmidt_congruence::arith::{binom_i, Integer};
use schmidt_congruence::cache::TableCache;
use schmidt_congruence::congruence::{
    inner_sum_constructive, inner_sum_direct, pan_check, partial_sum_minus, partial_sum_plus,
    theorem_check, CheckKind,
};
use schmidt_congruence::extension::{
    c_table, generalized_check, square_weight_coeffs, verify_square_weight, GeneralizedForm,
};
use schmidt_congruence::linearizer::{b_table, basis_value, product_linearize, verify_product_identity, BasisCombo};
use schmidt_congruence::schmidt::{
    apery_specialization_rule, weighted_sum, weighted_sum_single, SchmidtParams, Sign, Weight,
};
use schmidt_congruence::sweep::{run_sweep, InclusiveRange, SignSelector, SweepSpec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const THEOREM_BUDGET: Duration = Duration::from_secs(300);
const RANDOM_COMBO_PAIRS: u32 = 200;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn params(n: u32, m: u32, r: u32, e: Sign, a: u32) -> SchmidtParams {
    SchmidtParams::with_a(n, m, r, e, a).expect("valid parameters")
}

/// 1. Theorem grid n ≤ 25, m ≤ 3, r ≤ 3, both signs, single-threaded, under
///    five minutes.
fn criterion_1() -> Outcome {
    let started = Instant::now();
    let mut cells = 0;
    for n in 1..=25 {
        for m in 1..=3 {
            for r in 1..=3 {
                for e in Sign::BOTH {
                    let rep = theorem_check(&params(n, m, r, e, 0)).map_err(|e| e.to_string())?;
                    ensure(rep.passed(), || format!("counterexample at {:?}: {:?}", rep.params, rep.witness))?;
                    cells += 1;
                }
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(cells == 450, || format!("expected 450 cells, ran {cells}"))?;
    ensure(elapsed < THEOREM_BUDGET, || format!("took {elapsed:?}, limit {THEOREM_BUDGET:?}"))?;
    Ok(format!("{cells} cells divisible, {:.1} s single-threaded", elapsed.as_secs_f64()))
}

/// 2. Single-variable congruence for n ≤ 30 plus bit-exact agreement with
///    the specialized multi-variable sum.
fn criterion_2() -> Outcome {
    let mut cells = 0;
    for n in 1..=30 {
        for m in 1..=3 {
            for r in 1..=3 {
                for e in Sign::BOTH {
                    let p = params(n, m, r, e, 0);
                    let rep = pan_check(&p).map_err(|e| e.to_string())?;
                    ensure(rep.passed(), || format!("counterexample at {p:?}: {:?}", rep.witness))?;
                    // pan_check asserts the specialization internally; repeat it
                    // here from the public pieces.
                    let special = weighted_sum(&p, Weight::Plain)
                        .specialize(&apery_specialization_rule(r))
                        .map_err(|e| e.to_string())?;
                    ensure(special == weighted_sum_single(&p, Weight::Plain), || {
                        format!("specialization mismatch at {p:?}")
                    })?;
                    cells += 1;
                }
            }
        }
    }
    Ok(format!("{cells} cells divisible and specialization-exact"))
}

/// 3. b-tables for m ≤ 6, r ≤ 5: integrality, divisibility by C(k, m),
///    expansion certified at 2rm+1 points, frozen regression values.
fn criterion_3() -> Outcome {
    let ints = |v: &[i64]| v.iter().map(|&x| Integer::from(x)).collect::<Vec<_>>();
    let t12 = b_table(1, 2).map_err(|e| e.to_string())?;
    ensure(t12.entries() == ints(&[1, 2]).as_slice(), || format!("b_table(1,2) = {t12}"))?;
    let t22 = b_table(2, 2).map_err(|e| e.to_string())?;
    ensure(t22.entries() == ints(&[1, 6, 6]).as_slice(), || format!("b_table(2,2) = {t22}"))?;
    let mut tables = 0;
    for m in 0..=6 {
        for r in 1..=5 {
            let t = b_table(m, r).map_err(|e| format!("m={m} r={r}: {e}"))?;
            ensure(t.entries().len() == ((r - 1) * m + 1) as usize, || format!("length at m={m} r={r}"))?;
            for (k, b) in t.iter() {
                let d = binom_i(i64::from(k), i64::from(m));
                ensure((b % &d) == Integer::from(0), || format!("b[{m},{k}]^({r}) = {b} not divisible by {d}"))?;
            }
            // independent check at 2rm+1 points with plain binomials
            for l in 0..=(2 * r * m) as i64 {
                let mi = i64::from(m);
                let mut lhs = binom_i(2 * mi, mi);
                for _ in 0..r {
                    lhs *= binom_i(l + mi, 2 * mi);
                }
                let rhs: Integer = t
                    .iter()
                    .map(|(k, b)| b * binom_i(l + i64::from(k), 2 * i64::from(k)) * binom_i(2 * i64::from(k), i64::from(k)))
                    .sum();
                ensure(lhs == rhs, || format!("expansion fails at m={m} r={r} l={l}"))?;
            }
            ensure(t.certify().passed(), || format!("certificate fails at m={m} r={r}"))?;
            tables += 1;
        }
    }
    Ok(format!("{tables} tables integral, divisible, certified; b(1,2)=[1,2], b(2,2)=[1,6,6]"))
}

/// 4. Closed partial sums equal brute force for n ≤ 50.
fn criterion_4() -> Outcome {
    let mut checks = 0;
    for n in 1..=50i64 {
        for k in 0..n {
            let mut plus = Integer::from(0);
            let mut minus = Integer::from(0);
            for l in k..n {
                let term = binom_i(l + k, 2 * k) * binom_i(2 * k, k) * (2 * l + 1);
                if l % 2 == 0 {
                    minus += &term;
                } else {
                    minus -= &term;
                }
                plus += term;
            }
            let (nu, ku) = (n as u32, k as u32);
            ensure(partial_sum_plus(nu, ku) == plus, || format!("plus form fails at n={n} k={k}"))?;
            ensure(partial_sum_minus(nu, ku) == minus, || format!("minus form fails at n={n} k={k}"))?;
            checks += 2;
        }
    }
    Ok(format!("{checks} closed forms match brute force"))
}

/// 5. Product rule certified for i, j ≤ 8; combo multiplication sound on
///    200 random small combinations.
fn criterion_5() -> Outcome {
    for i in 0..=8 {
        for j in 0..=8 {
            ensure(verify_product_identity(i, j).passed(), || format!("product rule fails at i={i} j={j}"))?;
            let c = product_linearize(i, j);
            for l in 0..=(2 * (i + j)) as i64 {
                let l = Integer::from(l);
                ensure(c.eval(&l) == basis_value(i, &l) * basis_value(j, &l), || {
                    format!("pointwise mismatch at i={i} j={j} l={l}")
                })?;
            }
        }
    }
    let combo = || {
        proptest::collection::vec((0u32..5, -20i64..=20), 0..4).prop_map(BasisCombo::from_pairs)
    };
    let mut runner = TestRunner::new_with_rng(
        Config { cases: RANDOM_COMBO_PAIRS, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner
        .run(&(combo(), combo()), |(p, q)| {
            let pq = p.mul(&q);
            for k in 0..=20 {
                let k = Integer::from(k);
                prop_assert_eq!(pq.eval(&k), p.eval(&k) * q.eval(&k));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("81 product identities certified; combo_mul sound on {RANDOM_COMBO_PAIRS} random pairs"))
}

/// 6. Constructive inner sums equal direct ones, with the factor n carried
///    structurally.
fn criterion_6() -> Outcome {
    let cache = TableCache::new();
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    let mut frontier: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..3 {
        frontier = frontier
            .into_iter()
            .flat_map(|t| (0..=3).map(move |i| [t.clone(), vec![i]].concat()))
            .collect();
        tuples.extend(frontier.iter().cloned());
    }
    let mut checks = 0;
    for n in 1..=12u32 {
        for t in tuples.iter().filter(|t| t.iter().all(|&i| i < n)) {
            for r in 1..=2 {
                for e in Sign::BOTH {
                    let c = inner_sum_constructive(&cache, n, t, r, e).map_err(|e| e.to_string())?;
                    let d = inner_sum_direct(n, t, r, e).map_err(|e| e.to_string())?;
                    ensure(c.value == d, || format!("mismatch n={n} {t:?} r={r} ε={e}"))?;
                    ensure(&c.cofactor * n == c.value, || format!("factor n not structural at n={n} {t:?}"))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} inner sums agree (constructive = n·q = direct)"))
}

/// 7. Weighted generalizations.
fn criterion_7() -> Outcome {
    for j in 0..=5 {
        for a in 0..=5 {
            let t = c_table(j, a).map_err(|e| format!("j={j} a={a}: {e}"))?;
            ensure(t.certify().passed(), || format!("c-table certificate fails at j={j} a={a}"))?;
        }
    }
    for a in 0..=8u32 {
        let coeffs = square_weight_coeffs(a);
        for (i, c) in coeffs.iter().enumerate() {
            let expected = binom_i(i64::from(a), i as i64) * Integer::from(4).pow(i as u32);
            ensure(*c == expected, || format!("square weight coefficient a={a} i={i}"))?;
        }
        ensure(verify_square_weight(a).passed(), || format!("square weight identity a={a}"))?;
    }
    let mut kk1 = 0;
    for n in 1..=15 {
        for m in 1..=2 {
            for r in 1..=2 {
                for a in 0..=2 {
                    for e in Sign::BOTH {
                        let rep = generalized_check(&params(n, m, r, e, a), GeneralizedForm::Kk1, false)
                            .map_err(|e| e.to_string())?;
                        ensure(rep.passed(), || format!("kk1 counterexample {:?}", rep.params))?;
                        kk1 += 1;
                    }
                }
            }
        }
    }
    let mut odd = 0;
    for n in 1..=15 {
        for r in 1..=3 {
            for a in 0..=2 {
                for e in Sign::BOTH {
                    let rep = generalized_check(&params(n, 1, r, e, a), GeneralizedForm::OddPower, false)
                        .map_err(|e| e.to_string())?;
                    ensure(rep.passed(), || format!("odd-power counterexample {:?}", rep.params))?;
                    odd += 1;
                }
            }
        }
    }
    Ok(format!("36 c-tables certified, 9 square weights, {kk1} kk1 cells, {odd} odd-power cells"))
}

fn run_cli(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_schmidt"))
        .args(args)
        .env_remove(schmidt_congruence::cache::CACHE_DIR_ENV)
        .output()
        .map_err(|e| e.to_string())
}

/// 8. Determinism, parallel/serial equivalence and cache soundness of sweeps.
fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let grid = ["verify", "--n", "1..25", "--m", "1..3", "--r", "1..3", "--sign", "both", "--stable-output", "--no-cache"];

    let mut outputs = Vec::new();
    for (name, jobs) in [("serial.json", "1"), ("parallel.json", "4"), ("parallel2.json", "4")] {
        let out_path = path(name);
        let mut args = grid.to_vec();
        args.extend(["--jobs", jobs, "--json", &out_path]);
        let out = run_cli(&args)?;
        ensure(out.status.code() == Some(0), || {
            format!("{name}: exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
        outputs.push(std::fs::read(&out_path).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "serial and parallel manifests differ".into())?;
    ensure(outputs[1] == outputs[2], || "repeated runs differ".into())?;

    // Library route on the same grid.
    let mut spec = SweepSpec::new(CheckKind::Theorem, InclusiveRange::new(1, 25));
    spec.m = InclusiveRange::new(1, 3);
    spec.r = InclusiveRange::new(1, 3);
    spec.sign = SignSelector::Both;
    spec.stable_output = true;
    let serial = run_sweep(&spec, &TableCache::new()).map_err(|e| e.to_string())?;
    spec.jobs = 3;
    let parallel = run_sweep(&spec, &TableCache::new()).map_err(|e| e.to_string())?;
    let json = serial.to_json().map_err(|e| e.to_string())?;
    ensure(json == parallel.to_json().map_err(|e| e.to_string())?, || {
        "library sweeps differ across job counts".into()
    })?;
    ensure(serial.passed() && serial.cells.len() == 450, || "library sweep did not pass 450 cells".into())?;
    ensure(json.as_bytes() == outputs[0].as_slice(), || "CLI and library manifests differ".into())?;

    // Cold cache, then warm cache, on a cross-checked grid.
    let cache_file = path("tables.json");
    let cached = ["verify", "--n", "1..8", "--m", "1..2", "--r", "1..3", "--cross-check", "--stable-output", "--cache", &cache_file];
    let mut manifests = Vec::new();
    for name in ["cold.json", "warm.json"] {
        let out_path = path(name);
        let mut args = cached.to_vec();
        args.extend(["--json", &out_path]);
        let out = run_cli(&args)?;
        ensure(out.status.code() == Some(0), || format!("{name}: {}", String::from_utf8_lossy(&out.stderr)))?;
        manifests.push(std::fs::read(&out_path).map_err(|e| e.to_string())?);
    }
    ensure(manifests[0] == manifests[1], || "warm and cold cache manifests differ".into())?;
    let tables_cold = std::fs::read_to_string(&cache_file).map_err(|e| e.to_string())?;
    ensure(tables_cold.contains("\"7,3\""), || "cache file missing b-table 7,3".into())?;

    let b_cold = run_cli(&["btable", "--m", "7", "--r", "3", "--no-cache"])?;
    let b_warm = run_cli(&["btable", "--m", "7", "--r", "3", "--cache", &cache_file])?;
    ensure(b_cold.stdout == b_warm.stdout, || "btable differs between cold and warm cache".into())?;

    // A tampered cache is recomputed, not trusted.
    std::fs::write(&cache_file, tables_cold.replacen("\"1\"", "\"2\"", 1)).map_err(|e| e.to_string())?;
    let b_tampered = run_cli(&["btable", "--m", "7", "--r", "3", "--cache", &cache_file])?;
    ensure(b_tampered.stdout == b_cold.stdout, || "tampered cache changed btable output".into())?;

    Ok("serial = parallel = repeated (450 cells, byte-identical); warm = cold cache; tampered cache recomputed".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 theorem grid n<=25 m<=3 r<=3 ε=±1", criterion_1),
        ("2 single-variable sums n<=30 + specialization", criterion_2),
        ("3 b-tables m<=6 r<=5", criterion_3),
        ("4 closed partial sums n<=50", criterion_4),
        ("5 product rule i,j<=8 + combo_mul soundness", criterion_5),
        ("6 constructive = direct inner sums", criterion_6),
        ("7 weighted generalizations", criterion_7),
        ("8 sweep determinism / parallelism / cache", criterion_8),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let result = check();
        let secs = started.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("[PASS] criterion {name}: {detail} ({secs:.1} s)"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {why} ({secs:.1} s)");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
