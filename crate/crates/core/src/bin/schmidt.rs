use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use schmidt_congruence::cache::{TableCache, CACHE_DIR_ENV, CACHE_FILE_NAME};
use schmidt_congruence::certify::Verdict;
use schmidt_congruence::congruence::CheckKind;
use schmidt_congruence::error::Error;
use schmidt_congruence::identities::{run_identity, IdentityKind};
use schmidt_congruence::linearizer::verify_tuple_identity;
use schmidt_congruence::sweep::{run_sweep, InclusiveRange, SignSelector, SweepSpec};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Exact verification of divisibility congruences for sums of powers of
/// multi-variable Schmidt polynomials.
#[derive(Parser, Debug)]
#[command(name = "schmidt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Args, Debug)]
struct CacheArgs {
    /// Table cache file (default: $SCHMIDT_CACHE_DIR/tables.json when set)
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Ignore any cache file
    #[arg(long, global = true, conflicts_with = "cache")]
    no_cache: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check divisibility by n over a parameter grid
    Verify(VerifyArgs),
    /// Print the b-coefficients for one (m, r)
    Btable {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        r: u32,
    },
    /// Print the c-coefficients for one (j, a)
    Ctable {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        a: u32,
    },
    /// Certify one of the underlying binomial identities
    Identity(IdentityArgs),
    /// Expand a product of binomial powers in the B_t basis
    Linearize {
        /// Comma-separated indices i_1,...,i_m
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        indices: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckArg {
    Theorem,
    Pan,
    Kk1,
    OddPower,
}

impl From<CheckArg> for CheckKind {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::Theorem => CheckKind::Theorem,
            CheckArg::Pan => CheckKind::Pan,
            CheckArg::Kk1 => CheckKind::Kk1,
            CheckArg::OddPower => CheckKind::OddPower,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Range of n, as N or LO..HI (inclusive)
    #[arg(long)]
    n: InclusiveRange,
    #[arg(long, default_value = "1")]
    m: InclusiveRange,
    #[arg(long, default_value = "1")]
    r: InclusiveRange,
    /// Weight exponent range for kk1 / odd-power
    #[arg(long, default_value = "0")]
    a: InclusiveRange,
    /// +, -, or both
    #[arg(long, default_value = "both", allow_hyphen_values = true)]
    sign: SignSelector,
    #[arg(long, value_enum, default_value_t = CheckArg::Theorem)]
    check: CheckArg,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the JSON manifest here; `-` for stdout
    #[arg(long, allow_hyphen_values = true)]
    json: Option<String>,
    /// Rebuild each sum along the linearization route and compare
    #[arg(long)]
    cross_check: bool,
    /// Allow the odd-power check with m > 1
    #[arg(long)]
    exploratory: bool,
    /// Leave the expanded sums out of the manifest
    #[arg(long)]
    brief: bool,
    /// Zero all timing fields so manifests are byte-comparable
    #[arg(long)]
    stable_output: bool,
}

#[derive(Args, Debug)]
struct IdentityArgs {
    /// main5 | main8 | main12 | main13 | repeat | main14 | sq_weight
    which: String,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    i: Option<u32>,
    #[arg(long)]
    j: Option<u32>,
    #[arg(long)]
    a: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e @ (Error::InvalidParameter(_) | Error::Io(_))) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("internal error: {e}");
            EXIT_INTERNAL
        }
    };
    ExitCode::from(code)
}

fn cache_path(explicit: Option<&Path>, disabled: bool) -> Option<PathBuf> {
    if disabled {
        return None;
    }
    explicit.map(Path::to_path_buf).or_else(|| {
        std::env::var_os(CACHE_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(CACHE_FILE_NAME))
    })
}

fn open_cache(path: Option<&Path>) -> Result<TableCache, Error> {
    match path {
        None => Ok(TableCache::new()),
        Some(p) => {
            let (cache, stats) = TableCache::load(p)?;
            if stats.unreadable {
                eprintln!("warning: ignoring unreadable cache file {}", p.display());
            } else if stats.rejected > 0 {
                eprintln!(
                    "warning: {} cache entries failed verification and will be recomputed",
                    stats.rejected
                );
            }
            Ok(cache)
        }
    }
}

fn persist(cache: &TableCache, path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) if cache.computed() > 0 => cache.save(p),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let path = cache_path(cli.cache.cache.as_deref(), cli.cache.no_cache);
    let path = path.as_deref();
    match cli.command {
        Command::Verify(args) => verify(args, path),
        Command::Btable { m, r } => {
            if r == 0 {
                return Err(Error::InvalidParameter("r must be at least 1".into()));
            }
            let cache = open_cache(path)?;
            println!("{}", cache.b_table(m, r)?);
            persist(&cache, path)?;
            Ok(EXIT_PASS)
        }
        Command::Ctable { j, a } => {
            let cache = open_cache(path)?;
            println!("{}", cache.c_table(j, a)?);
            persist(&cache, path)?;
            Ok(EXIT_PASS)
        }
        Command::Identity(args) => identity(args, path),
        Command::Linearize { indices, r } => linearize(&indices, r, path),
    }
}

fn verify(args: VerifyArgs, path: Option<&Path>) -> Result<u8, Error> {
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let spec = SweepSpec {
        check: args.check.into(),
        n: args.n,
        m: args.m,
        r: args.r,
        a: args.a,
        sign: args.sign,
        jobs,
        cross_check: args.cross_check,
        exploratory: args.exploratory,
        include_sums: !args.brief,
        stable_output: args.stable_output,
    };
    spec.validate()?;

    // Fail on an unwritable destination before doing any work.
    let mut sink: Option<Box<dyn Write>> = match args.json.as_deref() {
        None => None,
        Some("-") => Some(Box::new(std::io::stdout())),
        Some(path) => Some(Box::new(File::create(path).map_err(|e| {
            Error::InvalidParameter(format!("cannot write {path}: {e}"))
        })?)),
    };

    let cache = open_cache(path)?;
    let manifest = run_sweep(&spec, &cache)?;
    persist(&cache, path)?;

    match sink.as_mut() {
        Some(out) => out.write_all(manifest.to_json()?.as_bytes())?,
        None => {
            for cell in &manifest.cells {
                let p = &cell.params;
                let status = if cell.passed() { "pass" } else { "FAIL" };
                let mut line = format!("n={} m={} r={} eps={} a={}: {status}", p.n, p.m, p.r, p.epsilon, p.a);
                if let Some(w) = &cell.witness {
                    line += &format!(" (coefficient {} of {} is {} mod {})", w.coefficient, w.monomial, w.residue, p.n);
                }
                println!("{line}");
            }
        }
    }
    let summary = format!(
        "{} cells: {} passed, {} failed",
        manifest.cells.len(),
        manifest.passed,
        manifest.failed
    );
    if args.json.as_deref() == Some("-") {
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    Ok(if manifest.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn identity(args: IdentityArgs, path: Option<&Path>) -> Result<u8, Error> {
    let kind: IdentityKind = args.which.parse()?;
    let given: Vec<(&str, u32)> = [
        ("n", args.n),
        ("m", args.m),
        ("r", args.r),
        ("k", args.k),
        ("i", args.i),
        ("j", args.j),
        ("a", args.a),
    ]
    .into_iter()
    .filter_map(|(name, v)| v.map(|v| (name, v)))
    .collect();
    let cache = open_cache(path)?;
    let lines = run_identity(kind, &given, &cache)?;
    persist(&cache, path)?;
    let mut ok = true;
    for line in &lines {
        ok &= line.passed;
        let status = if line.passed { "pass" } else { "FAIL" };
        println!("{kind} {}: {status} ({})", line.label, line.detail);
    }
    Ok(if ok { EXIT_PASS } else { EXIT_FAIL })
}

fn linearize(indices: &[u32], r: u32, path: Option<&Path>) -> Result<u8, Error> {
    if indices.is_empty() {
        return Err(Error::InvalidParameter("index list must be nonempty".into()));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let cache = open_cache(path)?;
    let combo = cache.tuple_linearize(indices, r)?;
    persist(&cache, path)?;
    println!("{combo}");

    let max = indices.iter().copied().max().unwrap_or(0);
    let sum: u32 = indices.iter().sum();
    let lo = combo.min_index().unwrap_or(0);
    let hi = combo.max_index().unwrap_or(0);
    let bounds_ok = lo >= max && hi <= r * sum;
    let verdict = verify_tuple_identity(&combo, indices, r);
    println!(
        "min index {lo} >= max(indices) {max}: {}; max index {hi} <= r*sum {}: {}",
        bounds_ok_str(lo >= max),
        r * sum,
        bounds_ok_str(hi <= r * sum)
    );
    let verdict_passed = verdict.passed();
    match verdict {
        Verdict::Pass { points } => println!("certified at {points} points"),
        Verdict::Fail { point, lhs, rhs } => println!("mismatch at k={point}: {lhs} != {rhs}"),
    }
    Ok(if bounds_ok && verdict_passed { EXIT_PASS } else { EXIT_FAIL })
}

fn bounds_ok_str(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "VIOLATED"
    }
}
