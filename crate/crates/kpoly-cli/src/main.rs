//! Command-line front end: construct family members, expand them in the
//! combinatorial bases, enumerate fillings, and run the conjecture scans and
//! the identity suite.
//!
//! Results go to stdout (or `--out FILE`), progress to stderr. JSON output is
//! canonical, so identical invocations are byte-identical. Exit codes: 0
//! success, 1 usage error, 2 a scan found a counterexample, 3 an internal
//! invariant failed.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kpoly::expand::{expand_in_basis, product_expansion, ElementCache};
use kpoly::family::{family_poly, Family};
use kpoly::scan::{conjecture_scan, grid_compositions, ScanBounds, ScanKind};
use kpoly::skyline::{enumerate_fillings, is_highest, HighestMode, SkylineVariant};
use kpoly::verify::run_identity_suite;
use kpoly::{parse_composition, Error as LibError, Parsed, WeakComposition};

const EXIT_USAGE: i32 = 1;
const EXIT_COUNTEREXAMPLE: i32 = 2;
const EXIT_INTERNAL: i32 = 3;

#[derive(Parser)]
#[command(
    name = "kpoly",
    about = "Exact arithmetic for deformed key, atom, and quasisymmetric polynomial families",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct one family member and print it
    Compute(ComputeArgs),
    /// Expand one family member in a finer basis
    Expand(ExpandArgs),
    /// Expand a product of two family members in a basis
    Product(ProductArgs),
    /// List the set-valued fillings of an index
    Fillings(FillingsArgs),
    /// Scan a conjecture over a grid of small indices
    Scan(ScanArgs),
    /// Run the identity suite over a grid of small indices
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Family name (e.g. glide, kaon, lascoux-atom, schur)
    #[arg(long)]
    family: String,
    /// Index, comma-separated (e.g. 0,2,0,1)
    #[arg(long)]
    a: String,
    /// Number of variables; pads unstable indices with trailing zeros
    #[arg(long)]
    n: Option<usize>,
    /// Substitute this integer for the deformation variable b
    #[arg(long)]
    beta: Option<i64>,
    /// Emit canonical JSON instead of text
    #[arg(long)]
    json: bool,
    /// Write the result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExpandArgs {
    /// Family of the member being expanded
    #[arg(long)]
    target: String,
    /// Index of the member, comma-separated
    #[arg(long)]
    a: String,
    /// Basis family to expand into
    #[arg(long)]
    basis: String,
    /// Number of variables; pads the index with trailing zeros
    #[arg(long)]
    n: Option<usize>,
    /// Write the result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProductArgs {
    /// Family of the left factor
    #[arg(long)]
    left: String,
    /// Index of the left factor
    #[arg(long)]
    a: String,
    /// Family of the right factor
    #[arg(long)]
    right: String,
    /// Index of the right factor
    #[arg(long)]
    b: String,
    /// Basis family to expand the product into
    #[arg(long)]
    basis: String,
    /// Write the result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FillingsArgs {
    /// Index, comma-separated
    #[arg(long)]
    a: String,
    /// Filling variant: atom, quasi, or key
    #[arg(long)]
    variant: String,
    /// Keep only the highest fillings (atom and quasi variants)
    #[arg(long)]
    highest: bool,
    /// Write the result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Conjecture to scan: euler, kaon-product, or lascoux-product
    #[arg(long)]
    conjecture: String,
    /// Largest index weight on the grid
    #[arg(long, default_value_t = 4)]
    max_weight: u32,
    /// Largest index length on the grid
    #[arg(long, default_value_t = 3)]
    max_len: usize,
    /// Most zero entries allowed in a grid index (default: unrestricted)
    #[arg(long)]
    max_zeros: Option<usize>,
    /// Worker threads (default: KPOLY_JOBS, then machine parallelism)
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest index weight on the grid
    #[arg(long, default_value_t = 6)]
    max_weight: u32,
    /// Largest index length on the grid
    #[arg(long, default_value_t = 4)]
    max_len: usize,
    /// Most zero entries allowed in a grid index (default: unrestricted)
    #[arg(long)]
    max_zeros: Option<usize>,
    /// Worker threads (default: KPOLY_JOBS, then machine parallelism)
    #[arg(long)]
    jobs: Option<usize>,
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure to report: exit code plus message.
type Failure = (i32, String);

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 2 on usage errors by default; this tool reserves 2
            // for scan counterexamples and reports usage problems as 1
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.cmd) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("kpoly: {}", msg);
            code
        }
    }
}

/// Maps a library error onto an exit code: broken internal invariants are 3,
/// everything else is a usage problem.
fn lib_failure(e: LibError) -> Failure {
    let code = match e {
        LibError::Internal(_) | LibError::ExpansionFailed(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    };
    (code, e.to_string())
}

fn parse_family(flag: &str, s: &str) -> Result<Family, Failure> {
    Family::parse(s).map_err(|e| (EXIT_USAGE, format!("--{}: {}", flag, e)))
}

fn parse_index(flag: &str, s: &str) -> Result<WeakComposition, Failure> {
    match parse_composition(s) {
        Ok(Parsed::Weak(a)) => Ok(a),
        Ok(Parsed::Colored(_)) => Err((
            EXIT_USAGE,
            format!("--{}: red entries are not allowed here", flag),
        )),
        Err(e) => Err((EXIT_USAGE, format!("--{}: {}", flag, e))),
    }
}

fn resolve_jobs(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(j) = flag {
        return Ok(j.max(1));
    }
    if let Ok(value) = std::env::var("KPOLY_JOBS") {
        return match value.parse::<usize>() {
            Ok(j) => Ok(j.max(1)),
            Err(_) => Err((EXIT_USAGE, format!("KPOLY_JOBS is not a number: {:?}", value))),
        };
    }
    Ok(std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1))
}

fn bounds_for(max_weight: u32, max_len: usize, max_zeros: Option<usize>) -> ScanBounds {
    ScanBounds { max_weight, max_len, max_zeros: max_zeros.unwrap_or(max_len) }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| (EXIT_USAGE, format!("cannot write {}: {}", path.display(), e))),
        None => {
            print!("{}", content);
            Ok(())
        }
    }
}

fn run(cmd: Command) -> Result<i32, Failure> {
    match cmd {
        Command::Compute(args) => compute(args),
        Command::Expand(args) => expand(args),
        Command::Product(args) => product(args),
        Command::Fillings(args) => fillings(args),
        Command::Scan(args) => scan(args),
        Command::Verify(args) => verify(args),
    }
}

fn compute(args: ComputeArgs) -> Result<i32, Failure> {
    let family = parse_family("family", &args.family)?;
    let a = parse_index("a", &args.a)?;
    let mut p = family_poly(family, &a, args.n).map_err(lib_failure)?;
    if let Some(t) = args.beta {
        p = p.specialize_beta(t);
    }
    let content = if args.json {
        let mut json = serde_json::to_string(&p.to_dto())
            .map_err(|e| (EXIT_INTERNAL, format!("serialization: {}", e)))?;
        json.push('\n');
        json
    } else {
        format!("{}\n", p)
    };
    emit(&args.out, &content)?;
    Ok(0)
}

fn expand(args: ExpandArgs) -> Result<i32, Failure> {
    let target = parse_family("target", &args.target)?;
    let basis = parse_family("basis", &args.basis)?;
    let a = parse_index("a", &args.a)?;
    let p = family_poly(target, &a, args.n).map_err(lib_failure)?;
    let cache = ElementCache::new();
    let expansion = expand_in_basis(&p, basis, &cache).map_err(lib_failure)?;
    let mut json = serde_json::to_string(&expansion.to_dto(false))
        .map_err(|e| (EXIT_INTERNAL, format!("serialization: {}", e)))?;
    json.push('\n');
    emit(&args.out, &json)?;
    Ok(0)
}

fn product(args: ProductArgs) -> Result<i32, Failure> {
    let left = parse_family("left", &args.left)?;
    let right = parse_family("right", &args.right)?;
    let basis = parse_family("basis", &args.basis)?;
    let a = parse_index("a", &args.a)?;
    let b = parse_index("b", &args.b)?;
    let cache = ElementCache::new();
    let expansion = product_expansion(left, &a, right, &b, basis, &cache).map_err(lib_failure)?;
    let mut json = serde_json::to_string(&expansion.to_dto(true))
        .map_err(|e| (EXIT_INTERNAL, format!("serialization: {}", e)))?;
    json.push('\n');
    emit(&args.out, &json)?;
    Ok(0)
}

fn fillings(args: FillingsArgs) -> Result<i32, Failure> {
    let a = parse_index("a", &args.a)?;
    let (variant, mode) = match args.variant.as_str() {
        "atom" => (SkylineVariant::Atom, Some(HighestMode::Meson)),
        "quasi" => (SkylineVariant::Quasi, Some(HighestMode::QuasiYamanouchi)),
        "key" => (SkylineVariant::Key, None),
        other => {
            return Err((
                EXIT_USAGE,
                format!("--variant: unknown variant {:?} (want atom, quasi, or key)", other),
            ))
        }
    };
    let mode = match (args.highest, mode) {
        (false, _) => None,
        (true, Some(mode)) => Some(mode),
        (true, None) => {
            return Err((
                EXIT_USAGE,
                "--highest: the key variant has no highest-filling notion".to_string(),
            ))
        }
    };
    let list: Vec<_> = enumerate_fillings(&a, variant)
        .into_iter()
        .filter(|t| mode.map_or(true, |m| is_highest(t, m)))
        .map(|t| t.to_dto(variant))
        .collect();
    let mut json = serde_json::to_string(&list)
        .map_err(|e| (EXIT_INTERNAL, format!("serialization: {}", e)))?;
    json.push('\n');
    emit(&args.out, &json)?;
    Ok(0)
}

fn scan(args: ScanArgs) -> Result<i32, Failure> {
    let kind = ScanKind::parse(&args.conjecture)
        .map_err(|e| (EXIT_USAGE, format!("--conjecture: {}", e)))?;
    let bounds = bounds_for(args.max_weight, args.max_len, args.max_zeros);
    let jobs = resolve_jobs(args.jobs)?;
    let grid = grid_compositions(&bounds);
    let cases = if kind.is_pairwise() { grid.len() * grid.len() } else { grid.len() };
    eprintln!("scanning {} over {} cases with {} workers", kind.name(), cases, jobs);
    let records = conjecture_scan(kind, &bounds, jobs).map_err(lib_failure)?;
    let mut content = String::new();
    let mut failures = 0usize;
    for record in &records {
        if !record.ok {
            failures += 1;
        }
        let line = serde_json::to_string(record)
            .map_err(|e| (EXIT_INTERNAL, format!("serialization: {}", e)))?;
        content.push_str(&line);
        content.push('\n');
    }
    emit(&args.out, &content)?;
    eprintln!("{} records, {} counterexamples", records.len(), failures);
    Ok(if failures > 0 { EXIT_COUNTEREXAMPLE } else { 0 })
}

fn verify(args: VerifyArgs) -> Result<i32, Failure> {
    let bounds = bounds_for(args.max_weight, args.max_len, args.max_zeros);
    let jobs = resolve_jobs(args.jobs)?;
    eprintln!(
        "verifying {} grid indices with {} workers",
        grid_compositions(&bounds).len(),
        jobs
    );
    let report = run_identity_suite(&bounds, jobs).map_err(lib_failure)?;
    let content = if args.json {
        let mut json = serde_json::to_string(&report)
            .map_err(|e| (EXIT_INTERNAL, format!("serialization: {}", e)))?;
        json.push('\n');
        json
    } else {
        let mut text = String::new();
        for check in &report.checks {
            if check.passed {
                let _ = writeln!(text, "PASS {} ({} cases)", check.name, check.cases);
            } else {
                let _ = writeln!(
                    text,
                    "FAIL {} ({}/{} failed): {}",
                    check.name, check.failures, check.cases, check.detail
                );
            }
        }
        for (family, count) in &report.fallbacks {
            let _ = writeln!(text, "note: {} expansions fell back to elimination {} times", family, count);
        }
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(text, "{} checks, {} failed", report.checks.len(), failed);
        text
    };
    emit(&args.out, &content)?;
    Ok(if report.all_passed() { 0 } else { EXIT_INTERNAL })
}
