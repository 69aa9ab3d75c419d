mod output;
mod verify;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qfrob::decomposition::{
    alpha_pn_table, coefficients_with, default_b_range, support_window, verify_euler, verify_rank, Bundle, Method,
};
use qfrob::oracle::{default_cache_dir, DiskCache, ModuleId, Oracle};
use qfrob::quadric::make_context;
use qfrob::spinor::{big_phi, MfDump};
use qfrob::tilting::obstruction_report;

use output::{Format, Report};

#[derive(Parser)]
#[command(name = "qfrob", version, about = "Frobenius push-forwards on smooth quadrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplicities of O(t) and S(t) in F^s_* O(a) or F^s_* S(a).
    Decompose(DecomposeArgs),
    /// Dimension table of one graded module.
    Dims(DimsArgs),
    /// Windows of a - tq where each summand type occurs.
    Support(SupportArgs),
    /// Tilting status of F^s_* O with obstruction evidence.
    Tilting(QuadricArgs),
    /// Cross-checks routes and identities over a parameter grid.
    Verify(VerifyArgs),
    /// Multiplicities of O(t) in F^s_* O(a) on projective space P^N.
    PnDecompose(PnArgs),
    /// The matrix factorization of the quadric.
    DumpMf(MfArgs),
}

#[derive(Args, Clone)]
struct QuadricArgs {
    /// Dimension of the quadric.
    #[arg(long)]
    n: u32,
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// Number of Frobenius iterations.
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Clone)]
struct CacheArgs {
    /// Directory for cached dimension tables (default: $QFROB_CACHE or the
    /// user cache directory).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Keep dimension tables in memory only.
    #[arg(long, conflicts_with = "cache_dir")]
    no_cache: bool,
}

impl CacheArgs {
    fn oracle(&self) -> Oracle {
        let dir = if self.no_cache { None } else { self.cache_dir.clone().or_else(default_cache_dir) };
        match dir {
            Some(d) => Oracle::default().with_cache(DiskCache::new(d)),
            None => Oracle::default(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Closed forms for s = 1, composition of s = 1 tables otherwise.
    Auto,
    Oracle,
    ClosedS1,
    Recursion,
}

#[derive(Clone, Copy, ValueEnum)]
enum BundleArg {
    #[value(name = "O", alias = "o")]
    O,
    #[value(name = "S", alias = "s")]
    S,
}

impl From<BundleArg> for Bundle {
    fn from(b: BundleArg) -> Self {
        match b {
            BundleArg::O => Bundle::O,
            BundleArg::S => Bundle::S,
        }
    }
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    quadric: QuadricArgs,
    #[arg(long, value_enum, default_value_t = BundleArg::O)]
    bundle: BundleArg,
    /// Twist a of the source bundle.
    #[arg(long, visible_alias = "twist", allow_hyphen_values = true, default_value_t = 0)]
    a: i64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Args)]
struct DimsArgs {
    #[command(flatten)]
    quadric: QuadricArgs,
    /// One of A, B, C, D, M, A_TILDE, B_TILDE, C_TILDE, M_TILDE.
    #[arg(long)]
    module: String,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Args)]
struct SupportArgs {
    #[command(flatten)]
    quadric: QuadricArgs,
    /// Only windows for this source bundle.
    #[arg(long, value_enum)]
    source: Option<BundleArg>,
    /// Only windows for this summand type.
    #[arg(long, value_enum)]
    target: Option<BundleArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Grid {
    /// n = 3, p in {2, 3}, s in {1, 2}.
    Tiny,
    /// s = 1 on n in {3, 4, 5}, p in {2, 3, 5}; s = 2 on n in {3, 4}, p in {2, 3}.
    Small,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, conflicts_with = "n")]
    grid: Option<Grid>,
    /// Verify a single (n, p, s) instead of a grid.
    #[arg(long, requires = "p")]
    n: Option<u32>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// Range of b for the Euler and section identities, as LO:HI
    /// (default -2n:2n).
    #[arg(long, allow_hyphen_values = true)]
    b_range: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Args)]
struct PnArgs {
    /// Dimension of the projective space.
    #[arg(long = "N")]
    big_n: u32,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long, visible_alias = "twist", allow_hyphen_values = true, default_value_t = 0)]
    a: i64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct MfArgs {
    /// Dimension of the quadric.
    #[arg(long)]
    n: u32,
    #[arg(long)]
    p: u64,
}

enum Failure {
    User(String),
    Internal(String),
    /// Output was written, but some check failed.
    Checks,
}

impl From<qfrob::Error> for Failure {
    fn from(e: qfrob::Error) -> Self {
        if e.is_user_error() {
            Failure::User(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn method_for(arg: MethodArg, s: u32) -> Method {
    match arg {
        MethodArg::Auto if s == 1 => Method::ClosedS1,
        MethodArg::Auto => Method::Recursion,
        MethodArg::Oracle => Method::Oracle,
        MethodArg::ClosedS1 => Method::ClosedS1,
        MethodArg::Recursion => Method::Recursion,
    }
}

fn parse_b_range(text: Option<&str>, n: u32) -> Result<std::ops::RangeInclusive<i64>, Failure> {
    let Some(text) = text else {
        return Ok(default_b_range(n));
    };
    let bad = || Failure::User(format!("invalid parameter `b-range`: expected LO:HI, got `{text}`"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Decompose(args) => {
            let q = &args.quadric;
            let ctx = make_context(q.n, q.p, q.s)?;
            let oracle = args.cache.oracle();
            let method = method_for(args.method, q.s);
            let table = coefficients_with(&oracle, &ctx, args.bundle.into(), args.a, method)?;
            let rank = verify_rank(&table);
            let euler = verify_euler(&table, default_b_range(q.n));
            Report::decomposition(&table, rank, euler).write(q.format, out)?;
            if !(rank && euler) {
                return Err(Failure::Internal("rank or Euler identity failed".into()));
            }
        }
        Command::Dims(args) => {
            let q = &args.quadric;
            let module: ModuleId = args.module.parse()?;
            let ctx = make_context(q.n, q.p, q.s)?;
            let table = args.cache.oracle().table(&ctx, module)?;
            Report::dims(&table).write(q.format, out)?;
        }
        Command::Support(args) => {
            let q = &args.quadric;
            let mut windows = Vec::new();
            for source in [Bundle::O, Bundle::S] {
                for target in [Bundle::O, Bundle::S] {
                    let keep = |f: Option<BundleArg>, b: Bundle| f.map_or(true, |x| Bundle::from(x) == b);
                    if keep(args.source, source) && keep(args.target, target) {
                        windows.push((source, target, support_window(q.n, q.p, q.s, source, target)?));
                    }
                }
            }
            Report::support(q.n, q.p, q.s, &windows).write(q.format, out)?;
        }
        Command::Tilting(q) => {
            let verdict = obstruction_report(q.n, q.p, q.s)?;
            Report::tilting(&verdict).write(q.format, out)?;
        }
        Command::Verify(args) => {
            let cases = match (args.grid, args.n, args.p) {
                (_, Some(n), Some(p)) => vec![(n, p, args.s)],
                (Some(Grid::Tiny), _, _) => verify::tiny_grid(),
                (Some(Grid::Small), _, _) | (None, None, _) => verify::small_grid(),
                (None, Some(_), None) => return Err(Failure::User("invalid parameter `p`: required with --n".into())),
            };
            let oracle = args.cache.oracle();
            let mut checks = Vec::new();
            for (n, p, s) in cases {
                let b_range = parse_b_range(args.b_range.as_deref(), n)?;
                checks.extend(verify::run_case(&oracle, n, p, s, b_range)?);
            }
            let all = checks.iter().all(|c| c.pass);
            Report::verify(&checks).write(args.format, out)?;
            if !all {
                return Err(Failure::Checks);
            }
        }
        Command::PnDecompose(args) => {
            let table = alpha_pn_table(args.big_n, args.p, args.s, args.a)?;
            Report::projective(args.big_n, args.p, args.s, args.a, &table).write(args.format, out)?;
        }
        Command::DumpMf(args) => {
            let mf = big_phi(args.n, args.p)?;
            let dump = MfDump::from(&mf);
            let value = serde_json::to_value(&dump).map_err(|e| Failure::Internal(e.to_string()))?;
            writeln!(out, "{}", serde_json::to_string_pretty(&value).map_err(|e| Failure::Internal(e.to_string()))?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Checks) => {
            eprintln!("some checks failed");
            ExitCode::from(1)
        }
    }
}
