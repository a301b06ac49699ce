//! Command-line front end: construct sunflower-free families, verify them,
//! compute the exact bounds, and enumerate subspaces.
//!
//! Exit codes: 0 success (for `verify`: proven sunflower-free), 1 witness
//! found, 2 parameter or input errors, 3 budget exhausted during
//! construction or enumeration, 4 inconclusive verification (budget ran out
//! before the search space was exhausted).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sunflower_core::{
    bound_sandwich, construct_a, construct_b, construct_example1, construct_g, construct_partite,
    construction_lower_bound, find_sunflower, gaussian, lower_bound_exponent, predicted_sizes,
    CertificateFile, Error, FamilyFile, FamilyTree, FieldSpec, Outcome, SearchBudget, SearchMode,
    Subspace, SubspaceIter, TreeFile, DEFAULT_ENUM_CAP,
};

#[derive(Parser)]
#[command(
    name = "sunflower",
    version,
    about = "Sunflower-free families of subspaces over finite fields"
)]
struct Cli {
    /// Worker threads; never changes any output byte.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Emit machine-readable progress events (JSON lines on stderr).
    #[arg(long, global = true)]
    json_log: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family and write it as a JSON family file.
    Construct(ConstructArgs),
    /// Search a family file for an s-sunflower and write a certificate.
    Verify(VerifyArgs),
    /// Print the exact bound chain for (s, k, q).
    Bounds(BoundsArgs),
    /// Enumerate the m-subspaces of V(n, q).
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Construction: a, b, g, partite, or example1.
    #[arg(long = "type")]
    construction: String,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Field order (a prime power).
    #[arg(long)]
    q: u64,
    /// Output path (defaults to <type>-[s<s>-k<k>-]q<q>.json).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the full nesting tree (a/b only).
    #[arg(long)]
    tree_out: Option<PathBuf>,
    /// Cap on materialized members.
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    budget_enum: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Family file to verify.
    #[arg(long = "in")]
    input: PathBuf,
    /// Sunflower size; defaults to the family file's s.
    #[arg(long)]
    s: Option<usize>,
    /// Sunflower definition: general or setlike.
    #[arg(long, default_value = "general")]
    mode: String,
    /// Certificate output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 5_000_000)]
    budget_pairs: u64,
    #[arg(long, default_value_t = 10_000_000)]
    budget_subsets: u64,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    s: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    q: u64,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    q: u64,
    /// Print only the count.
    #[arg(long)]
    count: bool,
    /// Stream destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    budget_enum: u64,
}

struct Logger {
    enabled: bool,
}

impl Logger {
    fn event(&self, name: &str, detail: &str) {
        if self.enabled {
            eprintln!("{{\"event\":\"{name}\",\"detail\":\"{detail}\"}}");
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded(_) => 3,
        _ => 2,
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code_for(&err))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.max(1))
        .build()
        .expect("worker pool");
    let log = Logger {
        enabled: cli.json_log,
    };
    pool.install(|| match cli.command {
        Command::Construct(args) => cmd_construct(args, &log),
        Command::Verify(args) => cmd_verify(args, &log),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Enumerate(args) => cmd_enumerate(args),
    })
}

fn tree_report(tree: &FamilyTree, q: u64) -> (Vec<Subspace>, String) {
    let leaves = tree.leaf_subspaces();
    let prediction = predicted_sizes(&tree.params, q);
    let mut report = String::new();
    let _ = writeln!(report, "per-level sizes: {:?}", tree.level_sizes());
    let _ = writeln!(
        report,
        "per-level exponents (bottom up): {:?}",
        prediction.exponents
    );
    let _ = writeln!(
        report,
        "closed-form lower bound: {} (q^{})",
        prediction.bound, prediction.bound_exponent
    );
    (leaves, report)
}

fn cmd_construct(args: ConstructArgs, log: &Logger) -> ExitCode {
    let field = match FieldSpec::from_order(args.q) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    log.event("construct", &args.construction);
    let need = |name: &str, v: Option<usize>| {
        v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required here")))
    };
    if args.budget_enum == 0 {
        return fail(Error::InvalidParameter("budgets must be positive".into()));
    }
    let cap = args.budget_enum;
    struct Built {
        ambient: usize,
        k: usize,
        s: Option<usize>,
        members: Vec<Subspace>,
        report: String,
    }
    let built: Result<Built, Error> = (|| match args.construction.as_str() {
        "a" | "b" => {
            let s = need("s", args.s)?;
            let k = need("k", args.k)?;
            let tree = if args.construction == "a" {
                construct_a(s, k, &field, cap)?
            } else {
                construct_b(s, k, &field, cap)?
            };
            if let Some(path) = &args.tree_out {
                std::fs::write(path, TreeFile::from_tree(&tree).to_json())
                    .map_err(|e| Error::Parse(e.to_string()))?;
            }
            let (members, report) = tree_report(&tree, args.q);
            Ok(Built {
                ambient: tree.params.ambient_dim,
                k,
                s: Some(s),
                members,
                report,
            })
        }
        "g" => {
            let s = need("s", args.s)?;
            let k = need("k", args.k)?;
            let members = construct_g(s, k, &field, cap)?;
            let report = construction_lower_bound("g", s, k, args.q)
                .map(|b| format!("closed-form lower bound: {b}\n"))
                .unwrap_or_default();
            Ok(Built {
                ambient: (s + 1) * k / 2 - 1,
                k,
                s: Some(s),
                members,
                report,
            })
        }
        "partite" => {
            let s = need("s", args.s)?;
            let k = need("k", args.k)?;
            let members = construct_partite(s, k, &field, cap)?;
            let report = construction_lower_bound("partite", s, k, args.q)
                .map(|b| format!("size [s-1]_q^k: {b}\n"))
                .unwrap_or_default();
            Ok(Built {
                ambient: k * (s - 1),
                k,
                s: Some(s),
                members,
                report,
            })
        }
        "example1" => {
            let members = construct_example1(&field, cap)?;
            let report = construction_lower_bound("example1", 3, 2, args.q)
                .map(|b| format!("predicted size q^4+q^2+q+1: {b}\n"))
                .unwrap_or_default();
            Ok(Built {
                ambient: 5,
                k: 2,
                s: Some(3),
                members,
                report,
            })
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown construction type '{other}'"
        ))),
    })();
    let Built {
        ambient: n,
        k,
        s,
        members,
        report,
    } = match built {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let path = args.out.unwrap_or_else(|| {
        let mut name = args.construction.clone();
        if let (Some(s), true) = (s, args.construction != "example1") {
            let _ = write!(name, "-s{s}");
            let _ = write!(name, "-k{k}");
        }
        let _ = write!(name, "-q{}", args.q);
        name.push_str(".json");
        PathBuf::from(name)
    });
    let file = FamilyFile::new(&field, n, k, Some(args.construction.clone()), s, &members);
    if let Err(e) = std::fs::write(&path, file.to_json()) {
        eprintln!("error: cannot write {}: {e}", path.display());
        return ExitCode::from(2);
    }
    println!(
        "construction: {} (s = {}, k = {k}, q = {})",
        args.construction,
        s.map_or("-".to_string(), |v| v.to_string()),
        args.q
    );
    println!("ambient: V({n}, {})", args.q);
    println!("members: {}", members.len());
    print!("{report}");
    println!("wrote {}", path.display());
    log.event("wrote", &path.display().to_string());
    ExitCode::SUCCESS
}

fn cmd_verify(args: VerifyArgs, log: &Logger) -> ExitCode {
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input.display());
            return ExitCode::from(2);
        }
    };
    let run = || -> Result<(CertificateFile, u8), Error> {
        let file = FamilyFile::parse(&text)?;
        let (field, members) = file.to_subspaces()?;
        let s = args
            .s
            .or(file.s)
            .ok_or_else(|| Error::InvalidParameter("--s is required (file has none)".into()))?;
        let mode = match args.mode.as_str() {
            "general" => SearchMode::GeneralPosition,
            "setlike" => SearchMode::SetLike,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown mode '{other}' (general or setlike)"
                )))
            }
        };
        if args.budget_pairs == 0 || args.budget_subsets == 0 {
            return Err(Error::InvalidParameter("budgets must be positive".into()));
        }
        let budget = SearchBudget {
            max_pairs: args.budget_pairs,
            max_subsets: args.budget_subsets,
            subset_threshold: SearchBudget::default().subset_threshold,
        };
        log.event("verify", &format!("{} members, s = {s}", members.len()));
        let mut cert = find_sunflower(&members, s, mode, &budget)?;
        if let (Some(bounds), Some(tag)) = (cert.bounds.as_mut(), file.construction.as_deref()) {
            bounds.lower =
                construction_lower_bound(tag, s, file.k, field.order() as u64);
        }
        let code = match (&cert.outcome, cert.stats.exhaustive) {
            (Outcome::Witness(_), _) => 1,
            (_, true) => 0,
            (_, false) => 4,
        };
        Ok((CertificateFile::from_certificate(&cert), code))
    };
    let (cert, code) = match run() {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let json = cert.to_json();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            println!(
                "{}: {} ({}; {} pairs, {} subsets)",
                args.input.display(),
                cert.outcome,
                if cert.exhaustive {
                    "exhaustive"
                } else {
                    "budgeted"
                },
                cert.pairs_examined,
                cert.subsets_examined
            );
            println!("wrote {}", path.display());
        }
        None => print!("{json}"),
    }
    log.event("verified", &cert.outcome);
    ExitCode::from(code)
}

fn cmd_bounds(args: BoundsArgs) -> ExitCode {
    if args.s < 3 || args.k < 2 {
        return fail(Error::InvalidParameter(
            "bounds need s >= 3 and k >= 2".into(),
        ));
    }
    if let Err(e) = FieldSpec::from_order(args.q) {
        return fail(e);
    }
    let sw = bound_sandwich(args.s, args.k, args.q);
    println!("s = {}, k = {}, q = {}", args.s, args.k, args.q);
    println!("lower bound:     {}", sw.lower);
    println!("product bound:   {}", sw.product);
    println!("closed-form cap: {}", sw.cap);
    println!("chain: {} <= {} <= {}  ok", sw.lower, sw.product, sw.cap);
    let regime = if args.s > args.k {
        "s >= k+1"
    } else {
        "s <= k"
    };
    println!(
        "lower exponent: q^{} [{regime}]",
        lower_bound_exponent(args.s, args.k)
    );
    println!(
        "ratio: product / q^{} = {} <= (q/(q-1))^k = {}",
        sw.reference_exponent, sw.product_ratio, sw.ratio_cap
    );
    ExitCode::SUCCESS
}

fn cmd_enumerate(args: EnumerateArgs) -> ExitCode {
    let field = match FieldSpec::from_order(args.q) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    if args.m > args.n {
        return fail(Error::InvalidParameter(format!(
            "m = {} exceeds n = {}",
            args.m, args.n
        )));
    }
    let iter = match SubspaceIter::new(field, args.n, args.m, args.budget_enum) {
        Ok(it) => it,
        Err(e) => return fail(e),
    };
    let expected = gaussian(args.n as i64, args.m as i64, args.q);
    if args.count {
        let count = iter.count();
        assert_eq!(
            sunflower_core::BigUint::from(count),
            expected,
            "enumeration disagrees with the Gaussian coefficient"
        );
        println!("{count}");
        return ExitCode::SUCCESS;
    }
    let mut out: Box<dyn std::io::Write> = match &args.out {
        Some(path) => match std::fs::File::create(path) {
            Ok(f) => Box::new(std::io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(std::io::BufWriter::new(std::io::stdout())),
    };
    let mut count = 0u64;
    for s in iter {
        count += 1;
        let rows: Vec<Vec<u32>> = s
            .basis()
            .rows_iter()
            .map(|r| r.iter().map(|e| e.0).collect())
            .collect();
        let line = serde_json::to_string(&rows).expect("rows serialize");
        if writeln!(out, "{line}").is_err() {
            eprintln!("error: write failed");
            return ExitCode::from(2);
        }
    }
    drop(out);
    assert_eq!(
        sunflower_core::BigUint::from(count),
        expected,
        "enumeration disagrees with the Gaussian coefficient"
    );
    eprintln!("{count} subspaces");
    ExitCode::SUCCESS
}
