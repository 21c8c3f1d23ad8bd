//! Command-line surface: every report the library can produce, serialized as
//! JSON or CSV, with a documented exit-code contract.
//!
//! Exit codes: 0 success, 1 usage error, 2 enumeration budget exceeded,
//! 3 identity/verification failure.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use num::ToPrimitive;
use serde_json::json;

use matperm::cycleindex::{
    limit_q_report, mat_joint_prob, poisson_limit, shepp_lloyd_series, sym_joint_prob, Constraint,
};
use matperm::fq::FieldSpec;
use matperm::oracle::{enumerate_matrix_distribution, harmonic, jl_ratio, EnumerationBudget};
use matperm::padic::{
    coker_zero_prob_exact, conjecture_experiment, monte_carlo_cokernel, padic_limit_report,
};
use matperm::series::MarkerMonomial;
use matperm::verify::{run_checks, CheckOptions, FaultInjection};
use matperm::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_IDENTITY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "matperm",
    about = "Exact factor statistics of random matrix characteristic polynomials over F_q, \
             their permutation-statistics limits, and p-adic cokernel experiments",
    version
)]
struct Cli {
    /// Output format (verify defaults to plain PASS/FAIL lines)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for enumeration and sampling (0 = rayon default)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// key=value config file (keys: budget, seed, threads, format)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Enumeration budget override (also settable via MATPERM_BUDGET)
    #[arg(long, global = true)]
    budget: Option<u128>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    CycleIndex,
    Brute,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Exact joint probability of irreducible-factor counts over Mat_n(F_q)
    Joint(JointArgs),
    /// Convergence table of the matrix probability toward the S_n value
    LimitQ(LimitQArgs),
    /// Exact joint cycle-count probability over S_n
    Perm(PermArgs),
    /// Generating function for forced-zero / exact-hit cycle constraints
    SheppLloyd(SheppLloydArgs),
    /// Scaled k-cycle probabilities approaching 1 as n grows
    JordanLandau(JordanLandauArgs),
    /// Monte-Carlo estimate of the all-cokernels-zero event over Z/p^K
    Cokernel(CokernelArgs),
    /// Empirical cokernel-size frequencies vs the Poisson product target
    Conjecture(ConjectureArgs),
    /// Run the named identity-check suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct JointArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    q: u64,
    /// Constraint "d=K:k=M", repeatable
    #[arg(long = "constraint")]
    constraints: Vec<String>,
    #[arg(long, value_enum, default_value = "cycle-index")]
    method: Method,
}

#[derive(Args)]
struct LimitQArgs {
    #[arg(long)]
    n: u32,
    #[arg(long = "constraint")]
    constraints: Vec<String>,
    /// Strictly increasing prime powers, comma-separated
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,7,8,9")]
    qs: Vec<u64>,
}

#[derive(Args)]
struct PermArgs {
    #[arg(long)]
    n: u32,
    #[arg(long = "constraint")]
    constraints: Vec<String>,
}

#[derive(Args)]
struct SheppLloydArgs {
    /// Degrees whose cycle count is forced to zero, comma-separated
    #[arg(long, value_delimiter = ',', default_value = "")]
    zero: Vec<u32>,
    /// Exact-hit constraint "d=K:k=M" (count in {0, k}), repeatable
    #[arg(long = "hit")]
    hits: Vec<String>,
    /// Truncation order of the series
    #[arg(long, default_value_t = 12)]
    order: usize,
}

#[derive(Args)]
struct JordanLandauArgs {
    /// Cycle count
    #[arg(long)]
    k: usize,
    /// Values of n, comma-separated
    #[arg(long, value_delimiter = ',')]
    n: Vec<u64>,
}

#[derive(Args)]
struct CokernelArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: u32,
    /// Distinct degrees, comma-separated
    #[arg(long, value_delimiter = ',')]
    degrees: Vec<u32>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Working precision K (matrices over Z/p^K)
    #[arg(long, default_value_t = 1)]
    precision: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Print the exact-grid report over n/p ranges instead of sampling
    #[arg(long, value_delimiter = ',')]
    grid_ps: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    grid_ns: Vec<u32>,
}

#[derive(Args)]
struct ConjectureArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: u32,
    #[arg(long = "constraint")]
    constraints: Vec<String>,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 3)]
    precision: u32,
    /// Defaults to the config-file seed, else 42
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only the named checks (repeatable); default all
    #[arg(long = "only")]
    only: Vec<String>,
    /// Values of q for the automorphism-sum identity grid
    #[arg(long, value_delimiter = ',')]
    qs: Vec<u64>,
    /// Largest n for the identity grids
    #[arg(long)]
    nmax: Option<u32>,
    /// Perturb one formula side to prove the suite can fail (diagnostic)
    #[arg(long, hide = true, default_value = "none")]
    inject_fault: String,
}

fn parse_constraint(s: &str) -> Result<Constraint, Error> {
    let err = || {
        Error::InvalidInput(format!(
            "constraint '{s}' does not match \"d=<degree>:k=<count>\""
        ))
    };
    let (d_part, k_part) = s.split_once(':').ok_or_else(err)?;
    let d = d_part.strip_prefix("d=").ok_or_else(err)?;
    let k = k_part.strip_prefix("k=").ok_or_else(err)?;
    Ok(Constraint::new(
        d.parse().map_err(|_| err())?,
        k.parse().map_err(|_| err())?,
    ))
}

fn parse_constraints(items: &[String]) -> Result<Vec<Constraint>, Error> {
    items.iter().map(|s| parse_constraint(s)).collect()
}

fn rational_json(r: &BigRational) -> serde_json::Value {
    json!({
        "exact": format!("{}/{}", r.numer(), r.denom()),
        "float": r.to_f64(),
    })
}

fn constraints_json(cs: &[Constraint]) -> serde_json::Value {
    json!(cs
        .iter()
        .map(|c| json!({"d": c.degree, "k": c.count}))
        .collect::<Vec<_>>())
}

struct RunConfig {
    format: Option<Format>,
    output: Option<PathBuf>,
    budget: EnumerationBudget,
    seed_default: u64,
}

fn load_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut file_map: HashMap<String, String> = HashMap::new();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read config {path:?}: {e}")))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidInput(format!("config line {}: expected key=value", lineno + 1))
            })?;
            file_map.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    let parse_u128 = |s: &str, what: &str| {
        s.parse::<u128>()
            .map_err(|_| Error::InvalidInput(format!("invalid {what}: '{s}'")))
    };
    // precedence: flag > environment > config file > default
    let mut budget = EnumerationBudget::default().0;
    if let Some(v) = file_map.get("budget") {
        budget = parse_u128(v, "config budget")?;
    }
    if let Ok(v) = std::env::var("MATPERM_BUDGET") {
        budget = parse_u128(&v, "MATPERM_BUDGET")?;
    }
    if let Some(v) = cli.budget {
        budget = v;
    }
    if budget == 0 {
        return Err(Error::InvalidInput("budget must be positive".into()));
    }
    let format = cli.format.or_else(|| {
        file_map.get("format").and_then(|v| match v.as_str() {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            _ => None,
        })
    });
    let threads = cli.threads.or_else(|| {
        file_map
            .get("threads")
            .and_then(|v| v.parse::<usize>().ok())
    });
    if let Some(t) = threads {
        configure_threads(t);
    }
    let seed_default = file_map
        .get("seed")
        .and_then(|v| v.parse::<u64>().ok())
        .unwrap_or(42);
    Ok(RunConfig {
        format,
        output: cli.output.clone(),
        budget: EnumerationBudget(budget),
        seed_default,
    })
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: usize) {
    if threads > 0 {
        // ignore failure: the global pool may already be initialized
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: usize) {}

fn emit(cfg: &RunConfig, text: String) -> Result<(), Error> {
    match &cfg.output {
        Some(path) => fs::write(path, text.as_bytes())
            .map_err(|e| Error::InvalidInput(format!("cannot write {path:?}: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_json(cfg: &RunConfig, value: serde_json::Value) -> Result<(), Error> {
    emit(cfg, serde_json::to_string_pretty(&value).expect("serializable"))
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<u8, Error> {
    match &cli.command {
        Command::Joint(args) => cmd_joint(cfg, args),
        Command::LimitQ(args) => cmd_limit_q(cfg, args),
        Command::Perm(args) => cmd_perm(cfg, args),
        Command::SheppLloyd(args) => cmd_shepp_lloyd(cfg, args),
        Command::JordanLandau(args) => cmd_jordan_landau(cfg, args),
        Command::Cokernel(args) => cmd_cokernel(cfg, args),
        Command::Conjecture(args) => cmd_conjecture(cfg, args),
        Command::Verify(args) => cmd_verify(cfg, args),
    }
}

fn cmd_joint(cfg: &RunConfig, args: &JointArgs) -> Result<u8, Error> {
    let constraints = parse_constraints(&args.constraints)?;
    let cycle = match args.method {
        Method::Brute => None,
        _ => Some(mat_joint_prob(args.n, args.q, &constraints)?),
    };
    let brute = match args.method {
        Method::CycleIndex => None,
        _ => {
            let field = FieldSpec::new_from_q(args.q)?;
            let tracked: Vec<u32> = constraints.iter().map(|c| c.degree).collect();
            let dist = enumerate_matrix_distribution(&field, args.n, &tracked, cfg.budget)?;
            Some(dist.prob_constraints(&constraints)?)
        }
    };
    let matches = match (&cycle, &brute) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let report = json!({
        "n": args.n,
        "q": args.q,
        "constraints": constraints_json(&constraints),
        "method": match args.method {
            Method::CycleIndex => "cycle-index",
            Method::Brute => "brute",
            Method::Both => "both",
        },
        "cycle_index": cycle.as_ref().map(rational_json),
        "brute": brute.as_ref().map(rational_json),
        "match": matches,
    });
    match cfg.format {
        Some(Format::Csv) => {
            let mut text = String::from("method,exact,float\n");
            if let Some(v) = &cycle {
                text.push_str(&format!(
                    "cycle-index,{}/{},{}\n",
                    v.numer(),
                    v.denom(),
                    v.to_f64().unwrap_or(f64::NAN)
                ));
            }
            if let Some(v) = &brute {
                text.push_str(&format!(
                    "brute,{}/{},{}\n",
                    v.numer(),
                    v.denom(),
                    v.to_f64().unwrap_or(f64::NAN)
                ));
            }
            emit(cfg, text)?;
        }
        _ => emit_json(cfg, report)?,
    }
    if matches == Some(false) {
        eprintln!("FAIL: cycle-index and brute-force probabilities disagree");
        return Ok(EXIT_IDENTITY);
    }
    if args.method == Method::Both {
        eprintln!("PASS: cycle-index equals brute-force enumeration");
    }
    Ok(0)
}

fn cmd_limit_q(cfg: &RunConfig, args: &LimitQArgs) -> Result<u8, Error> {
    let constraints = parse_constraints(&args.constraints)?;
    let report = limit_q_report(args.n, &constraints, &args.qs)?;
    match cfg.format {
        Some(Format::Csv) => emit(cfg, report.to_csv())?,
        _ => emit_json(cfg, report.to_json())?,
    }
    Ok(0)
}

fn cmd_perm(cfg: &RunConfig, args: &PermArgs) -> Result<u8, Error> {
    let constraints = parse_constraints(&args.constraints)?;
    let exact = sym_joint_prob(args.n, &constraints)?;
    let poisson = poisson_limit(&constraints)?;
    let report = json!({
        "n": args.n,
        "constraints": constraints_json(&constraints),
        "exact": format!("{}/{}", exact.numer(), exact.denom()),
        "float": exact.to_f64(),
        "poisson_target": poisson.to_string_symbolic(),
        "poisson_target_float": poisson.to_f64(),
    });
    match cfg.format {
        Some(Format::Csv) => emit(
            cfg,
            format!(
                "n,exact,float,poisson_target\n{},{}/{},{},{}\n",
                args.n,
                exact.numer(),
                exact.denom(),
                exact.to_f64().unwrap_or(f64::NAN),
                poisson.to_f64(),
            ),
        )?,
        _ => emit_json(cfg, report)?,
    }
    Ok(0)
}

fn cmd_shepp_lloyd(cfg: &RunConfig, args: &SheppLloydArgs) -> Result<u8, Error> {
    let hits: Vec<(u32, u64)> = parse_constraints(&args.hits)?
        .into_iter()
        .map(|c| (c.degree, c.count))
        .collect();
    let zero: Vec<u32> = args.zero.clone();
    let series = shepp_lloyd_series(&zero, &hits, args.order)?;
    let coeffs: Vec<serde_json::Value> = (0..=args.order)
        .map(|n| {
            let c = series
                .coefficient(n, &MarkerMonomial::constant())
                .expect("order in range");
            json!({
                "n": n,
                "exact": format!("{}/{}", c.numer(), c.denom()),
                "float": c.to_f64(),
            })
        })
        .collect();
    match cfg.format {
        Some(Format::Csv) => {
            let mut text = String::from("n,exact,float\n");
            for n in 0..=args.order {
                let c = series
                    .coefficient(n, &MarkerMonomial::constant())
                    .expect("order in range");
                text.push_str(&format!(
                    "{},{}/{},{}\n",
                    n,
                    c.numer(),
                    c.denom(),
                    c.to_f64().unwrap_or(f64::NAN)
                ));
            }
            emit(cfg, text)?;
        }
        _ => emit_json(
            cfg,
            json!({
                "zero": zero,
                "hits": hits.iter().map(|&(d, k)| json!({"d": d, "k": k})).collect::<Vec<_>>(),
                "order": args.order,
                "coefficients": coeffs,
            }),
        )?,
    }
    Ok(0)
}

fn cmd_jordan_landau(cfg: &RunConfig, args: &JordanLandauArgs) -> Result<u8, Error> {
    if args.k == 0 {
        return Err(Error::InvalidInput("k must be >= 1".into()));
    }
    if args.n.is_empty() {
        return Err(Error::InvalidInput("at least one n is required".into()));
    }
    let rows: Vec<serde_json::Value> = args
        .n
        .iter()
        .map(|&n| {
            let ratio = jl_ratio(n, args.k);
            let mut row = json!({"n": n, "k": args.k, "ratio": ratio});
            if args.k == 2 {
                // independent cross-check: the k = 2 ratio is H_{n-1} / ln n
                let h = harmonic(n - 1).to_f64() / (n as f64).ln();
                row["harmonic_check"] = json!(h);
            }
            row
        })
        .collect();
    match cfg.format {
        Some(Format::Csv) => {
            let mut text = String::from("n,k,ratio\n");
            for row in &rows {
                text.push_str(&format!("{},{},{}\n", row["n"], row["k"], row["ratio"]));
            }
            emit(cfg, text)?;
        }
        _ => emit_json(cfg, json!({"k": args.k, "rows": rows}))?,
    }
    Ok(0)
}

fn cmd_cokernel(cfg: &RunConfig, args: &CokernelArgs) -> Result<u8, Error> {
    if !args.grid_ps.is_empty() || !args.grid_ns.is_empty() {
        let report = padic_limit_report(&args.degrees, &args.grid_ns, &args.grid_ps)?;
        match cfg.format {
            Some(Format::Csv) => emit(cfg, report.to_csv())?,
            _ => emit_json(cfg, report.to_json())?,
        }
        return Ok(0);
    }
    let exact = coker_zero_prob_exact(args.p, args.n, &args.degrees)?;
    let mc = monte_carlo_cokernel(
        args.p,
        args.n,
        args.precision,
        &args.degrees,
        args.samples,
        args.seed,
        cfg.budget.0,
    )?;
    let exact_f = exact.to_f64().unwrap_or(f64::NAN);
    let within = (mc.estimate() - exact_f).abs() <= mc.ci99_half_width();
    let report = json!({
        "p": args.p,
        "n": args.n,
        "K": args.precision,
        "event": "coker P(A) = 0 for every irreducible P of the listed degrees",
        "degrees": args.degrees,
        "seed": args.seed,
        "samples": mc.samples,
        "empirical": mc.estimate(),
        "ci99": mc.ci99_half_width(),
        "exact": format!("{}/{}", exact.numer(), exact.denom()),
        "exact_float": exact_f,
        "within_ci99": within,
        "poisson_target": args.degrees.iter().map(|&d| -1.0 / d as f64).sum::<f64>().exp(),
        "saturated_fraction": mc.saturated as f64 / mc.samples as f64,
    });
    match cfg.format {
        Some(Format::Csv) => emit(
            cfg,
            format!(
                "p,n,K,samples,empirical,ci99,exact,within_ci99\n{},{},{},{},{},{},{}/{},{}\n",
                args.p,
                args.n,
                args.precision,
                mc.samples,
                mc.estimate(),
                mc.ci99_half_width(),
                exact.numer(),
                exact.denom(),
                within,
            ),
        )?,
        _ => emit_json(cfg, report)?,
    }
    eprintln!(
        "{}: empirical {:.6} vs exact {:.6} (99% half-width {:.6})",
        if within { "PASS" } else { "FAIL" },
        mc.estimate(),
        exact_f,
        mc.ci99_half_width()
    );
    Ok(if within { 0 } else { EXIT_IDENTITY })
}

fn cmd_conjecture(cfg: &RunConfig, args: &ConjectureArgs) -> Result<u8, Error> {
    let constraints = parse_constraints(&args.constraints)?;
    let seed = args.seed.unwrap_or(cfg.seed_default);
    let report = conjecture_experiment(
        args.p,
        args.n,
        args.precision,
        &constraints,
        args.samples,
        seed,
        cfg.budget.0,
    )?;
    match cfg.format {
        Some(Format::Csv) => {
            let mut text = String::from("tuple,hits,frequency\n");
            for row in &report.rows {
                let label = row
                    .polys
                    .iter()
                    .map(|p| {
                        p.iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect::<Vec<_>>()
                    .join(";");
                text.push_str(&format!(
                    "{label},{},{}\n",
                    row.hits,
                    row.hits as f64 / report.samples as f64
                ));
            }
            emit(cfg, text)?;
        }
        _ => emit_json(cfg, report.to_json())?,
    }
    Ok(0)
}

fn cmd_verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<u8, Error> {
    let fault = FaultInjection::parse(&args.inject_fault)?;
    let mut options = CheckOptions::default();
    if !args.qs.is_empty() {
        options.qs = args.qs.clone();
    }
    if let Some(nmax) = args.nmax {
        options.nmax = nmax;
    }
    options.budget = cfg.budget;
    let results = run_checks(fault, &options);
    let selected: Vec<_> = results
        .iter()
        .filter(|r| args.only.is_empty() || args.only.iter().any(|o| o == r.name))
        .collect();
    if selected.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no checks match {:?}",
            args.only
        )));
    }
    let all_passed = selected.iter().all(|r| r.passed);
    match cfg.format {
        Some(Format::Json) => emit_json(
            cfg,
            json!({
                "passed": all_passed,
                "results": selected.iter().map(|r| json!({
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                })).collect::<Vec<_>>(),
            }),
        )?,
        _ => {
            let mut text = String::new();
            for r in &selected {
                text.push_str(&r.render());
                text.push('\n');
            }
            emit(cfg, text.trim_end().to_string())?;
        }
    }
    Ok(if all_passed { 0 } else { EXIT_IDENTITY })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(&cli, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}
