use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use veronet::code::{verify_code, CodeParams, TheoremReport};
use veronet::format::{read_code, read_subspace, write_code};
use veronet::{build_code, predicted_params, simulate, subspace_distance, ChannelConfig, Code, Field};

#[derive(Parser)]
#[command(name = "veronet", version, about = "Osculating-space subspace codes of Veronese varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write it as JSON.
    Construct {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        shape: Shape,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare predicted parameters with those of the constructed code.
    Params {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Check every claimed property over a grid of parameters.
    Verify {
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 4, 5])]
        q: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 4])]
        d: Vec<u32>,
        /// Osculation orders; all 1 <= k < d when omitted. Values with k >= d are skipped.
        #[arg(long, value_delimiter = ',')]
        k: Vec<u32>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Subspace distance between two subspace files.
    Distance {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Send codewords through a random operator channel and decode them.
    Simulate {
        /// Read the code from a file instead of building it.
        #[arg(long, conflicts_with_all = ["q", "p", "m", "irreducible", "n", "d", "k"])]
        code: Option<PathBuf>,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = 0)]
        erasures: usize,
        #[arg(long, default_value_t = 0)]
        errors: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, env = "VERONET_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Field order, a prime power.
    #[arg(long)]
    q: Option<u64>,
    /// Characteristic; an alternative to --q.
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree, with --p.
    #[arg(long)]
    m: Option<u32>,
    /// Modulus coefficients, lowest first, including the leading 1.
    #[arg(long, value_delimiter = ',')]
    irreducible: Option<Vec<u32>>,
}

#[derive(Args)]
struct Shape {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    k: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

enum Failure {
    /// Bad arguments, unreadable input, infeasible parameters.
    Usage(String),
    /// The run completed but a check did not hold.
    Check(String),
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

impl FieldArgs {
    fn resolve(&self) -> Result<Field, Failure> {
        let (p, m) = match (self.q, self.p) {
            (Some(q), p) => {
                let f = Field::with_order(q).map_err(Failure::usage)?;
                let (fp, fm) = (f.characteristic() as u64, f.degree());
                if p.is_some_and(|p| p != fp) || self.m.is_some_and(|m| m != fm) {
                    return Err(Failure::usage(format!("--q {q} disagrees with --p/--m")));
                }
                if self.irreducible.is_none() {
                    return Ok(f);
                }
                (fp, fm)
            }
            (None, Some(p)) => (p, self.m.unwrap_or(1)),
            (None, None) => return Err(Failure::usage("a field is required: pass --q, or --p and --m")),
        };
        Field::new(p, m, self.irreducible.as_deref()).map_err(Failure::usage)
    }
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn construct(field: &FieldArgs, shape: &Shape, out: Option<&Path>) -> Outcome {
    let field = field.resolve()?;
    let code = build_code(shape.n, shape.d, shape.k, &field).map_err(Failure::usage)?;
    emit(&write_code(&code), out)
}

fn params_rows(p: &CodeParams) -> [(&'static str, String); 8] {
    [
        ("N", p.packet_length.to_string()),
        ("dim", p.dim.to_string()),
        ("size", p.size.to_string()),
        ("log_q_size", format!("{:.6}", p.log_q_size)),
        ("D", p.min_distance.to_string()),
        ("lambda", p.lambda.to_string()),
        ("rate", format!("{:.6}", p.rate)),
        ("delta", p.delta.to_string()),
    ]
}

fn params(field: &FieldArgs, shape: &Shape, format: OutputFormat) -> Outcome {
    let field = field.resolve()?;
    let (n, d, k) = (shape.n, shape.d, shape.k);
    let predicted = predicted_params(n, d, k, field.order() as u64).map_err(Failure::usage)?;
    let constructed = build_code(n, d, k, &field).map_err(Failure::usage)?.params().clone();
    let agree = predicted == constructed;
    let text = match format {
        OutputFormat::Json => to_json(&json!({
            "q": field.order(), "n": n, "d": d, "k": k,
            "predicted": predicted, "constructed": constructed, "agree": agree,
        })),
        OutputFormat::Table => {
            let mut s = format!("q={} n={n} d={d} k={k}\n{:<12}{:>12}{:>12}\n", field.order(), "", "predicted", "constructed");
            for ((name, a), (_, b)) in params_rows(&predicted).into_iter().zip(params_rows(&constructed)) {
                let mark = if a == b { "" } else { "  <- differs" };
                let _ = writeln!(s, "{name:<12}{a:>12}{b:>12}{mark}");
            }
            s
        }
    };
    emit(&text, None)?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Check("predicted and constructed parameters differ".into()))
    }
}

fn grid(qs: &[u64], ns: &[usize], ds: &[u32], ks: &[u32]) -> Result<Vec<(u64, usize, u32, u32)>, Failure> {
    let mut tuples = Vec::new();
    for &q in qs {
        for &n in ns {
            for &d in ds {
                let orders: Vec<u32> = if ks.is_empty() { (1..d).collect() } else { ks.iter().copied().filter(|&k| k < d).collect() };
                tuples.extend(orders.into_iter().map(|k| (q, n, d, k)));
            }
        }
    }
    tuples.sort_unstable();
    tuples.dedup();
    if tuples.is_empty() {
        return Err(Failure::usage("the grid is empty"));
    }
    Ok(tuples)
}

fn verify_row(&(q, n, d, k): &(u64, usize, u32, u32)) -> Result<TheoremReport, Failure> {
    let field = Field::with_order(q).map_err(Failure::usage)?;
    let code = build_code(n, d, k, &field).map_err(|e| Failure::usage(format!("(q={q}, n={n}, d={d}, k={k}): {e}")))?;
    verify_code(&code).map_err(Failure::usage)
}

fn verify(qs: &[u64], ns: &[usize], ds: &[u32], ks: &[u32], format: OutputFormat) -> Outcome {
    let tuples = grid(qs, ns, ds, ks)?;
    let reports = tuples.par_iter().map(verify_row).collect::<Result<Vec<_>, _>>()?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let text = match format {
        OutputFormat::Json => to_json(&json!({ "all_passed": failed == 0, "rows": reports })),
        OutputFormat::Table => {
            let mut s = format!("{:>3} {:>2} {:>2} {:>2} {:>5} {:>4} {:>6} {:>4}  status\n", "q", "n", "d", "k", "N", "dim", "size", "D");
            for r in &reports {
                let p = &r.observed;
                let status = if r.passed() {
                    "pass".to_string()
                } else {
                    let names: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                    format!("FAIL {}", names.join(","))
                };
                let _ = writeln!(
                    s,
                    "{:>3} {:>2} {:>2} {:>2} {:>5} {:>4} {:>6} {:>4}  {status}",
                    r.q, r.n, r.d, r.k, p.packet_length, p.dim, p.size, p.min_distance
                );
            }
            let _ = writeln!(s, "{} of {} rows pass", reports.len() - failed, reports.len());
            s
        }
    };
    emit(&text, None)?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{failed} grid rows failed")))
    }
}

fn distance(a: &Path, b: &Path, format: OutputFormat) -> Outcome {
    let va = read_subspace(&read_file(a)?).map_err(|e| Failure::usage(format!("{}: {e}", a.display())))?;
    let vb = read_subspace(&read_file(b)?).map_err(|e| Failure::usage(format!("{}: {e}", b.display())))?;
    let dist = subspace_distance(&va, &vb).map_err(Failure::usage)?;
    let meet = va.intersect(&vb).map_err(Failure::usage)?.dim();
    let text = match format {
        OutputFormat::Json => to_json(&json!({
            "distance": dist, "dim_a": va.dim(), "dim_b": vb.dim(), "dim_intersection": meet,
        })),
        OutputFormat::Table => format!("dim a {}\ndim b {}\ndim a∩b {meet}\ndistance {dist}\n", va.dim(), vb.dim()),
    };
    emit(&text, None)
}

struct SimArgs<'a> {
    code: Option<&'a Path>,
    field: &'a FieldArgs,
    n: Option<usize>,
    d: Option<u32>,
    k: Option<u32>,
    cfg: ChannelConfig,
    trials: u64,
    format: OutputFormat,
}

fn load_or_build(args: &SimArgs) -> Result<Code, Failure> {
    if let Some(path) = args.code {
        return read_code(&read_file(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())));
    }
    let (Some(n), Some(d), Some(k)) = (args.n, args.d, args.k) else {
        return Err(Failure::usage("pass --code, or the field with --n, --d and --k"));
    };
    build_code(n, d, k, &args.field.resolve()?).map_err(Failure::usage)
}

fn run_simulation(args: SimArgs) -> Outcome {
    let code = load_or_build(&args)?;
    let stats = simulate(&code, &args.cfg, args.trials).map_err(Failure::usage)?;
    let text = match args.format {
        OutputFormat::Json => to_json(&stats),
        OutputFormat::Table => format!(
            "erasures {} errors {} seed {}\ntrials {}\ncorrect {}\nwrong {}\nambiguous {}\nsuccess_rate {:.6}\n",
            stats.config.erasures,
            stats.config.errors,
            stats.config.seed,
            stats.trials,
            stats.correct,
            stats.wrong,
            stats.ambiguous,
            stats.success_rate
        ),
    };
    emit(&text, None)?;
    let within_radius = 2 * (args.cfg.erasures + args.cfg.errors) < code.params().min_distance;
    if within_radius && stats.correct != stats.trials {
        return Err(Failure::Check("decoding failed inside the unique-decoding radius".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Construct { field, shape, out } => construct(&field, &shape, out.as_deref()),
        Command::Params { field, shape, format } => params(&field, &shape, format),
        Command::Verify { q, n, d, k, format } => verify(&q, &n, &d, &k, format),
        Command::Distance { a, b, format } => distance(&a, &b, format),
        Command::Simulate { code, field, n, d, k, erasures, errors, trials, seed, format } => run_simulation(SimArgs {
            code: code.as_deref(),
            field: &field,
            n,
            d,
            k,
            cfg: ChannelConfig { erasures, errors, seed },
            trials,
            format,
        }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("veronet: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("veronet: {msg}");
            ExitCode::from(2)
        }
    }
}
