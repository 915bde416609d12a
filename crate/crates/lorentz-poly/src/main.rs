//! Command-line front end: verification batches, Lorentz-degree queries,
//! ratio search, pointwise profiles, and the degree-growth experiment.

use clap::{Args, Parser, Subcommand};
use lorentz_poly::classes::ClassTag;
use lorentz_poly::lorentz::{from_power, lorentz_degree, LorentzDegreeResult};
use lorentz_poly::search::{
    degree_growth_experiment, growth_cap, growth_polynomial, maximize_ratio, pointwise_profile,
    Strategy,
};
use lorentz_poly::verify::{
    batch_verify, default_qp_pairs, run_checker, BatchConfig, Report, TheoremId, Witness,
    ALL_THEOREMS,
};
use lorentz_poly::{parse_rational, rint, RatPoly, Rational};
use serde::Serialize;
use std::io::Write as _;
use std::process::ExitCode;

/// Toolkit for polynomials with nonnegative Lorentz representations:
/// verification of the sharp Markov/Nikolskii bounds, Lorentz-degree
/// computation, and extremal search.
///
/// Defaults: seed 0 (override with --seed or the LORENTZ_POLY_SEED
/// environment variable), output format text, jobs = all cores.
#[derive(Parser)]
#[command(name = "lorentz-poly", version)]
struct Cli {
    /// Worker threads (1 forces serial execution)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an inequality checker over randomized class samples
    Verify(VerifyArgs),
    /// Compute the Lorentz degree of a polynomial
    Degree(DegreeArgs),
    /// Maximize a class's Markov/Nikolskii ratio
    Search(SearchArgs),
    /// Profile pointwise |f'(x)|/‖f‖ against the constant-free envelope
    Profile(ProfileArgs),
    /// Degree-growth experiment on ((x−a)²+ε²(1−a²))^n
    Growth(GrowthArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// thm2.1, thm2.2, thm2.3, thm2.4, thm2.5, lem3.3, lem3.4, erdos,
    /// bernstein-monotone, or all
    selector: String,
    /// Degree range, "lo..hi" inclusive or a single value [default: 2..6]
    #[arg(long, default_value = "2..6")]
    n: String,
    /// Trials per degree
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// RNG seed [default: 0 or LORENTZ_POLY_SEED]
    #[arg(long)]
    seed: Option<u64>,
    /// json, csv, or text
    #[arg(long, default_value = "text")]
    format: String,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<String>,
    /// Allowed fraction of indeterminate trials
    #[arg(long, default_value_t = 0.01)]
    indeterminate_budget: f64,
    /// Sample from a weakened class and expect violations
    /// (only "monotone-only", with thm2.5)
    #[arg(long)]
    negative_control: Option<String>,
    /// Re-check a single saved witness file instead of sampling
    #[arg(long)]
    witness: Option<String>,
}

#[derive(Args)]
struct DegreeArgs {
    /// Power-basis coefficients, ascending, comma-separated rationals
    #[arg(long)]
    coeffs: Option<String>,
    /// Family parameters "n=1,a=0,eps=1/4"
    #[arg(long)]
    family: Option<String>,
    /// Scan cap [default: 64·(deg+1), or ceil(10n/ε²) for --family]
    #[arg(long)]
    cap: Option<usize>,
    /// Also print the Lorentz coefficients at the found degree
    #[arg(long)]
    show_coeffs: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// lorentz-nonneg, zeros-outside-disk, deriv-lorentz, deriv-disk,
    /// monotone-real-zeros, monotone-only
    #[arg(long)]
    class: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// random or coordinate-descent
    #[arg(long, default_value = "random")]
    strategy: String,
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct ProfileArgs {
    /// A class name, or real-zeros-outside for the Erdős-type class
    #[arg(long)]
    class: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct GrowthArgs {
    /// Comma-separated degrees
    #[arg(long)]
    n: String,
    /// Comma-separated centers (rationals in (−1,1))
    #[arg(long, default_value = "0")]
    a: String,
    /// Comma-separated epsilons (rationals in (0,1])
    #[arg(long)]
    eps: String,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    output: Option<String>,
}

fn seed_or_default(seed: Option<u64>) -> u64 {
    seed.or_else(|| {
        std::env::var("LORENTZ_POLY_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

/// 17-significant-digit float formatting, fixed across platforms.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// JSON with all floats written at 17 significant digits so identical runs
/// are byte-identical.
struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "\"{}\"", fmt_f64(value))
    }
    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "\"{}\"", fmt_f64(value as f64))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value.serialize(&mut ser).expect("serialization");
    String::from_utf8(out).expect("utf8 json")
}

fn emit(output: &Option<String>, text: &str) -> Result<(), String> {
    match output {
        Some(path) => {
            let mut f = std::fs::File::create(path).map_err(|e| e.to_string())?;
            writeln!(f, "{text}").map_err(|e| e.to_string())
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo = lo.trim().parse().map_err(|_| format!("bad range {s}"))?;
        let hi = hi.trim().parse().map_err(|_| format!("bad range {s}"))?;
        if lo == 0 || hi < lo {
            return Err(format!("bad range {s}"));
        }
        Ok((lo, hi))
    } else {
        let v: usize = s.trim().parse().map_err(|_| format!("bad range {s}"))?;
        if v == 0 {
            return Err(format!("bad range {s}"));
        }
        Ok((v, v))
    }
}

fn parse_rational_list(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).ok_or_else(|| format!("bad rational '{t}'")))
        .collect()
}

fn verify_csv(reports: &[Report]) -> String {
    let mut out = String::from("theorem,n,trial,ratio,bound,slack,holds,equality_within,witness_id\n");
    for r in reports {
        for rec in &r.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                rec.theorem,
                rec.n,
                rec.trial,
                fmt_f64(rec.ratio),
                fmt_f64(rec.bound),
                fmt_f64(rec.slack),
                rec.holds,
                fmt_f64(rec.equality_within),
                rec.witness_id
            ));
        }
    }
    out.pop();
    out
}

fn verify_text(reports: &[Report]) -> String {
    let mut lines = Vec::new();
    for r in reports {
        lines.push(format!(
            "{}: {} trials, {} failures, {} indeterminate, max ratio {}, min slack {} ({:.2}s)",
            r.theorem,
            r.trials,
            r.failures,
            r.indeterminates,
            r.max_ratio.map(fmt_f64).unwrap_or_else(|| "-".into()),
            r.min_slack.map(fmt_f64).unwrap_or_else(|| "-".into()),
            r.runtime_secs
        ));
    }
    lines.join("\n")
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, String> {
    let seed = seed_or_default(args.seed);
    let (n_lo, n_hi) = parse_range(&args.n)?;
    let negative_control = match args.negative_control.as_deref() {
        None => false,
        Some("monotone-only") => true,
        Some(other) => return Err(format!("unknown negative control '{other}'")),
    };
    let theorems: Vec<TheoremId> = if args.selector == "all" {
        ALL_THEOREMS.to_vec()
    } else {
        vec![TheoremId::parse(&args.selector)
            .ok_or_else(|| format!("unknown selector '{}'", args.selector))?]
    };
    if negative_control && theorems != vec![TheoremId::Thm25] {
        return Err("--negative-control monotone-only requires selector thm2.5".into());
    }

    if let Some(path) = &args.witness {
        let theorem = theorems[0];
        let data = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let witness: Witness = serde_json::from_str(&data).map_err(|e| e.to_string())?;
        let f = witness.to_poly().ok_or("bad witness coefficients")?;
        let n = f.degree();
        let v = run_checker(theorem, &f, n, &rint(1), None, None)
            .map_err(|e| e.to_string())?;
        println!(
            "{}: n={} ratio={} bound={} holds={}",
            theorem.name(),
            n,
            fmt_f64(v.ratio),
            fmt_f64(v.rhs_bound.value),
            v.holds
        );
        return Ok(if v.holds { 0 } else { 1 });
    }

    let mut reports = Vec::new();
    for theorem in theorems {
        let report = batch_verify(&BatchConfig {
            theorem,
            n_lo,
            n_hi,
            trials: args.trials,
            seed,
            qp_pairs: default_qp_pairs(),
            negative_control,
        })
        .map_err(|e| e.to_string())?;
        reports.push(report);
    }

    let body = match args.format.as_str() {
        "json" => to_json(&reports),
        "csv" => verify_csv(&reports),
        "text" => verify_text(&reports),
        other => return Err(format!("unknown format '{other}'")),
    };
    emit(&args.output, &body)?;

    let failures: usize = reports.iter().map(|r| r.failures).sum();
    let trials: usize = reports.iter().map(|r| r.trials).sum();
    let indet: usize = reports.iter().map(|r| r.indeterminates).sum();
    let violations: usize = reports.iter().map(|r| r.violations_found).sum();
    if negative_control {
        if violations > 0 {
            eprintln!(
                "negative control: found {violations} violations of the n/2 bound \
                 under the weakened (monotone-only) hypothesis, as expected"
            );
            return Ok(0);
        }
        eprintln!("negative control: no violation found");
        return Ok(1);
    }
    if failures > 0 {
        for r in &reports {
            if let Some(w) = &r.failure_witness {
                let path = format!("witness-{}.json", r.theorem);
                let _ = std::fs::write(&path, to_json(w));
                eprintln!("{}: FAILED, witness dumped to {path}", r.theorem);
            }
        }
        return Ok(1);
    }
    if trials > 0 && (indet as f64) / (trials as f64) > args.indeterminate_budget {
        eprintln!("indeterminate budget exceeded: {indet}/{trials}");
        return Ok(1);
    }
    Ok(0)
}

fn cmd_degree(args: &DegreeArgs) -> Result<u8, String> {
    let (f, cap) = match (&args.coeffs, &args.family) {
        (Some(cs), None) => {
            let coeffs = parse_rational_list(cs)?;
            let f = RatPoly::new(coeffs);
            if f.is_zero() {
                return Err("zero polynomial has no Lorentz degree".into());
            }
            let cap = args.cap.unwrap_or(64 * (f.degree() + 1));
            (f, cap)
        }
        (None, Some(family)) => {
            let mut n = None;
            let mut a = None;
            let mut eps = None;
            for part in family.split(',') {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| format!("bad family component '{part}'"))?;
                match k.trim() {
                    "n" => n = v.trim().parse::<usize>().ok(),
                    "a" => a = parse_rational(v.trim()),
                    "eps" => eps = parse_rational(v.trim()),
                    other => return Err(format!("unknown family key '{other}'")),
                }
            }
            let (n, a, eps) = match (n, a, eps) {
                (Some(n), Some(a), Some(eps)) => (n, a, eps),
                _ => return Err("family needs n=, a=, eps=".into()),
            };
            let cap = args.cap.unwrap_or_else(|| growth_cap(n, &eps));
            (growth_polynomial(n, &a, &eps), cap)
        }
        _ => return Err("give exactly one of --coeffs or --family".into()),
    };
    let result = lorentz_degree(&f, &rint(-1), &rint(1), cap).map_err(|e| e.to_string())?;
    match result {
        LorentzDegreeResult::Finite(d) => {
            println!("finite {d}");
            if args.show_coeffs {
                let form = from_power(&f, d, &rint(-1), &rint(1)).map_err(|e| e.to_string())?;
                let parts: Vec<String> = form.coeffs().iter().map(|c| c.to_string()).collect();
                println!("coeffs: {}", parts.join(","));
            }
        }
        LorentzDegreeResult::Infinite => println!("infinite"),
        LorentzDegreeResult::Unknown { cap_reached } => println!("unknown(cap {cap_reached})"),
    }
    Ok(0)
}

fn cmd_search(args: &SearchArgs) -> Result<u8, String> {
    let class = ClassTag::parse(&args.class, args.n)
        .ok_or_else(|| format!("unknown class '{}'", args.class))?;
    let strategy = Strategy::parse(&args.strategy)
        .ok_or_else(|| format!("unknown strategy '{}'", args.strategy))?;
    if args.iters == 0 || args.n == 0 {
        return Err("need --iters >= 1 and --n >= 1".into());
    }
    let seed = seed_or_default(args.seed);
    let result =
        maximize_ratio(class, strategy, args.iters, seed, None).map_err(|e| e.to_string())?;
    let body = match args.format.as_str() {
        "json" => to_json(&result),
        "text" => format!(
            "{} n={}: best_ratio {} bound {} gap {} ({} iterations)",
            result.class,
            result.n,
            fmt_f64(result.best_ratio),
            fmt_f64(result.bound),
            fmt_f64(result.gap),
            result.iterations
        ),
        other => return Err(format!("unknown format '{other}'")),
    };
    emit(&args.output, &body)?;
    Ok(0)
}

fn cmd_profile(args: &ProfileArgs) -> Result<u8, String> {
    if args.n == 0 {
        return Err("need --n >= 1".into());
    }
    let (class, real_only) = if args.class == "real-zeros-outside" {
        (ClassTag::ZerosOutsideDisk(args.n), true)
    } else {
        (
            ClassTag::parse(&args.class, args.n)
                .ok_or_else(|| format!("unknown class '{}'", args.class))?,
            false,
        )
    };
    let seed = seed_or_default(args.seed);
    let table =
        pointwise_profile(class, args.trials, seed, real_only).map_err(|e| e.to_string())?;
    let body = match args.format.as_str() {
        "json" => to_json(&table),
        "csv" => {
            let mut out = String::from("x,max_ratio,envelope,c_emp\n");
            for p in &table.points {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_f64(p.x),
                    fmt_f64(p.max_ratio),
                    fmt_f64(p.envelope),
                    fmt_f64(p.c_emp)
                ));
            }
            out.pop();
            out
        }
        "text" => format!(
            "{} n={}: {} grid points, c_emp max {}",
            table.class,
            table.n,
            table.points.len(),
            fmt_f64(table.c_emp_max)
        ),
        other => return Err(format!("unknown format '{other}'")),
    };
    emit(&args.output, &body)?;
    Ok(0)
}

fn cmd_growth(args: &GrowthArgs) -> Result<u8, String> {
    let ns: Vec<usize> = args
        .n
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad n '{t}'")))
        .collect::<Result<_, _>>()?;
    let a_list = parse_rational_list(&args.a)?;
    let eps_list = parse_rational_list(&args.eps)?;
    let rows = degree_growth_experiment(&ns, &a_list, &eps_list).map_err(|e| e.to_string())?;
    let body = match args.format.as_str() {
        "json" => to_json(&rows),
        "csv" => {
            let mut out = String::from("n,a,eps,d,normalized,status\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n,
                    r.a,
                    r.eps,
                    r.d_found.map(|d| d.to_string()).unwrap_or_else(|| "-".into()),
                    r.normalized.map(fmt_f64).unwrap_or_else(|| "-".into()),
                    r.status
                ));
            }
            out.pop();
            out
        }
        "text" => rows
            .iter()
            .map(|r| {
                format!(
                    "n={} a={} eps={}: {} normalized {}",
                    r.n,
                    r.a,
                    r.eps,
                    r.status,
                    r.normalized.map(fmt_f64).unwrap_or_else(|| "-".into())
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => return Err(format!("unknown format '{other}'")),
    };
    emit(&args.output, &body)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let outcome = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Degree(a) => cmd_degree(a),
        Command::Search(a) => cmd_search(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Growth(a) => cmd_growth(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
