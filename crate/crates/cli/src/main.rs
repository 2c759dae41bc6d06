//! `crossforms`: series generation, crossing-probability evaluation,
//! Monte Carlo runs, and verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numeric non-convergence.

use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;

use crossforms::crossing::{
    self, horizontal_alpha, hvbar_beta_one, hvbar_general, hvbar_general_quadrature, hv_general,
    hv_general_quadrature, partition_function, sle_crossing, Alpha, CrossingParams, CrossingValue,
    Method, PartitionParams, SleMethod,
};
use crossforms::error::CrossingError;
use crossforms::forms::SeriesKind;
use crossforms::percolation::{estimate, LatticeSpec, Quantity};
use crossforms::qseries::DEFAULT_ORDER;
use crossforms::rational::{parse_rat, Rat};
use crossforms_cli::suites;

#[derive(Parser)]
#[command(
    name = "crossforms",
    about = "Rectangle crossing probabilities: exact series, three-route evaluation, Monte Carlo, verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the exact coefficients of a named q-expansion.
    Series(SeriesArgs),
    /// Evaluate a crossing quantity (or the partition factor) on aspect ratios.
    Crossing(CrossingArgs),
    /// Evaluate the SLE-family crossing value at a cross-ratio.
    Sle(SleArgs),
    /// Run the Monte Carlo sampler and compare against the formula value.
    Mc(McArgs),
    /// Run a verification suite; exit 0 iff every check passes.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SeriesArgs {
    /// One of: eta, theta2, theta3, lambda, lambda_prime, f1, f2, f3, fW, h
    kind: String,
    /// Number of retained coefficients.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Block dimension (rational p/q); required iff kind = h.
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct CrossingArgs {
    /// One of: pih, pihvbar, pihv, piminus, pi2, Z
    quantity: String,
    /// Aspect ratio (may repeat for a manual grid).
    #[arg(long, num_args = 1..)]
    r: Vec<f64>,
    /// Evenly spaced grid "start:end:count" over r.
    #[arg(long, value_name = "START:END:COUNT")]
    r_grid: Option<String>,
    /// Block dimension alpha (rational like 1/3, or a float).
    #[arg(long)]
    alpha: Option<String>,
    /// Second block dimension beta (rational or float, defaults to 1).
    #[arg(long)]
    beta: Option<String>,
    /// hyp | lambda | eta | all (quantities that support route selection).
    #[arg(long, default_value = "hyp")]
    method: String,
    /// Rectangle width (quantity Z).
    #[arg(long)]
    l: Option<f64>,
    /// Rectangle height (quantity Z).
    #[arg(long)]
    lp: Option<f64>,
    /// Central charge (quantity Z).
    #[arg(long)]
    c: Option<f64>,
    /// Overall constant of the partition factor.
    #[arg(long, default_value_t = 1.0)]
    scale_const: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct SleArgs {
    /// Cross-ratio in (0, 1].
    #[arg(long)]
    lam: f64,
    /// SLE speed in (4, 8].
    #[arg(long)]
    kappa: f64,
    /// hyp | integral
    #[arg(long, default_value = "hyp")]
    method: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct McArgs {
    /// Lattice width in sites.
    #[arg(long, default_value_t = 128)]
    width: u32,
    /// Lattice height in sites.
    #[arg(long, default_value_t = 128)]
    height: u32,
    /// Bond occupation probability.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// horizontal | hv
    #[arg(long, default_value = "horizontal")]
    quantity: String,
    #[arg(long, default_value_t = 2)]
    threads: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// duality | routes | modular | thm3 | ode | partition | dualitymc | all
    suite: String,
    /// Replace every default tolerance (exploratory).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 2)]
    threads: usize,
    /// Also print the report as JSON.
    #[arg(long)]
    json: bool,
}

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn crossing_error(err: &CrossingError) -> ExitCode {
    eprintln!("error: {err}");
    match err {
        CrossingError::HypNonConvergence { .. } => ExitCode::from(EXIT_NUMERIC),
        CrossingError::Eval(crossforms::error::EvalError::TailNotConvergent) => {
            ExitCode::from(EXIT_NUMERIC)
        }
        _ => ExitCode::from(EXIT_USAGE),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Series(args) => cmd_series(args),
        Command::Crossing(args) => cmd_crossing(args),
        Command::Sle(args) => cmd_sle(args),
        Command::Mc(args) => cmd_mc(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn cmd_series(args: SeriesArgs) -> ExitCode {
    let Some(kind) = SeriesKind::parse(&args.kind) else {
        return usage_error(&format!("unknown series kind {:?}", args.kind));
    };
    if args.order == 0 {
        return usage_error("--order must be at least 1");
    }
    let gamma: Option<Rat> = match &args.gamma {
        Some(s) => match parse_rat(s) {
            Ok(g) => Some(g),
            Err(e) => return usage_error(&e.to_string()),
        },
        None => None,
    };
    if matches!(kind, SeriesKind::H) != gamma.is_some() {
        return usage_error("--gamma is required for kind h and only for kind h");
    }
    match kind.generate(args.order, gamma.as_ref()) {
        Ok(series) => {
            match args.format {
                Format::Json => println!("{}", series.to_json_string()),
                Format::Csv => print!("{}", series.to_csv()),
            }
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

/// `(alpha, beta)` CLI inputs: rationals keep the exact series routes,
/// floats fall back to quadrature.
enum ParamInput {
    Exact(Rat),
    Real(f64),
}

fn parse_param(s: &str) -> Result<ParamInput, String> {
    if s.contains('.') {
        return s
            .parse::<f64>()
            .map(ParamInput::Real)
            .map_err(|e| e.to_string());
    }
    parse_rat(s)
        .map(ParamInput::Exact)
        .map_err(|e| e.to_string())
}

fn aspect_grid(args: &CrossingArgs) -> Result<Vec<f64>, String> {
    let mut rs = args.r.clone();
    if let Some(grid) = &args.r_grid {
        let parts: Vec<&str> = grid.split(':').collect();
        if parts.len() != 3 {
            return Err("--r-grid expects START:END:COUNT".into());
        }
        let start: f64 = parts[0].parse().map_err(|_| "bad grid start")?;
        let end: f64 = parts[1].parse().map_err(|_| "bad grid end")?;
        let count: usize = parts[2].parse().map_err(|_| "bad grid count")?;
        if count < 2 || start <= 0.0 || end <= start {
            return Err("--r-grid needs 0 < START < END and COUNT >= 2".into());
        }
        for k in 0..count {
            rs.push(start + (end - start) * k as f64 / (count - 1) as f64);
        }
    }
    if rs.is_empty() {
        return Err("provide --r or --r-grid".into());
    }
    if rs.iter().any(|r| *r <= 0.0 || !r.is_finite()) {
        return Err("aspect ratios must be positive".into());
    }
    Ok(rs)
}

#[derive(serde::Serialize)]
struct CrossingRow {
    r: f64,
    value: f64,
    method: &'static str,
    est_error: f64,
}

impl From<(f64, CrossingValue)> for CrossingRow {
    fn from((r, v): (f64, CrossingValue)) -> Self {
        CrossingRow {
            r,
            value: v.value,
            method: v.method.name(),
            est_error: v.est_error,
        }
    }
}

fn emit_rows(rows: &[CrossingRow], format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(rows).expect("serializable")),
        Format::Csv => {
            let mut out = String::from("r,value,method,est_error\r\n");
            for row in rows {
                out.push_str(&format!(
                    "{},{},{},{}\r\n",
                    row.r, row.value, row.method, row.est_error
                ));
            }
            print!("{out}");
        }
    }
}

fn cmd_crossing(args: CrossingArgs) -> ExitCode {
    if args.quantity == "Z" {
        let (Some(l), Some(lp), Some(c)) = (args.l, args.lp, args.c) else {
            return usage_error("quantity Z requires --l, --lp and --c");
        };
        if l <= 0.0 || lp <= 0.0 {
            return usage_error("rectangle sides must be positive");
        }
        let z = partition_function(&PartitionParams {
            l,
            lp,
            c,
            scale_const: args.scale_const,
        });
        let payload = serde_json::json!({"l": l, "lp": lp, "c": c, "scale_const": args.scale_const, "value": z});
        match args.format {
            Format::Json => println!("{payload}"),
            Format::Csv => print!("l,lp,c,scale_const,value\r\n{l},{lp},{c},{},{z}\r\n", args.scale_const),
        }
        return ExitCode::SUCCESS;
    }

    if !["pih", "pihvbar", "pihv", "piminus", "pi2"].contains(&args.quantity.as_str()) {
        return usage_error(&format!("unknown quantity {:?}", args.quantity));
    }
    let rs = match aspect_grid(&args) {
        Ok(rs) => rs,
        Err(e) => return usage_error(&e),
    };
    let methods: Vec<Method> = if args.method == "all" {
        Method::ALL.to_vec()
    } else {
        match Method::parse(&args.method) {
            Some(m) => vec![m],
            None => return usage_error(&format!("unknown method {:?}", args.method)),
        }
    };

    let alpha = match args.alpha.as_deref().map(parse_param).transpose() {
        Ok(a) => a,
        Err(e) => return usage_error(&e),
    };
    let beta = match args.beta.as_deref().map(parse_param).transpose() {
        Ok(b) => b,
        Err(e) => return usage_error(&e),
    };

    let mut rows = Vec::new();
    for &r in &rs {
        let per_r: Result<Vec<CrossingValue>, CrossingError> =
            evaluate_crossing(&args.quantity, r, &methods, &alpha, &beta);
        match per_r {
            Ok(values) => rows.extend(values.into_iter().map(|v| CrossingRow::from((r, v)))),
            Err(e) => {
                if let CrossingError::BetaOutOfRange(_) | CrossingError::AlphaOutOfRange(_) = e {
                    return usage_error(&e.to_string());
                }
                return crossing_error(&e);
            }
        }
    }
    emit_rows(&rows, args.format);
    ExitCode::SUCCESS
}

fn two_block_params(
    alpha: &Option<ParamInput>,
    beta: &Option<ParamInput>,
) -> Result<(CrossingParams, bool), CrossingError> {
    // beta defaults to 1, the documented default for the family.
    match (alpha, beta) {
        (Some(ParamInput::Exact(a)), Some(ParamInput::Exact(b))) => Ok((
            CrossingParams::from_rational(a.clone(), b.clone())?,
            true,
        )),
        (Some(ParamInput::Exact(a)), None) => Ok((
            CrossingParams::from_rational(a.clone(), Rat::from_integer(1.into()))?,
            true,
        )),
        (Some(a), b) => {
            let a = match a {
                ParamInput::Exact(r) => crossforms::rational::rat_to_f64(r),
                ParamInput::Real(x) => *x,
            };
            let b = match b {
                Some(ParamInput::Exact(r)) => crossforms::rational::rat_to_f64(r),
                Some(ParamInput::Real(x)) => *x,
                None => 1.0,
            };
            Ok((CrossingParams::from_real(a, b)?, false))
        }
        (None, _) => Ok((CrossingParams::percolation(), true)),
    }
}

fn evaluate_crossing(
    quantity: &str,
    r: f64,
    methods: &[Method],
    alpha: &Option<ParamInput>,
    beta: &Option<ParamInput>,
) -> Result<Vec<CrossingValue>, CrossingError> {
    match quantity {
        "pih" => match alpha {
            None => methods
                .iter()
                .map(|m| crossing::horizontal(r, *m))
                .collect(),
            Some(ParamInput::Exact(a)) => {
                Ok(vec![horizontal_alpha(r, &Alpha::Exact(a.clone()))?])
            }
            Some(ParamInput::Real(a)) => Ok(vec![horizontal_alpha(r, &Alpha::Real(*a))?]),
        },
        "pihvbar" => match (alpha, beta) {
            (None, None) => methods
                .iter()
                .map(|m| crossing::horizontal_no_vertical(r, *m))
                .collect(),
            (Some(a), None) => {
                // beta defaults to 1: the hypergeometric collapse.
                let a = match a {
                    ParamInput::Exact(x) => crossforms::rational::rat_to_f64(x),
                    ParamInput::Real(x) => *x,
                };
                Ok(vec![hvbar_beta_one(r, a)?])
            }
            _ => {
                let (params, exact) = two_block_params(alpha, beta)?;
                Ok(vec![if exact {
                    hvbar_general(r, &params)?
                } else {
                    hvbar_general_quadrature(r, &params)?
                }])
            }
        },
        "pihv" => match (alpha, beta) {
            (None, None) => methods
                .iter()
                .map(|m| crossing::horizontal_and_vertical_with(r, *m))
                .collect(),
            _ => {
                let (params, exact) = two_block_params(alpha, beta)?;
                Ok(vec![if exact {
                    hv_general(r, &params)?
                } else {
                    hv_general_quadrature(r, &params)?
                }])
            }
        },
        "piminus" => {
            let (params, exact) = two_block_params(alpha, beta)?;
            Ok(vec![if exact {
                hv_general(r, &params)?
            } else {
                hv_general_quadrature(r, &params)?
            }])
        }
        "pi2" => {
            let (params, exact) = two_block_params(alpha, beta)?;
            Ok(vec![if exact {
                hvbar_general(r, &params)?
            } else {
                hvbar_general_quadrature(r, &params)?
            }])
        }
        other => unreachable!("quantity {other:?} validated by the caller"),
    }
}

fn cmd_sle(args: SleArgs) -> ExitCode {
    let method = match args.method.as_str() {
        "hyp" | "hypergeometric" => SleMethod::Hypergeometric,
        "integral" => SleMethod::Integral,
        other => return usage_error(&format!("unknown SLE method {other:?}")),
    };
    match sle_crossing(args.lam, args.kappa, method) {
        Ok(value) => {
            let payload = serde_json::json!({
                "lam": args.lam,
                "kappa": args.kappa,
                "method": if method == SleMethod::Hypergeometric { "hypergeometric" } else { "integral" },
                "value": value,
            });
            match args.format {
                Format::Json => println!("{payload}"),
                Format::Csv => print!(
                    "lam,kappa,method,value\r\n{},{},{},{}\r\n",
                    args.lam,
                    args.kappa,
                    if method == SleMethod::Hypergeometric { "hypergeometric" } else { "integral" },
                    value
                ),
            }
            ExitCode::SUCCESS
        }
        Err(e) => crossing_error(&e),
    }
}

fn cmd_mc(args: McArgs) -> ExitCode {
    let Some(quantity) = Quantity::parse(&args.quantity) else {
        return usage_error(&format!("unknown quantity {:?}", args.quantity));
    };
    if args.width < 2 || args.height < 2 {
        return usage_error("lattice needs at least 2x2 sites");
    }
    if !(0.0..=1.0).contains(&args.p) {
        return usage_error("--p must lie in [0, 1]");
    }
    if args.trials == 0 {
        return usage_error("--trials must be at least 1");
    }
    let spec = LatticeSpec::new(args.width, args.height, args.p, args.seed);
    let est = estimate(&spec, quantity, args.trials, args.threads);

    // Comparison row against the continuum formula at this aspect ratio
    // (meaningful at the critical point).
    let formula = match quantity {
        Quantity::Horizontal => crossing::horizontal(est.r, Method::EtaIntegral),
        Quantity::HorizontalAndVertical => {
            crossing::horizontal_and_vertical_with(est.r, Method::EtaIntegral)
        }
    };
    let comparison = formula.map(|f| {
        let z = if est.stderr > 0.0 {
            (est.p_hat - f.value) / est.stderr
        } else {
            f64::INFINITY
        };
        (f.value, z)
    });
    let payload = match comparison {
        Ok((formula, z)) => serde_json::json!({
            "estimate": est,
            "comparison": {
                "formula": formula,
                "z_score": z,
                "abs_diff": (est.p_hat - formula).abs(),
            },
        }),
        Err(_) => serde_json::json!({ "estimate": est }),
    };
    match args.format {
        Format::Json => println!("{payload}"),
        Format::Csv => {
            let (formula, z) = comparison.unwrap_or((f64::NAN, f64::NAN));
            print!(
                "quantity,L,Lp,r,p,trials,successes,p_hat,stderr,seed,formula,z_score\r\n{},{},{},{},{},{},{},{},{},{},{},{}\r\n",
                est.quantity.name(),
                est.width,
                est.height,
                est.r,
                est.p,
                est.trials,
                est.successes,
                est.p_hat,
                est.stderr,
                est.seed,
                formula,
                z
            );
        }
    }
    ExitCode::SUCCESS
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let Some(report) = suites::run_suite(&args.suite, args.tol, args.threads) else {
        return usage_error(&format!(
            "unknown suite {:?} (expected one of {})",
            args.suite,
            suites::SUITES.join(", ")
        ));
    };
    print!("{}", report.render_text());
    if args.json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    }
    if report.overall {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAIL)
    }
}
