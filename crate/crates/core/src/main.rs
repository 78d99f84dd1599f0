//! Command-line front end: evaluation, tabulation, identity verification,
//! and operator-based approximation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use qbernstein::bernstein::{q_basis, q_basis_f64};
use qbernstein::qnum::{FloatPoint, QPoint};
use qbernstein::rational::Rational;
use qbernstein::verify::{parse_identity_list, run_verify, FaultInjection, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "qbernstein",
    version,
    about = "Exact evaluation and identity verification for modified q-Bernstein polynomials"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to a file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Run identity suites in parallel
    #[arg(long, global = true)]
    parallel: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one basis value B_{k,n}, exactly or in floating point
    Eval(EvalArgs),
    /// Tabulate B_{0,n}..B_{n,n} over a uniform x grid (floating path)
    Table(TableArgs),
    /// Run the identity suites and report pass/fail per identity
    Verify(VerifyArgs),
    /// Apply the sampled-function operator to a built-in test function
    Approx(ApproxArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n: u32,
    /// Exact mode: numerator of q
    #[arg(long = "q-num")]
    q_num: Option<i64>,
    /// Exact mode: denominator of q
    #[arg(long = "q-den")]
    q_den: Option<i64>,
    /// Exact mode: numerator of X = q^x
    #[arg(long = "X-num")]
    x_num: Option<i64>,
    /// Exact mode: denominator of X = q^x
    #[arg(long = "X-den")]
    x_den: Option<i64>,
    /// Float mode: q in (0,1)
    #[arg(long)]
    q: Option<f64>,
    /// Float mode: x in [0,1]
    #[arg(long)]
    x: Option<f64>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    q: f64,
    /// Number of grid intervals; emits samples+1 rows at x = j/samples
    #[arg(long)]
    samples: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// Either a JSON file path or inline overrides like "max_n=6,q_list=1/5;1/2"
    #[arg(long, value_name = "FILE|KEY=VALUE,...")]
    config: Option<String>,
    /// Comma-separated identity ids to run (e.g. T3_SUM,T8_EQUALITY)
    #[arg(long, value_name = "ID[,ID...]")]
    only: Option<String>,
    /// Fault injection for the failure path: breaks the basis-sum sign
    #[arg(long, hide = true)]
    inject_sum_sign_flip: bool,
}

#[derive(Args)]
struct ApproxArgs {
    /// Built-in test function: id, square, abs-half, or exp-neg
    #[arg(long = "fn")]
    function: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    samples: u32,
}

enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    fn exit(self) -> ExitCode {
        match self {
            CliError::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            CliError::Io(msg) => {
                eprintln!("i/o error: {msg}");
                ExitCode::from(3)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => e.exit(),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let format = cli.format;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Eval(args) => cmd_eval(args, format, out),
        Command::Table(args) => cmd_table(args, format, out),
        Command::Verify(args) => cmd_verify(args, format, out, cli.parallel),
        Command::Approx(args) => cmd_approx(args, format, out),
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn float17(v: f64) -> String {
    format!("{:.16e}", v)
}

fn check_float_q(q: f64) -> Result<(), CliError> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("q must lie in (0,1), got {q}")))
    }
}

fn cmd_eval(
    args: EvalArgs,
    format: Option<Format>,
    out: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let exact_flags = [args.q_num, args.q_den, args.x_num, args.x_den];
    let exact_given = exact_flags.iter().filter(|f| f.is_some()).count();
    let float_given = args.q.is_some() as usize + args.x.is_some() as usize;

    let value = if exact_given == 4 && float_given == 0 {
        let q = Rational::new(args.q_num.unwrap(), args.q_den.unwrap())
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let x_pow = Rational::new(args.x_num.unwrap(), args.x_den.unwrap())
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let point = QPoint::new(q, x_pow).map_err(|e| CliError::Usage(e.to_string()))?;
        q_basis(args.k, args.n, &point).to_string()
    } else if float_given == 2 && exact_given == 0 {
        let q = args.q.unwrap();
        check_float_q(q)?;
        let fp = FloatPoint::new(q, args.x.unwrap()).map_err(|e| CliError::Usage(e.to_string()))?;
        float17(q_basis_f64(args.k, args.n, &fp))
    } else {
        return Err(CliError::Usage(
            "eval needs either --q-num/--q-den/--X-num/--X-den (exact) or --q/--x (float)".into(),
        ));
    };

    let content = match format {
        Some(Format::Json) => format!("{{\"value\":\"{value}\"}}\n"),
        _ => format!("{value}\n"),
    };
    emit(out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(
    args: TableArgs,
    format: Option<Format>,
    out: Option<&Path>,
) -> Result<ExitCode, CliError> {
    check_float_q(args.q)?;
    if args.samples == 0 {
        return Err(CliError::Usage("samples must be >= 1".into()));
    }
    let n = args.n;
    let rows: Vec<(f64, Vec<f64>)> = (0..=args.samples)
        .map(|j| {
            let x = j as f64 / args.samples as f64;
            let fp = FloatPoint::new(args.q, x).expect("x on [0,1] grid");
            let basis = (0..=n).map(|k| q_basis_f64(k, n, &fp)).collect();
            (x, basis)
        })
        .collect();

    let content = match format {
        Some(Format::Json) => {
            let rows_json: Vec<serde_json::Value> = rows
                .iter()
                .map(|(x, basis)| serde_json::json!({ "x": x, "basis": basis }))
                .collect();
            let doc = serde_json::json!({ "n": n, "q": args.q, "rows": rows_json });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        // text behaves as csv: the table IS the output
        _ => {
            let mut csv = String::from("x");
            for k in 0..=n {
                csv.push_str(&format!(",B{k}"));
            }
            csv.push('\n');
            for (x, basis) in &rows {
                csv.push_str(&x.to_string());
                for v in basis {
                    csv.push(',');
                    csv.push_str(&v.to_string());
                }
                csv.push('\n');
            }
            csv
        }
    };
    emit(out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    args: VerifyArgs,
    format: Option<Format>,
    out: Option<&Path>,
    parallel: bool,
) -> Result<ExitCode, CliError> {
    let mut config = VerifyConfig::default();
    if let Some(config_arg) = &args.config {
        if config_arg.contains('=') {
            config
                .apply_overrides(config_arg)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        } else {
            let json = fs::read_to_string(config_arg)
                .map_err(|e| CliError::Usage(format!("cannot read config {config_arg}: {e}")))?;
            config
                .apply_json(&json)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
    }
    if parallel {
        config.parallel = true;
    }
    let only = args
        .only
        .as_deref()
        .map(parse_identity_list)
        .transpose()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let faults = FaultInjection {
        flip_sum_sign: args.inject_sum_sign_flip,
    };

    let report =
        run_verify(&config, only.as_ref(), faults).map_err(|e| CliError::Usage(e.to_string()))?;

    let content = match format {
        Some(Format::Json) => format!(
            "{}\n",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
        Some(Format::Csv) => {
            return Err(CliError::Usage(
                "verify supports --format text or json".into(),
            ))
        }
        _ => report.render_text(),
    };
    emit(out, &content)?;
    if report.all_pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn builtin_function(name: &str) -> Result<fn(f64) -> f64, CliError> {
    match name {
        "id" => Ok(|x| x),
        "square" => Ok(|x| x * x),
        "abs-half" => Ok(|x| (x - 0.5).abs()),
        "exp-neg" => Ok(|x| (-x).exp()),
        other => Err(CliError::Usage(format!(
            "unknown function '{other}' (expected id, square, abs-half, exp-neg)"
        ))),
    }
}

fn cmd_approx(
    args: ApproxArgs,
    format: Option<Format>,
    out: Option<&Path>,
) -> Result<ExitCode, CliError> {
    check_float_q(args.q)?;
    if args.n == 0 || args.samples == 0 {
        return Err(CliError::Usage(
            "approx needs n >= 1 and samples >= 1".into(),
        ));
    }
    let f = builtin_function(&args.function)?;
    let n = args.n;
    // f sampled on the operator grid j/n once; reused for every x
    let f_samples: Vec<f64> = (0..=n).map(|j| f(j as f64 / n as f64)).collect();

    let mut rows = Vec::new();
    let mut sup_norm = 0.0f64;
    for j in 0..=args.samples {
        let x = j as f64 / args.samples as f64;
        let fp = FloatPoint::new(args.q, x).expect("x on [0,1] grid");
        let operator: f64 = f_samples
            .iter()
            .enumerate()
            .map(|(i, fi)| fi * q_basis_f64(i as u32, n, &fp))
            .sum();
        let fx = f(x);
        let diff = (fx - operator).abs();
        sup_norm = sup_norm.max(diff);
        rows.push((x, fx, operator, diff));
    }

    let content = match format {
        Some(Format::Json) => {
            let rows_json: Vec<serde_json::Value> = rows
                .iter()
                .map(|(x, fx, op, diff)| {
                    serde_json::json!({ "x": x, "f": fx, "operator": op, "abs_diff": diff })
                })
                .collect();
            let doc = serde_json::json!({
                "fn": args.function,
                "n": n,
                "q": args.q,
                "rows": rows_json,
                "sup_norm": sup_norm,
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        Some(Format::Csv) => {
            let mut csv = String::from("x,f,operator,abs_diff\n");
            for (x, fx, op, diff) in &rows {
                csv.push_str(&format!("{x},{fx},{op},{diff}\n"));
            }
            csv.push_str(&format!("sup_norm,{sup_norm}\n"));
            csv
        }
        _ => {
            let mut text = String::new();
            for (x, fx, op, diff) in &rows {
                text.push_str(&format!(
                    "x={x:<8} f={fx:<22} B_nq(f)={op:<22} |diff|={diff:e}\n"
                ));
            }
            text.push_str(&format!("sup-norm over grid: {sup_norm:e}\n"));
            text
        }
    };
    emit(out, &content)?;
    Ok(ExitCode::SUCCESS)
}
