use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand};

use waring_cli::{default_precision, run_batch, run_command, Command, FamilySpec, Request, Response, PRECISION_ENV};

/// Waring rank, real rank bounds and power-sum decompositions of binary forms.
#[derive(Parser)]
#[command(name = "waring", version)]
struct Cli {
    /// Print the response as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Print only the headline result.
    #[arg(long, global = true)]
    quiet: bool,
    /// Working precision in bits for numeric steps.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Reject forms with irrational coefficients.
    #[arg(long, global = true)]
    rational_only: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FormArg {
    /// Binary form, e.g. "x^4 + 4*x^2*y^2 + y^4".
    #[arg(allow_hyphen_values = true)]
    form: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Complex Waring rank with its certificate.
    Rank(FormArg),
    /// Real Waring rank, exact or as a certified bracket.
    RealRank {
        #[command(flatten)]
        form: FormArg,
        /// Random draws per level when the apolar space has dimension three or more.
        #[arg(long)]
        budget_samples: Option<usize>,
    },
    /// Minimal power-sum decomposition.
    Decompose {
        #[command(flatten)]
        form: FormArg,
        /// Accept a numeric decomposition when exact roots are out of reach.
        #[arg(long)]
        numeric_ok: bool,
    },
    /// Check a decomposition (JSON on stdin) against a form.
    Verify(FormArg),
    /// Generators of the apolar ideal.
    Apolar(FormArg),
    /// Apolar forms of degree R.
    Kernel {
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        form: FormArg,
    },
    /// Rank 1, 2 or 3 classification with field data.
    Classify(FormArg),
    /// Parametric families.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Non-real roots forced by vanishing coefficients.
    GapBound(FormArg),
    /// Run newline-delimited JSON requests from a file.
    Batch {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
    },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// x^(2k) + C(2k,k)*lambda*x^k*y^k + y^(2k)
    Flambda {
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// sum_i C(d,2i) gamma^i x^(d-2i) y^(2i)
    Pd {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
}

fn emit(resp: &Response, json: bool, quiet: bool) -> ExitCode {
    let text = if json { resp.to_json_pretty() } else { resp.render_human(quiet) };
    // a closed pipe downstream is not our failure
    let _ = if resp.error.is_some() && !json {
        writeln!(std::io::stderr(), "{text}")
    } else {
        writeln!(std::io::stdout(), "{text}")
    };
    ExitCode::from(resp.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return ExitCode::from(code);
        }
    };
    let env = std::env::var(PRECISION_ENV).ok();
    let prec = match default_precision(env.as_deref()) {
        Ok(p) => p,
        Err(msg) => return emit(&Response::input_error(None, msg), cli.json, cli.quiet),
    };

    let mut req = match cli.cmd {
        Cmd::Batch { file, parallelism } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    let msg = format!("cannot read {}: {e}", file.display());
                    return emit(&Response::input_error(None, msg), cli.json, cli.quiet);
                }
            };
            let (responses, summary) = run_batch(&text, parallelism.max(1), prec);
            let mut out = std::io::stdout().lock();
            for r in &responses {
                let _ = writeln!(out, "{}", r.to_json_line());
            }
            if !cli.quiet {
                eprintln!("{} requests: {} ok, {} error", summary.total, summary.ok, summary.error);
            }
            return ExitCode::SUCCESS;
        }
        Cmd::Verify(f) => {
            let mut req = Request::new(Command::Verify, Some(f.form));
            let mut text = String::new();
            let parsed = std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| format!("cannot read stdin: {e}"))
                .and_then(|_| {
                    serde_json::from_str(&text).map_err(|e| format!("decomposition on stdin is not JSON: {e}"))
                });
            match parsed {
                Ok(v) => req.options.decomposition = Some(v),
                Err(msg) => return emit(&Response::input_error(Some(Command::Verify), msg), cli.json, cli.quiet),
            }
            req
        }
        Cmd::Rank(f) => Request::new(Command::Rank, Some(f.form)),
        Cmd::RealRank { form, budget_samples } => {
            let mut req = Request::new(Command::RealRank, Some(form.form));
            req.options.budget_samples = budget_samples;
            req
        }
        Cmd::Decompose { form, numeric_ok } => {
            let mut req = Request::new(Command::Decompose, Some(form.form));
            req.options.numeric_ok = numeric_ok;
            req
        }
        Cmd::Apolar(f) => Request::new(Command::Apolar, Some(f.form)),
        Cmd::Kernel { r, form } => {
            let mut req = Request::new(Command::Kernel, Some(form.form));
            req.options.r = Some(r);
            req
        }
        Cmd::Classify(f) => Request::new(Command::Classify, Some(f.form)),
        Cmd::Family(which) => {
            let mut req = Request::new(Command::Family, None);
            req.options.family = Some(match which {
                FamilyCmd::Flambda { k, lambda } => FamilySpec::Flambda { k, lambda },
                FamilyCmd::Pd { d, gamma } => FamilySpec::Pd { d, gamma },
            });
            req
        }
        Cmd::GapBound(f) => Request::new(Command::GapBound, Some(f.form)),
    };
    req.options.precision = cli.precision;
    req.options.rational_only = cli.rational_only;
    emit(&run_command(&req, prec), cli.json, cli.quiet)
}
