//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use wallx_target::Epsilon;

use crate::acceptance;
use crate::cache::Cache;
use crate::commands::{self, Target, STATUS_INCONSISTENT};
use crate::error::{CliError, EXIT_INCONSISTENT, EXIT_OK, EXIT_USAGE};
use crate::output::{render, render_json, Format};
use crate::request::Request;

#[derive(Parser, Debug)]
#[command(
    name = "wallx",
    version,
    about = "Exact genus-zero quasimap and Gromov-Witten computations for toric targets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Target description (TOML).
    #[arg(long)]
    target: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Neither read nor write the result cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Unitarity,
    Polynomiality,
    Wallcross,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Small I-function.
    Ifun {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: u32,
        /// Fixed-point basis with symbolic torus parameters.
        #[arg(long)]
        equivariant: bool,
        #[arg(long, allow_hyphen_values = true)]
        z_min: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        z_max: Option<i32>,
    },
    /// Mirror map and the small J-function in mirror coordinates.
    Mirror {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: u32,
    },
    /// Factorization J = S_τ(P) against the stable-map theory.
    Birkhoff {
        #[command(flatten)]
        common: Common,
        /// `0+` or `inf`.
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        order: u32,
    },
    /// A single invariant from the localization oracle.
    Gw {
        #[command(flatten)]
        common: Common,
        /// Curve class, comma separated for several Picard generators.
        #[arg(long, allow_hyphen_values = true)]
        degree: String,
        /// Comma separated class names, such as `pt,pt,H`.
        #[arg(long)]
        insertions: String,
        /// Comma separated descendant powers.
        #[arg(long)]
        psi: Option<String>,
        #[arg(long)]
        non_equivariant: bool,
    },
    /// Small J-function from one-point oracle invariants.
    OracleJ {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dmax: u32,
    },
    /// Yukawa coupling of a one-parameter Calabi-Yau threefold.
    Yukawa {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: u32,
        /// B-model coupling as an expression in q, such as `5/(1-3125*q)`.
        #[arg(long)]
        bmodel: String,
    },
    /// Property suites.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 1)]
        t_order: u32,
        #[arg(long, default_value_t = 2)]
        y_order: usize,
    },
    /// Acceptance battery with a pass/fail table.
    Verify {
        /// `all` or a comma separated list such as `A1,A4`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("WALLX_THREADS") else { return Ok(()) };
    let n: usize =
        v.trim().parse().map_err(|_| CliError::Validation(format!("WALLX_THREADS must be an integer, got '{v}'")))?;
    // A second configuration in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn read_target(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::Usage(format!("target file not found: {}", path.display())),
        _ => CliError::Usage(format!("cannot read target file {}: {e}", path.display())),
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs a cacheable command and writes its rendering.
fn serve(
    common: &Common,
    req: Request,
    compute: impl FnOnce(&Target) -> Result<Value, CliError>,
) -> Result<i32, CliError> {
    let text = read_target(&common.target)?;
    let work = || -> Result<String, CliError> { Ok(render_json(&compute(&Target::parse(&text)?)?)) };
    let payload = if common.no_cache { work()? } else { Cache::from_env().get_or_compute(&req, work)?.0 };
    let format = match common.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    emit(&render(&payload, format)?, common.out.as_ref())?;
    let doc: Value = serde_json::from_str(&payload).map_err(|e| CliError::Inconsistent(format!("payload: {e}")))?;
    Ok(if doc.get("status").and_then(Value::as_str) == Some(STATUS_INCONSISTENT) { EXIT_INCONSISTENT } else { EXIT_OK })
}

fn request(name: &str, common: &Common) -> Result<Request, CliError> {
    Ok(Request::new(name, &read_target(&common.target)?))
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    configure_threads()?;
    match cmd {
        Command::Ifun { common, order, equivariant, z_min, z_max } => {
            let window = match (z_min, z_max) {
                (None, None) => None,
                (lo, hi) => Some((lo.unwrap_or(-64), hi.unwrap_or(64))),
            };
            let mut req = request("ifun", &common)?.with("order", order).with("equivariant", equivariant);
            if let Some((lo, hi)) = window {
                req = req.with("z_min", lo).with("z_max", hi);
            }
            serve(&common, req, |t| commands::ifun(t, order, equivariant, window))
        }
        Command::Mirror { common, order } => {
            let req = request("mirror", &common)?.with("order", order);
            serve(&common, req, |t| commands::mirror(t, order))
        }
        Command::Birkhoff { common, epsilon, order } => {
            let eps: Epsilon =
                epsilon.parse().map_err(|e| CliError::Validation(format!("bad epsilon '{epsilon}': {e}")))?;
            let req = request("birkhoff", &common)?.with("epsilon", &eps).with("order", order);
            serve(&common, req, |t| commands::birkhoff(t, &eps, order))
        }
        Command::Gw { common, degree, insertions, psi, non_equivariant } => {
            let mut req = request("gw", &common)?
                .with("degree", &degree)
                .with("insertions", &insertions)
                .with("non_equivariant", non_equivariant);
            if let Some(p) = &psi {
                req = req.with("psi", p);
            }
            serve(&common, req, |t| commands::gw(t, &degree, &insertions, psi.as_deref(), non_equivariant))
        }
        Command::OracleJ { common, dmax } => {
            let req = request("oracle-j", &common)?.with("dmax", dmax);
            serve(&common, req, |t| commands::oracle_j(t, dmax))
        }
        Command::Yukawa { common, order, bmodel } => {
            let req = request("yukawa", &common)?.with("order", order).with("bmodel", &bmodel);
            serve(&common, req, |t| commands::yukawa(t, order, &bmodel))
        }
        Command::Check { common, suite, order, t_order, y_order } => {
            let name = format!("{suite:?}").to_lowercase();
            let req = request("check", &common)?.with("suite", &name).with("order", order).with("t_order", t_order);
            match suite {
                Suite::Unitarity => serve(&common, req, |t| commands::check_unitarity(t, order, t_order)),
                Suite::Polynomiality => serve(&common, req.with("y_order", y_order), |t| {
                    commands::check_polynomiality(t, order, t_order, y_order)
                }),
                Suite::Wallcross => serve(&common, req, |t| commands::check_wallcross(t, order)),
            }
        }
        Command::Verify { suite, out } => {
            let ids = acceptance::select(&suite).map_err(CliError::Usage)?;
            let results = acceptance::run(&ids);
            emit(&acceptance::table(&results), out.as_ref())?;
            Ok(if results.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_INCONSISTENT })
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
