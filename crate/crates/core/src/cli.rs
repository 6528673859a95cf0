//! `solinas-div` command line.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or parameter
//! error, 3 resource guard.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{self, Path, Sweep};
use crate::hwmodel::{self, Mode};
use crate::{bench, divider, Error, Modulus, Sign};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Caps the rayon pool used by `verify` and `census`.
pub const THREADS_ENV: &str = "SOLINAS_DIV_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "solinas-div",
    version,
    about = "Shift-add division by q = 2^w - 2^u ± 1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print q, e and the default pipeline depth t.
    Params(ModulusArgs),
    /// Divide one dividend.
    Div {
        #[command(flatten)]
        modulus: ModulusArgs,
        /// Dividend, decimal or 0x-prefixed hex.
        #[arg(long, value_parser = parse_u64)]
        lambda: u64,
        /// Print the loop or datapath trace.
        #[arg(long)]
        trace: bool,
        /// Use the datapath model instead of the algorithmic loop.
        #[arg(long)]
        hw: bool,
    },
    /// Compare every divider with native division.
    Verify {
        #[arg(long)]
        w: u32,
        /// Restrict to one u (default: every u).
        #[arg(long)]
        u: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<Sign>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Emit per-modulus loop and stage statistics as CSV.
    Census {
        #[arg(long)]
        w: u32,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Software throughput of each divider.
    Bench {
        #[command(flatten)]
        modulus: ModulusArgs,
        #[arg(long, default_value_t = 1_000_000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct ModulusArgs {
    #[arg(long)]
    w: u32,
    #[arg(long)]
    u: u32,
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    sign: Sign,
}

impl ModulusArgs {
    fn modulus(&self) -> crate::Result<Modulus> {
        Modulus::new(self.w, self.u, self.sign)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SweepMode {
    Exhaustive,
    Random,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: SweepMode,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SweepArgs {
    fn sweep(&self) -> Sweep {
        match self.mode {
            SweepMode::Exhaustive => Sweep::Exhaustive,
            SweepMode::Random => Sweep::Random {
                samples: self.samples,
                seed: self.seed,
            },
        }
    }
}

fn parse_u64(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    parsed.map_err(|e| format!("invalid dividend `{s}`: {e}"))
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ResourceGuard { .. } => EXIT_RESOURCE,
        Error::AdjustPrecondition { .. }
        | Error::Correction { .. }
        | Error::IterationCap { .. } => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Output goes to standard output and standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };

    let pool = match thread_pool() {
        Ok(p) => p,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(cli.command, out, err));
    match result {
        Ok(code) => code,
        Err(CliError::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{v}`"))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| e.to_string())
}

enum CliError {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn dispatch(
    cmd: Command,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> Result<i32, CliError> {
    match cmd {
        Command::Params(args) => {
            let m = args.modulus()?;
            writeln!(out, "q = {}", m.q())?;
            writeln!(out, "e = {}", m.e())?;
            writeln!(out, "t = {}", m.t())?;
            Ok(EXIT_OK)
        }
        Command::Div {
            modulus,
            lambda,
            trace,
            hw,
        } => {
            let m = modulus.modulus()?;
            if hw {
                let (quotient, dp) = hwmodel::hw_divide(&m, lambda, Mode::Verify)?;
                let remainder = lambda - quotient * m.q();
                writeln!(out, "quotient = {quotient}")?;
                writeln!(out, "remainder = {remainder}")?;
                if trace {
                    write!(out, "{dp}")?;
                }
            } else {
                let qr = divider::floor_divide(&m, lambda)?;
                writeln!(out, "quotient = {}", qr.quotient)?;
                writeln!(out, "remainder = {}", qr.remainder)?;
                if trace {
                    write!(out, "{}", divider::fixed_point_quotient(&m, lambda)?)?;
                    writeln!(out, "correction = {}", qr.branch)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify { w, u, sign, sweep } => verify(w, u, sign, &sweep.sweep(), out, err),
        Command::Census {
            w,
            sweep,
            out: path,
        } => {
            let rows = analysis::loop_census(w, &sweep.sweep())?;
            match path {
                Some(p) => {
                    let mut f = BufWriter::new(File::create(p)?);
                    analysis::write_csv(&rows, &mut f)?;
                    f.flush()?;
                }
                None => analysis::write_csv(&rows, &mut *out)?,
            }
            for r in rows.iter().filter(|r| r.stages_exceed_prediction()) {
                writeln!(
                    err,
                    "note: w={} u={} sign={} needs {} stages, t = {}",
                    r.w,
                    r.u,
                    r.sign,
                    r.min_stages.map_or_else(
                        || format!("more than {}", analysis::MAX_STAGES),
                        |k| k.to_string()
                    ),
                    r.predicted_t
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench {
            modulus,
            iters,
            seed,
        } => {
            let m = modulus.modulus()?;
            let results = bench::run(&m, iters, seed)?;
            writeln!(out, "q = {}  t = {}  dividends = {iters}", m, m.t())?;
            writeln!(out, "{:<10} {:>16} {:>12}", "path", "divisions/s", "ns/div")?;
            for r in &results {
                writeln!(
                    out,
                    "{:<10} {:>16.0} {:>12.2}",
                    r.name,
                    r.per_second(),
                    1e9 / r.per_second()
                )?;
            }
            writeln!(
                out,
                "note: software throughput on this machine only; silicon latency and area \
                 figures come from synthesis and are not reproduced here"
            )?;
            Ok(EXIT_OK)
        }
    }
}

fn verify(
    w: u32,
    u: Option<u32>,
    sign: Option<Sign>,
    sweep: &Sweep,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> Result<i32, CliError> {
    sweep.check_width(w)?;
    let moduli = match u {
        Some(u) => vec![Modulus::new(w, u, sign.unwrap_or(Sign::Plus))?],
        None => Modulus::all_of_width(w)?
            .into_iter()
            .filter(|m| sign.is_none_or(|s| m.sign() == s))
            .collect(),
    };
    writeln!(
        out,
        "{:>3} {:>3} {:>4} {:>12} {:>12} {:>13} {:>10} {:>8} {:>9}",
        "w", "u", "sign", "q", "dividends", "floor_divide", "hw_divide", "barrett", "mulshift"
    )?;
    let mut first_failure = None;
    for m in &moduli {
        let rep = analysis::verify_equivalence(m, sweep)?;
        let counts = Path::ALL.map(|p| rep.mismatch(p).violations);
        writeln!(
            out,
            "{:>3} {:>3} {:>4} {:>12} {:>12} {:>13} {:>10} {:>8} {:>9}",
            m.w(),
            m.u(),
            m.sign(),
            m.q(),
            rep.dividends,
            counts[0],
            counts[1],
            counts[2],
            counts[3]
        )?;
        if first_failure.is_none() {
            first_failure = rep.first_counterexample().map(|(p, l)| (*m, p, l));
        }
        if matches!(sweep, Sweep::Exhaustive) {
            let (_, t) = analysis::verify_exact_multiples(m)?;
            if let (None, Some(l)) = (first_failure, t.first) {
                first_failure = Some((*m, Path::FloorDivide, l));
                writeln!(
                    err,
                    "exact_divide mismatch for q = {} at lambda = {l}",
                    m.q()
                )?;
            }
        }
    }
    match first_failure {
        None => {
            writeln!(out, "all dividers agree with native division")?;
            Ok(EXIT_OK)
        }
        Some((m, path, lambda)) => {
            writeln!(
                err,
                "mismatch: {} with q = {} ({}) at lambda = {lambda}: expected {}",
                path.name(),
                m.q(),
                m,
                lambda / m.q()
            )?;
            Ok(EXIT_MISMATCH)
        }
    }
}
