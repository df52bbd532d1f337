//! The `mvda` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error (a moment or
//! function that does not exist), 3 verification failure, 4 numerical or
//! I/O failure.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::averages::{evaluate_or_violations, AverageSpec};
use crate::error::{Error, Result};
use crate::harness::{
    all_passed, default_suite, load_suite, report_to_string, verify_suite, ReportFormat, SuiteOptions,
    DEFAULT_ABS_FLOOR, DEFAULT_SEED,
};
use crate::linalg::{eigvals_hermitian, HermitianMatrix};
use crate::measures::{MeasureSpec, SampleStream, Sampler, SeedSpec};
use crate::special::{
    gamma_p_ln, hyp1f1_eigenvalues, pochhammer_gen, power_mean, zonal_c_eigenvalues, GammaPArgs, Partition,
    TruncationPolicy,
};

pub const SEED_ENV: &str = "MVDA_SEED";
const VERIFY_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mvda", version, about = "Complex matrix-variate Dirichlet averages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// log of the complex matrix gamma function
    Gamma(GammaArgs),
    /// generalized Pochhammer symbol [a]_kappa
    Pochhammer(PochhammerArgs),
    /// complex zonal polynomial C~_kappa
    Zonal(ZonalArgs),
    /// truncated 1F1 of a Hermitian matrix argument
    Hyp1f1(Hyp1f1Args),
    /// draw samples from a Dirichlet measure as JSON lines
    Sample(SampleArgs),
    /// closed-form Dirichlet average
    Average(AverageArgs),
    /// check closed forms against Monte Carlo
    Verify(VerifyArgs),
    /// weighted power mean f(b)
    PowerMean(PowerMeanArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// write the result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GammaArgs {
    #[arg(short = 'p', long = "p")]
    p: usize,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha_im: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct PochhammerArgs {
    #[arg(short = 'a', long = "a", allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    a_im: f64,
    /// comma separated parts, e.g. 2,1
    #[arg(long)]
    partition: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct MatrixSource {
    /// Hermitian matrix JSON file ({"p", "re", "im"})
    #[arg(long, conflicts_with = "eigenvalues")]
    matrix: Option<PathBuf>,
    /// eigenvalues, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    eigenvalues: Option<Vec<f64>>,
}

impl MatrixSource {
    fn spectrum(&self) -> Result<Vec<f64>> {
        match (&self.matrix, &self.eigenvalues) {
            (Some(path), _) => {
                let m: HermitianMatrix = read_json(path)?;
                eigvals_hermitian(&m)
            }
            (None, Some(values)) => {
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite);
                }
                Ok(values.clone())
            }
            (None, None) => Err(Error::InvalidSpec("give --matrix FILE or --eigenvalues LIST".into())),
        }
    }
}

#[derive(Debug, Args)]
struct ZonalArgs {
    #[arg(long)]
    partition: String,
    #[command(flatten)]
    source: MatrixSource,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct Hyp1f1Args {
    #[arg(short = 'a', long = "a", allow_negative_numbers = true)]
    a: f64,
    #[arg(short = 'c', long = "c", allow_negative_numbers = true)]
    c: f64,
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long)]
    max_order: Option<u32>,
    #[arg(long)]
    rel_stop: Option<f64>,
    #[arg(long)]
    consecutive_orders: Option<u32>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// MeasureSpec JSON file
    #[arg(long, visible_alias = "config")]
    spec: PathBuf,
    /// number of draws
    #[arg(long, visible_alias = "samples", default_value_t = 10)]
    count: u64,
    /// seed (default: MVDA_SEED, then 42)
    #[arg(long)]
    seed: Option<u64>,
    /// stream index within the seed
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct AverageArgs {
    /// AverageSpec JSON file, or - for stdin
    #[arg(long, visible_alias = "config")]
    spec: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// `default` for the bundled suite, otherwise a suite JSON file
    #[arg(long, visible_alias = "config", default_value = "default")]
    suite: String,
    /// samples per case, overriding the suite
    #[arg(long)]
    samples: Option<u64>,
    /// seed for every case (default: MVDA_SEED, then each case's own)
    #[arg(long)]
    seed: Option<u64>,
    /// worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// json or csv
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, default_value_t = DEFAULT_ABS_FLOOR)]
    abs_floor: f64,
    /// report runtime_ms as 0 so reports are byte-reproducible
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct PowerMeanArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[arg(short = 'b', long = "b", allow_negative_numbers = true)]
    b: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Serialize)]
struct SampleHeader<'a> {
    measure: &'a MeasureSpec,
    seed: SeedSpec,
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Gamma(args) => {
            let z = gamma_p_ln(&GammaPArgs::new(args.p, Complex64::new(args.alpha, args.alpha_im)))?;
            let doc = if args.alpha_im == 0.0 {
                json!({ "log_value": z.re })
            } else {
                json!({ "log_value": z.re, "log_value_im": z.im })
            };
            emit_json(&args.output, &doc)?;
        }
        Command::Pochhammer(args) => {
            let kappa: Partition = args.partition.parse()?;
            let v = pochhammer_gen(Complex64::new(args.a, args.a_im), &kappa);
            let doc =
                if args.a_im == 0.0 { json!({ "value": v.re }) } else { json!({ "value": v.re, "value_im": v.im }) };
            emit_json(&args.output, &doc)?;
        }
        Command::Zonal(args) => {
            let kappa: Partition = args.partition.parse()?;
            let value = zonal_c_eigenvalues(&kappa, &args.source.spectrum()?);
            emit_json(&args.output, &json!({ "value": value }))?;
        }
        Command::Hyp1f1(args) => {
            let mut policy = TruncationPolicy::default();
            if let Some(m) = args.max_order {
                policy.max_order = m;
            }
            if let Some(r) = args.rel_stop {
                policy.rel_stop = r;
            }
            if let Some(c) = args.consecutive_orders {
                policy.consecutive_orders = c;
            }
            let result = hyp1f1_eigenvalues(args.a, args.c, &args.source.spectrum()?, &policy)?;
            emit_json(&args.output, &result)?;
        }
        Command::Sample(args) => {
            let measure: MeasureSpec = read_json(&args.spec)?;
            let sampler = Sampler::new(&measure)?;
            let seed = SeedSpec::new(resolve_seed(args.seed)?, args.stream);
            let mut rng = SampleStream::new(seed);
            let mut text = serde_json::to_string(&SampleHeader { measure: &measure, seed })?;
            text.push('\n');
            for _ in 0..args.count {
                text.push_str(&serde_json::to_string(&sampler.draw(&mut rng)?)?);
                text.push('\n');
            }
            write_out(&args.output, text.as_bytes())?;
        }
        Command::Average(args) => {
            let spec: AverageSpec = read_json(&args.spec)?;
            let result = evaluate_or_violations(&spec)?;
            emit_json(&args.output, &result)?;
            if !result.conditions_ok {
                eprintln!("moment does not exist: violated {}", result.violated_conditions.join("; "));
                return Ok(Error::Domain(result.violated_conditions).exit_code());
            }
        }
        Command::Verify(args) => {
            let cases = if args.suite == "default" { default_suite() } else { load_suite(Path::new(&args.suite))? };
            let format: ReportFormat = args.format.parse()?;
            let seed = match args.seed {
                Some(s) => Some(s),
                None => env_seed()?,
            };
            let options = SuiteOptions {
                abs_floor: args.abs_floor,
                workers: args.workers,
                timing: !args.no_timing,
                samples: args.samples,
                seed,
            };
            let reports = verify_suite(&cases, &options)?;
            let mut text = report_to_string(&reports, format)?;
            if format == ReportFormat::Json {
                text.push('\n');
            }
            write_out(&args.output, text.as_bytes())?;
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.case_id.as_str()).collect();
            if !all_passed(&reports) {
                eprintln!("{} of {} cases failed: {}", failed.len(), reports.len(), failed.join(", "));
                return Ok(VERIFY_FAILED);
            }
            eprintln!("all {} cases passed", reports.len());
        }
        Command::PowerMean(args) => {
            let value = power_mean(&args.weights, &args.values, args.b)?;
            emit_json(&args.output, &json!({ "value": value }))?;
        }
    }
    Ok(0)
}

/// `--seed` if given, else `MVDA_SEED`, else the default seed.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    match flag {
        Some(s) => Ok(s),
        None => Ok(env_seed()?.unwrap_or(DEFAULT_SEED)),
    }
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidSpec(format!("{SEED_ENV} must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)?
    };
    Ok(serde_json::from_str(&text)?)
}

fn emit_json<T: Serialize>(output: &Output, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_out(output, text.as_bytes())
}

fn write_out(output: &Output, bytes: &[u8]) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}
