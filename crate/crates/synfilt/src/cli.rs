//! Command-line surface: encoding utilities, simplex identity reports,
//! Dirichlet sampling and verification, and filtration workflows over a
//! JSON state file.
//!
//! Exit codes: 0 success, 2 validation failure, 3 statistical
//! verification failure, 64 usage errors (unknown flags or malformed
//! invocations). Reports for a fixed seed and flag set are
//! byte-identical across runs.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::context::{self, ContextPrefix};
use crate::dirichlet::{self, DirichletParams};
use crate::error::{Error, Result};
use crate::filtration::{FiltrationState, ObservationEvent};
use crate::realizer;
use crate::simplex::{Generator, OrderPreservingMap};

/// Default RNG seed when neither `--seed` nor `SYNFILT_SEED` is given.
pub const DEFAULT_SEED: u64 = 42;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_STATISTICAL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "synfilt",
    version,
    about = "Simplex-category utilities, factorial-base contexts, Dirichlet measures, and filtration workflows"
)]
struct Cli {
    /// RNG seed for stochastic subcommands
    #[arg(long, global = true, env = "SYNFILT_SEED")]
    seed: Option<u64>,

    /// Output format (each subcommand has a sensible default)
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,

    /// Per-coordinate tolerance override for identity checks
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Factorial-base (Cantor) encoding between rationals and digits
    Cantor {
        #[command(subcommand)]
        command: CantorCommand,
    },
    /// Simplex-category utilities and identity verification
    Simplex {
        #[command(subcommand)]
        command: SimplexCommand,
    },
    /// Dirichlet sampling, density grids, and pushforward checks
    Diri {
        #[command(subcommand)]
        command: DiriCommand,
    },
    /// Filtration workflows over a JSON state file
    Filt {
        #[command(subcommand)]
        command: FiltCommand,
    },
    /// Statistical verification reports
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum CantorCommand {
    /// Expand a rational m/n in [0,1) into its factorial-base digits
    Encode { rational: String },
    /// Recover the exact rational from comma-separated digits
    Decode { digits: String },
}

#[derive(Subcommand)]
enum SimplexCommand {
    /// Check all simplicial identity families up to a maximal dimension
    Identities {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Random points per realizer case
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Factorize a map "n->m:[a0,a1,...]" into its canonical word
    Factorize { map: String },
}

#[derive(Subcommand)]
enum DiriCommand {
    /// Draw samples, one point per row
    Sample {
        /// Comma-separated parameter vector, e.g. 1,2,1
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, visible_alias = "n", default_value_t = 100)]
        n_samples: usize,
    },
    /// Evaluate the density on the simplex lattice of a resolution
    DensityGrid {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        resolution: usize,
    },
    /// Moment-matching check of the face pushforward law
    VerifyPushforward(PushforwardArgs),
}

#[derive(Subcommand)]
enum FiltCommand {
    /// Create a state file from parameters and context digits
    Init {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Comma-separated context digits (empty for the zero context)
        #[arg(long, default_value = "")]
        context: String,
        #[arg(long, default_value = "filtration.json")]
        state: PathBuf,
    },
    /// Record one observation at the anchor time
    Observe {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "filtration.json")]
        state: PathBuf,
    },
    /// Move the anchor one step into the future
    Advance {
        #[arg(long)]
        fraction: f64,
        #[arg(long, default_value = "filtration.json")]
        state: PathBuf,
    },
    /// Print the determined parameters at a past time
    Past {
        #[arg(long)]
        s: usize,
        #[arg(long, default_value = "filtration.json")]
        state: PathBuf,
    },
    /// Print the current state
    Show {
        #[arg(long, default_value = "filtration.json")]
        state: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Moment-matching check of the face pushforward law
    Pushforward(PushforwardArgs),
}

#[derive(Args, Clone)]
struct PushforwardArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long)]
    face: usize,
    #[arg(long, visible_alias = "n", default_value_t = 100_000)]
    n_samples: usize,
}

/// Runs the CLI against an argument vector, writing results to `out`
/// and diagnostics to `err`; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(parse_err) => {
            use clap::error::ErrorKind;
            let rendered = parse_err.render();
            return match parse_err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_VALIDATION
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(String, i32)> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::Cantor { command } => cantor(command, cli.output),
        Command::Simplex { command } => simplex(command, cli.output, cli.tolerance, seed),
        Command::Diri { command } => diri(command, cli.output, seed),
        Command::Filt { command } => filt(command),
        Command::Verify {
            command: VerifyCommand::Pushforward(args),
        } => pushforward_report(args, seed),
    }
}

/// 17 significant digits, round-trip safe.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

fn parse_alpha(raw: &str) -> Result<DirichletParams> {
    let entries = raw
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad alpha entry {tok:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    DirichletParams::new(entries)
}

fn parse_digits(raw: &str) -> Result<ContextPrefix> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Ok(ContextPrefix::empty());
    }
    let digits = trimmed
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad digit {tok:?}")))
        })
        .collect::<Result<Vec<usize>>>()?;
    ContextPrefix::new(digits)
}

// --- cantor ---

#[derive(Serialize)]
struct CantorEncodeReport {
    rational: String,
    digits: Vec<usize>,
}

#[derive(Serialize)]
struct CantorDecodeReport {
    digits: Vec<usize>,
    rational: String,
    numerator: String,
    denominator: String,
}

fn cantor(command: &CantorCommand, output: Option<OutputFormat>) -> Result<(String, i32)> {
    match command {
        CantorCommand::Encode { rational } => {
            let r = context::parse_rational(rational)?;
            let digits = context::cantor_expand(&r)?;
            let text = match output.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => {
                    let mut line = digits
                        .digits()
                        .iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(",");
                    line.push('\n');
                    line
                }
                OutputFormat::Json => to_pretty_json(&CantorEncodeReport {
                    rational: r.to_string(),
                    digits: digits.digits().to_vec(),
                }),
            };
            Ok((text, EXIT_OK))
        }
        CantorCommand::Decode { digits } => {
            let prefix = parse_digits(digits)?;
            let value = context::cantor_value(&prefix);
            let text = match output.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => format!("{value}\n"),
                OutputFormat::Json => to_pretty_json(&CantorDecodeReport {
                    digits: prefix.digits().to_vec(),
                    rational: value.to_string(),
                    numerator: value.numer().to_string(),
                    denominator: value.denom().to_string(),
                }),
            };
            Ok((text, EXIT_OK))
        }
    }
}

// --- simplex ---

#[derive(Serialize)]
struct IdentityReport {
    max_n: usize,
    points_per_case: usize,
    tolerance: f64,
    seed: u64,
    families: Vec<FamilyReport>,
    counterexamples: Vec<Counterexample>,
    pass: bool,
}

#[derive(Serialize)]
struct FamilyReport {
    family: String,
    cases: usize,
    max_abs_error: f64,
    failures: usize,
}

#[derive(Serialize)]
struct Counterexample {
    family: String,
    n: usize,
    i: usize,
    j: usize,
    max_abs_error: f64,
}

#[derive(Serialize)]
struct FactorizeReport {
    map: String,
    source: usize,
    target: usize,
    word: Vec<Generator>,
    recomposed: String,
    matches: bool,
}

fn simplex(
    command: &SimplexCommand,
    output: Option<OutputFormat>,
    tolerance: Option<f64>,
    seed: u64,
) -> Result<(String, i32)> {
    match command {
        SimplexCommand::Identities { max_n, points } => {
            let report = identity_report(*max_n, *points, tolerance.unwrap_or(1e-12), seed)?;
            let code = if report.pass {
                EXIT_OK
            } else {
                EXIT_STATISTICAL
            };
            match output.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => Ok((to_pretty_json(&report), code)),
                OutputFormat::Csv => {
                    let mut text = String::from("family,cases,max_abs_error,failures\n");
                    for f in &report.families {
                        text.push_str(&format!(
                            "{},{},{},{}\n",
                            f.family,
                            f.cases,
                            fmt_f64(f.max_abs_error),
                            f.failures
                        ));
                    }
                    Ok((text, code))
                }
            }
        }
        SimplexCommand::Factorize { map } => {
            let parsed: OrderPreservingMap = map.parse()?;
            let word = parsed.factorize();
            let recomposed = word.recompose();
            let report = FactorizeReport {
                map: parsed.to_string(),
                source: parsed.source().n(),
                target: parsed.target().n(),
                word: word.generators().to_vec(),
                recomposed: recomposed.to_string(),
                matches: recomposed == parsed,
            };
            Ok((to_pretty_json(&report), EXIT_OK))
        }
    }
}

struct FamilyAccumulator {
    name: &'static str,
    cases: usize,
    max_abs_error: f64,
    failures: usize,
    counterexamples: Vec<Counterexample>,
}

impl FamilyAccumulator {
    fn new(name: &'static str) -> Self {
        FamilyAccumulator {
            name,
            cases: 0,
            max_abs_error: 0.0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, n: usize, i: usize, j: usize, error: f64, tolerance: f64) {
        self.cases += 1;
        self.max_abs_error = self.max_abs_error.max(error);
        if error > tolerance {
            self.failures += 1;
            self.counterexamples.push(Counterexample {
                family: self.name.to_owned(),
                n,
                i,
                j,
                max_abs_error: error,
            });
        }
    }

    fn into_report(self, counterexamples: &mut Vec<Counterexample>) -> FamilyReport {
        counterexamples.extend(self.counterexamples);
        FamilyReport {
            family: self.name.to_owned(),
            cases: self.cases,
            max_abs_error: self.max_abs_error,
            failures: self.failures,
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn identity_report(
    max_n: usize,
    points: usize,
    tolerance: f64,
    seed: u64,
) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counterexamples = Vec::new();
    let mut families = Vec::new();

    // Morphism level: exact image-vector equality.
    let mut dd = FamilyAccumulator::new("delta_delta");
    for n in 2..=max_n {
        for j in 1..=n {
            for i in 0..j {
                let lhs = OrderPreservingMap::face(n, j)?
                    .compose(&OrderPreservingMap::face(n - 1, i)?)?;
                let rhs = OrderPreservingMap::face(n, i)?
                    .compose(&OrderPreservingMap::face(n - 1, j - 1)?)?;
                dd.record(n, i, j, if lhs == rhs { 0.0 } else { 1.0 }, 0.5);
            }
        }
    }
    families.push(dd.into_report(&mut counterexamples));

    let mut ss = FamilyAccumulator::new("sigma_sigma");
    for n in 1..=max_n {
        for j in 0..n {
            for i in 0..=j {
                let lhs = OrderPreservingMap::degeneracy(n - 1, j)?
                    .compose(&OrderPreservingMap::degeneracy(n, i)?)?;
                let rhs = OrderPreservingMap::degeneracy(n - 1, i)?
                    .compose(&OrderPreservingMap::degeneracy(n, j + 1)?)?;
                ss.record(n, i, j, if lhs == rhs { 0.0 } else { 1.0 }, 0.5);
            }
        }
    }
    families.push(ss.into_report(&mut counterexamples));

    let mut sd = FamilyAccumulator::new("sigma_delta");
    for n in 1..=max_n {
        for i in 0..=n + 1 {
            for j in 0..=n {
                let lhs = OrderPreservingMap::degeneracy(n, j)?
                    .compose(&OrderPreservingMap::face(n + 1, i)?)?;
                let rhs = if i < j {
                    OrderPreservingMap::face(n, i)?
                        .compose(&OrderPreservingMap::degeneracy(n - 1, j - 1)?)?
                } else if i == j || i == j + 1 {
                    OrderPreservingMap::identity(n)
                } else {
                    OrderPreservingMap::face(n, i - 1)?
                        .compose(&OrderPreservingMap::degeneracy(n - 1, j)?)?
                };
                sd.record(n, i, j, if lhs == rhs { 0.0 } else { 1.0 }, 0.5);
            }
        }
    }
    families.push(sd.into_report(&mut counterexamples));

    // Realizer level: random points, numeric tolerance.
    let uniform = |n: usize| DirichletParams::new(vec![1.0; n + 1]).expect("all-ones is valid");

    let mut rdd = FamilyAccumulator::new("realizer_dd");
    for n in 2..=max_n {
        for j in 1..=n {
            for i in 0..j {
                let mut worst = 0.0f64;
                for _ in 0..points {
                    let w = dirichlet::sample(&uniform(n), &mut rng);
                    let lhs =
                        realizer::face_map(n - 1, i, &realizer::face_map(n, j, w.weights())?)?;
                    let rhs =
                        realizer::face_map(n - 1, j - 1, &realizer::face_map(n, i, w.weights())?)?;
                    worst = worst.max(max_abs_diff(&lhs, &rhs));
                }
                rdd.record(n, i, j, worst, tolerance);
            }
        }
    }
    families.push(rdd.into_report(&mut counterexamples));

    let mut rss = FamilyAccumulator::new("realizer_ss");
    for n in 2..=max_n {
        for j in 1..n {
            for i in 0..j {
                let mut worst = 0.0f64;
                for _ in 0..points {
                    let w = dirichlet::sample(&uniform(n - 1), &mut rng);
                    let lhs = realizer::degeneracy_map(
                        n,
                        i,
                        &realizer::degeneracy_map(n - 1, j, w.weights())?,
                    )?;
                    let rhs = realizer::degeneracy_map(
                        n,
                        j + 1,
                        &realizer::degeneracy_map(n - 1, i, w.weights())?,
                    )?;
                    worst = worst.max(max_abs_diff(&lhs, &rhs));
                }
                rss.record(n, i, j, worst, tolerance);
            }
        }
    }
    families.push(rss.into_report(&mut counterexamples));

    let mut rds = FamilyAccumulator::new("realizer_ds");
    for n in 1..=max_n {
        for i in 0..=n + 1 {
            for j in 0..=n {
                let mut worst = 0.0f64;
                for _ in 0..points {
                    let w = dirichlet::sample(&uniform(n), &mut rng);
                    let lhs = realizer::face_map(
                        n + 1,
                        i,
                        &realizer::degeneracy_map(n, j, w.weights())?,
                    )?;
                    let rhs = if i < j {
                        realizer::degeneracy_map(
                            n - 1,
                            j - 1,
                            &realizer::face_map(n, i, w.weights())?,
                        )?
                    } else if i == j || i == j + 1 {
                        w.weights().to_vec()
                    } else {
                        realizer::degeneracy_map(
                            n - 1,
                            j,
                            &realizer::face_map(n, i - 1, w.weights())?,
                        )?
                    };
                    worst = worst.max(max_abs_diff(&lhs, &rhs));
                }
                rds.record(n, i, j, worst, tolerance);
            }
        }
    }
    families.push(rds.into_report(&mut counterexamples));

    let pass = families.iter().all(|f| f.failures == 0);
    Ok(IdentityReport {
        max_n,
        points_per_case: points,
        tolerance,
        seed,
        families,
        counterexamples,
        pass,
    })
}

// --- diri ---

#[derive(Serialize)]
struct SampleReport {
    alpha: Vec<f64>,
    seed: u64,
    n_samples: usize,
    samples: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct DensityGridReport {
    alpha: Vec<f64>,
    resolution: usize,
    points: Vec<dirichlet::GridPoint>,
}

fn diri(command: &DiriCommand, output: Option<OutputFormat>, seed: u64) -> Result<(String, i32)> {
    match command {
        DiriCommand::Sample { alpha, n_samples } => {
            let params = parse_alpha(alpha)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples: Vec<Vec<f64>> = (0..*n_samples)
                .map(|_| dirichlet::sample(&params, &mut rng).into_weights())
                .collect();
            let text = match output.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => {
                    let mut text = String::new();
                    for row in &samples {
                        let line = row
                            .iter()
                            .map(|&x| fmt_f64(x))
                            .collect::<Vec<_>>()
                            .join(",");
                        text.push_str(&line);
                        text.push('\n');
                    }
                    text
                }
                OutputFormat::Json => to_pretty_json(&SampleReport {
                    alpha: params.alpha().to_vec(),
                    seed,
                    n_samples: *n_samples,
                    samples,
                }),
            };
            Ok((text, EXIT_OK))
        }
        DiriCommand::DensityGrid { alpha, resolution } => {
            let params = parse_alpha(alpha)?;
            let grid = dirichlet::density_grid(&params, *resolution)?;
            let text = match output.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => {
                    let n = params.dimension();
                    let mut text = (0..=n)
                        .map(|i| format!("x{i}"))
                        .collect::<Vec<_>>()
                        .join(",");
                    text.push_str(",density\n");
                    for point in &grid.points {
                        let coords = point
                            .weights
                            .iter()
                            .map(|&x| fmt_f64(x))
                            .collect::<Vec<_>>()
                            .join(",");
                        let density = match point.density {
                            dirichlet::Density::Finite(v) => fmt_f64(v),
                            dirichlet::Density::Infinite => "inf".to_owned(),
                        };
                        text.push_str(&format!("{coords},{density}\n"));
                    }
                    text
                }
                OutputFormat::Json => to_pretty_json(&DensityGridReport {
                    alpha: params.alpha().to_vec(),
                    resolution: grid.resolution,
                    points: grid.points,
                }),
            };
            Ok((text, EXIT_OK))
        }
        DiriCommand::VerifyPushforward(args) => pushforward_report(args, seed),
    }
}

fn pushforward_report(args: &PushforwardArgs, seed: u64) -> Result<(String, i32)> {
    let params = parse_alpha(&args.alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report =
        dirichlet::verify_pushforward_face(&params, args.face, args.n_samples, &mut rng)?;
    report.seed = Some(seed);
    let code = if report.pass {
        EXIT_OK
    } else {
        EXIT_STATISTICAL
    };
    Ok((to_pretty_json(&report), code))
}

// --- filt ---

#[derive(Serialize)]
struct PastReport {
    s: usize,
    alpha: Vec<f64>,
}

fn load_state(path: &Path) -> Result<FiltrationState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad state file: {e}")))
}

fn store_state(path: &Path, state: &FiltrationState) -> Result<String> {
    let text = to_pretty_json(state);
    std::fs::write(path, &text)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
    Ok(text)
}

fn filt(command: &FiltCommand) -> Result<(String, i32)> {
    match command {
        FiltCommand::Init {
            alpha,
            context,
            state,
        } => {
            let params = parse_alpha(alpha)?;
            let digits = parse_digits(context)?;
            let value = FiltrationState::new(params, digits);
            Ok((store_state(state, &value)?, EXIT_OK))
        }
        FiltCommand::Observe { k, state } => {
            let current = load_state(state)?;
            let event = ObservationEvent::new(current.anchor_time(), *k)?;
            let updated = current.bayes_update(&event)?;
            Ok((store_state(state, &updated)?, EXIT_OK))
        }
        FiltCommand::Advance { fraction, state } => {
            let current = load_state(state)?;
            let advanced = current.advance(*fraction)?;
            Ok((store_state(state, &advanced)?, EXIT_OK))
        }
        FiltCommand::Past { s, state } => {
            let current = load_state(state)?;
            let params = current.state_at(*s)?;
            Ok((
                to_pretty_json(&PastReport {
                    s: *s,
                    alpha: params.alpha().to_vec(),
                }),
                EXIT_OK,
            ))
        }
        FiltCommand::Show { state } => Ok((to_pretty_json(&load_state(state)?), EXIT_OK)),
    }
}
