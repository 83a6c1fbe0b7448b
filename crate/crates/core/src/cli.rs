//! `gaussmp` command line.
//!
//! Exit codes: `check` returns 0 for separable, 1 for entangled; every other
//! command returns 0 on success. Any error returns 2. Machine-readable output
//! goes to stdout, diagnostics to stderr. Files written with `--out` get a
//! `<out>.log` sidecar holding the command line and a timestamp, so the data
//! files themselves are reproducible byte for byte.
//!
//! The tolerance for the uncertainty and Simon tests is taken from `--tol`,
//! then from the `GAUSSMP_DEFAULT_TOL` environment variable, then from the
//! scale-aware built-in default.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{load_state, save_state, write_curve_csv, write_eigenvalue_csv, write_histogram_csv};
use crate::mp_criterion::{
    compare_ensembles, mp_separability_check, spectrum_report, AgreementReport, BoundSource,
    MPCriterionConfig, Normalization,
};
use crate::ppt::{simon_check, Verdict};
use crate::random_matrix::{ks_distance, sample_wishart, Binning, MPParams};
use crate::states::{
    random_mixed, random_pure, separable_product_with_noise, squeezed_pairs, thermal,
    two_mode_squeezed, vacuum, EnsembleKind, EnsembleParams, EnsembleSpec, GaussianState,
    DEFAULT_PARTY_NOISE,
};
use crate::symplectic::PartitionSpec;

pub const TOL_ENV: &str = "GAUSSMP_DEFAULT_TOL";

pub const EXIT_SEPARABLE: i32 = 0;
pub const EXIT_ENTANGLED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gaussmp", version, about = "Separability tests for Gaussian-state covariance matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a state file.
    GenState(GenStateArgs),
    /// Run a separability criterion on a state file.
    Check(CheckArgs),
    /// Sample a Wishart spectrum.
    Wishart(WishartArgs),
    /// Compare the spectral criterion with the Simon test on ensembles.
    Compare(CompareArgs),
    /// Write histogram and density plot data for a state's spectrum.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKindArg {
    Vacuum,
    Thermal,
    Tmsv,
    RandomPure,
    RandomMixed,
    SeparableProduct,
}

#[derive(Debug, Args)]
pub struct GenStateArgs {
    #[arg(long, value_enum)]
    pub kind: StateKindArg,
    /// Total number of modes.
    #[arg(long, default_value_t = 2)]
    pub modes: usize,
    /// Squeezing for `tmsv` (applied to every A|B pair).
    #[arg(long = "r-sq", default_value_t = 1.0)]
    pub r_sq: f64,
    /// Comma-separated thermal occupations, one per mode.
    #[arg(long)]
    pub occupations: Option<String>,
    #[arg(long, default_value_t = DEFAULT_PARTY_NOISE)]
    pub noise: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Simon,
    Mp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    None,
    MeanOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundsArg {
    Formula,
    /// `[3 − 2√2, 3 + 2√2]`.
    #[value(alias = "fixed")]
    Paper,
}

#[derive(Debug, Args, Clone)]
pub struct CriterionFlags {
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = NormalizationArg::MeanOne)]
    pub normalization: NormalizationArg,
    #[arg(long, value_enum, default_value_t = BoundsArg::Formula)]
    pub bounds: BoundsArg,
    #[arg(long = "support-tol", default_value_t = 0.0)]
    pub support_tol: f64,
}

impl CriterionFlags {
    pub fn config(&self) -> MPCriterionConfig {
        MPCriterionConfig {
            r: self.r,
            normalization: match self.normalization {
                NormalizationArg::None => Normalization::None,
                NormalizationArg::MeanOne => Normalization::MeanOne,
            },
            support_tol: self.support_tol,
            bound_source: match self.bounds {
                BoundsArg::Formula => BoundSource::Formula,
                BoundsArg::Paper => BoundSource::Fixed,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, value_enum, default_value_t = CriterionArg::Simon)]
    pub criterion: CriterionArg,
    /// Party-B modes, comma-separated (default: upper half).
    #[arg(long)]
    pub partition: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub criterion_flags: CriterionFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct WishartArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// `KIND:COUNT`, repeatable. KIND is separable-product, random-pure,
    /// random-mixed or tmsv.
    #[arg(long = "ensemble", required = true)]
    pub ensembles: Vec<String>,
    #[arg(long = "modes-per-party", default_value_t = 1)]
    pub modes_per_party: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "r-sq-min", default_value_t = 0.5)]
    pub r_sq_min: f64,
    #[arg(long = "r-sq-max", default_value_t = 2.0)]
    pub r_sq_max: f64,
    #[arg(long, default_value_t = DEFAULT_PARTY_NOISE)]
    pub noise: f64,
    #[command(flatten)]
    pub criterion_flags: CriterionFlags,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub partition: Option<String>,
    #[command(flatten)]
    pub criterion_flags: CriterionFlags,
    /// Histogram bins (default: Freedman–Diaconis).
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long = "grid-points", default_value_t = 201)]
    pub grid_points: usize,
    /// Output prefix: writes `<out>_hist.csv` and `<out>_mp.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

/// Tolerance precedence: flag, then environment, then built-in (`None`).
pub fn resolve_tol(flag: Option<f64>, env: Option<&str>) -> Result<Option<f64>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match env {
        Some(text) => text
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t >= 0.0)
            .map(Some)
            .ok_or_else(|| Error::Parse(format!("{TOL_ENV}={text:?} is not a tolerance"))),
        None => Ok(None),
    }
}

fn seed_or_fresh(seed: Option<u64>, stderr: &mut dyn Write) -> u64 {
    seed.unwrap_or_else(|| {
        let nanos = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        let s = crate::rng::splitmix64(nanos);
        let _ = writeln!(stderr, "no --seed given; using {s}");
        s
    })
}

fn write_sidecar(out: &Path, argv: &[String]) {
    let mut path = out.as_os_str().to_owned();
    path.push(".log");
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let _ = fs::write(PathBuf::from(path), format!("unix_time={stamp}\ncommand={}\n", argv.join(" ")));
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn partition_for(state: &GaussianState, flag: Option<&str>) -> Result<PartitionSpec> {
    let p = match flag {
        Some(text) => PartitionSpec::parse(text)?,
        None => PartitionSpec::second_half(state.n_modes()),
    };
    p.validate(state.n_modes())?;
    Ok(p)
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn gen_state(args: &GenStateArgs, stderr: &mut dyn Write) -> Result<(GaussianState, Option<u64>)> {
    let needs_seed = matches!(
        args.kind,
        StateKindArg::RandomPure | StateKindArg::RandomMixed | StateKindArg::SeparableProduct
    );
    let seed = needs_seed.then(|| seed_or_fresh(args.seed, stderr));
    let even_split = || {
        if args.modes == 0 || !args.modes.is_multiple_of(2) {
            Err(Error::InvalidParameter(format!(
                "{:?} needs an even, positive mode count",
                args.kind
            )))
        } else {
            Ok(args.modes / 2)
        }
    };
    let state = match args.kind {
        StateKindArg::Vacuum => vacuum(args.modes)?,
        StateKindArg::Thermal => {
            let occ: Vec<f64> = match &args.occupations {
                Some(text) => text
                    .split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad occupation {t:?}"))))
                    .collect::<Result<_>>()?,
                None => vec![0.0; args.modes],
            };
            thermal(&occ)?
        }
        StateKindArg::Tmsv => {
            let pairs = even_split()?;
            if pairs == 1 {
                two_mode_squeezed(args.r_sq)?
            } else {
                squeezed_pairs(&vec![args.r_sq; pairs])?
            }
        }
        StateKindArg::RandomPure => random_pure(args.modes, seed.unwrap_or_default())?,
        StateKindArg::RandomMixed => random_mixed(args.modes, seed.unwrap_or_default(), args.noise)?,
        StateKindArg::SeparableProduct => {
            separable_product_with_noise(even_split()?, seed.unwrap_or_default(), args.noise)?
        }
    };
    Ok((state, seed))
}

fn cmd_gen_state(args: &GenStateArgs, argv: &[String], stderr: &mut dyn Write) -> Result<i32> {
    let (state, _) = gen_state(args, stderr)?;
    save_state(&args.out, &state)?;
    write_sidecar(&args.out, argv);
    let _ = writeln!(stderr, "wrote {}-mode state to {}", state.n_modes(), args.out.display());
    Ok(0)
}

fn cmd_check(args: &CheckArgs, env_tol: Option<&str>, stdout: &mut dyn Write) -> Result<i32> {
    let state = load_state(&args.state)?;
    let partition = partition_for(&state, args.partition.as_deref())?;
    let tol = resolve_tol(args.tol, env_tol)?;
    let (verdict, report) = match args.criterion {
        CriterionArg::Simon => {
            let r = simon_check(&state, &partition, tol)?;
            (r.verdict, r.to_json())
        }
        CriterionArg::Mp => {
            // Physicality at the resolved tolerance first, as for Simon.
            let u = crate::symplectic::uncertainty_check(state.cov(), tol);
            if !u.passes {
                return Err(Error::Unphysical {
                    min_eigenvalue: u.min_eigenvalue,
                    tol: u.tol,
                });
            }
            let r = mp_separability_check(&state, &partition, &args.criterion_flags.config())?;
            (r.verdict, r.to_json())
        }
    };
    stdout
        .write_all(to_json_line(&report).as_bytes())
        .map_err(|e| Error::io("<stdout>", e))?;
    Ok(match verdict {
        Verdict::Separable => EXIT_SEPARABLE,
        Verdict::Entangled => EXIT_ENTANGLED,
    })
}

#[derive(Serialize)]
struct WishartSummary {
    m: usize,
    n: usize,
    seed: u64,
    r: f64,
    mean: f64,
    min: f64,
    max: f64,
    ks_distance: f64,
}

fn cmd_wishart(
    args: &WishartArgs,
    argv: &[String],
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let seed = seed_or_fresh(args.seed, stderr);
    let sample = sample_wishart(args.m, args.n, seed)?;
    let params = MPParams::new(sample.ratio())?;
    let summary = WishartSummary {
        m: args.m,
        n: args.n,
        seed,
        r: sample.ratio(),
        mean: sample.mean(),
        min: sample.eigenvalues[0],
        max: *sample.eigenvalues.last().expect("m ≥ 1"),
        ks_distance: ks_distance(&sample, &params),
    };
    let mut buf = Vec::new();
    match args.format {
        FormatArg::Csv => write_eigenvalue_csv(&mut buf, &sample.eigenvalues).map_err(|e| Error::io(&args.out, e))?,
        FormatArg::Json => {
            buf = serde_json::to_vec_pretty(&serde_json::json!({
                "m": sample.m,
                "n": sample.n,
                "seed": seed,
                "eigenvalues": sample.eigenvalues,
            }))?;
            buf.push(b'\n');
        }
    }
    write_file(&args.out, &buf)?;
    write_sidecar(&args.out, argv);
    stdout
        .write_all(to_json_line(&summary).as_bytes())
        .map_err(|e| Error::io("<stdout>", e))?;
    Ok(0)
}

fn parse_ensemble(text: &str) -> Result<(EnsembleKind, usize)> {
    let (kind, count) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("ensemble {text:?} is not KIND:COUNT")))?;
    let kind = match kind {
        "separable-product" => EnsembleKind::SeparableProduct,
        "random-pure" => EnsembleKind::RandomPure,
        "random-mixed" => EnsembleKind::RandomMixed,
        "tmsv" => EnsembleKind::TwoModeSqueezed,
        other => return Err(Error::Parse(format!("unknown ensemble kind {other:?}"))),
    };
    let count = count
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad ensemble size {count:?}")))?;
    Ok((kind, count))
}

#[derive(Serialize)]
struct CompareOutput<'a> {
    ensembles: &'a [EnsembleSpec],
    report: &'a AgreementReport,
}

/// Ensemble `k` uses base seed `derive_seed(seed, k)`.
pub fn ensembles_from_flags(args: &CompareArgs, seed: u64) -> Result<Vec<EnsembleSpec>> {
    args.ensembles
        .iter()
        .enumerate()
        .map(|(k, text)| {
            let (kind, n_states) = parse_ensemble(text)?;
            let spec = EnsembleSpec {
                n_states,
                n_modes_per_party: args.modes_per_party,
                kind,
                seed: crate::rng::derive_seed(seed, k as u64),
                params: EnsembleParams {
                    r_sq_min: args.r_sq_min,
                    r_sq_max: args.r_sq_max,
                    noise: args.noise,
                },
            };
            spec.validate()?;
            Ok(spec)
        })
        .collect()
}

fn cmd_compare(
    args: &CompareArgs,
    argv: &[String],
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let seed = seed_or_fresh(args.seed, stderr);
    let specs = ensembles_from_flags(args, seed)?;
    let report = compare_ensembles(&specs, &args.criterion_flags.config())?;
    let mut body = serde_json::to_vec_pretty(&CompareOutput {
        ensembles: &specs,
        report: &report,
    })?;
    body.push(b'\n');
    write_file(&args.out, &body)?;
    write_sidecar(&args.out, argv);
    stdout
        .write_all(report.render_tables().as_bytes())
        .map_err(|e| Error::io("<stdout>", e))?;
    Ok(0)
}

fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_spectrum(args: &SpectrumArgs, argv: &[String], stdout: &mut dyn Write) -> Result<i32> {
    let state = load_state(&args.state)?;
    let partition = partition_for(&state, args.partition.as_deref())?;
    let binning = match args.bins {
        Some(k) => Binning::Count(k),
        None => Binning::FreedmanDiaconis,
    };
    let report = spectrum_report(
        &state,
        &partition,
        &args.criterion_flags.config(),
        &binning,
        args.grid_points,
    )?;
    let hist_path = prefixed(&args.out, "_hist.csv");
    let mp_path = prefixed(&args.out, "_mp.csv");
    let mut buf = Vec::new();
    write_histogram_csv(&mut buf, &report.histogram).map_err(|e| Error::io(&hist_path, e))?;
    write_file(&hist_path, &buf)?;
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, &report.mp_curve).map_err(|e| Error::io(&mp_path, e))?;
    write_file(&mp_path, &buf)?;
    write_sidecar(&args.out, argv);
    let summary = serde_json::json!({
        "histogram": hist_path.display().to_string(),
        "mp_density": mp_path.display().to_string(),
        "ks_distance": report.ks_distance,
    });
    stdout
        .write_all(to_json_line(&summary).as_bytes())
        .map_err(|e| Error::io("<stdout>", e))?;
    Ok(0)
}

/// Parses `argv` (including the program name) and runs one command,
/// returning the process exit code.
pub fn run(argv: &[String], env_tol: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::GenState(a) => cmd_gen_state(a, argv, stderr),
        Command::Check(a) => cmd_check(a, env_tol, stdout),
        Command::Wishart(a) => cmd_wishart(a, argv, stdout, stderr),
        Command::Compare(a) => cmd_compare(a, argv, stdout, stderr),
        Command::Spectrum(a) => cmd_spectrum(a, argv, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
