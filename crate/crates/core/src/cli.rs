//! Command-line harness: state ingestion, experiment presets, verification
//! suites, and persistence of results.
//!
//! Exit codes: 0 success, 1 validation failure, 2 verification-suite
//! failure, 3 I/O error. The default output directory is `out`, overridable
//! by the `COHMAX_OUT` environment variable and the `--out` flag.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analytic::{analyze, AnalyticReport, TildeMode, EXHAUSTIVE_PERMUTATION_CAP};
use crate::error::{Error, Result};
use crate::hadamard::fourier_matrix;
use crate::io::{
    load_state, load_unitary, scatter_svg, top_k_csv, write_json, ExperimentConfig, ResultRecord,
};
use crate::linalg::{hermitian_eig, DensityMatrix, LogBase, Spectrum, UnitaryMatrix};
use crate::measures::{coherence_in_basis, CoherenceReport};
use crate::search::{
    circulant_check, measure_value, random_search, random_spectrum, sample_cue,
    stationarity_residual, Measure, RngStream, SearchConfig, ThetaMatrix,
};

/// Environment variable overriding the default output directory.
pub const OUT_DIR_ENV: &str = "COHMAX_OUT";

#[derive(Parser)]
#[command(
    name = "cohmax",
    version,
    about = "Coherence of quantum states in arbitrary reference bases: \
             measures, optimal-basis constructions, closed forms, and \
             seeded random-basis searches"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the three coherence measures of a state in a chosen basis.
    Coherence(CoherenceArgs),
    /// Closed-form quantities of a spectrum (ceilings, O_d, C_P, C_F).
    Analytic(AnalyticArgs),
    /// Maximize a coherence measure over seeded Haar-random bases.
    Search(SearchArgs),
    /// Run a verification suite; nonzero exit on any failed check.
    Verify(VerifyArgs),
    /// Presets reproducing the reference experiments.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BasisChoice {
    /// Computational basis (the state as given).
    Identity,
    /// Fourier (dual) basis.
    Fourier,
    /// Eigenbasis of the state; all measures vanish there.
    Eigen,
    /// Unitary loaded from --basis-file.
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MeasureChoice {
    L1,
    R,
    L2,
}

impl From<MeasureChoice> for Measure {
    fn from(m: MeasureChoice) -> Self {
        match m {
            MeasureChoice::L1 => Measure::L1,
            MeasureChoice::R => Measure::RelativeEntropy,
            MeasureChoice::L2 => Measure::L2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LogBaseChoice {
    #[value(name = "2")]
    Two,
    E,
}

impl From<LogBaseChoice> for LogBase {
    fn from(b: LogBaseChoice) -> Self {
        match b {
            LogBaseChoice::Two => LogBase::Two,
            LogBaseChoice::E => LogBase::E,
        }
    }
}

#[derive(Args)]
struct CoherenceArgs {
    /// Comma-separated eigenvalues of a diagonal state, e.g. 0.5,0.3,0.2
    #[arg(long)]
    spectrum: Option<String>,
    /// JSON state file with a "spectrum" or "matrix" key.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "identity")]
    basis: BasisChoice,
    /// JSON unitary file, required with --basis file.
    #[arg(long)]
    basis_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "2")]
    log_base: LogBaseChoice,
    /// Output directory (default: $COHMAX_OUT or ./out).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyticArgs {
    /// Comma-separated spectrum, e.g. 0.4,0.3,0.2,0.1
    #[arg(long)]
    spectrum: String,
    #[arg(long, value_enum, default_value = "2")]
    log_base: LogBaseChoice,
    /// Seed for the sampled-permutation fallback above the exhaustive cap.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Comma-separated spectrum of the state.
    #[arg(long)]
    spectrum: Option<String>,
    /// JSON state file; its eigenvalues drive the search.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "l1")]
    measure: MeasureChoice,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 10)]
    top_k: usize,
    #[arg(long, value_enum, default_value = "2")]
    log_base: LogBaseChoice,
    /// Also emit a scatter plot of the top values.
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Theorem1,
    Stationarity,
    Circulant,
    Bounds,
    Identities,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Dimension range, inclusive: "2..6", "4", or "2,3,5".
    #[arg(long, default_value = "2..6")]
    dims: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "2")]
    log_base: LogBaseChoice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// d = 3, spectrum (0.5, 0.3, 0.2): best values approach O_3 from below.
    Table1,
    /// d = 4, spectrum (0.4, 0.3, 0.2, 0.1): top-10 values against O_4.
    Fig1,
    /// d = 5, spectrum (0.30, 0.25, 0.20, 0.15, 0.10): violations of O_5.
    D5,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(value_enum)]
    preset: Preset,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Sample count for fig1/d5 (default 100000).
    #[arg(long)]
    samples: Option<u64>,
    /// Largest power of ten for the table1 ladder (10^2 ... 10^max-exp).
    #[arg(long, default_value_t = 6)]
    max_exp: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse arguments and run; returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Io(_) => 3,
                _ => 1,
            }
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Coherence(args) => cmd_coherence(args),
        Command::Analytic(args) => cmd_analytic(args),
        Command::Search(args) => cmd_search(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    }
}

fn parse_spectrum_arg(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad spectrum entry {tok:?}: {e}")))
        })
        .collect()
}

fn parse_dims_arg(text: &str) -> Result<Vec<usize>> {
    let parse_one = |tok: &str| {
        tok.trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad dimension {tok:?}: {e}")))
    };
    let dims: Vec<usize> = if let Some((lo, hi)) = text.split_once("..") {
        let lo = parse_one(lo)?;
        let hi = parse_one(hi)?;
        if lo > hi {
            return Err(Error::Parse(format!("empty dimension range {text:?}")));
        }
        (lo..=hi).collect()
    } else {
        text.split(',').map(parse_one).collect::<Result<_>>()?
    };
    if dims.contains(&0) {
        return Err(Error::Parse("dimensions must be >= 1".into()));
    }
    Ok(dims)
}

fn resolve_out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn load_density(spectrum: &Option<String>, state: &Option<PathBuf>) -> Result<DensityMatrix> {
    match (spectrum, state) {
        (Some(_), Some(_)) => Err(Error::InvalidState(
            "--spectrum and --state are mutually exclusive".into(),
        )),
        (Some(text), None) => {
            let values = parse_spectrum_arg(text)?;
            DensityMatrix::from_spectrum(&Spectrum::in_given_order(values)?)
        }
        (None, Some(path)) => load_state(path),
        (None, None) => Err(Error::InvalidState(
            "one of --spectrum or --state is required".into(),
        )),
    }
}

fn tilde_mode(dim: usize, seed: u64) -> TildeMode {
    if dim <= EXHAUSTIVE_PERMUTATION_CAP {
        TildeMode::Exhaustive
    } else {
        TildeMode::Sampled {
            samples: 40_320,
            seed,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoherenceRecord {
    dimension: usize,
    basis: String,
    log_base: LogBase,
    report: CoherenceReport,
}

fn cmd_coherence(args: CoherenceArgs) -> Result<i32> {
    let rho = load_density(&args.spectrum, &args.state)?;
    let d = rho.dim();
    let base = LogBase::from(args.log_base);
    let (name, basis): (String, UnitaryMatrix) = match args.basis {
        BasisChoice::Identity => ("identity".into(), UnitaryMatrix::identity(d)),
        BasisChoice::Fourier => ("fourier".into(), fourier_matrix(d)?.unitary().clone()),
        BasisChoice::Eigen => ("eigen".into(), hermitian_eig(&rho)?.vectors),
        BasisChoice::File => {
            let path = args.basis_file.as_ref().ok_or_else(|| {
                Error::InvalidState("--basis file requires --basis-file <path>".into())
            })?;
            (format!("file:{}", path.display()), load_unitary(path)?)
        }
    };
    let report = coherence_in_basis(&rho, &basis, base)?;

    println!("dimension : {d}");
    println!("basis     : {name}");
    println!("log base  : {base}");
    println!("C_R       = {:.9}", report.c_r);
    println!("C_l1      = {:.9}", report.c_l1);
    println!("C_l2      = {:.9}", report.c_l2);
    println!(
        "diagonal  = [{}]",
        report
            .diagonal
            .iter()
            .map(|p| format!("{p:.9}"))
            .collect::<Vec<_>>()
            .join(", ")
    );

    let out = resolve_out_dir(args.out);
    ensure_dir(&out)?;
    let record = CoherenceRecord {
        dimension: d,
        basis: name,
        log_base: base,
        report,
    };
    write_json(&out.join("coherence.json"), &record)?;
    Ok(0)
}

fn cmd_analytic(args: AnalyticArgs) -> Result<i32> {
    let values = parse_spectrum_arg(&args.spectrum)?;
    let spectrum = Spectrum::new(values)?;
    let base = LogBase::from(args.log_base);
    let report = analyze(&spectrum, base, tilde_mode(spectrum.dim(), args.seed))?;
    print_analytic(&report);
    let out = resolve_out_dir(args.out);
    ensure_dir(&out)?;
    write_json(&out.join("analytic.json"), &report)?;
    Ok(0)
}

fn print_analytic(report: &AnalyticReport) {
    println!("dimension  : {}", report.dimension);
    println!("log base   : {}", report.log_base);
    println!("C_R^max    = {:.9}", report.c_r_max);
    println!("C_l2^max   = {:.9}", report.c_l2_max);
    println!("O_d        = {:.9}", report.o_d);
    println!(
        "O_d~       = {:.9}  (argmax permutation {:?})",
        report.o_d_tilde, report.o_d_tilde_permutation
    );
    println!("C_P        = {:.9}", report.c_p);
    println!("C_F        = {:.9}", report.c_f);
}

struct SearchSetup {
    spectrum: Spectrum,
    spectrum_input: Option<Vec<f64>>,
    state_path: Option<String>,
}

fn search_setup(spectrum: &Option<String>, state: &Option<PathBuf>) -> Result<SearchSetup> {
    match (spectrum, state) {
        (Some(_), Some(_)) => Err(Error::InvalidState(
            "--spectrum and --state are mutually exclusive".into(),
        )),
        (Some(text), None) => {
            let values = parse_spectrum_arg(text)?;
            Ok(SearchSetup {
                spectrum: Spectrum::new(values.clone())?,
                spectrum_input: Some(values),
                state_path: None,
            })
        }
        (None, Some(path)) => {
            let rho = load_state(path)?;
            Ok(SearchSetup {
                spectrum: hermitian_eig(&rho)?.spectrum,
                spectrum_input: None,
                state_path: Some(path.display().to_string()),
            })
        }
        (None, None) => Err(Error::InvalidState(
            "one of --spectrum or --state is required".into(),
        )),
    }
}

fn reference_for(measure: Measure, report: &AnalyticReport) -> f64 {
    match measure {
        Measure::L1 => report.o_d,
        Measure::RelativeEntropy => report.c_r_max,
        Measure::L2 => report.c_l2_max,
    }
}

fn cmd_search(args: SearchArgs) -> Result<i32> {
    let setup = search_setup(&args.spectrum, &args.state)?;
    let measure = Measure::from(args.measure);
    let base = LogBase::from(args.log_base);
    let d = setup.spectrum.dim();

    let config = ExperimentConfig {
        dimension: d,
        spectrum: setup.spectrum_input.clone(),
        state_path: setup.state_path.clone(),
        measure,
        samples: args.samples,
        seed: args.seed,
        workers: args.workers,
        log_base: base,
        top_k: args.top_k,
    };
    config.validate()?;

    let analytic = analyze(&setup.spectrum, base, tilde_mode(d, args.seed))?;
    let reference = reference_for(measure, &analytic);
    let search_config = SearchConfig {
        samples: args.samples,
        seed: args.seed,
        workers: args.workers,
        top_k: args.top_k,
        log_base: base,
    };
    let result = random_search(&setup.spectrum, measure, &search_config, reference)?;

    println!("dimension  : {d}");
    println!("measure    : {measure}");
    println!("samples    : {}", result.samples);
    println!("reference  : {reference:.9}");
    println!("best value : {:.9}", result.best_value);
    println!("margin     : {:+.3e}", result.best_margin);
    println!("violations : {}", result.violation_count);
    for (i, v) in result.top_values.iter().enumerate() {
        let mark = if *v > reference { "  << exceeds reference" } else { "" };
        println!("  top {:>2}: {v:.9}{mark}", i + 1);
    }

    let record = ResultRecord::new(config, analytic, &result);
    record.validate()?;
    let out = resolve_out_dir(args.out);
    ensure_dir(&out)?;
    write_json(&out.join("results.json"), &record)?;
    fs::write(out.join("topk.csv"), top_k_csv(&result))?;
    if args.svg {
        let title = format!("top {} of {} samples (d = {d}, {measure})", result.top_values.len(), result.samples);
        fs::write(
            out.join("scatter.svg"),
            scatter_svg(&result.top_values, reference, &title),
        )?;
    }
    println!("wrote {}", out.join("results.json").display());
    Ok(0)
}

struct SuiteReport {
    failures: usize,
}

impl SuiteReport {
    fn new() -> Self {
        Self { failures: 0 }
    }

    fn check(&mut self, label: &str, residual: f64, tol: f64) {
        let ok = residual <= tol;
        if !ok {
            self.failures += 1;
        }
        println!(
            "  {label}: residual {residual:.3e} (tol {tol:.0e}) [{}]",
            if ok { "pass" } else { "FAIL" }
        );
    }

    fn exit_code(&self, suite: &str) -> i32 {
        if self.failures == 0 {
            println!("{suite}: all checks passed");
            0
        } else {
            println!("{suite}: {} check(s) FAILED", self.failures);
            2
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let dims = parse_dims_arg(&args.dims)?;
    let base = LogBase::from(args.log_base);
    let trials = args.trials.max(1);
    let mut report = SuiteReport::new();

    match args.suite {
        Suite::Theorem1 => {
            println!("theorem1: uniform diagonal and C_R attainment at W = V F_d^dag");
            for &d in &dims {
                let f = fourier_matrix(d)?;
                let mut rng = RngStream::new(args.seed, d as u64);
                let mut diag_dev = 0.0_f64;
                let mut cr_dev = 0.0_f64;
                for _ in 0..trials {
                    let spectrum = random_spectrum(d, &mut rng)?;
                    let basis = sample_cue(d, &mut rng)?;
                    let rho = DensityMatrix::from_eigensystem(&spectrum, &basis)?;
                    let w = crate::hadamard::optimal_basis(&rho, &f)?;
                    let rep = coherence_in_basis(&rho, &w, base)?;
                    for &p in &rep.diagonal {
                        diag_dev = diag_dev.max((p - 1.0 / d as f64).abs());
                    }
                    let bound = crate::analytic::cr_max(&spectrum, base);
                    cr_dev = cr_dev.max((rep.c_r - bound).abs());
                }
                report.check(&format!("d={d} diagonal uniformity"), diag_dev, 1e-9);
                report.check(&format!("d={d} C_R attainment"), cr_dev, 1e-9);
            }
        }
        Suite::Stationarity => {
            println!("stationarity: first-order residual at the Fourier basis");
            for &d in &dims {
                let f = fourier_matrix(d)?;
                let mut rng = RngStream::new(args.seed, d as u64);
                let mut worst = 0.0_f64;
                for _ in 0..trials {
                    let spectrum = random_spectrum(d, &mut rng)?;
                    worst = worst.max(stationarity_residual(&spectrum, f.unitary())?);
                }
                report.check(&format!("d={d} residual"), worst, 1e-9);
            }
        }
        Suite::Circulant => {
            println!("circulant: structure of the Fourier-transformed state");
            for &d in &dims {
                let f = fourier_matrix(d)?;
                let mut rng = RngStream::new(args.seed, d as u64);
                let mut worst = 0.0_f64;
                for _ in 0..trials {
                    let spectrum = random_spectrum(d, &mut rng)?;
                    let theta = ThetaMatrix::new(&spectrum, f.unitary())?;
                    let (_, dev) = circulant_check(&theta);
                    worst = worst.max(dev);
                }
                report.check(&format!("d={d} circulant deviation"), worst, 1e-10);
            }
        }
        Suite::Bounds => {
            println!("bounds: C_R, C_l2 and C_l1 ceilings over sampled bases");
            let samples_per_state = 100;
            for &d in &dims {
                let mut rng = RngStream::new(args.seed, d as u64);
                let mut cr_excess: f64 = f64::NEG_INFINITY;
                let mut cl2_excess: f64 = f64::NEG_INFINITY;
                let mut cl1_excess: f64 = f64::NEG_INFINITY;
                for _ in 0..trials {
                    let spectrum = random_spectrum(d, &mut rng)?;
                    let cr_bound = crate::analytic::cr_max(&spectrum, base);
                    let cl2_bound = crate::analytic::cl2_max(&spectrum);
                    for _ in 0..samples_per_state {
                        let u = sample_cue(d, &mut rng)?;
                        cr_excess = cr_excess.max(
                            measure_value(&spectrum, &u, Measure::RelativeEntropy, base) - cr_bound,
                        );
                        cl2_excess = cl2_excess
                            .max(measure_value(&spectrum, &u, Measure::L2, base) - cl2_bound);
                        cl1_excess = cl1_excess.max(
                            measure_value(&spectrum, &u, Measure::L1, base) - (d as f64 - 1.0),
                        );
                    }
                }
                report.check(&format!("d={d} C_R excess"), cr_excess.max(0.0), 1e-9);
                report.check(&format!("d={d} C_l2 excess"), cl2_excess.max(0.0), 1e-9);
                report.check(&format!("d={d} C_l1 excess"), cl1_excess.max(0.0), 1e-9);
            }
        }
        Suite::Identities => {
            println!("identities: C_P = (d-1) C_F, O_d coincidences, closed forms, oracle");
            for &d in &dims {
                let f = fourier_matrix(d)?;
                let mut rng = RngStream::new(args.seed, d as u64);
                let mut cp_cf_dev = 0.0_f64;
                let mut oracle_dev = 0.0_f64;
                let mut coincidence_dev = 0.0_f64;
                let mut closed_dev = 0.0_f64;
                for _ in 0..trials {
                    let spectrum = random_spectrum(d, &mut rng)?;
                    let (c_p, c_f) = crate::analytic::c_p_c_f(&spectrum);
                    cp_cf_dev = cp_cf_dev.max((c_p - (d as f64 - 1.0) * c_f).abs());
                    let o = crate::analytic::o_d(&spectrum);
                    let rho = DensityMatrix::from_eigensystem(&spectrum, f.unitary())?;
                    oracle_dev = oracle_dev.max((o - crate::measures::l1_coherence(&rho)).abs());
                    if d == 2 || d == 3 {
                        coincidence_dev = coincidence_dev.max((o - c_p).abs());
                    }
                    if d == 3 {
                        closed_dev =
                            closed_dev.max((crate::analytic::o3_closed(&spectrum)? - o).abs());
                    }
                    if d == 4 {
                        closed_dev =
                            closed_dev.max((crate::analytic::o4_closed(&spectrum)? - o).abs());
                    }
                }
                report.check(&format!("d={d} C_P = (d-1) C_F"), cp_cf_dev, 1e-10);
                report.check(&format!("d={d} O_d vs matrix l1"), oracle_dev, 1e-9);
                if d == 2 || d == 3 {
                    report.check(&format!("d={d} O_d = C_P"), coincidence_dev, 1e-9);
                }
                if d == 3 || d == 4 {
                    report.check(&format!("d={d} closed form"), closed_dev, 1e-9);
                }
            }
        }
    }

    Ok(report.exit_code(&format!("{:?}", args.suite).to_lowercase()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_report_exit_codes() {
        let mut report = SuiteReport::new();
        report.check("within tolerance", 1e-12, 1e-9);
        assert_eq!(report.exit_code("demo"), 0);
        report.check("beyond tolerance", 1e-3, 1e-9);
        assert_eq!(report.exit_code("demo"), 2);
    }

    #[test]
    fn dims_argument_forms() {
        assert_eq!(parse_dims_arg("2..6").unwrap(), vec![2, 3, 4, 5, 6]);
        assert_eq!(parse_dims_arg("4").unwrap(), vec![4]);
        assert_eq!(parse_dims_arg("2,3,5").unwrap(), vec![2, 3, 5]);
        assert!(parse_dims_arg("6..2").is_err());
        assert!(parse_dims_arg("0").is_err());
        assert!(parse_dims_arg("x").is_err());
    }

    #[test]
    fn spectrum_argument_forms() {
        assert_eq!(parse_spectrum_arg("0.5, 0.3,0.2").unwrap(), vec![0.5, 0.3, 0.2]);
        assert!(parse_spectrum_arg("0.5,abc").is_err());
    }
}

#[derive(Serialize, Deserialize)]
struct LadderRow {
    samples: u64,
    best_value: f64,
    best_margin: f64,
    violation_count: u64,
}

fn run_preset_search(
    spectrum: &Spectrum,
    samples: u64,
    seed: u64,
    workers: usize,
    top_k: usize,
) -> Result<crate::search::SearchResult> {
    let config = SearchConfig {
        samples,
        seed,
        workers,
        top_k,
        log_base: LogBase::Two,
    };
    let reference = crate::analytic::o_d(spectrum);
    random_search(spectrum, Measure::L1, &config, reference)
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<i32> {
    let out = resolve_out_dir(args.out);
    ensure_dir(&out)?;
    match args.preset {
        Preset::Table1 => {
            let spectrum = Spectrum::new(vec![0.5, 0.3, 0.2])?;
            let reference = crate::analytic::o_d(&spectrum);
            println!("l1 search ladder at d = 3, reference O_3 = {reference:.9}");
            if args.max_exp < 2 {
                return Err(Error::Domain("--max-exp must be >= 2".into()));
            }
            let mut rows = Vec::new();
            let mut csv = String::from("samples,best_value,best_margin,violation_count\n");
            for exp in 2..=args.max_exp {
                let samples = 10u64.pow(exp);
                let result =
                    run_preset_search(&spectrum, samples, args.seed, args.workers, 10)?;
                println!(
                    "  10^{exp}: best {:.9}  margin {:+.3e}  violations {}",
                    result.best_value, result.best_margin, result.violation_count
                );
                csv.push_str(&format!(
                    "{},{:.16e},{:.16e},{}\n",
                    samples, result.best_value, result.best_margin, result.violation_count
                ));
                rows.push(LadderRow {
                    samples,
                    best_value: result.best_value,
                    best_margin: result.best_margin,
                    violation_count: result.violation_count,
                });
            }
            write_json(&out.join("table1.json"), &rows)?;
            fs::write(out.join("table1.csv"), csv)?;
            println!("wrote {}", out.join("table1.csv").display());
        }
        Preset::Fig1 | Preset::D5 => {
            let (name, spectrum) = match args.preset {
                Preset::Fig1 => ("fig1", Spectrum::new(vec![0.4, 0.3, 0.2, 0.1])?),
                _ => ("d5", Spectrum::new(vec![0.30, 0.25, 0.20, 0.15, 0.10])?),
            };
            let d = spectrum.dim();
            let samples = args.samples.unwrap_or(100_000);
            let analytic = analyze(&spectrum, LogBase::Two, TildeMode::Exhaustive)?;
            let result = run_preset_search(&spectrum, samples, args.seed, args.workers, 10)?;
            println!(
                "l1 search at d = {d}: {samples} samples, reference O_{d} = {:.9}",
                result.reference
            );
            println!(
                "best {:.9}  margin {:+.3e}  violations {}",
                result.best_value, result.best_margin, result.violation_count
            );
            for (i, v) in result.top_values.iter().enumerate() {
                let mark = if *v > result.reference { "  << exceeds O_d" } else { "" };
                println!("  top {:>2}: {v:.9}{mark}", i + 1);
            }
            let config = ExperimentConfig {
                dimension: d,
                spectrum: Some(spectrum.values().to_vec()),
                state_path: None,
                measure: Measure::L1,
                samples,
                seed: args.seed,
                workers: args.workers,
                log_base: LogBase::Two,
                top_k: 10,
            };
            let record = ResultRecord::new(config, analytic, &result);
            write_json(&out.join(format!("{name}.json")), &record)?;
            fs::write(out.join(format!("{name}.csv")), top_k_csv(&result))?;
            let title = format!("top 10 of {samples} samples (d = {d}, l1)");
            fs::write(
                out.join(format!("{name}.svg")),
                scatter_svg(&result.top_values, result.reference, &title),
            )?;
            println!("wrote {}", out.join(format!("{name}.json")).display());
        }
    }
    Ok(0)
}
