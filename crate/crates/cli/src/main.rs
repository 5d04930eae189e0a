//! `nnts-axial`: fit, compare and simulate axial NNTS models from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use nnts_axial::inference::{
    homogeneity_from_logliks, homogeneity_test, lrt, nested_test, scan_models, symmetry_test, uniformity_test,
    LrtReport, ModelScan, TestKind,
};
use nnts_axial::io::{
    density_grid, fit_document, fit_warnings, format_angles, grid_csv, load_angles, load_params, moments_document,
    scan_document, scan_table, test_document, Convention, DatasetSpec,
};
use nnts_axial::{fit_general, fit_symmetric, AngleUnit, ErrorClass, Fit, FitOptions, Sample, FORMAT_VERSION};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

const GRAD_TOL_RATIO: f64 = 10.0;

#[derive(Parser)]
#[command(name = "nnts-axial", about = "Axial NNTS density models for undirected angles on [0, pi)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one model and print its fit document
    Fit(FitArgs),
    /// Fit M = 0..=m-max and tabulate log-likelihood, BIC and AIC
    Scan(ScanArgs),
    /// Likelihood-ratio tests
    #[command(subcommand)]
    Test(TestCommand),
    /// Density and CDF on a uniform grid over [0, pi), as CSV
    Density {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 360)]
        grid: usize,
    },
    /// Trigonometric moments r = 0..=max-r and summary statistics
    Moments {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_r: usize,
    },
    /// Draw an angle file (radians) from a parameter document
    Sample {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitArg {
    Radians,
    Degrees,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    AxialModPi,
    LeafDouble,
    #[value(name = "raw-0-pi")]
    Raw0Pi,
}

#[derive(Args)]
struct DataArgs {
    #[arg(long, value_enum, default_value_t = UnitArg::Radians)]
    unit: UnitArg,
    #[arg(long, value_enum, default_value_t = ConventionArg::AxialModPi)]
    convention: ConventionArg,
}

impl DataArgs {
    fn load(&self, path: &Path) -> Result<Sample> {
        let unit = match self.unit {
            UnitArg::Radians => AngleUnit::Radians,
            UnitArg::Degrees => AngleUnit::Degrees,
        };
        let convention = match self.convention {
            ConventionArg::AxialModPi => Convention::AxialModPi,
            ConventionArg::LeafDouble => Convention::LeafDouble,
            ConventionArg::Raw0Pi => Convention::Raw0Pi,
        };
        load_angles(&DatasetSpec::new(path, unit, convention))
            .with_context(|| format!("reading {}", path.display()))
    }
}

#[derive(Args)]
struct OptimizerArgs {
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Convergence tolerance: relative log-likelihood change; the gradient
    /// criterion uses ten times this value
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

impl OptimizerArgs {
    fn options(&self) -> FitOptions {
        FitOptions {
            restarts: self.restarts,
            seed: self.seed,
            tol_rel: self.tol,
            tol_grad: GRAD_TOL_RATIO * self.tol,
            ..FitOptions::default()
        }
    }
}

#[derive(Args)]
struct FitArgs {
    input: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    symmetric: bool,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    opt: OptimizerArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanFormat {
    Json,
    Table,
}

#[derive(Args)]
struct ScanArgs {
    input: PathBuf,
    #[arg(long)]
    m_max: usize,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    opt: OptimizerArgs,
    #[arg(long, value_enum, default_value_t = ScanFormat::Json)]
    format: ScanFormat,
}

#[derive(Subcommand)]
enum TestCommand {
    /// Uniform model against the general model of order --m
    Uniformity(SingleTestArgs),
    /// Symmetric against general model at order --m (M >= 2)
    Symmetry(SingleTestArgs),
    /// Order --m-restricted against order --m
    Nested {
        #[command(flatten)]
        common: SingleTestArgs,
        #[arg(long)]
        m_restricted: usize,
    },
    /// Same density in every population against one density per population
    Homogeneity(HomogeneityArgs),
}

#[derive(Args)]
struct SingleTestArgs {
    /// Angle file; not needed with --from-logliks
    #[arg(long, required_unless_present = "from_logliks")]
    input: Option<PathBuf>,
    #[arg(long)]
    m: usize,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    opt: OptimizerArgs,
    /// Skip fitting and use reported log-likelihoods: "restricted,general"
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    from_logliks: Option<Vec<f64>>,
}

#[derive(Args)]
struct HomogeneityArgs {
    /// One angle file per population; repeat the flag
    #[arg(long)]
    input: Vec<PathBuf>,
    /// Order per population, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    m_per: Vec<usize>,
    #[arg(long)]
    m_pooled: usize,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    opt: OptimizerArgs,
    /// Skip fitting: population log-likelihoods followed by the pooled one
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    from_logliks: Option<Vec<f64>>,
}

/// What a command printed, plus whether every start of some fit failed to converge.
struct Outcome {
    report: String,
    out: Option<PathBuf>,
    all_starts_failed: bool,
}

impl Outcome {
    fn stdout(report: String) -> Self {
        Self {
            report,
            out: None,
            all_starts_failed: false,
        }
    }
}

fn none_converged(fits: &[&Fit]) -> bool {
    fits.iter().any(|f| f.converged_starts == 0)
}

fn warn_fit(fit: &Fit) {
    for w in fit_warnings(fit) {
        eprintln!("warning: {w}");
    }
}

fn cmd_fit(a: &FitArgs) -> Result<Outcome> {
    let sample = a.data.load(&a.input)?;
    let opts = a.opt.options();
    let fit = if a.symmetric {
        fit_symmetric(&sample, a.m, &opts)?
    } else {
        fit_general(&sample, a.m, &opts)?
    };
    warn_fit(&fit);
    Ok(Outcome {
        report: fit_document(&fit),
        out: a.out.clone(),
        all_starts_failed: none_converged(&[&fit]),
    })
}

fn cmd_scan(a: &ScanArgs) -> Result<Outcome> {
    let sample = a.data.load(&a.input)?;
    let scan: ModelScan = scan_models(&sample, a.m_max, &a.opt.options())?;
    for fit in &scan.fits {
        warn_fit(fit);
    }
    let report = match a.format {
        ScanFormat::Json => scan_document(&scan),
        ScanFormat::Table => scan_table(&scan),
    };
    let fits: Vec<&Fit> = scan.fits.iter().collect();
    Ok(Outcome {
        report,
        out: None,
        all_starts_failed: none_converged(&fits),
    })
}

fn report_only(result: nnts_axial::inference::LrtResult) -> LrtReport {
    LrtReport {
        result,
        restricted: Vec::new(),
        general: Vec::new(),
    }
}

fn pair(logliks: &[f64]) -> Result<(f64, f64)> {
    match logliks {
        [r, g] => Ok((*r, *g)),
        _ => Err(nnts_axial::Error::Usage("--from-logliks takes exactly two values: restricted,general".into()).into()),
    }
}

fn single_test(
    a: &SingleTestArgs,
    kind: TestKind,
    df: usize,
    run: impl FnOnce(&Sample, &FitOptions) -> nnts_axial::Result<LrtReport>,
) -> Result<LrtReport> {
    if let Some(ll) = &a.from_logliks {
        let (r, g) = pair(ll)?;
        return Ok(report_only(lrt(r, g, df, kind)?));
    }
    let input = a.input.as_ref().ok_or_else(|| anyhow!("--input is required"))?;
    let sample = a.data.load(input)?;
    Ok(run(&sample, &a.opt.options())?)
}

fn cmd_test(t: &TestCommand) -> Result<Outcome> {
    let report = match t {
        TestCommand::Uniformity(a) => {
            if a.m == 0 {
                bail!(nnts_axial::Error::Usage("uniformity test needs --m >= 1".into()));
            }
            single_test(a, TestKind::Uniformity, 2 * a.m, |s, o| uniformity_test(s, a.m, o))?
        }
        TestCommand::Symmetry(a) => {
            if a.m < 2 {
                bail!(nnts_axial::Error::Usage(format!("symmetry test needs --m >= 2 (df = M - 1 = 0 at M = {})", a.m)));
            }
            single_test(a, TestKind::Symmetry, a.m - 1, |s, o| symmetry_test(s, a.m, o))?
        }
        TestCommand::Nested { common, m_restricted } => {
            if *m_restricted >= common.m {
                bail!(nnts_axial::Error::Usage("nested test needs --m-restricted < --m".into()));
            }
            let df = 2 * (common.m - m_restricted);
            single_test(common, TestKind::Nested, df, |s, o| nested_test(s, *m_restricted, common.m, o))?
        }
        TestCommand::Homogeneity(a) => homogeneity(a)?,
    };
    let mut fits: Vec<&Fit> = report.restricted.iter().collect();
    fits.extend(report.general.iter());
    for f in &fits {
        warn_fit(f);
    }
    Ok(Outcome {
        all_starts_failed: none_converged(&fits),
        report: test_document(&report),
        out: None,
    })
}

fn homogeneity(a: &HomogeneityArgs) -> Result<LrtReport> {
    if let Some(ll) = &a.from_logliks {
        let Some((pooled, pops)) = ll.split_last() else {
            bail!(nnts_axial::Error::Usage("--from-logliks is empty".into()));
        };
        if pops.len() != a.m_per.len() {
            bail!(nnts_axial::Error::Usage(format!(
                "--from-logliks needs {} population values plus the pooled value",
                a.m_per.len()
            )));
        }
        return Ok(report_only(homogeneity_from_logliks(pops, &a.m_per, *pooled, a.m_pooled)?));
    }
    if a.input.len() != a.m_per.len() {
        bail!(nnts_axial::Error::Usage(format!(
            "{} inputs but {} orders in --m-per",
            a.input.len(),
            a.m_per.len()
        )));
    }
    let samples = a.input.iter().map(|p| a.data.load(p)).collect::<Result<Vec<_>>>()?;
    Ok(homogeneity_test(&samples, &a.m_per, a.m_pooled, &a.opt.options())?)
}

fn read_params(path: &Path) -> Result<nnts_axial::AxialParams> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let params = load_params(&text).with_context(|| format!("loading {}", path.display()))?;
    Ok(params.general())
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Test(t) => cmd_test(t),
        Command::Density { params, grid } => {
            let p = read_params(params)?;
            Ok(Outcome::stdout(grid_csv(&density_grid(&p, *grid)?)))
        }
        Command::Moments { params, max_r } => Ok(Outcome::stdout(moments_document(&read_params(params)?, *max_r))),
        Command::Sample { params, n, seed, out } => {
            let p = read_params(params)?;
            let s = p.sample(*n, *seed)?;
            let header = format!("{n} angles in radians on [0, pi), seed {seed}");
            Ok(Outcome {
                report: format_angles(&s, Some(&header)),
                out: out.clone(),
                all_starts_failed: false,
            })
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<nnts_axial::Error>() {
            return match e.class() {
                ErrorClass::Usage => EXIT_USAGE,
                ErrorClass::Data => EXIT_DATA,
                ErrorClass::Numerical => EXIT_NUMERICAL,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return EXIT_DATA;
        }
    }
    EXIT_DATA
}

fn main() -> ExitCode {
    let version: &'static str =
        Box::leak(format!("{} (document format {FORMAT_VERSION})", env!("CARGO_PKG_VERSION")).into_boxed_str());
    let matches = match Cli::command().version(version).try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            match &outcome.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &outcome.report) {
                        eprintln!("error: writing {}: {e}", path.display());
                        return ExitCode::from(EXIT_DATA);
                    }
                }
                None => print!("{}", outcome.report),
            }
            if outcome.all_starts_failed {
                eprintln!("error: no optimizer start converged; raise --restarts or loosen --tol");
                return ExitCode::from(EXIT_NUMERICAL);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_exit_codes() {
        let usage = anyhow::Error::from(nnts_axial::Error::Usage("x".into()));
        let data = anyhow::Error::from(nnts_axial::Error::Parse { line: 3, msg: "x".into() }).context("reading f");
        let numerical = anyhow::Error::from(nnts_axial::Error::Numerical("x".into()));
        let io = anyhow::Error::from(std::io::Error::from(std::io::ErrorKind::NotFound));
        assert_eq!(exit_code(&usage), EXIT_USAGE);
        assert_eq!(exit_code(&data), EXIT_DATA);
        assert_eq!(exit_code(&numerical), EXIT_NUMERICAL);
        assert_eq!(exit_code(&io), EXIT_DATA);
    }

    #[test]
    fn non_convergence_is_detected() {
        let s = Sample::from_radians_mod_pi((0..40).map(|i| i as f64 * 0.07)).unwrap();
        let opts = FitOptions {
            max_iterations: 1,
            tol_rel: 1e-300,
            tol_grad: 1e-300,
            restarts: 2,
            ..FitOptions::default()
        };
        let fit = fit_general(&s, 3, &opts).unwrap();
        assert!(none_converged(&[&fit]));
        let closed = fit_general(&s, 0, &opts).unwrap();
        assert!(!none_converged(&[&closed]));
    }
}
