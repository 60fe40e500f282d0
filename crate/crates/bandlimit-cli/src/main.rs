//! Command-line front end for the limit-set pipelines.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use bandlimit::algebraic::subset_verbose;
use bandlimit::hausdorff::{certify, DEFAULT_REL_TOL, DEFAULT_SIDES};
use bandlimit::limitset::compute_sweep;
use bandlimit::spectrum::rho_bounds_verbose;
use bandlimit::{Error, LaurentSymbol, Region, RhoSampling, SweepConfig};

mod svg;

#[derive(Parser)]
#[command(
    name = "bandlimit",
    version,
    about = "Eigenvalue limit sets of banded Toeplitz matrices: polygons, guaranteed supersets, certified error bounds"
)]
struct Cli {
    /// Cap on worker threads used by parallel stages (default: all cores).
    #[arg(long, global = true, value_name = "COUNT")]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the scaling-radius interval outside which spectra stop cutting.
    Bounds(BoundsArgs),
    /// Emit certified limit-set points as CSV.
    Subset(SubsetArgs),
    /// Compute the approximating polygon; write Region JSON and optional SVG.
    Polygon(RegionArgs),
    /// Compute the guaranteed superset; write Region JSON and optional SVG.
    Superset(RegionArgs),
    /// Run the full pipeline and emit a certified error-bound JSON.
    Certify(CertifyArgs),
}

#[derive(Args)]
struct SymbolArg {
    /// Symbol JSON file: {"terms": [{"n": -4, "re": 1.0, "im": 0.0}, ...]}.
    #[arg(long, value_name = "PATH")]
    symbol: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    /// Total number of radius samples across all batches.
    #[arg(long, default_value_t = 500)]
    n: usize,

    /// Vertices per spectrum polygon.
    #[arg(long, default_value_t = 1000)]
    m: usize,

    /// Probe radii per area sweep (used when --sweeps > 1).
    #[arg(long, default_value_t = 250)]
    l: usize,

    /// Number of batches; 1 samples the whole interval in one pass.
    #[arg(long, default_value_t = 1)]
    sweeps: usize,

    /// Seed for the sweep-boundary jitter.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Spacing of radius samples across the interval.
    #[arg(long, value_enum, default_value_t = RhoSpacing::Uniform)]
    rho_sampling: RhoSpacing,

    /// How the curvature constant in the superset collar is bounded.
    #[arg(long, value_enum, default_value_t = CurvatureArg::Sampled)]
    cbound: CurvatureArg,
}

impl PipelineArgs {
    fn to_config(&self) -> SweepConfig {
        SweepConfig {
            n: self.n,
            m: self.m,
            l: self.l,
            sweeps: self.sweeps,
            seed: self.seed,
            rho_sampling: self.rho_sampling.into(),
            cbound: self.cbound.into(),
            ..SweepConfig::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RhoSpacing {
    /// Evenly spaced radii.
    Uniform,
    /// Evenly spaced reciprocals below 1, evenly spaced values above.
    Inverse,
}

impl From<RhoSpacing> for RhoSampling {
    fn from(v: RhoSpacing) -> Self {
        match v {
            RhoSpacing::Uniform => RhoSampling::Uniform,
            RhoSpacing::Inverse => RhoSampling::InverseBelowOne,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CurvatureArg {
    /// Certified analytic bound.
    Rigorous,
    /// Empirical bound from a dense sample, matching tuned runs.
    Sampled,
}

impl From<CurvatureArg> for bandlimit::CurvatureBound {
    fn from(v: CurvatureArg) -> Self {
        match v {
            CurvatureArg::Rigorous => bandlimit::CurvatureBound::Rigorous,
            CurvatureArg::Sampled => bandlimit::CurvatureBound::Sampled,
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Directory for output files; without it, JSON/CSV go to stdout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    symbol: SymbolArg,
}

#[derive(Args)]
struct SubsetArgs {
    #[command(flatten)]
    symbol: SymbolArg,

    /// Number of turn angles for the self-intersection candidates.
    #[arg(long, default_value_t = 1000)]
    phi_count: usize,

    /// Modulus-equality tolerance for the membership test.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,

    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct RegionArgs {
    #[command(flatten)]
    symbol: SymbolArg,

    #[command(flatten)]
    pipeline: PipelineArgs,

    #[command(flatten)]
    out: OutArgs,

    /// Also write an SVG figure (requires --out).
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    symbol: SymbolArg,

    #[command(flatten)]
    pipeline: PipelineArgs,

    /// Number of turn angles for the certified subset.
    #[arg(long, default_value_t = 1000)]
    phi_count: usize,

    /// Modulus-equality tolerance for the membership test.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,

    #[command(flatten)]
    out: OutArgs,
}

/// A failure ready for the shell: 1 for input problems, 2 for numerical ones.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Symbol(_) | Error::Domain(_) | Error::Parameter(_) | Error::Input(_) => 1,
            Error::RootConvergence { .. }
            | Error::RootArity { .. }
            | Error::Membership { .. }
            | Error::DegeneratePolynomial { .. }
            | Error::FrameOverflow { .. }
            | Error::Degenerate(_) => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_failure(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
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
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(input_failure("--threads must be at least 1"));
        }
        // Ignore "already initialized": only the first cap can win anyway.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match cli.cmd {
        Cmd::Bounds(a) => bounds(a),
        Cmd::Subset(a) => subset(a),
        Cmd::Polygon(a) => region_pipeline(a, Artifact::Polygon),
        Cmd::Superset(a) => region_pipeline(a, Artifact::Superset),
        Cmd::Certify(a) => run_certify(a),
    }
}

fn load_symbol(path: &Path) -> Result<LaurentSymbol, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))?;
    Ok(LaurentSymbol::from_json(&text)?)
}

fn report(warnings: &[String]) {
    for w in warnings {
        eprintln!("note: {w}");
    }
}

fn bounds(a: BoundsArgs) -> Result<(), Failure> {
    let b = load_symbol(&a.symbol.symbol)?;
    let (interval, warnings) = rho_bounds_verbose(&b)?;
    report(&warnings);
    println!("rho_l = {}", interval.lo);
    println!("rho_h = {}", interval.hi);
    Ok(())
}

fn subset(a: SubsetArgs) -> Result<(), Failure> {
    let b = load_symbol(&a.symbol.symbol)?;
    let (points, warnings) = subset_verbose(&b, a.phi_count, a.tol)?;
    report(&warnings);
    let csv = format!("re,im\n{}", points.to_csv());
    emit(&a.out, "subset.csv", &csv, None)
}

enum Artifact {
    Polygon,
    Superset,
}

fn region_pipeline(a: RegionArgs, which: Artifact) -> Result<(), Failure> {
    if a.svg && a.out.out.is_none() {
        return Err(input_failure("--svg needs --out to know where the figure goes"));
    }
    let b = load_symbol(&a.symbol.symbol)?;
    let result = compute_sweep(&b, &a.pipeline.to_config())?;
    report(&result.diagnostics.warnings);
    let (region, stem) = match which {
        Artifact::Polygon => (&result.polygon, "polygon"),
        Artifact::Superset => (&result.superset, "superset"),
    };
    let json = region_json(region)?;
    let figure = a.svg.then(|| svg::render(region));
    emit(&a.out, &format!("{stem}.json"), &json, figure.as_deref().map(|f| (stem, f)))
}

fn run_certify(a: CertifyArgs) -> Result<(), Failure> {
    let b = load_symbol(&a.symbol.symbol)?;
    let outcome = certify(
        &b,
        &a.pipeline.to_config(),
        a.phi_count,
        a.tol,
        DEFAULT_SIDES,
        DEFAULT_REL_TOL,
    )?;
    report(&outcome.warnings);
    let mut json = outcome.certificate.to_json();
    json.push('\n');
    emit(&a.out, "certificate.json", &json, None)
}

fn region_json(region: &Region) -> Result<String, Failure> {
    let mut json = serde_json::to_string_pretty(region)
        .map_err(|e| input_failure(format!("serializing region: {e}")))?;
    json.push('\n');
    Ok(json)
}

/// Writes `content` as `name` under --out, or to stdout when --out is
/// absent. `figure` carries an optional SVG body and its file stem.
fn emit(out: &OutArgs, name: &str, content: &str, figure: Option<(&str, &str)>) -> Result<(), Failure> {
    match &out.out {
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| input_failure(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join(name);
            fs::write(&path, content)
                .map_err(|e| input_failure(format!("cannot write {}: {e}", path.display())))?;
            if let Some((stem, body)) = figure {
                let path = dir.join(format!("{stem}.svg"));
                fs::write(&path, body)
                    .map_err(|e| input_failure(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
