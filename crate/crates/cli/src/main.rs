//! Command-line front end for the rate-function library: every subcommand
//! computes one result table and serializes it as CSV (default) or JSON.
//!
//! Exit codes: 0 on success, 2 when the request itself is invalid (unknown
//! family, parameter outside its domain, malformed grid, I/O failure), 3
//! when the computation fails numerically (no interior optimal level, not
//! enough tail events to fit a decay slope).

mod emit;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qldp_core::compare::{
    compare_mq_gmm_normal_scale, compare_mq_max_order, compare_mq_mm, figure1_data, figure2_data,
    weibull_rho0, CompareError,
};
use qldp_core::grid::GridSpec;
use qldp_core::lambda_opt::{
    counterexample_check, f1_max, lambda_tilde_1, lambda_tilde_2, optimal_lambda, LambdaOptError,
    SearchOptions,
};
use qldp_core::mc::{decay_rate, EstimatorKind, McError, SimPlan};
use qldp_core::mm_rate::{gmm_normal_scale_curve, MmContext};
use qldp_core::mq_rate::MqContext;
use qldp_core::{exec, make_family, EndpointG, FamilyId, FamilySpec, SymmetricBase, Table};
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process;

#[derive(Parser)]
#[command(
    name = "qldp",
    version,
    about = "Rate functions and speed-of-convergence verdicts for quantile and moment estimators",
    after_help = "\
Examples:
  qldp analyze --family pareto --theta0 1 --estimator mq --lambda 0.7968 --grid 0.2:3:281
  qldp optimal-lambda --family logistic-loc --s 1 --theta0 0
  qldp optimal-lambda --family gumbel-scale --theta0 1 --eta-grid -3:3:121
  qldp compare --family weibull-scale --rho 0.5 --theta0 1 --lambda 0.7968 --vs mm
  qldp figure 1 --out figure1.csv
  qldp figure 2 --out figure2.csv
  qldp simulate --family weibull-scale --rho 1 --theta0 1 --lambda 0.5 --eps 0.3 \\
      --ns 50,100,200,400,800 --reps 100000 --seed 1 --out decay.json
  qldp constants
  qldp counterexample --base normal --s 1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an estimator's rate function on a parameter grid.
    Analyze(AnalyzeArgs),
    /// Find the quantile level(s) with the largest curvature at theta0.
    OptimalLambda(OptimalLambdaArgs),
    /// Verdict: quantile method versus a rival estimator at theta0.
    Compare(CompareArgs),
    /// Rebuild one of the two documented figure datasets.
    Figure(FigureArgs),
    /// Monte Carlo estimate of the deviation-probability decay exponent.
    Simulate(SimulateArgs),
    /// Print the distinguished constants of the level analysis.
    Constants(ConstantsArgs),
    /// Check the flattened location family whose optimal level dips at 1/2.
    Counterexample(CounterexampleArgs),
}

#[derive(Debug)]
enum CliError {
    /// Bad request: unknown family, parameter outside its domain, flag
    /// combinations that make no sense, I/O failures.
    Validation(String),
    /// The computation itself failed (search or fit, not the request).
    Numerical(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) => write!(f, "{m}"),
        }
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Serialization of the result table.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl OutputArgs {
    fn emit(&self, table: &Table) -> Result<String, CliError> {
        emit_table(table, self.format, self.out.as_deref())
    }
}

fn emit_table(table: &Table, format: Format, out: Option<&Path>) -> Result<String, CliError> {
    let text = match format {
        Format::Csv => emit::csv_string(table),
        Format::Json => emit::json_string(table),
    };
    emit::write_text(&text, out).map_err(|e| validation(format!("cannot write output: {e}")))
}

/// Family kind named on the command line; fixed shape constants arrive
/// through the dedicated flags below.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    WeibullScale,
    NormalScale,
    CauchyScale,
    LogisticScale,
    GumbelScale,
    NormalLoc,
    CauchyLoc,
    LogisticLoc,
    GumbelLoc,
    SkewNormal,
    SkewCauchy,
    SkewLogistic,
    Pareto,
    RightEndpoint,
    Gtilde,
}

impl FamilyKind {
    fn kind_str(self) -> &'static str {
        match self {
            FamilyKind::WeibullScale => "weibull-scale",
            FamilyKind::NormalScale => "normal-scale",
            FamilyKind::CauchyScale => "cauchy-scale",
            FamilyKind::LogisticScale => "logistic-scale",
            FamilyKind::GumbelScale => "gumbel-scale",
            FamilyKind::NormalLoc => "normal-loc",
            FamilyKind::CauchyLoc => "cauchy-loc",
            FamilyKind::LogisticLoc => "logistic-loc",
            FamilyKind::GumbelLoc => "gumbel-loc",
            FamilyKind::SkewNormal => "skew-normal",
            FamilyKind::SkewCauchy => "skew-cauchy",
            FamilyKind::SkewLogistic => "skew-logistic",
            FamilyKind::Pareto => "pareto",
            FamilyKind::RightEndpoint => "right-endpoint",
            FamilyKind::Gtilde => "gtilde",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GKind {
    Identity,
    ExpMinusOne,
    Power,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseKind {
    Normal,
    Cauchy,
    Logistic,
}

#[derive(Args)]
struct FamilyArgs {
    /// Distribution family.
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Weibull shape (weibull-scale only).
    #[arg(long)]
    rho: Option<f64>,
    /// Location offset of a scale family (*-scale only).
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    /// Fixed scale of a location, skew or gtilde family.
    #[arg(long)]
    s: Option<f64>,
    /// Endpoint map of the right-endpoint family.
    #[arg(long, value_enum)]
    g: Option<GKind>,
    /// Exponent of the power endpoint map (right-endpoint --g power only).
    #[arg(long)]
    y: Option<f64>,
    /// Base of the flattened family (gtilde only).
    #[arg(long, value_enum)]
    base: Option<BaseKind>,
}

impl FamilyArgs {
    /// Rejects every shape flag the chosen kind ignores.
    fn reject_unused(&self, used: &[&str]) -> Result<(), CliError> {
        let given = [
            ("rho", self.rho.is_some()),
            ("eta", self.eta.is_some()),
            ("s", self.s.is_some()),
            ("g", self.g.is_some()),
            ("y", self.y.is_some()),
            ("base", self.base.is_some()),
        ];
        for (name, present) in given {
            if present && !used.contains(&name) {
                return Err(validation(format!(
                    "--{name} does not apply to {}",
                    self.family.kind_str()
                )));
            }
        }
        Ok(())
    }

    fn need(&self, value: Option<f64>, name: &str) -> Result<f64, CliError> {
        value.ok_or_else(|| validation(format!("{} needs --{name}", self.family.kind_str())))
    }

    fn build(&self) -> Result<FamilySpec, CliError> {
        let id = match self.family {
            FamilyKind::WeibullScale => {
                self.reject_unused(&["rho"])?;
                FamilyId::WeibullScale {
                    rho: self.need(self.rho, "rho")?,
                }
            }
            FamilyKind::NormalScale => {
                self.reject_unused(&["eta"])?;
                FamilyId::NormalScale {
                    eta: self.need(self.eta, "eta")?,
                }
            }
            FamilyKind::CauchyScale => {
                self.reject_unused(&["eta"])?;
                FamilyId::CauchyScale {
                    eta: self.need(self.eta, "eta")?,
                }
            }
            FamilyKind::LogisticScale => {
                self.reject_unused(&["eta"])?;
                FamilyId::LogisticScale {
                    eta: self.need(self.eta, "eta")?,
                }
            }
            FamilyKind::GumbelScale => {
                self.reject_unused(&["eta"])?;
                FamilyId::GumbelScale {
                    eta: self.need(self.eta, "eta")?,
                }
            }
            FamilyKind::NormalLoc => {
                self.reject_unused(&["s"])?;
                FamilyId::NormalLoc {
                    s: self.need(self.s, "s")?,
                }
            }
            FamilyKind::CauchyLoc => {
                self.reject_unused(&["s"])?;
                FamilyId::CauchyLoc {
                    s: self.need(self.s, "s")?,
                }
            }
            FamilyKind::LogisticLoc => {
                self.reject_unused(&["s"])?;
                FamilyId::LogisticLoc {
                    s: self.need(self.s, "s")?,
                }
            }
            FamilyKind::GumbelLoc => {
                self.reject_unused(&["s"])?;
                FamilyId::GumbelLoc {
                    s: self.need(self.s, "s")?,
                }
            }
            FamilyKind::SkewNormal => {
                self.reject_unused(&["s"])?;
                FamilyId::SkewNormal {
                    s: self.need(self.s, "s")?,
                }
            }
            FamilyKind::SkewCauchy => {
                self.reject_unused(&["s"])?;
                FamilyId::SkewCauchy {
                    s: self.need(self.s, "s")?,
                }
            }
            FamilyKind::SkewLogistic => {
                self.reject_unused(&["s"])?;
                FamilyId::SkewLogistic {
                    s: self.need(self.s, "s")?,
                }
            }
            FamilyKind::Pareto => {
                self.reject_unused(&[])?;
                FamilyId::Pareto
            }
            FamilyKind::RightEndpoint => {
                self.reject_unused(&["g", "y"])?;
                let g = match self.g {
                    None => return Err(validation("right-endpoint needs --g")),
                    Some(GKind::Power) => EndpointG::Power {
                        y: self.need(self.y, "y")?,
                    },
                    Some(plain) => {
                        if self.y.is_some() {
                            return Err(validation("--y applies only to --g power"));
                        }
                        match plain {
                            GKind::Identity => EndpointG::Identity,
                            GKind::ExpMinusOne => EndpointG::ExpMinusOne,
                            GKind::Power => unreachable!(),
                        }
                    }
                };
                FamilyId::RightEndpoint { g }
            }
            FamilyKind::Gtilde => {
                self.reject_unused(&["base", "s"])?;
                let base = match self.base {
                    None => return Err(validation("gtilde needs --base")),
                    Some(BaseKind::Normal) => SymmetricBase::Normal,
                    Some(BaseKind::Cauchy) => SymmetricBase::Cauchy,
                    Some(BaseKind::Logistic) => SymmetricBase::Logistic,
                };
                FamilyId::GTilde {
                    base,
                    s: self.need(self.s, "s")?,
                }
            }
        };
        make_family(id).map_err(|e| validation(e.to_string()))
    }

    /// The chosen kind with the offset taken from an η grid instead of
    /// --eta; only the scale families qualify.
    fn build_scale_with(&self, eta: f64) -> Result<FamilySpec, CliError> {
        let id = match self.family {
            FamilyKind::NormalScale => FamilyId::NormalScale { eta },
            FamilyKind::CauchyScale => FamilyId::CauchyScale { eta },
            FamilyKind::LogisticScale => FamilyId::LogisticScale { eta },
            FamilyKind::GumbelScale => FamilyId::GumbelScale { eta },
            other => {
                return Err(validation(format!(
                    "--eta-grid applies to the scale families, not {}",
                    other.kind_str()
                )))
            }
        };
        make_family(id).map_err(|e| validation(e.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Estimator {
    /// Quantile method at a fixed level.
    Mq,
    /// Mean (first-moment) estimator.
    Mm,
    /// Second-moment estimator of the normal scale family.
    Gmm,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// True parameter value.
    #[arg(long, allow_hyphen_values = true)]
    theta0: f64,
    #[arg(long, value_enum, default_value_t = Estimator::Mq)]
    estimator: Estimator,
    /// Quantile level in (0, 1) (estimator mq only).
    #[arg(long)]
    lambda: Option<f64>,
    /// Evaluation grid for theta, as start:stop:count (inclusive).
    #[arg(long, allow_hyphen_values = true)]
    grid: GridSpec,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OptimalLambdaArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// True parameter value.
    #[arg(long, allow_hyphen_values = true)]
    theta0: f64,
    /// Tabulate the optimal level across this offset grid instead of a
    /// single --eta (scale families only).
    #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
    eta_grid: Option<GridSpec>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rival {
    /// Mean (first-moment) estimator.
    Mm,
    /// Second-moment estimator of the normal scale family.
    Gmm,
    /// Sample maximum of a right-endpoint family.
    #[value(alias = "max-order")]
    Ml,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// True parameter value.
    #[arg(long, allow_hyphen_values = true)]
    theta0: f64,
    /// Rival estimator.
    #[arg(long, value_enum)]
    vs: Rival,
    /// Quantile level in (0, 1) (--vs mm and --vs ml; the gmm comparison
    /// fixes its own optimal level).
    #[arg(long)]
    lambda: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FigureArgs {
    /// Which figure dataset: 1 (curvature panorama) or 2 (crossing rates).
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    which: u8,
    /// True parameter value (figure 1 only; figure 2 fixes theta0 = 1).
    #[arg(long)]
    theta0: Option<f64>,
    /// Overrides the default grid (eta for figure 1, theta for figure 2).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimEstimator {
    Mq,
    Mm,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// True parameter value.
    #[arg(long, allow_hyphen_values = true)]
    theta0: f64,
    #[arg(long, value_enum, default_value_t = SimEstimator::Mq)]
    estimator: SimEstimator,
    /// Quantile level in (0, 1) (estimator mq only).
    #[arg(long)]
    lambda: Option<f64>,
    /// Deviation threshold: count estimates with |estimate - theta0| >= eps.
    #[arg(long)]
    eps: f64,
    /// Comma-separated sample sizes, e.g. 50,100,200,400,800.
    #[arg(long, value_delimiter = ',', required = true)]
    ns: Vec<usize>,
    /// Replications per sample size.
    #[arg(long, default_value_t = 100_000)]
    reps: usize,
    /// Seed of the deterministic generator.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the JSON report to this path (extension forced to .json) and
    /// the per-n table next to it with extension .csv; stdout gets the JSON
    /// report when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstantsArgs {
    /// Emit a machine-readable table instead of name = value lines.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    /// Symmetric base family to flatten.
    #[arg(long, value_enum, default_value_t = BaseKind::Normal)]
    base: BaseKind,
    /// Fixed scale of the base.
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() {
    // honor the optional thread-count hint before any parallel work starts
    if let Ok(v) = std::env::var("QLDP_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = exec::configure_threads(n);
            }
            _ => eprintln!("warning: ignoring QLDP_THREADS = {v:?} (want a positive integer)"),
        }
    }
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        process::exit(e.code());
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze(a) => run_analyze(a),
        Command::OptimalLambda(a) => run_optimal_lambda(a),
        Command::Compare(a) => run_compare(a),
        Command::Figure(a) => run_figure(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Constants(a) => run_constants(a),
        Command::Counterexample(a) => run_counterexample(a),
    }
}

/// The grid is ascending, so its endpoints decide domain membership.
fn check_grid_in_domain(family: &FamilySpec, grid: &GridSpec) -> Result<(), CliError> {
    let dom = family.theta_domain();
    if !(dom.contains(grid.start) && dom.contains(grid.stop)) {
        return Err(validation(format!(
            "grid [{}, {}] leaves the parameter domain {} of {}",
            grid.start,
            grid.stop,
            dom,
            family.name()
        )));
    }
    Ok(())
}

fn run_analyze(a: AnalyzeArgs) -> Result<(), CliError> {
    let family = a.family.build()?;
    check_grid_in_domain(&family, &a.grid)?;
    let thetas = a.grid.to_vec();
    let curve = match a.estimator {
        Estimator::Mq => {
            let lambda = a
                .lambda
                .ok_or_else(|| validation("estimator mq needs --lambda"))?;
            MqContext::new(family, a.theta0, lambda)
                .map_err(|e| validation(e.to_string()))?
                .rate_curve(&thetas)
        }
        Estimator::Mm => {
            if a.lambda.is_some() {
                return Err(validation("--lambda applies only to estimator mq"));
            }
            MmContext::new(family, a.theta0)
                .map_err(|e| validation(e.to_string()))?
                .rate_curve(&thetas)
        }
        Estimator::Gmm => {
            if a.lambda.is_some() {
                return Err(validation("--lambda applies only to estimator mq"));
            }
            let FamilyId::NormalScale { eta } = family.id else {
                return Err(validation("estimator gmm applies only to normal-scale"));
            };
            if !family.theta_domain().contains(a.theta0) {
                return Err(validation(format!(
                    "theta0 = {} outside the parameter domain of {}",
                    a.theta0,
                    family.name()
                )));
            }
            gmm_normal_scale_curve(eta, a.theta0, &thetas)
        }
    };
    let mut table = curve.to_table();
    // the analyze output names its single value column "rate"; which
    // estimator produced it is recorded in the metadata
    let last = table.columns.len() - 1;
    table.columns[last] = "rate".into();
    let dest = a.output.emit(&table)?;
    eprintln!(
        "analyze: {} rows for {} -> {dest}",
        table.rows.len(),
        family.name()
    );
    Ok(())
}

fn map_lambda_opt_err(e: LambdaOptError) -> CliError {
    match e {
        LambdaOptError::NoInteriorMaximizer { .. } => CliError::Numerical(e.to_string()),
        LambdaOptError::Mq(inner) => validation(inner.to_string()),
    }
}

fn run_optimal_lambda(a: OptimalLambdaArgs) -> Result<(), CliError> {
    let opts = SearchOptions::default();
    match a.eta_grid {
        None => {
            let family = a.family.build()?;
            let best = optimal_lambda(&family, a.theta0, &opts).map_err(map_lambda_opt_err)?;
            let table = best.to_table();
            let dest = a.output.emit(&table)?;
            let levels: Vec<String> = best.maximizers.iter().map(|m| format!("{m:.6}")).collect();
            eprintln!(
                "optimal-lambda: {} at lambda = [{}], curvature {:.6e} -> {dest}",
                family.name(),
                levels.join(", "),
                best.curvature
            );
            Ok(())
        }
        Some(grid) => {
            if a.family.eta.is_some() {
                return Err(validation("--eta and --eta-grid are mutually exclusive"));
            }
            a.family.reject_unused(&["eta"])?;
            let mut table = Table::new(vec!["eta", "lambda_max", "curvature"]);
            table.push_meta("family", a.family.family.kind_str());
            table.push_meta("theta0", &format!("{}", a.theta0));
            table.push_meta(
                "eta_grid",
                &format!("{}:{}:{}", grid.start, grid.stop, grid.count),
            );
            for eta in grid.to_vec() {
                let family = a.family.build_scale_with(eta)?;
                let best = optimal_lambda(&family, a.theta0, &opts).map_err(map_lambda_opt_err)?;
                for &m in &best.maximizers {
                    table.push_row(vec![eta, m, best.curvature]);
                }
            }
            let dest = a.output.emit(&table)?;
            eprintln!(
                "optimal-lambda: {} maximizer rows over {} offsets -> {dest}",
                table.rows.len(),
                grid.count
            );
            Ok(())
        }
    }
}

fn map_compare_err(e: CompareError) -> CliError {
    match e {
        CompareError::LambdaOpt(inner) => map_lambda_opt_err(inner),
        other => validation(other.to_string()),
    }
}

fn run_compare(a: CompareArgs) -> Result<(), CliError> {
    let family = a.family.build()?;
    let need_lambda = || {
        a.lambda
            .ok_or_else(|| validation("--vs mm and --vs ml need --lambda"))
    };
    let cmp = match a.vs {
        Rival::Mm => compare_mq_mm(&family, a.theta0, need_lambda()?),
        Rival::Ml => compare_mq_max_order(&family, a.theta0, need_lambda()?),
        Rival::Gmm => {
            if a.lambda.is_some() {
                return Err(validation(
                    "--vs gmm compares at the optimal level; --lambda does not apply",
                ));
            }
            let FamilyId::NormalScale { eta } = family.id else {
                return Err(validation("--vs gmm applies only to normal-scale"));
            };
            compare_mq_gmm_normal_scale(eta, a.theta0)
        }
    }
    .map_err(map_compare_err)?;
    let dest = a.output.emit(&cmp.to_table())?;
    eprintln!(
        "compare: {} ({}) -> {dest}",
        cmp.verdict_name(),
        cmp.rationale
    );
    Ok(())
}

fn run_figure(a: FigureArgs) -> Result<(), CliError> {
    let table = match a.which {
        1 => {
            let theta0 = a.theta0.unwrap_or(1.0);
            if !(theta0 > 0.0 && theta0.is_finite()) {
                return Err(validation(format!("theta0 = {theta0} must be positive")));
            }
            let grid = a.grid.unwrap_or(GridSpec {
                start: -3.0,
                stop: 3.0,
                count: 121,
            });
            figure1_data(theta0, &grid.to_vec())
        }
        2 => {
            if a.theta0.is_some() {
                return Err(validation("figure 2 fixes theta0 = 1"));
            }
            let grid = a.grid.unwrap_or(GridSpec {
                start: 0.85,
                stop: 1.15,
                count: 301,
            });
            if !(grid.start > 0.0) {
                return Err(validation("figure 2 needs a positive theta grid"));
            }
            figure2_data(&grid.to_vec())
        }
        _ => unreachable!("clap restricts the range"),
    };
    let dest = a.output.emit(&table)?;
    eprintln!("figure {}: {} rows -> {dest}", a.which, table.rows.len());
    Ok(())
}

fn run_simulate(a: SimulateArgs) -> Result<(), CliError> {
    let family = a.family.build()?;
    let (estimator, lambda) = match a.estimator {
        SimEstimator::Mq => (
            EstimatorKind::Mq,
            a.lambda
                .ok_or_else(|| validation("estimator mq needs --lambda"))?,
        ),
        SimEstimator::Mm => {
            if a.lambda.is_some() {
                return Err(validation("--lambda applies only to estimator mq"));
            }
            // inert placeholder; the mean estimator never reads the level
            (EstimatorKind::Mm, 0.5)
        }
    };
    let plan = SimPlan {
        family,
        theta0: a.theta0,
        lambda,
        estimator,
        ns: a.ns.clone(),
        reps: a.reps,
        eps: a.eps,
        seed: a.seed,
    };
    let est = decay_rate(&plan).map_err(|e| match e {
        McError::InvalidPlan(m) => validation(m),
        other => CliError::Numerical(other.to_string()),
    })?;
    let table = est.to_table();
    let dest = match &a.out {
        Some(path) => {
            let json_path = path.with_extension("json");
            let csv_path = path.with_extension("csv");
            emit_table(&table, Format::Json, Some(&json_path))?;
            emit_table(&table, Format::Csv, Some(&csv_path))?;
            format!("{} and {}", json_path.display(), csv_path.display())
        }
        None => emit_table(&table, Format::Json, None)?,
    };
    eprintln!(
        "simulate: slope {:.6}, predicted {:.6}, relative gap {:.3} ({} of {} cells fitted) -> {dest}",
        est.slope,
        est.predicted,
        est.relative_gap,
        est.used,
        est.cells.len()
    );
    Ok(())
}

fn distinguished_constants() -> [(&'static str, f64); 5] {
    [
        ("lambda_tilde_1", lambda_tilde_1()),
        ("lambda_tilde_2", lambda_tilde_2()),
        ("weibull_rho0", weibull_rho0()),
        ("f1_at_lambda_tilde_1", f1_max()),
        ("gumbel_loc_mm_curvature", 6.0 / (PI * PI)),
    ]
}

fn run_constants(a: ConstantsArgs) -> Result<(), CliError> {
    let values = distinguished_constants();
    let dest = match a.format {
        None => {
            let mut text = String::new();
            for (name, v) in values {
                text.push_str(&format!("{name} = {v:.10}\n"));
            }
            emit::write_text(&text, a.out.as_deref())
                .map_err(|e| validation(format!("cannot write output: {e}")))?
        }
        Some(format) => {
            let mut table = Table::new(values.iter().map(|(n, _)| *n).collect::<Vec<_>>());
            table.push_row(values.iter().map(|&(_, v)| v).collect());
            emit_table(&table, format, a.out.as_deref())?
        }
    };
    eprintln!("constants: {} values -> {dest}", values.len());
    Ok(())
}

fn run_counterexample(a: CounterexampleArgs) -> Result<(), CliError> {
    let base_id = match a.base {
        BaseKind::Normal => FamilyId::NormalLoc { s: a.s },
        BaseKind::Cauchy => FamilyId::CauchyLoc { s: a.s },
        BaseKind::Logistic => FamilyId::LogisticLoc { s: a.s },
    };
    let base = make_family(base_id).map_err(|e| validation(e.to_string()))?;
    let report = counterexample_check(&base).map_err(|e| validation(e.to_string()))?;
    let passed = report.passed();
    let dest = a.output.emit(&report.to_table())?;
    eprintln!(
        "counterexample: passed = {passed}, window density {:.6}, curvature at 1/2: flattened {:.6} vs base {:.6} -> {dest}",
        report.window_density, report.gtilde_curv_at_half, report.base_curv_at_half
    );
    Ok(())
}
