//! Command-line front end. Exit status: 0 on success, 1 for invalid input,
//! 2 for numerical trouble or a failed `--check`.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use aoi_core::analytic::{aoi_basic_exact, aoi_homogeneous, aoi_hybrid_exact, AoiResult};
use aoi_core::optimizer::{
    aoi_surface, optimal_deployments, threshold_interval, DeploymentEvaluator,
};
use aoi_core::shs::{build_basic_model, build_hybrid_model, closed_form_check, solve};
use aoi_core::sim::{BaselineDescriptor, BaselineKind, Horizon, SimConfig, SimResult};
use aoi_core::{SystemConfig, Variant};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::ConfigFile;
use crate::dump::ModelDump;
use crate::error::{AppError, Result};
use crate::fit::loglog_slope;
use crate::golden::{self, GoldenTables};
use crate::parallel;
use crate::report::{Cell, Format, Report};
use crate::trace::TraceWriter;

/// Largest closed-form vs SHS relative gap accepted by `--check`.
pub const SHS_CHECK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "aoi",
    version,
    about = "Average age of information of zero-wait multi-device systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form average AoI.
    Analytic(AnalyticArgs),
    /// Build and solve the hybrid-system linear equations.
    Shs(ShsArgs),
    /// Discrete-event simulation of the system or of a queueing baseline.
    Simulate(SimulateArgs),
    /// Closed form, linear solve and simulation side by side.
    Compare(CompareArgs),
    /// Plot-ready AoI curves over N or λ.
    Sweep(SweepArgs),
    /// Cheapest-AoI mix of type-1 and type-2 devices under a budget.
    Optimize(OptimizeArgs),
    /// Regenerate the ratio tables.
    Tables(TablesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// JSON system configuration.
    #[arg(long, conflicts_with_all = ["n", "mu", "mu_each", "m", "lambda", "lambda_each"])]
    pub config: Option<PathBuf>,
    /// Number of type-1 devices.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated type-1 service rates.
    #[arg(long, value_delimiter = ',', conflicts_with = "mu_each")]
    pub mu: Option<Vec<f64>>,
    /// Common type-1 service rate.
    #[arg(long)]
    pub mu_each: Option<f64>,
    /// Number of type-2 devices.
    #[arg(long)]
    pub m: Option<usize>,
    /// Comma-separated type-2 arrival rates.
    #[arg(long, value_delimiter = ',', conflicts_with = "lambda_each")]
    pub lambda: Option<Vec<f64>>,
    /// Common type-2 arrival rate; implies `--m 1` when `--m` is absent.
    #[arg(long)]
    pub lambda_each: Option<f64>,
    /// Write the resolved configuration as JSON.
    #[arg(long)]
    pub save_config: Option<PathBuf>,
}

impl SystemArgs {
    pub fn config_file(&self) -> Result<ConfigFile> {
        if let Some(path) = &self.config {
            return ConfigFile::load(path);
        }
        let n_type1 = match (self.n, &self.mu) {
            (Some(n), _) => n,
            (None, Some(mu)) => mu.len(),
            (None, None) => return Err(AppError::Usage("give --config, --n or --mu".into())),
        };
        let m_type2 = match (self.m, &self.lambda, self.lambda_each) {
            (Some(m), _, _) => m,
            (None, Some(l), _) => l.len(),
            (None, None, Some(_)) => 1,
            (None, None, None) => 0,
        };
        Ok(ConfigFile {
            n_type1,
            mu: self.mu.clone(),
            mu_each: self.mu_each,
            m_type2,
            lambda: self.lambda.clone(),
            lambda_each: self.lambda_each,
        })
    }

    pub fn system(&self) -> Result<SystemConfig> {
        let file = self.config_file()?;
        let system = file.to_system()?;
        if let Some(path) = &self.save_config {
            file.save(path)?;
        }
        Ok(system)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

impl OutputArgs {
    fn emit(&self, report: &Report) -> Result<()> {
        report.emit(self.format, self.out.as_deref())
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Simulated time per replication.
    #[arg(long, default_value_t = 1e6)]
    pub horizon: f64,
    /// Event budget per replication instead of a time horizon.
    #[arg(long)]
    pub events: Option<u64>,
    /// Leading share of each replication left out of the average.
    #[arg(long, default_value_t = 0.1)]
    pub warmup: f64,
    #[arg(long, default_value_t = 10)]
    pub reps: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SimArgs {
    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            horizon: match self.events {
                Some(e) => Horizon::Events(e),
                None => Horizon::Time(self.horizon),
            },
            warmup_fraction: self.warmup,
            replications: self.reps,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    /// Enumeration within the state cap, homogeneous formula beyond it.
    Auto,
    Exact,
    Homogeneous,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyticArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ShsArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Fail unless every state matches the per-state closed forms.
    #[arg(long)]
    pub check: bool,
    /// Write the model and its solution as JSON.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Simulate a queueing baseline with `--n` servers at rate `--mu-each`.
    #[arg(long, value_parser = parse_baseline)]
    pub baseline: Option<BaselineKind>,
    /// Baseline load.
    #[arg(long, default_value_t = 0.56)]
    pub rho: f64,
    /// CSV trace of replication 0.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub ns: Vec<usize>,
    /// Type-2 rates; 0 means no type-2 device.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub lambdas: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub mu_each: f64,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Add columns for a queueing baseline with N servers.
    #[arg(long, value_parser = parse_baseline)]
    pub baseline: Option<BaselineKind>,
    #[arg(long, default_value_t = 0.56)]
    pub rho: f64,
    /// Fail when the linear solve or the simulation disagrees with the closed form.
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    N,
    Lambda,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub axis: Axis,
    /// Points along the axis; defaults to 10,100,1000 for N and 10..100 for λ.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// One curve per value: total λ when sweeping N, N when sweeping λ.
    #[arg(long, value_delimiter = ',')]
    pub series: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub mu_each: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    /// Cost of one type-2 device relative to a type-1 device.
    #[arg(long, required_unless_present = "thresholds")]
    pub k: Option<f64>,
    /// Comma-separated budgets.
    #[arg(long, value_delimiter = ',', required_unless_present = "thresholds")]
    pub dcost: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub mu_each: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda_each: f64,
    /// Every feasible deployment instead of the optimum only.
    #[arg(long, conflicts_with = "thresholds")]
    pub surface: bool,
    /// Locate the mixed region for each cost ratio in `--ks`.
    #[arg(long)]
    pub thresholds: bool,
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
    pub ks: Vec<f64>,
    #[arg(long, default_value_t = 16.0)]
    pub grid_step: f64,
    #[arg(long, default_value_t = 800.0)]
    pub grid_max: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TablesArgs {
    /// Fail when a cell is off by more than the tolerance.
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_baseline(s: &str) -> std::result::Result<BaselineKind, String> {
    s.parse().map_err(|e: aoi_core::Error| {
        let known: Vec<&str> = BaselineKind::ALL.iter().map(|k| k.as_str()).collect();
        format!("{e} (expected one of {})", known.join(", "))
    })
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Analytic(a) => run_analytic(a),
        Command::Shs(a) => run_shs(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Compare(a) => run_compare(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Optimize(a) => run_optimize(a),
        Command::Tables(a) => run_tables(a),
    }
}

fn exact(system: &SystemConfig) -> aoi_core::Result<AoiResult> {
    match system.variant() {
        Variant::Basic => aoi_basic_exact(system),
        Variant::Hybrid => aoi_hybrid_exact(system),
    }
}

fn homogeneous(system: &SystemConfig) -> Result<AoiResult> {
    if !system.is_homogeneous() {
        return Err(AppError::Usage(
            "the homogeneous formula needs equal type-1 rates".into(),
        ));
    }
    let mu_each = system.mu().first().copied().unwrap_or(0.0);
    Ok(aoi_homogeneous(
        system.n_type1(),
        mu_each,
        system.lambda_total(),
    )?)
}

pub fn analytic_value(system: &SystemConfig, method: MethodChoice) -> Result<AoiResult> {
    match method {
        MethodChoice::Exact => Ok(exact(system)?),
        MethodChoice::Homogeneous => homogeneous(system),
        MethodChoice::Auto => match exact(system) {
            Err(aoi_core::Error::CapExceeded { .. }) if system.is_homogeneous() => {
                homogeneous(system)
            }
            other => Ok(other?),
        },
    }
}

fn run_analytic(args: &AnalyticArgs) -> Result<()> {
    let system = args.system.system()?;
    let r = analytic_value(&system, args.method)?;
    let mut report = Report::new(&[
        "method",
        "n_type1",
        "m_type2",
        "mu_total",
        "lambda_total",
        "aoi",
    ]);
    report.push(vec![
        r.method.as_str().into(),
        system.n_type1().into(),
        system.m_type2().into(),
        r.mu_total.into(),
        r.lambda_total.into(),
        r.value.into(),
    ]);
    report.extra(
        "config",
        serde_json::to_value(ConfigFile::from_system(&system))?,
    );
    args.output.emit(&report)
}

fn shs_solve(
    system: &SystemConfig,
) -> Result<(aoi_core::shs::ShsModel, aoi_core::shs::ShsSolution)> {
    let model = match system.variant() {
        Variant::Basic => build_basic_model(system)?,
        Variant::Hybrid => build_hybrid_model(system)?,
    };
    let solution = solve(&model)?;
    Ok((model, solution))
}

fn run_shs(args: &ShsArgs) -> Result<()> {
    let system = args.system.system()?;
    let (model, solution) = shs_solve(&system)?;
    let check = closed_form_check(&model, &solution);
    if let Some(path) = &args.dump {
        let text = ModelDump::new(&model, Some(&solution)).to_json()?;
        std::fs::write(path, text + "\n").map_err(|e| AppError::io(path, e))?;
    }
    let variant = match model.variant() {
        Variant::Basic => "basic",
        Variant::Hybrid => "hybrid",
    };
    let mut report = Report::new(&[
        "variant",
        "n_type1",
        "m_type2",
        "states",
        "aoi",
        "check_max_rel",
    ]);
    report.push(vec![
        variant.into(),
        system.n_type1().into(),
        system.m_type2().into(),
        model.states().len().into(),
        solution.aoi.into(),
        check.max_rel().into(),
    ]);
    args.output.emit(&report)?;
    if args.check && (check.max_rel().is_nan() || check.max_rel() > SHS_CHECK_TOLERANCE) {
        return Err(AppError::CheckFailed(format!(
            "largest relative gap to the per-state closed forms is {:e}",
            check.max_rel()
        )));
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| AppError::io(path, e))
}

fn run_simulate(args: &SimulateArgs) -> Result<()> {
    let config = args.sim.sim_config();
    let mut trace = match &args.trace {
        Some(p) => Some(TraceWriter::new(create(p)?)?),
        None => None,
    };
    let mut report = Report::new(&[
        "system",
        "n",
        "m",
        "rho",
        "mean_aoi",
        "half_width_95",
        "replications",
        "events",
    ]);
    let (label, n, m, rho, result) = match args.baseline {
        Some(kind) => {
            let servers = args.system.n.unwrap_or(1);
            let mu = args.system.mu_each.unwrap_or(1.0);
            let desc = BaselineDescriptor::new(kind, servers, mu, args.rho)?;
            let result = match trace.as_mut() {
                Some(w) => {
                    parallel::simulate_baseline_traced(&desc, &config, &mut |e| w.record(e))?
                }
                None => parallel::simulate_baseline(&desc, &config)?,
            };
            (kind.as_str(), servers, 0, Some(args.rho), result)
        }
        None => {
            let system = args.system.system()?;
            let result = match trace.as_mut() {
                Some(w) => {
                    parallel::simulate_hybrid_traced(&system, &config, &mut |e| w.record(e))?
                }
                None => parallel::simulate_hybrid(&system, &config)?,
            };
            (
                "zero_wait",
                system.n_type1(),
                system.m_type2(),
                None,
                result,
            )
        }
    };
    if let Some(w) = trace {
        w.finish()?;
    }
    report.push(vec![
        label.into(),
        n.into(),
        m.into(),
        rho.into(),
        result.mean_aoi.into(),
        result.half_width_95.into(),
        result.per_replication.len().into(),
        result.events_processed.into(),
    ]);
    report.extra("per_replication", json!(result.per_replication));
    args.output.emit(&report)
}

/// One grid point of `compare`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparePoint {
    pub n: usize,
    pub lambda: f64,
    pub analytic: f64,
    pub shs: Option<f64>,
    pub sim: SimResult,
    pub baseline: Option<SimResult>,
}

pub fn compare_point(
    n: usize,
    lambda: f64,
    mu_each: f64,
    config: &SimConfig,
    baseline: Option<(BaselineKind, f64)>,
) -> Result<ComparePoint> {
    let m = usize::from(lambda > 0.0);
    let system = SystemConfig::homogeneous(n, mu_each, m, lambda)?;
    let analytic = analytic_value(&system, MethodChoice::Auto)?.value;
    let shs = match shs_solve(&system) {
        Ok((_, s)) => Some(s.aoi),
        Err(AppError::Core(aoi_core::Error::CapExceeded { .. })) => None,
        Err(e) => return Err(e),
    };
    let sim = parallel::simulate_hybrid(&system, config)?;
    let baseline = match baseline {
        Some((kind, rho)) => {
            let desc = BaselineDescriptor::new(kind, n, mu_each, rho)?;
            Some(parallel::simulate_baseline(&desc, config)?)
        }
        None => None,
    };
    Ok(ComparePoint {
        n,
        lambda,
        analytic,
        shs,
        sim,
        baseline,
    })
}

fn run_compare(args: &CompareArgs) -> Result<()> {
    let config = args.sim.sim_config();
    let mut report = Report::new(&[
        "n",
        "lambda",
        "analytic",
        "shs",
        "sim_mean",
        "sim_half_width",
        "baseline_mean",
        "baseline_half_width",
    ]);
    let mut max_shs_rel = 0.0f64;
    let mut failures = Vec::new();
    for &n in &args.ns {
        for &lambda in &args.lambdas {
            let p = compare_point(
                n,
                lambda,
                args.mu_each,
                &config,
                args.baseline.map(|k| (k, args.rho)),
            )?;
            if let Some(s) = p.shs {
                let rel = (s - p.analytic).abs() / p.analytic;
                max_shs_rel = max_shs_rel.max(rel);
                if rel > SHS_CHECK_TOLERANCE {
                    failures.push(format!("  N={n} λ={lambda}: linear solve off by {rel:e}"));
                }
            }
            let gap = (p.sim.mean_aoi - p.analytic).abs();
            if gap > 3.0 * p.sim.half_width_95 {
                failures.push(format!(
                    "  N={n} λ={lambda}: simulation {} vs {} (half-width {})",
                    p.sim.mean_aoi, p.analytic, p.sim.half_width_95
                ));
            }
            report.push(vec![
                n.into(),
                lambda.into(),
                p.analytic.into(),
                p.shs.into(),
                p.sim.mean_aoi.into(),
                p.sim.half_width_95.into(),
                p.baseline.as_ref().map(|b| b.mean_aoi).into(),
                p.baseline.as_ref().map(|b| b.half_width_95).into(),
            ]);
        }
    }
    eprintln!("max relative deviation, linear solve vs closed form: {max_shs_rel:e}");
    report.extra("max_shs_relative_deviation", json!(max_shs_rel));
    args.output.emit(&report)?;
    if args.check && !failures.is_empty() {
        return Err(AppError::CheckFailed(failures.join("\n")));
    }
    Ok(())
}

/// One labelled series of `sweep`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

pub fn sweep_curves(
    axis: Axis,
    values: &[f64],
    series: &[f64],
    mu_each: f64,
) -> Result<Vec<Curve>> {
    let count = |x: f64, what: &str| -> Result<usize> {
        if x >= 0.0 && x.fract() == 0.0 {
            Ok(x as usize)
        } else {
            Err(AppError::Usage(format!(
                "{what} must be a non-negative integer, got {x}"
            )))
        }
    };
    let mut out = Vec::new();
    for &s in series {
        let (label, ys) = match axis {
            Axis::N => {
                let ys = values
                    .iter()
                    .map(|&x| Ok(aoi_homogeneous(count(x, "N")?, mu_each, s)?.value))
                    .collect::<Result<Vec<_>>>()?;
                (format!("lambda={s}"), ys)
            }
            Axis::Lambda => {
                let n = count(s, "N")?;
                let ys = values
                    .iter()
                    .map(|&x| Ok(aoi_homogeneous(n, mu_each, x)?.value))
                    .collect::<Result<Vec<_>>>()?;
                (format!("n={n}"), ys)
            }
        };
        out.push(Curve {
            label,
            xs: values.to_vec(),
            ys,
        });
    }
    Ok(out)
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let values = args.values.clone().unwrap_or_else(|| match args.axis {
        Axis::N => vec![10.0, 100.0, 1000.0],
        Axis::Lambda => (1..=10).map(|i| 10.0 * i as f64).collect(),
    });
    let series = args.series.clone().unwrap_or_else(|| match args.axis {
        Axis::N => vec![0.0],
        Axis::Lambda => vec![1.0],
    });
    let curves = sweep_curves(args.axis, &values, &series, args.mu_each)?;
    let mut report = Report::new(&["x", "series", "y"]);
    let mut slopes = serde_json::Map::new();
    for c in &curves {
        for (x, y) in c.xs.iter().zip(&c.ys) {
            report.push(vec![(*x).into(), c.label.as_str().into(), (*y).into()]);
        }
        let slope = loglog_slope(&c.xs, &c.ys);
        if let Some(s) = slope {
            eprintln!("{}: log-log slope {s:.4}", c.label);
        }
        slopes.insert(c.label.clone(), slope.map_or(Value::Null, Value::from));
    }
    report.extra("loglog_slopes", Value::Object(slopes));
    args.output.emit(&report)
}

fn run_optimize(args: &OptimizeArgs) -> Result<()> {
    if args.thresholds {
        if !(args.grid_step > 0.0 && args.grid_max >= args.grid_step) {
            return Err(AppError::Usage("need 0 < --grid-step <= --grid-max".into()));
        }
        let steps = (args.grid_max / args.grid_step).floor() as usize;
        let grid: Vec<f64> = (1..=steps).map(|i| i as f64 * args.grid_step).collect();
        let mut report = Report::new(&["k", "left", "right", "grid_too_coarse"]);
        for &k in &args.ks {
            let t = threshold_interval(k, args.mu_each, args.lambda_each, &grid)?;
            if t.grid_too_coarse {
                eprintln!(
                    "warning: k={k}: the grid does not reach a pure optimum at both ends; \
                     refine --grid-step or raise --grid-max"
                );
            }
            report.push(vec![
                k.into(),
                t.left.into(),
                t.right.into(),
                t.grid_too_coarse.into(),
            ]);
        }
        return args.output.emit(&report);
    }
    let (Some(k), Some(budgets)) = (args.k, args.dcost.as_ref()) else {
        return Err(AppError::Usage("--k and --dcost are required".into()));
    };
    let mut report = Report::new(&["k", "d_cost", "n", "m", "aoi", "ratio"]);
    if args.surface {
        for &d in budgets {
            for row in aoi_surface(k, d, args.mu_each, args.lambda_each)? {
                report.push(vec![
                    k.into(),
                    d.into(),
                    row.n.into(),
                    row.m.into(),
                    row.aoi.into(),
                    row.ratio.into(),
                ]);
            }
        }
    } else {
        let mut sorted = budgets.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        let optima = optimal_deployments(k, &sorted, args.mu_each, args.lambda_each)?;
        let max_n = sorted.last().map_or(0, |d| d.floor().max(0.0) as usize);
        let eval = DeploymentEvaluator::new(max_n, args.mu_each, args.lambda_each);
        for &d in budgets {
            let i = sorted
                .iter()
                .position(|x| *x == d)
                .expect("budget is in the sorted grid");
            let p = optima[i];
            let reference = eval.aoi(d.floor() as usize, 0);
            report.push(vec![
                k.into(),
                d.into(),
                p.n.into(),
                p.m.into(),
                p.aoi.into(),
                (p.aoi / reference).into(),
            ]);
        }
    }
    args.output.emit(&report)
}

fn run_tables(args: &TablesArgs) -> Result<()> {
    let cells = golden::reproduce(&GoldenTables::embedded()?)?;
    let mut report = Report::new(&[
        "table",
        "n",
        "m",
        "ratio_percent",
        "published_percent",
        "abs_diff",
    ]);
    for c in &cells {
        report.push(vec![
            c.table.into(),
            c.n.into(),
            c.m.map(Cell::from).unwrap_or(Cell::Empty),
            c.percent.into(),
            c.published_percent.into(),
            (c.percent - c.published_percent).abs().into(),
        ]);
    }
    args.output.emit(&report)?;
    if args.check {
        golden::check(&cells)?;
    }
    Ok(())
}
