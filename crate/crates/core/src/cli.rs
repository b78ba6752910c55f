//! The `mixlr` command line: data generation, fitting, diagnostics and
//! benchmark tables.
//!
//! Every command prints a key-sorted JSON document (or a CSV table for
//! `bench --format csv`) on stdout. All randomness derives from `--seed`,
//! which falls back to `MIXLR_SEED`, so repeated invocations are
//! byte-identical. Wall time is only reported with `--timing`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::am::{am_run, diagnostics, AmConfig, Initialization};
use crate::data::{Dataset, ModelSet};
use crate::datagen::{gen_friedman, gen_mixture_linear, load_csv, save_csv, split_indices, write_csv, MixtureSpec, SplitSpec};
use crate::objective::{min_loss, normalize};
use crate::regression::{least_squares, RobustConfig};
use crate::subsample::{subsample_fit, Regressor, SampleSource, SearchMode, SubsampleConfig};

#[derive(Debug, Parser)]
#[command(name = "mixlr", version, about = "Mixtures of linear regressions under min-loss")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset as CSV.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Fit one algorithm and report train/test min-loss.
    Fit(FitArgs),
    /// Separation and bias quantities of reference models on a dataset.
    Diag(DiagArgs),
    /// Compare the baseline and the four mixture algorithms.
    Bench(BenchArgs),
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Points from k noisy linear models; also writes the true models as JSON.
    Mixture(GenMixtureArgs),
    /// Friedman non-linear benchmark.
    Friedman(GenFriedmanArgs),
}

#[derive(Debug, Args)]
pub struct GenMixtureArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 4)]
    d: usize,
    #[arg(long, default_value_t = 4000)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Comma-separated per-component intercepts.
    #[arg(long, value_delimiter = ',')]
    bias: Vec<f64>,
    /// Comma-separated component probabilities.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    theta_scale: f64,
    #[arg(long, env = "MIXLR_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: PathBuf,
    /// Where to write the generating models; defaults to the output path with a `.models.json` extension.
    #[arg(long)]
    models_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenFriedmanArgs {
    #[arg(long, default_value_t = 1)]
    variant: u8,
    #[arg(long, default_value_t = 4000)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, env = "MIXLR_SEED", default_value_t = 0)]
    seed: u64,
    /// Output CSV; without it the CSV goes to stdout.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Lr,
    Am,
    SubExhaustive,
    SubRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitKind {
    Random,
    File,
    FromSubRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegressorKind {
    Ls,
    Robust,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Settings shared by `fit` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Dataset CSV (`y,f0,f1,...`).
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, env = "MIXLR_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.8)]
    train_fraction: f64,
    /// Independent runs with seeds `seed, seed + 1, ...`.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Fit on data scaled into the unit ball; reported models and losses
    /// stay in original units.
    #[arg(long)]
    normalize: bool,
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 10.0)]
    init_std: f64,
    /// Sub-sample size |A|.
    #[arg(long = "A", default_value_t = 150)]
    sample_size: usize,
    /// Random labelings per sub-sample search.
    #[arg(long, default_value_t = 1000)]
    h: usize,
    #[arg(long, default_value_t = 100)]
    robust_trials: usize,
    #[arg(long, default_value_t = 1.5)]
    inlier_scale: f64,
    /// Include wall-clock milliseconds in the report (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(value_enum)]
    algorithm: Algorithm,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value_t = InitKind::Random)]
    init: InitKind,
    /// Model JSON for `--init file`.
    #[arg(long)]
    init_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = RegressorKind::Ls)]
    regressor: RegressorKind,
}

#[derive(Debug, Args)]
pub struct DiagArgs {
    #[arg(long)]
    data: PathBuf,
    /// Reference model JSON.
    #[arg(long)]
    models: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

/// Parses `args` (including the program name) and returns what would be
/// printed on stdout.
pub fn run<I, T>(args: I) -> anyhow::Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let cli = Cli::try_parse_from(&args)?;
    match cli.command {
        Command::Gen(GenCommand::Mixture(a)) => cmd_gen_mixture(&a, echo),
        Command::Gen(GenCommand::Friedman(a)) => cmd_gen_friedman(&a, echo),
        Command::Fit(a) => cmd_fit(&a, echo),
        Command::Diag(a) => cmd_diag(&a, echo),
        Command::Bench(a) => cmd_bench(&a, echo),
    }
}

fn to_json(v: &Value) -> String {
    // serde_json's default map is ordered by key
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn cmd_gen_mixture(a: &GenMixtureArgs, echo: Vec<String>) -> anyhow::Result<String> {
    let mut spec = MixtureSpec::new(a.k, a.d, a.n);
    spec.noise_std = a.noise;
    spec.theta_scale = a.theta_scale;
    spec.seed = a.seed;
    if !a.bias.is_empty() {
        spec.biases = a.bias.clone();
    }
    if !a.weights.is_empty() {
        spec.component_weights = a.weights.clone();
    }
    let (data, truth, labels) = gen_mixture_linear(&spec)?;
    save_csv(&data, &a.output).with_context(|| format!("writing {}", a.output.display()))?;
    let models_path = a
        .models_out
        .clone()
        .unwrap_or_else(|| a.output.with_extension("models.json"));
    write_models(&truth, &models_path)?;
    Ok(to_json(&json!({
        "command": echo,
        "seed": a.seed,
        "data": a.output.display().to_string(),
        "models": models_path.display().to_string(),
        "n": data.n(),
        "d": data.d(),
        "component_sizes": labels.sizes(),
    })))
}

fn cmd_gen_friedman(a: &GenFriedmanArgs, echo: Vec<String>) -> anyhow::Result<String> {
    let data = gen_friedman(a.variant, a.n, a.noise, a.seed)?;
    let Some(output) = &a.output else {
        let mut buf = Vec::new();
        write_csv(&data, &mut buf)?;
        return Ok(String::from_utf8(buf)?);
    };
    save_csv(&data, output).with_context(|| format!("writing {}", output.display()))?;
    Ok(to_json(&json!({
        "command": echo,
        "seed": a.seed,
        "data": output.display().to_string(),
        "n": data.n(),
        "d": data.d(),
        "variant": a.variant,
    })))
}

pub fn write_models(models: &ModelSet, path: &Path) -> anyhow::Result<()> {
    let mut s = serde_json::to_string_pretty(models)?;
    s.push('\n');
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

pub fn read_models(path: &Path) -> anyhow::Result<ModelSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing models in {}", path.display()))
}

fn cmd_diag(a: &DiagArgs, echo: Vec<String>) -> anyhow::Result<String> {
    let data = load_csv(&a.data).with_context(|| format!("reading {}", a.data.display()))?;
    let models = read_models(&a.models)?;
    let dg = diagnostics(&data, &models)?;
    let mut v = serde_json::to_value(&dg)?;
    v["command"] = json!(echo);
    v["theorem_step_size"] = json!(dg.theorem_step_size());
    Ok(to_json(&v))
}

/// One fitting procedure, fully resolved.
#[derive(Debug, Clone)]
enum Plan {
    Lr,
    Am { init: InitPlan, cfg: AmConfig },
    Sub { mode: SearchMode, regressor: Regressor },
}

#[derive(Debug, Clone)]
enum InitPlan {
    Random,
    File(ModelSet),
    FromSubRandom(Regressor),
}

struct Outcome {
    models: ModelSet,
    iterations: Option<usize>,
    converged: Option<bool>,
    candidates: Option<usize>,
}

struct Prepared {
    train: Dataset,
    test: Dataset,
}

fn prepare(run: &RunArgs) -> anyhow::Result<Prepared> {
    if run.repeats == 0 {
        bail!("--repeats must be at least 1");
    }
    let data = load_csv(&run.data).with_context(|| format!("reading {}", run.data.display()))?;
    let split = SplitSpec {
        train_fraction: run.train_fraction,
        seed: run.seed,
    };
    let (tr, te) = split_indices(data.n(), &split)?;
    Ok(Prepared {
        train: data.select(&tr)?,
        test: data.select(&te)?,
    })
}

fn regressor(kind: RegressorKind, run: &RunArgs) -> Regressor {
    match kind {
        RegressorKind::Ls => Regressor::LeastSquares,
        RegressorKind::Robust => Regressor::Robust(RobustConfig {
            trials: run.robust_trials,
            inlier_scale: run.inlier_scale,
            ..Default::default()
        }),
    }
}

fn am_config(run: &RunArgs) -> AmConfig {
    AmConfig {
        gamma: run.gamma,
        max_iters: run.max_iters,
        tol: run.tol,
    }
}

fn execute(plan: &Plan, run: &RunArgs, train: &Dataset, seed: u64) -> anyhow::Result<Outcome> {
    let k = run.k;
    let sub_cfg = |mode, regressor: &Regressor| SubsampleConfig {
        sample: SampleSource::Draw(run.sample_size),
        mode,
        regressor: regressor.clone(),
        seed,
        ..Default::default()
    };
    Ok(match plan {
        Plan::Lr => {
            let all: Vec<usize> = (0..train.n()).collect();
            Outcome {
                models: ModelSet::new(vec![least_squares(train, &all)?])?,
                iterations: None,
                converged: None,
                candidates: None,
            }
        }
        Plan::Sub { mode, regressor } => {
            let res = subsample_fit(train, k, &sub_cfg(*mode, regressor))?;
            Outcome {
                models: res.refit_models,
                iterations: None,
                converged: None,
                candidates: Some(res.candidates_evaluated),
            }
        }
        Plan::Am { init, cfg } => {
            let init = match init {
                InitPlan::Random => Initialization::Gaussian {
                    std: run.init_std,
                    seed,
                },
                InitPlan::File(m) => Initialization::Given(m.clone()),
                InitPlan::FromSubRandom(r) => {
                    Initialization::FromSubsample(sub_cfg(SearchMode::Random { h: run.h }, r))
                }
            };
            let start = init.resolve(train, k)?;
            let res = am_run(train, cfg, &start)?;
            Outcome {
                models: res.models,
                iterations: Some(res.iterations_run),
                converged: Some(res.converged),
                candidates: None,
            }
        }
    })
}

struct RunRecord {
    seed: u64,
    train_loss: f64,
    test_loss: f64,
    outcome: Outcome,
}

/// Runs `plan` for every repeat. Repeats execute in parallel; each has its
/// own seed, so the records match a sequential loop.
fn run_repeats(plan: &Plan, run: &RunArgs, prep: &Prepared) -> anyhow::Result<Vec<RunRecord>> {
    let (fit_train, scaling) = if run.normalize {
        let (d, s) = normalize(&prep.train);
        (d, Some(s))
    } else {
        (prep.train.clone(), None)
    };
    // models read from a file are in original units
    let plan = match (plan, scaling) {
        (
            Plan::Am {
                init: InitPlan::File(m),
                cfg,
            },
            Some(s),
        ) => Plan::Am {
            init: InitPlan::File(s.models_to_normalized(m)),
            cfg: cfg.clone(),
        },
        _ => plan.clone(),
    };
    (0..run.repeats)
        .into_par_iter()
        .map(|r| {
            let seed = run.seed.wrapping_add(r as u64);
            let mut outcome = execute(&plan, run, &fit_train, seed)?;
            if let Some(s) = scaling {
                outcome.models = s.models_from_normalized(&outcome.models);
            }
            Ok(RunRecord {
                seed,
                train_loss: min_loss(&prep.train, &outcome.models)?,
                test_loss: min_loss(&prep.test, &outcome.models)?,
                outcome,
            })
        })
        .collect()
}

fn mean_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

fn summary(values: &[f64]) -> Value {
    let (mean, variance) = mean_var(values);
    json!({ "mean": mean, "variance": variance })
}

fn cmd_fit(a: &FitArgs, echo: Vec<String>) -> anyhow::Result<String> {
    let started = Instant::now();
    let run = &a.run;
    let plan = match a.algorithm {
        Algorithm::Lr => Plan::Lr,
        Algorithm::SubExhaustive => Plan::Sub {
            mode: SearchMode::Exhaustive,
            regressor: regressor(a.regressor, run),
        },
        Algorithm::SubRandom => Plan::Sub {
            mode: SearchMode::Random { h: run.h },
            regressor: regressor(a.regressor, run),
        },
        Algorithm::Am => {
            let init = match a.init {
                InitKind::Random => InitPlan::Random,
                InitKind::FromSubRandom => InitPlan::FromSubRandom(regressor(a.regressor, run)),
                InitKind::File => {
                    let Some(path) = &a.init_file else {
                        bail!("--init file requires --init-file");
                    };
                    InitPlan::File(read_models(path)?)
                }
            };
            Plan::Am {
                init,
                cfg: am_config(run),
            }
        }
    };
    let prep = prepare(run)?;
    let records = run_repeats(&plan, run, &prep)?;

    let k = if matches!(plan, Plan::Lr) { 1 } else { run.k };
    let train: Vec<f64> = records.iter().map(|r| r.train_loss).collect();
    let test: Vec<f64> = records.iter().map(|r| r.test_loss).collect();
    let runs: Vec<Value> = records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            json!({
                "run": i,
                "seed": r.seed,
                "train_min_loss": r.train_loss,
                "test_min_loss": r.test_loss,
                "models": r.outcome.models,
                "iterations": r.outcome.iterations,
                "converged": r.outcome.converged,
                "candidates_evaluated": r.outcome.candidates,
            })
        })
        .collect();
    let mut report = json!({
        "command": echo,
        "algorithm": a.algorithm.to_possible_value().map(|v| v.get_name().to_string()),
        "seed": run.seed,
        "k": k,
        "n_train": prep.train.n(),
        "n_test": prep.test.n(),
        "config": config_json(run, Some(a)),
        "runs": runs,
        "train_min_loss": summary(&train),
        "test_min_loss": summary(&test),
    });
    if matches!(plan, Plan::Am { .. }) {
        report["did_not_converge"] = json!(records
            .iter()
            .filter(|r| r.outcome.converged == Some(false))
            .count());
    }
    if run.timing {
        report["wall_time_ms"] = json!(started.elapsed().as_millis() as u64);
    }
    Ok(to_json(&report))
}

fn config_json(run: &RunArgs, fit: Option<&FitArgs>) -> Value {
    let mut v = json!({
        "data": run.data.display().to_string(),
        "train_fraction": run.train_fraction,
        "repeats": run.repeats,
        "normalize": run.normalize,
        "gamma": run.gamma,
        "max_iters": run.max_iters,
        "tol": run.tol,
        "init_std": run.init_std,
        "sample_size": run.sample_size,
        "h": run.h,
        "robust_trials": run.robust_trials,
        "inlier_scale": run.inlier_scale,
    });
    if let Some(f) = fit {
        v["init"] = json!(f.init.to_possible_value().map(|p| p.get_name().to_string()));
        v["init_file"] = json!(f.init_file.as_ref().map(|p| p.display().to_string()));
        v["regressor"] = json!(f.regressor.to_possible_value().map(|p| p.get_name().to_string()));
    }
    v
}

/// Rows of the benchmark table, in order.
fn bench_plans(run: &RunArgs) -> Vec<(&'static str, &'static str, Plan)> {
    let ls = Regressor::LeastSquares;
    let robust = regressor(RegressorKind::Robust, run);
    let random = SearchMode::Random { h: run.h };
    vec![
        ("A0", "linear regression", Plan::Lr),
        ("A1", "random partitions, least squares", Plan::Sub { mode: random, regressor: ls.clone() }),
        ("A2", "random partitions, robust", Plan::Sub { mode: random, regressor: robust }),
        (
            "A3",
            "gradient AM from A1",
            Plan::Am { init: InitPlan::FromSubRandom(ls), cfg: am_config(run) },
        ),
        ("A4", "gradient AM, random init", Plan::Am { init: InitPlan::Random, cfg: am_config(run) }),
    ]
}

fn cmd_bench(a: &BenchArgs, echo: Vec<String>) -> anyhow::Result<String> {
    let started = Instant::now();
    let run = &a.run;
    let prep = prepare(run)?;
    let mut rows = Vec::new();
    for (id, name, plan) in bench_plans(run) {
        let records = run_repeats(&plan, run, &prep)?;
        let train: Vec<f64> = records.iter().map(|r| r.train_loss).collect();
        let test: Vec<f64> = records.iter().map(|r| r.test_loss).collect();
        let (train_mean, train_var) = mean_var(&train);
        let (test_mean, test_var) = mean_var(&test);
        let dnc = matches!(plan, Plan::Am { .. }).then(|| {
            records
                .iter()
                .filter(|r| r.outcome.converged == Some(false))
                .count()
        });
        rows.push(json!({
            "algorithm": id,
            "description": name,
            "train_mean": train_mean,
            "train_var": train_var,
            "test_mean": test_mean,
            "test_var": test_var,
            "dnc": dnc,
        }));
    }
    match a.format {
        TableFormat::Json => {
            let mut report = json!({
                "command": echo,
                "seed": run.seed,
                "k": run.k,
                "n_train": prep.train.n(),
                "n_test": prep.test.n(),
                "config": config_json(run, None),
                "rows": rows,
            });
            if run.timing {
                report["wall_time_ms"] = json!(started.elapsed().as_millis() as u64);
            }
            Ok(to_json(&report))
        }
        TableFormat::Csv => {
            let mut out = String::from("algorithm,description,train_mean,train_var,test_mean,test_var,dnc\n");
            for r in &rows {
                let num = |key: &str| format!("{:?}", r[key].as_f64().unwrap_or(f64::NAN));
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r["algorithm"].as_str().unwrap_or_default(),
                    r["description"].as_str().unwrap_or_default().replace(',', ";"),
                    num("train_mean"),
                    num("train_var"),
                    num("test_mean"),
                    num("test_var"),
                    r["dnc"].as_u64().map(|v| v.to_string()).unwrap_or_default(),
                ));
            }
            if run.timing {
                out.push_str(&format!("# wall_time_ms,{}\n", started.elapsed().as_millis()));
            }
            Ok(out)
        }
    }
}
