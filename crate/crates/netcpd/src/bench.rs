//! The `bench` subcommand: canned experiments, parameter grids, and scoring
//! a real log against labeled events.

use std::path::{Path, PathBuf};

use clap::Args;
use netcpd_core::detector::detect_sequence;
use netcpd_core::evalbench::{
    match_events, run_experiment, run_grid, EvalResult, Experiment, ExperimentOpts, GridCell,
    GridSpec,
};
use netcpd_core::synth::{ModelKind, SizeDist};
use serde::Serialize;

use crate::config::{pick, pick_opt};
use crate::output::write_json;
use crate::pipeline::{build_windows, read_input, window_samples, DetectorFlags, WindowFlags};
use crate::{CliError, Ctx};

const DEFAULT_P_VALUES: &str = "0.05,0.1,0.15,0.2,0.25,0.3";

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Canned benchmark: exp1 (sparse ER), exp2 (dense ER), exp3 (caveman)
    #[arg(long, value_name = "NAME")]
    pub experiment: Option<String>,

    /// Parameter-separation grid over this model
    #[arg(long, value_parser = ["er", "caveman"])]
    pub grid: Option<String>,

    /// Score a real log against labeled events (CSV "label,timestamp");
    /// needs --input and window flags
    #[arg(long, value_name = "CSV")]
    pub events: Option<PathBuf>,

    /// Interaction log for --events mode
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,

    /// Scenarios per experiment or grid cell
    #[arg(long, value_name = "N")]
    pub trials: Option<usize>,

    /// Change points per scenario
    #[arg(long, value_name = "N")]
    pub changes: Option<usize>,

    /// Confidence level
    #[arg(long, value_name = "A")]
    pub alpha: Option<f64>,

    /// Matching slack in window indices
    #[arg(long, value_name = "K")]
    pub slack: Option<usize>,

    /// Comma-separated grid parameter values (strictly increasing)
    #[arg(long, value_name = "LIST")]
    pub p_values: Option<String>,

    /// Mean node count for grid scenarios
    #[arg(long, value_name = "M")]
    pub size_mean: Option<f64>,

    /// Node-count variance for grid scenarios
    #[arg(long, value_name = "V")]
    pub size_var: Option<f64>,

    /// Node-count standard deviation; overrides --size-var
    #[arg(long, value_name = "S")]
    pub size_std: Option<f64>,

    /// Cliques per caveman snapshot in grid mode
    #[arg(long, value_name = "C")]
    pub communities: Option<usize>,

    /// Directory receiving results.csv / grid.csv / summary.json
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(flatten)]
    pub window: WindowFlags,

    #[command(flatten)]
    pub detector: DetectorFlags,
}

pub fn run(args: BenchArgs, ctx: &Ctx) -> Result<(), CliError> {
    let experiment = pick_opt(args.experiment.clone(), ctx.config.raw("experiment").map(String::from));
    let grid = pick_opt(args.grid.clone(), ctx.config.raw("grid").map(String::from));
    let events = pick_opt(args.events.clone(), ctx.config.get_parsed("events")?);
    let modes = usize::from(experiment.is_some())
        + usize::from(grid.is_some())
        + usize::from(events.is_some());
    if modes != 1 {
        return Err(CliError::Input(
            "choose exactly one of --experiment, --grid, or --events".into(),
        ));
    }

    let out_dir = pick(args.out_dir.clone(), ctx.config.get_parsed("out-dir")?, PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", out_dir.display())))?;
    let trials = pick(args.trials, ctx.config.get_parsed("trials")?, 50);
    let changes = pick(args.changes, ctx.config.get_parsed("changes")?, 20);
    let alpha = pick(args.alpha, ctx.config.get_parsed("alpha")?, 0.9);
    let slack = pick(args.slack, ctx.config.get_parsed("slack")?, 0);

    if let Some(name) = experiment {
        experiment_mode(&name, &args, ctx, &out_dir, trials, changes, alpha, slack)
    } else if let Some(model) = grid {
        grid_mode(&model, &args, ctx, &out_dir, trials, changes, alpha, slack)
    } else {
        events_mode(&events.expect("mode checked"), &args, ctx, &out_dir, alpha, slack)
    }
}

#[allow(clippy::too_many_arguments)]
fn experiment_mode(
    name: &str,
    args: &BenchArgs,
    ctx: &Ctx,
    out_dir: &Path,
    trials: usize,
    changes: usize,
    alpha: f64,
    slack: usize,
) -> Result<(), CliError> {
    let experiment: Experiment = name.parse().map_err(|e: netcpd_core::evalbench::EvalError| {
        CliError::Input(e.to_string())
    })?;
    let opts = ExperimentOpts {
        trials,
        n_changes: changes,
        alpha,
        metric: args.detector.metric_kind(&ctx.config)?,
        slack,
        seed: ctx.seed,
    };
    let report = run_experiment(experiment, &opts)?;
    write_results_csv(&out_dir.join("results.csv"), &report.trials)?;
    write_json(&out_dir.join("summary.json"), &report)?;
    eprintln!(
        "{experiment} at alpha {alpha}: precision {:.3} ± {:.3}, recall {:.3} ± {:.3}, f1 {:.3} ± {:.3} ({trials} trials)",
        report.precision.mean,
        report.precision.std,
        report.recall.mean,
        report.recall.std,
        report.f1.mean,
        report.f1.std,
    );
    Ok(())
}

#[derive(Serialize)]
struct GridSummary<'a> {
    model: &'a str,
    alpha: f64,
    metric: &'a str,
    trials: usize,
    n_changes: usize,
    cells: &'a [GridCell],
}

#[allow(clippy::too_many_arguments)]
fn grid_mode(
    model: &str,
    args: &BenchArgs,
    ctx: &Ctx,
    out_dir: &Path,
    trials: usize,
    changes: usize,
    alpha: f64,
    slack: usize,
) -> Result<(), CliError> {
    let kind = match model {
        "er" => ModelKind::Er,
        "caveman" => ModelKind::Caveman,
        other => return Err(CliError::Input(format!("unknown grid model {other:?}"))),
    };
    let p_values = parse_p_values(
        pick_opt(args.p_values.as_deref(), ctx.config.raw("p-values"))
            .unwrap_or(DEFAULT_P_VALUES),
    )?;
    let mean = pick(args.size_mean, ctx.config.get_parsed("size-mean")?, 100.0);
    let var = match pick_opt(args.size_std, ctx.config.get_parsed("size-std")?) {
        Some(std) => std * std,
        None => pick(args.size_var, ctx.config.get_parsed("size-var")?, 10.0),
    };
    let mut spec = GridSpec::new(kind, p_values, trials, ctx.seed);
    spec.sizes = SizeDist::Normal { mean, var };
    spec.communities = pick(args.communities, ctx.config.get_parsed("communities")?, 5);
    spec.n_changes = changes;
    spec.slack = slack;

    let cfg = args.detector.bootstrap_config(&ctx.config, alpha, ctx.seed)?;
    let cells = run_grid(&spec, &cfg)?;
    write_grid_csv(&out_dir.join("grid.csv"), &cells)?;
    write_json(
        &out_dir.join("summary.json"),
        &GridSummary {
            model,
            alpha,
            metric: cfg.metric.name(),
            trials,
            n_changes: changes,
            cells: &cells,
        },
    )?;
    let overall = cells.iter().map(|c| c.mean_f1).sum::<f64>() / cells.len() as f64;
    eprintln!(
        "{model} grid, {} cells at alpha {alpha}: overall mean F1 {overall:.3} ({trials} trials/cell)",
        cells.len()
    );
    Ok(())
}

fn events_mode(
    events_path: &Path,
    args: &BenchArgs,
    ctx: &Ctx,
    out_dir: &Path,
    alpha: f64,
    slack: usize,
) -> Result<(), CliError> {
    let input = pick_opt(args.input.clone(), ctx.config.get_parsed("input")?)
        .ok_or_else(|| CliError::Input("--events mode needs --input".into()))?;
    let plan = args.window.plan(&ctx.config)?;
    let windows = build_windows(read_input(&input)?, &plan, ctx.verbose)?;
    let samples = window_samples(&windows, ctx.verbose);
    let cfg = args.detector.bootstrap_config(&ctx.config, alpha, ctx.seed)?;
    let outcome = detect_sequence(&samples, &cfg)?;
    let events = read_events_csv(events_path)?;
    let result = match_events(&outcome.verdicts, &events, &windows, slack)?;

    let json = serde_json::to_string_pretty(&result)
        .map_err(|e| CliError::Internal(format!("serializing result: {e}")))?;
    println!("{json}");
    write_results_csv(&out_dir.join("results.csv"), std::slice::from_ref(&result))?;
    write_json(&out_dir.join("summary.json"), &result)?;
    Ok(())
}

fn parse_p_values(raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|e| CliError::Input(format!("bad p value {s:?}: {e}")))
        })
        .collect()
}

/// `label,timestamp` rows; a leading `label,timestamp` header is skipped.
fn read_events_csv(path: &Path) -> Result<Vec<(String, u64)>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Input(format!("cannot read events {}: {e}", path.display())))?;
    let mut events = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| CliError::Input(format!("events line {}: {e}", i + 1)))?;
        if record.len() != 2 {
            return Err(CliError::Input(format!(
                "events line {}: expected label,timestamp",
                i + 1
            )));
        }
        match record[1].parse::<u64>() {
            Ok(ts) => events.push((record[0].to_string(), ts)),
            Err(_) if i == 0 && record[1].eq_ignore_ascii_case("timestamp") => continue,
            Err(e) => {
                return Err(CliError::Input(format!(
                    "events line {}: bad timestamp {:?}: {e}",
                    i + 1,
                    &record[1]
                )))
            }
        }
    }
    if events.is_empty() {
        return Err(CliError::Input(format!("{} contains no events", path.display())));
    }
    Ok(events)
}

fn write_results_csv(path: &Path, trials: &[EvalResult]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))?;
    w.write_record(["trial", "tp", "fp", "fn", "precision", "recall", "f1"])
        .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))?;
    for (i, t) in trials.iter().enumerate() {
        w.write_record(&[
            i.to_string(),
            t.true_positives.to_string(),
            t.false_positives.to_string(),
            t.false_negatives.to_string(),
            t.precision.to_string(),
            t.recall.to_string(),
            t.f1.to_string(),
        ])
        .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))
}

fn write_grid_csv(path: &Path, cells: &[GridCell]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))?;
    w.write_record(["p1", "p2", "mean_f1"])
        .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))?;
    for cell in cells {
        w.write_record(&[cell.p_a.to_string(), cell.p_b.to_string(), cell.mean_f1.to_string()])
            .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))
}
