//! The `synth` subcommand: write a generated scenario and its ground truth.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use netcpd_core::synth::{gen_scenario, ModelConfig, ModelKind, Scenario, ScenarioSpec, Schedule, SizeDist};

use crate::config::{pick, pick_opt};
use crate::output::write_json;
use crate::{CliError, Ctx};

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Generator: er (p = edge probability) or caveman (p = rewiring probability)
    #[arg(long, value_parser = ["er", "caveman"])]
    pub model: Option<String>,

    /// Fixed node count per snapshot (shorthand for --size-dist fixed)
    #[arg(long)]
    pub n: Option<usize>,

    /// Node-count distribution across runs
    #[arg(long, value_parser = ["fixed", "normal", "uniform"])]
    pub size_dist: Option<String>,

    /// Mean node count for --size-dist normal
    #[arg(long, value_name = "M")]
    pub size_mean: Option<f64>,

    /// Node-count variance for --size-dist normal
    #[arg(long, value_name = "V")]
    pub size_var: Option<f64>,

    /// Node-count standard deviation; overrides --size-var
    #[arg(long, value_name = "S")]
    pub size_std: Option<f64>,

    /// Smallest node count for --size-dist uniform (inclusive)
    #[arg(long, value_name = "LO")]
    pub size_lo: Option<usize>,

    /// Largest node count for --size-dist uniform (inclusive)
    #[arg(long, value_name = "HI")]
    pub size_hi: Option<usize>,

    /// Model parameter on the A side of every change
    #[arg(long, value_name = "P")]
    pub p_a: Option<f64>,

    /// Model parameter on the B side of every change
    #[arg(long, value_name = "P")]
    pub p_b: Option<f64>,

    /// Cliques per caveman snapshot
    #[arg(long, value_name = "C")]
    pub communities: Option<usize>,

    /// Number of change points
    #[arg(long, value_name = "N")]
    pub changes: Option<usize>,

    /// Edge-list destination: "u v t" lines, t = snapshot index
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Ground-truth destination (JSON labels + change indices);
    /// default: schedule.json next to the edge list
    #[arg(long, value_name = "PATH")]
    pub schedule: Option<PathBuf>,
}

pub fn run(args: SynthArgs, ctx: &Ctx) -> Result<(), CliError> {
    let model = match pick_opt(args.model.as_deref(), ctx.config.raw("model")) {
        None | Some("er") => ModelKind::Er,
        Some("caveman") => ModelKind::Caveman,
        Some(other) => return Err(CliError::Input(format!("unknown model {other:?}"))),
    };
    let sizes = resolve_sizes(&args, ctx)?;
    let p_a = pick_opt(args.p_a, ctx.config.get_parsed("p-a")?)
        .ok_or_else(|| CliError::Input("--p-a is required".into()))?;
    let p_b = pick_opt(args.p_b, ctx.config.get_parsed("p-b")?)
        .ok_or_else(|| CliError::Input("--p-b is required".into()))?;
    let communities = pick(args.communities, ctx.config.get_parsed("communities")?, 5);
    let changes = pick(args.changes, ctx.config.get_parsed("changes")?, 100);

    let configure = |p: f64| match model {
        ModelKind::Er => ModelConfig::er(sizes, p),
        ModelKind::Caveman => ModelConfig::caveman(sizes, communities, p),
    };
    let spec = ScenarioSpec::new(configure(p_a), configure(p_b), changes, ctx.seed);
    let scenario = gen_scenario(&spec)?;

    let out_path = pick(
        args.output.clone(),
        ctx.config.get_parsed("output")?,
        PathBuf::from("scenario.edges"),
    );
    let schedule_path = pick_opt(args.schedule.clone(), ctx.config.get_parsed("schedule")?)
        .unwrap_or_else(|| out_path.with_file_name("schedule.json"));

    write_edges(&out_path, &scenario)?;
    write_schedule(&schedule_path, &scenario.schedule)?;
    eprintln!(
        "wrote {} snapshots ({} changes) to {} with ground truth in {}",
        scenario.snapshots.len(),
        scenario.schedule.change_points.len(),
        out_path.display(),
        schedule_path.display()
    );
    Ok(())
}

fn resolve_sizes(args: &SynthArgs, ctx: &Ctx) -> Result<SizeDist, CliError> {
    let n = pick_opt(args.n, ctx.config.get_parsed("n")?);
    let dist = pick_opt(args.size_dist.as_deref(), ctx.config.raw("size-dist"));
    let mean = pick_opt(args.size_mean, ctx.config.get_parsed("size-mean")?);
    let var = pick_opt(args.size_var, ctx.config.get_parsed("size-var")?);
    let std = pick_opt(args.size_std, ctx.config.get_parsed("size-std")?);
    let lo = pick_opt(args.size_lo, ctx.config.get_parsed("size-lo")?);
    let hi = pick_opt(args.size_hi, ctx.config.get_parsed("size-hi")?);

    // When --size-dist is not given, the parameters present pick one.
    let dist = match dist {
        Some(name) => name.to_string(),
        None if lo.is_some() || hi.is_some() => "uniform".into(),
        None if mean.is_some() || var.is_some() || std.is_some() => "normal".into(),
        None => "fixed".into(),
    };
    match dist.as_str() {
        "fixed" => Ok(SizeDist::Fixed(n.unwrap_or(200))),
        "normal" => {
            let variance = match std {
                Some(s) => s * s,
                None => var.unwrap_or(10.0),
            };
            Ok(SizeDist::Normal { mean: mean.unwrap_or(100.0), var: variance })
        }
        "uniform" => Ok(SizeDist::Uniform { lo: lo.unwrap_or(200), hi: hi.unwrap_or(1000) }),
        other => Err(CliError::Input(format!("unknown size distribution {other:?}"))),
    }
}

fn write_edges(path: &Path, scenario: &Scenario) -> Result<(), CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    for (t, snapshot) in scenario.snapshots.iter().enumerate() {
        for &(a, b) in &snapshot.edges {
            writeln!(w, "{a} {b} {t}")
                .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))?;
        }
    }
    w.flush().map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))
}

fn write_schedule(path: &Path, schedule: &Schedule) -> Result<(), CliError> {
    write_json(path, schedule)
}
