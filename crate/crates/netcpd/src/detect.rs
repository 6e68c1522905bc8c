//! The `detect` subcommand: interaction log in, verdict stream out.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::Args;
use netcpd_core::degstats::DegreeSample;
use netcpd_core::detector::{
    detect_sequence, sensitivity_profile, BootstrapConfig, ChangeVerdict, DetectorError,
};
use netcpd_core::ingest::{aggregate, parse_events, partition, IngestError, Window};

use crate::config::{pick_opt, Config};
use crate::output::{open_sink, VerdictWriter};
use crate::pipeline::{build_windows, read_input, window_samples, DetectorFlags, WindowFlags, WindowPlan};
use crate::{CliError, Ctx};

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Interaction log, one "source target timestamp" per line (whitespace
    /// or comma separated); '-' reads stdin
    pub input: Option<PathBuf>,

    /// Write verdicts here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Confidence level; repeat the flag to profile several levels at once
    #[arg(long, value_name = "A")]
    pub alpha: Vec<f64>,

    /// Keep watching the input file and emit verdicts as windows close
    #[arg(long)]
    pub follow: bool,

    #[command(flatten)]
    pub window: WindowFlags,

    #[command(flatten)]
    pub detector: DetectorFlags,
}

pub fn run(args: DetectArgs, ctx: &Ctx) -> Result<(), CliError> {
    let plan = args.window.plan(&ctx.config)?;
    let alphas = resolve_alphas(&args.alpha, &ctx.config)?;
    let cfg = args.detector.bootstrap_config(&ctx.config, alphas[0], ctx.seed)?;
    cfg.validate()?;
    let input = pick_opt(args.input.clone(), ctx.config.get_parsed("input")?).ok_or_else(|| {
        CliError::Input("no input given (pass a path or '-' for stdin, or set input= in the config)".into())
    })?;
    let output = pick_opt(args.output.clone(), ctx.config.get_parsed("output")?);
    let follow = args.follow || ctx.config.get_bool("follow")?;

    let sink = open_sink(output.as_deref())?;
    let mut writer = VerdictWriter::new(ctx.format, sink);

    if follow {
        follow_loop(&input, &plan, &cfg, &alphas, &mut writer)
    } else {
        let reader = read_input(&input)?;
        let windows = build_windows(reader, &plan, ctx.verbose)?;
        let samples = window_samples(&windows, ctx.verbose);
        for verdict in detect(&samples, &cfg, &alphas)? {
            writer.write(&verdict)?;
        }
        Ok(())
    }
}

/// Confidence levels: repeated flag, else comma list in the config, else
/// the 0.95 default. Sorted ascending and deduplicated.
fn resolve_alphas(flag: &[f64], config: &Config) -> Result<Vec<f64>, CliError> {
    let mut alphas: Vec<f64> = if !flag.is_empty() {
        flag.to_vec()
    } else if let Some(raw) = config.raw("alpha") {
        raw.split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<f64>()
                    .map_err(|e| CliError::Input(format!("config key alpha: bad value {s:?}: {e}")))
            })
            .collect::<Result<_, _>>()?
    } else {
        vec![0.95]
    };
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    Ok(alphas)
}

fn detect(
    samples: &[Option<DegreeSample>],
    cfg: &BootstrapConfig,
    alphas: &[f64],
) -> Result<Vec<ChangeVerdict>, DetectorError> {
    let outcome = if alphas.len() == 1 {
        detect_sequence(samples, cfg)?
    } else {
        sensitivity_profile(samples, cfg, alphas)?
    };
    Ok(outcome.verdicts)
}

/// Polls the input file, recomputing the pipeline and emitting verdicts for
/// newly closed comparison windows. Runs until killed; the trailing
/// in-progress window is never judged, so output on a quiescent file is the
/// batch output minus its final pair.
fn follow_loop<W: Write>(
    input: &Path,
    plan: &WindowPlan,
    cfg: &BootstrapConfig,
    alphas: &[f64],
    writer: &mut VerdictWriter<W>,
) -> Result<(), CliError> {
    if input.as_os_str() == "-" {
        return Err(CliError::Input("--follow needs a file path, not stdin".into()));
    }
    let mut last_emitted: Option<usize> = None;
    loop {
        if let Some((windows, verdicts)) = follow_pass(input, plan, cfg, alphas)? {
            let mut newest = last_emitted;
            for verdict in &verdicts {
                let closed = !windows[verdict.comp_index].partial;
                if closed && last_emitted.map_or(true, |last| verdict.comp_index > last) {
                    writer.write(verdict)?;
                    newest = Some(newest.map_or(verdict.comp_index, |n| n.max(verdict.comp_index)));
                }
            }
            last_emitted = newest;
        }
        std::thread::sleep(Duration::from_millis(200));
    }
}

/// One polling pass. `Ok(None)` means "not enough data yet, keep waiting"
/// (missing file, no events, or fewer than two usable windows).
fn follow_pass(
    input: &Path,
    plan: &WindowPlan,
    cfg: &BootstrapConfig,
    alphas: &[f64],
) -> Result<Option<(Vec<Window>, Vec<ChangeVerdict>)>, CliError> {
    let file = match File::open(input) {
        Ok(f) => f,
        Err(_) => return Ok(None),
    };
    let parsed = parse_events(BufReader::new(file), plan.mode)?;
    let windows = match partition(parsed.events, &plan.spec) {
        Ok(w) => aggregate(w, plan.spec.slide_width, plan.spec.step),
        Err(IngestError::EmptyInput) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let samples = window_samples(&windows, false);
    match detect(&samples, cfg, alphas) {
        Ok(verdicts) => Ok(Some((windows, verdicts))),
        Err(DetectorError::TooFewWindows { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}
