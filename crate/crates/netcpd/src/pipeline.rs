//! Shared plumbing: flag groups and the log → windows → samples pipeline.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use clap::Args;
use netcpd_core::degstats::{degree_sample, DegreeSample};
use netcpd_core::detector::{BootstrapConfig, ResampleSize};
use netcpd_core::ingest::{
    aggregate, parse_events, partition, Align, ParseMode, Window, WindowMode, WindowSpec,
};
use netcpd_core::metrics::MetricKind;

use crate::config::{pick, pick_opt, Config};
use crate::CliError;

/// Windowing flags shared by `detect` and event-scored `bench`.
#[derive(Debug, Args)]
pub struct WindowFlags {
    /// Fixed window length in seconds (exclusive with --window-count)
    #[arg(long, value_name = "SECS")]
    pub window_duration: Option<u64>,

    /// Fixed number of events per window (exclusive with --window-duration)
    #[arg(long, value_name = "N")]
    pub window_count: Option<usize>,

    /// Consecutive base windows aggregated into each analysis window
    #[arg(long, value_name = "W")]
    pub slide: Option<usize>,

    /// Base windows between consecutive analysis windows (default: --slide)
    #[arg(long, value_name = "S")]
    pub step: Option<usize>,

    /// Start windows at the first event (origin) or snap to calendar
    /// boundaries (calendar: ISO weeks / days for matching durations)
    #[arg(long, value_parser = parse_align)]
    pub align: Option<Align>,

    /// Fail on malformed input lines instead of skipping them
    #[arg(long)]
    pub strict: bool,
}

fn parse_align(name: &str) -> Result<Align, String> {
    match name {
        "origin" => Ok(Align::Origin),
        "calendar" => Ok(Align::Calendar),
        other => Err(format!("unknown alignment {other:?} (expected origin or calendar)")),
    }
}

/// Fully resolved windowing choices.
pub struct WindowPlan {
    pub spec: WindowSpec,
    pub mode: ParseMode,
}

impl WindowFlags {
    pub fn plan(&self, config: &Config) -> Result<WindowPlan, CliError> {
        let duration = pick_opt(self.window_duration, config.get_parsed("window-duration")?);
        let count = pick_opt(self.window_count, config.get_parsed("window-count")?);
        let mode = match (duration, count) {
            (Some(seconds), None) => WindowMode::FixedDuration { seconds },
            (None, Some(events)) => WindowMode::FixedCount { events },
            (None, None) => {
                return Err(CliError::Input(
                    "exactly one of --window-duration or --window-count is required".into(),
                ))
            }
            (Some(_), Some(_)) => {
                return Err(CliError::Input(
                    "--window-duration and --window-count are mutually exclusive".into(),
                ))
            }
        };
        let slide = pick(self.slide, config.get_parsed("slide")?, 1);
        let step = pick(self.step, config.get_parsed("step")?, slide);
        let align = pick(self.align, config_align(config)?, Align::Origin);
        let strict = self.strict || config.get_bool("strict")?;
        Ok(WindowPlan {
            spec: WindowSpec { mode, slide_width: slide, step, align },
            mode: if strict { ParseMode::Strict } else { ParseMode::Lenient },
        })
    }
}

fn config_align(config: &Config) -> Result<Option<Align>, CliError> {
    config.raw("align").map(|v| parse_align(v).map_err(CliError::Input)).transpose()
}

/// Detector flags shared by `detect` and `bench`. Confidence levels are
/// subcommand-specific and passed into [`DetectorFlags::bootstrap_config`].
#[derive(Debug, Args)]
pub struct DetectorFlags {
    /// Distance between window degree distributions
    #[arg(long, value_parser = ["ks", "kl", "rh"])]
    pub metric: Option<String>,

    /// Additive smoothing count for the kl metric
    #[arg(long, value_name = "X")]
    pub kl_pseudocount: Option<f64>,

    /// Bootstrap resamples per comparison
    #[arg(long, value_name = "N")]
    pub bootstrap: Option<usize>,

    /// Null resample size: pair, harmonic, comp, base, or an explicit count
    #[arg(long, value_name = "SIZE", value_parser = parse_resample_size)]
    pub resample_size: Option<ResampleSize>,

    /// Cap both windows of every comparison at n uniformly sampled nodes
    #[arg(long, value_name = "N")]
    pub subsample: Option<usize>,
}

pub fn parse_resample_size(name: &str) -> Result<ResampleSize, String> {
    match name {
        "pair" => Ok(ResampleSize::Pair),
        "harmonic" => Ok(ResampleSize::Harmonic),
        "comp" | "comparison" => Ok(ResampleSize::MatchComparison),
        "base" => Ok(ResampleSize::MatchBase),
        other => other.parse::<usize>().map(ResampleSize::Explicit).map_err(|_| {
            format!("expected pair, harmonic, comp, base, or an integer; got {other:?}")
        }),
    }
}

impl DetectorFlags {
    pub fn metric_kind(&self, config: &Config) -> Result<MetricKind, CliError> {
        let pseudocount = pick(
            self.kl_pseudocount,
            config.get_parsed("kl-pseudocount")?,
            MetricKind::DEFAULT_KL_PSEUDOCOUNT,
        );
        match pick_opt(self.metric.as_deref(), config.raw("metric")) {
            None | Some("ks") => Ok(MetricKind::Ks),
            Some("kl") => Ok(MetricKind::Kl { pseudocount }),
            Some("rh") => Ok(MetricKind::Rh),
            Some(other) => {
                Err(CliError::Input(format!("unknown metric {other:?} (expected ks, kl, or rh)")))
            }
        }
    }

    pub fn bootstrap_config(
        &self,
        config: &Config,
        alpha: f64,
        seed: u64,
    ) -> Result<BootstrapConfig, CliError> {
        let resample_size = match pick_opt(self.resample_size, None) {
            Some(size) => size,
            None => match config.raw("resample-size") {
                Some(raw) => parse_resample_size(raw).map_err(CliError::Input)?,
                None => ResampleSize::default(),
            },
        };
        Ok(BootstrapConfig {
            n_resamples: pick(self.bootstrap, config.get_parsed("bootstrap")?, 1000),
            alpha,
            resample_size,
            seed,
            metric: self.metric_kind(config)?,
            subsample: pick_opt(self.subsample, config.get_parsed("subsample")?),
        })
    }
}

/// Opens the interaction log; `-` means stdin.
pub fn read_input(path: &Path) -> Result<Box<dyn BufRead>, CliError> {
    if path.as_os_str() == "-" {
        Ok(Box::new(BufReader::new(std::io::stdin())))
    } else {
        let file = File::open(path)
            .map_err(|e| CliError::Input(format!("cannot open {}: {e}", path.display())))?;
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Log → base windows → aggregated analysis windows.
pub fn build_windows<R: BufRead>(
    reader: R,
    plan: &WindowPlan,
    verbose: bool,
) -> Result<Vec<Window>, CliError> {
    let parsed = parse_events(reader, plan.mode)?;
    if verbose && parsed.skipped > 0 {
        eprintln!("skipped {} malformed line(s)", parsed.skipped);
    }
    let windows = partition(parsed.events, &plan.spec)?;
    Ok(aggregate(windows, plan.spec.slide_width, plan.spec.step))
}

/// Degree sample per window; windows without usable interactions become
/// `None` and are bridged over by the detector.
pub fn window_samples(windows: &[Window], verbose: bool) -> Vec<Option<DegreeSample>> {
    windows
        .iter()
        .map(|w| match degree_sample(w) {
            Ok(sample) => Some(sample),
            Err(_) => {
                if verbose {
                    eprintln!(
                        "window {} [{}, {}) has no usable interactions; bridging over it",
                        w.index, w.start, w.end
                    );
                }
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resample_size_names_parse() {
        assert_eq!(parse_resample_size("pair").unwrap(), ResampleSize::Pair);
        assert_eq!(parse_resample_size("harmonic").unwrap(), ResampleSize::Harmonic);
        assert_eq!(parse_resample_size("comp").unwrap(), ResampleSize::MatchComparison);
        assert_eq!(parse_resample_size("base").unwrap(), ResampleSize::MatchBase);
        assert_eq!(parse_resample_size("45").unwrap(), ResampleSize::Explicit(45));
        assert!(parse_resample_size("blorp").is_err());
    }
}
