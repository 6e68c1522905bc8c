//! Event-log parsing and window construction.
//!
//! Input is a line-oriented edge list: `source target timestamp` (whitespace
//! or comma separated, auto-detected from the first data line; `#` starts a
//! comment). Events are partitioned into base windows either by fixed
//! duration or by fixed event count, and base windows can then be aggregated
//! into sliding analysis windows.

use std::io::BufRead;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: malformed event line")]
    MalformedLine { line: usize },
    #[error("no events in input")]
    EmptyInput,
    #[error("invalid window specification: {0}")]
    InvalidSpec(String),
    #[error("failed to read input: {0}")]
    Io(#[from] std::io::Error),
}

/// One timestamped interaction between two nodes; the raw input unit.
///
/// Identifiers are opaque strings. Self-interactions are permitted here and
/// dropped during degree extraction; duplicate events are kept so ingest
/// stays lossless.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionEvent {
    pub source: String,
    pub target: String,
    /// Seconds since epoch (non-negative integer).
    pub timestamp: u64,
}

/// How to treat lines that do not parse as events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Skip malformed lines, counting them.
    #[default]
    Lenient,
    /// Fail on the first malformed line.
    Strict,
}

/// Parsed events plus the number of lines skipped in lenient mode.
#[derive(Debug, Clone)]
pub struct ParsedEvents {
    pub events: Vec<InteractionEvent>,
    pub skipped: usize,
}

/// Parses a line-oriented event log.
///
/// The separator (whitespace or comma) is auto-detected from the first
/// non-empty, non-comment line. Each data line must have exactly three
/// fields with non-empty identifiers and an unsigned integer timestamp. In
/// strict mode the first malformed line aborts with its 1-based line number;
/// in lenient mode malformed lines are skipped and counted.
pub fn parse_events<R: BufRead>(reader: R, mode: ParseMode) -> Result<ParsedEvents, IngestError> {
    let mut events = Vec::new();
    let mut skipped = 0usize;
    let mut comma: Option<bool> = None;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let comma = *comma.get_or_insert_with(|| trimmed.contains(','));
        match parse_line(trimmed, comma) {
            Some(event) => events.push(event),
            None => match mode {
                ParseMode::Strict => return Err(IngestError::MalformedLine { line: lineno }),
                ParseMode::Lenient => skipped += 1,
            },
        }
    }
    Ok(ParsedEvents { events, skipped })
}

fn parse_line(line: &str, comma: bool) -> Option<InteractionEvent> {
    let fields: Vec<&str> = if comma {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    };
    if fields.len() != 3 || fields[0].is_empty() || fields[1].is_empty() {
        return None;
    }
    let timestamp: u64 = fields[2].parse().ok()?;
    Some(InteractionEvent {
        source: fields[0].to_string(),
        target: fields[1].to_string(),
        timestamp,
    })
}

/// Where fixed-duration windows are anchored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Align {
    /// Windows start at the first event's timestamp.
    #[default]
    Origin,
    /// Snap the start down to a calendar boundary (UTC): the enclosing ISO
    /// week start (Monday 00:00) for whole-week durations, the enclosing day
    /// start for whole-day durations, otherwise the enclosing multiple of
    /// the duration since epoch.
    Calendar,
}

/// Window construction mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowMode {
    /// Contiguous `[t0 + i*seconds, t0 + (i+1)*seconds)` spans; empty
    /// windows are emitted and the trailing window is flagged partial.
    FixedDuration { seconds: u64 },
    /// Consecutive blocks of `events` events; a short trailing block is
    /// flagged partial. Never produces empty windows.
    FixedCount { events: usize },
}

/// Full windowing specification: base-window mode plus sliding aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    pub mode: WindowMode,
    /// Number of consecutive base windows per analysis window (>= 1).
    pub slide_width: usize,
    /// Offset in base windows between analysis windows (>= 1).
    pub step: usize,
    pub align: Align,
}

impl WindowSpec {
    pub fn fixed_duration(seconds: u64) -> Self {
        WindowSpec {
            mode: WindowMode::FixedDuration { seconds },
            slide_width: 1,
            step: 1,
            align: Align::Origin,
        }
    }

    pub fn fixed_count(events: usize) -> Self {
        WindowSpec {
            mode: WindowMode::FixedCount { events },
            slide_width: 1,
            step: 1,
            align: Align::Origin,
        }
    }

    fn validate(&self) -> Result<(), IngestError> {
        match self.mode {
            WindowMode::FixedDuration { seconds } if seconds == 0 => {
                return Err(IngestError::InvalidSpec("window duration must be >= 1 second".into()));
            }
            WindowMode::FixedCount { events } if events == 0 => {
                return Err(IngestError::InvalidSpec("window event count must be >= 1".into()));
            }
            _ => {}
        }
        if self.slide_width == 0 {
            return Err(IngestError::InvalidSpec("slide width must be >= 1".into()));
        }
        if self.step == 0 {
            return Err(IngestError::InvalidSpec("step must be >= 1".into()));
        }
        Ok(())
    }
}

/// A contiguous slice of the event stream.
#[derive(Debug, Clone)]
pub struct Window {
    /// Ordinal position in the window sequence.
    pub index: usize,
    pub start: u64,
    /// Exclusive; every event timestamp lies in `[start, end)`.
    pub end: u64,
    pub events: Vec<InteractionEvent>,
    /// True when the window may not cover a full span: the trailing window
    /// in fixed-duration mode (the log may end before the span does) or a
    /// short trailing block in fixed-count mode.
    pub partial: bool,
}

impl Window {
    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

const SECS_PER_DAY: u64 = 86_400;
const SECS_PER_WEEK: u64 = 7 * SECS_PER_DAY;
/// 1970-01-01 is a Thursday; the enclosing ISO week starts 3 days earlier.
const EPOCH_WEEKDAY_OFFSET: u64 = 3;

fn align_origin(t0: u64, duration: u64, align: Align) -> u64 {
    match align {
        Align::Origin => t0,
        Align::Calendar => {
            if duration % SECS_PER_WEEK == 0 {
                let days = t0 / SECS_PER_DAY;
                let since_monday = (days + EPOCH_WEEKDAY_OFFSET) % 7;
                days.saturating_sub(since_monday) * SECS_PER_DAY
            } else if duration % SECS_PER_DAY == 0 {
                (t0 / SECS_PER_DAY) * SECS_PER_DAY
            } else {
                (t0 / duration) * duration
            }
        }
    }
}

/// Splits events into base windows.
///
/// Events are stably sorted by timestamp first, so the concatenation of the
/// returned windows reproduces the (time-ordered) input. Fixed-duration mode
/// emits empty windows for gaps so indices stay aligned with wall-clock
/// spans; the detector skips them later.
pub fn partition(events: Vec<InteractionEvent>, spec: &WindowSpec) -> Result<Vec<Window>, IngestError> {
    spec.validate()?;
    if events.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    let mut events = events;
    events.sort_by_key(|e| e.timestamp);

    match spec.mode {
        WindowMode::FixedDuration { seconds } => {
            let origin = align_origin(events[0].timestamp, seconds, spec.align);
            let last = events.last().expect("non-empty").timestamp;
            let count = ((last - origin) / seconds + 1) as usize;
            let mut windows: Vec<Window> = (0..count)
                .map(|i| Window {
                    index: i,
                    start: origin + i as u64 * seconds,
                    end: origin + (i + 1) as u64 * seconds,
                    events: Vec::new(),
                    partial: i == count - 1,
                })
                .collect();
            for event in events {
                let i = ((event.timestamp - origin) / seconds) as usize;
                windows[i].events.push(event);
            }
            Ok(windows)
        }
        WindowMode::FixedCount { events: per_window } => {
            let mut windows = Vec::new();
            let mut iter = events.into_iter().peekable();
            let mut index = 0usize;
            while iter.peek().is_some() {
                let chunk: Vec<InteractionEvent> = iter.by_ref().take(per_window).collect();
                let start = chunk[0].timestamp;
                let end = chunk.last().expect("non-empty chunk").timestamp + 1;
                let partial = chunk.len() < per_window;
                windows.push(Window { index, start, end, events: chunk, partial });
                index += 1;
            }
            Ok(windows)
        }
    }
}

/// Merges base windows into sliding analysis windows.
///
/// Analysis window `j` is the union of base windows
/// `[j*step, j*step + slide_width)`; a trailing group with fewer than
/// `slide_width` base windows is dropped. With `slide_width == 1` and
/// `step == 1` this is the identity (up to re-indexing).
pub fn aggregate(windows: Vec<Window>, slide_width: usize, step: usize) -> Vec<Window> {
    assert!(slide_width >= 1 && step >= 1, "validated by WindowSpec");
    if slide_width == 1 && step == 1 {
        return windows
            .into_iter()
            .enumerate()
            .map(|(j, mut w)| {
                w.index = j;
                w
            })
            .collect();
    }
    let mut merged = Vec::new();
    let mut j = 0usize;
    while j * step + slide_width <= windows.len() {
        let group = &windows[j * step..j * step + slide_width];
        merged.push(Window {
            index: j,
            start: group[0].start,
            end: group.last().expect("slide_width >= 1").end,
            events: group.iter().flat_map(|w| w.events.iter().cloned()).collect(),
            partial: group.iter().any(|w| w.partial),
        });
        j += 1;
    }
    merged
}
