//! Per-segment classification by minimum weighted DTW score, trailing-
//! segment suppression, repetition counting, and the composed pipeline.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::config::{BaselineMode, PipelineConfig};
use crate::dtw::{axis_stats, dtw_alignment, weight_for, ScoreBreakdown};
use crate::error::{Error, Result};
use crate::segment::{Segment, StreamEvent, StreamSegmenter};
use crate::signal::{estimate_baseline, AccelSample, ScalarSeries};
use crate::template::TemplateStore;

/// Why a segment was not labeled.
#[derive(Debug, Clone, PartialEq)]
pub enum RejectReason {
    /// The best score still exceeded the effective threshold.
    AboveThreshold {
        best: String,
        score: f64,
        threshold: f64,
    },
    /// Two or more templates tied exactly for the minimum; an arbitrary
    /// choice would be unstable, so the segment is rejected and surfaced.
    Tie { labels: Vec<String>, score: f64 },
    /// The segment has too few samples for axis variance.
    TooShort { got: usize },
}

/// Classification outcome: a template label or a rejection.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Label(String),
    Rejected(RejectReason),
}

impl Outcome {
    pub fn label(&self) -> Option<&str> {
        match self {
            Outcome::Label(l) => Some(l),
            Outcome::Rejected(_) => None,
        }
    }
}

/// A scored segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub segment: Segment,
    pub outcome: Outcome,
    /// Per-template score breakdown; populated for every template.
    pub scores: BTreeMap<String, ScoreBreakdown>,
    /// Set by the counter when a prior match's suppression consumed this
    /// segment's slot.
    pub suppressed: bool,
}

impl Classification {
    /// Lowest weighted score and its label.
    pub fn winning(&self) -> Option<(&str, f64)> {
        self.scores
            .iter()
            .map(|(l, s)| (l.as_str(), s.weighted))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Second-lowest weighted score, if more than one template was scored.
    pub fn runner_up(&self) -> Option<f64> {
        let mut weighted: Vec<f64> = self.scores.values().map(|s| s.weighted).collect();
        weighted.sort_by(f64::total_cmp);
        weighted.get(1).copied()
    }
}

/// Score a segment against every template and pick the strict minimum.
///
/// The label is reported only when its weighted score is strictly lowest
/// and within the effective threshold — the winner's override if it has
/// one, else the global threshold. Exact ties reject deterministically.
pub fn classify_segment(
    segment: Segment,
    store: &TemplateStore,
    cfg: &PipelineConfig,
) -> Result<Classification> {
    if store.is_empty() {
        return Err(Error::EmptyStore);
    }
    // Too short for variance: score with neutral weight for diagnostics,
    // but never label.
    let seg_stats = axis_stats(&segment.data).ok();

    let mut scores = BTreeMap::new();
    for t in store.templates() {
        let alignment = dtw_alignment(&segment.data, t.data());
        let raw = if cfg.normalize {
            alignment.normalized()
        } else {
            alignment.cost
        };
        let weight = match &seg_stats {
            Some(s) => weight_for(s, t.stats(), cfg.match_weight),
            None => 1.0,
        };
        scores.insert(
            t.label().to_string(),
            ScoreBreakdown::new(raw, weight, cfg.normalize),
        );
    }

    let outcome = if seg_stats.is_none() {
        Outcome::Rejected(RejectReason::TooShort {
            got: segment.data.len(),
        })
    } else {
        let (best_label, best_score) = scores
            .iter()
            .map(|(l, s)| (l.as_str(), s.weighted))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("store is non-empty");
        let tied: Vec<String> = scores
            .iter()
            .filter(|(_, s)| s.weighted == best_score)
            .map(|(l, _)| l.clone())
            .collect();
        if tied.len() > 1 {
            Outcome::Rejected(RejectReason::Tie {
                labels: tied,
                score: best_score,
            })
        } else {
            let threshold = store
                .get(best_label)
                .and_then(|t| t.threshold_override())
                .unwrap_or(cfg.threshold);
            if best_score <= threshold {
                Outcome::Label(best_label.to_string())
            } else {
                Outcome::Rejected(RejectReason::AboveThreshold {
                    best: best_label.to_string(),
                    score: best_score,
                    threshold,
                })
            }
        }
    };

    Ok(Classification {
        segment,
        outcome,
        scores,
        suppressed: false,
    })
}

/// One counted repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct CountEvent {
    pub label: String,
    /// Running total for this label after the increment.
    pub count: u64,
    /// Midpoint of the counted segment — the moment the repetition is
    /// attributed to.
    pub t_ms: u64,
}

/// Running per-label totals plus the trailing-suppression window.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CountState {
    pub counts: BTreeMap<String, u64>,
    /// Segments left to skip after the last match.
    pub pending_suppression: u32,
    /// Most recently counted label.
    pub last_label: Option<String>,
}

impl CountState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self, label: &str) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }

    /// A discontinuity must not let a stale suppression window swallow the
    /// next exercise's first repetitions.
    pub fn clear_suppression(&mut self) {
        self.pending_suppression = 0;
    }
}

/// Fold one classification into the counts, in segment time order.
///
/// While a suppression window is open the segment's slot is consumed and
/// the classification is marked suppressed, whatever its outcome. A labeled
/// outcome counts one repetition and opens the window its template asks for;
/// rejected outcomes change nothing.
pub fn update_counts(
    classification: &mut Classification,
    state: &mut CountState,
    store: &TemplateStore,
) -> Option<CountEvent> {
    if state.pending_suppression > 0 {
        state.pending_suppression -= 1;
        classification.suppressed = true;
        return None;
    }
    let label = classification.outcome.label()?.to_string();
    let count = state.counts.entry(label.clone()).or_insert(0);
    *count += 1;
    let count = *count;
    state.pending_suppression = store
        .get(&label)
        .map(|t| t.suppress_trailing())
        .unwrap_or(0);
    state.last_label = Some(label.clone());
    Some(CountEvent {
        label,
        count,
        t_ms: classification.segment.mid_t_ms(),
    })
}

/// Everything the pipeline reports, in time order.
#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    /// A completed motion segment (timestamp of its closing peak).
    Segment { t_ms: u64, duration_ms: u64 },
    /// The segment's classification, with the two best weighted scores.
    Classified {
        t_ms: u64,
        outcome: Outcome,
        suppressed: bool,
        winning: Option<f64>,
        runner_up: Option<f64>,
    },
    /// A repetition was counted.
    Count {
        event: CountEvent,
        winning: Option<f64>,
        runner_up: Option<f64>,
    },
    /// Stream gap; window state was reset.
    Discontinuity { t_ms: u64 },
    /// End-of-stream totals, one per enrolled label.
    Summary {
        t_ms: u64,
        label: String,
        count: u64,
    },
}

/// Streaming composition: segmentation → classification → counting.
///
/// The energy baseline must be resolved before construction (see
/// [`resolve_baseline`]); everything downstream is incremental.
#[derive(Debug, Clone)]
pub struct Pipeline {
    segmenter: StreamSegmenter,
    store: TemplateStore,
    cfg: PipelineConfig,
    state: CountState,
    last_t_ms: u64,
    saw_samples: bool,
}

impl Pipeline {
    pub fn new(
        store: TemplateStore,
        cfg: PipelineConfig,
        sample_rate_hz: f64,
        baseline: f64,
    ) -> Result<Self> {
        if store.is_empty() {
            return Err(Error::EmptyStore);
        }
        cfg.validate()?;
        let segmenter = StreamSegmenter::new(sample_rate_hz, baseline, &cfg.segmenter())?;
        Ok(Self {
            segmenter,
            store,
            cfg,
            state: CountState::new(),
            last_t_ms: 0,
            saw_samples: false,
        })
    }

    pub fn counts(&self) -> &CountState {
        &self.state
    }

    fn handle(&mut self, stream_event: StreamEvent, out: &mut Vec<Event>) -> Result<()> {
        match stream_event {
            StreamEvent::Discontinuity { t_ms } => {
                self.state.clear_suppression();
                out.push(Event::Discontinuity { t_ms });
            }
            StreamEvent::Segment(segment) => {
                let t_ms = segment.end.t_ms;
                out.push(Event::Segment {
                    t_ms,
                    duration_ms: segment.duration_ms,
                });
                let mut classification = classify_segment(segment, &self.store, &self.cfg)?;
                let counted = update_counts(&mut classification, &mut self.state, &self.store);
                let winning = classification.winning().map(|(_, s)| s);
                let runner_up = classification.runner_up();
                out.push(Event::Classified {
                    t_ms,
                    outcome: classification.outcome.clone(),
                    suppressed: classification.suppressed,
                    winning,
                    runner_up,
                });
                if let Some(event) = counted {
                    out.push(Event::Count {
                        event,
                        winning,
                        runner_up,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn push(&mut self, sample: AccelSample) -> Result<Vec<Event>> {
        self.saw_samples = true;
        self.last_t_ms = sample.t_ms;
        let mut out = Vec::new();
        for ev in self.segmenter.push(sample)? {
            self.handle(ev, &mut out)?;
        }
        Ok(out)
    }

    /// Flush the segmenter and append the final per-label totals. An
    /// entirely empty stream reports nothing.
    pub fn finish(&mut self) -> Result<Vec<Event>> {
        let mut out = Vec::new();
        for ev in self.segmenter.finish() {
            self.handle(ev, &mut out)?;
        }
        if self.saw_samples {
            for t in self.store.templates() {
                out.push(Event::Summary {
                    t_ms: self.last_t_ms,
                    label: t.label().to_string(),
                    count: self.state.count(t.label()),
                });
            }
        }
        Ok(out)
    }
}

/// Resolve the configured baseline mode against recorded samples. The
/// median mode needs the whole stream, which is why live pipelines resolve
/// it from a calibration pre-pass or use a fixed value.
pub fn resolve_baseline(samples: &[AccelSample], mode: BaselineMode) -> Result<f64> {
    match mode {
        BaselineMode::Fixed(v) => Ok(v),
        BaselineMode::Median => {
            let norms: Vec<f64> = samples.iter().map(AccelSample::norm).collect();
            estimate_baseline(&ScalarSeries::new(1.0, norms)?)
        }
    }
}

/// Run the whole pipeline over a recorded stream.
pub fn run_pipeline(
    samples: &[AccelSample],
    store: &TemplateStore,
    cfg: &PipelineConfig,
    sample_rate_hz: f64,
) -> Result<(Vec<Event>, CountState)> {
    if store.is_empty() {
        return Err(Error::EmptyStore);
    }
    cfg.validate()?;
    if samples.is_empty() {
        return Ok((Vec::new(), CountState::new()));
    }
    let baseline = resolve_baseline(samples, cfg.baseline)?;
    let mut pipeline = Pipeline::new(store.clone(), *cfg, sample_rate_hz, baseline)?;
    let mut events = Vec::new();
    for &s in samples {
        events.extend(pipeline.push(s)?);
    }
    events.extend(pipeline.finish()?);
    let state = pipeline.counts().clone();
    Ok((events, state))
}

fn fmt_score(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v}"),
        None => "-".to_string(),
    }
}

/// One event as a log line. Fixed field order:
/// `kind t_ms label count winning runner_up`, `-` for fields that do not
/// apply. Rejections surface their reason in the label field as
/// `rejected:threshold`, `rejected:tie`, or `rejected:short`; a suppressed
/// segment's slot shows `s` in the count field.
pub fn event_line(event: &Event) -> String {
    match event {
        Event::Segment { t_ms, duration_ms } => {
            format!("segment {t_ms} - {duration_ms} - -")
        }
        Event::Classified {
            t_ms,
            outcome,
            suppressed,
            winning,
            runner_up,
        } => {
            let label = match outcome {
                Outcome::Label(l) => l.clone(),
                Outcome::Rejected(RejectReason::AboveThreshold { .. }) => {
                    "rejected:threshold".to_string()
                }
                Outcome::Rejected(RejectReason::Tie { .. }) => "rejected:tie".to_string(),
                Outcome::Rejected(RejectReason::TooShort { .. }) => "rejected:short".to_string(),
            };
            let slot = if *suppressed { "s" } else { "-" };
            format!(
                "classified {t_ms} {label} {slot} {} {}",
                fmt_score(*winning),
                fmt_score(*runner_up)
            )
        }
        Event::Count {
            event,
            winning,
            runner_up,
        } => format!(
            "count {} {} {} {} {}",
            event.t_ms,
            event.label,
            event.count,
            fmt_score(*winning),
            fmt_score(*runner_up)
        ),
        Event::Discontinuity { t_ms } => format!("discontinuity {t_ms} - - - -"),
        Event::Summary { t_ms, label, count } => {
            format!("summary {t_ms} {label} {count} - -")
        }
    }
}

/// Render a whole event log.
pub fn write_event_log(events: &[Event]) -> String {
    let mut out = String::new();
    for e in events {
        writeln!(out, "{}", event_line(e)).unwrap();
    }
    out
}

/// A parsed event log line; fields keep their textual form except the two
/// every consumer needs.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLine {
    pub kind: String,
    pub t_ms: u64,
    pub label: String,
    pub count: String,
    pub winning: String,
    pub runner_up: String,
}

/// Parse an event log produced by [`write_event_log`]. Blank lines and `#`
/// comments are skipped.
pub fn parse_event_log(text: &str) -> Result<Vec<LogLine>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let n = i + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line: n,
                msg: format!("expected 6 fields, got {}", fields.len()),
            });
        }
        let t_ms: u64 = fields[1].parse().map_err(|_| Error::Parse {
            line: n,
            msg: format!("bad timestamp: {:?}", fields[1]),
        })?;
        out.push(LogLine {
            kind: fields[0].to_string(),
            t_ms,
            label: fields[2].to_string(),
            count: fields[3].to_string(),
            winning: fields[4].to_string(),
            runner_up: fields[5].to_string(),
        });
    }
    Ok(out)
}

/// The (t_ms, label) pairs of counted repetitions — the evaluation input.
pub fn counted_events(log: &[LogLine]) -> Vec<(u64, String)> {
    log.iter()
        .filter(|l| l.kind == "count")
        .map(|l| (l.t_ms, l.label.clone()))
        .collect()
}
