//! Peak detection on the energy signal and extraction of single-motion
//! segments, in both batch and streaming form.
//!
//! A peak is an energy sample that is the strict maximum of a centered
//! sliding window (0.25 s by default) and clears an absolute prominence
//! floor. The raw 3-axis data between two consecutive peaks is one segment,
//! nominally one exercise motion. The streaming segmenter reproduces the
//! batch result exactly: a peak becomes confirmable only half a peak window
//! after its center, which is the pipeline's inherent emission latency.

use crate::error::{Error, Result};
use crate::signal::{
    euclidean_norm, window_energy, window_samples, AccelSample, ScalarSeries, TriaxialSeries,
};

/// A detected energy maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Sample index into the energy series (bout-relative in streaming use).
    pub index: usize,
    /// Timestamp of the underlying raw sample.
    pub t_ms: u64,
    /// Energy value at the peak.
    pub energy: f64,
}

/// The raw 3-axis span between two consecutive peaks.
///
/// Includes the start-peak sample and excludes the end-peak sample, so
/// consecutive segments tile without duplication.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start: Peak,
    pub end: Peak,
    pub data: TriaxialSeries,
    pub duration_ms: u64,
}

impl Segment {
    /// Midpoint timestamp, used to attribute the motion to a point in time.
    pub fn mid_t_ms(&self) -> u64 {
        self.start.t_ms + (self.end.t_ms - self.start.t_ms) / 2
    }
}

/// Resolve a peak window to an odd sample count of at least 3.
///
/// An even count rounds up to the next odd so the window has a center.
fn peak_window(window_s: f64, rate_hz: f64) -> Result<usize> {
    let mut w = window_samples(window_s, rate_hz);
    if w.is_multiple_of(2) {
        w += 1;
    }
    if w < 3 {
        return Err(Error::InvalidWindow(format!(
            "peak window {window_s} s at {rate_hz} Hz resolves to {w} samples, need >= 3"
        )));
    }
    Ok(w)
}

/// True when `values[i]` strictly exceeds every other value in the centered
/// window of half-width `half`. The caller guarantees the full window is in
/// range. Exact ties suppress the peak at both tied indices.
fn is_strict_window_max(values: &[f64], i: usize, half: usize) -> bool {
    let v = values[i];
    let before = &values[i - half..i];
    let after = &values[i + 1..=i + half];
    before.iter().chain(after).all(|&u| u < v)
}

/// Indices where the energy is the strict maximum of its centered window and
/// clears `min_prominence`. Only indices with a full window on both sides
/// qualify; a window longer than the series yields no peaks.
pub fn detect_peak_indices(
    energy: &ScalarSeries,
    window_s: f64,
    min_prominence: f64,
) -> Result<Vec<usize>> {
    if energy.is_empty() {
        return Err(Error::EmptySeries);
    }
    let w = peak_window(window_s, energy.sample_rate_hz())?;
    let half = w / 2;
    let values = energy.values();
    if values.len() < w {
        return Ok(Vec::new());
    }
    let mut peaks = Vec::new();
    for i in half..values.len() - half {
        if values[i] >= min_prominence && is_strict_window_max(values, i, half) {
            peaks.push(i);
        }
    }
    Ok(peaks)
}

/// [`detect_peak_indices`] with timestamps attached from the index-aligned
/// raw stream.
pub fn detect_peaks(
    energy: &ScalarSeries,
    window_s: f64,
    min_prominence: f64,
    timestamps: &[u64],
) -> Result<Vec<Peak>> {
    let indices = detect_peak_indices(energy, window_s, min_prominence)?;
    indices
        .into_iter()
        .map(|index| {
            let t_ms = *timestamps.get(index).ok_or(Error::PeakOutOfRange {
                index,
                len: timestamps.len(),
            })?;
            Ok(Peak {
                index,
                t_ms,
                energy: energy.values()[index],
            })
        })
        .collect()
}

/// Cut the raw stream at consecutive peaks: `len(peaks) - 1` segments, each
/// spanning `[peaks[k].index, peaks[k+1].index)`.
pub fn extract_segments(
    samples: &[AccelSample],
    sample_rate_hz: f64,
    peaks: &[Peak],
) -> Result<Vec<Segment>> {
    if let Some(p) = peaks.iter().find(|p| p.index >= samples.len()) {
        return Err(Error::PeakOutOfRange {
            index: p.index,
            len: samples.len(),
        });
    }
    peaks
        .windows(2)
        .map(|pair| {
            let (start, end) = (pair[0], pair[1]);
            let data: Vec<[f64; 3]> = samples[start.index..end.index]
                .iter()
                .map(|s| s.axes())
                .collect();
            Ok(Segment {
                start,
                end,
                data: TriaxialSeries::new(sample_rate_hz, data)?,
                duration_ms: end.t_ms - start.t_ms,
            })
        })
        .collect()
}

/// Parameters of the segmentation stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmenterConfig {
    /// Short-term-energy window, seconds.
    pub energy_window_s: f64,
    /// Peak-detection window, seconds (resolves to an odd count >= 3).
    pub peak_window_s: f64,
    /// Absolute energy floor below which no peak is reported, in g².
    pub min_prominence: f64,
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        Self {
            energy_window_s: 0.5,
            peak_window_s: 0.25,
            min_prominence: 0.05,
        }
    }
}

/// Batch segmentation of one gap-free run of samples: norm, energy against
/// the given baseline, peak detection, peak-to-peak extraction.
pub fn segment_bout(
    samples: &[AccelSample],
    sample_rate_hz: f64,
    baseline: f64,
    cfg: &SegmenterConfig,
) -> Result<(Vec<Peak>, Vec<Segment>)> {
    let raw = TriaxialSeries::new(sample_rate_hz, samples.iter().map(|s| s.axes()).collect())?;
    let norm = euclidean_norm(&raw);
    let energy = crate::signal::short_term_energy(&norm, cfg.energy_window_s, baseline)?;
    let timestamps: Vec<u64> = samples.iter().map(|s| s.t_ms).collect();
    let peaks = detect_peaks(&energy, cfg.peak_window_s, cfg.min_prominence, &timestamps)?;
    let segments = extract_segments(samples, sample_rate_hz, &peaks)?;
    Ok((peaks, segments))
}

/// Output of the streaming segmenter.
#[derive(Debug, Clone, PartialEq)]
pub enum StreamEvent {
    /// A completed motion segment, emitted once its closing peak confirmed.
    Segment(Segment),
    /// The inter-sample gap exceeded twice the sample period; window state
    /// was flushed and reset at this timestamp.
    Discontinuity { t_ms: u64 },
}

/// Incremental segmenter over an ordered sample stream.
///
/// Feeds one sample at a time and emits each segment as soon as its closing
/// peak is confirmed, which happens half a peak window after the peak's
/// center. Energy values are computed with exactly the arithmetic of the
/// batch path, so a whole stream pushed sample-by-sample (plus [`finish`])
/// yields the same segments as [`segment_bout`] on the same data.
///
/// The energy stage subtracts a fixed baseline resolved before streaming
/// starts (a calibration constant or a pre-pass median; see
/// [`crate::config::BaselineMode`]).
///
/// [`finish`]: StreamSegmenter::finish
#[derive(Debug, Clone)]
pub struct StreamSegmenter {
    rate_hz: f64,
    baseline: f64,
    energy_left: usize,
    energy_right: usize,
    peak_half: usize,
    min_prominence: f64,
    max_gap_ms: f64,

    // Per-bout state; the buffers grow with the bout and reset on gaps.
    raw: Vec<AccelSample>,
    norm: Vec<f64>,
    energy: Vec<f64>,
    last_peak: Option<Peak>,
    next_energy: usize,
    next_candidate: usize,
    last_t_ms: Option<u64>,
}

impl StreamSegmenter {
    pub fn new(sample_rate_hz: f64, baseline: f64, cfg: &SegmenterConfig) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidRate(sample_rate_hz));
        }
        let energy_w = window_samples(cfg.energy_window_s, sample_rate_hz);
        if energy_w == 0 {
            return Err(Error::InvalidWindow(format!(
                "energy window {} s at {sample_rate_hz} Hz resolves to 0 samples",
                cfg.energy_window_s
            )));
        }
        let peak_w = peak_window(cfg.peak_window_s, sample_rate_hz)?;
        Ok(Self {
            rate_hz: sample_rate_hz,
            baseline,
            energy_left: (energy_w - 1) / 2,
            energy_right: energy_w / 2,
            peak_half: peak_w / 2,
            min_prominence: cfg.min_prominence,
            max_gap_ms: 2.0 * 1000.0 / sample_rate_hz,
            raw: Vec::new(),
            norm: Vec::new(),
            energy: Vec::new(),
            last_peak: None,
            next_energy: 0,
            next_candidate: 0,
            last_t_ms: None,
        })
    }

    /// Samples a segment must wait after its closing peak before emission.
    pub fn confirmation_lag(&self) -> usize {
        self.peak_half
    }

    fn reset_bout(&mut self) {
        self.raw.clear();
        self.norm.clear();
        self.energy.clear();
        self.last_peak = None;
        self.next_energy = 0;
        self.next_candidate = 0;
    }

    /// Energy values whose full right half-window has arrived are final:
    /// the batch path computes the identical window over the same values.
    fn advance_energy(&mut self, clip_end: bool) {
        let end = self.norm.len();
        while self.next_energy < end {
            if !clip_end && self.next_energy + self.energy_right >= end {
                break;
            }
            let e = window_energy(
                &self.norm,
                self.next_energy,
                self.energy_left,
                self.energy_right,
                self.baseline,
            );
            self.energy.push(e);
            self.next_energy += 1;
        }
    }

    /// Evaluate peak candidates whose full peak window is available and emit
    /// a segment for every newly confirmed closing peak.
    fn advance_peaks(&mut self, out: &mut Vec<StreamEvent>) {
        while self.next_candidate + self.peak_half < self.energy.len() {
            let i = self.next_candidate;
            self.next_candidate += 1;
            if i < self.peak_half {
                continue;
            }
            if self.energy[i] < self.min_prominence
                || !is_strict_window_max(&self.energy, i, self.peak_half)
            {
                continue;
            }
            let peak = Peak {
                index: i,
                t_ms: self.raw[i].t_ms,
                energy: self.energy[i],
            };
            if let Some(prev) = self.last_peak {
                let data: Vec<[f64; 3]> = self.raw[prev.index..peak.index]
                    .iter()
                    .map(|s| s.axes())
                    .collect();
                // Peak spacing guarantees at least two samples per span.
                let segment = Segment {
                    start: prev,
                    end: peak,
                    data: TriaxialSeries::new(self.rate_hz, data)
                        .expect("peak spacing yields non-empty span"),
                    duration_ms: peak.t_ms - prev.t_ms,
                };
                out.push(StreamEvent::Segment(segment));
            }
            self.last_peak = Some(peak);
        }
    }

    /// Flush the current bout exactly as the batch path would end a series:
    /// remaining energy values use edge-clipped windows, remaining candidates
    /// with a full peak window are evaluated, and the bout state resets.
    fn flush_bout(&mut self, out: &mut Vec<StreamEvent>) {
        self.advance_energy(true);
        self.advance_peaks(out);
        self.reset_bout();
    }

    /// Feed one sample; returns any events it completes.
    ///
    /// Timestamps must strictly increase. A gap of more than twice the
    /// sample period flushes the current bout, reports a discontinuity, and
    /// starts a fresh bout at this sample.
    pub fn push(&mut self, sample: AccelSample) -> Result<Vec<StreamEvent>> {
        if !sample.is_finite() {
            return Err(Error::NonFinite {
                index: self.raw.len(),
            });
        }
        let mut events = Vec::new();
        if let Some(prev) = self.last_t_ms {
            if sample.t_ms <= prev {
                return Err(Error::StreamOrder {
                    prev,
                    next: sample.t_ms,
                });
            }
            if (sample.t_ms - prev) as f64 > self.max_gap_ms {
                self.flush_bout(&mut events);
                events.push(StreamEvent::Discontinuity { t_ms: sample.t_ms });
            }
        }
        self.last_t_ms = Some(sample.t_ms);
        self.norm.push(sample.norm());
        self.raw.push(sample);
        self.advance_energy(false);
        self.advance_peaks(&mut events);
        Ok(events)
    }

    /// End of stream: flush the final bout. The segmenter is reusable for a
    /// fresh stream afterwards.
    pub fn finish(&mut self) -> Vec<StreamEvent> {
        let mut events = Vec::new();
        if !self.raw.is_empty() {
            self.flush_bout(&mut events);
        }
        self.last_t_ms = None;
        events
    }
}
