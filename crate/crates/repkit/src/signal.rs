//! Sample and series primitives plus the norm and short-term-energy stages.
//!
//! The pipeline reduces a 3-axis acceleration stream to a scalar intensity
//! signal in two steps: the per-sample Euclidean norm (orientation-agnostic
//! motion intensity) followed by short-term energy, a windowed mean of squared
//! baseline-removed deviations that rectifies and smooths the norm so motion
//! peaks stand out.

use crate::error::{Error, Result};

/// One timestamped triaxial acceleration reading, in g (1 g = 9.80665 m/s²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelSample {
    /// Milliseconds since stream start. Strictly increasing within a stream.
    pub t_ms: u64,
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
}

impl AccelSample {
    pub fn new(t_ms: u64, ax: f64, ay: f64, az: f64) -> Self {
        Self { t_ms, ax, ay, az }
    }

    /// True when all three axis values are finite.
    pub fn is_finite(&self) -> bool {
        self.ax.is_finite() && self.ay.is_finite() && self.az.is_finite()
    }

    pub fn axes(&self) -> [f64; 3] {
        [self.ax, self.ay, self.az]
    }

    /// Euclidean norm of the three axes.
    pub fn norm(&self) -> f64 {
        (self.ax * self.ax + self.ay * self.ay + self.az * self.az).sqrt()
    }
}

/// A finite, uniformly sampled 3-axis acceleration sequence.
///
/// Holds both extracted motion segments and enrolled templates. Always
/// non-empty; all values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TriaxialSeries {
    sample_rate_hz: f64,
    samples: Vec<[f64; 3]>,
}

impl TriaxialSeries {
    pub fn new(sample_rate_hz: f64, samples: Vec<[f64; 3]>) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidRate(sample_rate_hz));
        }
        if samples.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = samples
            .iter()
            .position(|s| !s.iter().all(|v| v.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            sample_rate_hz,
            samples,
        })
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn samples(&self) -> &[[f64; 3]] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A uniformly sampled scalar sequence (norm or energy signal). May be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSeries {
    sample_rate_hz: f64,
    values: Vec<f64>,
}

impl ScalarSeries {
    pub fn new(sample_rate_hz: f64, values: Vec<f64>) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidRate(sample_rate_hz));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            sample_rate_hz,
            values,
        })
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Per-sample Euclidean norm of a 3-axis series.
///
/// Output length equals input length and the sample rate carries over.
pub fn euclidean_norm(series: &TriaxialSeries) -> ScalarSeries {
    let values = series
        .samples()
        .iter()
        .map(|[x, y, z]| (x * x + y * y + z * z).sqrt())
        .collect();
    ScalarSeries {
        sample_rate_hz: series.sample_rate_hz(),
        values,
    }
}

/// Resolve a window expressed in seconds to a sample count.
pub(crate) fn window_samples(window_s: f64, sample_rate_hz: f64) -> usize {
    (window_s * sample_rate_hz).round() as usize
}

/// Mean of squared deviations from `baseline` over a centered window of
/// `values`, clipped at the series edges. Shared by the batch and streaming
/// energy paths so both produce bit-identical values.
pub(crate) fn window_energy(
    values: &[f64],
    center: usize,
    left: usize,
    right: usize,
    baseline: f64,
) -> f64 {
    let lo = center.saturating_sub(left);
    let hi = (center + right).min(values.len() - 1);
    let mut sum = 0.0;
    for v in &values[lo..=hi] {
        let d = v - baseline;
        sum += d * d;
    }
    sum / (hi - lo + 1) as f64
}

/// Short-term energy: windowed mean of squared baseline-removed deviations.
///
/// The window is centered; at the series edges it is clipped and divided by
/// the actual in-window count, so output length equals input length. The
/// window length is `round(window_s × sample_rate_hz)` samples and must
/// resolve to at least 1.
pub fn short_term_energy(
    norm: &ScalarSeries,
    window_s: f64,
    baseline: f64,
) -> Result<ScalarSeries> {
    if norm.is_empty() {
        return Err(Error::EmptySeries);
    }
    let w = window_samples(window_s, norm.sample_rate_hz());
    if w == 0 {
        return Err(Error::InvalidWindow(format!(
            "{window_s} s at {} Hz resolves to 0 samples",
            norm.sample_rate_hz()
        )));
    }
    // A window of w samples centered on i spans (w-1)/2 back and w/2 forward.
    let left = (w - 1) / 2;
    let right = w / 2;
    let values = (0..norm.len())
        .map(|i| window_energy(norm.values(), i, left, right, baseline))
        .collect();
    Ok(ScalarSeries {
        sample_rate_hz: norm.sample_rate_hz(),
        values,
    })
}

/// Median of the series values; the resting level of a norm signal.
///
/// A worn, resting sensor reads close to 1 g, so the median tracks the
/// gravity offset as long as rest dominates the recording.
pub fn estimate_baseline(norm: &ScalarSeries) -> Result<f64> {
    if norm.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut sorted = norm.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Ok(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    })
}
