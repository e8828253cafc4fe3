//! Pipeline configuration and its key=value file format.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::segment::SegmenterConfig;

/// How the energy stage's baseline is obtained.
///
/// The norm of a resting sensor sits near 1 g; the baseline is subtracted
/// before squaring so rest maps to near-zero energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaselineMode {
    /// Median of the whole stream's norm. Needs the full stream, so live
    /// streaming resolves it from a calibration pre-pass or recorded data.
    Median,
    /// A fixed value in g (1.0 approximates gravity at rest).
    Fixed(f64),
}

/// Knobs of the full pipeline. See each field for whether the default is a
/// method constant or a tuning artifact of this implementation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    /// Short-term-energy window, seconds. Tuning default: 0.5 s.
    pub energy_window_s: f64,
    /// Peak-detection window, seconds. Method constant: 0.25 s.
    pub peak_window_s: f64,
    /// Energy floor for peaks, g². Tuned on the synthetic generator: 0.05.
    pub min_prominence: f64,
    /// Global rejection threshold on the weighted (normalized) DTW score.
    /// Empirical: 1.5× the median same-pattern score measured on noisy
    /// synthetic sessions — wrong-pattern and rest-spanning segments start
    /// around 1.7× there. No canonical value exists; tune per deployment.
    pub threshold: f64,
    /// Discount applied when segment and template share a dominant axis,
    /// in (0, 1]. Method exemplar value: 0.9.
    pub match_weight: f64,
    /// Divide DTW cost by alignment path length, making one threshold serve
    /// variable-length segments. Off mirrors raw-score thresholding.
    pub normalize: bool,
    /// Baseline resolution mode.
    pub baseline: BaselineMode,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            energy_window_s: 0.5,
            peak_window_s: 0.25,
            min_prominence: 0.05,
            threshold: 0.12,
            match_weight: 0.9,
            normalize: true,
            baseline: BaselineMode::Median,
        }
    }
}

impl PipelineConfig {
    /// The subset consumed by the segmentation stages.
    pub fn segmenter(&self) -> SegmenterConfig {
        SegmenterConfig {
            energy_window_s: self.energy_window_s,
            peak_window_s: self.peak_window_s,
            min_prominence: self.min_prominence,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("energy_window_s", self.energy_window_s),
            ("peak_window_s", self.peak_window_s),
        ];
        for (key, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{key} must be positive, got {v}")));
            }
        }
        let non_negative = [
            ("min_prominence", self.min_prominence),
            ("threshold", self.threshold),
        ];
        for (key, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!("{key} must be >= 0, got {v}")));
            }
        }
        if !(self.match_weight.is_finite() && self.match_weight > 0.0 && self.match_weight <= 1.0) {
            return Err(Error::Config(format!(
                "match_weight must be in (0, 1], got {}",
                self.match_weight
            )));
        }
        if let BaselineMode::Fixed(v) = self.baseline {
            if !v.is_finite() {
                return Err(Error::Config(format!("baseline must be finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// Serialize as key=value lines (the file format of `--config`).
pub fn write_config_string(cfg: &PipelineConfig) -> String {
    let mut out = String::new();
    writeln!(out, "energy_window_s={}", cfg.energy_window_s).unwrap();
    writeln!(out, "peak_window_s={}", cfg.peak_window_s).unwrap();
    writeln!(out, "min_prominence={}", cfg.min_prominence).unwrap();
    writeln!(out, "threshold={}", cfg.threshold).unwrap();
    writeln!(out, "match_weight={}", cfg.match_weight).unwrap();
    writeln!(out, "normalize={}", cfg.normalize).unwrap();
    match cfg.baseline {
        BaselineMode::Median => writeln!(out, "baseline=median").unwrap(),
        BaselineMode::Fixed(v) => writeln!(out, "baseline={v}").unwrap(),
    }
    out
}

/// Parse key=value lines over the defaults. Blank lines and `#` comments are
/// skipped; unknown keys and malformed values are errors.
pub fn parse_config_str(text: &str) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let n = i + 1;
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: n,
            msg: format!("expected key=value, got {line:?}"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| Error::Parse {
            line: n,
            msg: format!("{key}: {what}: {value:?}"),
        };
        let num = || value.parse::<f64>().map_err(|_| bad("not a number"));
        match key {
            "energy_window_s" => cfg.energy_window_s = num()?,
            "peak_window_s" => cfg.peak_window_s = num()?,
            "min_prominence" => cfg.min_prominence = num()?,
            "threshold" => cfg.threshold = num()?,
            "match_weight" => cfg.match_weight = num()?,
            "normalize" => {
                cfg.normalize = value.parse::<bool>().map_err(|_| bad("not true/false"))?
            }
            "baseline" => {
                cfg.baseline = if value == "median" {
                    BaselineMode::Median
                } else {
                    BaselineMode::Fixed(num()?)
                }
            }
            _ => return Err(bad("unknown key")),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn save_config(cfg: &PipelineConfig, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_config_string(cfg))?;
    Ok(())
}

pub fn load_config(path: impl AsRef<Path>) -> Result<PipelineConfig> {
    parse_config_str(&std::fs::read_to_string(path)?)
}
