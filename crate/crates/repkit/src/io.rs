//! CSV stream ingestion and emission — the recorded-data boundary.
//!
//! A stream file is one header comment declaring rate, units, and axis
//! order, then `t_ms,ax,ay,az` rows:
//!
//! ```text
//! # rate=50 units=g axes=xyz
//! 0,0.01,-0.02,0.99
//! 20,0.02,-0.01,1.01
//! ```
//!
//! Values are converted to g at ingest; everything downstream works in g.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::signal::AccelSample;

/// Standard gravity, m/s² per g.
pub const STANDARD_GRAVITY: f64 = 9.80665;

/// Units the file's values are recorded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    G,
    MetersPerSecondSquared,
}

impl Units {
    fn as_str(self) -> &'static str {
        match self {
            Units::G => "g",
            Units::MetersPerSecondSquared => "m/s2",
        }
    }

    fn to_g(self, v: f64) -> f64 {
        match self {
            Units::G => v,
            Units::MetersPerSecondSquared => v / STANDARD_GRAVITY,
        }
    }
}

/// Stream declaration from the header comment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamHeader {
    pub sample_rate_hz: f64,
    pub units: Units,
    /// Column order of the three axis fields, a permutation of "xyz".
    /// Ingest reorders into x, y, z.
    pub axes: [u8; 3],
}

impl StreamHeader {
    pub fn new(sample_rate_hz: f64) -> Self {
        Self {
            sample_rate_hz,
            units: Units::G,
            axes: *b"xyz",
        }
    }
}

fn header_line(header: &StreamHeader) -> String {
    format!(
        "# rate={} units={} axes={}",
        header.sample_rate_hz,
        header.units.as_str(),
        std::str::from_utf8(&header.axes).unwrap()
    )
}

fn parse_header(n: usize, line: &str) -> Result<StreamHeader> {
    let perr = |msg: String| Error::Parse { line: n, msg };
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| perr(format!("first line must be a header comment, got {line:?}")))?;
    let mut rate = None;
    let mut units = Units::G;
    let mut axes = *b"xyz";
    for field in body.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| perr(format!("header field is not key=value: {field:?}")))?;
        match key {
            "rate" => {
                let v: f64 = value
                    .parse()
                    .map_err(|_| perr(format!("rate is not a number: {value:?}")))?;
                if !(v.is_finite() && v > 0.0) {
                    return Err(perr(format!("rate must be positive, got {value}")));
                }
                rate = Some(v);
            }
            "units" => {
                units = match value {
                    "g" => Units::G,
                    "m/s2" | "m/s^2" => Units::MetersPerSecondSquared,
                    _ => return Err(perr(format!("unknown units: {value:?}"))),
                }
            }
            "axes" => {
                let b = value.as_bytes();
                let mut sorted = b.to_vec();
                sorted.sort_unstable();
                if sorted != b"xyz" {
                    return Err(perr(format!("axes must permute \"xyz\", got {value:?}")));
                }
                axes = [b[0], b[1], b[2]];
            }
            _ => return Err(perr(format!("unknown header field: {key:?}"))),
        }
    }
    let sample_rate_hz = rate.ok_or_else(|| perr("header is missing rate=".to_string()))?;
    Ok(StreamHeader {
        sample_rate_hz,
        units,
        axes,
    })
}

/// Parse a stream file. Strict: the first line must be the header comment;
/// every data row must have four finite numeric fields and strictly
/// increasing timestamps. All errors cite their 1-based line number.
pub fn parse_csv_str(text: &str) -> Result<(StreamHeader, Vec<AccelSample>)> {
    let mut lines = text.lines().enumerate();
    let (first_n, first) = lines
        .by_ref()
        .map(|(i, l)| (i + 1, l.trim()))
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty file".to_string(),
        })?;
    let header = parse_header(first_n, first)?;

    let mut samples = Vec::new();
    let mut prev_t: Option<u64> = None;
    for (i, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let n = i + 1;
        let perr = |msg: String| Error::Parse { line: n, msg };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(perr(format!("expected 4 fields, got {}", fields.len())));
        }
        let t_ms: u64 = fields[0]
            .parse()
            .map_err(|_| perr(format!("bad timestamp: {:?}", fields[0])))?;
        if let Some(prev) = prev_t {
            if t_ms <= prev {
                return Err(perr(format!(
                    "timestamp regression: {prev} ms followed by {t_ms} ms"
                )));
            }
        }
        prev_t = Some(t_ms);
        let mut by_column = [0.0f64; 3];
        for (k, field) in fields[1..].iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| perr(format!("not a number: {field:?}")))?;
            if !v.is_finite() {
                return Err(perr(format!("non-finite value: {field:?}")));
            }
            by_column[k] = header.units.to_g(v);
        }
        // Columns arrive in header-declared order; store as x, y, z.
        let mut xyz = [0.0f64; 3];
        for (k, &axis) in header.axes.iter().enumerate() {
            xyz[(axis - b'x') as usize] = by_column[k];
        }
        samples.push(AccelSample::new(t_ms, xyz[0], xyz[1], xyz[2]));
    }
    Ok((header, samples))
}

/// Serialize samples (already in g) under the given header's rate. Units
/// are always written as g and axes in x,y,z order, so emitted files
/// re-ingest to the identical sample values.
pub fn write_csv_string(sample_rate_hz: f64, samples: &[AccelSample]) -> String {
    let header = StreamHeader::new(sample_rate_hz);
    let mut out = header_line(&header);
    out.push('\n');
    for s in samples {
        writeln!(out, "{},{},{},{}", s.t_ms, s.ax, s.ay, s.az).unwrap();
    }
    out
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<(StreamHeader, Vec<AccelSample>)> {
    parse_csv_str(&std::fs::read_to_string(path)?)
}

pub fn write_csv(
    path: impl AsRef<Path>,
    sample_rate_hz: f64,
    samples: &[AccelSample],
) -> Result<()> {
    std::fs::write(path, write_csv_string(sample_rate_hz, samples))?;
    Ok(())
}
