//! Enrolled exercise templates and their persistence format.
//!
//! A template is one recorded motion — the raw 3-axis data of a single
//! peak-to-peak segment, stored verbatim — plus the label it stands for,
//! cached axis statistics, and a trailing-suppression count for motions
//! that produce several peaks per repetition.

use std::fmt::Write as _;
use std::path::Path;

use crate::dtw::{axis_stats, AxisStats};
use crate::error::{Error, Result};
use crate::segment::Segment;
use crate::signal::TriaxialSeries;

/// File format marker; bump the version on any incompatible change.
const FORMAT_HEADER: &str = "repkit-templates v1";

/// Labels appear as single fields in whitespace-delimited formats, so they
/// must be non-empty, free of whitespace and `:`, and distinct from the
/// reserved tokens `-` and `rejected` used in event log lines.
pub fn validate_label(label: &str) -> Result<()> {
    if label.is_empty()
        || label.contains(char::is_whitespace)
        || label.contains(':')
        || label == "-"
        || label == "rejected"
    {
        return Err(Error::InvalidLabel(label.to_string()));
    }
    Ok(())
}

/// One enrolled exercise motion.
#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    label: String,
    data: TriaxialSeries,
    stats: AxisStats,
    suppress_trailing: u32,
    threshold_override: Option<f64>,
}

impl Template {
    /// Build a template around a raw series. The series must be long enough
    /// for axis variance (≥ 2 samples); the label must satisfy
    /// [`validate_label`].
    pub fn new(
        label: impl Into<String>,
        data: TriaxialSeries,
        suppress_trailing: u32,
        threshold_override: Option<f64>,
    ) -> Result<Self> {
        let label = label.into();
        validate_label(&label)?;
        if let Some(t) = threshold_override {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Config(format!(
                    "threshold override for {label:?} must be finite and >= 0, got {t}"
                )));
            }
        }
        let stats = axis_stats(&data)?;
        Ok(Self {
            label,
            data,
            stats,
            suppress_trailing,
            threshold_override,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn data(&self) -> &TriaxialSeries {
        &self.data
    }

    pub fn stats(&self) -> &AxisStats {
        &self.stats
    }

    /// Segments to skip after this template matches.
    pub fn suppress_trailing(&self) -> u32 {
        self.suppress_trailing
    }

    /// Per-template rejection threshold, overriding the global one.
    pub fn threshold_override(&self) -> Option<f64> {
        self.threshold_override
    }
}

/// Wrap a detected segment's raw data verbatim as a template.
pub fn make_template(
    segment: &Segment,
    label: impl Into<String>,
    suppress_trailing: u32,
) -> Result<Template> {
    Template::new(label, segment.data.clone(), suppress_trailing, None)
}

/// Among enrollment candidates, the index of the median-duration segment —
/// the default pick, least likely to be a truncated or doubled motion.
pub fn pick_median_duration(segments: &[Segment]) -> Option<usize> {
    if segments.is_empty() {
        return None;
    }
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_by_key(|&i| (segments[i].duration_ms, i));
    Some(order[order.len() / 2])
}

/// An ordered collection of templates with unique labels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TemplateStore {
    templates: Vec<Template>,
}

impl TemplateStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, template: Template) -> Result<()> {
        if self.get(template.label()).is_some() {
            return Err(Error::DuplicateLabel(template.label().to_string()));
        }
        self.templates.push(template);
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<&Template> {
        self.templates.iter().find(|t| t.label() == label)
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

/// Serialize a store to the line-oriented text format.
///
/// Numbers are written with the shortest decimal representation that parses
/// back to the identical value, so save/load is exact for every sample.
pub fn write_store_string(store: &TemplateStore) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    for t in store.templates() {
        out.push('\n');
        writeln!(out, "template {}", t.label()).unwrap();
        writeln!(out, "rate {}", t.data().sample_rate_hz()).unwrap();
        writeln!(out, "suppress {}", t.suppress_trailing()).unwrap();
        if let Some(th) = t.threshold_override() {
            writeln!(out, "threshold {th}").unwrap();
        }
        writeln!(out, "samples {}", t.data().len()).unwrap();
        for [ax, ay, az] in t.data().samples() {
            writeln!(out, "{ax} {ay} {az}").unwrap();
        }
    }
    out
}

/// Lines paired with their 1-based numbers, comments and blanks skipped.
struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
        }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.trim();
            if !line.is_empty() && !line.starts_with('#') {
                return Some((i + 1, line));
            }
        }
        None
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Expect `key <value>` on the given line; return the value part.
fn expect_field<'a>(entry: Option<(usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
    let (n, line) =
        entry.ok_or_else(|| parse_err(0, format!("missing {key} line at end of file")))?;
    match line.split_once(char::is_whitespace) {
        Some((k, rest)) if k == key => Ok((n, rest.trim())),
        _ => Err(parse_err(n, format!("expected {key} line, got {line:?}"))),
    }
}

fn parse_f64(n: usize, field: &str, what: &str) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| parse_err(n, format!("{what}: not a number: {field:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(n, format!("{what}: non-finite value {field:?}")));
    }
    Ok(v)
}

/// Parse the text format produced by [`write_store_string`].
pub fn parse_store_str(text: &str) -> Result<TemplateStore> {
    let mut lines = Lines::new(text);
    match lines.next() {
        Some((_, line)) if line == FORMAT_HEADER => {}
        Some((_, line)) => return Err(Error::FormatVersion(line.to_string())),
        None => return Err(Error::FormatVersion("empty file".to_string())),
    }

    let mut store = TemplateStore::new();
    while let Some((n, line)) = lines.next() {
        let label = match line.split_once(char::is_whitespace) {
            Some(("template", rest)) => rest.trim().to_string(),
            _ => {
                return Err(parse_err(
                    n,
                    format!("expected template line, got {line:?}"),
                ))
            }
        };

        let (n_rate, rate_s) = expect_field(lines.next(), "rate")?;
        let rate = parse_f64(n_rate, rate_s, "rate")?;

        let (n_sup, sup_s) = expect_field(lines.next(), "suppress")?;
        let suppress: u32 = sup_s
            .parse()
            .map_err(|_| parse_err(n_sup, format!("suppress: not a count: {sup_s:?}")))?;

        // Optional threshold line, then the mandatory sample count.
        let mut entry = lines.next();
        let mut threshold = None;
        if let Some((n_th, line)) = entry {
            if let Some(("threshold", rest)) = line.split_once(char::is_whitespace) {
                threshold = Some(parse_f64(n_th, rest.trim(), "threshold")?);
                entry = lines.next();
            }
        }
        let (n_count, count_s) = expect_field(entry, "samples")?;
        let count: usize = count_s
            .parse()
            .map_err(|_| parse_err(n_count, format!("samples: not a count: {count_s:?}")))?;

        let mut samples = Vec::with_capacity(count);
        for _ in 0..count {
            let (n_row, row) = lines
                .next()
                .ok_or_else(|| parse_err(0, format!("template {label:?}: data rows end early")))?;
            let fields: Vec<&str> = row.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err(
                    n_row,
                    format!("expected 3 axis values, got {}", fields.len()),
                ));
            }
            samples.push([
                parse_f64(n_row, fields[0], "ax")?,
                parse_f64(n_row, fields[1], "ay")?,
                parse_f64(n_row, fields[2], "az")?,
            ]);
        }

        let data = TriaxialSeries::new(rate, samples)
            .map_err(|e| parse_err(n_count, format!("template {label:?}: {e}")))?;
        store.insert(Template::new(label, data, suppress, threshold)?)?;
    }
    Ok(store)
}

pub fn save_templates(store: &TemplateStore, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_store_string(store))?;
    Ok(())
}

pub fn load_templates(path: impl AsRef<Path>) -> Result<TemplateStore> {
    parse_store_str(&std::fs::read_to_string(path)?)
}
