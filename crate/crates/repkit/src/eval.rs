//! Ground-truth matching, confusion-matrix bookkeeping, and the
//! precision/recall/F1 arithmetic used to evaluate a session.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Truth×predicted counts plus the two failure tallies: `overlooked` counts
/// real repetitions that produced no prediction, `mistook` counts
/// predictions made where nothing happened.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    /// cells[truth][predicted]
    cells: Vec<Vec<u64>>,
    overlooked: Vec<u64>,
    mistook: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            cells: vec![vec![0; n]; n],
            overlooked: vec![0; n],
            mistook: vec![0; n],
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn cell(&self, truth: usize, predicted: usize) -> u64 {
        self.cells[truth][predicted]
    }

    pub fn set_cell(&mut self, truth: usize, predicted: usize, count: u64) {
        self.cells[truth][predicted] = count;
    }

    pub fn add_match(&mut self, truth: usize, predicted: usize) {
        self.cells[truth][predicted] += 1;
    }

    pub fn overlooked(&self, truth: usize) -> u64 {
        self.overlooked[truth]
    }

    pub fn set_overlooked(&mut self, truth: usize, count: u64) {
        self.overlooked[truth] = count;
    }

    pub fn add_overlooked(&mut self, truth: usize) {
        self.overlooked[truth] += 1;
    }

    pub fn mistook(&self, predicted: usize) -> u64 {
        self.mistook[predicted]
    }

    pub fn set_mistook(&mut self, predicted: usize, count: u64) {
        self.mistook[predicted] = count;
    }

    pub fn add_mistook(&mut self, predicted: usize) {
        self.mistook[predicted] += 1;
    }

    pub fn total_cells(&self) -> u64 {
        self.cells.iter().flatten().sum()
    }

    pub fn total_diagonal(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.cells[i][i]).sum()
    }

    pub fn total_overlooked(&self) -> u64 {
        self.overlooked.iter().sum()
    }

    pub fn total_mistook(&self) -> u64 {
        self.mistook.iter().sum()
    }

    fn row_sum(&self, truth: usize) -> u64 {
        self.cells[truth].iter().sum()
    }

    fn col_sum(&self, predicted: usize) -> u64 {
        self.cells.iter().map(|row| row[predicted]).sum()
    }
}

/// One precision/recall/F1 triple, each in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// 0/0 ratios read as vacuous perfection: an empty evaluation is not a
/// failure. A genuinely failing evaluation has a nonzero denominator and
/// reads as 0.
fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

impl Prf {
    fn from_counts(num: u64, den_p: u64, den_r: u64) -> Self {
        let precision = ratio(num, den_p);
        let recall = ratio(num, den_r);
        Self {
            precision,
            recall,
            f1: f1(precision, recall),
        }
    }
}

/// How well motion boundaries were found, classification aside: any
/// truth×predicted match — right or wrong label — was a correctly cut
/// segment. Precision counts mistook against it, recall counts overlooked.
pub fn segmentation_metrics(cm: &ConfusionMatrix) -> Prf {
    let matched = cm.total_cells();
    Prf::from_counts(
        matched,
        matched + cm.total_mistook(),
        matched + cm.total_overlooked(),
    )
}

/// Per-label and pooled (micro) classification quality.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub labels: Vec<String>,
    pub per_label: Vec<Prf>,
    pub micro: Prf,
    pub segmentation: Prf,
}

pub fn classification_metrics(cm: &ConfusionMatrix) -> MetricsReport {
    let per_label = (0..cm.labels.len())
        .map(|i| {
            Prf::from_counts(
                cm.cells[i][i],
                cm.col_sum(i) + cm.mistook[i],
                cm.row_sum(i) + cm.overlooked[i],
            )
        })
        .collect();
    let micro = Prf::from_counts(
        cm.total_diagonal(),
        cm.total_cells() + cm.total_mistook(),
        cm.total_cells() + cm.total_overlooked(),
    );
    MetricsReport {
        labels: cm.labels.clone(),
        per_label,
        micro,
        segmentation: segmentation_metrics(cm),
    }
}

/// One ground-truth repetition: the time span it occupied and its label.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthInterval {
    pub start_ms: u64,
    pub end_ms: u64,
    pub label: String,
}

/// Pair predicted count events with truth repetitions.
///
/// Events are taken in time order; each event matches the earliest
/// still-unmatched interval whose span (widened by `tolerance_ms` at both
/// ends) contains its timestamp. An event no interval claims is a mistook;
/// an interval no event matched is an overlooked. Label order in the result
/// is truth-label first appearance, then prediction-only labels.
pub fn match_events(
    predicted: &[(u64, String)],
    truth: &[TruthInterval],
    tolerance_ms: u64,
) -> Result<ConfusionMatrix> {
    let mut intervals: Vec<&TruthInterval> = truth.iter().collect();
    intervals.sort_by_key(|iv| (iv.start_ms, iv.end_ms));
    for pair in intervals.windows(2) {
        if pair[1].start_ms < pair[0].end_ms {
            return Err(Error::OverlappingIntervals {
                at_ms: pair[1].start_ms,
            });
        }
    }

    let mut labels: Vec<String> = Vec::new();
    for iv in &intervals {
        if !labels.contains(&iv.label) {
            labels.push(iv.label.clone());
        }
    }
    for (_, label) in predicted {
        if !labels.contains(label) {
            labels.push(label.clone());
        }
    }
    let mut cm = ConfusionMatrix::new(labels);

    let mut events: Vec<&(u64, String)> = predicted.iter().collect();
    events.sort_by_key(|(t, _)| *t);
    let mut matched = vec![false; intervals.len()];
    for (t, pred_label) in events {
        let pred_idx = cm.index_of(pred_label).expect("label registered above");
        let slot = intervals.iter().enumerate().position(|(k, iv)| {
            !matched[k] && *t + tolerance_ms >= iv.start_ms && *t <= iv.end_ms + tolerance_ms
        });
        match slot {
            Some(k) => {
                matched[k] = true;
                let truth_idx = cm.index_of(&intervals[k].label).unwrap();
                cm.add_match(truth_idx, pred_idx);
            }
            None => cm.add_mistook(pred_idx),
        }
    }
    for (k, iv) in intervals.iter().enumerate() {
        if !matched[k] {
            let truth_idx = cm.index_of(&iv.label).unwrap();
            cm.add_overlooked(truth_idx);
        }
    }
    Ok(cm)
}

/// File format marker for confusion matrices.
const MATRIX_HEADER: &str = "repkit-matrix v1";

/// Serialize a matrix: a `labels` line, one `truth <label> <cells...>
/// <overlooked>` row per label, and a closing `mistook` row.
pub fn write_matrix_string(cm: &ConfusionMatrix) -> String {
    let mut out = String::new();
    out.push_str(MATRIX_HEADER);
    out.push('\n');
    writeln!(out, "labels {}", cm.labels.join(" ")).unwrap();
    for (i, label) in cm.labels.iter().enumerate() {
        let row: Vec<String> = cm.cells[i].iter().map(u64::to_string).collect();
        writeln!(out, "truth {label} {} {}", row.join(" "), cm.overlooked[i]).unwrap();
    }
    let mistook: Vec<String> = cm.mistook.iter().map(u64::to_string).collect();
    writeln!(out, "mistook {}", mistook.join(" ")).unwrap();
    out
}

pub fn parse_matrix_str(text: &str) -> Result<ConfusionMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let perr = |line: usize, msg: String| Error::Parse { line, msg };

    match lines.next() {
        Some((_, l)) if l == MATRIX_HEADER => {}
        Some((_, l)) => return Err(Error::FormatVersion(l.to_string())),
        None => return Err(Error::FormatVersion("empty file".to_string())),
    }

    let (n_labels, labels_line) = lines
        .next()
        .ok_or_else(|| perr(0, "missing labels line".into()))?;
    let mut fields = labels_line.split_whitespace();
    if fields.next() != Some("labels") {
        return Err(perr(
            n_labels,
            format!("expected labels line, got {labels_line:?}"),
        ));
    }
    let labels: Vec<String> = fields.map(str::to_string).collect();
    if labels.is_empty() {
        return Err(perr(n_labels, "labels line names no labels".into()));
    }
    let n = labels.len();
    let mut cm = ConfusionMatrix::new(labels);

    for truth in 0..n {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| perr(0, format!("missing truth row {}", truth + 1)))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        // "truth", label, n cells, overlooked.
        if fields.len() != n + 3 || fields[0] != "truth" {
            return Err(perr(
                ln,
                format!("expected truth row with {} fields", n + 3),
            ));
        }
        if fields[1] != cm.labels[truth] {
            return Err(perr(
                ln,
                format!(
                    "truth rows must follow label order; expected {:?}, got {:?}",
                    cm.labels[truth], fields[1]
                ),
            ));
        }
        let parse = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| perr(ln, format!("not a count: {s:?}")))
        };
        for (predicted, field) in fields[2..2 + n].iter().enumerate() {
            cm.set_cell(truth, predicted, parse(field)?);
        }
        cm.set_overlooked(truth, parse(fields[n + 2])?);
    }

    let (ln, line) = lines
        .next()
        .ok_or_else(|| perr(0, "missing mistook row".into()))?;
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != n + 1 || fields[0] != "mistook" {
        return Err(perr(
            ln,
            format!("expected mistook row with {} fields", n + 1),
        ));
    }
    for (predicted, field) in fields[1..].iter().enumerate() {
        let v = field
            .parse()
            .map_err(|_| perr(ln, format!("not a count: {field:?}")))?;
        cm.set_mistook(predicted, v);
    }
    if let Some((ln, line)) = lines.next() {
        return Err(perr(ln, format!("unexpected trailing content: {line:?}")));
    }
    Ok(cm)
}

pub fn save_matrix(cm: &ConfusionMatrix, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_matrix_string(cm))?;
    Ok(())
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<ConfusionMatrix> {
    parse_matrix_str(&std::fs::read_to_string(path)?)
}

/// Serialize truth intervals as `start_ms end_ms label` lines.
pub fn write_truth_string(truth: &[TruthInterval]) -> String {
    let mut out = String::new();
    for iv in truth {
        writeln!(out, "{} {} {}", iv.start_ms, iv.end_ms, iv.label).unwrap();
    }
    out
}

pub fn parse_truth_str(text: &str) -> Result<Vec<TruthInterval>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let n = i + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: n,
                msg: format!("expected \"start_ms end_ms label\", got {line:?}"),
            });
        }
        let parse = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse {
                line: n,
                msg: format!("not a timestamp: {s:?}"),
            })
        };
        let (start_ms, end_ms) = (parse(fields[0])?, parse(fields[1])?);
        if end_ms <= start_ms {
            return Err(Error::Parse {
                line: n,
                msg: format!("interval ends at {end_ms} ms, before its start {start_ms} ms"),
            });
        }
        out.push(TruthInterval {
            start_ms,
            end_ms,
            label: fields[2].to_string(),
        });
    }
    Ok(out)
}

pub fn save_truth(truth: &[TruthInterval], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_truth_string(truth))?;
    Ok(())
}

pub fn load_truth(path: impl AsRef<Path>) -> Result<Vec<TruthInterval>> {
    parse_truth_str(&std::fs::read_to_string(path)?)
}

fn pct(v: f64) -> String {
    // Round half away from zero: float formatting's half-to-even would show
    // e.g. 0.9625 as 96.2%.
    format!("{:5.1}%", (v * 1000.0).round() / 10.0)
}

/// Human-readable report: one row per label, micro average, segmentation.
pub fn render_report_human(report: &MetricsReport) -> String {
    let width = report
        .labels
        .iter()
        .map(|l| l.len())
        .chain(["micro-average".len()])
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    writeln!(
        out,
        "{:width$}  {:>7} {:>7} {:>7}",
        "label", "prec", "recall", "f1"
    )
    .unwrap();
    for (label, prf) in report.labels.iter().zip(&report.per_label) {
        writeln!(
            out,
            "{label:width$}  {} {} {}",
            pct(prf.precision),
            pct(prf.recall),
            pct(prf.f1)
        )
        .unwrap();
    }
    writeln!(
        out,
        "{:width$}  {} {} {}",
        "micro-average",
        pct(report.micro.precision),
        pct(report.micro.recall),
        pct(report.micro.f1)
    )
    .unwrap();
    writeln!(
        out,
        "{:width$}  {} {} {}",
        "segmentation",
        pct(report.segmentation.precision),
        pct(report.segmentation.recall),
        pct(report.segmentation.f1)
    )
    .unwrap();
    out
}

/// Machine-readable report: `key=value` lines with exact fractional values.
pub fn render_report_machine(report: &MetricsReport) -> String {
    let mut out = String::new();
    let mut triple = |prefix: &str, prf: &Prf| {
        writeln!(out, "{prefix}.precision={}", prf.precision).unwrap();
        writeln!(out, "{prefix}.recall={}", prf.recall).unwrap();
        writeln!(out, "{prefix}.f1={}", prf.f1).unwrap();
    };
    for (label, prf) in report.labels.iter().zip(&report.per_label) {
        triple(&format!("label.{label}"), prf);
    }
    triple("micro", &report.micro);
    triple("segmentation", &report.segmentation);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The recorded five-exercise evaluation matrix used as the regression
    /// reference throughout the test suite.
    pub fn reference_matrix() -> ConfusionMatrix {
        let labels = ["running", "walking", "jumping", "push-ups", "sit-ups"];
        let mut cm = ConfusionMatrix::new(labels.iter().map(|s| s.to_string()).collect());
        let rows: [[u64; 5]; 5] = [
            [231, 6, 0, 0, 0],
            [0, 272, 0, 0, 2],
            [0, 0, 80, 0, 0],
            [0, 0, 0, 87, 0],
            [0, 0, 0, 0, 82],
        ];
        let overlooked = [3, 22, 11, 7, 6];
        let mistook = [3, 8, 0, 3, 2];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                cm.set_cell(i, j, v);
            }
            cm.set_overlooked(i, overlooked[i]);
            cm.set_mistook(i, mistook[i]);
        }
        cm
    }

    /// |value − expected percent| ≤ 0.05 percentage points.
    fn assert_pp(value: f64, expected_pct: f64) {
        let diff = (value * 100.0 - expected_pct).abs();
        assert!(
            diff <= 0.05 + 1e-9,
            "got {:.4}%, expected {expected_pct}% (off by {diff:.4} pp)",
            value * 100.0
        );
    }

    #[test]
    fn reference_matrix_segmentation_row() {
        let m = segmentation_metrics(&reference_matrix());
        assert_pp(m.precision, 97.9);
        assert_pp(m.recall, 93.9);
        assert_pp(m.f1, 95.9);
    }

    #[test]
    fn reference_matrix_per_label_rows() {
        let report = classification_metrics(&reference_matrix());
        let expected = [
            ("running", 98.7, 96.3, 97.5),
            ("walking", 95.1, 91.9, 93.5),
            ("jumping", 100.0, 87.9, 93.6),
            ("push-ups", 96.7, 92.6, 94.6),
            ("sit-ups", 95.3, 93.2, 94.3),
        ];
        for (i, (label, p, r, f)) in expected.iter().enumerate() {
            assert_eq!(&report.labels[i], label);
            let prf = report.per_label[i];
            assert_pp(prf.precision, *p);
            assert_pp(prf.recall, *r);
            assert_pp(prf.f1, *f);
        }
    }

    #[test]
    fn reference_matrix_micro_average_row() {
        let report = classification_metrics(&reference_matrix());
        assert_pp(report.micro.precision, 96.9);
        assert_pp(report.micro.recall, 93.0);
        assert_pp(report.micro.f1, 94.9);
    }

    #[test]
    fn all_zero_matrix_is_vacuously_perfect() {
        let cm = ConfusionMatrix::new(vec!["a".to_string(), "b".to_string()]);
        let m = segmentation_metrics(&cm);
        assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
        let report = classification_metrics(&cm);
        assert_eq!(report.micro.f1, 1.0);
        assert!(report.per_label.iter().all(|p| p.f1 == 1.0));
    }

    #[test]
    fn diagonal_only_matrix_is_perfect() {
        let mut cm = ConfusionMatrix::new(vec!["a".to_string(), "b".to_string()]);
        cm.set_cell(0, 0, 5);
        cm.set_cell(1, 1, 7);
        let report = classification_metrics(&cm);
        assert_eq!(report.segmentation.f1, 1.0);
        assert_eq!(report.micro.precision, 1.0);
        assert_eq!(report.micro.recall, 1.0);
        assert!(report.per_label.iter().all(|p| p.f1 == 1.0));
    }

    #[test]
    fn total_failure_reads_as_zero_not_vacuous() {
        let mut cm = ConfusionMatrix::new(vec!["a".to_string()]);
        cm.set_overlooked(0, 4);
        cm.set_mistook(0, 3);
        let m = segmentation_metrics(&cm);
        assert_eq!((m.precision, m.recall, m.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn scaling_every_count_leaves_metrics_unchanged() {
        let cm = reference_matrix();
        let mut scaled = cm.clone();
        for i in 0..5 {
            for j in 0..5 {
                scaled.set_cell(i, j, cm.cell(i, j) * 7);
            }
            scaled.set_overlooked(i, cm.overlooked(i) * 7);
            scaled.set_mistook(i, cm.mistook(i) * 7);
        }
        assert_eq!(
            classification_metrics(&scaled).micro,
            classification_metrics(&cm).micro
        );
        assert_eq!(segmentation_metrics(&scaled), segmentation_metrics(&cm));
    }

    #[test]
    fn permuting_labels_permutes_per_label_and_keeps_micro() {
        let cm = reference_matrix();
        // Reverse the label order.
        let perm: Vec<usize> = (0..5).rev().collect();
        let mut rev = ConfusionMatrix::new(perm.iter().map(|&i| cm.labels()[i].clone()).collect());
        for (i, &pi) in perm.iter().enumerate() {
            for (j, &pj) in perm.iter().enumerate() {
                rev.set_cell(i, j, cm.cell(pi, pj));
            }
            rev.set_overlooked(i, cm.overlooked(pi));
            rev.set_mistook(i, cm.mistook(pi));
        }
        let base = classification_metrics(&cm);
        let permuted = classification_metrics(&rev);
        assert_eq!(permuted.micro, base.micro);
        for (i, &pi) in perm.iter().enumerate() {
            assert_eq!(permuted.per_label[i], base.per_label[pi]);
        }
    }

    #[test]
    fn f1_sits_between_precision_and_recall() {
        let report = classification_metrics(&reference_matrix());
        for prf in report.per_label.iter().chain([&report.micro]) {
            let lo = prf.precision.min(prf.recall);
            let hi = prf.precision.max(prf.recall);
            assert!(prf.f1 >= lo - 1e-12 && prf.f1 <= hi + 1e-12);
            assert!((0.0..=1.0).contains(&prf.precision));
            assert!((0.0..=1.0).contains(&prf.recall));
        }
    }

    fn iv(start_ms: u64, end_ms: u64, label: &str) -> TruthInterval {
        TruthInterval {
            start_ms,
            end_ms,
            label: label.to_string(),
        }
    }

    #[test]
    fn exact_predictions_give_a_pure_diagonal() {
        let truth = vec![iv(0, 1000, "a"), iv(1000, 2000, "a"), iv(3000, 4000, "b")];
        let predicted = vec![
            (500, "a".to_string()),
            (1500, "a".to_string()),
            (3500, "b".to_string()),
        ];
        let cm = match_events(&predicted, &truth, 250).unwrap();
        assert_eq!(cm.cell(0, 0), 2);
        assert_eq!(cm.cell(1, 1), 1);
        assert_eq!(cm.total_cells(), cm.total_diagonal());
        assert_eq!(cm.total_mistook(), 0);
        assert_eq!(cm.total_overlooked(), 0);
    }

    #[test]
    fn rest_gap_prediction_is_mistook() {
        let truth = vec![iv(0, 1000, "a")];
        let predicted = vec![(500, "a".to_string()), (5000, "a".to_string())];
        let cm = match_events(&predicted, &truth, 250).unwrap();
        assert_eq!(cm.cell(0, 0), 1);
        assert_eq!(cm.mistook(0), 1);
    }

    #[test]
    fn swaps_and_drops_land_in_the_right_tallies() {
        // Five reps of "a"; predictions swap two to "b" and drop one.
        let truth: Vec<TruthInterval> = (0..5).map(|k| iv(k * 1000, (k + 1) * 1000, "a")).collect();
        let predicted = vec![
            (400, "a".to_string()),
            (1400, "b".to_string()),
            (2400, "b".to_string()),
            (3400, "a".to_string()),
            // rep 5 dropped
        ];
        let cm = match_events(&predicted, &truth, 250).unwrap();
        let a = cm.index_of("a").unwrap();
        let b = cm.index_of("b").unwrap();
        assert_eq!(cm.cell(a, a), 2);
        assert_eq!(cm.cell(a, b), 2);
        assert_eq!(cm.overlooked(a), 1);
        assert_eq!(cm.total_mistook(), 0);
    }

    #[test]
    fn each_truth_rep_matches_at_most_one_event() {
        let truth = vec![iv(0, 1000, "a")];
        let predicted = vec![(300, "a".to_string()), (700, "a".to_string())];
        let cm = match_events(&predicted, &truth, 250).unwrap();
        assert_eq!(cm.cell(0, 0), 1);
        assert_eq!(cm.mistook(0), 1);
    }

    #[test]
    fn boundary_tolerance_admits_nearby_events() {
        let truth = vec![iv(1000, 2000, "a")];
        // 210 ms before the interval start: inside the 250 ms tolerance.
        let cm = match_events(&[(790, "a".to_string())], &truth, 250).unwrap();
        assert_eq!(cm.cell(0, 0), 1);
        // 300 ms before: outside.
        let cm = match_events(&[(700, "a".to_string())], &truth, 250).unwrap();
        assert_eq!(cm.cell(0, 0), 0);
        assert_eq!(cm.mistook(0), 1);
        assert_eq!(cm.overlooked(0), 1);
    }

    #[test]
    fn overlapping_truth_is_an_input_error() {
        let truth = vec![iv(0, 1000, "a"), iv(900, 1500, "b")];
        assert!(matches!(
            match_events(&[], &truth, 250),
            Err(Error::OverlappingIntervals { at_ms: 900 })
        ));
    }

    #[test]
    fn matrix_text_round_trip() {
        let cm = reference_matrix();
        let text = write_matrix_string(&cm);
        assert_eq!(parse_matrix_str(&text).unwrap(), cm);
    }

    #[test]
    fn matrix_parse_errors_cite_lines() {
        let text = "repkit-matrix v1\nlabels a b\ntruth a 1 2 0\ntruth b 0 x 0\nmistook 0 0\n";
        assert!(matches!(
            parse_matrix_str(text),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            parse_matrix_str("labels a\n"),
            Err(Error::FormatVersion(_))
        ));
    }

    #[test]
    fn truth_file_round_trip_and_validation() {
        let truth = vec![iv(0, 500, "a"), iv(600, 1200, "b")];
        let text = write_truth_string(&truth);
        assert_eq!(parse_truth_str(&text).unwrap(), truth);
        assert!(matches!(
            parse_truth_str("100 100 a\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_truth_str("5 10\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn reports_render_both_ways() {
        let report = classification_metrics(&reference_matrix());
        let human = render_report_human(&report);
        assert!(human.contains("running"));
        assert!(human.contains("micro-average"));
        assert!(human.contains("segmentation"));
        let machine = render_report_machine(&report);
        assert!(machine.contains("label.running.precision="));
        assert!(machine.contains("micro.f1="));
        assert!(machine.contains("segmentation.recall="));
    }
}
