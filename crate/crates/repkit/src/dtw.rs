//! Multivariate dynamic time warping and variance-based axis weighting.
//!
//! DTW aligns two 3-axis series of possibly different lengths by dynamic
//! programming over the three standard step moves, with first-to-first and
//! last-to-last boundary alignment. The per-cell cost is the Euclidean norm
//! of the 3-D sample difference. A segment and a template that share the
//! same dominant axis (the axis of greatest variance) get their distance
//! discounted, which biases classification toward templates whose direction
//! of maximum movement matches the motion.

use crate::error::{Error, Result};
use crate::signal::TriaxialSeries;

/// Axis identifier for dominant-axis comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Per-axis population variance of a series plus its dominant axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisStats {
    pub var_x: f64,
    pub var_y: f64,
    pub var_z: f64,
    pub dominant: Axis,
}

/// Per-axis population variance; the dominant axis is the one with the
/// greatest variance, ties resolved in fixed X, Y, Z order.
pub fn axis_stats(series: &TriaxialSeries) -> Result<AxisStats> {
    let n = series.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let mut var = [0.0f64; 3];
    for axis in 0..3 {
        let mean = series.samples().iter().map(|s| s[axis]).sum::<f64>() / n as f64;
        var[axis] = series
            .samples()
            .iter()
            .map(|s| (s[axis] - mean).powi(2))
            .sum::<f64>()
            / n as f64;
    }
    let dominant = if var[0] >= var[1] && var[0] >= var[2] {
        Axis::X
    } else if var[1] >= var[2] {
        Axis::Y
    } else {
        Axis::Z
    };
    Ok(AxisStats {
        var_x: var[0],
        var_y: var[1],
        var_z: var[2],
        dominant,
    })
}

/// Discount factor for a segment/template pairing.
///
/// Returns `match_weight` when both series have the same dominant axis and
/// a neutral 1.0 otherwise. A weight below 1 favors the matching template
/// because classification picks the minimum weighted distance.
pub fn weight_for(seg_stats: &AxisStats, tmpl_stats: &AxisStats, match_weight: f64) -> f64 {
    if seg_stats.dominant == tmpl_stats.dominant {
        match_weight
    } else {
        1.0
    }
}

/// Result of one DTW alignment: minimal cumulative cost and the length (in
/// cells) of the shortest path attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtwAlignment {
    pub cost: f64,
    pub path_len: usize,
}

impl DtwAlignment {
    /// Cumulative cost divided by the alignment path length.
    pub fn normalized(&self) -> f64 {
        self.cost / self.path_len as f64
    }
}

fn sample_cost(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// DTW alignment with an optional Sakoe-Chiba band.
///
/// The band constrains the path to cells with `|i - j| <= band`, widened to
/// at least the length difference so a boundary-to-boundary path always
/// exists. `None` runs the full table; segments are short enough that the
/// unconstrained table is the default.
pub fn dtw_alignment_banded(
    s: &TriaxialSeries,
    t: &TriaxialSeries,
    band: Option<usize>,
) -> DtwAlignment {
    let n = s.len();
    let m = t.len();
    let band = band.map(|b| b.max(n.abs_diff(m)));

    // (n+1) x (m+1) table, row/column 0 at infinity and the origin at zero,
    // rolled one row at a time. Each cell tracks the minimal cumulative cost
    // and, among equal-cost paths, the minimal path length in cells.
    let mut prev: Vec<(f64, usize)> = vec![(f64::INFINITY, 0); m + 1];
    let mut curr: Vec<(f64, usize)> = vec![(f64::INFINITY, 0); m + 1];
    prev[0] = (0.0, 0);

    for i in 1..=n {
        curr[0] = (f64::INFINITY, 0);
        for j in 1..=m {
            if let Some(b) = band {
                if i.abs_diff(j) > b {
                    curr[j] = (f64::INFINITY, 0);
                    continue;
                }
            }
            let cost = sample_cost(&s.samples()[i - 1], &t.samples()[j - 1]);
            // min over insertion, deletion, match; ties resolved toward the
            // shorter path so normalization is deterministic.
            let mut best = prev[j];
            for cand in [curr[j - 1], prev[j - 1]] {
                if cand.0 < best.0 || (cand.0 == best.0 && cand.1 < best.1) {
                    best = cand;
                }
            }
            curr[j] = (cost + best.0, best.1 + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }

    let (cost, path_len) = prev[m];
    DtwAlignment { cost, path_len }
}

/// Full-table DTW alignment (cost and shortest optimal path length).
pub fn dtw_alignment(s: &TriaxialSeries, t: &TriaxialSeries) -> DtwAlignment {
    dtw_alignment_banded(s, t, None)
}

/// Minimal cumulative DTW alignment cost between two 3-axis series.
pub fn dtw_distance(s: &TriaxialSeries, t: &TriaxialSeries) -> f64 {
    dtw_alignment(s, t).cost
}

/// DTW cost divided by the alignment path length.
///
/// Raw DTW cost grows with series length, so one rejection threshold cannot
/// serve segments of different durations. Dividing by the path length makes
/// scores comparable across lengths; disable it to threshold raw costs.
pub fn dtw_distance_normalized(s: &TriaxialSeries, t: &TriaxialSeries) -> f64 {
    dtw_alignment(s, t).normalized()
}

/// One template's scoring against a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreBreakdown {
    /// DTW distance before weighting (path-normalized when `normalized`).
    pub raw_dtw: f64,
    /// Dominant-axis discount in (0, 1].
    pub weight: f64,
    /// `raw_dtw * weight`; the value classification compares.
    pub weighted: f64,
    /// Whether `raw_dtw` was divided by the alignment path length.
    pub normalized: bool,
}

impl ScoreBreakdown {
    pub fn new(raw_dtw: f64, weight: f64, normalized: bool) -> Self {
        Self {
            raw_dtw,
            weight,
            weighted: raw_dtw * weight,
            normalized,
        }
    }
}
