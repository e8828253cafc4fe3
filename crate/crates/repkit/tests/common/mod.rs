//! Shared helpers for the integration suites.

use rand::Rng;
use repkit::signal::TriaxialSeries;

/// Exhaustive-alignment DTW: enumerate every monotone warping path from
/// (0,0) to (n-1,m-1) with steps right/down/diagonal and return the minimal
/// (cost, path length), ties toward the shorter path. Exponential — only for
/// tiny series — but shares no code with the DP under test.
pub fn brute_force_alignment(s: &TriaxialSeries, t: &TriaxialSeries) -> (f64, usize) {
    fn cell_cost(a: &[f64; 3], b: &[f64; 3]) -> f64 {
        let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        d.sqrt()
    }
    fn walk(
        s: &TriaxialSeries,
        t: &TriaxialSeries,
        i: usize,
        j: usize,
        cost: f64,
        len: usize,
        best: &mut (f64, usize),
    ) {
        let cost = cost + cell_cost(&s.samples()[i], &t.samples()[j]);
        let len = len + 1;
        if i == s.len() - 1 && j == t.len() - 1 {
            if cost < best.0 || (cost == best.0 && len < best.1) {
                *best = (cost, len);
            }
            return;
        }
        if i + 1 < s.len() && j + 1 < t.len() {
            walk(s, t, i + 1, j + 1, cost, len, best);
        }
        if i + 1 < s.len() {
            walk(s, t, i + 1, j, cost, len, best);
        }
        if j + 1 < t.len() {
            walk(s, t, i, j + 1, cost, len, best);
        }
    }
    let mut best = (f64::INFINITY, usize::MAX);
    walk(s, t, 0, 0, 0.0, 0, &mut best);
    best
}

/// Random series of the given length with axis values in [-2, 2].
pub fn random_series(rng: &mut impl Rng, len: usize) -> TriaxialSeries {
    let samples: Vec<[f64; 3]> = (0..len)
        .map(|_| {
            [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ]
        })
        .collect();
    TriaxialSeries::new(50.0, samples).unwrap()
}
