//! DTW dynamic program vs. exhaustive path enumeration.

mod common;

use common::{brute_force_alignment, random_series};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repkit::dtw::{dtw_alignment, dtw_alignment_banded, dtw_distance};

#[test]
fn dp_matches_exhaustive_enumeration_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD7);
    for case in 0..1200 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=6);
        let s = random_series(&mut rng, n);
        let t = random_series(&mut rng, m);
        let dp = dtw_alignment(&s, &t);
        let (cost, path_len) = brute_force_alignment(&s, &t);
        let rel = (dp.cost - cost).abs() / cost.max(1e-300);
        assert!(
            rel <= 1e-9,
            "case {case}: dp cost {} vs enumerated {cost}",
            dp.cost
        );
        assert_eq!(dp.path_len, path_len, "case {case}");
    }
}

#[test]
fn dp_matches_enumeration_on_degenerate_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (n, m) in [(1, 1), (1, 6), (6, 1), (2, 5), (6, 6)] {
        let s = random_series(&mut rng, n);
        let t = random_series(&mut rng, m);
        let dp = dtw_alignment(&s, &t);
        let (cost, path_len) = brute_force_alignment(&s, &t);
        assert!((dp.cost - cost).abs() <= 1e-9 * cost.max(1.0));
        assert_eq!(dp.path_len, path_len);
        // A 1-vs-k alignment has no warping freedom at all.
        if n == 1 {
            assert_eq!(dp.path_len, m);
        }
    }
}

#[test]
fn band_no_wider_than_length_difference_still_reaches_the_corner() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=6);
        let s = random_series(&mut rng, n);
        let t = random_series(&mut rng, m);
        let banded = dtw_alignment_banded(&s, &t, Some(0));
        assert!(banded.cost.is_finite());
        // Band 0 (widened to the length difference) restricts paths, so it
        // can only raise the cost.
        assert!(banded.cost >= dtw_distance(&s, &t) - 1e-12);
    }
}
