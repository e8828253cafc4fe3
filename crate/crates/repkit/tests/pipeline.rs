//! Library-level end-to-end behavior on generated sessions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repkit::classify::{resolve_baseline, run_pipeline, Event, Outcome};
use repkit::config::{BaselineMode, PipelineConfig};
use repkit::eval::{classification_metrics, match_events};
use repkit::segment::{segment_bout, StreamEvent, StreamSegmenter};
use repkit::synth::{generate, GeneratorSpec, PatternSpec};
use repkit::template::{make_template, pick_median_duration, TemplateStore};

fn five_patterns() -> Vec<PatternSpec> {
    let mk = |label: &str, amp: [f64; 3], period_s: f64| PatternSpec {
        label: label.into(),
        amplitude_g: amp,
        period_s,
        reps: 10,
        phases: 1,
    };
    vec![
        mk("squat", [0.15, 0.0, 0.9], 0.8),
        mk("row", [1.2, 0.1, 0.2], 1.2),
        mk("twist", [0.1, 1.2, 0.2], 1.0),
        mk("press", [0.2, 0.2, 0.7], 1.6),
        mk("swing", [1.1, 0.2, 0.15], 2.0),
    ]
}

/// Enroll one template per pattern from its own single-repetition recording.
fn enroll(patterns: &[PatternSpec], noise: f64, suppress: u32) -> TemplateStore {
    let mut store = TemplateStore::new();
    for (k, pat) in patterns.iter().enumerate() {
        let mut single = pat.clone();
        single.reps = 1;
        let spec = GeneratorSpec {
            sample_rate_hz: 50.0,
            noise_sd_g: noise,
            rest_gap_s: 3.0,
            seed: 1000 + k as u64,
            patterns: vec![single],
        };
        let (samples, _) = generate(&spec).unwrap();
        let baseline = resolve_baseline(&samples, BaselineMode::Median).unwrap();
        let cfg = PipelineConfig::default();
        let (_, segments) = segment_bout(&samples, 50.0, baseline, &cfg.segmenter()).unwrap();
        let pick = pick_median_duration(&segments).unwrap();
        store
            .insert(make_template(&segments[pick], &pat.label, suppress).unwrap())
            .unwrap();
    }
    store
}

fn counted(events: &[Event]) -> Vec<(u64, String)> {
    events
        .iter()
        .filter_map(|e| match e {
            Event::Count { event, .. } => Some((event.t_ms, event.label.clone())),
            _ => None,
        })
        .collect()
}

#[test]
fn five_pattern_session_counts_and_classifies_with_defaults() {
    let patterns = five_patterns();
    let store = enroll(&patterns, 0.05, 0);
    let spec = GeneratorSpec {
        sample_rate_hz: 50.0,
        noise_sd_g: 0.05,
        rest_gap_s: 3.0,
        seed: 42,
        patterns: patterns.clone(),
    };
    let (samples, truth) = generate(&spec).unwrap();
    let cfg = PipelineConfig::default();
    let (events, state) = run_pipeline(&samples, &store, &cfg, 50.0).unwrap();

    for pat in &patterns {
        let n = state.count(&pat.label);
        assert!(
            (9..=11).contains(&n),
            "{}: counted {n}, want 10 +/- 1",
            pat.label
        );
    }
    let matrix = match_events(&counted(&events), &truth, 250).unwrap();
    let report = classification_metrics(&matrix);
    assert!(
        report.micro.f1 >= 0.95,
        "micro F1 {:.4} below 0.95",
        report.micro.f1
    );
}

#[test]
fn tri_phasic_session_counts_each_motion_once_with_suppression() {
    // Low noise: enough to break energy ties, not enough to split humps.
    let pattern = PatternSpec {
        label: "situp".into(),
        amplitude_g: [0.3, 0.1, 0.8],
        period_s: 2.4,
        reps: 10,
        phases: 3,
    };
    let session = GeneratorSpec {
        sample_rate_hz: 50.0,
        noise_sd_g: 0.01,
        rest_gap_s: 3.0,
        seed: 7,
        patterns: vec![pattern.clone()],
    };
    let (samples, _) = generate(&session).unwrap();
    let cfg = PipelineConfig::default();

    // suppress_trailing = 2: each motion's three sub-segments count once.
    let store = enroll(std::slice::from_ref(&pattern), 0.01, 2);
    let (_, state) = run_pipeline(&samples, &store, &cfg, 50.0).unwrap();
    assert_eq!(state.count("situp"), 10);

    // Without suppression every sub-segment counts: 3 per motion.
    let store = enroll(&[pattern], 0.01, 0);
    let (_, state) = run_pipeline(&samples, &store, &cfg, 50.0).unwrap();
    assert_eq!(state.count("situp"), 30);
}

#[test]
fn enrollment_of_single_rep_yields_one_segment_spanning_the_rep() {
    for (k, pat) in five_patterns().iter().enumerate() {
        let mut single = pat.clone();
        single.reps = 1;
        let period_ms = (single.period_s * 1000.0) as u64;
        let spec = GeneratorSpec {
            sample_rate_hz: 50.0,
            noise_sd_g: 0.05,
            rest_gap_s: 3.0,
            seed: 2000 + k as u64,
            patterns: vec![single],
        };
        let (samples, _) = generate(&spec).unwrap();
        let baseline = resolve_baseline(&samples, BaselineMode::Median).unwrap();
        let cfg = PipelineConfig::default();
        let (_, segments) = segment_bout(&samples, 50.0, baseline, &cfg.segmenter()).unwrap();
        assert_eq!(segments.len(), 1, "{}", pat.label);
        let dur = segments[0].duration_ms;
        assert!(
            dur.abs_diff(period_ms) <= 150,
            "{}: segment {dur} ms vs period {period_ms} ms",
            pat.label
        );
    }
}

#[test]
fn threshold_sweep_labels_monotonically_and_zero_needs_exact_match() {
    let patterns = five_patterns();
    let store = enroll(&patterns, 0.05, 0);
    let spec = GeneratorSpec {
        sample_rate_hz: 50.0,
        noise_sd_g: 0.05,
        rest_gap_s: 3.0,
        seed: 42,
        patterns,
    };
    let (samples, _) = generate(&spec).unwrap();

    let labeled_at = |threshold: f64| -> usize {
        let cfg = PipelineConfig {
            threshold,
            ..PipelineConfig::default()
        };
        let (events, _) = run_pipeline(&samples, &store, &cfg, 50.0).unwrap();
        events
            .iter()
            .filter(|e| {
                matches!(
                    e,
                    Event::Classified {
                        outcome: Outcome::Label(_),
                        ..
                    }
                )
            })
            .count()
    };
    let sweep: Vec<usize> = [0.0, 0.02, 0.05, 0.08, 0.1, 0.15, 0.3, 1.0, 10.0]
        .iter()
        .map(|&t| labeled_at(t))
        .collect();
    assert!(
        sweep.windows(2).all(|w| w[0] <= w[1]),
        "labeled counts not monotone: {sweep:?}"
    );
    // Noisy segments never reproduce a template bit-for-bit.
    assert_eq!(sweep[0], 0);
    // A generous threshold labels every segment, including rest gaps.
    assert_eq!(*sweep.last().unwrap(), 54);
}

#[test]
fn threshold_zero_with_normalization_accepts_only_exact_template_segments() {
    // Enroll a template from the session itself: exactly one segment in the
    // stream is bit-identical to it. At threshold 0 that segment alone may
    // label (noise keeps every other score strictly positive).
    let spec = GeneratorSpec {
        sample_rate_hz: 50.0,
        noise_sd_g: 0.05,
        rest_gap_s: 3.0,
        seed: 42,
        patterns: five_patterns(),
    };
    let (samples, _) = generate(&spec).unwrap();
    let baseline = resolve_baseline(&samples, BaselineMode::Median).unwrap();
    let cfg = PipelineConfig::default();
    let (_, segments) = segment_bout(&samples, 50.0, baseline, &cfg.segmenter()).unwrap();
    let source = &segments[segments.len() / 2];
    let source_t = source.end.t_ms;
    let mut store = TemplateStore::new();
    store
        .insert(make_template(source, "probe", 0).unwrap())
        .unwrap();

    let cfg = PipelineConfig {
        threshold: 0.0,
        ..PipelineConfig::default()
    };
    let (events, state) = run_pipeline(&samples, &store, &cfg, 50.0).unwrap();
    assert_eq!(state.count("probe"), 1);
    for ev in &events {
        if let Event::Classified {
            t_ms,
            outcome,
            winning,
            ..
        } = ev
        {
            match outcome {
                Outcome::Label(l) => {
                    assert_eq!(l, "probe");
                    assert_eq!(winning.unwrap(), 0.0, "score must be exactly zero");
                    assert_eq!(*t_ms, source_t, "labeled a different segment");
                }
                Outcome::Rejected(_) => assert!(winning.unwrap() > 0.0),
            }
        }
    }
}

#[test]
fn batch_and_stream_segmentation_agree_on_random_sessions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    for session in 0..30 {
        let n_patterns = rng.gen_range(1..=3);
        let patterns: Vec<PatternSpec> = (0..n_patterns)
            .map(|p| PatternSpec {
                label: format!("p{p}"),
                amplitude_g: [
                    rng.gen_range(0.0..1.2),
                    rng.gen_range(0.0..1.2),
                    rng.gen_range(0.2..1.0),
                ],
                period_s: rng.gen_range(0.6..2.4),
                reps: rng.gen_range(1..12),
                phases: if rng.gen_bool(0.2) { 3 } else { 1 },
            })
            .collect();
        let spec = GeneratorSpec {
            sample_rate_hz: 50.0,
            noise_sd_g: rng.gen_range(0.0..0.08),
            rest_gap_s: rng.gen_range(2.0..4.0),
            seed: rng.gen(),
            patterns,
        };
        let (samples, _) = generate(&spec).unwrap();
        let baseline = resolve_baseline(&samples, BaselineMode::Median).unwrap();
        let cfg = PipelineConfig::default().segmenter();

        let (_, batch) = segment_bout(&samples, 50.0, baseline, &cfg).unwrap();

        let mut seg = StreamSegmenter::new(50.0, baseline, &cfg).unwrap();
        let mut streamed = Vec::new();
        for &s in &samples {
            streamed.extend(seg.push(s).unwrap());
        }
        streamed.extend(seg.finish());
        let streamed: Vec<_> = streamed
            .into_iter()
            .map(|e| match e {
                StreamEvent::Segment(s) => s,
                StreamEvent::Discontinuity { t_ms } => {
                    panic!("unexpected discontinuity at {t_ms}")
                }
            })
            .collect();

        assert_eq!(batch.len(), streamed.len(), "session {session}");
        for (b, s) in batch.iter().zip(&streamed) {
            assert_eq!(b.start.index, s.start.index, "session {session}");
            assert_eq!(b.end.index, s.end.index, "session {session}");
            assert_eq!(b.data.samples(), s.data.samples(), "session {session}");
        }
    }
}

#[test]
fn pipeline_runs_are_deterministic() {
    let patterns = five_patterns();
    let store = enroll(&patterns, 0.05, 0);
    let spec = GeneratorSpec {
        sample_rate_hz: 50.0,
        noise_sd_g: 0.05,
        rest_gap_s: 3.0,
        seed: 42,
        patterns,
    };
    let (samples, _) = generate(&spec).unwrap();
    let cfg = PipelineConfig::default();
    let (a_events, a_state) = run_pipeline(&samples, &store, &cfg, 50.0).unwrap();
    let (b_events, b_state) = run_pipeline(&samples, &store, &cfg, 50.0).unwrap();
    assert_eq!(
        repkit::classify::write_event_log(&a_events),
        repkit::classify::write_event_log(&b_events)
    );
    assert_eq!(a_state.counts, b_state.counts);
}
