//! Segment, classify, and count repetitive motions in 3-axis accelerometer
//! streams.
//!
//! Enrollment is a single demonstration repetition per exercise — no
//! training, no model file. The pipeline collapses the axes into an
//! orientation-free energy curve, cuts the stream at energy peaks, scores
//! each peak-to-peak segment against the enrolled templates with dynamic
//! time warping, and keeps per-label repetition counts. An evaluation
//! module scores the resulting event stream against ground-truth intervals.
//!
//! The [`guide`] module carries a chapter-by-chapter walkthrough with
//! runnable examples; the same files build as a book with mdbook. The short
//! version:
//!
//! ```
//! use repkit::classify::{resolve_baseline, run_pipeline};
//! use repkit::config::PipelineConfig;
//! use repkit::segment::segment_bout;
//! use repkit::synth::{generate, GeneratorSpec, PatternSpec};
//! use repkit::template::{make_template, pick_median_duration, TemplateStore};
//!
//! // One synthetic recording of a single squat-like motion...
//! let spec = GeneratorSpec {
//!     sample_rate_hz: 50.0,
//!     noise_sd_g: 0.02,
//!     rest_gap_s: 3.0,
//!     seed: 1000,
//!     patterns: vec![PatternSpec {
//!         label: "squat".into(),
//!         amplitude_g: [0.15, 0.0, 0.9],
//!         period_s: 0.8,
//!         reps: 1,
//!         phases: 1,
//!     }],
//! };
//! let (rep, _) = generate(&spec)?;
//!
//! // ...enrolled as a template...
//! let cfg = PipelineConfig::default();
//! let baseline = resolve_baseline(&rep, cfg.baseline)?;
//! let (_, segments) = segment_bout(&rep, 50.0, baseline, &cfg.segmenter())?;
//! let pick = pick_median_duration(&segments).unwrap();
//! let mut store = TemplateStore::new();
//! store.insert(make_template(&segments[pick], "squat", 0)?)?;
//!
//! // ...counts ten live repetitions of the same motion.
//! let mut session = spec.clone();
//! session.seed = 42;
//! session.patterns[0].reps = 10;
//! let (samples, _) = generate(&session)?;
//! let (_events, counts) = run_pipeline(&samples, &store, &cfg, 50.0)?;
//! assert_eq!(counts.count("squat"), 10);
//! # Ok::<(), repkit::Error>(())
//! ```

pub mod classify;
pub mod config;
pub mod dtw;
pub mod error;
pub mod eval;
pub mod guide;
pub mod io;
pub mod segment;
pub mod signal;
pub mod synth;
pub mod template;

pub use error::{Error, Result};
