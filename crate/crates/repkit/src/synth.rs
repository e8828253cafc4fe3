//! Deterministic synthetic session generator — the test oracle.
//!
//! Realism is deliberately minimal: each exercise pattern is a train of
//! per-axis sinusoidal bursts riding on a 1 g resting norm, plus optional
//! Gaussian noise. That is enough to give the pipeline real work (distinct
//! dominant axes, distinct periods, multi-peak motions) while keeping exact
//! ground truth.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::TruthInterval;
use crate::signal::AccelSample;
use crate::template::validate_label;

/// One exercise pattern within a session.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSpec {
    pub label: String,
    /// Deviation amplitude per axis, g.
    pub amplitude_g: [f64; 3],
    /// One repetition's duration, seconds.
    pub period_s: f64,
    pub reps: u32,
    /// Energy humps per repetition: 1 for simple motions, 3 for motions
    /// whose single repetition produces three peaks.
    pub phases: u32,
}

/// A whole session: patterns in order, separated (and book-ended) by rest.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub sample_rate_hz: f64,
    /// Gaussian noise per axis, g.
    pub noise_sd_g: f64,
    /// Rest before, between, and after patterns, seconds.
    pub rest_gap_s: f64,
    pub seed: u64,
    pub patterns: Vec<PatternSpec>,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Error::Config(msg);
        // Above 1000 Hz, millisecond timestamps would collide.
        if !(self.sample_rate_hz.is_finite()
            && self.sample_rate_hz > 0.0
            && self.sample_rate_hz <= 1000.0)
        {
            return Err(bad(format!(
                "sample rate must be in (0, 1000] Hz, got {}",
                self.sample_rate_hz
            )));
        }
        if !(self.noise_sd_g.is_finite() && self.noise_sd_g >= 0.0) {
            return Err(bad(format!(
                "noise sd must be >= 0, got {}",
                self.noise_sd_g
            )));
        }
        if !(self.rest_gap_s.is_finite() && self.rest_gap_s >= 0.0) {
            return Err(bad(format!(
                "rest gap must be >= 0, got {}",
                self.rest_gap_s
            )));
        }
        for p in &self.patterns {
            validate_label(&p.label)?;
            if !(p.period_s.is_finite() && p.period_s > 0.0) {
                return Err(bad(format!("{}: period must be positive", p.label)));
            }
            if p.reps == 0 || p.phases == 0 {
                return Err(bad(format!("{}: reps and phases must be >= 1", p.label)));
            }
            if p.amplitude_g.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
                return Err(bad(format!("{}: amplitudes must be >= 0", p.label)));
            }
        }
        Ok(())
    }
}

/// Standard-normal draw via Box–Muller; two uniforms per value keeps the
/// stream layout independent of any library's internal caching.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Generate the session stream and its exact ground truth.
///
/// Each repetition contributes `phases` sinusoidal bursts, one centered on
/// each of its phase boundaries; the bout's closing boundary gets one too, so
/// N contiguous repetitions make N·phases + 1 bursts. A burst spans half a
/// phase (`amp · sin(π·τ / (2W))` over half-width `W` samples) and the signal
/// is exactly quiet between bursts, so the short-term-energy humps the
/// pipeline segments on sit at the boundaries, every hump equally strong and
/// every repetition identical in the raw data. Edge bursts spill half their
/// width into the surrounding rest. Rest contributes (0, 0, 1 g) plus noise.
/// Identical spec ⇒ identical output, byte for byte.
pub fn generate(spec: &GeneratorSpec) -> Result<(Vec<AccelSample>, Vec<TruthInterval>)> {
    spec.validate()?;
    let rate = spec.sample_rate_hz;
    let rest_n = (spec.rest_gap_s * rate).round() as usize;

    // Lay out the deviation timeline first; bursts at bout edges reach into
    // the rest gaps, so deviations can't be emitted bout by bout.
    let mut bouts: Vec<(usize, usize)> = Vec::new(); // (start index, samples per rep)
    let mut total = rest_n;
    for p in &spec.patterns {
        // Integer samples per repetition keep boundaries exactly on the
        // sample grid.
        let rep_n = ((p.period_s * rate).round() as usize).max(1);
        bouts.push((total, rep_n));
        total += p.reps as usize * rep_n + rest_n;
    }

    let mut dev = vec![[0.0f64; 3]; total];
    let mut truth: Vec<TruthInterval> = Vec::new();
    let t_of = |i: usize| (i as f64 * 1000.0 / rate).round() as u64;
    for (p, &(bout_start, rep_n)) in spec.patterns.iter().zip(&bouts) {
        let phase_n = rep_n as f64 / p.phases as f64;
        let w = phase_n / 4.0; // burst half-width: bursts cover half of each phase
        for k in 0..=(p.reps * p.phases) as usize {
            let center = bout_start as f64 + k as f64 * phase_n;
            let lo = ((center - w).ceil() as i64).max(0);
            let hi = ((center + w).floor() as i64).min(total as i64 - 1);
            for i in lo..=hi {
                let g = (std::f64::consts::PI * (i as f64 - (center - w)) / (2.0 * w)).sin();
                for (d, amp) in dev[i as usize].iter_mut().zip(p.amplitude_g) {
                    *d += amp * g;
                }
            }
        }
        for r in 0..p.reps as usize {
            truth.push(TruthInterval {
                start_ms: t_of(bout_start + r * rep_n),
                end_ms: t_of(bout_start + (r + 1) * rep_n),
                label: p.label.clone(),
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let samples = dev
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let noise = if spec.noise_sd_g > 0.0 {
                [
                    spec.noise_sd_g * gaussian(&mut rng),
                    spec.noise_sd_g * gaussian(&mut rng),
                    spec.noise_sd_g * gaussian(&mut rng),
                ]
            } else {
                [0.0; 3]
            };
            AccelSample::new(
                t_of(i),
                d[0] + noise[0],
                d[1] + noise[1],
                1.0 + d[2] + noise[2],
            )
        })
        .collect();
    Ok((samples, truth))
}

/// Serialize a spec as the key=value-plus-`pattern`-lines file the CLI's
/// generate command reads.
pub fn write_generator_spec_string(spec: &GeneratorSpec) -> String {
    let mut out = String::new();
    writeln!(out, "rate={}", spec.sample_rate_hz).unwrap();
    writeln!(out, "noise_sd={}", spec.noise_sd_g).unwrap();
    writeln!(out, "rest_gap_s={}", spec.rest_gap_s).unwrap();
    writeln!(out, "seed={}", spec.seed).unwrap();
    for p in &spec.patterns {
        writeln!(
            out,
            "pattern {} {} {} {} {} {} {}",
            p.label,
            p.amplitude_g[0],
            p.amplitude_g[1],
            p.amplitude_g[2],
            p.period_s,
            p.reps,
            p.phases
        )
        .unwrap();
    }
    out
}

/// Parse the generator-spec file format.
pub fn parse_generator_spec_str(text: &str) -> Result<GeneratorSpec> {
    let mut spec = GeneratorSpec {
        sample_rate_hz: 50.0,
        noise_sd_g: 0.0,
        rest_gap_s: 3.0,
        seed: 0,
        patterns: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let n = i + 1;
        let perr = |msg: String| Error::Parse { line: n, msg };
        if let Some(rest) = line.strip_prefix("pattern ") {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 7 {
                return Err(perr(format!(
                    "pattern needs \"label ax ay az period_s reps phases\", got {} fields",
                    fields.len()
                )));
            }
            let num = |s: &str| -> Result<f64> {
                s.parse().map_err(|_| perr(format!("not a number: {s:?}")))
            };
            let int = |s: &str| -> Result<u32> {
                s.parse().map_err(|_| perr(format!("not a count: {s:?}")))
            };
            spec.patterns.push(PatternSpec {
                label: fields[0].to_string(),
                amplitude_g: [num(fields[1])?, num(fields[2])?, num(fields[3])?],
                period_s: num(fields[4])?,
                reps: int(fields[5])?,
                phases: int(fields[6])?,
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| perr(format!("expected key=value or pattern line, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| perr(format!("{key}: {what}: {value:?}"));
        match key {
            "rate" => spec.sample_rate_hz = value.parse().map_err(|_| bad("not a number"))?,
            "noise_sd" => spec.noise_sd_g = value.parse().map_err(|_| bad("not a number"))?,
            "rest_gap_s" => spec.rest_gap_s = value.parse().map_err(|_| bad("not a number"))?,
            "seed" => spec.seed = value.parse().map_err(|_| bad("not an integer"))?,
            _ => return Err(bad("unknown key")),
        }
    }
    spec.validate()?;
    Ok(spec)
}

pub fn load_generator_spec(path: impl AsRef<Path>) -> Result<GeneratorSpec> {
    parse_generator_spec_str(&std::fs::read_to_string(path)?)
}
