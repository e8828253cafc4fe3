//! Command-line front end: enroll templates, replay recordings through the
//! pipeline, generate synthetic sessions, and score event logs.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use repkit::classify::{
    counted_events, parse_event_log, resolve_baseline, run_pipeline, write_event_log, Event,
    Pipeline,
};
use repkit::config::{load_config, PipelineConfig};
use repkit::eval::{
    classification_metrics, load_matrix, load_truth, match_events, render_report_human,
    render_report_machine, save_truth, write_matrix_string,
};
use repkit::io::{read_csv, write_csv};
use repkit::segment::segment_bout;
use repkit::synth::{generate, load_generator_spec};
use repkit::template::{
    load_templates, make_template, pick_median_duration, save_templates, TemplateStore,
};

#[derive(Parser)]
#[command(
    name = "repkit",
    version,
    about = "Segment, classify, and count repetitive motions in accelerometer streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment a recording and enroll one segment as a labeled template.
    RecordTemplate {
        /// Input acceleration CSV.
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        /// Exercise name to enroll under.
        #[arg(long)]
        label: String,
        /// Segments to skip after each match of this template (2 for
        /// motions that produce three peaks per repetition).
        #[arg(long, default_value_t = 0)]
        suppress: u32,
        /// Candidate segment to enroll (0-based); default picks the
        /// median-duration segment.
        #[arg(long, value_name = "K")]
        pick: Option<usize>,
        /// Template store to create or append to.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Run the full pipeline over a recording and write the event log.
    Run {
        /// Input acceleration CSV.
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        /// Template store.
        #[arg(long, value_name = "FILE")]
        templates: PathBuf,
        /// Pipeline configuration (key=value file); defaults when absent.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Deliver samples at the sensor rate instead of as fast as
        /// possible. The event log is identical either way.
        #[arg(long)]
        paced: bool,
        /// Event log destination.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Score an event log against ground-truth intervals.
    Evaluate {
        /// Event log from `run`.
        #[arg(long, value_name = "FILE")]
        events: PathBuf,
        /// Ground-truth intervals: `start_ms end_ms label` lines.
        #[arg(long, value_name = "FILE")]
        truth: PathBuf,
        /// How far (ms) a counted event may sit outside its interval.
        #[arg(long, value_name = "T", default_value_t = 250)]
        tolerance_ms: u64,
    },
    /// Generate a synthetic session and its ground truth.
    Generate {
        /// Generator spec (key=value plus `pattern` lines).
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        /// Acceleration CSV destination.
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
        /// Ground-truth intervals destination.
        #[arg(long, value_name = "FILE")]
        truth_out: PathBuf,
    },
    /// Print the metrics a stored confusion matrix implies.
    MetricsOracle {
        /// Confusion matrix file.
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(cli.command) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::RecordTemplate {
            input,
            label,
            suppress,
            pick,
            out,
        } => record_template(&input, &label, suppress, pick, &out),
        Command::Run {
            input,
            templates,
            config,
            paced,
            out,
        } => run(&input, &templates, config.as_deref(), paced, &out),
        Command::Evaluate {
            events,
            truth,
            tolerance_ms,
        } => evaluate(&events, &truth, tolerance_ms),
        Command::Generate {
            spec,
            out,
            truth_out,
        } => generate_session(&spec, &out, &truth_out),
        Command::MetricsOracle { matrix } => metrics_oracle(&matrix),
    }
}

fn record_template(
    input: &Path,
    label: &str,
    suppress: u32,
    pick: Option<usize>,
    out: &Path,
) -> Result<()> {
    let (header, samples) =
        read_csv(input).with_context(|| format!("reading {}", input.display()))?;
    let cfg = PipelineConfig::default();
    let baseline = resolve_baseline(&samples, cfg.baseline)?;
    let (_, segments) = segment_bout(&samples, header.sample_rate_hz, baseline, &cfg.segmenter())?;
    if segments.is_empty() {
        bail!("no motion segments found in {}", input.display());
    }

    let chosen = match pick {
        Some(k) if k >= segments.len() => {
            bail!("--pick {k} out of range: {} candidate(s)", segments.len())
        }
        Some(k) => k,
        None => pick_median_duration(&segments).expect("segments is non-empty"),
    };
    for (i, seg) in segments.iter().enumerate() {
        let mark = if i == chosen { "  <- enrolled" } else { "" };
        println!(
            "candidate {i}: {} ms at {} ms ({} samples){mark}",
            seg.duration_ms,
            seg.start.t_ms,
            seg.data.len()
        );
    }

    let template = make_template(&segments[chosen], label, suppress)?;
    let mut store = if out.exists() {
        load_templates(out).with_context(|| format!("reading {}", out.display()))?
    } else {
        TemplateStore::new()
    };
    store.insert(template)?;
    save_templates(&store, out).with_context(|| format!("writing {}", out.display()))?;
    println!(
        "enrolled {label:?} ({} ms, suppress {suppress}); store now holds {} template(s)",
        segments[chosen].duration_ms,
        store.len()
    );
    Ok(())
}

fn run(
    input: &Path,
    templates: &Path,
    config: Option<&Path>,
    paced: bool,
    out: &Path,
) -> Result<()> {
    let (header, samples) =
        read_csv(input).with_context(|| format!("reading {}", input.display()))?;
    let store =
        load_templates(templates).with_context(|| format!("reading {}", templates.display()))?;
    let cfg = match config {
        Some(path) => load_config(path).with_context(|| format!("reading {}", path.display()))?,
        None => PipelineConfig::default(),
    };

    let started = Instant::now();
    let (events, state) = if paced {
        let baseline = resolve_baseline(&samples, cfg.baseline)?;
        let mut pipeline = Pipeline::new(store, cfg, header.sample_rate_hz, baseline)?;
        let tick = Duration::from_secs_f64(1.0 / header.sample_rate_hz);
        let mut events = Vec::new();
        for (i, &sample) in samples.iter().enumerate() {
            let due = started + tick * i as u32;
            if let Some(wait) = due.checked_duration_since(Instant::now()) {
                std::thread::sleep(wait);
            }
            events.extend(pipeline.push(sample)?);
        }
        events.extend(pipeline.finish()?);
        let state = pipeline.counts().clone();
        (events, state)
    } else {
        run_pipeline(&samples, &store, &cfg, header.sample_rate_hz)?
    };
    let elapsed = started.elapsed();

    std::fs::write(out, write_event_log(&events))
        .with_context(|| format!("writing {}", out.display()))?;

    for (label, count) in &state.counts {
        println!("{label}: {count}");
    }
    let n_segments = events
        .iter()
        .filter(|e| matches!(e, Event::Segment { .. }))
        .count();
    println!(
        "{} samples, {} segments in {:.1} ms ({:.1} us/sample); log: {}",
        samples.len(),
        n_segments,
        elapsed.as_secs_f64() * 1e3,
        elapsed.as_secs_f64() * 1e6 / samples.len().max(1) as f64,
        out.display()
    );
    Ok(())
}

fn evaluate(events: &Path, truth: &Path, tolerance_ms: u64) -> Result<()> {
    let log = parse_event_log(
        &std::fs::read_to_string(events)
            .with_context(|| format!("reading {}", events.display()))?,
    )?;
    let intervals = load_truth(truth).with_context(|| format!("reading {}", truth.display()))?;
    let matrix = match_events(&counted_events(&log), &intervals, tolerance_ms)?;
    let report = classification_metrics(&matrix);
    print!("{}", write_matrix_string(&matrix));
    println!();
    print!("{}", render_report_human(&report));
    println!();
    print!("{}", render_report_machine(&report));
    Ok(())
}

fn generate_session(spec: &Path, out: &Path, truth_out: &Path) -> Result<()> {
    let spec = load_generator_spec(spec).with_context(|| format!("reading {}", spec.display()))?;
    let (samples, truth) = generate(&spec)?;
    write_csv(out, spec.sample_rate_hz, &samples)
        .with_context(|| format!("writing {}", out.display()))?;
    save_truth(&truth, truth_out).with_context(|| format!("writing {}", truth_out.display()))?;
    println!(
        "{} samples ({:.1} s at {} Hz), {} truth intervals",
        samples.len(),
        samples.len() as f64 / spec.sample_rate_hz,
        spec.sample_rate_hz,
        truth.len()
    );
    Ok(())
}

fn metrics_oracle(matrix: &Path) -> Result<()> {
    let cm = load_matrix(matrix).with_context(|| format!("reading {}", matrix.display()))?;
    let report = classification_metrics(&cm);
    print!("{}", render_report_human(&report));
    println!();
    print!("{}", render_report_machine(&report));
    Ok(())
}
