use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand};
use handmark::config::{RunConfig, Size, DEFAULT_SIZE};
use handmark::detections::{parse_detections, write_detections};
use handmark::imageio::{export_inspection, read_backgrounds};
use handmark::manifest::{base_dir, load_entry, read_manifest, write_manifest, MANIFEST_FILE};
use handmark::packed::read_packed;
use handmark::pipeline::{run_annotate, run_synth, Layout, SynthSettings};
use handmark::{report, Error};
use handmark_core::annotate::{validate, AnnotateError, ValidationReport, MODEL_TOLERANCE};
use handmark_core::detection::filter_in_bounds;
use handmark_core::metrics::{MetricError, DEFAULT_THRESHOLD};
use handmark_core::synth::SynthError;
use handmark_core::ChannelCodes;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "handmark", version, about = "Six-channel hand datasets: synthesize, annotate, validate, evaluate")]
struct Cli {
    /// TOML file with default flag values; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic hands with annotation planes, plus a manifest.
    Synth(SynthArgs),
    /// Annotate real photos from a detections file.
    Annotate {
        detections: PathBuf,
        #[arg(long)]
        images: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        stroke_radius: Option<f64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Split a detections file into kept.json and discarded.json.
    Filter {
        detections: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check packed files or manifests for legal annotation planes.
    Validate {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        tolerance: Option<u8>,
    },
    /// Compare generated detections against reference detections.
    Eval {
        generated: PathBuf,
        reference: PathBuf,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a packed file as viewable images.
    Inspect {
        packed: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// N for square images or WxH.
    #[arg(long)]
    size: Option<Size>,
    #[arg(long)]
    stroke_radius: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
    /// Directory of background photos; solid colours otherwise.
    #[arg(long)]
    backgrounds: Option<PathBuf>,
    /// Write an RGB PNG and an annotation PNG instead of packed files.
    #[arg(long)]
    paired: bool,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            error: anyhow!(msg.into()),
        }
    }

    fn data(error: anyhow::Error) -> Self {
        Failure {
            code: EXIT_DATA,
            error,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Synth(SynthError::InvalidInterval { .. } | SynthError::InvalidCamera)
            | Error::Annotate(AnnotateError::InvalidConfig)
            | Error::Metric(MetricError::InvalidThreshold(_))
            | Error::Config(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Failure {
            code,
            error: e.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn required<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::usage(format!("--{flag} is required (flag or config file)")))
}

fn cmd_synth(cfg: &RunConfig, args: SynthArgs) -> CmdResult {
    let SynthArgs {
        count,
        seed,
        size,
        stroke_radius,
        out,
        workers,
        backgrounds,
        paired,
    } = args;
    let seed = required(seed.or(cfg.seed), "seed")?;
    let out = required(out.or_else(|| cfg.out.clone()), "out")?;
    let count = count.or(cfg.count).unwrap_or(1);
    if count == 0 {
        return Err(Failure::usage("--count must be at least 1"));
    }
    let size = size.or(cfg.size).unwrap_or(DEFAULT_SIZE);
    let mut settings = SynthSettings::new(seed, size);
    settings.stroke_radius = stroke_radius.or(cfg.stroke_radius);
    settings.raster_config()?;
    if let Some(dir) = backgrounds.or_else(|| cfg.backgrounds.clone()) {
        settings.backgrounds = read_backgrounds(&dir, size.width, size.height)?;
        if settings.backgrounds.is_empty() {
            return Err(Failure::data(anyhow!("{}: no PNG or JPEG backgrounds", dir.display())));
        }
    }
    let layout = if paired { Layout::Paired } else { Layout::Packed };
    let workers = workers.or(cfg.workers).unwrap_or(0);

    let entries = run_synth(&settings, count as u64, &out, layout, workers)?;
    write_manifest(&entries, out.join(MANIFEST_FILE))?;
    println!("wrote {} samples to {}", entries.len(), out.display());
    Ok(())
}

fn cmd_annotate(
    cfg: &RunConfig,
    detections: &Path,
    images: &Path,
    out: Option<PathBuf>,
    stroke_radius: Option<f64>,
    workers: Option<usize>,
) -> CmdResult {
    let out = required(out.or_else(|| cfg.out.clone()), "out")?;
    let records = parse_detections(detections)?;
    if records.is_empty() {
        return Err(Failure::data(anyhow!("{}: no records", detections.display())));
    }
    let (kept, discarded) = filter_in_bounds(records);
    println!("kept {}, discarded {}", kept.len(), discarded.len());
    let entries = run_annotate(
        &kept,
        images,
        &out,
        stroke_radius.or(cfg.stroke_radius),
        workers.or(cfg.workers).unwrap_or(0),
    )?;
    write_manifest(&entries, out.join(MANIFEST_FILE))?;
    Ok(())
}

fn cmd_filter(cfg: &RunConfig, detections: &Path, out: Option<PathBuf>) -> CmdResult {
    let out = required(out.or_else(|| cfg.out.clone()), "out")?;
    let records = parse_detections(detections)?;
    let (kept, discarded) = filter_in_bounds(records);
    std::fs::create_dir_all(&out).map_err(|e| Failure::data(anyhow!("{}: {e}", out.display())))?;
    write_detections(&kept, out.join("kept.json"))?;
    write_detections(&discarded, out.join("discarded.json"))?;
    println!("kept {}, discarded {}", kept.len(), discarded.len());
    Ok(())
}

fn print_validation(label: &str, report: &ValidationReport) -> bool {
    if report.passes() {
        println!(
            "PASS {label} ({} component{})",
            report.components,
            if report.components == 1 { "" } else { "s" }
        );
        return true;
    }
    println!("FAIL {label}: {} violation(s)", report.violation_count());
    for v in report.samples.iter().take(5) {
        println!("  {v}");
    }
    false
}

fn cmd_validate(cfg: &RunConfig, inputs: &[PathBuf], tolerance: Option<u8>) -> CmdResult {
    let tolerance = tolerance.or(cfg.tolerance).unwrap_or(MODEL_TOLERANCE);
    let codes = ChannelCodes::STANDARD;
    let mut failed = 0usize;
    let mut checked = 0usize;
    for input in inputs {
        let is_manifest = input.extension().is_some_and(|e| e == "json");
        if is_manifest {
            let m = read_manifest(input)?;
            let base = base_dir(input);
            for entry in &m.entries {
                let img = load_entry(&base, entry)?;
                let label = format!("{}:{}", input.display(), entry.id);
                checked += 1;
                if !print_validation(&label, &validate(&img.annotation(), &codes, tolerance)) {
                    failed += 1;
                }
            }
        } else {
            let img = read_packed(input)?;
            checked += 1;
            if !print_validation(&input.display().to_string(), &validate(&img.annotation(), &codes, tolerance)) {
                failed += 1;
            }
        }
    }
    println!("{} of {checked} passed at tolerance {tolerance}", checked - failed);
    if failed > 0 {
        return Err(Failure::data(anyhow!("{failed} image(s) failed validation")));
    }
    Ok(())
}

fn cmd_eval(
    cfg: &RunConfig,
    generated: &Path,
    reference: &Path,
    threshold: Option<f64>,
    out: Option<PathBuf>,
) -> CmdResult {
    let threshold = threshold.or(cfg.threshold).unwrap_or(DEFAULT_THRESHOLD);
    let gen = parse_detections(generated)?;
    let reference_records = parse_detections(reference)?;
    let rep = handmark_core::metrics::report(&gen, &reference_records, threshold).map_err(Error::from)?;
    print!("{}", report::to_table(&rep));
    if let Some(out) = out.or_else(|| cfg.out.clone()) {
        let [json, table] = report::write_report(&rep, &out)?;
        println!("wrote {} and {}", json.display(), table.display());
    }
    Ok(())
}

fn cmd_inspect(cfg: &RunConfig, packed: &Path, out: Option<PathBuf>) -> CmdResult {
    let out = required(out.or_else(|| cfg.out.clone()), "out")?;
    let img = read_packed(packed)?;
    for p in export_inspection(&img, &out)? {
        println!("{}", p.display());
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Synth(args) => cmd_synth(&cfg, args),
        Command::Annotate {
            detections,
            images,
            out,
            stroke_radius,
            workers,
        } => cmd_annotate(&cfg, &detections, &images, out, stroke_radius, workers),
        Command::Filter { detections, out } => cmd_filter(&cfg, &detections, out),
        Command::Validate { inputs, tolerance } => cmd_validate(&cfg, &inputs, tolerance),
        Command::Eval {
            generated,
            reference,
            threshold,
            out,
        } => cmd_eval(&cfg, &generated, &reference, threshold, out),
        Command::Inspect { packed, out } => cmd_inspect(&cfg, &packed, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(f)) => {
            eprintln!("error: {}", f.error);
            ExitCode::from(f.code)
        }
        Err(_) => ExitCode::from(EXIT_INTERNAL),
    }
}
