//! Command implementations behind the `gesture-knn` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::dataset::{self, FeatureTable};
use crate::error::{Error, Result};
use crate::features::{self, FeatureVector, FrameFeatures};
use crate::imaging::{self, draw, PixelBuffer, SkinRange};
use crate::knn::{self, CvReport, KnnModel, DEFAULT_K_FOLDS, DEFAULT_K_NEIGHBORS};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_MIN_AREA: f64 = 500.0;
pub const MARKER_RADIUS: i64 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "gesture-knn",
    version,
    about = "Hand-shape features and KNN gesture classification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract one feature row per frame into a CSV file
    Extract {
        /// Directory of .ppm/.png frames
        #[arg(long, short)]
        input: PathBuf,
        /// Destination CSV
        #[arg(long, short)]
        output: PathBuf,
        /// Class label attached to every row
        #[arg(long)]
        label: Option<String>,
        #[command(flatten)]
        frame: FrameOpts,
    },
    /// K-fold cross-validation of a labelled CSV
    CrossValidate {
        #[arg(long, short)]
        input: PathBuf,
        /// Optional key=value report file
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        model: ModelOpts,
        #[arg(long, default_value_t = DEFAULT_K_FOLDS)]
        k_folds: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Classify query rows (CSV) or frames (directory) against a labelled CSV
    Predict {
        /// Labelled training CSV
        #[arg(long)]
        train: PathBuf,
        /// Query CSV, or a directory of frames
        #[arg(long, short)]
        input: PathBuf,
        /// Write predictions here instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Expected class for frame-directory queries
        #[arg(long)]
        label: Option<String>,
        #[command(flatten)]
        model: ModelOpts,
        #[command(flatten)]
        frame: FrameOpts,
    },
    /// Draw contour, centroid and extreme points onto each frame
    Annotate {
        #[arg(long, short)]
        input: PathBuf,
        /// Output directory
        #[arg(long, short)]
        output: PathBuf,
        #[command(flatten)]
        frame: FrameOpts,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ModelOpts {
    #[arg(long, short = 'k', default_value_t = DEFAULT_K_NEIGHBORS)]
    pub k_neighbors: usize,
    /// Min-max normalise features, fitted on training rows only
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FrameOpts {
    /// Smallest contour area (square pixels) accepted as a hand
    #[arg(long, default_value_t = DEFAULT_MIN_AREA)]
    pub min_area: f64,
    #[arg(long, default_value_t = 0)]
    pub y_min: u8,
    #[arg(long, default_value_t = 255)]
    pub y_max: u8,
    #[arg(long, default_value_t = 133)]
    pub cr_min: u8,
    #[arg(long, default_value_t = 179)]
    pub cr_max: u8,
    #[arg(long, default_value_t = 77)]
    pub cb_min: u8,
    #[arg(long, default_value_t = 127)]
    pub cb_max: u8,
}

impl FrameOpts {
    pub fn skin_range(&self) -> Result<SkinRange> {
        SkinRange::new(
            (self.y_min, self.y_max),
            (self.cr_min, self.cr_max),
            (self.cb_min, self.cb_max),
        )
    }
}

/// Flattened run parameters shared by all commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub train: Option<PathBuf>,
    pub label: Option<String>,
    pub k_neighbors: usize,
    pub k_folds: usize,
    pub seed: u64,
    pub min_area: f64,
    pub normalize: bool,
    pub skin: SkinRange,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: PathBuf::new(),
            output: None,
            train: None,
            label: None,
            k_neighbors: DEFAULT_K_NEIGHBORS,
            k_folds: DEFAULT_K_FOLDS,
            seed: DEFAULT_SEED,
            min_area: DEFAULT_MIN_AREA,
            normalize: false,
            skin: SkinRange::default(),
        }
    }
}

fn with_frame(mut c: RunConfig, f: &FrameOpts) -> Result<RunConfig> {
    c.min_area = f.min_area;
    c.skin = f.skin_range()?;
    Ok(c)
}

/// Runs a parsed command and returns the text destined for stdout.
pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Extract {
            input,
            output,
            label,
            frame,
        } => {
            let cfg = with_frame(
                RunConfig {
                    input,
                    output: Some(output),
                    label,
                    ..Default::default()
                },
                &frame,
            )?;
            Ok(cmd_extract(&cfg)?.render())
        }
        Command::CrossValidate {
            input,
            output,
            model,
            k_folds,
            seed,
        } => {
            let cfg = RunConfig {
                input,
                output,
                k_neighbors: model.k_neighbors,
                normalize: model.normalize,
                k_folds,
                seed,
                ..Default::default()
            };
            Ok(cmd_cross_validate(&cfg)?.to_table())
        }
        Command::Predict {
            train,
            input,
            output,
            label,
            model,
            frame,
        } => {
            let cfg = with_frame(
                RunConfig {
                    input,
                    output: output.clone(),
                    train: Some(train),
                    label,
                    k_neighbors: model.k_neighbors,
                    normalize: model.normalize,
                    ..Default::default()
                },
                &frame,
            )?;
            let text = cmd_predict(&cfg)?.render();
            match output {
                Some(path) => {
                    fs::write(&path, &text).map_err(|e| Error::io(&path, e))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Annotate {
            input,
            output,
            frame,
        } => {
            let cfg = with_frame(
                RunConfig {
                    input,
                    output: Some(output),
                    ..Default::default()
                },
                &frame,
            )?;
            Ok(cmd_annotate(&cfg)?.render())
        }
    }
}

fn is_frame_file(p: &Path) -> bool {
    p.is_file()
        && p.extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("ppm") || e.eq_ignore_ascii_case("png"))
}

/// `.ppm`/`.png` files in `dir`, sorted by file name.
pub fn list_frames(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut frames = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if is_frame_file(&path) {
            frames.push(path);
        }
    }
    frames.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if frames.is_empty() {
        return Err(Error::NoFrames(format!(
            "{}: no .ppm or .png frames",
            dir.display()
        )));
    }
    Ok(frames)
}

enum FrameOutcome {
    Features(FeatureVector),
    Skipped,
    Failed(String),
}

fn extract_table(frames: &[PathBuf], cfg: &RunConfig) -> (FeatureTable, ExtractSummary) {
    let outcomes: Vec<FrameOutcome> = frames
        .par_iter()
        .map(|path| match imaging::read_frame(path) {
            Err(e) => FrameOutcome::Failed(e.to_string()),
            Ok(frame) => match features::analyze_frame(&frame, &cfg.skin, cfg.min_area) {
                Some(f) => FrameOutcome::Features(f.to_vector(cfg.label.clone())),
                None => FrameOutcome::Skipped,
            },
        })
        .collect();

    let mut table = FeatureTable::default();
    let mut summary = ExtractSummary::default();
    for outcome in outcomes {
        match outcome {
            FrameOutcome::Features(v) => {
                table.push(v);
                summary.rows += 1;
            }
            FrameOutcome::Skipped => summary.skipped += 1,
            FrameOutcome::Failed(msg) => summary.failed.push(msg),
        }
    }
    (table, summary)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtractSummary {
    pub rows: usize,
    pub skipped: usize,
    pub failed: Vec<String>,
}

impl ExtractSummary {
    pub fn render(&self) -> String {
        let mut s = String::new();
        for f in &self.failed {
            let _ = writeln!(s, "skipped undecodable frame: {f}");
        }
        let _ = writeln!(s, "rows_written={}", self.rows);
        let _ = writeln!(s, "frames_skipped={}", self.skipped);
        let _ = writeln!(s, "frames_failed={}", self.failed.len());
        s
    }
}

pub fn cmd_extract(cfg: &RunConfig) -> Result<ExtractSummary> {
    if let Some(label) = &cfg.label {
        dataset::validate_label(label)?;
    }
    let output = cfg
        .output
        .as_deref()
        .ok_or_else(|| Error::InvalidModel("extract needs an output path".into()))?;
    let frames = list_frames(&cfg.input)?;
    let (table, summary) = extract_table(&frames, cfg);
    if summary.rows == 0 {
        return Err(Error::NoFrames(format!(
            "{}: 0 rows from {} frames ({} without a qualifying contour, {} undecodable)",
            cfg.input.display(),
            frames.len(),
            summary.skipped,
            summary.failed.len()
        )));
    }
    dataset::write_csv(&table, output)?;
    Ok(summary)
}

/// Loads the labelled CSV, runs cross-validation and writes the key=value
/// report when an output path is set.
pub fn cmd_cross_validate(cfg: &RunConfig) -> Result<CvReport<f64>> {
    let table = dataset::read_csv(&cfg.input)?;
    let report = knn::cross_validate(
        &table,
        cfg.k_folds,
        cfg.k_neighbors,
        cfg.seed,
        cfg.normalize,
    )
    .map_err(|e| with_file(e, &cfg.input))?;
    if let Some(path) = &cfg.output {
        fs::write(path, report.to_key_values()).map_err(|e| Error::io(path, e))?;
    }
    Ok(report)
}

fn with_file(e: Error, path: &Path) -> Error {
    match e {
        Error::InsufficientRows { .. } | Error::InvalidFolds { .. } | Error::InvalidModel(_) => {
            Error::InvalidModel(format!("{}: {e}", path.display()))
        }
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub values: [u32; 10],
    pub predicted: String,
    pub expected: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictReport {
    pub rows: Vec<PredictionRow>,
    /// Over the rows that carry an expected label.
    pub accuracy: Option<f64>,
}

impl PredictReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let values: Vec<String> = r.values.iter().map(u32::to_string).collect();
            let _ = write!(s, "[{}] predicted={}", values.join(","), r.predicted);
            if let Some(exp) = &r.expected {
                let mark = if *exp == r.predicted {
                    "correct"
                } else {
                    "incorrect"
                };
                let _ = write!(s, " actual={exp} {mark}");
            }
            s.push('\n');
        }
        if let Some(acc) = self.accuracy {
            let _ = writeln!(s, "accuracy={acc:.2}");
        }
        s
    }
}

fn load_queries(cfg: &RunConfig) -> Result<FeatureTable> {
    if cfg.input.is_dir() {
        let frames = list_frames(&cfg.input)?;
        let (table, summary) = extract_table(&frames, cfg);
        for f in &summary.failed {
            eprintln!("skipped undecodable frame: {f}");
        }
        Ok(table)
    } else {
        dataset::read_csv(&cfg.input)
    }
}

pub fn cmd_predict(cfg: &RunConfig) -> Result<PredictReport> {
    let train_path = cfg
        .train
        .as_deref()
        .ok_or_else(|| Error::InvalidModel("predict needs a training CSV".into()))?;
    let train = dataset::read_csv(train_path)?;
    let queries = load_queries(cfg)?;
    if queries.is_empty() {
        return Err(Error::EmptyInput);
    }

    let params = if cfg.normalize {
        Some(dataset::fit_normalization(&train)?)
    } else {
        None
    };
    let encode = |v: &[u32; 10]| -> Vec<f64> {
        match &params {
            Some(p) => p.apply(v),
            None => v.iter().map(|&x| f64::from(x)).collect(),
        }
    };
    let labels: Vec<String> = train
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.label.clone().ok_or_else(|| {
                Error::InvalidModel(format!(
                    "{}: training row {} has no label",
                    train_path.display(),
                    i + 1
                ))
            })
        })
        .collect::<Result<_>>()?;
    let model = KnnModel::new(
        train.rows().iter().map(|r| encode(&r.values)).collect(),
        labels,
        cfg.k_neighbors,
    )
    .map_err(|e| with_file(e, train_path))?;

    let rows = queries
        .rows()
        .iter()
        .map(|q| {
            Ok(PredictionRow {
                values: q.values,
                predicted: knn::predict(&model, &encode(&q.values))?.label,
                expected: q.label.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (predicted, actual): (Vec<&str>, Vec<&str>) = rows
        .iter()
        .filter_map(|r| r.expected.as_deref().map(|e| (r.predicted.as_str(), e)))
        .unzip();
    let accuracy = knn::accuracy(&predicted, &actual).ok();
    Ok(PredictReport { rows, accuracy })
}

/// Paints the largest contour (green), extreme points (blue rings) and the
/// centroid (filled red disc) onto a copy of the frame.
pub fn annotate_frame(frame: &PixelBuffer, f: &FrameFeatures<f64>) -> PixelBuffer {
    let mut out = frame.clone();
    draw::draw_contour(&mut out, &f.contour, draw::GREEN);
    let e = &f.extremes;
    for p in [e.left, e.right, e.top, e.bottom] {
        draw::draw_circle(&mut out, p, MARKER_RADIUS, draw::BLUE);
    }
    draw::fill_circle(&mut out, f.centroid.truncated(), MARKER_RADIUS, draw::RED);
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotateSummary {
    pub annotated: usize,
    pub unmodified: usize,
    pub failed: Vec<String>,
}

impl AnnotateSummary {
    pub fn render(&self) -> String {
        let mut s = String::new();
        for f in &self.failed {
            let _ = writeln!(s, "skipped undecodable frame: {f}");
        }
        let _ = writeln!(s, "frames_annotated={}", self.annotated);
        let _ = writeln!(s, "frames_unmodified={}", self.unmodified);
        let _ = writeln!(s, "frames_failed={}", self.failed.len());
        s
    }
}

/// Writes each input frame under the same file name in the output directory.
pub fn cmd_annotate(cfg: &RunConfig) -> Result<AnnotateSummary> {
    let out_dir = cfg
        .output
        .as_deref()
        .ok_or_else(|| Error::InvalidModel("annotate needs an output directory".into()))?;
    let frames = list_frames(&cfg.input)?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let results: Vec<Result<bool>> = frames
        .par_iter()
        .map(|path| {
            let frame = imaging::read_frame(path)?;
            let dest = out_dir.join(path.file_name().expect("listed files have names"));
            match features::analyze_frame(&frame, &cfg.skin, cfg.min_area) {
                Some(f) => imaging::write_frame(&dest, &annotate_frame(&frame, &f)).map(|_| true),
                None => imaging::write_frame(&dest, &frame).map(|_| false),
            }
        })
        .collect();

    let mut summary = AnnotateSummary::default();
    for r in results {
        match r {
            Ok(true) => summary.annotated += 1,
            Ok(false) => summary.unmodified += 1,
            Err(e @ Error::Decode { .. }) => summary.failed.push(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok(summary)
}
