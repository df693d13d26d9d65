//! Loading Bonn-format EEG segments into labeled datasets.
//!
//! A segment file is plain ASCII with one decimal integer sample per line
//! (LF or CRLF). A dataset manifest maps class names to directories, glob
//! patterns or explicit file lists, and fixes the sampling rate. Loading is
//! deterministic: classes are assembled in the fixed order normal1, normal2,
//! interictal, ictal, and files within a class in lexicographic path order,
//! regardless of I/O scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Clinical class of a segment, mirroring the four Bonn sets used here
/// (set C is deliberately not modeled).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    /// Set A: healthy volunteers, eyes open.
    Normal1,
    /// Set B: healthy volunteers, eyes closed.
    Normal2,
    /// Set D: epileptogenic zone, seizure-free interval.
    Interictal,
    /// Set E: seizure activity.
    Ictal,
}

impl ClassLabel {
    /// All labels in canonical dataset order (Bonn sets A, B, D, E).
    pub const ALL: [ClassLabel; 4] = [
        ClassLabel::Normal1,
        ClassLabel::Normal2,
        ClassLabel::Interictal,
        ClassLabel::Ictal,
    ];

    /// Binary projection: interictal and ictal segments are the abnormal
    /// (positive) group, the two healthy sets the normal group.
    pub fn is_abnormal(self) -> bool {
        matches!(self, ClassLabel::Interictal | ClassLabel::Ictal)
    }

    /// Name of the binary group this label falls into.
    pub fn binary_name(self) -> &'static str {
        if self.is_abnormal() {
            "abnormal"
        } else {
            "normal"
        }
    }

    /// Letter of the corresponding Bonn set.
    pub fn bonn_set(self) -> char {
        match self {
            ClassLabel::Normal1 => 'A',
            ClassLabel::Normal2 => 'B',
            ClassLabel::Interictal => 'D',
            ClassLabel::Ictal => 'E',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::Normal1 => "normal1",
            ClassLabel::Normal2 => "normal2",
            ClassLabel::Interictal => "interictal",
            ClassLabel::Ictal => "ictal",
        }
    }

    /// Parses a label from its name or Bonn set letter, case-insensitive.
    pub fn parse(text: &str) -> Option<ClassLabel> {
        match text.to_ascii_lowercase().as_str() {
            "normal1" | "a" => Some(ClassLabel::Normal1),
            "normal2" | "b" => Some(ClassLabel::Normal2),
            "interictal" | "d" => Some(ClassLabel::Interictal),
            "ictal" | "e" => Some(ClassLabel::Ictal),
            _ => None,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One single-channel EEG recording with its provenance and label.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesSegment {
    /// Amplitudes in microvolts against an arbitrary reference.
    pub samples: Vec<f64>,
    /// Sampling rate in Hz (173.61 for Bonn).
    pub sampling_rate: f64,
    /// Opaque origin identifier, the file stem for loaded segments.
    pub source_id: String,
    pub label: ClassLabel,
}

impl TimeSeriesSegment {
    /// Builds a segment from already-materialized samples.
    ///
    /// Panics on an empty sample vector or nonpositive rate; those are
    /// programming errors, not data conditions. Nonfinite samples are
    /// allowed here so [`validate_dataset`] can report them.
    pub fn new(
        samples: Vec<f64>,
        sampling_rate: f64,
        source_id: impl Into<String>,
        label: ClassLabel,
    ) -> TimeSeriesSegment {
        assert!(!samples.is_empty(), "segment must contain samples");
        assert!(sampling_rate > 0.0, "sampling rate must be positive");
        TimeSeriesSegment {
            samples,
            sampling_rate,
            source_id: source_id.into(),
            label,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Duration in seconds.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sampling_rate
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("{path}:{line}: cannot parse sample (expected one decimal integer per line)")]
    ParseError { path: PathBuf, line: usize },
    #[error("empty segment file: {0}")]
    EmptyFile(PathBuf),
    #[error("segments mix sampling rates ({0} Hz and {1} Hz)")]
    MixedSamplingRate(f64, f64),
    #[error("invalid manifest: {0}")]
    InvalidManifest(String),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Where the files of one class come from.
#[derive(Debug, Clone)]
enum ClassSource {
    /// Every regular file directly inside a directory.
    Directory(PathBuf),
    /// Files in `dir` whose names match a `*` wildcard pattern.
    Pattern { dir: PathBuf, file_pattern: String },
    /// An explicit list of files.
    Files(Vec<PathBuf>),
}

/// Declares which files belong to which class and at what sampling rate.
///
/// The on-disk form is TOML:
///
/// ```toml
/// sampling_rate = 173.61
/// expected_per_class = 100
///
/// [classes]
/// normal1 = "bonn/A"          # a directory: every file in it
/// normal2 = "bonn/B/*.txt"    # a glob over one directory
/// interictal = ["d/D001.txt", "d/D002.txt"]
/// ictal = "bonn/E"
/// ```
///
/// Relative paths are resolved against the manifest file's directory.
#[derive(Debug, Clone)]
pub struct DatasetManifest {
    pub sampling_rate: f64,
    /// Segment count each class is expected to contribute (100 for Bonn).
    pub expected_per_class: Option<usize>,
    entries: Vec<(ClassLabel, ClassSource)>,
}

#[derive(Deserialize)]
struct RawManifest {
    sampling_rate: f64,
    expected_per_class: Option<usize>,
    classes: BTreeMap<String, toml::Value>,
}

impl DatasetManifest {
    /// Starts an empty manifest for programmatic construction.
    pub fn new(sampling_rate: f64) -> DatasetManifest {
        DatasetManifest {
            sampling_rate,
            expected_per_class: None,
            entries: Vec::new(),
        }
    }

    /// Registers a directory (or `*` glob) as the source for a class.
    pub fn add_class_dir(&mut self, label: ClassLabel, path: impl Into<PathBuf>) {
        let path: PathBuf = path.into();
        let source = match split_glob(&path) {
            Some((dir, pattern)) => ClassSource::Pattern {
                dir,
                file_pattern: pattern,
            },
            None => ClassSource::Directory(path),
        };
        self.entries.retain(|(l, _)| *l != label);
        self.entries.push((label, source));
        self.entries.sort_by_key(|(l, _)| *l);
    }

    /// Registers an explicit file list as the source for a class.
    pub fn add_class_files(&mut self, label: ClassLabel, files: Vec<PathBuf>) {
        self.entries.retain(|(l, _)| *l != label);
        self.entries.push((label, ClassSource::Files(files)));
        self.entries.sort_by_key(|(l, _)| *l);
    }

    /// Parses a TOML manifest file; relative paths become relative to it.
    pub fn from_file(path: &Path) -> Result<DatasetManifest, IngestError> {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        DatasetManifest::from_toml(&text, base)
    }

    /// Parses manifest TOML, resolving relative paths against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<DatasetManifest, IngestError> {
        let raw: RawManifest =
            toml::from_str(text).map_err(|e| IngestError::InvalidManifest(e.to_string()))?;
        if !(raw.sampling_rate > 0.0) {
            return Err(IngestError::InvalidManifest(
                "sampling_rate must be positive".into(),
            ));
        }
        let mut manifest = DatasetManifest::new(raw.sampling_rate);
        manifest.expected_per_class = raw.expected_per_class;
        for (key, value) in &raw.classes {
            let label = ClassLabel::parse(key).ok_or_else(|| {
                IngestError::InvalidManifest(format!(
                    "unknown class {key:?} (expected normal1, normal2, interictal or ictal)"
                ))
            })?;
            match value {
                toml::Value::String(s) => manifest.add_class_dir(label, base.join(s)),
                toml::Value::Array(items) => {
                    let mut files = Vec::with_capacity(items.len());
                    for item in items {
                        let s = item.as_str().ok_or_else(|| {
                            IngestError::InvalidManifest(format!(
                                "class {key:?}: file list entries must be strings"
                            ))
                        })?;
                        files.push(base.join(s));
                    }
                    manifest.add_class_files(label, files);
                }
                _ => {
                    return Err(IngestError::InvalidManifest(format!(
                        "class {key:?}: expected a path string or a list of paths"
                    )))
                }
            }
        }
        if manifest.entries.is_empty() {
            return Err(IngestError::InvalidManifest(
                "manifest declares no classes".into(),
            ));
        }
        Ok(manifest)
    }

    /// Classes this manifest declares, in canonical order.
    pub fn classes(&self) -> Vec<ClassLabel> {
        self.entries.iter().map(|(l, _)| *l).collect()
    }

    /// Resolves every class source to a lexicographically sorted file list.
    pub fn resolved_files(&self) -> Result<Vec<(ClassLabel, Vec<PathBuf>)>, IngestError> {
        let mut out = Vec::with_capacity(self.entries.len());
        for (label, source) in &self.entries {
            let mut files = match source {
                ClassSource::Directory(dir) => list_files(dir, None)?,
                ClassSource::Pattern { dir, file_pattern } => {
                    list_files(dir, Some(file_pattern))?
                }
                ClassSource::Files(files) => {
                    for f in files {
                        if !f.is_file() {
                            return Err(IngestError::FileNotFound(f.clone()));
                        }
                    }
                    files.clone()
                }
            };
            files.sort();
            // An existing but empty source is allowed: it loads as an empty
            // class that dataset validation will warn about. Missing
            // directories and files still fail above.
            out.push((*label, files));
        }
        Ok(out)
    }
}

fn io_error(path: &Path, e: std::io::Error) -> IngestError {
    if e.kind() == std::io::ErrorKind::NotFound {
        IngestError::FileNotFound(path.to_path_buf())
    } else {
        IngestError::Io {
            path: path.to_path_buf(),
            source: e,
        }
    }
}

/// Splits a path into (directory, file pattern) when its final component
/// contains `*`. Wildcards elsewhere are rejected by `list_files` later
/// because such a directory will simply not exist.
fn split_glob(path: &Path) -> Option<(PathBuf, String)> {
    let name = path.file_name()?.to_str()?;
    if name.contains('*') {
        let dir = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
        Some((dir, name.to_string()))
    } else {
        None
    }
}

/// Matches `name` against a pattern where `*` spans any run of characters.
fn wildcard_match(pattern: &str, name: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let n: Vec<char> = name.chars().collect();
    let (mut pi, mut ni) = (0usize, 0usize);
    let mut star: Option<(usize, usize)> = None;
    while ni < n.len() {
        if pi < p.len() && (p[pi] == n[ni]) {
            pi += 1;
            ni += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some((pi, ni));
            pi += 1;
        } else if let Some((sp, sn)) = star {
            pi = sp + 1;
            ni = sn + 1;
            star = Some((sp, sn + 1));
        } else {
            return false;
        }
    }
    while pi < p.len() && p[pi] == '*' {
        pi += 1;
    }
    pi == p.len()
}

fn list_files(dir: &Path, pattern: Option<&str>) -> Result<Vec<PathBuf>, IngestError> {
    let entries = fs::read_dir(dir).map_err(|e| io_error(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| io_error(dir, e))?;
        let path = entry.path();
        if !path.is_file() {
            continue;
        }
        if let Some(pattern) = pattern {
            let name = match path.file_name().and_then(|n| n.to_str()) {
                Some(n) => n,
                None => continue,
            };
            if !wildcard_match(pattern, name) {
                continue;
            }
        }
        files.push(path);
    }
    Ok(files)
}

/// Parses one Bonn-format segment file: one decimal integer per line.
pub fn load_segment(
    path: &Path,
    sampling_rate: f64,
    label: ClassLabel,
) -> Result<TimeSeriesSegment, IngestError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut samples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        let value: i64 = trimmed.parse().map_err(|_| IngestError::ParseError {
            path: path.to_path_buf(),
            line: idx + 1,
        })?;
        samples.push(value as f64);
    }
    if samples.is_empty() {
        return Err(IngestError::EmptyFile(path.to_path_buf()));
    }
    let source_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned());
    Ok(TimeSeriesSegment {
        samples,
        sampling_rate,
        source_id,
        label,
    })
}

/// Segments with uniform sampling rate, ordered class-major.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    segments: Vec<TimeSeriesSegment>,
}

impl LabeledDataset {
    /// Wraps segments after checking they agree on the sampling rate.
    /// Order is preserved; an empty collection is a valid (if useless)
    /// dataset so that validation can describe it.
    pub fn from_segments(segments: Vec<TimeSeriesSegment>) -> Result<LabeledDataset, IngestError> {
        if let Some(first) = segments.first() {
            for seg in &segments[1..] {
                if seg.sampling_rate != first.sampling_rate {
                    return Err(IngestError::MixedSamplingRate(
                        first.sampling_rate,
                        seg.sampling_rate,
                    ));
                }
            }
        }
        Ok(LabeledDataset { segments })
    }

    pub fn segments(&self) -> &[TimeSeriesSegment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Common sampling rate, or None for an empty dataset.
    pub fn sampling_rate(&self) -> Option<f64> {
        self.segments.first().map(|s| s.sampling_rate)
    }

    /// Distinct labels present, in canonical order. This is the task
    /// arity: 2 for the binary grouping, 4 for the full problem.
    pub fn class_count(&self) -> usize {
        self.labels_present().len()
    }

    pub fn labels_present(&self) -> Vec<ClassLabel> {
        ClassLabel::ALL
            .iter()
            .copied()
            .filter(|l| self.segments.iter().any(|s| s.label == *l))
            .collect()
    }

    /// Segment count per label, zero entries included for absent labels.
    pub fn class_counts(&self) -> BTreeMap<ClassLabel, usize> {
        let mut counts: BTreeMap<ClassLabel, usize> =
            ClassLabel::ALL.iter().map(|l| (*l, 0)).collect();
        for seg in &self.segments {
            *counts.get_mut(&seg.label).unwrap() += 1;
        }
        counts
    }
}

/// Loads every file a manifest declares. Files are read in parallel but the
/// resulting order is fixed: classes in canonical order, files in
/// lexicographic path order within each class.
pub fn load_dataset(manifest: &DatasetManifest) -> Result<LabeledDataset, IngestError> {
    let resolved = manifest.resolved_files()?;
    let mut jobs: Vec<(ClassLabel, PathBuf)> = Vec::new();
    for (label, files) in resolved {
        for file in files {
            jobs.push((label, file));
        }
    }
    let loaded: Vec<Result<TimeSeriesSegment, IngestError>> = jobs
        .par_iter()
        .map(|(label, path)| load_segment(path, manifest.sampling_rate, *label))
        .collect();
    let mut segments = Vec::with_capacity(loaded.len());
    for result in loaded {
        segments.push(result?);
    }
    LabeledDataset::from_segments(segments)
}

/// Findings from a non-mutating dataset health check.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    /// Segment count per class name, canonical order.
    pub class_counts: Vec<(String, usize)>,
    pub segment_count: usize,
    pub min_length: Option<usize>,
    pub max_length: Option<usize>,
    pub sampling_rate: Option<f64>,
    /// Source ids of segments containing NaN or infinite samples.
    pub nonfinite_segments: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    /// True when nothing questionable was found.
    pub fn is_clean(&self) -> bool {
        self.nonfinite_segments.is_empty() && self.warnings.is_empty()
    }
}

/// Inspects a dataset and reports per-class counts, the segment length
/// range, and any nonfinite samples. Never fails: problems become findings.
pub fn validate_dataset(dataset: &LabeledDataset) -> ValidationReport {
    let counts = dataset.class_counts();
    let class_counts = ClassLabel::ALL
        .iter()
        .map(|l| (l.name().to_string(), counts[l]))
        .collect();
    let lengths: Vec<usize> = dataset.segments().iter().map(|s| s.len()).collect();
    let nonfinite_segments: Vec<String> = dataset
        .segments()
        .iter()
        .filter(|s| s.samples.iter().any(|v| !v.is_finite()))
        .map(|s| s.source_id.clone())
        .collect();
    let mut warnings = Vec::new();
    if dataset.is_empty() {
        warnings.push("dataset contains no segments".to_string());
    }
    if let (Some(lo), Some(hi)) = (lengths.iter().min(), lengths.iter().max()) {
        if lo != hi {
            warnings.push(format!("segment lengths vary ({lo} to {hi} samples)"));
        }
    }
    ValidationReport {
        class_counts,
        segment_count: dataset.len(),
        min_length: lengths.iter().min().copied(),
        max_length: lengths.iter().max().copied(),
        sampling_rate: dataset.sampling_rate(),
        nonfinite_segments,
        warnings,
    }
}
