//! The 105-dimensional feature vector built from the three spectral
//! transforms: 15 power-spectrum measures for each of the five clinical
//! bands, 5 spectrogram measures per band, and 5 whole-region bispectrum
//! measures.
//!
//! Feature order is fixed forever: the power-spectrum block is band-major
//! (all 15 measures of delta, then theta, ...), followed by the spectrogram
//! block in the same band order, followed by the bispectrum block. Every
//! degenerate input (an all-zero band, a silent segment) maps to documented
//! finite values rather than NaN.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{ClassLabel, LabeledDataset, TimeSeriesSegment};
use crate::spectral::{
    bispectrum_capped, multitaper_ps, multitaper_sg, Bispectrum, PowerSpectrum, SpectralError,
    Spectrogram,
};
use crate::tapers::{dpss, TaperError, TaperSet};

/// A named frequency interval, half-open: lo <= f < hi.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64) -> Band {
        let band = Band {
            name: name.into(),
            lo,
            hi,
        };
        assert!(0.0 < band.lo && band.lo < band.hi, "bad band {band:?}");
        band
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// The five clinical EEG bands, in ascending frequency order.
    pub fn standard() -> Vec<Band> {
        BAND_DEFS
            .iter()
            .map(|&(name, lo, hi)| Band::new(name, lo, hi))
            .collect()
    }
}

const BAND_DEFS: [(&str, f64, f64); 5] = [
    ("delta", 1.0, 4.0),
    ("theta", 4.0, 8.0),
    ("alpha", 8.0, 12.0),
    ("beta", 12.0, 30.0),
    ("gamma", 30.0, 60.0),
];

/// Frequency span the power ratios are normalized against: the union of
/// the five bands. Ratios over the standard bands therefore sum to one.
const RATIO_SPAN: (f64, f64) = (1.0, 60.0);

/// Power-spectrum measure names, in output order within each band.
pub const PS_MEASURES: [&str; 15] = [
    "mean",
    "std",
    "peak_value",
    "peak_frequency",
    "power_ratio",
    "centroid",
    "kurtosis",
    "skewness",
    "first_moment",
    "second_moment",
    "shannon_entropy",
    "rms",
    "crest_factor",
    "flatness",
    "coefficient_of_variation",
];

/// Spectrogram measure names, in output order within each band.
pub const SG_MEASURES: [&str; 5] = [
    "shannon_entropy",
    "renyi_entropy",
    "centroid",
    "band_energy",
    "bandwidth",
];

/// Bispectrum feature names, in output order.
pub const BG_FEATURES: [&str; 5] = [
    "bg_mean_magnitude",
    "bg_entropy",
    "bg_quadratic_entropy",
    "bg_center_x",
    "bg_center_y",
];

/// Number of features every extraction produces.
pub const FEATURE_COUNT: usize = 105;

/// The 105 feature names in canonical column order.
pub fn feature_names() -> &'static [String] {
    static NAMES: OnceLock<Vec<String>> = OnceLock::new();
    NAMES.get_or_init(|| {
        let mut names = Vec::with_capacity(FEATURE_COUNT);
        for (band, _, _) in BAND_DEFS {
            for measure in PS_MEASURES {
                names.push(format!("ps_{band}_{measure}"));
            }
        }
        for (band, _, _) in BAND_DEFS {
            for measure in SG_MEASURES {
                names.push(format!("sg_{band}_{measure}"));
            }
        }
        for name in BG_FEATURES {
            names.push(name.to_string());
        }
        assert_eq!(names.len(), FEATURE_COUNT);
        names
    })
}

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error(transparent)]
    Taper(#[from] TaperError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("band {band} covers no spectrum bins")]
    EmptyBand { band: String },
    #[error("band {band} ends at {hi} Hz, beyond the Nyquist frequency {nyquist} Hz")]
    BandOutsideNyquist { band: String, hi: f64, nyquist: f64 },
    #[error("bispectrum region is empty")]
    EmptyRegion,
    #[error("segment of {len} samples is shorter than the {window}-sample spectrogram window")]
    SegmentTooShort { len: usize, window: usize },
    #[error("feature {name} is not finite")]
    NonFinite { name: String },
    #[error("invalid extraction config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed feature table: {0}")]
    Format(String),
}

/// Everything that parameterizes feature extraction. Recorded alongside any
/// persisted output so results stay reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractionConfig {
    /// Time-bandwidth product of the Slepian tapers.
    pub nw: f64,
    /// Number of tapers K.
    pub taper_count: usize,
    /// Spectrogram window length in samples.
    pub sg_window: usize,
    /// Spectrogram hop in samples.
    pub sg_hop: usize,
    /// Order of the Renyi entropy on spectrogram tiles.
    pub renyi_order: f64,
    /// Upper frequency of the bispectrum region, Hz.
    pub bispectrum_cap_hz: f64,
}

impl Default for ExtractionConfig {
    fn default() -> ExtractionConfig {
        ExtractionConfig {
            nw: 2.5,
            taper_count: 4,
            sg_window: 512,
            sg_hop: 128,
            renyi_order: 3.0,
            bispectrum_cap_hz: 60.0,
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<(), FeatureError> {
        if !(self.nw > 0.0) {
            return Err(FeatureError::InvalidConfig("nw must be positive".into()));
        }
        if self.taper_count == 0 {
            return Err(FeatureError::InvalidConfig(
                "taper_count must be at least 1".into(),
            ));
        }
        if self.sg_window < 2 {
            return Err(FeatureError::InvalidConfig(
                "sg_window must be at least 2 samples".into(),
            ));
        }
        if self.sg_hop == 0 {
            return Err(FeatureError::InvalidConfig("sg_hop must be at least 1".into()));
        }
        if !(self.renyi_order > 0.0) || self.renyi_order == 1.0 {
            return Err(FeatureError::InvalidConfig(
                "renyi_order must be positive and different from 1".into(),
            ));
        }
        if !(self.bispectrum_cap_hz > 0.0) {
            return Err(FeatureError::InvalidConfig(
                "bispectrum_cap_hz must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One segment's 105 feature values, aligned with [`feature_names`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn names() -> &'static [String] {
        feature_names()
    }

    /// Looks a value up by feature name.
    pub fn value(&self, name: &str) -> Option<f64> {
        feature_names()
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }
}

/// Bin indices of a band on a grid with the given resolution and bin count:
/// all k with lo <= k*resolution < hi.
fn band_bins(resolution: f64, bins: usize, lo: f64, hi: f64) -> std::ops::Range<usize> {
    let first = (lo / resolution).ceil() as usize;
    let mut last = (hi / resolution).ceil() as usize; // exclusive
    // Guard against k*resolution == hi sneaking in through the ceil.
    while last > first && (last - 1) as f64 * resolution >= hi {
        last -= 1;
    }
    first.min(bins)..last.min(bins)
}

/// The sub-spectrum of a band: parallel (frequencies, powers) vectors over
/// the bins whose center lies in [lo, hi).
pub fn band_slice(ps: &PowerSpectrum, band: &Band) -> Result<(Vec<f64>, Vec<f64>), FeatureError> {
    if band.hi > ps.nyquist {
        return Err(FeatureError::BandOutsideNyquist {
            band: band.name.clone(),
            hi: band.hi,
            nyquist: ps.nyquist,
        });
    }
    let range = band_bins(ps.freq_resolution, ps.bin_count(), band.lo, band.hi);
    if range.is_empty() {
        return Err(FeatureError::EmptyBand {
            band: band.name.clone(),
        });
    }
    let freqs = range.clone().map(|k| ps.frequency(k)).collect();
    let powers = range.map(|k| ps.powers[k]).collect();
    Ok((freqs, powers))
}

fn shannon_entropy(weights: &[f64], total: f64) -> f64 {
    let mut h = 0.0;
    for &w in weights {
        if w > 0.0 {
            let q = w / total;
            h -= q * q.ln();
        }
    }
    h
}

/// The fifteen power-spectrum measures of one band.
///
/// Statistics (std, skewness, kurtosis, entropy, ...) are taken over the
/// linear band powers; the power ratio is normalized by the total power over
/// the union of the five standard bands. All-zero bands follow the fixed
/// convention: ratio-style and spread-style measures are 0, the peak
/// frequency collapses to the band's lower edge, the centroid to its
/// midpoint.
pub fn ps_band_features(ps: &PowerSpectrum, band: &Band) -> Result<Vec<f64>, FeatureError> {
    let (freqs, powers) = band_slice(ps, band)?;
    let m = powers.len() as f64;
    let total: f64 = powers.iter().sum();

    if total == 0.0 {
        let mut out = vec![0.0; PS_MEASURES.len()];
        out[3] = band.lo; // peak frequency
        out[5] = band.midpoint(); // centroid
        return Ok(out);
    }

    let mean = total / m;
    let m2 = powers.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / m;
    let m3 = powers.iter().map(|p| (p - mean).powi(3)).sum::<f64>() / m;
    let m4 = powers.iter().map(|p| (p - mean).powi(4)).sum::<f64>() / m;
    let std = m2.sqrt();

    let (peak_idx, peak) = powers
        .iter()
        .enumerate()
        .fold((0usize, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        });
    let peak_freq = freqs[peak_idx];

    let span_range = band_bins(ps.freq_resolution, ps.bin_count(), RATIO_SPAN.0, RATIO_SPAN.1);
    let span_power: f64 = span_range.map(|k| ps.powers[k]).sum();
    let power_ratio = if span_power > 0.0 { total / span_power } else { 0.0 };

    let moment1: f64 = freqs.iter().zip(powers.iter()).map(|(f, p)| f * p).sum();
    let moment2: f64 = freqs.iter().zip(powers.iter()).map(|(f, p)| f * f * p).sum();
    let centroid = moment1 / total;

    let kurtosis = if m2 > 0.0 { m4 / (m2 * m2) } else { 0.0 };
    let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    let entropy = shannon_entropy(&powers, total);
    let rms = (powers.iter().map(|p| p * p).sum::<f64>() / m).sqrt();
    let crest = if rms > 0.0 { peak / rms } else { 0.0 };
    let flatness = if powers.iter().all(|&p| p > 0.0) {
        (powers.iter().map(|p| p.ln()).sum::<f64>() / m).exp() / mean
    } else {
        0.0
    };
    let cv = if mean > 0.0 { std / mean } else { 0.0 };

    Ok(vec![
        mean, std, peak, peak_freq, power_ratio, centroid, kurtosis, skewness, moment1, moment2,
        entropy, rms, crest, flatness, cv,
    ])
}

/// The five spectrogram measures of one band, over all time-frequency tiles
/// whose bin center lies in the band. Zero-energy bands use the same
/// convention as [`ps_band_features`]: entropies, energy and bandwidth are
/// 0 and the centroid sits at the band midpoint.
pub fn sg_band_features(
    sg: &Spectrogram,
    band: &Band,
    renyi_order: f64,
) -> Result<Vec<f64>, FeatureError> {
    let nyquist = sg.freq_resolution * sg.window_length as f64 / 2.0;
    if band.hi > nyquist {
        return Err(FeatureError::BandOutsideNyquist {
            band: band.name.clone(),
            hi: band.hi,
            nyquist,
        });
    }
    let range = band_bins(sg.freq_resolution, sg.bin_count(), band.lo, band.hi);
    if range.is_empty() {
        return Err(FeatureError::EmptyBand {
            band: band.name.clone(),
        });
    }

    let mut tiles = Vec::with_capacity(sg.frame_count() * range.len());
    let mut tile_freqs = Vec::with_capacity(tiles.capacity());
    for frame in &sg.frames {
        for k in range.clone() {
            tiles.push(frame[k]);
            tile_freqs.push(sg.frequency(k));
        }
    }
    let total: f64 = tiles.iter().sum();
    if total == 0.0 {
        return Ok(vec![0.0, 0.0, band.midpoint(), 0.0, 0.0]);
    }

    let shannon = shannon_entropy(&tiles, total);
    let q_pow_sum: f64 = tiles
        .iter()
        .filter(|&&e| e > 0.0)
        .map(|&e| (e / total).powf(renyi_order))
        .sum();
    let renyi = q_pow_sum.ln() / (1.0 - renyi_order);
    let centroid = tile_freqs
        .iter()
        .zip(tiles.iter())
        .map(|(f, e)| f * e)
        .sum::<f64>()
        / total;
    let bandwidth = (tile_freqs
        .iter()
        .zip(tiles.iter())
        .map(|(f, e)| (f - centroid).powi(2) * e)
        .sum::<f64>()
        / total)
        .sqrt();

    Ok(vec![shannon, renyi, centroid, total, bandwidth])
}

/// The five whole-region bispectrum measures. A zero-magnitude region keeps
/// entropies at 0 and puts the weighted centers on the unweighted centroid
/// of the region's bin indices.
pub fn bg_features(bg: &Bispectrum) -> Result<Vec<f64>, FeatureError> {
    if bg.is_empty() {
        return Err(FeatureError::EmptyRegion);
    }
    let l = bg.len() as f64;
    let total: f64 = bg.magnitudes.values().sum();
    let mean = total / l;

    if total == 0.0 {
        let cx = bg.magnitudes.keys().map(|&(k1, _)| k1 as f64).sum::<f64>() / l;
        let cy = bg.magnitudes.keys().map(|&(_, k2)| k2 as f64).sum::<f64>() / l;
        return Ok(vec![
            0.0,
            0.0,
            0.0,
            cx * bg.freq_resolution,
            cy * bg.freq_resolution,
        ]);
    }

    let values: Vec<f64> = bg.magnitudes.values().copied().collect();
    let entropy = shannon_entropy(&values, total);
    let total_sq: f64 = values.iter().map(|b| b * b).sum();
    let mut quad_entropy = 0.0;
    for &b in &values {
        if b > 0.0 {
            let r = b * b / total_sq;
            quad_entropy -= r * r.ln();
        }
    }
    let cx = bg
        .magnitudes
        .iter()
        .map(|(&(k1, _), &b)| k1 as f64 * b)
        .sum::<f64>()
        / total
        * bg.freq_resolution;
    let cy = bg
        .magnitudes
        .iter()
        .map(|(&(_, k2), &b)| k2 as f64 * b)
        .sum::<f64>()
        / total
        * bg.freq_resolution;

    Ok(vec![mean, entropy, quad_entropy, cx, cy])
}

/// Tapers needed for one segment length under a config: full-length for the
/// power spectrum and bispectrum, window-length for the spectrogram.
struct TaperPair {
    full: TaperSet,
    window: TaperSet,
}

fn taper_pair(segment_len: usize, cfg: &ExtractionConfig) -> Result<TaperPair, FeatureError> {
    Ok(TaperPair {
        full: dpss(segment_len, cfg.nw, cfg.taper_count)?,
        window: dpss(cfg.sg_window, cfg.nw, cfg.taper_count)?,
    })
}

fn extract_with_tapers(
    segment: &TimeSeriesSegment,
    cfg: &ExtractionConfig,
    tapers: &TaperPair,
) -> Result<FeatureVector, FeatureError> {
    let ps = multitaper_ps(segment, &tapers.full)?;
    let sg = multitaper_sg(segment, &tapers.window, cfg.sg_hop)?;
    let bg = bispectrum_capped(segment, &tapers.full, Some(cfg.bispectrum_cap_hz))?;

    let bands = Band::standard();
    let mut values = Vec::with_capacity(FEATURE_COUNT);
    for band in &bands {
        values.extend(ps_band_features(&ps, band)?);
    }
    for band in &bands {
        values.extend(sg_band_features(&sg, band, cfg.renyi_order)?);
    }
    values.extend(bg_features(&bg)?);
    debug_assert_eq!(values.len(), FEATURE_COUNT);

    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(FeatureError::NonFinite {
                name: feature_names()[i].clone(),
            });
        }
    }
    Ok(FeatureVector { values })
}

/// Runs the full transform-and-measure pipeline on one segment.
pub fn extract_all(
    segment: &TimeSeriesSegment,
    cfg: &ExtractionConfig,
) -> Result<FeatureVector, FeatureError> {
    cfg.validate()?;
    if segment.len() < cfg.sg_window {
        return Err(FeatureError::SegmentTooShort {
            len: segment.len(),
            window: cfg.sg_window,
        });
    }
    let tapers = taper_pair(segment.len(), cfg)?;
    extract_with_tapers(segment, cfg, &tapers)
}

/// Feature vectors for a whole dataset, rows aligned with segment order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub column_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<ClassLabel>,
    pub source_ids: Vec<String>,
}

impl FeatureMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.column_names.len()
    }

    /// Writes the `source_id,label,<features>` CSV schema with full-precision
    /// decimals (shortest round-trip form).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), FeatureError> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = Vec::with_capacity(2 + self.column_names.len());
        header.push("source_id".to_string());
        header.push("label".to_string());
        header.extend(self.column_names.iter().cloned());
        wtr.write_record(&header)?;
        for i in 0..self.rows.len() {
            let mut record = Vec::with_capacity(header.len());
            record.push(self.source_ids[i].clone());
            record.push(self.labels[i].name().to_string());
            record.extend(self.rows[i].iter().map(|v| v.to_string()));
            wtr.write_record(&record)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<(), FeatureError> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn read_csv<R: Read>(r: R) -> Result<FeatureMatrix, FeatureError> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers()?.clone();
        if headers.len() < 3 || &headers[0] != "source_id" || &headers[1] != "label" {
            return Err(FeatureError::Format(
                "header must start with source_id,label".into(),
            ));
        }
        let column_names: Vec<String> = headers.iter().skip(2).map(str::to_string).collect();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut source_ids = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != headers.len() {
                return Err(FeatureError::Format(format!(
                    "row {}: expected {} fields, found {}",
                    line + 2,
                    headers.len(),
                    record.len()
                )));
            }
            source_ids.push(record[0].to_string());
            labels.push(ClassLabel::parse(&record[1]).ok_or_else(|| {
                FeatureError::Format(format!("row {}: unknown label {:?}", line + 2, &record[1]))
            })?);
            let mut row = Vec::with_capacity(column_names.len());
            for field in record.iter().skip(2) {
                row.push(field.parse::<f64>().map_err(|_| {
                    FeatureError::Format(format!("row {}: bad number {field:?}", line + 2))
                })?);
            }
            rows.push(row);
        }
        Ok(FeatureMatrix {
            column_names,
            rows,
            labels,
            source_ids,
        })
    }

    pub fn load_csv(path: &Path) -> Result<FeatureMatrix, FeatureError> {
        let file = std::fs::File::open(path)?;
        FeatureMatrix::read_csv(std::io::BufReader::new(file))
    }

    /// JSON variant of the same schema.
    pub fn write_json<W: Write>(&self, w: W) -> Result<(), FeatureError> {
        let doc = MatrixJson {
            columns: self.column_names.clone(),
            rows: (0..self.len())
                .map(|i| RowJson {
                    source_id: self.source_ids[i].clone(),
                    label: self.labels[i],
                    values: self.rows[i].clone(),
                })
                .collect(),
        };
        serde_json::to_writer_pretty(w, &doc)
            .map_err(|e| FeatureError::Format(e.to_string()))?;
        Ok(())
    }

    pub fn read_json<R: Read>(r: R) -> Result<FeatureMatrix, FeatureError> {
        let doc: MatrixJson =
            serde_json::from_reader(r).map_err(|e| FeatureError::Format(e.to_string()))?;
        let mut rows = Vec::with_capacity(doc.rows.len());
        let mut labels = Vec::with_capacity(doc.rows.len());
        let mut source_ids = Vec::with_capacity(doc.rows.len());
        for row in doc.rows {
            if row.values.len() != doc.columns.len() {
                return Err(FeatureError::Format(format!(
                    "row {}: expected {} values, found {}",
                    row.source_id,
                    doc.columns.len(),
                    row.values.len()
                )));
            }
            rows.push(row.values);
            labels.push(row.label);
            source_ids.push(row.source_id);
        }
        Ok(FeatureMatrix {
            column_names: doc.columns,
            rows,
            labels,
            source_ids,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    columns: Vec<String>,
    rows: Vec<RowJson>,
}

#[derive(Serialize, Deserialize)]
struct RowJson {
    source_id: String,
    label: ClassLabel,
    values: Vec<f64>,
}

/// Extracts features for every segment, in dataset order. Segments fan out
/// across threads; taper sets are built once per distinct segment length.
pub fn build_matrix(
    dataset: &LabeledDataset,
    cfg: &ExtractionConfig,
) -> Result<FeatureMatrix, FeatureError> {
    use rayon::prelude::*;

    cfg.validate()?;
    let mut taper_cache: BTreeMap<usize, TaperPair> = BTreeMap::new();
    for seg in dataset.segments() {
        if seg.len() < cfg.sg_window {
            return Err(FeatureError::SegmentTooShort {
                len: seg.len(),
                window: cfg.sg_window,
            });
        }
        if !taper_cache.contains_key(&seg.len()) {
            taper_cache.insert(seg.len(), taper_pair(seg.len(), cfg)?);
        }
    }

    let extracted: Vec<Result<FeatureVector, FeatureError>> = dataset
        .segments()
        .par_iter()
        .map(|seg| extract_with_tapers(seg, cfg, &taper_cache[&seg.len()]))
        .collect();

    let mut rows = Vec::with_capacity(extracted.len());
    for vector in extracted {
        rows.push(vector?.values);
    }
    Ok(FeatureMatrix {
        column_names: feature_names().to_vec(),
        rows,
        labels: dataset.segments().iter().map(|s| s.label).collect(),
        source_ids: dataset.segments().iter().map(|s| s.source_id.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::ClassLabel;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn names_are_105_unique_and_ordered() {
        let names = feature_names();
        assert_eq!(names.len(), 105);
        let unique: std::collections::BTreeSet<&String> = names.iter().collect();
        assert_eq!(unique.len(), 105);
        assert_eq!(names.iter().filter(|n| n.starts_with("ps_")).count(), 75);
        assert_eq!(names.iter().filter(|n| n.starts_with("sg_")).count(), 25);
        assert_eq!(names.iter().filter(|n| n.starts_with("bg_")).count(), 5);
        assert_eq!(names[0], "ps_delta_mean");
        assert_eq!(names[75], "sg_delta_shannon_entropy");
        assert_eq!(names[100], "bg_mean_magnitude");
        assert!(names.contains(&"ps_alpha_centroid".to_string()));
        assert!(names.contains(&"sg_delta_band_energy".to_string()));
    }

    fn flat_ps(powers: Vec<f64>, freq_resolution: f64, nyquist: f64) -> PowerSpectrum {
        PowerSpectrum {
            powers,
            freq_resolution,
            nyquist,
        }
    }

    #[test]
    fn delta_band_covers_71_bins_on_bonn_grid() {
        let n = 4096;
        let fs = 173.61;
        let ps = flat_ps(vec![1.0; n / 2 + 1], fs / n as f64, fs / 2.0);
        let (freqs, powers) = band_slice(&ps, &Band::new("delta", 1.0, 4.0)).unwrap();
        assert_eq!(powers.len(), 71);
        assert!(freqs.iter().all(|&f| (1.0..4.0).contains(&f)));
    }

    #[test]
    fn band_edges_are_half_open() {
        // Resolution 1 Hz: theta [4,8) must own bin 4 and exclude bin 8.
        let ps = flat_ps(vec![1.0; 61], 1.0, 60.0);
        let (freqs, _) = band_slice(&ps, &Band::new("theta", 4.0, 8.0)).unwrap();
        assert_eq!(freqs, vec![4.0, 5.0, 6.0, 7.0]);
    }

    #[test]
    fn empty_band_is_detected() {
        let ps = flat_ps(vec![1.0; 11], 10.0, 50.0);
        assert!(matches!(
            band_slice(&ps, &Band::new("sliver", 1.0, 4.0)),
            Err(FeatureError::EmptyBand { .. })
        ));
    }

    #[test]
    fn band_beyond_nyquist_is_rejected() {
        let ps = flat_ps(vec![1.0; 33], 1.0, 32.0);
        assert!(matches!(
            band_slice(&ps, &Band::new("gamma", 30.0, 60.0)),
            Err(FeatureError::BandOutsideNyquist { .. })
        ));
    }

    #[test]
    fn constant_spectrum_identities() {
        // 1 Hz resolution, constant power c over every bin; delta = bins 1..3.
        let c = 2.5;
        let ps = flat_ps(vec![c; 61], 1.0, 60.5);
        let f = ps_band_features(&ps, &Band::new("delta", 1.0, 4.0)).unwrap();
        approx(f[0], c, 1e-12); // mean
        approx(f[1], 0.0, 1e-12); // std
        approx(f[2], c, 1e-12); // peak
        approx(f[3], 1.0, 1e-12); // peak frequency: lowest tie index
        approx(f[4], 3.0 / 59.0, 1e-12); // ratio against bins 1..=59
        approx(f[5], 2.0, 1e-12); // centroid of 1,2,3
        approx(f[6], 0.0, 1e-12); // kurtosis convention at zero variance
        approx(f[7], 0.0, 1e-12); // skewness
        approx(f[8], 6.0 * c, 1e-12); // first moment
        approx(f[9], 14.0 * c, 1e-12); // second moment
        approx(f[10], 3.0f64.ln(), 1e-12); // entropy of uniform 3
        approx(f[11], c, 1e-12); // rms
        approx(f[12], 1.0, 1e-12); // crest
        approx(f[13], 1.0, 1e-12); // flatness
        approx(f[14], 0.0, 1e-12); // cv
    }

    #[test]
    fn zero_band_convention() {
        let mut powers = vec![1.0; 61];
        for k in 1..4 {
            powers[k] = 0.0;
        }
        let ps = flat_ps(powers, 1.0, 60.5);
        let band = Band::new("delta", 1.0, 4.0);
        let f = ps_band_features(&ps, &band).unwrap();
        let expected = {
            let mut e = vec![0.0; 15];
            e[3] = band.lo;
            e[5] = band.midpoint();
            e
        };
        assert_eq!(f, expected);
    }

    #[test]
    fn peak_frequency_takes_lowest_tie() {
        let mut powers = vec![0.0; 61];
        powers[2] = 7.0;
        powers[3] = 7.0;
        let ps = flat_ps(powers, 1.0, 60.5);
        let f = ps_band_features(&ps, &Band::new("delta", 1.0, 4.0)).unwrap();
        approx(f[3], 2.0, 1e-12);
    }

    fn manual_sg(frames: Vec<Vec<f64>>, freq_resolution: f64, window: usize) -> Spectrogram {
        let times = (0..frames.len()).map(|t| t as f64).collect();
        Spectrogram {
            frames,
            frame_times: times,
            freq_resolution,
            window_length: window,
            hop: 1,
        }
    }

    #[test]
    fn sg_point_mass_identities() {
        // 1 Hz grid over a 32-bin window; single nonzero tile at 5 Hz.
        let mut frames = vec![vec![0.0; 17]; 3];
        frames[1][5] = 4.2;
        let sg = manual_sg(frames, 1.0, 32);
        let f = sg_band_features(&sg, &Band::new("theta", 4.0, 8.0), 3.0).unwrap();
        approx(f[0], 0.0, 1e-12); // shannon
        approx(f[1], 0.0, 1e-12); // renyi
        approx(f[2], 5.0, 1e-12); // centroid
        approx(f[3], 4.2, 1e-12); // energy
        approx(f[4], 0.0, 1e-12); // bandwidth
    }

    #[test]
    fn sg_uniform_tiles_entropy_is_log_count() {
        let frames = vec![vec![3.0; 17]; 4];
        let sg = manual_sg(frames, 1.0, 32);
        let f = sg_band_features(&sg, &Band::new("theta", 4.0, 8.0), 3.0).unwrap();
        let m = (4 * 4) as f64; // 4 frames x 4 bins
        approx(f[0], m.ln(), 1e-12);
        approx(f[1], m.ln(), 1e-12);
    }

    #[test]
    fn sg_zero_energy_convention() {
        let sg = manual_sg(vec![vec![0.0; 17]; 2], 1.0, 32);
        let band = Band::new("alpha", 8.0, 12.0);
        let f = sg_band_features(&sg, &band, 3.0).unwrap();
        assert_eq!(f, vec![0.0, 0.0, band.midpoint(), 0.0, 0.0]);
    }

    fn manual_bg(entries: &[((usize, usize), f64)], freq_resolution: f64) -> Bispectrum {
        Bispectrum {
            magnitudes: entries.iter().copied().collect(),
            region_bound: 64,
            freq_resolution,
        }
    }

    #[test]
    fn bg_point_mass_identities() {
        // Resolution 2 Hz; single mass at bins (10,5) = (20 Hz, 10 Hz).
        let bg = manual_bg(&[((10, 5), 3.0), ((4, 1), 0.0), ((7, 2), 0.0)], 2.0);
        let f = bg_features(&bg).unwrap();
        approx(f[0], 1.0, 1e-12); // mean over 3 points
        approx(f[1], 0.0, 1e-12);
        approx(f[2], 0.0, 1e-12);
        approx(f[3], 20.0, 1e-12);
        approx(f[4], 10.0, 1e-12);
    }

    #[test]
    fn bg_uniform_region_entropies_are_log_count() {
        let entries: Vec<((usize, usize), f64)> =
            (0..6).map(|k1| ((k1 + 1, 1), 2.0)).collect();
        let bg = manual_bg(&entries, 1.0);
        let f = bg_features(&bg).unwrap();
        approx(f[1], 6.0f64.ln(), 1e-12);
        approx(f[2], 6.0f64.ln(), 1e-12);
    }

    #[test]
    fn bg_zero_region_convention() {
        let bg = manual_bg(&[((2, 1), 0.0), ((4, 3), 0.0)], 2.0);
        let f = bg_features(&bg).unwrap();
        assert_eq!(f[0], 0.0);
        assert_eq!(f[1], 0.0);
        assert_eq!(f[2], 0.0);
        approx(f[3], 3.0 * 2.0, 1e-12); // mean index (2+4)/2 in Hz
        approx(f[4], 2.0 * 2.0, 1e-12);
    }

    #[test]
    fn bg_features_match_direct_recomputation() {
        let entries: Vec<((usize, usize), f64)> = (0..20)
            .map(|i| {
                let k1 = i % 7 + i; // distinct pairs
                ((k1, i % (k1.max(1))), (i as f64 * 0.37).sin().abs() + 0.01)
            })
            .collect();
        let bg = manual_bg(&entries, 0.5);
        let f = bg_features(&bg).unwrap();
        let total: f64 = bg.magnitudes.values().sum();
        let mean = total / bg.len() as f64;
        let mut entropy = 0.0;
        let mut quad = 0.0;
        let total_sq: f64 = bg.magnitudes.values().map(|b| b * b).sum();
        let mut cx = 0.0;
        let mut cy = 0.0;
        for (&(k1, k2), &b) in &bg.magnitudes {
            let q = b / total;
            entropy -= q * q.ln();
            let r = b * b / total_sq;
            quad -= r * r.ln();
            cx += k1 as f64 * b;
            cy += k2 as f64 * b;
        }
        approx(f[0], mean, 1e-12);
        approx(f[1], entropy, 1e-12);
        approx(f[2], quad, 1e-12);
        approx(f[3], cx / total * 0.5, 1e-12);
        approx(f[4], cy / total * 0.5, 1e-12);
    }

    fn test_cfg() -> ExtractionConfig {
        ExtractionConfig {
            sg_window: 64,
            sg_hop: 32,
            ..ExtractionConfig::default()
        }
    }

    fn sine_segment(freq: f64, fs: f64, n: usize) -> TimeSeriesSegment {
        let samples = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * freq * i as f64 / fs).sin())
            .collect();
        TimeSeriesSegment::new(samples, fs, "sine", ClassLabel::Normal1)
    }

    #[test]
    fn sine_concentrates_in_alpha() {
        let seg = sine_segment(10.0, 173.61, 2048);
        let cfg = test_cfg();
        let fv = extract_all(&seg, &cfg).unwrap();
        assert_eq!(fv.values.len(), 105);
        assert!(fv.values.iter().all(|v| v.is_finite()));
        let ratio = fv.value("ps_alpha_power_ratio").unwrap();
        assert!(ratio > 0.99, "alpha ratio {ratio}");
        let centroid = fv.value("ps_alpha_centroid").unwrap();
        assert!((centroid - 10.0).abs() < 0.5, "alpha centroid {centroid}");
        for band in ["delta", "theta", "beta", "gamma"] {
            let other = fv.value(&format!("ps_{band}_power_ratio")).unwrap();
            assert!(other < ratio);
        }
    }

    #[test]
    fn extraction_is_deterministic() {
        let seg = sine_segment(7.3, 173.61, 512);
        let cfg = test_cfg();
        let a = extract_all(&seg, &cfg).unwrap();
        let b = extract_all(&seg, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn short_segment_is_rejected() {
        let seg = sine_segment(5.0, 173.61, 32);
        assert!(matches!(
            extract_all(&seg, &test_cfg()),
            Err(FeatureError::SegmentTooShort { .. })
        ));
    }

    #[test]
    fn config_validation_rejects_nonsense() {
        let mut cfg = test_cfg();
        cfg.renyi_order = 1.0;
        assert!(matches!(
            cfg.validate(),
            Err(FeatureError::InvalidConfig(_))
        ));
        cfg = test_cfg();
        cfg.sg_hop = 0;
        assert!(cfg.validate().is_err());
        cfg = test_cfg();
        cfg.taper_count = 0;
        assert!(cfg.validate().is_err());
    }

    fn tiny_dataset() -> LabeledDataset {
        let mut segments = Vec::new();
        for (i, label) in ClassLabel::ALL.iter().enumerate() {
            let freq = 4.0 + 3.0 * i as f64;
            let samples: Vec<f64> = (0..256)
                .map(|t| (2.0 * std::f64::consts::PI * freq * t as f64 / 173.61).sin() * 50.0)
                .collect();
            segments.push(TimeSeriesSegment::new(
                samples,
                173.61,
                format!("seg{i}"),
                *label,
            ));
        }
        LabeledDataset::from_segments(segments).unwrap()
    }

    #[test]
    fn matrix_rows_align_with_dataset() {
        let ds = tiny_dataset();
        let matrix = build_matrix(&ds, &test_cfg()).unwrap();
        assert_eq!(matrix.len(), 4);
        assert_eq!(matrix.width(), 105);
        assert_eq!(matrix.labels, ClassLabel::ALL.to_vec());
        assert_eq!(matrix.source_ids, vec!["seg0", "seg1", "seg2", "seg3"]);
        for (i, seg) in ds.segments().iter().enumerate() {
            let direct = extract_all(seg, &test_cfg()).unwrap();
            assert_eq!(matrix.rows[i], direct.values);
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let matrix = build_matrix(&tiny_dataset(), &test_cfg()).unwrap();
        let mut buf = Vec::new();
        matrix.write_csv(&mut buf).unwrap();
        let loaded = FeatureMatrix::read_csv(buf.as_slice()).unwrap();
        assert_eq!(matrix, loaded);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let matrix = build_matrix(&tiny_dataset(), &test_cfg()).unwrap();
        let mut buf = Vec::new();
        matrix.write_json(&mut buf).unwrap();
        let loaded = FeatureMatrix::read_json(buf.as_slice()).unwrap();
        assert_eq!(matrix, loaded);
    }

    #[test]
    fn empty_dataset_yields_header_only_matrix() {
        let ds = LabeledDataset::from_segments(vec![]).unwrap();
        let matrix = build_matrix(&ds, &test_cfg()).unwrap();
        assert!(matrix.is_empty());
        assert_eq!(matrix.width(), 105);
        let mut buf = Vec::new();
        matrix.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("source_id,label,ps_delta_mean,"));
    }

    #[test]
    fn scaling_leaves_shape_features_alone() {
        let seg = sine_segment(9.0, 173.61, 512);
        let scaled = TimeSeriesSegment::new(
            seg.samples.iter().map(|s| s * 4.0).collect(),
            seg.sampling_rate,
            "scaled",
            seg.label,
        );
        let cfg = test_cfg();
        let a = extract_all(&seg, &cfg).unwrap();
        let b = extract_all(&scaled, &cfg).unwrap();
        for name in [
            "ps_alpha_peak_frequency",
            "ps_alpha_power_ratio",
            "ps_alpha_centroid",
            "ps_alpha_flatness",
            "ps_alpha_coefficient_of_variation",
            "sg_alpha_shannon_entropy",
            "bg_center_x",
        ] {
            let x = a.value(name).unwrap();
            let y = b.value(name).unwrap();
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{name}: {x} vs {y}");
        }
        let c2 = 16.0;
        for name in ["ps_alpha_mean", "ps_alpha_rms", "sg_alpha_band_energy"] {
            let x = a.value(name).unwrap();
            let y = b.value(name).unwrap();
            assert!(
                (y - c2 * x).abs() <= 1e-9 * (c2 * x).abs().max(1.0),
                "{name}: {y} vs {}",
                c2 * x
            );
        }
        let c6 = 4.0f64.powi(6);
        let x = a.value("bg_mean_magnitude").unwrap();
        let y = b.value("bg_mean_magnitude").unwrap();
        assert!((y - c6 * x).abs() <= 1e-9 * (c6 * x).abs().max(1.0));
    }
}
