//! The three multitaper spectral representations of a segment: power
//! spectrum, spectrogram, and bispectrum.
//!
//! All three start from tapered discrete Fourier transforms. The power
//! spectrum and spectrogram average the K eigenspectra in power; the
//! bispectrum averages the K tapered transforms in complex amplitude first
//! and forms the triple product on the result. Outputs are one-sided,
//! linear-scale, and deterministic.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::ingest::TimeSeriesSegment;
use crate::tapers::TaperSet;

/// Highest frequency, in Hz, kept in a bispectrum region by default. Matches
/// the upper edge of the highest analysis band; anything above carries no
/// feature information and only costs memory.
pub const DEFAULT_BISPECTRUM_CAP_HZ: f64 = 60.0;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("taper length {taper_len} does not fit segment length {segment_len}")]
    LengthMismatch { taper_len: usize, segment_len: usize },
    #[error("hop must be at least 1 sample")]
    InvalidHop,
}

/// One-sided multitaper power spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    /// P_k per bin, amplitude squared, linear scale.
    pub powers: Vec<f64>,
    /// Hz per bin.
    pub freq_resolution: f64,
    /// Half the sampling rate, in Hz.
    pub nyquist: f64,
}

impl PowerSpectrum {
    pub fn bin_count(&self) -> usize {
        self.powers.len()
    }

    /// Center frequency of bin k in Hz.
    pub fn frequency(&self, k: usize) -> f64 {
        k as f64 * self.freq_resolution
    }

    /// Total power with the mirrored negative-frequency bins restored,
    /// so that for a rectangular taper it equals the signal energy.
    pub fn total_power_two_sided(&self) -> f64 {
        let n = (2.0 * self.nyquist / self.freq_resolution).round() as usize;
        let nb = self.powers.len();
        let mut total: f64 = self.powers.iter().sum();
        // Bins 1..=n-nb appear twice in the two-sided spectrum.
        total += self.powers[1..=n - nb].iter().sum::<f64>();
        total
    }

    /// Writes `bin,frequency_hz,power` rows for external plotting.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "bin,frequency_hz,power")?;
        for (k, p) in self.powers.iter().enumerate() {
            writeln!(w, "{},{},{}", k, self.frequency(k), p)?;
        }
        Ok(())
    }
}

/// Time-frequency power map from sliding tapered windows.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    /// frames[t][k]: power in frame t, frequency bin k.
    pub frames: Vec<Vec<f64>>,
    /// Start time of each frame in seconds.
    pub frame_times: Vec<f64>,
    /// Hz per bin (sampling rate over window length).
    pub freq_resolution: f64,
    /// Window length l in samples.
    pub window_length: usize,
    /// Frame advance in samples.
    pub hop: usize,
}

impl Spectrogram {
    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn bin_count(&self) -> usize {
        self.frames.first().map_or(0, Vec::len)
    }

    pub fn frequency(&self, k: usize) -> f64 {
        k as f64 * self.freq_resolution
    }

    /// Writes `frame,time_s,bin,frequency_hz,power` rows.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "frame,time_s,bin,frequency_hz,power")?;
        for (t, frame) in self.frames.iter().enumerate() {
            for (k, p) in frame.iter().enumerate() {
                writeln!(w, "{},{},{},{},{}", t, self.frame_times[t], k, self.frequency(k), p)?;
            }
        }
        Ok(())
    }
}

/// Bispectrum magnitudes over the non-redundant region 0 <= k2 <= k1,
/// k1 + k2 < region_bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Bispectrum {
    /// (k1, k2) bin pair to squared triple-product magnitude.
    pub magnitudes: BTreeMap<(usize, usize), f64>,
    /// Exclusive bound on k1 + k2 (and on each index).
    pub region_bound: usize,
    /// Hz per bin of the underlying spectrum.
    pub freq_resolution: f64,
}

impl Bispectrum {
    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn frequency(&self, k: usize) -> f64 {
        k as f64 * self.freq_resolution
    }

    /// Region point with the largest magnitude; earliest pair on ties.
    pub fn peak(&self) -> Option<((usize, usize), f64)> {
        let mut best: Option<((usize, usize), f64)> = None;
        for (&pair, &value) in &self.magnitudes {
            match best {
                Some((_, b)) if value <= b => {}
                _ => best = Some((pair, value)),
            }
        }
        best
    }

    /// Writes `k1,k2,f1_hz,f2_hz,magnitude` rows.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "k1,k2,f1_hz,f2_hz,magnitude")?;
        for (&(k1, k2), &value) in &self.magnitudes {
            writeln!(
                w,
                "{},{},{},{},{}",
                k1,
                k2,
                self.frequency(k1),
                self.frequency(k2),
                value
            )?;
        }
        Ok(())
    }
}

/// Forward DFT of the signal multiplied elementwise by a taper.
fn tapered_transform(
    samples: &[f64],
    taper: &[f64],
    planner: &mut FftPlanner<f64>,
) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = samples
        .iter()
        .zip(taper.iter())
        .map(|(&s, &m)| Complex::new(s * m, 0.0))
        .collect();
    let fft = planner.plan_fft_forward(buf.len());
    fft.process(&mut buf);
    buf
}

fn one_sided_bins(n: usize) -> usize {
    n / 2 + 1
}

/// Multitaper power spectrum: the K tapered eigenspectra averaged in power,
/// one-sided.
pub fn multitaper_ps(
    segment: &TimeSeriesSegment,
    tapers: &TaperSet,
) -> Result<PowerSpectrum, SpectralError> {
    let n = segment.samples.len();
    if tapers.len() != n {
        return Err(SpectralError::LengthMismatch {
            taper_len: tapers.len(),
            segment_len: n,
        });
    }
    let nb = one_sided_bins(n);
    let mut planner = FftPlanner::new();
    let mut powers = vec![0.0f64; nb];
    for taper in tapers.tapers() {
        let spectrum = tapered_transform(&segment.samples, taper, &mut planner);
        for k in 0..nb {
            powers[k] += spectrum[k].norm_sqr();
        }
    }
    let k_inv = 1.0 / tapers.count() as f64;
    for p in powers.iter_mut() {
        *p *= k_inv;
    }
    Ok(PowerSpectrum {
        powers,
        freq_resolution: segment.sampling_rate / n as f64,
        nyquist: segment.sampling_rate / 2.0,
    })
}

/// Maps a power spectrum to decibels (10 log10 P) for display. Zero power
/// maps to the -300 dB floor, and nothing is reported below it.
pub fn to_decibels(ps: &PowerSpectrum) -> PowerSpectrum {
    const FLOOR_DB: f64 = -300.0;
    let powers = ps
        .powers
        .iter()
        .map(|&p| if p > 0.0 { (10.0 * p.log10()).max(FLOOR_DB) } else { FLOOR_DB })
        .collect();
    PowerSpectrum {
        powers,
        freq_resolution: ps.freq_resolution,
        nyquist: ps.nyquist,
    }
}

/// Multitaper spectrogram: the tapers slide over the signal as windows,
/// each frame is the power-averaged l-point eigenspectrum of its slice.
/// Trailing samples that do not fill a window are dropped.
pub fn multitaper_sg(
    segment: &TimeSeriesSegment,
    tapers: &TaperSet,
    hop: usize,
) -> Result<Spectrogram, SpectralError> {
    let n = segment.samples.len();
    let l = tapers.len();
    if l > n {
        return Err(SpectralError::LengthMismatch {
            taper_len: l,
            segment_len: n,
        });
    }
    if hop == 0 {
        return Err(SpectralError::InvalidHop);
    }
    let frame_count = (n - l) / hop + 1;
    let nb = one_sided_bins(l);
    let k_inv = 1.0 / tapers.count() as f64;
    let mut planner = FftPlanner::new();
    let mut frames = Vec::with_capacity(frame_count);
    let mut frame_times = Vec::with_capacity(frame_count);
    for t in 0..frame_count {
        let start = t * hop;
        let slice = &segment.samples[start..start + l];
        let mut frame = vec![0.0f64; nb];
        for taper in tapers.tapers() {
            let spectrum = tapered_transform(slice, taper, &mut planner);
            for k in 0..nb {
                frame[k] += spectrum[k].norm_sqr();
            }
        }
        for p in frame.iter_mut() {
            *p *= k_inv;
        }
        frames.push(frame);
        frame_times.push(start as f64 / segment.sampling_rate);
    }
    Ok(Spectrogram {
        frames,
        frame_times,
        freq_resolution: segment.sampling_rate / l as f64,
        window_length: l,
        hop,
    })
}

/// Bispectrum over the non-redundant region, with the region capped at
/// [`DEFAULT_BISPECTRUM_CAP_HZ`].
pub fn bispectrum(
    segment: &TimeSeriesSegment,
    tapers: &TaperSet,
) -> Result<Bispectrum, SpectralError> {
    bispectrum_capped(segment, tapers, Some(DEFAULT_BISPECTRUM_CAP_HZ))
}

/// Bispectrum with an explicit frequency cap (None keeps every one-sided
/// bin). X is the complex average of the K tapered transforms;
/// BG(k1,k2) = |X_k1 X_k2 conj(X_{k1+k2})|^2.
pub fn bispectrum_capped(
    segment: &TimeSeriesSegment,
    tapers: &TaperSet,
    cap_hz: Option<f64>,
) -> Result<Bispectrum, SpectralError> {
    let n = segment.samples.len();
    if tapers.len() != n {
        return Err(SpectralError::LengthMismatch {
            taper_len: tapers.len(),
            segment_len: n,
        });
    }
    let nb = one_sided_bins(n);
    let freq_resolution = segment.sampling_rate / n as f64;
    let region_bound = match cap_hz {
        Some(cap) => nb.min((cap / freq_resolution).floor() as usize + 1),
        None => nb,
    };
    let mut planner = FftPlanner::new();
    let mut averaged = vec![Complex::new(0.0, 0.0); nb];
    for taper in tapers.tapers() {
        let spectrum = tapered_transform(&segment.samples, taper, &mut planner);
        for k in 0..nb {
            averaged[k] += spectrum[k];
        }
    }
    let k_inv = 1.0 / tapers.count() as f64;
    for x in averaged.iter_mut() {
        *x *= k_inv;
    }
    let mut magnitudes = BTreeMap::new();
    for k1 in 0..region_bound {
        for k2 in 0..=k1 {
            if k1 + k2 >= region_bound {
                break;
            }
            let triple = averaged[k1] * averaged[k2] * averaged[k1 + k2].conj();
            magnitudes.insert((k1, k2), triple.norm_sqr());
        }
    }
    Ok(Bispectrum {
        magnitudes,
        region_bound,
        freq_resolution,
    })
}
