//! Shared helpers for the integration tests: an independent O(n^2) DFT
//! oracle, signal generators, and synthetic Bonn-format datasets on disk.

#![allow(dead_code)]

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

/// Direct-sum DFT, X_k = sum_t x_t exp(-2 pi i k t / n), as (re, im) pairs.
/// Deliberately naive so it shares nothing with the library's FFT path.
pub fn naive_dft(x: &[f64]) -> Vec<(f64, f64)> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let mut re = 0.0;
            let mut im = 0.0;
            for (t, &xt) in x.iter().enumerate() {
                let angle = -TAU * k as f64 * t as f64 / n as f64;
                let (s, c) = angle.sin_cos();
                re += xt * c;
                im += xt * s;
            }
            (re, im)
        })
        .collect()
}

/// One-sided periodogram |X_k|^2 / n over bins 0..=n/2, the rectangular
/// taper convention of the library's power spectrum.
pub fn periodogram(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    naive_dft(x)
        .into_iter()
        .take(n / 2 + 1)
        .map(|(re, im)| (re * re + im * im) / n as f64)
        .collect()
}

pub fn sine(n: usize, fs: f64, freq: f64, amplitude: f64, phase: f64) -> Vec<f64> {
    (0..n)
        .map(|t| amplitude * (TAU * freq * t as f64 / fs + phase).sin())
        .collect()
}

/// Linear chirp sweeping f0 to f1 over the whole signal; the instantaneous
/// frequency at sample t is f0 + (f1 - f0) * t / n.
pub fn chirp(n: usize, fs: f64, f0: f64, f1: f64) -> Vec<f64> {
    let duration = n as f64 / fs;
    (0..n)
        .map(|t| {
            let time = t as f64 / fs;
            let phase = TAU * (f0 * time + (f1 - f0) * time * time / (2.0 * duration));
            phase.sin()
        })
        .collect()
}

/// Writes one Bonn-format segment file: integer samples, one per line.
pub fn write_segment_file(path: &Path, samples: &[f64]) {
    let mut text = String::with_capacity(samples.len() * 6);
    for s in samples {
        text.push_str(&format!("{}\n", s.round() as i64));
    }
    fs::write(path, text).unwrap();
}

/// Lays out a synthetic dataset under `root`: one directory of six segment
/// files per (class name, base frequency, amplitude) triple, plus a
/// manifest.toml pointing at them. Returns the manifest path.
pub fn synthetic_dataset(root: &Path, classes: &[(&str, f64, f64)]) -> PathBuf {
    let fs_hz = 173.61;
    let mut manifest = String::from("sampling_rate = 173.61\n\n[classes]\n");
    for (name, freq, amplitude) in classes {
        let dir = root.join(name);
        fs::create_dir_all(&dir).unwrap();
        for i in 0..6 {
            let tone = sine(256, fs_hz, freq + 0.3 * i as f64, *amplitude, 0.7 * i as f64);
            let buzz = sine(256, fs_hz, 47.0, 40.0, 1.4 * i as f64);
            let samples: Vec<f64> = tone.iter().zip(&buzz).map(|(a, b)| a + b).collect();
            write_segment_file(&dir.join(format!("{name}{i:03}.txt")), &samples);
        }
        manifest.push_str(&format!("{name} = \"{name}\"\n"));
    }
    let path = root.join("manifest.toml");
    fs::write(&path, manifest).unwrap();
    path
}

/// The four-class flavor used by multiclass runs: two alpha-band "healthy"
/// classes and two slower, larger "epileptic" ones.
pub fn four_class_dataset(root: &Path) -> PathBuf {
    synthetic_dataset(
        root,
        &[
            ("normal1", 10.0, 700.0),
            ("normal2", 11.5, 500.0),
            ("interictal", 6.0, 1200.0),
            ("ictal", 3.0, 1900.0),
        ],
    )
}
