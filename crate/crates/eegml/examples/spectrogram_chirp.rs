//! Tracks a frequency sweep through the multitaper spectrogram: the
//! per-frame peak follows the chirp from 5 Hz up to 40 Hz.

use eegml::ingest::{ClassLabel, TimeSeriesSegment};
use eegml::spectral::multitaper_sg;
use eegml::tapers::dpss;

fn main() {
    let fs = 173.61;
    let n = 4096;
    let (f0, f1) = (5.0, 40.0);
    let duration = n as f64 / fs;
    let samples: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            let phase = std::f64::consts::TAU * (f0 * t + (f1 - f0) * t * t / (2.0 * duration));
            phase.sin()
        })
        .collect();
    let seg = TimeSeriesSegment::new(samples, fs, "chirp", ClassLabel::Normal1);

    let window = 256;
    let tapers = dpss(window, 2.5, 4).unwrap();
    let sg = multitaper_sg(&seg, &tapers, 128).unwrap();

    println!(
        "{} frames, {} bins, {:.3} Hz resolution",
        sg.frame_count(),
        sg.bin_count(),
        sg.freq_resolution
    );
    println!("\n  time    expected    measured");
    for (t, frame) in sg.frames.iter().enumerate() {
        let peak_bin = frame
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        // Instantaneous frequency at the center of the frame.
        let center = sg.frame_times[t] + 0.5 * window as f64 / fs;
        let expected = f0 + (f1 - f0) * center / duration;
        println!(
            "  {:5.2}s  {expected:7.2} Hz  {:7.2} Hz",
            sg.frame_times[t],
            sg.frequency(peak_bin)
        );
    }
}
