//! Harmonic structure in the bispectrum. The triple product
//! X(f1) X(f2) X*(f1+f2) is large only where all three frequencies carry
//! energy, so a tone plus its second harmonic lights up (f, f) while an
//! inharmonic pair with the same total power leaves the region dark.

use eegml::ingest::{ClassLabel, TimeSeriesSegment};
use eegml::spectral::bispectrum;
use eegml::tapers::dpss;
use std::f64::consts::TAU;

fn tone_pair(fs: f64, n: usize, f_second: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            (TAU * 10.0 * t).cos() + 0.7 * (TAU * f_second * t + 0.9).cos()
        })
        .collect()
}

fn main() {
    let fs = 173.61;
    let n = 2048;
    let tapers = dpss(n, 2.5, 4).unwrap();

    for (label, f_second) in [("harmonic pair 10 + 20 Hz", 20.0), ("inharmonic 10 + 27 Hz", 27.0)] {
        let seg = TimeSeriesSegment::new(
            tone_pair(fs, n, f_second),
            fs,
            label,
            ClassLabel::Normal1,
        );
        let bg = bispectrum(&seg, &tapers).unwrap();
        let ((k1, k2), peak) = bg.peak().unwrap();
        println!("{label}:");
        println!(
            "  peak at ({:.2} Hz, {:.2} Hz), magnitude {peak:.3e}",
            bg.frequency(k1),
            bg.frequency(k2),
        );
    }

    println!(
        "\nBoth signals put comparable power at their two tones, but only\n\
         the harmonic pair feeds all three legs of a triple product, so\n\
         its bispectrum peak is orders of magnitude taller. That contrast\n\
         is what the bg_* features summarize."
    );
}
