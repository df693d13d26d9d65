//! Multitaper power spectrum of a noisy two-tone signal, with the power
//! split across the five clinical EEG bands.

use eegml::features::Band;
use eegml::ingest::{ClassLabel, TimeSeriesSegment};
use eegml::spectral::multitaper_ps;
use eegml::tapers::dpss;

fn main() {
    let fs = 173.61;
    let n = 4096;
    // 6 Hz theta and 21 Hz beta tones over mild deterministic noise.
    let samples: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            let noise = (0.37 * i as f64).sin() * (0.11 * i as f64).cos();
            40.0 * (std::f64::consts::TAU * 6.0 * t).sin()
                + 15.0 * (std::f64::consts::TAU * 21.0 * t).sin()
                + 3.0 * noise
        })
        .collect();
    let seg = TimeSeriesSegment::new(samples, fs, "two-tone", ClassLabel::Normal1);

    let tapers = dpss(n, 2.5, 4).unwrap();
    let ps = multitaper_ps(&seg, &tapers).unwrap();

    println!(
        "{} bins at {:.4} Hz resolution, nyquist {:.2} Hz",
        ps.bin_count(),
        ps.freq_resolution,
        ps.nyquist
    );

    let mut total = 0.0;
    let band_powers: Vec<(String, f64)> = Band::standard()
        .iter()
        .map(|band| {
            let power: f64 = (0..ps.bin_count())
                .filter(|&k| {
                    let f = ps.frequency(k);
                    band.lo <= f && f < band.hi
                })
                .map(|k| ps.powers[k])
                .sum();
            total += power;
            (band.name.clone(), power)
        })
        .collect();

    println!("\nband power distribution:");
    for (name, power) in &band_powers {
        println!(
            "  {name:<6} {:>12.2}  ({:5.1}%)",
            power,
            100.0 * power / total
        );
    }

    let (peak_bin, peak) = ps
        .powers
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    println!(
        "\nspectral peak: {:.3} Hz (power {peak:.2})",
        ps.frequency(peak_bin)
    );
}
