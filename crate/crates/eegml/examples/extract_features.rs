//! Runs the full feature extractor on one synthetic segment and prints a
//! selection of the 105 values it produces.

use eegml::features::{extract_all, ExtractionConfig, FeatureVector};
use eegml::ingest::{ClassLabel, TimeSeriesSegment};

fn main() {
    let fs = 173.61;
    let n = 4096;
    // Alpha-dominant rhythm with a weak beta ripple and slow drift.
    let samples: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            let tau = std::f64::consts::TAU;
            55.0 * (tau * 10.2 * t).sin()
                + 9.0 * (tau * 19.0 * t + 0.3).sin()
                + 20.0 * (tau * 0.9 * t).sin()
        })
        .collect();
    let seg = TimeSeriesSegment::new(samples, fs, "demo", ClassLabel::Normal1);

    let cfg = ExtractionConfig::default();
    let fv = extract_all(&seg, &cfg).unwrap();
    let names = FeatureVector::names();
    println!("extracted {} features from {} samples\n", fv.values.len(), n);

    let highlights = [
        "ps_alpha_power_ratio",
        "ps_alpha_peak_frequency",
        "ps_alpha_centroid",
        "ps_beta_power_ratio",
        "ps_delta_power_ratio",
        "ps_alpha_shannon_entropy",
        "sg_alpha_band_energy",
        "sg_alpha_centroid",
        "bg_mean_magnitude",
        "bg_entropy",
    ];
    for name in highlights {
        println!("  {name:<26} {:>14.6}", fv.value(name).unwrap());
    }

    println!("\nfull inventory by family:");
    for family in ["ps_", "sg_", "bg_"] {
        let count = names.iter().filter(|n| n.starts_with(family)).count();
        println!("  {family}* {count} features");
    }
}
