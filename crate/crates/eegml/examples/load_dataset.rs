//! Loads a dataset from a manifest the same way the CLI does: plain-text
//! segment files grouped per class, validated before anything downstream
//! touches them.

use std::fs;

use eegml::ingest::{load_dataset, validate_dataset, DatasetManifest};

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");

    // Two small classes; one file is truncated so the validation has
    // something to report.
    for (class, amplitude) in [("normal1", 60.0), ("ictal", 900.0)] {
        let sub = dir.path().join(class);
        fs::create_dir_all(&sub).unwrap();
        for i in 0..3 {
            let length = if class == "ictal" && i == 2 { 96 } else { 128 };
            let mut text = String::new();
            for t in 0..length {
                let v = amplitude * ((0.2 + 0.05 * i as f64) * t as f64).sin();
                text.push_str(&format!("{}\n", v.round() as i64));
            }
            fs::write(sub.join(format!("{class}{i:03}.txt")), text).unwrap();
        }
    }
    let manifest_path = dir.path().join("manifest.toml");
    fs::write(
        &manifest_path,
        "sampling_rate = 173.61\n\n[classes]\nnormal1 = \"normal1\"\nictal = \"ictal\"\n",
    )
    .unwrap();

    let manifest = DatasetManifest::from_file(&manifest_path).expect("manifest parses");
    let dataset = load_dataset(&manifest).expect("segments load");
    println!("loaded {} segments at {} Hz", dataset.len(), manifest.sampling_rate);

    for seg in dataset.segments() {
        let peak = seg.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!(
            "  {:<12} label {:<8} {} samples, {:.2} s, peak {:>6.0}",
            seg.source_id,
            seg.label.name(),
            seg.len(),
            seg.duration(),
            peak
        );
    }

    let validation = validate_dataset(&dataset);
    println!("\nclass counts:");
    for (name, count) in &validation.class_counts {
        println!("  {name:<12} {count}");
    }
    if validation.warnings.is_empty() {
        println!("no validation warnings");
    } else {
        println!("validation warnings:");
        for warning in &validation.warnings {
            println!("  {warning}");
        }
    }
}
