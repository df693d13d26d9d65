//! End-to-end run on a generated dataset: write segment files and a
//! manifest, then extract features, cross-validate the classifiers, test
//! the differences and render the report, exactly as the CLI would.

use std::fs;
use std::path::Path;

use eegml::pipeline::{self, PipelineConfig};

/// Six segments per class: a class-specific rhythm plus a common buzz.
fn write_dataset(root: &Path) -> std::io::Result<()> {
    let classes = [
        ("normal1", 10.0, 700.0),
        ("normal2", 11.5, 500.0),
        ("interictal", 6.0, 1200.0),
        ("ictal", 3.0, 1900.0),
    ];
    let fs_hz = 173.61;
    let mut manifest = String::from("sampling_rate = 173.61\n\n[classes]\n");
    for (name, freq, amplitude) in classes {
        let dir = root.join(name);
        fs::create_dir_all(&dir)?;
        for i in 0..6 {
            let mut text = String::new();
            for t in 0..256 {
                let tau = std::f64::consts::TAU;
                let time = t as f64 / fs_hz;
                let v = amplitude * (tau * (freq + 0.3 * i as f64) * time + 0.7 * i as f64).sin()
                    + 40.0 * (tau * 47.0 * time + 1.4 * i as f64).sin();
                text.push_str(&format!("{}\n", v.round() as i64));
            }
            fs::write(dir.join(format!("{name}{i:03}.txt")), text)?;
        }
        manifest.push_str(&format!("{name} = \"{name}\"\n"));
    }
    fs::write(root.join("manifest.toml"), manifest)
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    write_dataset(dir.path()).expect("dataset written");

    let config = PipelineConfig {
        manifest: dir.path().join("manifest.toml"),
        output_dir: dir.path().join("out"),
        folds: 3,
        seed: 11,
        extraction: eegml::features::ExtractionConfig {
            sg_window: 64,
            sg_hop: 32,
            ..Default::default()
        },
        ..PipelineConfig::default()
    };

    let summary = pipeline::cmd_extract(&config).expect("extract");
    println!(
        "extracted {} segments x {} features",
        summary.rows, summary.feature_count
    );

    let bundles = pipeline::cmd_evaluate(&config).expect("evaluate");
    for bundle in &bundles {
        println!("\n{} task:", bundle.task);
        for report in &bundle.reports {
            println!(
                "  {:<7} mean error {:5.2}% (sd {:5.2})",
                report.spec.algorithm.name(),
                report.mean_error_pct,
                report.sd_error_pct
            );
        }
    }

    let stats = pipeline::cmd_stats(&config).expect("stats");
    for bundle in &stats {
        println!(
            "\n{} Friedman p = {:.4} ({})",
            bundle.task,
            bundle.report.friedman.p_value,
            if bundle.report.friedman.significant {
                "significant"
            } else {
                "not significant"
            }
        );
    }

    let report_path = pipeline::cmd_report(&config, &[]).expect("report");
    println!("\nartifacts in {}:", config.output_dir.display());
    let mut names: Vec<String> = fs::read_dir(&config.output_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in names {
        println!("  {name}");
    }

    let text = fs::read_to_string(&report_path).unwrap();
    println!("\nfirst lines of {}:", report_path.display());
    for line in text.lines().take(12) {
        println!("  {line}");
    }
}
