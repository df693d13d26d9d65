//! Four-class classification through an all-against-all code matrix: one
//! binary model per class pair, decoded by nearest code row.

use eegml::learners::{Algorithm, LearnerConfig};
use eegml::multiclass::{aaa_code_matrix, fit_ecoc, predict_ecoc};

fn main() {
    let classes: Vec<String> = ["normal1", "normal2", "interictal", "ictal"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let code = aaa_code_matrix(&classes).unwrap();

    println!("all-against-all code matrix ({} columns):", code.columns());
    for (row, name) in classes.iter().enumerate() {
        print!("  {name:<12}");
        for column in 0..code.columns() {
            print!("{:>4}", code.entry(row, column));
        }
        println!();
    }
    println!("\n  columns:");
    for column in 0..code.columns() {
        println!("    {column}: {}", code.column_label(column));
    }

    // Toy 2-D features: one cluster per class at a different center.
    let centers = [(0.0, 0.0), (6.0, 0.0), (0.0, 6.0), (6.0, 6.0)];
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut state = 0x5EEDu64;
    let mut jitter = || {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    for (class, &(cx, cy)) in classes.iter().zip(&centers) {
        for _ in 0..30 {
            x.push(vec![cx + jitter(), cy + jitter()]);
            y.push(class.clone());
        }
    }

    let cfg = LearnerConfig::with_seed(3);
    let feature_names = vec!["x".to_string(), "y".to_string()];
    let model = fit_ecoc(&code, Algorithm::Lda, &x, &y, &feature_names, &cfg).unwrap();

    println!("\npredictions at the cluster centers and one midpoint:");
    for (point, note) in [
        (vec![0.0, 0.0], "center of normal1"),
        (vec![6.0, 0.0], "center of normal2"),
        (vec![0.0, 6.0], "center of interictal"),
        (vec![6.0, 6.0], "center of ictal"),
        (vec![3.0, 3.1], "near the middle"),
    ] {
        let p = predict_ecoc(&model, &point).unwrap();
        println!(
            "  ({:>4.1}, {:>4.1}) -> {:<11} outputs {:?}{} ({note})",
            point[0],
            point[1],
            p.class_name,
            p.outputs,
            if p.tied { " [distance tie]" } else { "" },
        );
    }
}
