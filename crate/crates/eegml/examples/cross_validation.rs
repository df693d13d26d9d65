//! Stratified 10-fold cross-validation of two classifiers on a noisy
//! synthetic problem, with the pooled confusion matrix and per-fold errors
//! the downstream statistics consume.

use eegml::eval::{cross_validate, CvSpec, Task};
use eegml::learners::{Algorithm, LearnerConfig};

fn main() {
    // Two overlapping Gaussian clouds in 3 dimensions; a few percent of
    // the points cross the midplane, so errors are genuinely nonzero.
    let mut state = 0xACEDu64;
    let mut gaussian = move || {
        let mut uniform = || {
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
        };
        let a = (1.0f64 - uniform()).max(f64::MIN_POSITIVE);
        (-2.0 * a.ln()).sqrt() * (std::f64::consts::TAU * uniform()).cos()
    };

    let mut x = Vec::new();
    let mut y = Vec::new();
    for (label, center) in [("abnormal", 1.0), ("normal", -1.0)] {
        for _ in 0..100 {
            x.push(vec![
                center + gaussian(),
                center + gaussian(),
                center + gaussian(),
            ]);
            y.push(label.to_string());
        }
    }
    let class_names = vec!["abnormal".to_string(), "normal".to_string()];
    let feature_names: Vec<String> = (0..3).map(|d| format!("x{d}")).collect();

    for algorithm in [Algorithm::Lda, Algorithm::NearestNeighbor] {
        let spec = CvSpec {
            task: Task::Binary,
            algorithm,
            folds: 10,
            seed: 21,
            learner: LearnerConfig::with_seed(21),
        };
        let report = cross_validate(&spec, &x, &y, &class_names, &feature_names).unwrap();

        println!("== {} ==", algorithm.name());
        println!("fold errors (%): {:?}", report.fold_errors_pct);
        println!(
            "mean error {:.2}% (sd {:.2}), accuracy {:.2}%",
            report.mean_error_pct,
            report.sd_error_pct,
            report.pooled.accuracy_pct().unwrap()
        );
        println!(
            "sensitivity {:.1}%  specificity {:.1}%  ppv {:.1}%  npv {:.1}%",
            report.pooled.sensitivity_pct().unwrap(),
            report.pooled.specificity_pct().unwrap(),
            report.pooled.positive_pv_pct().unwrap(),
            report.pooled.negative_pv_pct().unwrap()
        );
        println!(
            "pooled counts: tp {} fp {} fn {} tn {}\n",
            report.pooled.tp(),
            report.pooled.fp(),
            report.pooled.fn_count(),
            report.pooled.tn()
        );
    }
}
