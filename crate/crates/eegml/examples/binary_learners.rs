//! Trains all six binary classifiers on two toy geometries: linearly
//! separable Gaussian clouds and a disc inside an annulus. The second one
//! shows why the suite carries both linear and quadratic discriminants.

use eegml::learners::{Algorithm, BinaryModel, LearnerConfig, TrainingSet};

/// Small deterministic generator so the example needs no external seed.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> f64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        (x.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
    }

    fn gaussian(&mut self) -> f64 {
        let u = (1.0 - self.next()).max(f64::MIN_POSITIVE);
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * self.next()).cos()
    }
}

fn clouds(rng: &mut Rng) -> TrainingSet {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for label in [1i8, -1] {
        for _ in 0..80 {
            let c = 2.5 * f64::from(label);
            x.push(vec![c + rng.gaussian(), c + rng.gaussian()]);
            y.push(label);
        }
    }
    TrainingSet::new(x, y, vec!["x".into(), "y".into()]).unwrap()
}

fn disc_and_annulus(rng: &mut Rng) -> TrainingSet {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for label in [1i8, -1] {
        for _ in 0..80 {
            let r = if label == 1 { rng.next() } else { 2.0 + rng.next() };
            let a = std::f64::consts::TAU * rng.next();
            x.push(vec![r * a.cos(), r * a.sin()]);
            y.push(label);
        }
    }
    TrainingSet::new(x, y, vec!["x".into(), "y".into()]).unwrap()
}

fn accuracy(model: &BinaryModel, set: &TrainingSet) -> f64 {
    let hits = set
        .x
        .iter()
        .zip(&set.y)
        .filter(|(row, &label)| model.predict(row).unwrap() == label)
        .count();
    100.0 * hits as f64 / set.len() as f64
}

fn main() {
    let mut rng = Rng(0xDECAF);
    let sets = [
        ("gaussian clouds", clouds(&mut rng)),
        ("disc vs annulus", disc_and_annulus(&mut rng)),
    ];
    let cfg = LearnerConfig::with_seed(7);

    println!("{:<8} {:>18} {:>18}", "model", sets[0].0, sets[1].0);
    for algorithm in Algorithm::ALL {
        print!("{:<8}", algorithm.name());
        for (_, set) in &sets {
            let model = BinaryModel::fit(algorithm, set, &cfg).unwrap();
            print!(" {:>16.1}%", accuracy(&model, set));
        }
        println!();
    }
    println!("\n(training accuracy; the linear model cannot close the ring)");
}
