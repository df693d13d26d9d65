//! Computes a Slepian taper family and prints its concentration
//! eigenvalues and mutual orthogonality.

use eegml::tapers::dpss;

fn main() {
    let length = 512;
    let nw = 2.5;
    let count = 4;
    let tapers = dpss(length, nw, count).expect("valid taper parameters");

    println!("{count} tapers of length {length}, time-bandwidth {nw}");
    println!("\nconcentration eigenvalues (fraction of energy inside the band):");
    for (k, lambda) in tapers.eigenvalues().iter().enumerate() {
        println!("  taper {k}: {lambda:.12}");
    }

    println!("\npairwise inner products:");
    for a in 0..count {
        print!("  ");
        for b in 0..count {
            let dot: f64 = tapers
                .taper(a)
                .iter()
                .zip(tapers.taper(b))
                .map(|(x, y)| x * y)
                .sum();
            print!("{dot:>10.2e} ");
        }
        println!();
    }

    // A few samples of the first taper show the familiar bell shape.
    println!("\nfirst taper, every 64th sample:");
    for (i, v) in tapers.taper(0).iter().enumerate().step_by(64) {
        let bar = "#".repeat((v.abs() * 400.0) as usize);
        println!("  [{i:>3}] {v:>9.5} {bar}");
    }
}
