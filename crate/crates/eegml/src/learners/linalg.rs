//! Minimal dense linear algebra for the discriminant learners: Cholesky
//! factorization and triangular solves on symmetric positive definite
//! matrices stored as row-major Vec<Vec<f64>>.

/// Lower-triangular Cholesky factor L with A = L Lᵀ. Returns None when a
/// pivot is not strictly positive (A not positive definite).
pub fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Some(l)
}

/// Solves L y = b for lower-triangular L.
pub fn solve_lower(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut y = vec![0.0f64; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i][k] * y[k];
        }
        y[i] = sum / l[i][i];
    }
    y
}

/// Solves Lᵀ x = y for lower-triangular L.
pub fn solve_lower_transpose(l: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut x = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in i + 1..n {
            sum -= l[k][i] * x[k];
        }
        x[i] = sum / l[i][i];
    }
    x
}

/// Solves A x = b given A's Cholesky factor.
pub fn solve_spd(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    solve_lower_transpose(l, &solve_lower(l, b))
}

/// ln det A from A's Cholesky factor.
pub fn log_det(l: &[Vec<f64>]) -> f64 {
    2.0 * l.iter().enumerate().map(|(i, row)| row[i].ln()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_and_solves_a_known_system() {
        // A = [[4,2],[2,3]], so L = [[2,0],[1,sqrt(2)]].
        let a = vec![vec![4.0, 2.0], vec![2.0, 3.0]];
        let l = cholesky(&a).unwrap();
        assert!((l[0][0] - 2.0).abs() < 1e-12);
        assert!((l[1][0] - 1.0).abs() < 1e-12);
        assert!((l[1][1] - 2.0f64.sqrt()).abs() < 1e-12);

        let x = solve_spd(&l, &[8.0, 7.0]);
        // A x = b  =>  x = [1.25, 1.5]
        assert!((x[0] - 1.25).abs() < 1e-12);
        assert!((x[1] - 1.5).abs() < 1e-12);

        let det = 4.0 * 3.0 - 2.0 * 2.0;
        assert!((log_det(&l) - (det as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_indefinite_matrices() {
        assert!(cholesky(&[vec![0.0]]).is_none());
        assert!(cholesky(&[vec![1.0, 2.0], vec![2.0, 1.0]]).is_none());
    }
}
