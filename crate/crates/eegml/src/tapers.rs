//! Slepian (DPSS) data tapers.
//!
//! Discrete prolate spheroidal sequences maximize spectral concentration in
//! a half-bandwidth W = NW/L. They are computed here through the classical
//! symmetric tridiagonal formulation: the tapers are eigenvectors of a
//! tridiagonal matrix whose top eigenvalues correspond to the best
//! concentrated sequences. Eigenvalues come from bisection on Sturm counts,
//! eigenvectors from inverse iteration with partial pivoting, and the
//! concentration ratios from the sinc-kernel quadratic form.

use thiserror::Error;

/// A family of orthonormal data tapers plus their concentration ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct TaperSet {
    /// K tapers, each of length L and unit Euclidean norm.
    tapers: Vec<Vec<f64>>,
    /// Spectral concentration ratio of each taper, strictly decreasing.
    eigenvalues: Vec<f64>,
    /// Time-bandwidth product NW (0 for the degenerate rectangular taper).
    time_bandwidth: f64,
    length: usize,
}

impl TaperSet {
    pub fn tapers(&self) -> &[Vec<f64>] {
        &self.tapers
    }

    pub fn taper(&self, k: usize) -> &[f64] {
        &self.tapers[k]
    }

    /// Concentration eigenvalues, one per taper, each in (0, 1].
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn count(&self) -> usize {
        self.tapers.len()
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.tapers.is_empty()
    }

    pub fn time_bandwidth(&self) -> f64 {
        self.time_bandwidth
    }
}

#[derive(Debug, Error)]
pub enum TaperError {
    #[error("invalid taper parameters: {0}")]
    InvalidParameters(String),
    #[error("eigen-iteration failed to converge: {0}")]
    ConvergenceFailure(String),
}

/// Diagonal and off-diagonal of the Slepian tridiagonal matrix for the
/// concentration problem at half-bandwidth W = nw / length.
///
/// The off-diagonal entry at index i couples positions i and i+1. Exposed
/// so the eigenvalues can be cross-checked against any dense symmetric
/// eigensolver operating on the same matrix.
pub fn slepian_matrix_bands(length: usize, nw: f64) -> (Vec<f64>, Vec<f64>) {
    let n = length as f64;
    let w = nw / n;
    let cos2w = (2.0 * std::f64::consts::PI * w).cos();
    let half = (n - 1.0) / 2.0;
    let diag: Vec<f64> = (0..length).map(|i| (half - i as f64).powi(2) * cos2w).collect();
    let off: Vec<f64> = (0..length.saturating_sub(1))
        .map(|i| ((i + 1) as f64) * (n - 1.0 - i as f64) / 2.0)
        .collect();
    (diag, off)
}

/// Counts eigenvalues of the tridiagonal matrix strictly below `x` using
/// the Sturm sequence of leading principal minors.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0usize;
    let mut q = 1.0f64;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        if q == 0.0 {
            // Exact zero pivot: nudge so the recurrence continues with a
            // consistent sign, the standard bisection safeguard.
            q = -f64::MIN_POSITIVE;
        }
        q = diag[i] - x - e2 / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` largest eigenvalues of the Slepian tridiagonal matrix, in
/// decreasing order, by bisection. These are the raw matrix eigenvalues
/// (unbounded), not the concentration ratios.
pub fn tridiagonal_eigenvalues(length: usize, nw: f64, count: usize) -> Vec<f64> {
    let (diag, off) = slepian_matrix_bands(length, nw);
    let n = diag.len();
    // Gershgorin interval containing the whole spectrum.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i == 0 { 0.0 } else { off[i - 1].abs() }
            + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let tol = 1e-14 * scale;
    let mut eigs = Vec::with_capacity(count);
    for j in 0..count {
        // Ascending index of the j-th largest eigenvalue.
        let m = n - 1 - j;
        let (mut a, mut b) = (lo, hi);
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if sturm_count(&diag, &off, mid) > m {
                b = mid;
            } else {
                a = mid;
            }
        }
        eigs.push(0.5 * (a + b));
    }
    eigs
}

/// Solves (T - shift·I) x = rhs for tridiagonal T by Gaussian elimination
/// with partial pivoting (one superdiagonal of fill-in). Singular pivots
/// are perturbed, which is exactly what inverse iteration wants.
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, rhs: &mut [f64]) {
    let n = diag.len();
    let mut dl: Vec<f64> = off.to_vec();
    let mut d: Vec<f64> = diag.iter().map(|&x| x - shift).collect();
    let mut du: Vec<f64> = off.to_vec();
    let mut du2 = vec![0.0f64; n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = f64::MIN_POSITIVE;
            }
            let mult = dl[i] / d[i];
            dl[i] = mult;
            d[i + 1] -= mult * du[i];
        } else {
            let mult = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = mult;
            let tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - mult * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -mult * du[i + 1];
            }
            swapped[i] = true;
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = f64::MIN_POSITIVE;
    }
    for i in 0..n.saturating_sub(1) {
        if swapped[i] {
            let tmp = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = tmp - dl[i] * rhs[i];
        } else {
            rhs[i + 1] -= dl[i] * rhs[i];
        }
    }
    rhs[n - 1] /= d[n - 1];
    if n >= 2 {
        rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

/// Deterministic start vector for inverse iteration. A fixed pseudo-random
/// pattern avoids starting orthogonal to the antisymmetric eigenvectors,
/// which an all-ones start would be.
fn start_vector(length: usize, k: usize) -> Vec<f64> {
    let mut state = (k as u64).wrapping_mul(0x9e3779b97f4a7c15) ^ 0x853c49e6748fea9b;
    let mut v = Vec::with_capacity(length);
    for _ in 0..length {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        v.push(((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5);
    }
    v
}

/// Infinity norm of T v - lambda v.
fn residual(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let n = diag.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut t = (diag[i] - lambda) * v[i];
        if i > 0 {
            t += off[i - 1] * v[i - 1];
        }
        if i + 1 < n {
            t += off[i] * v[i + 1];
        }
        worst = worst.max(t.abs());
    }
    worst
}

/// Concentration ratio of a unit-norm taper: the quadratic form with the
/// sinc kernel, computed through the taper's autocorrelation.
fn concentration(taper: &[f64], w: f64) -> f64 {
    let n = taper.len();
    let mut lambda = 2.0 * w; // lag-0 kernel times unit autocorrelation
    for d in 1..n {
        let mut r = 0.0;
        for i in 0..n - d {
            r += taper[i] * taper[i + d];
        }
        let kernel = (2.0 * std::f64::consts::PI * w * d as f64).sin() / (std::f64::consts::PI * d as f64);
        lambda += 2.0 * kernel * r;
    }
    lambda.min(1.0)
}

/// Fixes the overall sign: nonnegative mean, falling back to a nonnegative
/// first significant element for the antisymmetric tapers whose mean
/// vanishes.
fn fix_sign(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    let flip = if sum.abs() > 1e-10 {
        sum < 0.0
    } else {
        match v.iter().find(|x| x.abs() > 1e-12) {
            Some(first) => *first < 0.0,
            None => false,
        }
    };
    if flip {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Computes `count` discrete prolate spheroidal sequences of the given
/// length at time-bandwidth product `nw`.
///
/// Requires length >= 2, 0 < nw < length/2 and 1 <= count <= floor(2 nw);
/// beyond that the concentration ratios collapse and the sequences stop
/// being useful as tapers.
pub fn dpss(length: usize, nw: f64, count: usize) -> Result<TaperSet, TaperError> {
    if length < 2 {
        return Err(TaperError::InvalidParameters(format!(
            "length must be at least 2, got {length}"
        )));
    }
    if !(nw > 0.0 && nw < length as f64 / 2.0) {
        return Err(TaperError::InvalidParameters(format!(
            "time-bandwidth product must satisfy 0 < nw < length/2, got nw={nw} for length {length}"
        )));
    }
    let max_count = (2.0 * nw).floor() as usize;
    if count == 0 || count > max_count {
        return Err(TaperError::InvalidParameters(format!(
            "taper count must be in 1..={max_count} for nw={nw}, got {count}"
        )));
    }

    let (diag, off) = slepian_matrix_bands(length, nw);
    let eigs = tridiagonal_eigenvalues(length, nw, count);
    let scale = diag
        .iter()
        .map(|d| d.abs())
        .chain(off.iter().map(|e| 2.0 * e.abs()))
        .fold(1.0f64, f64::max);

    let mut tapers: Vec<Vec<f64>> = Vec::with_capacity(count);
    for (k, &lambda) in eigs.iter().enumerate() {
        let mut v = start_vector(length, k);
        normalize(&mut v);
        let mut converged = false;
        for _ in 0..100 {
            solve_shifted(&diag, &off, lambda, &mut v);
            // Strip components along already-found eigenvectors so close
            // eigenvalues cannot pull the iteration onto a repeated vector.
            for prev in &tapers {
                let proj: f64 = prev.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                for (x, p) in v.iter_mut().zip(prev.iter()) {
                    *x -= proj * p;
                }
            }
            if normalize(&mut v) == 0.0 {
                v = start_vector(length, k + 101);
                normalize(&mut v);
                continue;
            }
            if residual(&diag, &off, lambda, &v) <= 1e-11 * scale {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(TaperError::ConvergenceFailure(format!(
                "inverse iteration stalled on taper {k} (length {length}, nw {nw})"
            )));
        }
        fix_sign(&mut v);
        tapers.push(v);
    }

    let w = nw / length as f64;
    let eigenvalues: Vec<f64> = tapers.iter().map(|t| concentration(t, w)).collect();
    for pair in eigenvalues.windows(2) {
        if !(pair[0] > pair[1]) {
            return Err(TaperError::ConvergenceFailure(format!(
                "concentration ratios not strictly decreasing: {pair:?}"
            )));
        }
    }
    if eigenvalues.iter().any(|&l| !(l > 0.0 && l <= 1.0)) {
        return Err(TaperError::ConvergenceFailure(format!(
            "concentration ratios outside (0,1]: {eigenvalues:?}"
        )));
    }

    Ok(TaperSet {
        tapers,
        eigenvalues,
        time_bandwidth: nw,
        length,
    })
}

/// The degenerate single flat taper 1/sqrt(L). Under it the multitaper
/// power spectrum reduces to the classical periodogram, which is what the
/// spectral equivalence tests rely on.
pub fn rectangular_taper(length: usize) -> TaperSet {
    assert!(length >= 1, "rectangular taper needs at least one sample");
    let value = 1.0 / (length as f64).sqrt();
    TaperSet {
        tapers: vec![vec![value; length]],
        eigenvalues: vec![1.0],
        time_bandwidth: 0.0,
        length,
    }
}
