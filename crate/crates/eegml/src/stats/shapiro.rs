//! Shapiro-Wilk W test for normality, following Royston's AS R94 algorithm
//! (Applied Statistics 44, 1995), the same routine used by the major
//! statistics packages. Valid for sample sizes 3 through 5000.

use super::{StatsError, TestReport, DEFAULT_ALPHA};

/// Treated as zero when checking the sample range, and returned as the
/// p-value when W falls beyond the fitted tail.
const SMALL: f64 = 1e-19;

/// Polynomial with ascending coefficients: c[0] + c[1]*x + c[2]*x^2 + ...
fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

// Coefficients from AS R94 for the weight corrections (C1, C2), the
// normalizing transforms of 1 - W (C3..C6), and the n <= 11 threshold (G).
const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -0.0006714];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

/// Upper (or lower) tail of the standard normal distribution, AS 66.
fn alnorm(x: f64, upper: bool) -> f64 {
    let (z, up) = if x < 0.0 { (-x, !upper) } else { (x, upper) };
    let tail = if z <= 7.0 || (up && z <= 38.0) {
        let y = 0.5 * z * z;
        if z <= 1.28 {
            0.5 - z
                * (0.398942280444
                    - 0.399903438504 * y
                        / (y + 5.75885480458
                            - 29.8213557808 / (y + 2.62433121679 + 48.6959930692 / (y + 5.92885724438))))
        } else {
            0.398942280385 * (-y).exp()
                / (z - 3.8052e-8
                    + 1.00000615302
                        / (z + 3.98064794e-4
                            + 1.98615381364
                                / (z - 0.151679116635
                                    + 5.29330324926
                                        / (z + 4.8385912808
                                            - 15.1508972451
                                                / (z + 0.742380924027
                                                    + 30.789933034 / (z + 3.99019417011))))))
        }
    } else {
        0.0
    };
    if up {
        tail
    } else {
        1.0 - tail
    }
}

/// Normal quantile function, AS 111. Good to about 1e-7, which is all the
/// weight construction needs.
fn ppnd(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.42 {
        let r = q * q;
        q * (((-25.44106049637 * r + 41.39119773534) * r - 18.61500062529) * r + 2.50662823884)
            / ((((3.13082909833 * r - 21.06224101826) * r + 23.08336743743) * r - 8.47351093090)
                * r
                + 1.0)
    } else {
        let mut r = if q <= 0.0 { p } else { 1.0 - p };
        if r <= 0.0 {
            return 0.0;
        }
        r = (-r.ln()).sqrt();
        let val = (((2.32121276858 * r + 4.85014127135) * r - 2.29796479134) * r - 2.78718931138)
            / ((1.63706781897 * r + 3.54388924762) * r + 1.0);
        if q < 0.0 {
            -val
        } else {
            val
        }
    }
}

/// W statistic and p-value for the hypothesis that `sample` is drawn from a
/// normal distribution. Low p-values mean the sample looks non-normal.
///
/// A zero-range sample leaves W undefined; it is reported as non-normal
/// (p = 0) with an explanatory note, since a constant is as far from
/// Gaussian as data can get.
pub fn shapiro_wilk(sample: &[f64]) -> Result<TestReport, StatsError> {
    let n = sample.len();
    if n < 3 {
        return Err(StatsError::SampleTooSmall { size: n, minimum: 3 });
    }
    if n > 5000 {
        return Err(StatsError::SampleTooLarge { size: n, maximum: 5000 });
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite("shapiro_wilk sample".into()));
    }

    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if range < SMALL {
        return Ok(TestReport {
            test: "shapiro_wilk".into(),
            statistic: 1.0,
            p_value: 0.0,
            alpha: DEFAULT_ALPHA,
            significant: true,
            note: Some(
                "sample range is zero, so W is undefined; a constant sample is reported as non-normal"
                    .into(),
            ),
        });
    }

    let an = n as f64;
    let nn2 = n / 2;
    let mut a = vec![0.0; nn2];
    if n == 3 {
        a[0] = std::f64::consts::FRAC_1_SQRT_2;
    } else {
        // Expected normal order statistics, Blom approximation, then the
        // Royston polynomial corrections to the two extreme weights.
        let an25 = an + 0.25;
        let mut summ2 = 0.0;
        for (i, ai) in a.iter_mut().enumerate() {
            *ai = ppnd((i as f64 + 1.0 - 0.375) / an25);
            summ2 += *ai * *ai;
        }
        summ2 *= 2.0;
        let ssumm2 = summ2.sqrt();
        let rsn = 1.0 / an.sqrt();
        let a1 = poly(&C1, rsn) - a[0] / ssumm2;
        let (i1, fac) = if n > 5 {
            let a2 = -a[1] / ssumm2 + poly(&C2, rsn);
            let fac = ((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1])
                / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
                .sqrt();
            a[1] = a2;
            (2, fac)
        } else {
            let fac = ((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
            (1, fac)
        };
        a[0] = a1;
        for ai in a.iter_mut().skip(i1) {
            *ai = -*ai / fac;
        }
    }

    // W is the squared correlation between the ordered sample and the
    // antisymmetric weight vector (-a[0], -a[1], ..., a[1], a[0]). Values
    // are scaled by the range for numerical stability, as in AS R94.
    let mut sx = 0.0;
    let mut sa = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        sx += xi / range;
        let j = n - 1 - i;
        if i != j {
            let sign = if i < j { -1.0 } else { 1.0 };
            sa += sign * a[i.min(j)];
        }
    }
    sx /= an;
    sa /= an;

    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (i, &xi) in x.iter().enumerate() {
        let j = n - 1 - i;
        let asa = if i == j {
            -sa
        } else {
            let sign = if i < j { -1.0 } else { 1.0 };
            sign * a[i.min(j)] - sa
        };
        let xsx = xi / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    let ssassx = (ssa * ssx).sqrt();
    let w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    let w = 1.0 - w1;

    let p_value = if n == 3 {
        if w < 0.75 {
            // The exact n = 3 formula is only valid for W >= 0.75; smaller
            // values are off the support and get the limiting p of zero.
            return Ok(TestReport::new("shapiro_wilk", 0.75, 0.0, DEFAULT_ALPHA, None));
        }
        let pw = 1.0 - 6.0 / std::f64::consts::PI * w.sqrt().acos();
        pw.max(0.0)
    } else {
        let y = w1.ln();
        if n <= 11 {
            let gamma = poly(&G, an);
            if y >= gamma {
                SMALL
            } else {
                let y = -(gamma - y).ln();
                let m = poly(&C3, an);
                let s = poly(&C4, an).exp();
                alnorm((y - m) / s, true)
            }
        } else {
            let m = poly(&C5, an.ln());
            let s = poly(&C6, an.ln()).exp();
            alnorm((y - m) / s, true)
        }
    };

    Ok(TestReport::new("shapiro_wilk", w, p_value, DEFAULT_ALPHA, None))
}
