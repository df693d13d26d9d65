//! Friedman rank test for repeated measures: do k treatments measured on
//! the same n blocks (here, classifiers measured on the same CV folds)
//! differ anywhere?

use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{ResultsBlock, StatsError, TestReport, DEFAULT_ALPHA};

/// Ranks one row ascending, averaging ranks over ties, so the smallest
/// value gets rank 1 and equal values share the mean of their positions.
pub(super) fn average_ranks(row: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| row[a].total_cmp(&row[b]));
    let mut ranks = vec![0.0; row.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && row[order[end]] == row[order[start]] {
            end += 1;
        }
        // Positions start..end (0-based) hold a tie group; ranks are 1-based.
        let rank = (start + end + 1) as f64 / 2.0;
        for &col in &order[start..end] {
            ranks[col] = rank;
        }
        start = end;
    }
    ranks
}

/// Mean rank of each column across all rows of the block.
pub(super) fn mean_ranks(block: &ResultsBlock) -> Vec<f64> {
    let k = block.columns();
    let n = block.rows() as f64;
    let mut sums = vec![0.0; k];
    for row in block.values() {
        for (sum, rank) in sums.iter_mut().zip(average_ranks(row)) {
            *sum += rank;
        }
    }
    sums.iter_mut().for_each(|s| *s /= n);
    sums
}

/// Friedman chi-square test over a rows-by-columns block of paired results.
///
/// The statistic is 12n/(k(k+1)) * sum_j (Rbar_j - (k+1)/2)^2 over the mean
/// column ranks, referred to a chi-square with k-1 degrees of freedom. Ties
/// within a row get averaged ranks; no tie correction factor is applied.
pub fn friedman(block: &ResultsBlock) -> Result<TestReport, StatsError> {
    let k = block.columns();
    let n = block.rows();
    if k < 2 {
        return Err(StatsError::TooFewGroups { count: k, minimum: 2 });
    }
    if n < 2 {
        return Err(StatsError::TooFewRows { count: n, minimum: 2 });
    }

    let kf = k as f64;
    let center = (kf + 1.0) / 2.0;
    let spread: f64 = mean_ranks(block)
        .iter()
        .map(|r| (r - center) * (r - center))
        .sum();
    let statistic = 12.0 * n as f64 / (kf * (kf + 1.0)) * spread;

    let dist = ChiSquared::new(kf - 1.0).expect("k >= 2 gives positive degrees of freedom");
    let p_value = dist.sf(statistic);
    Ok(TestReport::new("friedman", statistic, p_value, DEFAULT_ALPHA, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(values: Vec<Vec<f64>>) -> ResultsBlock {
        let names: Vec<String> = (0..values[0].len()).map(|j| format!("c{j}")).collect();
        ResultsBlock::new(values, names).unwrap()
    }

    #[test]
    fn ranks_average_over_ties() {
        assert_eq!(average_ranks(&[3.0, 1.0, 2.0]), vec![3.0, 1.0, 2.0]);
        assert_eq!(average_ranks(&[1.0, 1.0, 2.0]), vec![1.5, 1.5, 3.0]);
        assert_eq!(average_ranks(&[5.0, 5.0, 5.0, 5.0]), vec![2.5; 4]);
        assert_eq!(average_ranks(&[2.0, 1.0, 2.0, 0.5]), vec![3.5, 2.0, 3.5, 1.0]);
    }

    #[test]
    fn identical_columns_give_zero_statistic() {
        let b = block((0..5).map(|i| vec![i as f64; 3]).collect());
        let report = friedman(&b).unwrap();
        assert_eq!(report.statistic, 0.0);
        assert_eq!(report.p_value, 1.0);
        assert!(!report.significant);
    }

    #[test]
    fn perfectly_ordered_columns_hit_the_tieless_maximum() {
        // Column j is always ranked j+1, so the statistic reaches its
        // tie-free maximum 12n/(k(k+1)) * sum of squared deviations = 2n
        // for k = 3. Frozen p from an independent implementation.
        let b = block((0..10).map(|i| vec![i as f64, i as f64 + 1.0, i as f64 + 2.0]).collect());
        let report = friedman(&b).unwrap();
        assert!((report.statistic - 20.0).abs() < 1e-12);
        let expected_p = 4.539992976248486e-05;
        assert!((report.p_value - expected_p).abs() < 1e-9 * expected_p);
        assert!(report.significant);
    }

    fn tied_block() -> ResultsBlock {
        block(vec![
            vec![4.0, 4.0, 2.0, 1.0],
            vec![5.0, 3.0, 3.0, 3.0],
            vec![6.0, 5.0, 4.0, 2.0],
            vec![4.0, 6.0, 3.0, 3.0],
            vec![7.0, 7.0, 7.0, 7.0],
            vec![5.0, 4.0, 2.0, 2.0],
            vec![8.0, 6.0, 5.0, 3.0],
            vec![3.0, 2.0, 2.0, 1.0],
            vec![6.0, 6.0, 4.0, 4.0],
            vec![9.0, 7.0, 6.0, 5.0],
        ])
    }

    #[test]
    fn tied_rows_use_averaged_ranks_without_a_correction_factor() {
        let b = tied_block();
        let ranks = mean_ranks(&b);
        let expected = [3.65, 3.0, 1.95, 1.4];
        for (got, want) in ranks.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        let report = friedman(&b).unwrap();
        assert!((report.statistic - 18.51).abs() < 1e-12);
        let expected_p = 3.451841009878e-04;
        assert!((report.p_value - expected_p).abs() < 1e-9);
    }

    #[test]
    fn row_order_and_per_row_shifts_are_irrelevant() {
        let b = tied_block();
        let baseline = friedman(&b).unwrap();

        let mut rows = b.values().to_vec();
        rows.reverse();
        rows.swap(2, 6);
        let permuted = friedman(&block(rows)).unwrap();
        assert_eq!(permuted.statistic, baseline.statistic);

        // Adding a constant per row changes values but not within-row ranks.
        let shifted: Vec<Vec<f64>> = b
            .values()
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|v| v + 10.0 * i as f64).collect())
            .collect();
        let shifted = friedman(&block(shifted)).unwrap();
        assert_eq!(shifted.statistic, baseline.statistic);
    }

    #[test]
    fn degenerate_shapes_are_rejected() {
        let one_column = block((0..5).map(|i| vec![i as f64]).collect());
        assert!(matches!(
            friedman(&one_column),
            Err(StatsError::TooFewGroups { count: 1, .. })
        ));
        let one_row = block(vec![vec![1.0, 2.0, 3.0]]);
        assert!(matches!(
            friedman(&one_row),
            Err(StatsError::TooFewRows { count: 1, .. })
        ));
    }
}
