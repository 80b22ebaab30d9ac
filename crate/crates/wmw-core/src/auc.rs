//! Empirical AUC, placement values, and kernel-matrix summaries.
//!
//! The production AUC path is the mid-rank identity over the pooled sort;
//! the O(n1*n2) kernel double loop is kept as an oracle and the two must
//! agree bit-for-bit (all quantities involved are dyadic rationals, so both
//! paths round exactly once, at the final division).

use crate::error::Result;
use crate::sample::TwoSampleData;

/// Beyond this many kernel cells, summaries switch from the double loop to
/// sorted-merge counting so the kernel matrix is never materialized even
/// implicitly cell by cell.
pub const DENSE_CELL_LIMIT: usize = 100_000_000;

/// The mid-rank kernel h(x, y) = 1{x < y} + 1/2 * 1{x = y}.
#[inline]
pub fn mid_rank_kernel(x: f64, y: f64) -> f64 {
    if x < y {
        1.0
    } else if x == y {
        0.5
    } else {
        0.0
    }
}

/// The empirical AUC with tie metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AucEstimate {
    /// Mean of the mid-rank kernel over all n1*n2 pairs; in [0, 1].
    pub a_hat: f64,
    /// True iff some x-value equals some y-value.
    pub has_cross_ties: bool,
    /// n1 * n2.
    pub m: usize,
}

/// Reference implementation: explicit double loop over all pairs.
pub fn auc_bruteforce(data: &TwoSampleData) -> AucEstimate {
    let mut sum = 0.0_f64;
    let mut has_cross_ties = false;
    for &x in data.x() {
        for &y in data.y() {
            sum += mid_rank_kernel(x, y);
            has_cross_ties |= x == y;
        }
    }
    AucEstimate {
        a_hat: sum / data.m() as f64,
        has_cross_ties,
        m: data.m(),
    }
}

/// Production path: A-hat = (sum of pooled mid-ranks of y - n2(n2+1)/2) / m,
/// computed in O((n1+n2) log(n1+n2)) and equal to [`auc_bruteforce`] exactly.
pub fn auc_fast(data: &TwoSampleData) -> AucEstimate {
    let sx = data.sorted_x();
    let sy = data.sorted_y();
    let (mut i, mut j) = (0_usize, 0_usize);
    let mut consumed = 0_usize;
    let mut rank_sum_y = 0.0_f64;
    let mut has_cross_ties = false;
    while i < sx.len() || j < sy.len() {
        let v = match (sx.get(i), sy.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        let mut cx = 0_usize;
        while i + cx < sx.len() && sx[i + cx] == v {
            cx += 1;
        }
        let mut cy = 0_usize;
        while j + cy < sy.len() && sy[j + cy] == v {
            cy += 1;
        }
        has_cross_ties |= cx > 0 && cy > 0;
        let group = cx + cy;
        let mid = consumed as f64 + (group as f64 + 1.0) / 2.0;
        rank_sum_y += mid * cy as f64;
        i += cx;
        j += cy;
        consumed += group;
    }
    let n2 = data.n2() as f64;
    let a_hat = (rank_sum_y - n2 * (n2 + 1.0) / 2.0) / data.m() as f64;
    AucEstimate {
        a_hat,
        has_cross_ties,
        m: data.m(),
    }
}

/// Empirical placement values: G-hat at each x and F-hat at each y, both
/// with the <= kernel, aligned with input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Placements {
    /// G-hat(X_i) = (1/n2) #{ j : Y_j <= X_i }.
    pub g_at_x: Vec<f64>,
    /// F-hat(Y_j) = (1/n1) #{ i : X_i <= Y_j }.
    pub f_at_y: Vec<f64>,
}

pub fn placements(data: &TwoSampleData) -> Placements {
    let n1 = data.n1() as f64;
    let n2 = data.n2() as f64;
    let g_at_x = data
        .x()
        .iter()
        .map(|&x| count_le(data.sorted_y(), x) as f64 / n2)
        .collect();
    let f_at_y = data
        .y()
        .iter()
        .map(|&y| count_le(data.sorted_x(), y) as f64 / n1)
        .collect();
    Placements { g_at_x, f_at_y }
}

fn count_le(sorted: &[f64], v: f64) -> usize {
    sorted.partition_point(|&s| s <= v)
}

fn count_lt(sorted: &[f64], v: f64) -> usize {
    sorted.partition_point(|&s| s < v)
}

/// Row/column means of the kernel matrix and the three natural sample
/// variances, all centered at A-hat.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSummaries {
    /// h-bar_{i.}, aligned with the x-sample's input order.
    pub row_means: Vec<f64>,
    /// h-bar_{.j}, aligned with the y-sample's input order.
    pub col_means: Vec<f64>,
    /// Pooled kernel sample variance, divisor M - 1.
    pub v_hat: f64,
    /// Row-mean variance, divisor n1 - 1.
    pub zeta1_hat_sq: f64,
    /// Column-mean variance, divisor n2 - 1.
    pub zeta2_hat_sq: f64,
    /// A-hat, carried along since every summary is centered at it.
    pub a_hat: f64,
}

/// Computes [`KernelSummaries`]; requires n1 >= 2 and n2 >= 2.
pub fn kernel_summaries(data: &TwoSampleData) -> Result<KernelSummaries> {
    kernel_summaries_with_cell_limit(data, DENSE_CELL_LIMIT)
}

/// [`kernel_summaries`] with an explicit dense-path cell budget; above it,
/// the sorted-merge path avoids touching individual kernel cells.
pub fn kernel_summaries_with_cell_limit(
    data: &TwoSampleData,
    cell_limit: usize,
) -> Result<KernelSummaries> {
    data.require_min_per_group("kernel summaries", 2)?;
    if data.m() <= cell_limit {
        Ok(summaries_dense(data))
    } else {
        Ok(summaries_merged(data))
    }
}

/// Double-loop summaries; exact mirror of the defining formulas.
fn summaries_dense(data: &TwoSampleData) -> KernelSummaries {
    let a_hat = auc_fast(data).a_hat;
    let n1 = data.n1();
    let n2 = data.n2();
    let mut row_means = vec![0.0_f64; n1];
    let mut col_sums = vec![0.0_f64; n2];
    let mut ss = 0.0_f64;
    for (i, &x) in data.x().iter().enumerate() {
        let mut row_sum = 0.0_f64;
        for (j, &y) in data.y().iter().enumerate() {
            let h = mid_rank_kernel(x, y);
            row_sum += h;
            col_sums[j] += h;
            let d = h - a_hat;
            ss += d * d;
        }
        row_means[i] = row_sum / n2 as f64;
    }
    let col_means: Vec<f64> = col_sums.iter().map(|s| s / n1 as f64).collect();
    finish_summaries(data, a_hat, row_means, col_means, ss)
}

/// Summaries from rank counts against the sorted opposite sample; never
/// touches individual kernel cells. Same row/column means bit-for-bit as
/// the dense path (the per-row kernel sums are computed exactly either way).
fn summaries_merged(data: &TwoSampleData) -> KernelSummaries {
    let a_hat = auc_fast(data).a_hat;
    let n1 = data.n1();
    let n2 = data.n2();
    let mut pairs_lt = 0.0_f64; // #{x < y}
    let mut pairs_eq = 0.0_f64; // #{x = y}
    let row_means: Vec<f64> = data
        .x()
        .iter()
        .map(|&x| {
            let le = count_le(data.sorted_y(), x);
            let lt = count_lt(data.sorted_y(), x);
            let eq = (le - lt) as f64;
            let gt = (n2 - le) as f64;
            pairs_lt += gt;
            pairs_eq += eq;
            (gt + 0.5 * eq) / n2 as f64
        })
        .collect();
    let col_means: Vec<f64> = data
        .y()
        .iter()
        .map(|&y| {
            let le = count_le(data.sorted_x(), y);
            let lt = count_lt(data.sorted_x(), y);
            let eq = (le - lt) as f64;
            (lt as f64 + 0.5 * eq) / n1 as f64
        })
        .collect();
    let m = data.m() as f64;
    let pairs_gt = m - pairs_lt - pairs_eq;
    let ss = pairs_lt * (1.0 - a_hat) * (1.0 - a_hat)
        + pairs_eq * (0.5 - a_hat) * (0.5 - a_hat)
        + pairs_gt * a_hat * a_hat;
    finish_summaries(data, a_hat, row_means, col_means, ss)
}

fn finish_summaries(
    data: &TwoSampleData,
    a_hat: f64,
    row_means: Vec<f64>,
    col_means: Vec<f64>,
    ss: f64,
) -> KernelSummaries {
    let v_hat = ss / (data.m() - 1) as f64;
    let zeta1_hat_sq = centered_sum_sq(&row_means, a_hat) / (data.n1() - 1) as f64;
    let zeta2_hat_sq = centered_sum_sq(&col_means, a_hat) / (data.n2() - 1) as f64;
    KernelSummaries {
        row_means,
        col_means,
        v_hat,
        zeta1_hat_sq,
        zeta2_hat_sq,
        a_hat,
    }
}

fn centered_sum_sq(values: &[f64], center: f64) -> f64 {
    values
        .iter()
        .map(|v| {
            let d = v - center;
            d * d
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::validate;

    #[test]
    fn brute_force_separated_and_identical() {
        let d = validate(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        let a = auc_bruteforce(&d);
        assert_eq!(a.a_hat, 1.0);
        assert!(!a.has_cross_ties);

        let d = validate(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        let a = auc_bruteforce(&d);
        assert_eq!(a.a_hat, 0.5);
        assert!(a.has_cross_ties);
    }

    #[test]
    fn brute_force_enumerated_kernel() {
        // kernel values {1, 1, 0, 1}
        let d = validate(&[1.0, 3.0], &[2.0, 4.0]).unwrap();
        assert_eq!(auc_bruteforce(&d).a_hat, 0.75);
    }

    #[test]
    fn fast_path_midrank_identity() {
        // pooled mid-ranks of y: [2.5, 4]; (6.5 - 3) / 4
        let d = validate(&[1.0, 2.0], &[2.0, 3.0]).unwrap();
        let a = auc_fast(&d);
        assert_eq!(a.a_hat, 0.875);
        assert!(a.has_cross_ties);
        assert_eq!(auc_bruteforce(&d).a_hat, 0.875);

        let d = validate(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(auc_fast(&d).a_hat, 0.5);
    }

    #[test]
    fn placements_follow_le_kernel() {
        let d = validate(&[1.0, 3.0], &[2.0, 4.0]).unwrap();
        let p = placements(&d);
        assert_eq!(p.g_at_x, vec![0.0, 0.5]);
        assert_eq!(p.f_at_y, vec![0.5, 1.0]);

        let d = validate(&[1.0], &[1.0]).unwrap();
        let p = placements(&d);
        assert_eq!(p.g_at_x, vec![1.0]);
        assert_eq!(p.f_at_y, vec![1.0]);

        let d = validate(&[0.0, 0.0], &[5.0, 5.0]).unwrap();
        let p = placements(&d);
        assert_eq!(p.g_at_x, vec![0.0, 0.0]);
        assert_eq!(p.f_at_y, vec![1.0, 1.0]);
    }

    #[test]
    fn summaries_hand_enumerated_2x2() {
        // kernel matrix [[1, 1], [0, 1]], A-hat = 0.75
        let d = validate(&[1.0, 3.0], &[2.0, 4.0]).unwrap();
        let s = kernel_summaries(&d).unwrap();
        assert_eq!(s.row_means, vec![1.0, 0.5]);
        assert_eq!(s.col_means, vec![0.5, 1.0]);
        assert_eq!(s.v_hat, 0.25);
        assert_eq!(s.zeta1_hat_sq, 0.125);
        assert_eq!(s.zeta2_hat_sq, 0.125);
    }

    #[test]
    fn summaries_constant_kernel() {
        let d = validate(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let s = kernel_summaries(&d).unwrap();
        assert_eq!(s.v_hat, 0.0);
        assert_eq!(s.zeta1_hat_sq, 0.0);
        assert_eq!(s.zeta2_hat_sq, 0.0);
    }

    #[test]
    fn summaries_too_small() {
        let d = validate(&[1.0], &[1.0, 2.0]).unwrap();
        assert!(kernel_summaries(&d).is_err());
    }

    #[test]
    fn merged_path_agrees_with_dense() {
        let d = validate(
            &[0.5, 1.0, 1.0, 2.5, 7.0, -3.0, 2.5],
            &[1.0, 2.5, 2.5, 0.0, 9.0],
        )
        .unwrap();
        let dense = summaries_dense(&d);
        let merged = summaries_merged(&d);
        assert_eq!(dense.row_means, merged.row_means);
        assert_eq!(dense.col_means, merged.col_means);
        assert_eq!(dense.zeta1_hat_sq, merged.zeta1_hat_sq);
        assert_eq!(dense.zeta2_hat_sq, merged.zeta2_hat_sq);
        assert!((dense.v_hat - merged.v_hat).abs() < 1e-14);
    }

    #[test]
    fn cell_limit_selects_the_merged_path() {
        let d = validate(&[1.0, 2.0, 2.0, 5.0], &[2.0, 3.0, 0.5]).unwrap();
        let dense = kernel_summaries_with_cell_limit(&d, usize::MAX).unwrap();
        let merged = kernel_summaries_with_cell_limit(&d, 0).unwrap();
        assert_eq!(dense.row_means, merged.row_means);
        assert_eq!(dense.col_means, merged.col_means);
        assert!((dense.v_hat - merged.v_hat).abs() < 1e-14);
    }

    #[test]
    fn row_and_col_means_average_to_a_hat() {
        let d = validate(&[1.0, 2.0, 2.0, 5.0], &[2.0, 3.0, 0.5]).unwrap();
        let s = kernel_summaries(&d).unwrap();
        let rm: f64 = s.row_means.iter().sum::<f64>() / s.row_means.len() as f64;
        let cm: f64 = s.col_means.iter().sum::<f64>() / s.col_means.len() as f64;
        assert!((rm - s.a_hat).abs() < 1e-15);
        assert!((cm - s.a_hat).abs() < 1e-15);
    }

    #[test]
    fn a_hat_times_m_is_half_integral() {
        let d = validate(&[1.0, 2.0], &[2.0, 3.0]).unwrap();
        let a = auc_fast(&d);
        let doubled = a.a_hat * a.m as f64 * 2.0;
        assert_eq!(doubled, doubled.round());
    }
}
