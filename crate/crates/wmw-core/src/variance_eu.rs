//! Tie-robust finite-sample variance estimation from the kernel-matrix
//! summaries, plus an exhaustive-enumeration oracle over small discrete
//! distributions used by the test suites to measure estimator bias exactly.

use crate::auc::{mid_rank_kernel, KernelSummaries};
use crate::error::{Error, Result};
use crate::sample::TwoSampleData;

/// Hard cap on `support_x^n1 * support_y^n2` for the enumeration oracle.
pub const ENUMERATION_GUARD: u128 = 10_000_000;

/// The combined variance estimate with its coefficients and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct EuVariance {
    /// a * v_hat + b * zeta1_hat^2 + c * zeta2_hat^2.
    pub var_tilde: f64,
    /// -(M-1) / (M(M+1)).
    pub a_coef: f64,
    /// n2 / (M+1).
    pub b_coef: f64,
    /// n1 / (M+1).
    pub c_coef: f64,
    /// (1 - 1/n1 - 1/n2) * max(var_tilde, 0); the factor is skipped when
    /// nonpositive.
    pub var_final: f64,
    /// Degrees of freedom for the t reference; scale-invariant in the
    /// variance estimate, so the final correction changes only the width
    /// of the interval, never the df.
    pub nu: f64,
    /// True when var_tilde was negative and floored to zero.
    pub clamped: bool,
    /// Whether the (1 - 1/n1 - 1/n2) factor was applied.
    pub correction_applied: bool,
    /// True when nu fell back to n1 + n2 - 2 (degenerate components or
    /// sizes too small for the three-term formula).
    pub nu_fallback: bool,
}

/// Variance combination from the natural sample quantities; needs
/// n1 >= 2 and n2 >= 2.
pub fn eu_variance(summaries: &KernelSummaries, data: &TwoSampleData) -> Result<EuVariance> {
    data.require_min_per_group("EU variance", 2)?;
    let n1 = data.n1() as f64;
    let n2 = data.n2() as f64;
    let m = data.m() as f64;

    let a_coef = -(m - 1.0) / (m * (m + 1.0));
    let b_coef = n2 / (m + 1.0);
    let c_coef = n1 / (m + 1.0);
    let var_tilde = a_coef * summaries.v_hat
        + b_coef * summaries.zeta1_hat_sq
        + c_coef * summaries.zeta2_hat_sq;

    let clamped = var_tilde < 0.0;
    let floored = var_tilde.max(0.0);
    let factor = 1.0 - 1.0 / n1 - 1.0 / n2;
    let (var_final, correction_applied) = if factor > 0.0 {
        (factor * floored, true)
    } else {
        (floored, false)
    };

    let (nu, nu_fallback) = df_from_parts(var_tilde, summaries, data);

    Ok(EuVariance {
        var_tilde,
        a_coef,
        b_coef,
        c_coef,
        var_final,
        nu,
        clamped,
        correction_applied,
        nu_fallback,
    })
}

/// Welch-Satterthwaite-style degrees of freedom with denominators
/// (n1 - 2, n2 - 2, M - 3). Falls back to n1 + n2 - 2 when a denominator
/// is nonpositive or every component term vanishes.
pub fn eu_df(ev: &EuVariance, summaries: &KernelSummaries, data: &TwoSampleData) -> f64 {
    df_from_parts(ev.var_tilde, summaries, data).0
}

fn df_from_parts(var_tilde: f64, summaries: &KernelSummaries, data: &TwoSampleData) -> (f64, bool) {
    let n1 = data.n1() as f64;
    let n2 = data.n2() as f64;
    let m = data.m() as f64;
    let fallback = n1 + n2 - 2.0;
    if data.n1() < 3 || data.n2() < 3 || data.m() < 4 {
        return (fallback, true);
    }
    let t1 = n2 * summaries.zeta1_hat_sq / (m + 1.0);
    let t2 = n1 * summaries.zeta2_hat_sq / (m + 1.0);
    let t3 = (m - 1.0) * summaries.v_hat / (m * (m + 1.0));
    let denom = t1 * t1 / (n1 - 2.0) + t2 * t2 / (n2 - 2.0) + t3 * t3 / (m - 3.0);
    if denom <= 0.0 || var_tilde <= 0.0 {
        return (fallback, true);
    }
    (var_tilde * var_tilde / denom, false)
}

/// A finite discrete distribution for the enumeration oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    values: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteDist {
    /// Values must be distinct and finite; probabilities positive and
    /// summing to 1 within 1e-12.
    pub fn new(values: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() != probs.len() {
            return Err(Error::InvalidConfig(
                "discrete distribution needs matching, nonempty values/probs".into(),
            ));
        }
        if probs.iter().any(|&p| !p.is_finite() || p <= 0.0) {
            return Err(Error::InvalidConfig(
                "discrete distribution probabilities must be positive".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "discrete distribution probabilities sum to {total}, not 1"
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidConfig("non-finite support value".into()));
            }
            if values[..i].contains(v) {
                return Err(Error::InvalidConfig("duplicate support value".into()));
            }
        }
        Ok(DiscreteDist { values, probs })
    }

    /// Uniform distribution over the given support.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let p = 1.0 / values.len() as f64;
        let probs = vec![p; values.len()];
        DiscreteDist::new(values, probs)
    }

    pub fn point_mass(value: f64) -> Self {
        DiscreteDist {
            values: vec![value],
            probs: vec![1.0],
        }
    }

    pub fn support(&self) -> &[f64] {
        &self.values
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Population-level quantities of the kernel for a discrete pair: the AUC,
/// the two projection variances, the kernel variance, and the variance of
/// the degenerate remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationComponents {
    pub a: f64,
    pub zeta1_sq: f64,
    pub zeta2_sq: f64,
    pub v: f64,
    pub var_psi: f64,
}

pub fn population_components(dist_x: &DiscreteDist, dist_y: &DiscreteDist) -> PopulationComponents {
    let mut a = 0.0;
    let mut e_h_sq = 0.0;
    for (&x, &px) in dist_x.values.iter().zip(&dist_x.probs) {
        for (&y, &py) in dist_y.values.iter().zip(&dist_y.probs) {
            let h = mid_rank_kernel(x, y);
            a += px * py * h;
            e_h_sq += px * py * h * h;
        }
    }
    let v = e_h_sq - a * a;

    // projections phi1(x) = E_Y h(x, Y) - A, phi2(y) = E_X h(X, y) - A
    let mut zeta1_sq = 0.0;
    for (&x, &px) in dist_x.values.iter().zip(&dist_x.probs) {
        let row: f64 = dist_y
            .values
            .iter()
            .zip(&dist_y.probs)
            .map(|(&y, &py)| py * mid_rank_kernel(x, y))
            .sum();
        zeta1_sq += px * (row - a) * (row - a);
    }
    let mut zeta2_sq = 0.0;
    for (&y, &py) in dist_y.values.iter().zip(&dist_y.probs) {
        let col: f64 = dist_x
            .values
            .iter()
            .zip(&dist_x.probs)
            .map(|(&x, &px)| px * mid_rank_kernel(x, y))
            .sum();
        zeta2_sq += py * (col - a) * (col - a);
    }
    PopulationComponents {
        a,
        zeta1_sq,
        zeta2_sq,
        v,
        var_psi: v - zeta1_sq - zeta2_sq,
    }
}

/// Exact expectations of the natural sample quantities and of the combined
/// estimator, by weighted enumeration over all ordered samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumeratedExpectations {
    /// True Var(A-hat).
    pub var_a_hat: f64,
    /// Expected `var_tilde` under the production coefficient combination.
    pub e_var_tilde: f64,
    pub e_zeta1_hat_sq: f64,
    pub e_zeta2_hat_sq: f64,
    pub e_v_hat: f64,
}

/// Enumerates every ordered (x-sample, y-sample) pair from the two discrete
/// distributions. Test-suite oracle; guarded to at most
/// [`ENUMERATION_GUARD`] outcomes.
pub fn exact_variance_enumerator(
    dist_x: &DiscreteDist,
    dist_y: &DiscreteDist,
    n1: usize,
    n2: usize,
) -> Result<EnumeratedExpectations> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::TooSmall {
            what: "enumeration oracle",
            needed: 2,
            have: n1.min(n2),
        });
    }
    let outcomes = (dist_x.values.len() as u128)
        .checked_pow(n1 as u32)
        .zip((dist_y.values.len() as u128).checked_pow(n2 as u32))
        .and_then(|(a, b)| a.checked_mul(b))
        .ok_or(Error::TooLarge {
            outcomes: u128::MAX,
            guard: ENUMERATION_GUARD,
        })?;
    if outcomes > ENUMERATION_GUARD {
        return Err(Error::TooLarge {
            outcomes,
            guard: ENUMERATION_GUARD,
        });
    }

    let m = (n1 * n2) as f64;
    let a_coef = -(m - 1.0) / (m * (m + 1.0));
    let b_coef = n2 as f64 / (m + 1.0);
    let c_coef = n1 as f64 / (m + 1.0);

    let mut e_a = 0.0;
    let mut e_a_sq = 0.0;
    let mut e_v_hat = 0.0;
    let mut e_z1 = 0.0;
    let mut e_z2 = 0.0;

    let mut xs = vec![0_usize; n1];
    loop {
        let px: f64 = xs.iter().map(|&i| dist_x.probs[i]).product();
        let x_vals: Vec<f64> = xs.iter().map(|&i| dist_x.values[i]).collect();
        let mut ys = vec![0_usize; n2];
        loop {
            let py: f64 = ys.iter().map(|&j| dist_y.probs[j]).product();
            let y_vals: Vec<f64> = ys.iter().map(|&j| dist_y.values[j]).collect();
            let w = px * py;

            let (a_hat, v_hat, z1, z2) = sample_quantities(&x_vals, &y_vals);
            e_a += w * a_hat;
            e_a_sq += w * a_hat * a_hat;
            e_v_hat += w * v_hat;
            e_z1 += w * z1;
            e_z2 += w * z2;

            if !advance(&mut ys, dist_y.values.len()) {
                break;
            }
        }
        if !advance(&mut xs, dist_x.values.len()) {
            break;
        }
    }

    Ok(EnumeratedExpectations {
        var_a_hat: e_a_sq - e_a * e_a,
        e_var_tilde: a_coef * e_v_hat + b_coef * e_z1 + c_coef * e_z2,
        e_zeta1_hat_sq: e_z1,
        e_zeta2_hat_sq: e_z2,
        e_v_hat,
    })
}

/// (A-hat, v_hat, zeta1_hat_sq, zeta2_hat_sq) straight from the definitions.
fn sample_quantities(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    let n1 = x.len();
    let n2 = y.len();
    let m = (n1 * n2) as f64;
    let mut total = 0.0;
    let mut row_sums = vec![0.0_f64; n1];
    let mut col_sums = vec![0.0_f64; n2];
    for (i, &xi) in x.iter().enumerate() {
        for (j, &yj) in y.iter().enumerate() {
            let h = mid_rank_kernel(xi, yj);
            total += h;
            row_sums[i] += h;
            col_sums[j] += h;
        }
    }
    let a_hat = total / m;
    let mut ss = 0.0;
    for &xi in x {
        for &yj in y {
            let d = mid_rank_kernel(xi, yj) - a_hat;
            ss += d * d;
        }
    }
    let v_hat = ss / (m - 1.0);
    let z1 = row_sums
        .iter()
        .map(|s| {
            let d = s / n2 as f64 - a_hat;
            d * d
        })
        .sum::<f64>()
        / (n1 as f64 - 1.0);
    let z2 = col_sums
        .iter()
        .map(|s| {
            let d = s / n1 as f64 - a_hat;
            d * d
        })
        .sum::<f64>()
        / (n2 as f64 - 1.0);
    (a_hat, v_hat, z1, z2)
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for slot in idx.iter_mut() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}
