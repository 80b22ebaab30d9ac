//! Bias-corrected variance estimation for continuous (tie-free) data.
//!
//! Placement-based plug-in components, a finite-sample bias correction to
//! each, a Welch-type combination with Welch-Satterthwaite degrees of
//! freedom, and a final multiplicative correction. Refuses data with
//! cross-sample ties; the tie-robust path lives in [`crate::variance_eu`].

use crate::auc::{auc_fast, placements};
use crate::error::{Error, Result};
use crate::sample::TwoSampleData;

/// Bias-corrected variance components and the combined estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct BcVariance {
    /// zeta1-hat-squared + omega1-hat / n2.
    pub zeta1_star_sq: f64,
    /// zeta2-hat-squared + omega2-hat / n1.
    pub zeta2_star_sq: f64,
    /// Plug-in estimate of E[G(X)(1 - G(X))].
    pub omega1: f64,
    /// Plug-in estimate of E[F(Y)(1 - F(Y))].
    pub omega2: f64,
    /// Welch combination zeta1*^2/lambda_n + zeta2*^2/(1 - lambda_n).
    pub sigma_adj_sq: f64,
    /// (1 - 1/n1 - 1/n2) * sigma_adj_sq when that factor is positive,
    /// otherwise sigma_adj_sq with `correction_applied == false`.
    pub sigma_final_sq: f64,
    /// Welch-Satterthwaite degrees of freedom, from sigma_adj_sq.
    pub df: f64,
    /// Whether the final multiplicative correction was applied.
    pub correction_applied: bool,
    /// True when sigma_adj_sq is zero (all placements constant); the test
    /// layer maps this to the degenerate p-value rule.
    pub degenerate: bool,
}

/// Placement-based components: (zeta1_hat_sq, zeta2_hat_sq, omega1, omega2).
///
/// Components are centered at the null value `a0`, exactly as the defining
/// estimators are written.
pub fn bc_components(data: &TwoSampleData, a0: f64) -> Result<(f64, f64, f64, f64)> {
    check_a0(a0)?;
    data.require_min_per_group("BC variance components", 2)?;
    if auc_fast(data).has_cross_ties {
        return Err(Error::TiesPresent);
    }
    let p = placements(data);
    let n1 = data.n1() as f64;
    let n2 = data.n2() as f64;

    let zeta1_hat_sq = p
        .g_at_x
        .iter()
        .map(|g| {
            let d = g - (1.0 - a0);
            d * d
        })
        .sum::<f64>()
        / (n1 - 1.0);
    let zeta2_hat_sq = p
        .f_at_y
        .iter()
        .map(|f| {
            let d = f - a0;
            d * d
        })
        .sum::<f64>()
        / (n2 - 1.0);
    let omega1 = p.g_at_x.iter().map(|g| g * (1.0 - g)).sum::<f64>() / n1;
    let omega2 = p.f_at_y.iter().map(|f| f * (1.0 - f)).sum::<f64>() / n2;
    Ok((zeta1_hat_sq, zeta2_hat_sq, omega1, omega2))
}

/// Full bias-corrected variance: components, Welch combination, df, and the
/// final correction. The df is computed from `sigma_adj_sq`, before the
/// final correction, following the stated order of the construction.
pub fn bc_variance(data: &TwoSampleData, a0: f64) -> Result<BcVariance> {
    let (z1, z2, omega1, omega2) = bc_components(data, a0)?;
    let n1 = data.n1() as f64;
    let n2 = data.n2() as f64;
    let lambda = data.lambda_n();

    let zeta1_star_sq = z1 + omega1 / n2;
    let zeta2_star_sq = z2 + omega2 / n1;
    let term1 = zeta1_star_sq / lambda;
    let term2 = zeta2_star_sq / (1.0 - lambda);
    let sigma_adj_sq = term1 + term2;

    let degenerate = sigma_adj_sq == 0.0;
    let df = if degenerate {
        n1 + n2 - 2.0
    } else {
        sigma_adj_sq * sigma_adj_sq / (term1 * term1 / (n1 - 1.0) + term2 * term2 / (n2 - 1.0))
    };

    let factor = 1.0 - 1.0 / n1 - 1.0 / n2;
    let (sigma_final_sq, correction_applied) = if factor > 0.0 {
        (factor * sigma_adj_sq, true)
    } else {
        (sigma_adj_sq, false)
    };

    Ok(BcVariance {
        zeta1_star_sq,
        zeta2_star_sq,
        omega1,
        omega2,
        sigma_adj_sq,
        sigma_final_sq,
        df,
        correction_applied,
        degenerate,
    })
}

pub(crate) fn check_a0(a0: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a0) {
        return Err(Error::InvalidConfig(format!(
            "a0 must lie in [0, 1], got {a0}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::validate;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn components_hand_computed() {
        // placements g = [0, 0.5], f = [0.5, 1]
        let d = validate(&[1.0, 3.0], &[2.0, 4.0]).unwrap();
        let (z1, z2, o1, o2) = bc_components(&d, 0.5).unwrap();
        assert_eq!(z1, 0.25);
        assert_eq!(z2, 0.25);
        assert_eq!(o1, 0.125);
        assert_eq!(o2, 0.125);
    }

    #[test]
    fn components_complete_separation_at_null() {
        let d = validate(&[0.0, 0.1], &[10.0, 10.1]).unwrap();
        let (z1, z2, _, _) = bc_components(&d, 1.0).unwrap();
        assert_eq!(z1, 0.0);
        assert_eq!(z2, 0.0);
    }

    #[test]
    fn components_reject_cross_ties() {
        let d = validate(&[1.0, 2.0], &[2.0, 3.0]).unwrap();
        assert_eq!(bc_components(&d, 0.5).unwrap_err(), Error::TiesPresent);
    }

    #[test]
    fn variance_hand_computed_n2() {
        let d = validate(&[1.0, 3.0], &[2.0, 4.0]).unwrap();
        let v = bc_variance(&d, 0.5).unwrap();
        assert_eq!(v.zeta1_star_sq, 0.3125);
        assert_eq!(v.zeta2_star_sq, 0.3125);
        assert_eq!(v.sigma_adj_sq, 1.25);
        // factor 1 - 1/2 - 1/2 = 0: correction skipped
        assert!(!v.correction_applied);
        assert_eq!(v.sigma_final_sq, 1.25);
        assert!((v.df - 2.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_correction_and_df_bounds() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let n1 = rng.random_range(3..30);
            let n2 = rng.random_range(3..30);
            let x: Vec<f64> = (0..n1).map(|_| rng.random::<f64>()).collect();
            let y: Vec<f64> = (0..n2).map(|_| rng.random::<f64>() + 0.2).collect();
            let d = validate(&x, &y).unwrap();
            let (z1, z2, _, _) = bc_components(&d, 0.5).unwrap();
            let v = bc_variance(&d, 0.5).unwrap();
            assert!(v.zeta1_star_sq >= z1);
            assert!(v.zeta2_star_sq >= z2);
            if v.zeta1_star_sq > 0.0 && v.zeta2_star_sq > 0.0 {
                assert!(v.df >= 1.0 && v.df <= (n1 + n2 - 2) as f64, "df = {}", v.df);
            }
        }
    }

    #[test]
    fn rank_only_dependence() {
        // any strictly increasing transform of both samples leaves BC alone
        let x = [0.3, -1.2, 2.4, 0.9, 4.4];
        let y = [0.1, 1.7, -0.4, 3.3];
        let d = validate(&x, &y).unwrap();
        let tx: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let ty: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        let dt = validate(&tx, &ty).unwrap();
        assert_eq!(
            bc_variance(&d, 0.4).unwrap(),
            bc_variance(&dt, 0.4).unwrap()
        );
    }

    /// Independent straight-line re-implementation of the whole construction,
    /// kept deliberately free of the production helpers.
    fn bc_oracle(x: &[f64], y: &[f64], a0: f64) -> (f64, f64, f64, f64, f64) {
        let n1 = x.len() as f64;
        let n2 = y.len() as f64;
        let g: Vec<f64> = x
            .iter()
            .map(|&xi| y.iter().filter(|&&yj| yj <= xi).count() as f64 / n2)
            .collect();
        let f: Vec<f64> = y
            .iter()
            .map(|&yj| x.iter().filter(|&&xi| xi <= yj).count() as f64 / n1)
            .collect();
        let z1: f64 = g.iter().map(|v| (v - (1.0 - a0)).powi(2)).sum::<f64>() / (n1 - 1.0);
        let z2: f64 = f.iter().map(|v| (v - a0).powi(2)).sum::<f64>() / (n2 - 1.0);
        let o1: f64 = g.iter().map(|v| v * (1.0 - v)).sum::<f64>() / n1;
        let o2: f64 = f.iter().map(|v| v * (1.0 - v)).sum::<f64>() / n2;
        let s1 = z1 + o1 / n2;
        let s2 = z2 + o2 / n1;
        let lam = n1 / (n1 + n2);
        let adj = s1 / lam + s2 / (1.0 - lam);
        let df =
            adj * adj / ((s1 / lam).powi(2) / (n1 - 1.0) + (s2 / (1.0 - lam)).powi(2) / (n2 - 1.0));
        let fin = (1.0 - 1.0 / n1 - 1.0 / n2) * adj;
        (s1, s2, adj, df, fin)
    }

    #[test]
    fn matches_independent_reimplementation() {
        let mut rng = StdRng::seed_from_u64(20240917);
        for trial in 0..20 {
            let n1 = 180 + trial;
            let n2 = 210 - trial;
            let x: Vec<f64> = (0..n1).map(|_| rng.random::<f64>()).collect();
            let y: Vec<f64> = (0..n2).map(|_| rng.random::<f64>() * 1.3).collect();
            let d = validate(&x, &y).unwrap();
            let v = bc_variance(&d, 0.5).unwrap();
            let (s1, s2, adj, df, fin) = bc_oracle(&x, &y, 0.5);
            assert!((v.zeta1_star_sq - s1).abs() < 1e-12);
            assert!((v.zeta2_star_sq - s2).abs() < 1e-12);
            assert!((v.sigma_adj_sq - adj).abs() < 1e-12);
            assert!((v.df - df).abs() < 1e-9 * df.max(1.0));
            assert!((v.sigma_final_sq - fin).abs() < 1e-12);
        }
    }
}
