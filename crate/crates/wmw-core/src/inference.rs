//! Full tests of H0: AUC = A0: method dispatch, standard errors, t/normal
//! p-values, and confidence intervals.

use crate::auc::{auc_fast, kernel_summaries};
use crate::error::{Error, Result};
use crate::sample::TwoSampleData;
use crate::special::{normal_cdf, normal_quantile, t_cdf, t_quantile};
use crate::variance_bc::{bc_variance, check_a0};
use crate::variance_eu::eu_variance;
use std::fmt;

/// Variance framework used by [`wmw_test`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Resolves to [`Method::Eu`]; the tie-robust path is the default for
    /// every kind of data.
    #[default]
    Auto,
    /// Exact finite-sample variance combination over the mid-rank kernel;
    /// handles continuous, discrete, and mixed data.
    Eu,
    /// Placement-based bias-corrected variance; continuous data only.
    Bc,
    /// Asymptotic plug-in variance with normal quantiles; comparison
    /// studies only, never the default.
    PluginZ,
}

impl Method {
    pub fn resolve(self) -> Method {
        match self {
            Method::Auto => Method::Eu,
            m => m,
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "auto" => Some(Method::Auto),
            "eu" => Some(Method::Eu),
            "bc" => Some(Method::Bc),
            "plugin-z" => Some(Method::PluginZ),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Auto => "auto",
            Method::Eu => "eu",
            Method::Bc => "bc",
            Method::PluginZ => "plugin-z",
        };
        write!(f, "{s}")
    }
}

/// Direction of the alternative hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alternative {
    #[default]
    TwoSided,
    /// AUC < A0.
    Less,
    /// AUC > A0.
    Greater,
}

impl Alternative {
    pub fn parse(s: &str) -> Option<Alternative> {
        match s {
            "two-sided" => Some(Alternative::TwoSided),
            "less" => Some(Alternative::Less),
            "greater" => Some(Alternative::Greater),
            _ => None,
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Alternative::TwoSided => "two-sided",
            Alternative::Less => "less",
            Alternative::Greater => "greater",
        };
        write!(f, "{s}")
    }
}

/// Test configuration. Defaults: a0 = 0.5, alpha = 0.05, method auto,
/// two-sided. The confidence interval is always the symmetric two-sided
/// (1 - alpha) interval; `alternative` affects the p-value only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestConfig {
    pub a0: f64,
    pub alpha: f64,
    pub method: Method,
    pub alternative: Alternative,
}

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig {
            a0: 0.5,
            alpha: 0.05,
            method: Method::Auto,
            alternative: Alternative::TwoSided,
        }
    }
}

/// Reference distribution for the standardized statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Df {
    Student(f64),
    Normal,
}

impl Df {
    pub fn cdf(self, t: f64) -> f64 {
        match self {
            Df::Student(df) => t_cdf(t, df),
            Df::Normal => normal_cdf(t),
        }
    }

    pub fn quantile(self, p: f64) -> f64 {
        match self {
            Df::Student(df) => t_quantile(p, df),
            Df::Normal => normal_quantile(p),
        }
    }
}

impl fmt::Display for Df {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Df::Student(df) => write!(f, "{df}"),
            Df::Normal => write!(f, "normal"),
        }
    }
}

/// Outcome of a test of H0: AUC = A0.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub a_hat: f64,
    /// Standard error of a_hat on the AUC scale.
    pub se: f64,
    pub df: Df,
    /// (a_hat - a0) / se; +/- infinity under the degenerate rule.
    pub statistic: f64,
    pub p_value: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Resolved method (never `auto`).
    pub method: Method,
    pub warnings: Vec<String>,
}

/// Tests H0: AUC(x, y) = a0.
///
/// Dispatch: `auto` and `eu` run the exact finite-sample variance
/// combination (any data); `bc` runs the placement-based bias-corrected
/// construction and errors on cross-sample ties; `plugin-z` runs the
/// asymptotic plug-in with normal quantiles.
pub fn wmw_test(data: &TwoSampleData, cfg: &TestConfig) -> Result<TestResult> {
    check_a0(cfg.a0)?;
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha must lie in (0, 1), got {}",
            cfg.alpha
        )));
    }
    data.require_min_per_group("wmw test", 2)?;

    let a_hat = auc_fast(data).a_hat;
    let n = data.n() as f64;
    let mut warnings = Vec::new();

    let (se, df) = match cfg.method.resolve() {
        Method::Eu | Method::Auto => {
            let summaries = kernel_summaries(data)?;
            let ev = eu_variance(&summaries, data)?;
            if ev.clamped {
                warnings.push("variance estimate was negative and floored to zero".to_string());
            }
            if !ev.correction_applied {
                warnings.push(
                    "final correction skipped: factor 1 - 1/n1 - 1/n2 is nonpositive".to_string(),
                );
            }
            if ev.nu_fallback {
                warnings.push("degrees of freedom fell back to n1 + n2 - 2".to_string());
            }
            // var_final already estimates Var(a_hat); no further scaling.
            (ev.var_final.sqrt(), Df::Student(ev.nu))
        }
        Method::Bc => {
            let bc = bc_variance(data, cfg.a0)?;
            if !bc.correction_applied {
                warnings.push(
                    "final correction skipped: factor 1 - 1/n1 - 1/n2 is nonpositive".to_string(),
                );
            }
            if bc.degenerate {
                warnings.push("degrees of freedom fell back to n1 + n2 - 2".to_string());
            }
            // sigma_final estimates the variance of sqrt(n)(a_hat - a0).
            (bc.sigma_final_sq.sqrt() / n.sqrt(), Df::Student(bc.df))
        }
        Method::PluginZ => {
            let summaries = kernel_summaries(data)?;
            let sigma_sq = summaries.zeta1_hat_sq / data.lambda_n()
                + summaries.zeta2_hat_sq / (1.0 - data.lambda_n());
            (sigma_sq.sqrt() / n.sqrt(), Df::Normal)
        }
    };

    Ok(finish_test(
        a_hat,
        se,
        df,
        cfg,
        cfg.method.resolve(),
        warnings,
    ))
}

fn finish_test(
    a_hat: f64,
    se: f64,
    df: Df,
    cfg: &TestConfig,
    method: Method,
    mut warnings: Vec<String>,
) -> TestResult {
    let (statistic, p_value, raw_lo, raw_hi) = if se > 0.0 {
        let statistic = (a_hat - cfg.a0) / se;
        let p_value = pvalue(statistic, df, cfg.alternative);
        let q = df.quantile(1.0 - cfg.alpha / 2.0);
        (statistic, p_value, a_hat - q * se, a_hat + q * se)
    } else {
        warnings.push("degenerate variance: p-value from the zero-variance rule".to_string());
        let statistic = if a_hat == cfg.a0 {
            0.0
        } else if a_hat > cfg.a0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        let p_value = pvalue(statistic, df, cfg.alternative);
        (statistic, p_value, a_hat, a_hat)
    };

    let ci_lo = raw_lo.clamp(0.0, 1.0);
    let ci_hi = raw_hi.clamp(0.0, 1.0);
    if ci_lo != raw_lo || ci_hi != raw_hi {
        warnings.push(format!(
            "ci clamped to [0, 1]; unclamped [{raw_lo}, {raw_hi}]"
        ));
    }

    TestResult {
        a_hat,
        se,
        df,
        statistic,
        p_value,
        ci_lo,
        ci_hi,
        method,
        warnings,
    }
}

/// p-value of an observed standardized statistic against the given
/// reference distribution.
pub fn pvalue(statistic: f64, df: Df, alternative: Alternative) -> f64 {
    let p = match alternative {
        Alternative::TwoSided => {
            if statistic == 0.0 {
                1.0
            } else {
                2.0 * (1.0 - df.cdf(statistic.abs()))
            }
        }
        Alternative::Less => df.cdf(statistic),
        Alternative::Greater => 1.0 - df.cdf(statistic),
    };
    p.clamp(0.0, 1.0)
}
