//! Seeded, parallelism-invariant Monte Carlo engine.
//!
//! Every replication draws from its own counter-derived RNG stream keyed by
//! (seed, replication index), per-replication results are collected in
//! replication order, and summaries are reduced sequentially — so a summary
//! is bit-identical for any thread count. Normal variates come from a plain
//! Box-Muller transform (two uniform draws per variate, cosine branch),
//! fixed here so seeds stay meaningful across versions.

use crate::auc::auc_fast;
use crate::error::{Error, Result};
use crate::inference::{wmw_test, TestConfig};
use crate::pseudomedian::{pseudomedian_ci, DEFAULT_GRID_K};
use crate::sample::{validate, TwoSampleData};
use crate::special::normal_cdf;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

/// Sampling distribution for one side of the simulated pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Normal {
        mean: f64,
        sd: f64,
    },
    /// Normal draw rounded to the nearest multiple of `step`; produces the
    /// heavy-tie regimes.
    DiscretizedNormal {
        mean: f64,
        sd: f64,
        step: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    PointMass {
        at: f64,
    },
}

impl Generator {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            Generator::Normal { mean, sd } => mean + sd * standard_normal(rng),
            Generator::DiscretizedNormal { mean, sd, step } => {
                let z = mean + sd * standard_normal(rng);
                (z / step).round() * step
            }
            Generator::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            Generator::PointMass { at } => at,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Generator::Normal { sd, .. } => sd > 0.0,
            Generator::DiscretizedNormal { sd, step, .. } => sd > 0.0 && step > 0.0,
            Generator::Uniform { lo, hi } => lo < hi,
            Generator::PointMass { .. } => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("invalid generator: {self:?}")))
        }
    }

    /// Center of symmetry.
    fn center(&self) -> f64 {
        match *self {
            Generator::Normal { mean, .. } => mean,
            Generator::DiscretizedNormal { mean, .. } => mean,
            Generator::Uniform { lo, hi } => 0.5 * (lo + hi),
            Generator::PointMass { at } => at,
        }
    }
}

/// Box-Muller, cosine branch; consumes exactly two uniforms.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>(); // (0, 1]
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// What a simulation estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimand {
    /// Mean and SD of the empirical AUC across replications.
    AucMeanSd,
    /// Fraction of replications with p < alpha.
    Type1Rate,
    /// Fraction of replications whose AUC interval covers the true AUC.
    CiCoverage,
    /// Fraction of replications whose pseudomedian interval covers the
    /// true pseudomedian.
    PseudomedianCoverage,
}

impl Estimand {
    pub fn parse(s: &str) -> Option<Estimand> {
        match s {
            "auc-mean-sd" => Some(Estimand::AucMeanSd),
            "type1-rate" => Some(Estimand::Type1Rate),
            "ci-coverage" => Some(Estimand::CiCoverage),
            "pseudomedian-coverage" => Some(Estimand::PseudomedianCoverage),
            _ => None,
        }
    }
}

impl std::fmt::Display for Estimand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Estimand::AucMeanSd => "auc-mean-sd",
            Estimand::Type1Rate => "type1-rate",
            Estimand::CiCoverage => "ci-coverage",
            Estimand::PseudomedianCoverage => "pseudomedian-coverage",
        };
        write!(f, "{s}")
    }
}

/// Full description of one simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n1: usize,
    pub n2: usize,
    pub reps: u64,
    pub seed: u64,
    pub generator_x: Generator,
    pub generator_y: Generator,
    pub estimand: Estimand,
}

/// Summary of a simulation run. Mean/SD fields are set for
/// [`Estimand::AucMeanSd`], `rate` for the three rate estimands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSummary {
    pub mean_a_hat: Option<f64>,
    pub sd_a_hat: Option<f64>,
    pub rate: Option<f64>,
    /// sd/sqrt(reps) for means, sqrt(p(1-p)/reps) for rates.
    pub mc_standard_error: f64,
    pub reps_done: u64,
}

fn check_config(cfg: &SimConfig) -> Result<()> {
    if cfg.reps == 0 {
        return Err(Error::InvalidConfig("reps must be >= 1".into()));
    }
    if cfg.n1 < 2 || cfg.n2 < 2 {
        return Err(Error::InvalidConfig("simulation needs n1, n2 >= 2".into()));
    }
    cfg.generator_x.validate()?;
    cfg.generator_y.validate()?;
    Ok(())
}

/// RNG for one replication: one stream per (seed, rep) pair.
fn replication_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// Draws the dataset of one replication; the same (cfg, rep) pair always
/// yields the same data, on any thread.
pub fn draw_replication(cfg: &SimConfig, rep: u64) -> Result<TwoSampleData> {
    let mut rng = replication_rng(cfg.seed, rep);
    let x: Vec<f64> = (0..cfg.n1)
        .map(|_| cfg.generator_x.sample(&mut rng))
        .collect();
    let y: Vec<f64> = (0..cfg.n2)
        .map(|_| cfg.generator_y.sample(&mut rng))
        .collect();
    validate(&x, &y)
}

/// Runs the simulation described by `cfg`. The rate estimands delegate to
/// [`coverage_study`] with the default [`TestConfig`].
pub fn run_simulation(cfg: &SimConfig) -> Result<SimSummary> {
    match cfg.estimand {
        Estimand::AucMeanSd => {
            check_config(cfg)?;
            let a_hats: Vec<f64> = (0..cfg.reps)
                .into_par_iter()
                .map(|rep| draw_replication(cfg, rep).map(|d| auc_fast(&d).a_hat))
                .collect::<Result<_>>()?;
            let reps = cfg.reps as f64;
            let mean = a_hats.iter().sum::<f64>() / reps;
            let sd = if cfg.reps > 1 {
                (a_hats.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / (reps - 1.0)).sqrt()
            } else {
                0.0
            };
            Ok(SimSummary {
                mean_a_hat: Some(mean),
                sd_a_hat: Some(sd),
                rate: None,
                mc_standard_error: sd / reps.sqrt(),
                reps_done: cfg.reps,
            })
        }
        _ => coverage_study(cfg, &TestConfig::default()),
    }
}

/// Type-I-error and coverage simulations; `test_cfg` controls the test run
/// inside each replication.
pub fn coverage_study(cfg: &SimConfig, test_cfg: &TestConfig) -> Result<SimSummary> {
    check_config(cfg)?;
    let hits: Vec<bool> = match cfg.estimand {
        Estimand::AucMeanSd => {
            return Err(Error::InvalidConfig(
                "coverage_study requires a rate estimand".into(),
            ))
        }
        Estimand::Type1Rate => (0..cfg.reps)
            .into_par_iter()
            .map(|rep| {
                let d = draw_replication(cfg, rep)?;
                Ok(wmw_test(&d, test_cfg)?.p_value < test_cfg.alpha)
            })
            .collect::<Result<_>>()?,
        Estimand::CiCoverage => {
            let a = true_auc(&cfg.generator_x, &cfg.generator_y).ok_or_else(|| {
                Error::InvalidConfig(
                    "true AUC unavailable for this generator pair; ci-coverage needs it".into(),
                )
            })?;
            (0..cfg.reps)
                .into_par_iter()
                .map(|rep| {
                    let d = draw_replication(cfg, rep)?;
                    let r = wmw_test(&d, test_cfg)?;
                    Ok(r.ci_lo <= a && a <= r.ci_hi)
                })
                .collect::<Result<_>>()?
        }
        Estimand::PseudomedianCoverage => {
            let theta = true_pseudomedian(&cfg.generator_x, &cfg.generator_y);
            (0..cfg.reps)
                .into_par_iter()
                .map(|rep| {
                    let d = draw_replication(cfg, rep)?;
                    let r = pseudomedian_ci(&d, test_cfg, DEFAULT_GRID_K)?;
                    Ok(r.ci_lo <= theta && theta <= r.ci_hi)
                })
                .collect::<Result<_>>()?
        }
    };
    let reps = cfg.reps as f64;
    let rate = hits.iter().filter(|&&h| h).count() as f64 / reps;
    Ok(SimSummary {
        mean_a_hat: None,
        sd_a_hat: None,
        rate: Some(rate),
        mc_standard_error: (rate * (1.0 - rate) / reps).sqrt(),
        reps_done: cfg.reps,
    })
}

/// Asymptotic variance constant for two centered normals with scales
/// `sigma1`, `sigma2`: (asin(r1) + asin(r2)) / (2 pi) with
/// r_i = sigma_i^2 / (sigma1^2 + sigma2^2). For equal group sizes,
/// Var(A-hat) is approximately this value divided by the per-group n.
/// Boundary limit 1/4 as r1 -> 0; equal scales give exactly 1/6.
pub fn gaussian_scale_variance(sigma1: f64, sigma2: f64) -> f64 {
    assert!(sigma1 > 0.0 && sigma2 > 0.0, "scales must be positive");
    let s1 = sigma1 * sigma1;
    let s2 = sigma2 * sigma2;
    let r1 = s1 / (s1 + s2);
    let r2 = s2 / (s1 + s2);
    (r1.asin() + r2.asin()) / (2.0 * PI)
}

/// The traditional normal-approximation test of F = G, with the pooled-rank
/// variance (n1 + n2 + 1) / (12 n1 n2) for the standardized statistic.
/// Comparison arm only; miscalibrated when F differs from G in shape while
/// AUC = 0.5.
pub fn classical_fg_pvalue(data: &TwoSampleData) -> f64 {
    let n1 = data.n1() as f64;
    let n2 = data.n2() as f64;
    let a_hat = auc_fast(data).a_hat;
    let sd = ((n1 + n2 + 1.0) / (12.0 * n1 * n2)).sqrt();
    let z = (a_hat - 0.5) / sd;
    (2.0 * (1.0 - normal_cdf(z.abs()))).clamp(0.0, 1.0)
}

/// True AUC = P(X < Y) + P(X = Y)/2 for the supported generator pairs;
/// `None` when no closed or enumerable form is implemented.
pub fn true_auc(gx: &Generator, gy: &Generator) -> Option<f64> {
    use Generator::*;
    if gx == gy {
        // exchangeable pair: P(X < Y) = P(Y < X)
        return Some(0.5);
    }
    match (*gx, *gy) {
        (Normal { mean: m1, sd: s1 }, Normal { mean: m2, sd: s2 }) => {
            Some(normal_cdf((m2 - m1) / (s1 * s1 + s2 * s2).sqrt()))
        }
        (PointMass { at: a }, PointMass { at: b }) => Some(crate::auc::mid_rank_kernel(a, b)),
        (
            x @ (DiscretizedNormal { .. } | PointMass { .. }),
            y @ (DiscretizedNormal { .. } | PointMass { .. }),
        ) => {
            let dx = lattice_dist(&x)?;
            let dy = lattice_dist(&y)?;
            let mut a = 0.0;
            for (vx, px) in &dx {
                for (vy, py) in &dy {
                    a += px * py * crate::auc::mid_rank_kernel(*vx, *vy);
                }
            }
            Some(a)
        }
        (Uniform { lo: a1, hi: b1 }, Uniform { lo: a2, hi: b2 }) => {
            // P(X < Y) = mean of F_X over [a2, b2]
            let h = |t: f64| -> f64 {
                if t <= a1 {
                    0.0
                } else if t < b1 {
                    (t - a1) * (t - a1) / (2.0 * (b1 - a1))
                } else {
                    (t - b1) + 0.5 * (b1 - a1)
                }
            };
            Some((h(b2) - h(a2)) / (b2 - a2))
        }
        _ => None,
    }
}

/// Probability table of a lattice-valued generator, truncated at +/- 12 sd.
fn lattice_dist(g: &Generator) -> Option<Vec<(f64, f64)>> {
    match *g {
        Generator::PointMass { at } => Some(vec![(at, 1.0)]),
        Generator::DiscretizedNormal { mean, sd, step } => {
            let k_lo = ((mean - 12.0 * sd) / step).floor() as i64;
            let k_hi = ((mean + 12.0 * sd) / step).ceil() as i64;
            let mut table = Vec::with_capacity((k_hi - k_lo + 1) as usize);
            let mut total = 0.0;
            for k in k_lo..=k_hi {
                let v = k as f64 * step;
                let p = normal_cdf((v + 0.5 * step - mean) / sd)
                    - normal_cdf((v - 0.5 * step - mean) / sd);
                if p > 0.0 {
                    table.push((v, p));
                    total += p;
                }
            }
            for entry in table.iter_mut() {
                entry.1 /= total;
            }
            Some(table)
        }
        _ => None,
    }
}

/// True pseudomedian median(X - Y) for the supported generators; exact
/// because every member of the family is symmetric about its center, which
/// makes X - Y symmetric about the difference of centers.
pub fn true_pseudomedian(gx: &Generator, gy: &Generator) -> f64 {
    gx.center() - gy.center()
}

/// Named simulation presets addressable from the command line.
pub fn preset(name: &str) -> Option<(SimConfig, TestConfig)> {
    let test_cfg = TestConfig::default();
    let cfg = match name {
        // two centered normals with very different scales: F != G but AUC = 1/2
        "paper-s2" => SimConfig {
            n1: 1000,
            n2: 1000,
            reps: 10_000,
            seed: 1729,
            generator_x: Generator::Normal { mean: 0.0, sd: 0.1 },
            generator_y: Generator::Normal { mean: 0.0, sd: 3.0 },
            estimand: Estimand::AucMeanSd,
        },
        "equal-normals" => SimConfig {
            n1: 50,
            n2: 50,
            reps: 5_000,
            seed: 1729,
            generator_x: Generator::Normal { mean: 0.0, sd: 1.0 },
            generator_y: Generator::Normal { mean: 0.0, sd: 1.0 },
            estimand: Estimand::Type1Rate,
        },
        "tied-normals" => SimConfig {
            n1: 50,
            n2: 50,
            reps: 5_000,
            seed: 1729,
            generator_x: Generator::DiscretizedNormal {
                mean: 0.0,
                sd: 1.0,
                step: 0.5,
            },
            generator_y: Generator::DiscretizedNormal {
                mean: 0.0,
                sd: 1.0,
                step: 0.5,
            },
            estimand: Estimand::Type1Rate,
        },
        _ => return None,
    };
    Some((cfg, test_cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &SimSummary) -> (Option<u64>, Option<u64>, Option<u64>, u64, u64) {
        (
            s.mean_a_hat.map(f64::to_bits),
            s.sd_a_hat.map(f64::to_bits),
            s.rate.map(f64::to_bits),
            s.mc_standard_error.to_bits(),
            s.reps_done,
        )
    }

    #[test]
    fn seed_determinism_across_thread_counts() {
        let cfg = SimConfig {
            n1: 30,
            n2: 40,
            reps: 200,
            seed: 99,
            generator_x: Generator::Normal { mean: 0.0, sd: 1.0 },
            generator_y: Generator::Normal { mean: 0.3, sd: 2.0 },
            estimand: Estimand::AucMeanSd,
        };
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_simulation(&cfg).unwrap());
        let eight = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| run_simulation(&cfg).unwrap());
        let again = run_simulation(&cfg).unwrap();
        assert_eq!(bits(&one), bits(&eight));
        assert_eq!(bits(&one), bits(&again));
    }

    #[test]
    fn point_masses_are_deterministic() {
        let cfg = SimConfig {
            n1: 5,
            n2: 5,
            reps: 50,
            seed: 3,
            generator_x: Generator::PointMass { at: 0.0 },
            generator_y: Generator::PointMass { at: 1.0 },
            estimand: Estimand::AucMeanSd,
        };
        let s = run_simulation(&cfg).unwrap();
        assert_eq!(s.mean_a_hat, Some(1.0));
        assert_eq!(s.sd_a_hat, Some(0.0));
    }

    #[test]
    fn identical_generators_center_on_half() {
        let cfg = SimConfig {
            n1: 40,
            n2: 40,
            reps: 400,
            seed: 11,
            generator_x: Generator::Uniform { lo: 0.0, hi: 1.0 },
            generator_y: Generator::Uniform { lo: 0.0, hi: 1.0 },
            estimand: Estimand::AucMeanSd,
        };
        let s = run_simulation(&cfg).unwrap();
        let mean = s.mean_a_hat.unwrap();
        assert!(
            (mean - 0.5).abs() < 4.0 * s.mc_standard_error,
            "mean = {mean}, mc se = {}",
            s.mc_standard_error
        );
    }

    #[test]
    fn arcsin_constant_anchors() {
        // boundary: one scale vanishes
        assert!((gaussian_scale_variance(1e-9, 1.0) - 0.25).abs() < 1e-6);
        // equal scales: 2 asin(1/2) / (2 pi) = 1/6
        assert!((gaussian_scale_variance(2.5, 2.5) - 1.0 / 6.0).abs() < 1e-12);
        // matches the classical F = G variance (n1+n2+1)/(12 n1 n2) ~ 1/(6n)
        let n = 500.0_f64;
        let classical = (2.0 * n + 1.0) / (12.0 * n * n);
        let arcsin = gaussian_scale_variance(1.0, 1.0) / n;
        assert!((classical - arcsin).abs() / arcsin < 2e-3);
    }

    #[test]
    fn scale_pair_variance_matches_simulation() {
        // per-group n = 200: Var(a_hat) ~ gaussian_scale_variance / n
        let cfg = SimConfig {
            n1: 200,
            n2: 200,
            reps: 2_000,
            seed: 914,
            generator_x: Generator::Normal { mean: 0.0, sd: 0.1 },
            generator_y: Generator::Normal { mean: 0.0, sd: 3.0 },
            estimand: Estimand::AucMeanSd,
        };
        let s = run_simulation(&cfg).unwrap();
        let predicted_sd = (gaussian_scale_variance(0.1, 3.0) / 200.0).sqrt();
        let sd = s.sd_a_hat.unwrap();
        assert!(
            (sd - predicted_sd).abs() / predicted_sd < 0.10,
            "sd = {sd}, predicted = {predicted_sd}"
        );
    }

    #[test]
    fn asymptotic_variance_agreement_over_n() {
        // n * Var(a_hat) approaches the arcsin constant; final gap < 10%
        let target = gaussian_scale_variance(0.1, 3.0);
        let mut last_gap = f64::INFINITY;
        for (n, reps) in [(100, 2000), (400, 2000), (1600, 2000)] {
            let cfg = SimConfig {
                n1: n,
                n2: n,
                reps,
                seed: 515,
                generator_x: Generator::Normal { mean: 0.0, sd: 0.1 },
                generator_y: Generator::Normal { mean: 0.0, sd: 3.0 },
                estimand: Estimand::AucMeanSd,
            };
            let s = run_simulation(&cfg).unwrap();
            let scaled = s.sd_a_hat.unwrap().powi(2) * n as f64;
            let gap = (scaled - target).abs() / target;
            assert!(gap < 0.10, "n = {n}: gap = {gap}");
            last_gap = gap;
        }
        assert!(last_gap < 0.10);
    }

    #[test]
    fn bc_adjusted_variance_approaches_asymptotic_constant() {
        // sigma^2 = zeta1^2/lambda + zeta2^2/(1-lambda) = 2 * arcsin constant
        // at equal group sizes; one large tie-free draw suffices
        let cfg = SimConfig {
            n1: 2000,
            n2: 2000,
            reps: 1,
            seed: 4242,
            generator_x: Generator::Normal { mean: 0.0, sd: 0.1 },
            generator_y: Generator::Normal { mean: 0.0, sd: 3.0 },
            estimand: Estimand::AucMeanSd,
        };
        let d = draw_replication(&cfg, 0).unwrap();
        let bc = crate::variance_bc::bc_variance(&d, 0.5).unwrap();
        let sigma_sq = 2.0 * gaussian_scale_variance(0.1, 3.0);
        assert!(
            (bc.sigma_adj_sq - sigma_sq).abs() / sigma_sq < 0.10,
            "sigma_adj_sq = {}, want ~{sigma_sq}",
            bc.sigma_adj_sq
        );
    }

    #[test]
    fn eu_variance_approaches_asymptotic_constant() {
        // n * var_tilde estimates sigma^2 for large samples
        let cfg = SimConfig {
            n1: 2000,
            n2: 2000,
            reps: 1,
            seed: 777,
            generator_x: Generator::Normal { mean: 0.0, sd: 0.1 },
            generator_y: Generator::Normal { mean: 0.0, sd: 3.0 },
            estimand: Estimand::AucMeanSd,
        };
        let d = draw_replication(&cfg, 0).unwrap();
        let s = crate::auc::kernel_summaries(&d).unwrap();
        let ev = crate::variance_eu::eu_variance(&s, &d).unwrap();
        let sigma_sq = 2.0 * gaussian_scale_variance(0.1, 3.0);
        let scaled = ev.var_tilde * d.n() as f64;
        assert!(
            (scaled - sigma_sq).abs() / sigma_sq < 0.10,
            "n * var_tilde = {scaled}, want ~{sigma_sq}"
        );
    }

    #[test]
    fn p_values_under_null_are_near_uniform() {
        // Kolmogorov-Smirnov band check at desk scale
        let cfg = SimConfig {
            n1: 50,
            n2: 50,
            reps: 2000,
            seed: 31337,
            generator_x: Generator::Normal { mean: 0.0, sd: 1.0 },
            generator_y: Generator::Normal { mean: 0.0, sd: 1.0 },
            estimand: Estimand::Type1Rate,
        };
        let test_cfg = TestConfig::default();
        let mut p_values: Vec<f64> = (0..cfg.reps)
            .map(|rep| {
                let d = draw_replication(&cfg, rep).unwrap();
                wmw_test(&d, &test_cfg).unwrap().p_value
            })
            .collect();
        p_values.sort_by(f64::total_cmp);
        let n = p_values.len() as f64;
        let ks = p_values
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let ecdf_hi = (i + 1) as f64 / n;
                let ecdf_lo = i as f64 / n;
                (ecdf_hi - p).abs().max((p - ecdf_lo).abs())
            })
            .fold(0.0_f64, f64::max);
        // 1% KS band plus slack for the finite-sample t reference
        let band = 1.63 / n.sqrt() + 0.01;
        assert!(ks < band, "KS = {ks:.4}, band = {band:.4}");
    }

    #[test]
    fn pseudomedian_ci_width_shrinks_with_n() {
        let width_at = |n: usize, seed: u64| -> f64 {
            let cfg = SimConfig {
                n1: n,
                n2: n,
                reps: 20,
                seed,
                generator_x: Generator::Normal { mean: 1.0, sd: 1.0 },
                generator_y: Generator::Normal { mean: 0.0, sd: 1.0 },
                estimand: Estimand::PseudomedianCoverage,
            };
            let total: f64 = (0..cfg.reps)
                .map(|rep| {
                    let d = draw_replication(&cfg, rep).unwrap();
                    let r = pseudomedian_ci(&d, &TestConfig::default(), 128).unwrap();
                    r.ci_hi - r.ci_lo
                })
                .sum();
            total / cfg.reps as f64
        };
        let small = width_at(30, 6060);
        let large = width_at(120, 6060);
        assert!(
            large < small,
            "mean width should shrink: n=30 gives {small}, n=120 gives {large}"
        );
    }

    #[test]
    fn tied_ci_coverage_in_band() {
        let (mut cfg, test_cfg) = preset("tied-normals").unwrap();
        cfg.estimand = Estimand::CiCoverage;
        cfg.reps = 2000;
        let s = coverage_study(&cfg, &test_cfg).unwrap();
        let coverage = s.rate.unwrap();
        assert!((0.92..=0.98).contains(&coverage), "coverage = {coverage}");
    }

    #[test]
    fn type1_rate_equal_normals_smoke() {
        let (mut cfg, test_cfg) = preset("equal-normals").unwrap();
        cfg.reps = 600;
        let s = coverage_study(&cfg, &test_cfg).unwrap();
        let rate = s.rate.unwrap();
        assert!(rate > 0.02 && rate < 0.10, "rate = {rate}");
    }

    #[test]
    fn ci_coverage_needs_known_truth() {
        let cfg = SimConfig {
            n1: 10,
            n2: 10,
            reps: 5,
            seed: 1,
            generator_x: Generator::Uniform { lo: 0.0, hi: 1.0 },
            generator_y: Generator::Normal { mean: 0.0, sd: 1.0 },
            estimand: Estimand::CiCoverage,
        };
        assert!(matches!(
            coverage_study(&cfg, &TestConfig::default()),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn true_auc_closed_forms() {
        let n01 = Generator::Normal { mean: 0.0, sd: 1.0 };
        let n11 = Generator::Normal { mean: 1.0, sd: 1.0 };
        let want = normal_cdf((0.0 - 1.0) / 2.0_f64.sqrt());
        assert_eq!(true_auc(&n11, &n01), Some(want));
        assert_eq!(true_auc(&n01, &n01), Some(0.5));
        assert_eq!(
            true_auc(
                &Generator::PointMass { at: 2.0 },
                &Generator::PointMass { at: 2.0 }
            ),
            Some(0.5)
        );
        assert_eq!(
            true_auc(
                &Generator::PointMass { at: 1.0 },
                &Generator::PointMass { at: 2.0 }
            ),
            Some(1.0)
        );
        // uniforms: X ~ U(0,1), Y ~ U(0.5, 1.5): P(X<Y) = 1 - 1/8 - ... = 0.875
        let got = true_auc(
            &Generator::Uniform { lo: 0.0, hi: 1.0 },
            &Generator::Uniform { lo: 0.5, hi: 1.5 },
        )
        .unwrap();
        assert!((got - 0.875).abs() < 1e-12, "got {got}");
        // discretized normals vs shifted point mass: sanity via symmetry
        let dn = Generator::DiscretizedNormal {
            mean: 0.0,
            sd: 1.0,
            step: 0.5,
        };
        let a = true_auc(&dn, &Generator::PointMass { at: 0.0 }).unwrap();
        assert!((a - 0.5).abs() < 1e-10, "a = {a}");
    }

    #[test]
    fn true_pseudomedian_is_center_difference() {
        let gx = Generator::Normal { mean: 1.0, sd: 1.0 };
        let gy = Generator::Normal { mean: 0.0, sd: 1.0 };
        assert_eq!(true_pseudomedian(&gx, &gy), 1.0);
        assert_eq!(
            true_pseudomedian(
                &Generator::Uniform { lo: 0.0, hi: 2.0 },
                &Generator::PointMass { at: 0.5 }
            ),
            0.5
        );
    }

    #[test]
    fn classical_pvalue_smoke() {
        let d = validate(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((classical_fg_pvalue(&d) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn presets_resolve() {
        for name in ["paper-s2", "equal-normals", "tied-normals"] {
            assert!(preset(name).is_some(), "{name}");
        }
        assert!(preset("nonsense").is_none());
    }
}
