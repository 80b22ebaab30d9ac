//! Two-sample inference for the hypothesis AUC = A0.
//!
//! The Wilcoxon-Mann-Whitney statistic, standardized to the empirical AUC,
//! tests whether P(X < Y) + P(X = Y)/2 equals a null value A0 — not whether
//! the two distributions are equal. This crate provides:
//!
//! - the empirical AUC over the mid-rank kernel, with an O(n log n) rank
//!   path and an O(n1 n2) oracle that agree exactly ([`auc`]);
//! - two variance frameworks: a tie-robust finite-sample combination that
//!   is the default for all data ([`variance_eu`]), and a placement-based
//!   bias-corrected construction for continuous data ([`variance_bc`]);
//! - tests, p-values, and confidence intervals with Student-t or normal
//!   references ([`inference`]);
//! - Hodges-Lehmann pseudomedian intervals by test inversion
//!   ([`pseudomedian`]);
//! - a seeded, parallelism-invariant Monte Carlo lab for calibration and
//!   coverage studies ([`mclab`]).

pub mod auc;
pub mod error;
pub mod inference;
pub mod mclab;
pub mod pseudomedian;
pub mod sample;
pub mod special;
pub mod variance_bc;
pub mod variance_eu;

pub use auc::{
    auc_bruteforce, auc_fast, kernel_summaries, kernel_summaries_with_cell_limit, placements,
    AucEstimate, KernelSummaries, Placements,
};
pub use error::{Error, Result, SampleId};
pub use inference::{pvalue, wmw_test, Alternative, Df, Method, TestConfig, TestResult};
pub use mclab::{
    coverage_study, draw_replication, gaussian_scale_variance, preset, run_simulation, Estimand,
    Generator, SimConfig, SimSummary,
};
pub use pseudomedian::{mad_scale, pseudomedian_ci, pseudomedian_estimate, PseudomedianResult};
pub use sample::{midranks, validate, MidRankTable, Sample, TwoSampleData};
pub use variance_bc::{bc_components, bc_variance, BcVariance};
pub use variance_eu::{
    eu_df, eu_variance, exact_variance_enumerator, population_components, DiscreteDist,
    EnumeratedExpectations, EuVariance, PopulationComponents,
};
