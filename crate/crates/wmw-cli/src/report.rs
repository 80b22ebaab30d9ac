//! Report construction and serialization.
//!
//! JSON is the source of truth: fields serialize in declaration order and
//! every finite float is written with 17 significant digits (`{:.16e}`), so
//! a report is byte-stable across runs and round-trips to the exact double.
//! The text rendering formats the same values for humans.

use serde::Serialize;
use std::io::Write;
use wmw_core::{Df, PseudomedianResult, SimSummary, TestResult};

#[derive(Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub input: InputSummary,
    pub result: ResultBody,
    pub warnings: Vec<String>,
}

#[derive(Serialize, Default)]
pub struct InputSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_y: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternative: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimand: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator_x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator_y: Option<String>,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum ResultBody {
    Test(TestBody),
    Pseudomedian(PseudomedianBody),
    Simulation(SimulationBody),
}

#[derive(Serialize)]
pub struct TestBody {
    pub a_hat: f64,
    pub se: f64,
    pub df: DfField,
    pub statistic: f64,
    pub p_value: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub method: String,
}

/// Serializes as the numeric df, or the string "normal".
pub struct DfField(pub Df);

impl Serialize for DfField {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Df::Student(df) => serializer.serialize_f64(df),
            Df::Normal => serializer.serialize_str("normal"),
        }
    }
}

#[derive(Serialize)]
pub struct PseudomedianBody {
    pub theta_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub grid_k: usize,
    pub search_lo: f64,
    pub search_hi: f64,
    pub refined: bool,
}

#[derive(Serialize)]
pub struct SimulationBody {
    pub estimand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_a_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sd_a_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    pub mc_standard_error: f64,
    pub reps_done: u64,
}

impl Report {
    pub fn from_test(input: InputSummary, r: &TestResult) -> Report {
        Report {
            schema_version: "1",
            command: "test",
            input,
            result: ResultBody::Test(TestBody {
                a_hat: r.a_hat,
                se: r.se,
                df: DfField(r.df),
                statistic: r.statistic,
                p_value: r.p_value,
                ci_lo: r.ci_lo,
                ci_hi: r.ci_hi,
                method: r.method.to_string(),
            }),
            warnings: r.warnings.clone(),
        }
    }

    pub fn from_pseudomedian(input: InputSummary, r: &PseudomedianResult) -> Report {
        Report {
            schema_version: "1",
            command: "pseudomedian",
            input,
            result: ResultBody::Pseudomedian(PseudomedianBody {
                theta_hat: r.theta_hat,
                ci_lo: r.ci_lo,
                ci_hi: r.ci_hi,
                grid_k: r.grid_k,
                search_lo: r.search_lo,
                search_hi: r.search_hi,
                refined: r.refined,
            }),
            warnings: r.warnings.clone(),
        }
    }

    pub fn from_simulation(input: InputSummary, estimand: &str, s: &SimSummary) -> Report {
        Report {
            schema_version: "1",
            command: "simulate",
            input,
            result: ResultBody::Simulation(SimulationBody {
                estimand: estimand.to_string(),
                mean_a_hat: s.mean_a_hat,
                sd_a_hat: s.sd_a_hat,
                rate: s.rate,
                mc_standard_error: s.mc_standard_error,
                reps_done: s.reps_done,
            }),
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigitFormatter);
        self.serialize(&mut ser)
            .expect("report serialization cannot fail");
        out.push(b'\n');
        String::from_utf8(out).expect("json output is utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = &mut s;
        use std::fmt::Write as _;
        match &self.result {
            ResultBody::Test(t) => {
                let _ = writeln!(
                    w,
                    "wmw test of H0: AUC = {} ({}, method {})",
                    fmt_opt(self.input.a0),
                    self.input.alternative.as_deref().unwrap_or("two-sided"),
                    t.method
                );
                let _ = writeln!(
                    w,
                    "  n1 = {}, n2 = {}",
                    fmt_usize(self.input.n1),
                    fmt_usize(self.input.n2)
                );
                let _ = writeln!(w, "  AUC estimate  {:.6}", t.a_hat);
                let _ = writeln!(w, "  std error     {:.6}", t.se);
                match t.df.0 {
                    Df::Student(df) => {
                        let _ = writeln!(w, "  df            {df:.3}");
                    }
                    Df::Normal => {
                        let _ = writeln!(w, "  df            normal");
                    }
                }
                let _ = writeln!(w, "  statistic     {:.6}", t.statistic);
                let _ = writeln!(w, "  p-value       {:.6}", t.p_value);
                let _ = writeln!(
                    w,
                    "  {:.0}% CI        [{:.6}, {:.6}]",
                    self.input.alpha.map_or(95.0, |a| 100.0 * (1.0 - a)),
                    t.ci_lo,
                    t.ci_hi
                );
            }
            ResultBody::Pseudomedian(p) => {
                let _ = writeln!(w, "pseudomedian (Hodges-Lehmann) via test inversion");
                let _ = writeln!(
                    w,
                    "  n1 = {}, n2 = {}",
                    fmt_usize(self.input.n1),
                    fmt_usize(self.input.n2)
                );
                let _ = writeln!(w, "  estimate      {:.6}", p.theta_hat);
                let _ = writeln!(
                    w,
                    "  {:.0}% CI        [{:.6}, {:.6}]",
                    self.input.alpha.map_or(95.0, |a| 100.0 * (1.0 - a)),
                    p.ci_lo,
                    p.ci_hi
                );
                let _ = writeln!(
                    w,
                    "  search        [{:.6}, {:.6}], grid {} points, refined {}",
                    p.search_lo, p.search_hi, p.grid_k, p.refined
                );
            }
            ResultBody::Simulation(sim) => {
                let _ = writeln!(w, "simulation ({})", sim.estimand);
                if let Some(p) = &self.input.preset {
                    let _ = writeln!(w, "  preset        {p}");
                }
                let _ = writeln!(
                    w,
                    "  n1 = {}, n2 = {}, reps = {}, seed = {}",
                    fmt_usize(self.input.n1),
                    fmt_usize(self.input.n2),
                    sim.reps_done,
                    self.input
                        .seed
                        .map_or_else(|| "-".into(), |s| s.to_string())
                );
                if let Some(m) = sim.mean_a_hat {
                    let _ = writeln!(w, "  mean AUC      {m:.7}");
                }
                if let Some(sd) = sim.sd_a_hat {
                    let _ = writeln!(w, "  sd AUC        {sd:.7}");
                }
                if let Some(r) = sim.rate {
                    let _ = writeln!(w, "  rate          {r:.4}");
                }
                let _ = writeln!(w, "  mc std error  {:.3e}", sim.mc_standard_error);
            }
        }
        for warning in &self.warnings {
            let _ = writeln!(w, "  warning: {warning}");
        }
        s
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x}"))
}

fn fmt_usize(v: Option<usize>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

/// JSON formatter writing every finite f64 with 17 significant digits.
struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}
