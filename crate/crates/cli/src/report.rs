//! Machine-readable report document.
//!
//! Every number the tool prints in a text table is also present here, and
//! every floating value is rounded to six significant digits *before*
//! serialization, so a given configuration and input set always produces a
//! byte-identical `report.json`. Field order is fixed by declaration order.
//! The output directory is deliberately not part of the document: two runs
//! that differ only in `--out` must compare equal.

use serde::Serialize;
use xbicorr_core::bicorr::{Epoch, ExclusionRule, WindowPlan, WindowTestResult};
use xbicorr_core::prewhiten::{ArFit, VarFit};
use xbicorr_core::summary::{SummaryStats, TestResult};
use xbicorr_core::unitroot::{AdfResult, DetTerms};

/// Round to six significant digits, normalizing negative zero.
///
/// Round-trips through the scientific-notation formatter, so the result is
/// the nearest representable double to the six-digit decimal.
pub fn round6(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    if x == 0.0 {
        return 0.0;
    }
    let r: f64 = format!("{x:.5e}").parse().expect("formatted float reparses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn r6(x: f64) -> f64 {
    round6(x)
}

#[derive(Serialize, Debug)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: Parameters,
    pub series: Vec<SeriesReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairReport>,
}

impl RunReport {
    pub fn new(command: &str, parameters: Parameters) -> Self {
        RunReport {
            tool: "xbicorr",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            parameters,
            series: Vec::new(),
            pairs: Vec::new(),
        }
    }
}

/// The effective configuration, echoed back for reproducibility. Stage
/// parameters that a subcommand does not use stay absent.
#[derive(Serialize, Debug, Default)]
pub struct Parameters {
    pub inputs: Vec<String>,
    pub date_col: String,
    pub price_col: String,
    pub date_format: String,
    pub lenient: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lags: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bds_grid: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exclusion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directions: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub combination: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lag_depth: Option<usize>,
}

#[derive(Serialize, Debug)]
pub struct SeriesReport {
    pub name: String,
    pub source: String,
    /// Price rows after parsing and (when several inputs) alignment.
    pub observations: usize,
    pub dropped_rows: usize,
    pub returns_n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<SummaryDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adf: Option<AdfDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ar: Option<ArDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonlin: Option<Vec<TestDto>>,
}

#[derive(Serialize, Debug)]
pub struct SummaryDto {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub jarque_bera: TestDto,
}

impl SummaryDto {
    pub fn from_core(s: &SummaryStats) -> Self {
        SummaryDto {
            n: s.n,
            mean: r6(s.mean),
            sd: r6(s.sd),
            skewness: r6(s.skewness),
            kurtosis: r6(s.kurtosis),
            jarque_bera: TestDto::from_core(&s.jarque_bera),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct TestDto {
    pub name: String,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub reject_1pct: bool,
    pub reject_5pct: bool,
    pub reject_10pct: bool,
}

impl TestDto {
    pub fn from_core(t: &TestResult) -> Self {
        TestDto {
            name: t.name.clone(),
            statistic: r6(t.statistic),
            dof: t.dof,
            p_value: r6(t.p_value),
            reject_1pct: t.reject_at.at_1pct,
            reject_5pct: t.reject_at.at_5pct,
            reject_10pct: t.reject_at.at_10pct,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct AdfDto {
    pub statistic: f64,
    pub lags: usize,
    pub det: String,
    pub cv_1pct: f64,
    pub cv_5pct: f64,
    pub cv_10pct: f64,
    pub reject_1pct: bool,
    pub reject_5pct: bool,
    pub reject_10pct: bool,
}

impl AdfDto {
    pub fn from_core(a: &AdfResult) -> Self {
        AdfDto {
            statistic: r6(a.statistic),
            lags: a.lags_used,
            det: det_name(a.spec).to_string(),
            cv_1pct: a.critical_values.at_1pct,
            cv_5pct: a.critical_values.at_5pct,
            cv_10pct: a.critical_values.at_10pct,
            reject_1pct: a.reject_at.at_1pct,
            reject_5pct: a.reject_at.at_5pct,
            reject_10pct: a.reject_at.at_10pct,
        }
    }
}

pub fn det_name(d: DetTerms) -> &'static str {
    match d {
        DetTerms::Constant => "c",
        DetTerms::ConstantTrend => "ct",
    }
}

#[derive(Serialize, Debug)]
pub struct ArDto {
    pub order: usize,
    pub bic: f64,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
}

impl ArDto {
    pub fn from_core(f: &ArFit) -> Self {
        ArDto {
            order: f.order,
            bic: r6(f.bic),
            intercept: r6(f.intercept),
            coefficients: f.coefficients.iter().map(|&c| r6(c)).collect(),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct VarDto {
    pub order: usize,
    pub bic: f64,
    pub intercepts: [f64; 2],
    /// `coef_matrices[j][eq][var]` is the lag-(j+1) coefficient of
    /// variable `var` in equation `eq` (0 = x, 1 = y).
    pub coef_matrices: Vec<[[f64; 2]; 2]>,
}

impl VarDto {
    pub fn from_core(f: &VarFit) -> Self {
        VarDto {
            order: f.order,
            bic: r6(f.bic),
            intercepts: [r6(f.intercepts.0), r6(f.intercepts.1)],
            coef_matrices: f
                .coef_matrices
                .iter()
                .map(|m| {
                    [
                        [r6(m[0][0]), r6(m[0][1])],
                        [r6(m[1][0]), r6(m[1][1])],
                    ]
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct PlanDto {
    pub total_n: usize,
    pub exponent: f64,
    pub window_length: usize,
    pub window_count: usize,
    pub lag_depth: usize,
    pub exclusion: String,
}

impl PlanDto {
    pub fn from_core(p: &WindowPlan) -> Self {
        PlanDto {
            total_n: p.total_n,
            exponent: p.exponent,
            window_length: p.window_length,
            window_count: p.window_count,
            lag_depth: p.lag_depth,
            exclusion: exclusion_name(p.exclusion_rule).to_string(),
        }
    }
}

pub fn exclusion_name(rule: ExclusionRule) -> &'static str {
    match rule {
        ExclusionRule::DofConsistent => "dof",
        ExclusionRule::DiagonalBand => "band",
    }
}

#[derive(Serialize, Debug)]
pub struct WindowDto {
    pub index: usize,
    pub start: String,
    pub end: String,
    pub direction: &'static str,
    pub h_xy: f64,
    pub h_xy_dof: usize,
    pub h_xy_p: f64,
    pub h_xxy: f64,
    pub h_xxy_dof: usize,
    pub h_xxy_p: f64,
    /// Per-direction verdict: this direction's H_xxy p-value below α.
    pub significant: bool,
}

impl WindowDto {
    pub fn from_core(w: &WindowTestResult, alpha: f64) -> Self {
        WindowDto {
            index: w.window_index,
            start: w.start_date.to_string(),
            end: w.end_date.to_string(),
            direction: w.direction.as_str(),
            h_xy: r6(w.h_xy),
            h_xy_dof: w.h_xy_dof,
            h_xy_p: r6(w.h_xy_pvalue),
            h_xxy: r6(w.h_xxy),
            h_xxy_dof: w.h_xxy_dof,
            h_xxy_p: r6(w.h_xxy_pvalue),
            significant: w.h_xxy_pvalue < alpha,
        }
    }

    /// 1 − p for the stem plots, rounded like everything else.
    pub fn one_minus_p(&self) -> f64 {
        r6(1.0 - self.h_xxy_p)
    }
}

#[derive(Serialize, Debug)]
pub struct EpochDto {
    pub start: String,
    pub one_minus_p: f64,
}

impl EpochDto {
    pub fn from_core(e: &Epoch) -> Self {
        EpochDto {
            start: e.start_date.to_string(),
            one_minus_p: r6(e.one_minus_p),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct PairReport {
    pub x: String,
    pub y: String,
    pub var: VarDto,
    pub pearson_returns: f64,
    pub pearson_residuals: f64,
    pub plan: PlanDto,
    pub alpha: f64,
    pub significant_count: usize,
    pub significant_fraction: f64,
    pub significant_percent: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub significant_xy: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub significant_yx: Option<usize>,
    pub degenerate_windows: Vec<usize>,
    pub windows: Vec<WindowDto>,
    pub epochs: Vec<EpochDto>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round6_keeps_six_significant_digits() {
        assert_eq!(round6(1699.8912345), 1699.89);
        assert_eq!(round6(-1699.8912345), -1699.89);
        assert_eq!(round6(0.000123456789), 1.23457e-4);
        assert_eq!(round6(123456789.0), 123457000.0);
        assert_eq!(round6(1.0), 1.0);
    }

    #[test]
    fn round6_normalizes_zero_signs_and_passes_non_finite() {
        assert_eq!(round6(-0.0).to_bits(), 0.0f64.to_bits());
        assert_eq!(round6(0.0).to_bits(), 0.0f64.to_bits());
        assert!(round6(f64::NAN).is_nan());
        assert_eq!(round6(f64::INFINITY), f64::INFINITY);
    }

    #[test]
    fn round6_is_idempotent() {
        for &x in &[3.14159265, -2.718281828e-7, 9.999995e5, 1.0 / 3.0] {
            let once = round6(x);
            assert_eq!(round6(once), once, "x = {x}");
        }
    }
}
