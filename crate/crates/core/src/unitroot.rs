//! Augmented Dickey-Fuller unit-root test with BIC lag selection and fixed
//! large-sample critical values.
//!
//! The fitted regression is
//! Δy_t = α (+ βt) + γ·y_{t−1} + Σ_{i=1..p} δᵢ·Δy_{t−i} + ε_t,
//! the statistic is the t-ratio γ̂/se(γ̂), and rejection compares it with
//! the asymptotic Dickey-Fuller critical values for the chosen
//! deterministic-terms specification. Lag order is picked by BIC over a
//! common effective sample so candidate fits are comparable.

use crate::error::{Error, Result};
use crate::statmath::{ols, OlsFit};
use crate::summary::RejectAt;

/// Deterministic terms included in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetTerms {
    /// Intercept only.
    Constant,
    /// Intercept and linear trend (the default throughout the pipeline;
    /// the quoted −3.96/−3.41/−3.12 critical values belong to this case).
    ConstantTrend,
}

/// Critical values at the three conventional significance levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalValues {
    pub at_1pct: f64,
    pub at_5pct: f64,
    pub at_10pct: f64,
}

/// Large-sample Dickey-Fuller critical values (constant + trend).
const CV_CONSTANT_TREND: CriticalValues = CriticalValues {
    at_1pct: -3.96,
    at_5pct: -3.41,
    at_10pct: -3.12,
};

/// Large-sample Dickey-Fuller critical values (constant only).
const CV_CONSTANT: CriticalValues = CriticalValues {
    at_1pct: -3.43,
    at_5pct: -2.86,
    at_10pct: -2.57,
};

impl DetTerms {
    /// The fixed asymptotic critical values for this specification.
    pub fn critical_values(self) -> CriticalValues {
        match self {
            DetTerms::Constant => CV_CONSTANT,
            DetTerms::ConstantTrend => CV_CONSTANT_TREND,
        }
    }
}

/// Outcome of the augmented Dickey-Fuller test.
#[derive(Debug, Clone)]
pub struct AdfResult {
    /// t-ratio on the lagged level, γ̂/se(γ̂).
    pub statistic: f64,
    /// Augmentation order p actually used.
    pub lags_used: usize,
    pub spec: DetTerms,
    pub critical_values: CriticalValues,
    /// Rejection of the unit-root null: statistic < critical value.
    pub reject_at: RejectAt,
}

/// Schwert's rule of thumb for the largest augmentation order:
/// floor(12·(n/100)^{1/4}).
pub fn schwert_max_lags(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Augmented Dickey-Fuller test with the lag order chosen by BIC over
/// p ∈ {0..max_lags}, all candidates compared on the common effective
/// sample, then refit on the full usable sample.
///
/// # Errors
/// `SeriesTooShort` unless len(y) > max_lags + 10; `RankDeficient` for
/// degenerate inputs such as a constant series.
pub fn adf(y: &[f64], max_lags: usize, spec: DetTerms) -> Result<AdfResult> {
    check_length(y.len(), max_lags)?;
    let dy = diff(y);

    let mut best_p = 0usize;
    let mut best_bic = f64::INFINITY;
    for p in 0..=max_lags {
        let fit = adf_regression(y, &dy, p, max_lags, spec)?;
        if fit.bic < best_bic {
            best_bic = fit.bic;
            best_p = p;
        }
    }
    build_result(y, &dy, best_p, spec)
}

/// Augmented Dickey-Fuller test at a fixed augmentation order (no
/// selection step). Useful for cross-checking against other
/// implementations with a pinned lag.
pub fn adf_fixed(y: &[f64], lags: usize, spec: DetTerms) -> Result<AdfResult> {
    check_length(y.len(), lags)?;
    let dy = diff(y);
    build_result(y, &dy, lags, spec)
}

fn check_length(n: usize, lags: usize) -> Result<()> {
    if n <= lags + 10 {
        return Err(Error::SeriesTooShort {
            needed: lags + 11,
            got: n,
        });
    }
    Ok(())
}

fn diff(y: &[f64]) -> Vec<f64> {
    y.windows(2).map(|w| w[1] - w[0]).collect()
}

fn build_result(y: &[f64], dy: &[f64], p: usize, spec: DetTerms) -> Result<AdfResult> {
    let fit = adf_regression(y, dy, p, p, spec)?;
    let level_idx = match spec {
        DetTerms::Constant => 1,
        DetTerms::ConstantTrend => 2,
    };
    let statistic = fit.coefficients[level_idx] / fit.std_errors[level_idx];
    let critical_values = spec.critical_values();
    let reject_at = RejectAt {
        at_1pct: statistic < critical_values.at_1pct,
        at_5pct: statistic < critical_values.at_5pct,
        at_10pct: statistic < critical_values.at_10pct,
    };
    Ok(AdfResult {
        statistic,
        lags_used: p,
        spec,
        critical_values,
        reject_at,
    })
}

/// Fit the ADF regression with augmentation order `p`, using differenced
/// observations from index `start` on (start = p_max puts every candidate
/// on the same effective sample; start = p uses the full usable sample).
fn adf_regression(
    y: &[f64],
    dy: &[f64],
    p: usize,
    start: usize,
    spec: DetTerms,
) -> Result<OlsFit> {
    debug_assert!(start >= p);
    let rows = dy.len() - start;
    let response: Vec<f64> = dy[start..].to_vec();

    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(p + 3);
    columns.push(vec![1.0; rows]);
    if spec == DetTerms::ConstantTrend {
        // Centered trend: same span as the raw index, better conditioned.
        let mean_t = (start + dy.len() - 1) as f64 / 2.0;
        columns.push((start..dy.len()).map(|i| i as f64 - mean_t).collect());
    }
    columns.push(y[start..dy.len()].to_vec());
    for lag in 1..=p {
        columns.push(dy[start - lag..dy.len() - lag].to_vec());
    }

    ols(&columns, &response)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(n: usize, seed: u64) -> Vec<f64> {
        let mut x = seed;
        (0..n)
            .map(|_| {
                x = (1103515245u64.wrapping_mul(x).wrapping_add(12345)) % (1u64 << 31);
                x as f64 / (1u64 << 31) as f64
            })
            .collect()
    }

    fn shocks() -> Vec<f64> {
        lcg(400, 123456789).iter().map(|u| u - 0.5).collect()
    }

    #[test]
    fn matches_reference_statistics() {
        // Frozen against an independent ADF implementation on the shared
        // LCG stream (fixed lags, no selection).
        let e = shocks();
        let cases = [
            (0usize, DetTerms::ConstantTrend, -2.2023682521024003e+01),
            (2, DetTerms::ConstantTrend, -1.1138024463549494e+01),
            (5, DetTerms::ConstantTrend, -7.9646125151256815e+00),
            (0, DetTerms::Constant, -2.2000486146346272e+01),
            (2, DetTerms::Constant, -1.1085000407365895e+01),
        ];
        for (lags, spec, want) in cases {
            let r = adf_fixed(&e, lags, spec).unwrap();
            assert!(
                (r.statistic - want).abs() < 1e-8,
                "lags={lags} spec={spec:?}: got {}, want {want}",
                r.statistic
            );
            assert_eq!(r.lags_used, lags);
        }
    }

    #[test]
    fn random_walk_reference_and_no_rejection() {
        let e = shocks();
        let mut w = Vec::with_capacity(e.len());
        let mut acc = 0.0;
        for v in &e {
            acc += v;
            w.push(acc);
        }
        let r = adf_fixed(&w, 3, DetTerms::ConstantTrend).unwrap();
        assert!((r.statistic - -1.7117555066918004e+00).abs() < 1e-8);
        assert!(!r.reject_at.at_10pct);
    }

    #[test]
    fn constant_series_is_rank_deficient() {
        let y = vec![5.0; 50];
        assert!(matches!(
            adf(&y, 2, DetTerms::ConstantTrend),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn too_short_series_rejected() {
        let y = vec![1.0; 12];
        assert!(matches!(
            adf(&y, 2, DetTerms::ConstantTrend),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn invariant_to_level_shift_and_trend() {
        let e = shocks();
        let base = adf_fixed(&e, 2, DetTerms::ConstantTrend).unwrap().statistic;

        let shifted: Vec<f64> = e.iter().map(|v| v + 250.0).collect();
        let s = adf_fixed(&shifted, 2, DetTerms::ConstantTrend).unwrap().statistic;
        assert!((s - base).abs() < 1e-8, "level shift moved the statistic");

        let trended: Vec<f64> = e.iter().enumerate().map(|(i, v)| v + 0.3 * i as f64).collect();
        let t = adf_fixed(&trended, 2, DetTerms::ConstantTrend).unwrap().statistic;
        assert!((t - base).abs() < 1e-8, "trend moved the statistic");

        // Constant-only spec: invariant to level shifts.
        let base_c = adf_fixed(&e, 2, DetTerms::Constant).unwrap().statistic;
        let s_c = adf_fixed(&shifted, 2, DetTerms::Constant).unwrap().statistic;
        assert!((s_c - base_c).abs() < 1e-8);
    }

    #[test]
    fn critical_values_are_the_published_constants() {
        let cv = DetTerms::ConstantTrend.critical_values();
        assert_eq!(cv.at_1pct, -3.96);
        assert_eq!(cv.at_5pct, -3.41);
        assert_eq!(cv.at_10pct, -3.12);
        let cv = DetTerms::Constant.critical_values();
        assert_eq!(cv.at_1pct, -3.43);
        assert_eq!(cv.at_5pct, -2.86);
        assert_eq!(cv.at_10pct, -2.57);
    }

    #[test]
    fn rejection_flags_track_the_statistic() {
        let e = shocks();
        let r = adf_fixed(&e, 0, DetTerms::ConstantTrend).unwrap();
        // A wildly stationary series rejects everywhere.
        assert!(r.reject_at.at_1pct && r.reject_at.at_5pct && r.reject_at.at_10pct);
        assert_eq!(r.reject_at.at_5pct, r.statistic < r.critical_values.at_5pct);
    }

    #[test]
    fn selection_stays_within_bounds_and_uses_full_sample_refit() {
        let e = shocks();
        let max = schwert_max_lags(e.len());
        let r = adf(&e, max, DetTerms::ConstantTrend).unwrap();
        assert!(r.lags_used <= max);
        // The refit at the selected order must equal the fixed-lag run.
        let fixed = adf_fixed(&e, r.lags_used, DetTerms::ConstantTrend).unwrap();
        assert_eq!(r.statistic, fixed.statistic);
    }

    #[test]
    fn schwert_rule_values() {
        assert_eq!(schwert_max_lags(100), 12);
        assert_eq!(schwert_max_lags(1000), 21);
        assert_eq!(schwert_max_lags(4277), 30);
    }

    #[test]
    fn adf_design_residuals_orthogonal() {
        // The invariant is inherited from the OLS core; exercise it once on
        // an ADF-shaped design.
        let e = shocks();
        let dy: Vec<f64> = e.windows(2).map(|w| w[1] - w[0]).collect();
        let fit = super::adf_regression(&e, &dy, 3, 3, DetTerms::ConstantTrend).unwrap();
        // Rebuild the columns to dot them with the residuals.
        let rows = dy.len() - 3;
        let mean_t = (3 + dy.len() - 1) as f64 / 2.0;
        let cols: Vec<Vec<f64>> = vec![
            vec![1.0; rows],
            (3..dy.len()).map(|i| i as f64 - mean_t).collect(),
            e[3..dy.len()].to_vec(),
            dy[2..dy.len() - 1].to_vec(),
            dy[1..dy.len() - 2].to_vec(),
            dy[0..dy.len() - 3].to_vec(),
        ];
        for col in &cols {
            let g: f64 = col.iter().zip(&fit.residuals).map(|(a, b)| a * b).sum();
            assert!(g.abs() / (rows as f64) < 1e-8);
        }
    }
}
