//! Descriptive statistics (mean, sd, skewness, kurtosis, Jarque-Bera) and
//! Pearson correlation.
//!
//! Moment conventions: skewness and kurtosis are built from population-style
//! central moments (divide by n), the reported standard deviation uses the
//! sample divisor n − 1, and kurtosis is raw (Gaussian = 3), not excess.
//! The Jarque-Bera statistic is (n/6)·(S² + (K−3)²/4) with an asymptotic
//! χ²₂ p-value.

use crate::error::{Error, Result};
use crate::ingest::ReturnSeries;
use crate::statmath::chi2_sf;

/// Rejection indicators at the three conventional significance levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RejectAt {
    pub at_1pct: bool,
    pub at_5pct: bool,
    pub at_10pct: bool,
}

impl RejectAt {
    /// Threshold a p-value at 1%, 5%, and 10%.
    pub fn from_p_value(p: f64) -> Self {
        RejectAt {
            at_1pct: p < 0.01,
            at_5pct: p < 0.05,
            at_10pct: p < 0.10,
        }
    }
}

/// Uniform record of a hypothesis-test outcome.
///
/// `dof` holds the chi-square degrees of freedom where that is the null
/// distribution; for the asymptotically normal BDS statistic it carries the
/// embedding dimension as a descriptor instead.
#[derive(Debug, Clone)]
pub struct TestResult {
    pub name: String,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub reject_at: RejectAt,
}

impl TestResult {
    /// Assemble a result whose null distribution is χ² with `dof` degrees
    /// of freedom.
    pub fn from_chi2(name: impl Into<String>, statistic: f64, dof: usize) -> Result<Self> {
        let p_value = chi2_sf(statistic, dof)?;
        Ok(TestResult {
            name: name.into(),
            statistic,
            dof,
            p_value,
            reject_at: RejectAt::from_p_value(p_value),
        })
    }
}

/// Descriptive statistics of a return series.
#[derive(Debug, Clone)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor n − 1).
    pub sd: f64,
    /// m₃ / m₂^{3/2} with population central moments.
    pub skewness: f64,
    /// Raw kurtosis m₄ / m₂² (Gaussian = 3).
    pub kurtosis: f64,
    pub jarque_bera: TestResult,
}

/// Minimum sample size for the moment statistics.
const MIN_DESCRIBE_LEN: usize = 4;

/// Descriptive statistics of a return series (see [`describe_values`]).
pub fn describe(r: &ReturnSeries) -> Result<SummaryStats> {
    describe_values(&r.values)
}

/// Descriptive statistics of a raw sample.
///
/// # Errors
/// - `SeriesTooShort` for fewer than 4 observations.
/// - `DegenerateSeries` when the sample variance is zero.
pub fn describe_values(values: &[f64]) -> Result<SummaryStats> {
    let n = values.len();
    if n < MIN_DESCRIBE_LEN {
        return Err(Error::SeriesTooShort {
            needed: MIN_DESCRIBE_LEN,
            got: n,
        });
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for v in values {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    if m2 <= 0.0 {
        return Err(Error::DegenerateSeries(
            "zero variance in describe".into(),
        ));
    }
    let sd = (m2 * nf / (nf - 1.0)).sqrt();
    let skewness = m3 / m2.powf(1.5);
    let kurtosis = m4 / (m2 * m2);
    let jb = nf / 6.0 * (skewness * skewness + (kurtosis - 3.0).powi(2) / 4.0);
    let jarque_bera = TestResult::from_chi2("jarque_bera", jb, 2)?;
    Ok(SummaryStats {
        n,
        mean,
        sd,
        skewness,
        kurtosis,
        jarque_bera,
    })
}

/// Sample Pearson correlation coefficient.
///
/// # Errors
/// - `DimensionMismatch` for unequal lengths.
/// - `SeriesTooShort` for fewer than 3 observations.
/// - `DegenerateSeries` when either argument has zero variance.
///
/// # Examples
/// ```
/// let r = xbicorr_core::summary::pearson_corr(
///     &[1.0, 2.0, 3.0, 4.0],
///     &[1.0, 3.0, 2.0, 4.0],
/// ).unwrap();
/// assert!((r - 0.8).abs() < 1e-12);
/// ```
pub fn pearson_corr(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::SeriesTooShort { needed: 3, got: n });
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::DegenerateSeries(
            "zero variance in pearson_corr".into(),
        ));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}
