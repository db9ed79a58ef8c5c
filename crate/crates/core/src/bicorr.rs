//! Windowed cross-correlation / cross-bicorrelation scan.
//!
//! The residual sample is split into non-overlapping windows of length
//! n_w = ⌊N^c⌋. Each window is standardized in isolation, then tested for
//! second-order dependence,
//! H_xy = Σ_{r=1..L} (n_w − r)·C²_xy(r), and third-order dependence,
//! H_xxy = Σ_{(r,s)} (n_w − m)·C²_xxy(r, s) with m = max(r, |s|), where
//! C_xxy(r, s) = (n_w − m)⁻¹·Σ_t x(t)·x(t + r)·y(t + s). Both statistics
//! are asymptotically χ² under the pure-white-noise null, with degrees of
//! freedom equal to the number of summed terms; windows whose H_xxy
//! p-value falls below α are the reported "epochs" of nonlinear
//! co-movement.
//!
//! Windows are mutually independent, so the scan evaluates them in
//! parallel; results are keyed by window index and therefore identical
//! regardless of scheduling.

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::prewhiten::ResidualSeries;
use crate::statmath::chi2_sf;
use crate::summary::pearson_corr;

/// Which (r, s) lag pairs enter H_xxy.
///
/// The grid is r ∈ 1..=L, s ∈ −L..=L. The two rules differ in what they
/// drop from it; the degrees of freedom are always the exact cardinality
/// of the surviving set, never a formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExclusionRule {
    /// Exclude s = 0 and s = r: the pure third-order contemporaneous and
    /// diagonal terms. Leaves exactly L(2L − 1) pairs, matching the
    /// statistic's advertised degrees of freedom.
    #[default]
    DofConsistent,
    /// Exclude the whole band |r − s| ≤ 1, a stricter variant that also
    /// drops the off-by-one terms. Leaves 2L² − 2L + 1 pairs.
    DiagonalBand,
}

/// Which conditioning variable is doubled in the third moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// C_xxy: products of lagged x explain y.
    XOnY,
    /// C_yyx: products of lagged y explain x.
    YOnX,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::XOnY => "xy",
            Direction::YOnX => "yx",
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The set of directions a scan evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DirectionSet {
    XOnY,
    YOnX,
    #[default]
    Both,
}

impl DirectionSet {
    pub fn directions(self) -> &'static [Direction] {
        match self {
            DirectionSet::XOnY => &[Direction::XOnY],
            DirectionSet::YOnX => &[Direction::YOnX],
            DirectionSet::Both => &[Direction::XOnY, Direction::YOnX],
        }
    }

    pub fn len(self) -> usize {
        self.directions().len()
    }

    pub fn is_empty(self) -> bool {
        false
    }
}

/// How per-direction p-values combine into one per-window verdict when
/// both directions are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Combination {
    /// Significant if either direction rejects (combined p = min).
    #[default]
    Either,
    /// Significant only if both directions reject (combined p = max).
    Both,
}

/// The N → (window length, window count, lag depth) partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowPlan {
    pub total_n: usize,
    /// The exponent c in n_w = ⌊N^c⌋, constrained to (0, 0.5).
    pub exponent: f64,
    pub window_length: usize,
    /// Number of full windows; a trailing partial window is dropped.
    pub window_count: usize,
    /// Maximum lag scanned inside each window: max(2, ⌊n_w^c⌋).
    pub lag_depth: usize,
    pub exclusion_rule: ExclusionRule,
}

/// The two H statistics of one window in one direction, with their exact
/// degrees of freedom and χ² p-values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStats {
    pub h_xy: f64,
    pub h_xy_dof: usize,
    pub h_xy_pvalue: f64,
    pub h_xxy: f64,
    pub h_xxy_dof: usize,
    pub h_xxy_pvalue: f64,
}

/// One window's statistics placed in calendar time.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowTestResult {
    pub window_index: usize,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    pub direction: Direction,
    pub h_xy: f64,
    pub h_xy_dof: usize,
    pub h_xy_pvalue: f64,
    pub h_xxy: f64,
    pub h_xxy_dof: usize,
    pub h_xxy_pvalue: f64,
}

/// A window that rejected the white-noise null, reported as the date it
/// opens plus 1 − p (the conventional plotting height).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epoch {
    pub start_date: NaiveDate,
    pub one_minus_p: f64,
}

/// Scan configuration; `Default` gives c = 0.4, α = 0.05, both
/// directions combined by "either", and the plan's own lag depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XBicorrConfig {
    pub exponent: f64,
    pub alpha: f64,
    pub exclusion_rule: ExclusionRule,
    pub directions: DirectionSet,
    pub combination: Combination,
    /// Overrides the plan's lag depth when set; must satisfy
    /// 2 ≤ L < n_w/2.
    pub lag_depth: Option<usize>,
}

impl Default for XBicorrConfig {
    fn default() -> Self {
        XBicorrConfig {
            exponent: 0.4,
            alpha: 0.05,
            exclusion_rule: ExclusionRule::default(),
            directions: DirectionSet::default(),
            combination: Combination::default(),
            lag_depth: None,
        }
    }
}

/// Full result of scanning one pair of residual series.
#[derive(Debug, Clone, PartialEq)]
pub struct XBicorrReport {
    /// (x name, y name).
    pub pair: (String, String),
    pub plan: WindowPlan,
    pub alpha: f64,
    /// Every tested window × direction, ordered by window index with the
    /// x-on-y entry first where both directions ran.
    pub per_window: Vec<WindowTestResult>,
    /// Indices of zero-variance windows that were flagged and skipped.
    pub degenerate_windows: Vec<usize>,
    /// Windows significant under the configured combination rule.
    pub significant_count: usize,
    /// significant_count over the number of non-degenerate windows.
    pub significant_fraction: f64,
    /// Windows with the x-on-y H_xxy p-value below α, when that
    /// direction was evaluated.
    pub significant_xy: Option<usize>,
    /// Windows with the y-on-x H_xxy p-value below α, when that
    /// direction was evaluated.
    pub significant_yx: Option<usize>,
    /// Pearson correlation of the two full residual series.
    pub pearson: f64,
    /// (start date, 1 − combined p) for each significant window.
    pub epochs: Vec<Epoch>,
}

/// Enumerate the (r, s) pairs that enter H_xxy at the given lag depth.
pub fn included_pairs(lag_depth: usize, rule: ExclusionRule) -> Vec<(usize, i64)> {
    let l = lag_depth as i64;
    let mut pairs = Vec::new();
    for r in 1..=l {
        for s in -l..=l {
            let excluded = match rule {
                ExclusionRule::DofConsistent => s == 0 || s == r,
                ExclusionRule::DiagonalBand => (r - s).abs() <= 1,
            };
            if !excluded {
                pairs.push((r as usize, s));
            }
        }
    }
    pairs
}

/// Partition a sample of `total_n` observations into non-overlapping
/// windows of length ⌊total_n^c⌋ with lag depth max(2, ⌊n_w^c⌋).
///
/// # Errors
/// `BadExponent` unless 0 < c < 0.5; `SeriesTooShort` below 64
/// observations.
///
/// # Examples
/// ```
/// use xbicorr_core::bicorr::{plan_windows, ExclusionRule};
/// let plan = plan_windows(4277, 0.4, ExclusionRule::default()).unwrap();
/// assert_eq!((plan.window_length, plan.window_count), (28, 152));
/// assert_eq!(plan.lag_depth, 3);
/// ```
pub fn plan_windows(total_n: usize, c: f64, rule: ExclusionRule) -> Result<WindowPlan> {
    if !(c > 0.0 && c < 0.5) {
        return Err(Error::BadExponent(c));
    }
    const MIN_TOTAL: usize = 64;
    if total_n < MIN_TOTAL {
        return Err(Error::SeriesTooShort {
            needed: MIN_TOTAL,
            got: total_n,
        });
    }
    let window_length = (total_n as f64).powf(c).floor() as usize;
    let window_count = total_n / window_length;
    let lag_depth = ((window_length as f64).powf(c).floor() as usize).max(2);
    Ok(WindowPlan {
        total_n,
        exponent: c,
        window_length,
        window_count,
        lag_depth,
        exclusion_rule: rule,
    })
}

/// Center and scale a window to sample mean 0 and sample sd 1
/// (divisor n − 1).
///
/// # Errors
/// `SeriesTooShort` below 3 observations; `DegenerateWindow` on zero
/// variance. Standalone calls report window index 0 in the error — the
/// scan re-tags it with the true position.
///
/// # Examples
/// ```
/// let z = xbicorr_core::bicorr::standardize_window(&[1.0, 2.0, 3.0]).unwrap();
/// assert_eq!(z, vec![-1.0, 0.0, 1.0]);
/// ```
pub fn standardize_window(w: &[f64]) -> Result<Vec<f64>> {
    let n = w.len();
    if n < 3 {
        return Err(Error::SeriesTooShort { needed: 3, got: n });
    }
    let nf = n as f64;
    let mean = w.iter().sum::<f64>() / nf;
    let var = w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    if var <= 0.0 || !var.is_finite() {
        return Err(Error::DegenerateWindow { index: 0 });
    }
    let sd = var.sqrt();
    Ok(w.iter().map(|v| (v - mean) / sd).collect())
}

/// Second-order cross-correlation of standardized windows:
/// C_xy(r) = (n_w − r)⁻¹·Σ_{t} x(t)·y(t + r), r ≥ 1.
///
/// # Errors
/// `DimensionMismatch` on unequal lengths; `DomainError` for r = 0;
/// `LagTooLarge` for r ≥ n_w.
pub fn cross_corr(x_w: &[f64], y_w: &[f64], r: usize) -> Result<f64> {
    let n = x_w.len();
    if n != y_w.len() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: y_w.len(),
        });
    }
    if r == 0 {
        return Err(Error::DomainError(
            "cross_corr excludes the contemporaneous lag r = 0".into(),
        ));
    }
    if r >= n {
        return Err(Error::LagTooLarge { lag: r, len: n });
    }
    let sum: f64 = x_w[..n - r].iter().zip(&y_w[r..]).map(|(a, b)| a * b).sum();
    Ok(sum / (n - r) as f64)
}

/// Third-order cross-bicorrelation of standardized windows:
/// C_xxy(r, s) = (n_w − m)⁻¹·Σ_t x(t)·x(t + r)·y(t + s) with
/// m = max(r, |s|), summing over every t that keeps all three indices in
/// range. s may be negative; the normalizer always uses m = max(r, |s|),
/// even though for s < 0 the in-range addend count is n_w − r − |s|.
///
/// # Errors
/// `DimensionMismatch` on unequal lengths; `DomainError` for r = 0;
/// `LagTooLarge` when a lag leaves no valid t.
pub fn cross_bicorr(x_w: &[f64], y_w: &[f64], r: usize, s: i64) -> Result<f64> {
    let n = x_w.len();
    if n != y_w.len() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: y_w.len(),
        });
    }
    if r == 0 {
        return Err(Error::DomainError(
            "cross_bicorr requires r ≥ 1 (the (0, 0) term is excluded)".into(),
        ));
    }
    let m = r.max(s.unsigned_abs() as usize);
    // The t-range is empty when m ≥ n (s ≥ 0) or when the x-lag and the
    // negative y-lag jointly span the window (s < 0).
    let span = if s < 0 {
        r + s.unsigned_abs() as usize
    } else {
        m
    };
    if span >= n {
        return Err(Error::LagTooLarge { lag: span, len: n });
    }
    let lo = (-s).max(0) as usize;
    let hi = ((n - 1 - r) as i64).min(n as i64 - 1 - s) as usize;
    let mut sum = 0.0;
    for t in lo..=hi {
        sum += x_w[t] * x_w[t + r] * y_w[(t as i64 + s) as usize];
    }
    Ok(sum / (n - m) as f64)
}

/// Standardize one window pair and compute both H statistics.
///
/// H_xy sums (n_w − r)·C²_xy(r) over r = 1..=L (dof = L); H_xxy sums
/// (n_w − m)·C²_xxy(r, s) over the included lag set (dof = its exact
/// cardinality). p-values come from the χ² survival function.
///
/// # Errors
/// `DimensionMismatch`; `LagTooLarge` unless 2 ≤ L and 2L < n_w;
/// `DegenerateWindow` from standardization.
pub fn window_test(
    x_w: &[f64],
    y_w: &[f64],
    lag_depth: usize,
    rule: ExclusionRule,
) -> Result<WindowStats> {
    let n = x_w.len();
    if n != y_w.len() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: y_w.len(),
        });
    }
    if lag_depth < 2 || 2 * lag_depth >= n {
        return Err(Error::LagTooLarge {
            lag: lag_depth,
            len: n,
        });
    }
    let xs = standardize_window(x_w)?;
    let ys = standardize_window(y_w)?;
    let nf = n as f64;

    let mut h_xy = 0.0;
    for r in 1..=lag_depth {
        let c = cross_corr(&xs, &ys, r)?;
        h_xy += (nf - r as f64) * c * c;
    }
    let h_xy_dof = lag_depth;
    let h_xy_pvalue = chi2_sf(h_xy, h_xy_dof)?;

    let pairs = included_pairs(lag_depth, rule);
    let mut h_xxy = 0.0;
    for &(r, s) in &pairs {
        let m = r.max(s.unsigned_abs() as usize);
        let c = cross_bicorr(&xs, &ys, r, s)?;
        h_xxy += (nf - m as f64) * c * c;
    }
    let h_xxy_dof = pairs.len();
    let h_xxy_pvalue = chi2_sf(h_xxy, h_xxy_dof)?;

    Ok(WindowStats {
        h_xy,
        h_xy_dof,
        h_xy_pvalue,
        h_xxy,
        h_xxy_dof,
        h_xxy_pvalue,
    })
}

enum WindowOutcome {
    Degenerate,
    Tested(Vec<WindowTestResult>),
}

/// Run the full windowed scan over a pair of residual series.
///
/// Every window is tested in each requested direction (x-on-y evaluates
/// C_xxy, y-on-x evaluates C_yyx); a window is significant when its
/// combined H_xxy p-value (min across directions for
/// [`Combination::Either`], max for [`Combination::Both`]) falls below α.
/// Zero-variance windows are flagged, skipped, and removed from the
/// denominator of `significant_fraction`. Windows are evaluated in
/// parallel; the report is ordered by window index and is identical
/// across runs and thread counts.
///
/// # Errors
/// `DimensionMismatch` on unequal lengths; `DomainError` on mismatched
/// date indices or α outside (0, 1); planning and per-window errors
/// propagate.
pub fn run_xbicorr(
    x: &ResidualSeries,
    y: &ResidualSeries,
    config: &XBicorrConfig,
) -> Result<XBicorrReport> {
    if x.values.len() != y.values.len() {
        return Err(Error::DimensionMismatch {
            left: x.values.len(),
            right: y.values.len(),
        });
    }
    if x.dates != y.dates {
        return Err(Error::DomainError(
            "residual series must share one date index".into(),
        ));
    }
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::DomainError(format!(
            "alpha must lie in (0, 1), got {}",
            config.alpha
        )));
    }

    let mut plan = plan_windows(x.values.len(), config.exponent, config.exclusion_rule)?;
    if let Some(l) = config.lag_depth {
        plan.lag_depth = l;
    }
    let n_w = plan.window_length;
    let lag = plan.lag_depth;
    if lag < 2 || 2 * lag >= n_w {
        return Err(Error::LagTooLarge { lag, len: n_w });
    }

    let directions = config.directions.directions();
    let outcomes: Vec<WindowOutcome> = (0..plan.window_count)
        .into_par_iter()
        .map(|k| -> Result<WindowOutcome> {
            let lo = k * n_w;
            let hi = lo + n_w;
            let x_w = &x.values[lo..hi];
            let y_w = &y.values[lo..hi];
            let start_date = x.dates[lo];
            let end_date = x.dates[hi - 1];
            let mut results = Vec::with_capacity(directions.len());
            for &direction in directions {
                let stats = match direction {
                    Direction::XOnY => window_test(x_w, y_w, lag, plan.exclusion_rule),
                    Direction::YOnX => window_test(y_w, x_w, lag, plan.exclusion_rule),
                };
                match stats {
                    Ok(s) => results.push(WindowTestResult {
                        window_index: k,
                        start_date,
                        end_date,
                        direction,
                        h_xy: s.h_xy,
                        h_xy_dof: s.h_xy_dof,
                        h_xy_pvalue: s.h_xy_pvalue,
                        h_xxy: s.h_xxy,
                        h_xxy_dof: s.h_xxy_dof,
                        h_xxy_pvalue: s.h_xxy_pvalue,
                    }),
                    Err(Error::DegenerateWindow { .. }) => return Ok(WindowOutcome::Degenerate),
                    Err(e) => return Err(e),
                }
            }
            Ok(WindowOutcome::Tested(results))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut per_window = Vec::with_capacity(plan.window_count * directions.len());
    let mut degenerate_windows = Vec::new();
    let mut epochs = Vec::new();
    let mut significant_count = 0usize;
    let mut count_xy = 0usize;
    let mut count_yx = 0usize;
    for (k, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            WindowOutcome::Degenerate => degenerate_windows.push(k),
            WindowOutcome::Tested(results) => {
                let combined = match config.combination {
                    Combination::Either => results
                        .iter()
                        .map(|r| r.h_xxy_pvalue)
                        .fold(f64::INFINITY, f64::min),
                    Combination::Both => results
                        .iter()
                        .map(|r| r.h_xxy_pvalue)
                        .fold(f64::NEG_INFINITY, f64::max),
                };
                if combined < config.alpha {
                    significant_count += 1;
                    epochs.push(Epoch {
                        start_date: results[0].start_date,
                        one_minus_p: 1.0 - combined,
                    });
                }
                for r in results {
                    if r.h_xxy_pvalue < config.alpha {
                        match r.direction {
                            Direction::XOnY => count_xy += 1,
                            Direction::YOnX => count_yx += 1,
                        }
                    }
                    per_window.push(r);
                }
            }
        }
    }

    let tested = plan.window_count - degenerate_windows.len();
    let significant_fraction = if tested > 0 {
        significant_count as f64 / tested as f64
    } else {
        0.0
    };
    let has = |d: Direction| directions.contains(&d);
    let pearson = pearson_corr(&x.values, &y.values)?;

    Ok(XBicorrReport {
        pair: (x.name.clone(), y.name.clone()),
        plan,
        alpha: config.alpha,
        per_window,
        degenerate_windows,
        significant_count,
        significant_fraction,
        significant_xy: has(Direction::XOnY).then_some(count_xy),
        significant_yx: has(Direction::YOnX).then_some(count_yx),
        pearson,
        epochs,
    })
}
