//! Detection of localized nonlinear co-movement ("epochs") between pairs of
//! financial return series.
//!
//! The pipeline mirrors the classic windowed cross-bicorrelation workflow:
//!
//! 1. [`ingest`] — load dated price series from CSV, align on common dates,
//!    transform to continuously compounded percentage returns.
//! 2. [`summary`] — descriptive statistics (mean, sd, skewness, kurtosis,
//!    Jarque-Bera) and Pearson correlations.
//! 3. [`unitroot`] — augmented Dickey-Fuller stationarity checks.
//! 4. [`prewhiten`] — AR(p)/VAR(p) fits with BIC order selection; all
//!    downstream tests run on the residuals so surviving dependence is
//!    attributable to nonlinearity.
//! 5. [`nonlin`] — the McLeod-Li, Engle LM, and BDS batteries.
//! 6. [`bicorr`] — the windowed second-order cross-correlation and
//!    third-order cross-bicorrelation scan with per-window chi-square
//!    p-values and epoch reporting.
//!
//! [`statmath`] supplies the shared numerical substrate (OLS, ln-gamma,
//! chi-square and normal survival functions) and [`sim`] provides the
//! deterministic generators used by the CLI's `simulate` subcommand, the
//! benchmarks, and the statistical test suites.
//!
//! All public functions are pure: they share no mutable state and are safe
//! to call concurrently. The windowed scan parallelizes internally across
//! windows while keeping output deterministic (results are keyed by window
//! index, never by completion order).

pub mod bicorr;
pub mod error;
pub mod ingest;
pub mod nonlin;
pub mod prewhiten;
pub mod sim;
pub mod statmath;
pub mod summary;
pub mod unitroot;

pub use bicorr::{
    cross_bicorr, cross_corr, included_pairs, plan_windows, run_xbicorr, standardize_window,
    window_test, Combination, Direction, DirectionSet, Epoch, ExclusionRule, WindowPlan,
    WindowStats, WindowTestResult, XBicorrConfig, XBicorrReport,
};
pub use error::{Error, Result};
pub use ingest::{align, load_price_csv, to_returns, AlignedPanel, CsvSchema, PriceSeries, ReturnSeries};
pub use nonlin::{
    bds, bds_components, correlation_integral, engle_lm, mcleod_li, BdsComponents, BdsConfig,
};
pub use prewhiten::{
    fit_ar, fit_var, prewhiten_pair, prewhiten_univariate, select_ar_order, select_var_order,
    ArFit, ResidualSeries, VarFit,
};
pub use statmath::{chi2_sf, ln_gamma, normal_sf, ols, OlsFit};
pub use summary::{describe, describe_values, pearson_corr, RejectAt, SummaryStats, TestResult};
pub use unitroot::{adf, adf_fixed, schwert_max_lags, AdfResult, CriticalValues, DetTerms};
