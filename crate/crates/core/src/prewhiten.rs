//! AR(p) and bivariate VAR(p) pre-whitening by OLS with BIC order
//! selection.
//!
//! Every nonlinearity test downstream runs on pre-whitened residuals, so
//! surviving dependence cannot be blamed on linear autocorrelation. Order
//! selection compares all candidate orders on the same effective sample
//! (the first p_max observations are held out for lags in every candidate)
//! and breaks ties toward the smaller order; the reported fit is then
//! re-estimated on the full usable sample.

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::ingest::ReturnSeries;
use crate::statmath::ols;

/// A univariate autoregression fitted by OLS.
#[derive(Debug, Clone)]
pub struct ArFit {
    pub order: usize,
    pub intercept: f64,
    /// Lag coefficients, index 0 = lag 1.
    pub coefficients: Vec<f64>,
    /// Length n − order.
    pub residuals: Vec<f64>,
    /// n·ln(σ̂²_MLE) + (order + 1)·ln(n) on the fitted sample.
    pub bic: f64,
}

/// A bivariate vector autoregression fitted equation by equation.
#[derive(Debug, Clone)]
pub struct VarFit {
    pub order: usize,
    /// Intercepts of the (x, y) equations.
    pub intercepts: (f64, f64),
    /// One 2×2 matrix per lag: `coef_matrices[j][eq][var]` is the
    /// coefficient of variable `var` (0 = x, 1 = y) at lag j+1 in
    /// equation `eq`.
    pub coef_matrices: Vec<[[f64; 2]; 2]>,
    /// Residuals of the (x, y) equations, each of length n − order.
    pub residuals: (Vec<f64>, Vec<f64>),
    /// System BIC: ln det(Σ̂_MLE) + k·ln(n)/n with k = 2(2p + 1).
    pub bic: f64,
}

/// Residuals carrying the calendar dates of the observations they explain,
/// so window boundaries downstream map back to real time.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSeries {
    pub name: String,
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

impl ResidualSeries {
    /// Bundle residuals with their dates.
    ///
    /// # Errors
    /// `DimensionMismatch` when dates and values differ in length.
    pub fn new(name: impl Into<String>, dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::DimensionMismatch {
                left: dates.len(),
                right: values.len(),
            });
        }
        Ok(ResidualSeries {
            name: name.into(),
            dates,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_ar_length(n: usize, p: usize) -> Result<()> {
    if n <= p + 10 {
        return Err(Error::SeriesTooShort {
            needed: p + 11,
            got: n,
        });
    }
    Ok(())
}

/// Fit an AR(p) by OLS on the full usable sample (n − p observations).
/// With p = 0 the residuals are simply the demeaned series.
///
/// # Errors
/// `SeriesTooShort` unless n > p + 10; `RankDeficient` on degenerate
/// designs (e.g. constant input).
pub fn fit_ar(y: &[f64], p: usize) -> Result<ArFit> {
    check_ar_length(y.len(), p)?;
    let fit = ar_regression(y, p, p)?;
    Ok(ArFit {
        order: p,
        intercept: fit.coefficients[0],
        coefficients: fit.coefficients[1..].to_vec(),
        residuals: fit.residuals,
        bic: fit.bic,
    })
}

fn ar_regression(y: &[f64], p: usize, start: usize) -> Result<crate::statmath::OlsFit> {
    debug_assert!(start >= p);
    let rows = y.len() - start;
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(p + 1);
    columns.push(vec![1.0; rows]);
    for lag in 1..=p {
        columns.push(y[start - lag..y.len() - lag].to_vec());
    }
    ols(&columns, &y[start..])
}

/// Choose the AR order minimizing BIC over p ∈ {0..p_max}, every candidate
/// fitted on the common effective sample of n − p_max observations. Ties
/// break toward the smaller order.
pub fn select_ar_order(y: &[f64], p_max: usize) -> Result<usize> {
    check_ar_length(y.len(), p_max)?;
    let mut best_p = 0usize;
    let mut best_bic = f64::INFINITY;
    for p in 0..=p_max {
        let fit = ar_regression(y, p, p_max)?;
        if fit.bic < best_bic {
            best_bic = fit.bic;
            best_p = p;
        }
    }
    Ok(best_p)
}

fn check_var_length(n: usize, p: usize) -> Result<()> {
    if n <= 2 * p + 10 {
        return Err(Error::SeriesTooShort {
            needed: 2 * p + 11,
            got: n,
        });
    }
    Ok(())
}

/// Fit a bivariate VAR(p) equation by equation: each variable is regressed
/// on an intercept and p lags of both variables. With p = 0 the residuals
/// are the demeaned inputs.
///
/// # Errors
/// `DimensionMismatch` for unequal input lengths; `SeriesTooShort` unless
/// n > 2p + 10; `RankDeficient`/`DegenerateSeries` on degenerate designs.
pub fn fit_var(x: &[f64], y: &[f64], p: usize) -> Result<VarFit> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    check_var_length(x.len(), p)?;
    let (fit_x, fit_y) = var_regressions(x, y, p, p)?;

    let mut coef_matrices = Vec::with_capacity(p);
    for j in 0..p {
        // Column layout after the intercept: lag-1 x, lag-1 y, lag-2 x, ...
        coef_matrices.push([
            [fit_x.coefficients[1 + 2 * j], fit_x.coefficients[2 + 2 * j]],
            [fit_y.coefficients[1 + 2 * j], fit_y.coefficients[2 + 2 * j]],
        ]);
    }
    let bic = system_bic(&fit_x.residuals, &fit_y.residuals, p)?;
    Ok(VarFit {
        order: p,
        intercepts: (fit_x.coefficients[0], fit_y.coefficients[0]),
        coef_matrices,
        residuals: (fit_x.residuals, fit_y.residuals),
        bic,
    })
}

fn var_regressions(
    x: &[f64],
    y: &[f64],
    p: usize,
    start: usize,
) -> Result<(crate::statmath::OlsFit, crate::statmath::OlsFit)> {
    debug_assert!(start >= p);
    let n = x.len();
    let rows = n - start;
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(2 * p + 1);
    columns.push(vec![1.0; rows]);
    for lag in 1..=p {
        columns.push(x[start - lag..n - lag].to_vec());
        columns.push(y[start - lag..n - lag].to_vec());
    }
    Ok((ols(&columns, &x[start..])?, ols(&columns, &y[start..])?))
}

/// System BIC: ln det(Σ̂_MLE) + k·ln(n)/n, k = 2(2p + 1), where Σ̂_MLE is
/// the MLE residual covariance of the two equations.
fn system_bic(ex: &[f64], ey: &[f64], p: usize) -> Result<f64> {
    let n = ex.len() as f64;
    let sxx: f64 = ex.iter().map(|e| e * e).sum::<f64>() / n;
    let syy: f64 = ey.iter().map(|e| e * e).sum::<f64>() / n;
    let sxy: f64 = ex.iter().zip(ey).map(|(a, b)| a * b).sum::<f64>() / n;
    let det = sxx * syy - sxy * sxy;
    // Relative threshold: perfectly collinear residuals leave a det of
    // pure rounding noise (~1e-30·s_xx·s_yy), which ln() would happily
    // turn into a huge negative BIC instead of an error.
    if det <= 1e-12 * sxx * syy {
        return Err(Error::DegenerateSeries(
            "singular residual covariance in VAR fit".into(),
        ));
    }
    let k = 2.0 * (2.0 * p as f64 + 1.0);
    Ok(det.ln() + k * n.ln() / n)
}

/// Choose the VAR order minimizing the system BIC over p ∈ {0..p_max} on
/// the common effective sample; ties break toward the smaller order.
pub fn select_var_order(x: &[f64], y: &[f64], p_max: usize) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    check_var_length(x.len(), p_max)?;
    let mut best_p = 0usize;
    let mut best_bic = f64::INFINITY;
    for p in 0..=p_max {
        let (fx, fy) = var_regressions(x, y, p, p_max)?;
        let bic = system_bic(&fx.residuals, &fy.residuals, p)?;
        if bic < best_bic {
            best_bic = bic;
            best_p = p;
        }
    }
    Ok(best_p)
}

/// BIC-select an AR order, fit it on the full sample, and return the fit
/// together with dated residuals (the first `order` dates are consumed by
/// the lags).
pub fn prewhiten_univariate(r: &ReturnSeries, p_max: usize) -> Result<(ArFit, ResidualSeries)> {
    let order = select_ar_order(&r.values, p_max)?;
    let fit = fit_ar(&r.values, order)?;
    let residuals = ResidualSeries::new(
        r.name.clone(),
        r.dates[order..].to_vec(),
        fit.residuals.clone(),
    )?;
    Ok((fit, residuals))
}

/// BIC-select a VAR order for the pair, fit it on the full sample, and
/// return the fit plus dated residual series for both variables.
///
/// # Errors
/// `DimensionMismatch` when the two return series are not aligned on the
/// same dates (align before pre-whitening).
pub fn prewhiten_pair(
    x: &ReturnSeries,
    y: &ReturnSeries,
    p_max: usize,
) -> Result<(VarFit, ResidualSeries, ResidualSeries)> {
    if x.dates != y.dates {
        return Err(Error::DimensionMismatch {
            left: x.dates.len(),
            right: y.dates.len(),
        });
    }
    let order = select_var_order(&x.values, &y.values, p_max)?;
    let fit = fit_var(&x.values, &y.values, order)?;
    let dates = x.dates[order..].to_vec();
    let res_x = ResidualSeries::new(x.name.clone(), dates.clone(), fit.residuals.0.clone())?;
    let res_y = ResidualSeries::new(y.name.clone(), dates, fit.residuals.1.clone())?;
    Ok((fit, res_x, res_y))
}
