//! Self-contained numerical substrate: OLS regression, ln-gamma, and the
//! chi-square / standard-normal survival functions used by every test.
//!
//! Nothing here knows about time series; the routines are pure functions
//! kept deliberately small because downstream problem sizes are tiny
//! (designs with at most a few dozen regressors, chi-square dof below ~100).

use crate::error::{Error, Result};

/// Lanczos coefficients, g = 7, 9-term series (double-precision set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_TWO_PI: f64 = 0.918_938_533_204_672_74;

/// Natural log of the gamma function for x > 0.
///
/// Lanczos approximation with reflection for x < 0.5; relative error is
/// well below 1e-12 over the domain exercised here.
///
/// # Errors
/// `DomainError` when `x <= 0` or `x` is not finite.
///
/// # Examples
/// ```
/// let v = xbicorr_core::statmath::ln_gamma(6.0).unwrap();
/// assert!((v - 120f64.ln()).abs() < 1e-12);
/// ```
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::DomainError(format!(
            "ln_gamma requires x > 0, got {x}"
        )));
    }
    if x < 0.5 {
        // Reflection: ln Γ(x) = ln(π / sin(πx)) − ln Γ(1 − x), valid on (0, 0.5).
        let reflected = ln_gamma_core(1.0 - x);
        return Ok((std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln() - reflected);
    }
    Ok(ln_gamma_core(x))
}

fn ln_gamma_core(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_TWO_PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// Iteration cap shared by the incomplete-gamma series and continued fraction.
const MAX_ITER: usize = 500;

/// Regularized lower incomplete gamma P(a, x) by power series.
///
/// Converges fastest for x < a + 1.
fn gamma_p_series(a: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let ln_ga = ln_gamma(a)?;
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut del = sum;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * f64::EPSILON {
            return Ok(sum * (-x + a * x.ln() - ln_ga).exp());
        }
    }
    Err(Error::ConvergenceFailure("incomplete-gamma series"))
}

/// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
/// fraction. Converges fastest for x >= a + 1.
fn gamma_q_cf(a: f64, x: f64) -> Result<f64> {
    const FPMIN: f64 = f64::MIN_POSITIVE / f64::EPSILON;
    let ln_ga = ln_gamma(a)?;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok((-x + a * x.ln() - ln_ga).exp() * h);
        }
    }
    Err(Error::ConvergenceFailure("incomplete-gamma continued fraction"))
}

/// Regularized upper incomplete gamma Q(a, x) = 1 − P(a, x), a > 0, x >= 0.
///
/// Dispatches between the series and the continued fraction on the usual
/// x < a + 1 boundary so each is used only where it converges quickly.
pub fn gamma_q(a: f64, x: f64) -> Result<f64> {
    if !a.is_finite() || a <= 0.0 || !x.is_finite() || x < 0.0 {
        return Err(Error::DomainError(format!(
            "gamma_q requires a > 0 and x >= 0, got a={a}, x={x}"
        )));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < a + 1.0 {
        Ok(1.0 - gamma_p_series(a, x)?)
    } else {
        gamma_q_cf(a, x)
    }
}

/// Survival function of the chi-square distribution with `k` degrees of
/// freedom: P(χ²_k > x).
///
/// # Errors
/// `DomainError` for negative or non-finite `x`, or `k == 0`.
///
/// # Examples
/// ```
/// // For k = 2 the survival function is exactly exp(−x/2).
/// let p = xbicorr_core::statmath::chi2_sf(2.0 * 2f64.ln(), 2).unwrap();
/// assert!((p - 0.5).abs() < 1e-14);
/// ```
pub fn chi2_sf(x: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::DomainError(
            "chi-square needs at least 1 degree of freedom".into(),
        ));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::DomainError(format!(
            "chi-square statistic must be finite and non-negative, got {x}"
        )));
    }
    gamma_q(k as f64 / 2.0, x / 2.0)
}

/// Survival function of the standard normal distribution: P(Z > z).
///
/// Evaluated through erfc(z/√2) = Q(1/2, z²/2), which keeps the right tail
/// accurate to machine precision instead of suffering cancellation in
/// 1 − Φ(z).
///
/// # Examples
/// ```
/// assert_eq!(xbicorr_core::statmath::normal_sf(0.0), 0.5);
/// ```
pub fn normal_sf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z == 0.0 {
        return 0.5;
    }
    let half_erfc = |t: f64| -> f64 {
        // erfc(t) = Q(1/2, t²) for t >= 0; both branches converge here and
        // the domain checks cannot fire, so unwrap is safe.
        0.5 * gamma_q(0.5, t * t).expect("gamma_q on valid erfc arguments")
    };
    if z > 0.0 {
        half_erfc(z / std::f64::consts::SQRT_2)
    } else {
        1.0 - half_erfc(-z / std::f64::consts::SQRT_2)
    }
}

/// An ordinary-least-squares fit of `y` on a design matrix.
///
/// `residual_variance` uses the unbiased divisor n − k (it matches the
/// reported standard errors); the BIC and Gaussian log-likelihood use the
/// maximum-likelihood divisor n, with the convention
/// `bic = n·ln(σ̂²_MLE) + k·ln(n)`.
#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub residual_variance: f64,
    pub r_squared: f64,
    pub n_obs: usize,
    pub n_regressors: usize,
    pub log_likelihood: f64,
    pub bic: f64,
}

/// Relative pivot tolerance below which the normal equations are declared
/// rank-deficient.
const RANK_TOL: f64 = 1e-12;

/// Ordinary least squares of `y` on the design matrix given as `columns`
/// (each entry one regressor column of length n).
///
/// Solves the normal equations by Cholesky factorization with a pivot
/// guard; problem sizes here are tiny, so the O(k³) solve is irrelevant
/// and robustness comes from the explicit `RankDeficient` check.
///
/// # Errors
/// - `DimensionMismatch` when the columns differ in length from `y`, no
///   column is supplied, or n <= k.
/// - `DomainError` when any entry is non-finite.
/// - `RankDeficient` when X'X is singular up to the pivot tolerance.
pub fn ols(columns: &[Vec<f64>], y: &[f64]) -> Result<OlsFit> {
    let k = columns.len();
    let n = y.len();
    if k == 0 || n <= k {
        return Err(Error::DimensionMismatch { left: n, right: k });
    }
    for col in columns {
        if col.len() != n {
            return Err(Error::DimensionMismatch {
                left: col.len(),
                right: n,
            });
        }
        if col.iter().any(|v| !v.is_finite()) {
            return Err(Error::DomainError("non-finite design entry".into()));
        }
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::DomainError("non-finite response entry".into()));
    }

    // Normal equations: A = X'X (k×k, symmetric), b = X'y.
    let mut a = vec![0.0; k * k];
    let mut b = vec![0.0; k];
    for i in 0..k {
        for j in i..k {
            let dot = dot(&columns[i], &columns[j]);
            a[i * k + j] = dot;
            a[j * k + i] = dot;
        }
        b[i] = dot(&columns[i], y);
    }

    let chol = cholesky(&a, k)?;
    let coefficients = chol.solve(&b);
    let inv_diag = chol.inverse_diagonal();

    let mut residuals = y.to_vec();
    for (j, col) in columns.iter().enumerate() {
        let beta_j = coefficients[j];
        for (r, v) in residuals.iter_mut().zip(col) {
            *r -= beta_j * v;
        }
    }

    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let residual_variance = ssr / (n - k) as f64;
    let std_errors: Vec<f64> = inv_diag
        .iter()
        .map(|d| (residual_variance * d).max(0.0).sqrt())
        .collect();

    let ybar = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - ybar).powi(2)).sum();
    let r_squared = if sst > 0.0 {
        (1.0 - ssr / sst).clamp(0.0, 1.0)
    } else {
        0.0
    };

    // Floor keeps the exact-fit corner (ssr == 0) out of ln(0) territory.
    let sigma2_mle = (ssr / n as f64).max(1e-300);
    let nf = n as f64;
    let log_likelihood =
        -0.5 * nf * ((2.0 * std::f64::consts::PI).ln() + sigma2_mle.ln() + 1.0);
    let bic = nf * sigma2_mle.ln() + k as f64 * nf.ln();

    Ok(OlsFit {
        coefficients,
        residuals,
        std_errors,
        residual_variance,
        r_squared,
        n_obs: n,
        n_regressors: k,
        log_likelihood,
        bic,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix
/// stored row-major.
struct Cholesky {
    l: Vec<f64>,
    k: usize,
}

fn cholesky(a: &[f64], k: usize) -> Result<Cholesky> {
    let max_diag = (0..k).map(|i| a[i * k + i].abs()).fold(0.0_f64, f64::max);
    if max_diag == 0.0 {
        return Err(Error::RankDeficient);
    }
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut sum = a[i * k + j];
            for p in 0..j {
                sum -= l[i * k + p] * l[j * k + p];
            }
            if i == j {
                if sum <= RANK_TOL * max_diag {
                    return Err(Error::RankDeficient);
                }
                l[i * k + i] = sum.sqrt();
            } else {
                l[i * k + j] = sum / l[j * k + j];
            }
        }
    }
    Ok(Cholesky { l, k })
}

impl Cholesky {
    /// Solve A x = b given A = L L'.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let k = self.k;
        let mut z = vec![0.0; k];
        for i in 0..k {
            let mut sum = b[i];
            for p in 0..i {
                sum -= self.l[i * k + p] * z[p];
            }
            z[i] = sum / self.l[i * k + i];
        }
        let mut x = vec![0.0; k];
        for i in (0..k).rev() {
            let mut sum = z[i];
            for p in i + 1..k {
                sum -= self.l[p * k + i] * x[p];
            }
            x[i] = sum / self.l[i * k + i];
        }
        x
    }

    /// Diagonal of A⁻¹, obtained by solving against unit vectors.
    fn inverse_diagonal(&self) -> Vec<f64> {
        let k = self.k;
        (0..k)
            .map(|j| {
                let mut e = vec![0.0; k];
                e[j] = 1.0;
                self.solve(&e)[j]
            })
            .collect()
    }
}
