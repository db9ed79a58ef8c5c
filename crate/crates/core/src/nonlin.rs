//! Nonlinear serial-dependence battery applied to pre-whitened residuals:
//! McLeod-Li (Ljung-Box on squares), Engle's ARCH LM, and the BDS test of
//! Broock, Dechert, Scheinkman & LeBaron.
//!
//! The BDS pair and triple counts run on a bitset indicator matrix, so the
//! heavy O(n²) part is exact integer counting: results are deterministic
//! bit for bit regardless of how the work is scheduled, and the brute-force
//! oracle in the tests can compare counts exactly.

use crate::error::{Error, Result};
use crate::statmath::{normal_sf, ols};
use crate::summary::{RejectAt, TestResult};

/// Configuration of one BDS run.
#[derive(Debug, Clone, Copy)]
pub struct BdsConfig {
    /// Embedding dimension m ≥ 2.
    pub embedding: usize,
    /// ε expressed as a multiple of the series' sample standard deviation.
    pub epsilon_multiplier: f64,
    /// Asymptotic-validity guard on the sample size; lower it only for
    /// oracle cross-checks on tiny inputs.
    pub min_len: usize,
}

impl BdsConfig {
    /// The conventional guard of 200 observations applies by default.
    pub fn new(embedding: usize, epsilon_multiplier: f64) -> Self {
        BdsConfig {
            embedding,
            epsilon_multiplier,
            min_len: 200,
        }
    }
}

/// McLeod-Li test: Ljung-Box portmanteau on the squared residuals,
/// Q = n(n+2)·Σ_{k=1..q} ρ̂²_k(e²)/(n−k), asymptotically χ²_q.
///
/// # Errors
/// `DomainError` for q = 0; `SeriesTooShort` unless n > q + 10;
/// `DegenerateSeries` when the squared series has no variance.
pub fn mcleod_li(e: &[f64], q: usize) -> Result<TestResult> {
    if q == 0 {
        return Err(Error::DomainError(
            "mcleod_li needs at least one lag".into(),
        ));
    }
    let n = e.len();
    if n <= q + 10 {
        return Err(Error::SeriesTooShort {
            needed: q + 11,
            got: n,
        });
    }
    let sq: Vec<f64> = e.iter().map(|v| v * v).collect();
    let mean = sq.iter().sum::<f64>() / n as f64;
    let d: Vec<f64> = sq.iter().map(|v| v - mean).collect();
    let denom: f64 = d.iter().map(|v| v * v).sum();
    if denom <= 0.0 {
        return Err(Error::DegenerateSeries(
            "squared residuals have zero variance".into(),
        ));
    }
    let nf = n as f64;
    let mut stat = 0.0;
    for k in 1..=q {
        let num: f64 = d[k..].iter().zip(&d[..n - k]).map(|(a, b)| a * b).sum();
        let rho = num / denom;
        stat += rho * rho / (nf - k as f64);
    }
    stat *= nf * (nf + 2.0);
    TestResult::from_chi2(format!("mcleod_li(q={q})"), stat, q)
}

/// Engle's LM test for ARCH effects: regress e²_t on an intercept and
/// e²_{t−1..t−q}; the statistic is n_effective·R², asymptotically χ²_q.
///
/// # Errors
/// `DomainError` for q = 0 (no regressors); `SeriesTooShort` unless
/// n > q + 10; `DegenerateSeries` when the squares carry no variance;
/// `RankDeficient` propagated from the regression.
pub fn engle_lm(e: &[f64], q: usize) -> Result<TestResult> {
    if q == 0 {
        return Err(Error::DomainError(
            "engle_lm needs at least one lag".into(),
        ));
    }
    let n = e.len();
    if n <= q + 10 {
        return Err(Error::SeriesTooShort {
            needed: q + 11,
            got: n,
        });
    }
    let sq: Vec<f64> = e.iter().map(|v| v * v).collect();
    let mean = sq.iter().sum::<f64>() / n as f64;
    if sq.iter().map(|v| (v - mean).powi(2)).sum::<f64>() <= 0.0 {
        return Err(Error::DegenerateSeries(
            "squared residuals have zero variance".into(),
        ));
    }
    let rows = n - q;
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(q + 1);
    columns.push(vec![1.0; rows]);
    for lag in 1..=q {
        columns.push(sq[q - lag..n - lag].to_vec());
    }
    let fit = ols(&columns, &sq[q..])?;
    let stat = rows as f64 * fit.r_squared;
    TestResult::from_chi2(format!("engle_lm(q={q})"), stat, q)
}

/// Dense symmetric indicator matrix 1(|x_i − x_j| ≤ ε) stored as bitsets,
/// diagonal excluded. Row i occupies `words` consecutive u64s; bit j of
/// row i is set iff i ≠ j and the pair (i, j) is within ε.
struct IndicatorMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl IndicatorMatrix {
    fn build(x: &[f64], eps: f64) -> Self {
        let n = x.len();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for i in 0..n {
            for j in i + 1..n {
                if (x[i] - x[j]).abs() <= eps {
                    bits[i * words + j / 64] |= 1u64 << (j % 64);
                    bits[j * words + i / 64] |= 1u64 << (i % 64);
                }
            }
        }
        IndicatorMatrix { n, words, bits }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Number of set bits of row `i` in the open-closed range (i, limit).
    fn count_after(&self, i: usize, limit: usize) -> u64 {
        count_range(self.row(i), i + 1, limit)
    }

    /// Off-diagonal row degree R_i (the diagonal is never stored).
    fn row_degree(&self, i: usize) -> u64 {
        self.row(i).iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Upper-triangle pair count over indices `from..n`.
    fn pair_count_from(&self, from: usize) -> u64 {
        (from..self.n).map(|i| self.count_after(i, self.n)).sum()
    }
}

/// Count set bits of `row` with positions in [from, to).
fn count_range(row: &[u64], from: usize, to: usize) -> u64 {
    if from >= to {
        return 0;
    }
    let (fw, fb) = (from / 64, from % 64);
    let (tw, tb) = (to / 64, to % 64);
    if fw == tw {
        // Single-word span: keep bits [fb, tb); tb is 1..=63 here because
        // to > from within one word.
        let mask = (!0u64 << fb) & ((1u64 << tb) - 1);
        return (row[fw] & mask).count_ones() as u64;
    }
    let mut total = (row[fw] & (!0u64 << fb)).count_ones() as u64;
    for w in &row[fw + 1..tw] {
        total += w.count_ones() as u64;
    }
    if tb > 0 {
        total += (row[tw] & ((1u64 << tb) - 1)).count_ones() as u64;
    }
    total
}

/// In-place AND of `dst` with `src` right-shifted by `shift` bit positions
/// (bit j of the result reads bit j + shift of `src`).
fn and_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let words = dst.len();
    let wo = shift / 64;
    let bo = shift % 64;
    for w in 0..words {
        let lo = src.get(w + wo).copied().unwrap_or(0);
        let hi = src.get(w + wo + 1).copied().unwrap_or(0);
        let shifted = if bo == 0 { lo } else { (lo >> bo) | (hi << (64 - bo)) };
        dst[w] &= shifted;
    }
}

/// Pair counts of the joint m-history indicator for every embedding
/// dimension 1..=max_m: entry l−1 counts pairs i < j < n − l + 1 with
/// Π_{k=0..l−1} 1(|x_{i+k} − x_{j+k}| ≤ ε) = 1.
fn joint_pair_counts(ind: &IndicatorMatrix, max_m: usize) -> Vec<u64> {
    let n = ind.n;
    let words = ind.words;
    let mut counts = Vec::with_capacity(max_m);
    let mut joint = ind.bits.clone();

    let count_upper = |rows: &[u64], dim: usize| -> u64 {
        let nm = n + 1 - dim;
        (0..nm)
            .map(|i| count_range(&rows[i * words..(i + 1) * words], i + 1, nm))
            .sum()
    };

    counts.push(count_upper(&joint, 1));
    for l in 1..max_m {
        // J_{l+1}[i] = J_l[i] & shift(I[i+l], l); rows beyond n − l stay
        // stale but are never read at dimension l + 1 or deeper.
        for i in 0..n - l {
            let dst = &mut joint[i * words..(i + 1) * words];
            and_shifted(dst, ind.row(i + l), l);
        }
        counts.push(count_upper(&joint, l + 1));
    }
    counts
}

fn pairs(n: u64) -> f64 {
    (n * (n - 1) / 2) as f64
}

/// Correlation integral C_m(ε): the fraction of pairs of m-histories of
/// `x` whose coordinates are all within ε (inclusive).
///
/// # Errors
/// `DomainError` for ε ≤ 0 or m = 0; `SeriesTooShort` unless n ≥ m + 2.
///
/// # Examples
/// ```
/// let c = xbicorr_core::nonlin::correlation_integral(
///     &[0.0, 10.0, 20.0, 30.0], 1, 10.0,
/// ).unwrap();
/// assert_eq!(c, 0.5); // 3 of the 6 pairs lie within ε = 10
/// ```
pub fn correlation_integral(x: &[f64], m: usize, eps: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::DomainError("embedding dimension must be ≥ 1".into()));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::DomainError(format!(
            "epsilon must be positive and finite, got {eps}"
        )));
    }
    let n = x.len();
    if n < m + 2 {
        return Err(Error::SeriesTooShort {
            needed: m + 2,
            got: n,
        });
    }
    let ind = IndicatorMatrix::build(x, eps);
    let counts = joint_pair_counts(&ind, m);
    let nm = (n - m + 1) as u64;
    Ok(counts[m - 1] as f64 / pairs(nm))
}

/// Intermediate quantities of the BDS statistic, exposed so the pieces can
/// be inspected or cross-checked independently of the final test verdict.
#[derive(Debug, Clone, Copy)]
pub struct BdsComponents {
    /// The concrete ε after scaling by the sample standard deviation.
    pub epsilon: f64,
    /// Effective sample count N_m = n − m + 1 at the embedding dimension.
    pub n_m: usize,
    /// Correlation integral C_m over the embedded points.
    pub c_m: f64,
    /// C₁ over the last N_m observations (the numerator's baseline).
    pub c_1_trimmed: f64,
    /// Full-sample C₁ feeding the variance estimator.
    pub c_1: f64,
    /// Triple-counting constant k̂ = Σᵢ Rᵢ(Rᵢ−1)/(n(n−1)(n−2)).
    pub k: f64,
    /// Asymptotic variance σ̂²_m of the scaled effect.
    pub sigma_sq: f64,
    /// The standardized statistic W_m.
    pub statistic: f64,
}

/// BDS test for iid against an unspecified alternative.
///
/// With ε = multiplier·sd(e), the statistic is
/// W_m = √(N_m)·(C_m − C₁ᵐ)/σ̂_m with N_m = n − m + 1, where C₁ in the
/// numerator is computed over the last N_m observations (conditioning on
/// the m − 1 initial values), while the variance estimator uses the
/// full-sample C₁ and the triple-counting constant
/// k̂ = Σᵢ Rᵢ(Rᵢ−1)/(n(n−1)(n−2)) built from the indicator row degrees Rᵢ.
/// Two-sided p-value from the standard normal.
///
/// # Errors
/// `DomainError` for m < 2; `SeriesTooShort` below the validity guard;
/// `DegenerateSeries` for a flat series; `VarianceCollapse` when σ̂²_m ≤ 0
/// (ε so large that every pair is within it).
pub fn bds(e: &[f64], cfg: &BdsConfig) -> Result<TestResult> {
    let parts = bds_components(e, cfg)?;
    let p_value = 2.0 * normal_sf(parts.statistic.abs());
    Ok(TestResult {
        name: format!("bds(m={}, eps={}s)", cfg.embedding, cfg.epsilon_multiplier),
        statistic: parts.statistic,
        dof: cfg.embedding,
        p_value,
        reject_at: RejectAt::from_p_value(p_value),
    })
}

/// Compute every ingredient of the BDS statistic under the same validation
/// rules as [`bds`]; see that function for the conventions and errors.
pub fn bds_components(e: &[f64], cfg: &BdsConfig) -> Result<BdsComponents> {
    let m = cfg.embedding;
    if m < 2 {
        return Err(Error::DomainError(
            "BDS embedding dimension must be ≥ 2".into(),
        ));
    }
    if !(cfg.epsilon_multiplier > 0.0) || !cfg.epsilon_multiplier.is_finite() {
        return Err(Error::DomainError(format!(
            "epsilon multiplier must be positive, got {}",
            cfg.epsilon_multiplier
        )));
    }
    let n = e.len();
    let needed = cfg.min_len.max(m + 2);
    if n < needed {
        return Err(Error::SeriesTooShort { needed, got: n });
    }

    let nf = n as f64;
    let mean = e.iter().sum::<f64>() / nf;
    let var = e.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    if var <= 0.0 {
        return Err(Error::DegenerateSeries("flat series in BDS".into()));
    }
    let eps = cfg.epsilon_multiplier * var.sqrt();

    let ind = IndicatorMatrix::build(e, eps);
    let counts = joint_pair_counts(&ind, m);

    let nm = n - m + 1;
    let c_m = counts[m - 1] as f64 / pairs(nm as u64);
    // C₁ over the last N_m observations, for the statistic's numerator.
    let c1_trim = ind.pair_count_from(m - 1) as f64 / pairs(nm as u64);
    // Full-sample C₁ and k̂ feed the variance estimator.
    let c = ind.pair_count_from(0) as f64 / pairs(n as u64);
    let k: f64 = {
        let sum: f64 = (0..n)
            .map(|i| {
                let r = ind.row_degree(i) as f64;
                r * (r - 1.0)
            })
            .sum();
        sum / (nf * (nf - 1.0) * (nf - 2.0))
    };

    let sigma2 = bds_variance(c, k, m);
    if sigma2 <= 0.0 {
        return Err(Error::VarianceCollapse(format!(
            "sigma²_m = {sigma2} at m = {m}, eps = {}s",
            cfg.epsilon_multiplier
        )));
    }

    let statistic = (nm as f64).sqrt() * (c_m - c1_trim.powi(m as i32)) / sigma2.sqrt();
    Ok(BdsComponents {
        epsilon: eps,
        n_m: nm,
        c_m,
        c_1_trimmed: c1_trim,
        c_1: c,
        k,
        sigma_sq: sigma2,
        statistic,
    })
}

/// Asymptotic variance of the BDS effect:
/// σ²_m = 4·[kᵐ + 2·Σ_{j=1..m−1} k^{m−j}·c^{2j} + (m−1)²·c^{2m} − m²·k·c^{2m−2}].
fn bds_variance(c: f64, k: f64, m: usize) -> f64 {
    let mf = m as f64;
    let mut cross = 0.0;
    for j in 1..m {
        cross += k.powi((m - j) as i32) * c.powi(2 * j as i32);
    }
    4.0 * (k.powi(m as i32) + 2.0 * cross + (mf - 1.0).powi(2) * c.powi(2 * m as i32)
        - mf * mf * k * c.powi(2 * m as i32 - 2))
}
