//! Deterministic synthetic series generators for the `simulate` subcommand,
//! the benchmarks, and the statistical test suites.
//!
//! Two sources of randomness coexist on purpose. [`Lcg`] is a tiny portable
//! linear congruential generator whose exact stream is easy to reproduce in
//! any language — the cross-implementation reference values in the test
//! suites are frozen against it. Everything else uses ChaCha8 keyed by an
//! explicit seed: fast, high quality, and stable across platforms and
//! releases, so simulation-based tests are repeatable bit for bit.

use chrono::{Datelike, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ingest::PriceSeries;

/// Portable linear congruential generator
/// x ← (1103515245·x + 12345) mod 2³¹, emitting x/2³¹ after each advance.
///
/// Deliberately low-tech: the recurrence is one line in any language, which
/// makes externally computed reference values verifiable. Not suitable as a
/// general-purpose RNG.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    const MODULUS: u64 = 1 << 31;

    pub fn new(seed: u64) -> Self {
        Lcg {
            state: seed % Self::MODULUS,
        }
    }

    /// Advance the state, then return it scaled to [0, 1).
    pub fn next_unit(&mut self) -> f64 {
        self.state = (1103515245u64.wrapping_mul(self.state).wrapping_add(12345)) % Self::MODULUS;
        self.state as f64 / Self::MODULUS as f64
    }

    /// The next `n` uniform variates.
    pub fn uniform_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_unit()).collect()
    }
}

/// `n` consecutive weekdays starting Monday 2000-01-03.
pub fn weekday_dates(n: usize) -> Vec<NaiveDate> {
    let mut dates = Vec::with_capacity(n);
    let mut d = NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid epoch date");
    while dates.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            dates.push(d);
        }
        d = d.succ_opt().expect("date range never exhausted");
    }
    dates
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// `n` iid standard normal draws.
pub fn gaussian(n: usize, seed: u64) -> Vec<f64> {
    normals(&mut rng_for(seed), n)
}

/// Driftless Gaussian random walk: cumulative sum of iid N(0, 1) steps.
pub fn random_walk(n: usize, seed: u64) -> Vec<f64> {
    let mut total = 0.0;
    gaussian(n, seed)
        .into_iter()
        .map(|e| {
            total += e;
            total
        })
        .collect()
}

/// Stationary AR(p) recursion y_t = Σ coeffs[i]·y_{t−1−i} + ε_t with iid
/// standard normal shocks, zero-initialized and burned in for `burn` steps.
pub fn ar_series(coeffs: &[f64], n: usize, burn: usize, seed: u64) -> Vec<f64> {
    let total = n + burn;
    let shocks = gaussian(total, seed);
    let mut y = vec![0.0; total];
    for t in 0..total {
        let mut v = shocks[t];
        for (i, c) in coeffs.iter().enumerate() {
            if t > i {
                v += c * y[t - 1 - i];
            }
        }
        y[t] = v;
    }
    y.split_off(burn)
}

/// Bivariate VAR(1) recursion z_t = A·z_{t−1} + ε_t with independent
/// standard normal shocks per equation, burned in for `burn` steps.
pub fn var_series(a: [[f64; 2]; 2], n: usize, burn: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let total = n + burn;
    let mut rng = rng_for(seed);
    let ex = normals(&mut rng, total);
    let ey = normals(&mut rng, total);
    let mut x = vec![0.0; total];
    let mut y = vec![0.0; total];
    for t in 1..total {
        x[t] = a[0][0] * x[t - 1] + a[0][1] * y[t - 1] + ex[t];
        y[t] = a[1][0] * x[t - 1] + a[1][1] * y[t - 1] + ey[t];
    }
    x[0] = ex[0];
    y[0] = ey[0];
    (x.split_off(burn), y.split_off(burn))
}

/// ARCH(1) shocks: e_t = σ_t·z_t with σ²_t = 0.1 + 0.8·e²_{t−1}.
///
/// Serially uncorrelated but strongly dependent in the squares — the
/// canonical alternative for the McLeod-Li and Engle LM tests.
pub fn arch1(n: usize, seed: u64) -> Vec<f64> {
    const BURN: usize = 50;
    let z = gaussian(n + BURN, seed);
    let mut e = Vec::with_capacity(n + BURN);
    // Start at the unconditional variance 0.1/(1 − 0.8).
    let mut sigma2: f64 = 0.5;
    for zt in z {
        let et = sigma2.sqrt() * zt;
        e.push(et);
        sigma2 = 0.1 + 0.8 * et * et;
    }
    e.split_off(BURN)
}

/// Logistic-map iterates x_{t+1} = 4·x_t·(1 − x_t), started from a seeded
/// point in (0.05, 0.95) and burned in.
///
/// Fully deterministic chaos: white-noise-like second moments with strong
/// nonlinear structure — the canonical BDS power alternative.
pub fn logistic_map(n: usize, seed: u64) -> Vec<f64> {
    const BURN: usize = 100;
    let mut rng = rng_for(seed);
    let mut x: f64 = 0.05 + 0.9 * rng.random::<f64>();
    let mut out = Vec::with_capacity(n);
    for t in 0..n + BURN {
        x = 4.0 * x * (1.0 - x);
        if t >= BURN {
            out.push(x);
        }
    }
    out
}

/// Nonlinearly coupled pair: x iid N(0, 1) and
/// y_t = x_{t−1}·x_{t−2} + noise·ε_t (pure noise for t < 2).
///
/// The coupling is invisible to linear cross-correlation at any lag but
/// produces a nonzero cross-bicovariance at (r, s) = (1, 2).
pub fn coupled_pair(n: usize, noise: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = rng_for(seed);
    let x = normals(&mut rng, n);
    let eps = normals(&mut rng, n);
    let y: Vec<f64> = (0..n)
        .map(|t| {
            let coupling = if t >= 2 { x[t - 1] * x[t - 2] } else { 0.0 };
            coupling + noise * eps[t]
        })
        .collect();
    (x, y)
}

/// Three synthetic price series exercising every stage of the pipeline:
///
/// - `sim_a`: ARCH(1)-flavored returns — conditionally heteroskedastic,
///   serially uncorrelated.
/// - `sim_b`: returns coupled to `sim_a` through the product of its two
///   previous returns, plus noise — nonlinear co-movement throughout.
/// - `sim_c`: iid returns except for a burst in the middle third of the
///   sample where the same coupling to `sim_a` switches on — a localized
///   epoch.
///
/// Returns are in percent; prices compound from 100 via
/// p_t = p_{t−1}·exp(r_t/100), dated on consecutive weekdays, so the
/// ingest transform recovers the generated returns exactly.
pub fn synthetic_panel(seed: u64, n_prices: usize) -> Vec<PriceSeries> {
    assert!(n_prices >= 2, "need at least two prices to imply a return");
    let n = n_prices - 1;
    let dates = weekday_dates(n_prices);

    let ra: Vec<f64> = arch1(n, seed).iter().map(|e| 1.4 * e).collect();

    let eps_b = gaussian(n, seed.wrapping_add(1));
    let rb: Vec<f64> = (0..n)
        .map(|t| {
            let coupling = if t >= 2 { ra[t - 1] * ra[t - 2] } else { 0.0 };
            0.6 * coupling + 0.8 * eps_b[t]
        })
        .collect();

    let eps_c = gaussian(n, seed.wrapping_add(2));
    let (lo, hi) = (n / 3, 2 * n / 3);
    let rc: Vec<f64> = (0..n)
        .map(|t| {
            if (lo..hi).contains(&t) && t >= 2 {
                0.6 * ra[t - 1] * ra[t - 2] + 0.8 * eps_c[t]
            } else {
                eps_c[t]
            }
        })
        .collect();

    [("sim_a", ra), ("sim_b", rb), ("sim_c", rc)]
        .into_iter()
        .map(|(name, returns)| {
            let mut prices = Vec::with_capacity(n_prices);
            let mut p = 100.0;
            prices.push(p);
            for r in returns {
                p *= (r / 100.0).exp();
                prices.push(p);
            }
            PriceSeries {
                name: name.to_string(),
                dates: dates.clone(),
                values: prices,
            }
        })
        .collect()
}
