//! Reproducible parallel batch sampling and the statistics tying the
//! samplers to the analytic pipeline: empirical tails with exact
//! Clopper-Pearson intervals, tail-exponent fits and the Kolmogorov-Smirnov
//! statistic.
//!
//! Every sample draws from a substream derived from (master seed, sample
//! index) by SplitMix64 expansion, so batches are bit-identical regardless
//! of how work is distributed across threads.

use crate::ensembles::{
    sample_beta_hermite, sample_goe_dense, sample_tw_sao, scale_largest, EnsembleError,
    EnsembleSpec,
};
use crate::painleve::inc_beta_inv;
use crate::tridiag::{householder_tridiagonalize, largest_eigenvalue};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MonteCarloError {
    #[error("batch must contain at least one sample")]
    EmptyBatch,
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error("tail fit needs at least 3 points (got {0})")]
    TooFewPoints(usize),
    #[error("tail fit requires x > 1 at every point (violation at index {0})")]
    BadAbscissa(usize),
    #[error("tail fit requires survival probabilities strictly inside (0, 1) (index {0})")]
    BadSurvival(usize),
    #[error("tail fit requires strictly decreasing survival (index {0})")]
    NonMonotoneSurvival(usize),
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-sample random stream: the ChaCha key is expanded from
/// (master seed, sample index), making every substream independent of
/// worker scheduling.
pub fn substream(master_seed: u64, index: u64) -> ChaCha12Rng {
    let mut state = master_seed ^ index.wrapping_mul(GOLDEN_GAMMA);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

/// Seeded, sorted batch of scaled largest-eigenvalue samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub spec: EnsembleSpec,
    pub master_seed: u64,
    pub count: usize,
    /// Sorted ascending; `N^{1/6}(lambda_max - 2 sqrt N)` for matrix kinds,
    /// the ground-state statistic directly for the stochastic Airy kind.
    pub scaled_samples: Vec<f64>,
    pub metadata: BatchMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchMetadata {
    pub tool_version: String,
    pub created_unix_secs: u64,
}

impl BatchMetadata {
    fn now() -> Self {
        let created_unix_secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        BatchMetadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            created_unix_secs,
        }
    }
}

fn draw_one(spec: &EnsembleSpec, rng: &mut ChaCha12Rng) -> Result<f64, EnsembleError> {
    match spec {
        EnsembleSpec::BetaHermite { n_dim, .. } => {
            let t = sample_beta_hermite(spec, rng)?;
            let tol = t.default_tolerance();
            Ok(scale_largest(largest_eigenvalue(&t, tol), *n_dim))
        }
        EnsembleSpec::GoeDense { n_dim } => {
            let m = sample_goe_dense(*n_dim, rng)?;
            let t = householder_tridiagonalize(&m);
            let tol = t.default_tolerance();
            Ok(scale_largest(largest_eigenvalue(&t, tol), *n_dim))
        }
        EnsembleSpec::StochasticAiry { .. } => sample_tw_sao(spec, rng),
    }
}

/// Draws `n` scaled samples, one substream per index, sorted ascending.
/// Deterministic in (spec, n, master_seed) whatever the worker count.
pub fn run_batch(
    spec: &EnsembleSpec,
    n: usize,
    master_seed: u64,
) -> Result<SampleBatch, MonteCarloError> {
    if n == 0 {
        return Err(MonteCarloError::EmptyBatch);
    }
    spec.validate()?;
    let mut scaled: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(master_seed, i);
            draw_one(spec, &mut rng).expect("spec validated before sampling")
        })
        .collect();
    scaled.sort_by(|a, b| a.partial_cmp(b).expect("samples are finite"));
    Ok(SampleBatch {
        spec: spec.clone(),
        master_seed,
        count: n,
        scaled_samples: scaled,
        metadata: BatchMetadata::now(),
    })
}

/// Exact binomial (Clopper-Pearson) 95% confidence interval for `k`
/// successes out of `n`.
pub fn clopper_pearson95(k: usize, n: usize) -> (f64, f64) {
    let alpha = 0.05;
    let lower = if k == 0 {
        0.0
    } else {
        inc_beta_inv(k as f64, (n - k + 1) as f64, alpha / 2.0).expect("valid shapes")
    };
    let upper = if k == n {
        1.0
    } else {
        inc_beta_inv((k + 1) as f64, (n - k) as f64, 1.0 - alpha / 2.0).expect("valid shapes")
    };
    (lower, upper)
}

/// Empirical survival estimate P(X > x) with its exact 95% interval.
pub fn empirical_tail(batch: &SampleBatch, x: f64) -> (f64, (f64, f64)) {
    let n = batch.scaled_samples.len();
    let below_or_equal = batch.scaled_samples.partition_point(|v| *v <= x);
    let k = n - below_or_equal;
    (k as f64 / n as f64, clopper_pearson95(k, n))
}

/// Fitted tail record for survival = exp(-k x^c).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub exponent: f64,
    pub log_coefficient: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub point_count: usize,
}

impl TailFit {
    pub fn coefficient(&self) -> f64 {
        self.log_coefficient.exp()
    }
}

/// Least squares on (log x, log(-log survival)): slope is the exponent c,
/// intercept is log k in the model survival = exp(-k x^c).
pub fn fit_tail_exponent(points: &[(f64, f64)]) -> Result<TailFit, MonteCarloError> {
    if points.len() < 3 {
        return Err(MonteCarloError::TooFewPoints(points.len()));
    }
    for (i, (x, p)) in points.iter().enumerate() {
        if !(*x > 1.0) {
            return Err(MonteCarloError::BadAbscissa(i));
        }
        if !(*p > 0.0 && *p < 1.0) {
            return Err(MonteCarloError::BadSurvival(i));
        }
        if i > 0 && points[i - 1].1 <= *p {
            return Err(MonteCarloError::NonMonotoneSurvival(i));
        }
    }
    let txy: Vec<(f64, f64)> =
        points.iter().map(|(x, p)| (x.ln(), (-(p.ln())).ln())).collect();
    let n = txy.len() as f64;
    let mean_x = txy.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = txy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = txy.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = txy.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = txy.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).min(1.0) };
    Ok(TailFit {
        exponent: slope,
        log_coefficient: intercept,
        r_squared,
        window: (points[0].0, points[points.len() - 1].0),
        point_count: points.len(),
    })
}

/// Two-sided one-sample Kolmogorov-Smirnov statistic, evaluating the
/// empirical CDF at both step edges.
pub fn ks_statistic(sorted_samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted_samples.len();
    assert!(n > 0, "KS statistic needs a nonempty sample");
    let nf = n as f64;
    let mut d = 0.0_f64;
    for (i, x) in sorted_samples.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((f - i as f64 / nf).abs());
        d = d.max(((i + 1) as f64 / nf - f).abs());
    }
    d
}

/// Two-sample Kolmogorov-Smirnov statistic on sorted inputs.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let (mut i, mut j) = (0usize, 0usize);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut d = 0.0_f64;
    while i < a.len() && j < b.len() {
        // Both empirical CDFs jump together at tied values.
        if a[i] < b[j] {
            i += 1;
        } else if b[j] < a[i] {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn tiny_batch(values: &[f64]) -> SampleBatch {
        let mut v = values.to_vec();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        SampleBatch {
            spec: EnsembleSpec::BetaHermite { beta: 2.0, n_dim: 2 },
            master_seed: 0,
            count: v.len(),
            scaled_samples: v,
            metadata: BatchMetadata { tool_version: String::new(), created_unix_secs: 0 },
        }
    }

    #[test]
    fn run_batch_is_deterministic() {
        let spec = EnsembleSpec::BetaHermite { beta: 2.0, n_dim: 8 };
        let a = run_batch(&spec, 64, 42).unwrap();
        let b = run_batch(&spec, 64, 42).unwrap();
        assert_eq!(a.scaled_samples, b.scaled_samples);
        let c = run_batch(&spec, 64, 43).unwrap();
        assert_ne!(a.scaled_samples, c.scaled_samples);
    }

    #[test]
    fn run_batch_is_thread_invariant() {
        let spec = EnsembleSpec::BetaHermite { beta: 1.0, n_dim: 6 };
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool8 = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
        let a = pool1.install(|| run_batch(&spec, 128, 7).unwrap());
        let b = pool8.install(|| run_batch(&spec, 128, 7).unwrap());
        assert_eq!(a.scaled_samples, b.scaled_samples);
    }

    #[test]
    fn run_batch_singleton() {
        let spec = EnsembleSpec::BetaHermite { beta: 4.0, n_dim: 3 };
        let b = run_batch(&spec, 1, 5).unwrap();
        assert_eq!(b.scaled_samples.len(), 1);
        assert!(b.scaled_samples[0].is_finite());
    }

    #[test]
    fn run_batch_rejects_empty() {
        let spec = EnsembleSpec::BetaHermite { beta: 2.0, n_dim: 2 };
        assert_eq!(run_batch(&spec, 0, 1).unwrap_err(), MonteCarloError::EmptyBatch);
    }

    #[test]
    fn substreams_differ_by_index() {
        let mut a = substream(9, 0);
        let mut b = substream(9, 1);
        let va: f64 = a.gen();
        let vb: f64 = b.gen();
        assert_ne!(va, vb);
    }

    #[test]
    fn empirical_tail_edges() {
        let b = tiny_batch(&[1.0, 2.0, 3.0, 4.0]);
        let (est, (lo, hi)) = empirical_tail(&b, 0.0);
        assert_eq!(est, 1.0);
        assert_eq!(hi, 1.0);
        assert!(lo > 0.0);
        let (est, (lo, hi)) = empirical_tail(&b, 9.0);
        assert_eq!(est, 0.0);
        assert_eq!(lo, 0.0);
        assert!(hi < 1.0);
    }

    #[test]
    fn empirical_tail_clopper_pearson_example() {
        // k = 2 of n = 4: exact interval (0.06759, 0.93241).
        let b = tiny_batch(&[1.0, 2.0, 3.0, 4.0]);
        let (est, (lo, hi)) = empirical_tail(&b, 2.5);
        assert_eq!(est, 0.5);
        assert!((lo - 0.067585986488543).abs() < 1e-9, "lo = {lo}");
        assert!((hi - 0.932414013511457).abs() < 1e-9, "hi = {hi}");
    }

    #[test]
    fn clopper_pearson_covers_truth() {
        // 200 replications of Bernoulli(0.3) tails, n = 400 each; the exact
        // interval must cover the truth in at least 90% of replications.
        let p = 0.3;
        let n = 400;
        let mut covered = 0;
        for rep in 0..200u64 {
            let mut rng = substream(1234, rep);
            let k = (0..n).filter(|_| rng.gen::<f64>() < p).count();
            let (lo, hi) = clopper_pearson95(k, n);
            if lo <= p && p <= hi {
                covered += 1;
            }
        }
        assert!(covered >= 180, "covered {covered}/200");
    }

    #[test]
    fn fit_recovers_synthetic_exponent_exactly() {
        let (k, c) = (2.0, 1.5);
        let pts: Vec<(f64, f64)> =
            [2.0f64, 3.0, 5.0, 8.0].iter().map(|&x| (x, (-k * x.powf(c)).exp())).collect();
        let fit = fit_tail_exponent(&pts).unwrap();
        assert!((fit.exponent - c).abs() < 1e-12);
        assert!((fit.coefficient() - k).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fit_recovers_cubic_left_tail_form() {
        // exp(-x^3/12), the pre-negated left-tail model at beta = 2.
        let k = 1.0 / 12.0;
        let pts: Vec<(f64, f64)> =
            [4.0f64, 4.75, 5.5, 6.25, 7.0].iter().map(|&x| (x, (-k * x.powi(3)).exp())).collect();
        let fit = fit_tail_exponent(&pts).unwrap();
        assert!((fit.exponent - 3.0).abs() < 1e-12);
        assert!((fit.coefficient() - k).abs() < 1e-13);
    }

    #[test]
    fn fit_rejects_bad_inputs() {
        let ok = |x: f64| (x, (-x).exp());
        assert!(matches!(
            fit_tail_exponent(&[ok(2.0), ok(3.0)]),
            Err(MonteCarloError::TooFewPoints(2))
        ));
        assert!(matches!(
            fit_tail_exponent(&[ok(0.5), ok(2.0), ok(3.0)]),
            Err(MonteCarloError::BadAbscissa(0))
        ));
        assert!(matches!(
            fit_tail_exponent(&[(2.0, 0.1), (3.0, 0.2), (4.0, 0.05)]),
            Err(MonteCarloError::NonMonotoneSurvival(1))
        ));
        assert!(matches!(
            fit_tail_exponent(&[(2.0, 1.0), (3.0, 0.2), (4.0, 0.05)]),
            Err(MonteCarloError::BadSurvival(0))
        ));
    }

    #[test]
    fn ks_single_sample_against_uniform() {
        assert!((ks_statistic(&[0.5], |x| x.clamp(0.0, 1.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_null_distribution_scale() {
        // Uniform samples against the uniform CDF: the 99% critical value
        // is 1.63/sqrt(n).
        let n = 10_000;
        let mut rng = substream(77, 0);
        let mut xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!(d <= 1.63 / (n as f64).sqrt(), "KS = {d}");
    }

    #[test]
    fn ks_plug_in_self_is_one_over_n() {
        let xs = [0.1, 0.4, 0.9, 2.0];
        let ecdf = |x: f64| xs.iter().filter(|v| **v <= x).count() as f64 / xs.len() as f64;
        let d = ks_statistic(&xs, ecdf);
        assert!(d <= 1.0 / xs.len() as f64 + 1e-12);
    }

    #[test]
    fn ks_two_sample_identical_is_zero() {
        let xs = [0.2, 0.5, 0.8];
        assert_eq!(ks_two_sample(&xs, &xs), 0.0);
    }
}
