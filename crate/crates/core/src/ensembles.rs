//! Seeded samplers for the random-matrix models: the tridiagonal
//! beta-Hermite ensemble, dense GOE matrices and the discretized stochastic
//! Airy operator, plus the edge scaling and the joint eigenvalue
//! log-density.
//!
//! Samplers are pure functions of an explicit random stream; batch drivers
//! derive one substream per sample index so results never depend on worker
//! count (see [`crate::montecarlo`]).

use crate::painleve::log_gamma;
use crate::tridiag::{largest_eigenvalue, DenseSymmetricMatrix, TridiagonalMatrix};
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EnsembleError {
    #[error("{what} must be positive (got {value})")]
    NonPositive { what: &'static str, value: f64 },
    #[error("matrix dimension must be at least 1")]
    ZeroDimension,
    #[error("stochastic Airy step size must satisfy 0 < h < L (got h={h}, L={l})")]
    BadSaoGrid { h: f64, l: f64 },
    #[error("eigenvalues must be nondecreasing (violation at index {index})")]
    UnsortedEigenvalues { index: usize },
}

/// Which random-matrix model to sample, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnsembleSpec {
    /// Tridiagonal beta-Hermite model: N(0,2)/sqrt(beta) diagonal,
    /// chi_{(N-k) beta}/sqrt(beta) off-diagonal.
    BetaHermite { beta: f64, n_dim: usize },
    /// Dense GOE: N(0,2) diagonal, N(0,1) off-diagonal, symmetric.
    GoeDense { n_dim: usize },
    /// Discretized stochastic Airy operator on [0, L] with Dirichlet ends.
    StochasticAiry {
        beta: f64,
        domain_length: f64,
        step_size: f64,
    },
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<(), EnsembleError> {
        match *self {
            EnsembleSpec::BetaHermite { beta, n_dim } => {
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(EnsembleError::NonPositive { what: "beta", value: beta });
                }
                if n_dim == 0 {
                    return Err(EnsembleError::ZeroDimension);
                }
                Ok(())
            }
            EnsembleSpec::GoeDense { n_dim } => {
                if n_dim == 0 {
                    return Err(EnsembleError::ZeroDimension);
                }
                Ok(())
            }
            EnsembleSpec::StochasticAiry { beta, domain_length, step_size } => {
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(EnsembleError::NonPositive { what: "beta", value: beta });
                }
                if !(domain_length > 0.0 && domain_length.is_finite()) {
                    return Err(EnsembleError::NonPositive {
                        what: "domain length",
                        value: domain_length,
                    });
                }
                if !(step_size > 0.0 && step_size < domain_length) {
                    return Err(EnsembleError::BadSaoGrid { h: step_size, l: domain_length });
                }
                Ok(())
            }
        }
    }
}

/// One draw from the chi distribution with `t` degrees of freedom,
/// realized as sqrt(2 G) with G ~ Gamma(t/2, scale 1).
pub fn sample_chi<R: Rng + ?Sized>(t: f64, rng: &mut R) -> Result<f64, EnsembleError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(EnsembleError::NonPositive { what: "chi degrees of freedom", value: t });
    }
    let gamma = Gamma::new(0.5 * t, 1.0).expect("shape and scale are positive");
    Ok((2.0 * gamma.sample(rng)).sqrt())
}

/// Density of the chi distribution: 2^{1-t/2} x^{t-1} e^{-x^2/2} / Gamma(t/2).
pub fn chi_pdf(t: f64, x: f64) -> Result<f64, EnsembleError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(EnsembleError::NonPositive { what: "chi degrees of freedom", value: t });
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(EnsembleError::NonPositive { what: "chi pdf argument", value: x });
    }
    let lg = log_gamma(0.5 * t).expect("t/2 > 0");
    Ok(((1.0 - 0.5 * t) * std::f64::consts::LN_2 + (t - 1.0) * x.ln() - 0.5 * x * x - lg).exp())
}

/// Samples the tridiagonal beta-Hermite matrix: diagonal i.i.d.
/// N(0, 2)/sqrt(beta), k-th off-diagonal entry chi_{(N-k) beta}/sqrt(beta).
pub fn sample_beta_hermite<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    rng: &mut R,
) -> Result<TridiagonalMatrix, EnsembleError> {
    let (beta, n) = match *spec {
        EnsembleSpec::BetaHermite { beta, n_dim } => (beta, n_dim),
        _ => panic!("sample_beta_hermite requires a BetaHermite spec"),
    };
    spec.validate()?;
    let root_beta = beta.sqrt();
    let diag: Vec<f64> = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            z * std::f64::consts::SQRT_2 / root_beta
        })
        .collect();
    let mut offdiag = Vec::with_capacity(n - 1);
    for k in 1..n {
        let dof = (n - k) as f64 * beta;
        offdiag.push(sample_chi(dof, rng)? / root_beta);
    }
    Ok(TridiagonalMatrix::new(diag, offdiag).expect("entries are finite"))
}

/// Samples a dense GOE matrix: diagonal N(0, 2), off-diagonal N(0, 1),
/// matching the beta = 1 density exp(-tr H^2 / 4).
pub fn sample_goe_dense<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<DenseSymmetricMatrix, EnsembleError> {
    if n == 0 {
        return Err(EnsembleError::ZeroDimension);
    }
    let mut lower = vec![0.0; n * (n + 1) / 2];
    let mut idx = 0;
    for i in 0..n {
        for j in 0..=i {
            let z: f64 = StandardNormal.sample(rng);
            lower[idx] = if i == j { z * std::f64::consts::SQRT_2 } else { z };
            idx += 1;
        }
    }
    let at = |i: usize, j: usize| lower[i * (i + 1) / 2 + j];
    Ok(DenseSymmetricMatrix::from_lower(n, at).expect("entries are finite"))
}

/// Edge scaling N^{1/6} (lambda_max - 2 sqrt(N)).
pub fn scale_largest(lambda_max: f64, n: usize) -> f64 {
    let nf = n as f64;
    nf.powf(1.0 / 6.0) * (lambda_max - 2.0 * nf.sqrt())
}

/// Inverse of [`scale_largest`].
pub fn unscale_largest(scaled: f64, n: usize) -> f64 {
    let nf = n as f64;
    scaled / nf.powf(1.0 / 6.0) + 2.0 * nf.sqrt()
}

/// Log of the unnormalized ordered joint eigenvalue density:
/// beta sum_{i<j} log|l_i - l_j| - (beta/4) sum l_i^2.
/// Returns negative infinity on a repeated eigenvalue.
pub fn log_joint_eigen_density(lambdas: &[f64], beta: f64) -> Result<f64, EnsembleError> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(EnsembleError::NonPositive { what: "beta", value: beta });
    }
    for (i, w) in lambdas.windows(2).enumerate() {
        if w[1] < w[0] {
            return Err(EnsembleError::UnsortedEigenvalues { index: i + 1 });
        }
    }
    let mut log_vandermonde = 0.0;
    for i in 0..lambdas.len() {
        for j in (i + 1)..lambdas.len() {
            let gap = lambdas[j] - lambdas[i];
            if gap == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            log_vandermonde += gap.ln();
        }
    }
    let sum_sq: f64 = lambdas.iter().map(|l| l * l).sum();
    Ok(beta * log_vandermonde - 0.25 * beta * sum_sq)
}

/// Uniform grid and Brownian increments for the stochastic Airy operator.
#[derive(Debug, Clone)]
pub struct SaoGrid {
    step: f64,
    /// Increment b(x_{k+1}) - b(x_k) for each grid cell, variance = step.
    pub noise_increments: Vec<f64>,
}

impl SaoGrid {
    pub fn sample<R: Rng + ?Sized>(domain_length: f64, step: f64, rng: &mut R) -> Self {
        let cells = (domain_length / step).ceil() as usize;
        let sd = step.sqrt();
        let noise_increments = (0..cells)
            .map(|_| {
                let z: f64 = StandardNormal.sample(rng);
                z * sd
            })
            .collect();
        SaoGrid { step, noise_increments }
    }

    pub fn zero_noise(domain_length: f64, step: f64) -> Self {
        let cells = (domain_length / step).ceil() as usize;
        SaoGrid { step, noise_increments: vec![0.0; cells] }
    }
}

/// Builds the discretized operator -d^2/dx^2 + x + (2/sqrt(beta)) dB/dx as a
/// symmetric tridiagonal matrix with Dirichlet conditions at both ends:
/// diagonal 2/h^2 + x_k + (2/sqrt(beta)) dB_k / h, off-diagonal -1/h^2.
pub fn sao_operator(beta: f64, grid: &SaoGrid) -> TridiagonalMatrix {
    let h = grid.step;
    let interior = grid.noise_increments.len() - 1;
    let noise_scale = 2.0 / beta.sqrt() / h;
    let diag: Vec<f64> = (0..interior)
        .map(|k| {
            let x = (k + 1) as f64 * h;
            2.0 / (h * h) + x + noise_scale * grid.noise_increments[k + 1]
        })
        .collect();
    let offdiag = vec![-1.0 / (h * h); interior.saturating_sub(1)];
    TridiagonalMatrix::new(diag, offdiag).expect("operator entries are finite")
}

/// One approximate TW_beta draw: the negated smallest eigenvalue of the
/// discretized stochastic Airy operator.
pub fn sample_tw_sao<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    rng: &mut R,
) -> Result<f64, EnsembleError> {
    let (beta, l, h) = match *spec {
        EnsembleSpec::StochasticAiry { beta, domain_length, step_size } => {
            (beta, domain_length, step_size)
        }
        _ => panic!("sample_tw_sao requires a StochasticAiry spec"),
    };
    spec.validate()?;
    let grid = SaoGrid::sample(l, h, rng);
    Ok(sao_ground_state_negated(beta, &grid))
}

/// -lambda_min of the operator built from the given grid noise.
pub fn sao_ground_state_negated(beta: f64, grid: &SaoGrid) -> f64 {
    let op = sao_operator(beta, grid).negated();
    let tol = op.default_tolerance();
    largest_eigenvalue(&op, tol)
}
