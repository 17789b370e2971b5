//! Self-verification suite: quantitative reproductions of the toolkit's
//! computable claims, runnable at two scales.
//!
//! Each check returns a [`CheckResult`] carrying the measured values and
//! the tolerance it was judged against; the CLI renders them as a JSON
//! report and the acceptance test target asserts on them one by one. All
//! randomness is pinned to fixed master seeds, so a given build either
//! passes or fails deterministically.

use crate::ensembles::{sample_beta_hermite, EnsembleSpec};
use crate::montecarlo::{
    fit_tail_exponent, ks_statistic, run_batch, substream, SampleBatch,
};
use crate::painleve::{airy_ai, solve_default, tw_cdf, tw_range, PainleveSolution, TwBeta};
use crate::tails::{
    check_exponential_bound, classify_id, classify_rplus_id, id_gaussian_statistic,
    tail_asymptote, two_sided_tail, ClassifyOptions, Side, TailFunction, VerdictKind,
};
use crate::tridiag::{
    all_eigenvalues, householder_tridiagonalize, DenseSymmetricMatrix, TridiagonalMatrix,
};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

/// Master seed for every randomized verification check.
pub const VERIFY_SEED: u64 = 20260809;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyScale {
    Default,
    Quick,
}

impl VerifyScale {
    pub fn name(self) -> &'static str {
        match self {
            VerifyScale::Default => "default",
            VerifyScale::Quick => "quick",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub measured: serde_json::Value,
    pub tolerance: String,
    pub details: String,
}

impl CheckResult {
    fn new(
        name: &str,
        passed: bool,
        measured: serde_json::Value,
        tolerance: &str,
        details: String,
    ) -> Self {
        CheckResult {
            name: name.to_string(),
            passed,
            measured,
            tolerance: tolerance.to_string(),
            details,
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {} (tolerance: {}){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.tolerance,
            if self.details.is_empty() {
                String::new()
            } else {
                format!(" - {}", self.details)
            }
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub scale: String,
    pub all_passed: bool,
    pub checks: Vec<CheckResult>,
}

/// Runs every check at the given scale on the default solver grid.
pub fn run_all(scale: VerifyScale) -> VerifyReport {
    run_all_with(scale, &solve_default())
}

/// Runs every check against a caller-supplied Painleve solution.
pub fn run_all_with(scale: VerifyScale, sol: &PainleveSolution) -> VerifyReport {
    let mut checks = vec![
        check_right_tail_fit(&sol),
        check_left_tail_fit(&sol),
    ];
    for beta in [TwBeta::One, TwBeta::Two, TwBeta::Four] {
        checks.push(check_edge_ks(beta, scale, sol));
    }
    checks.push(check_theorem1_limit());
    checks.push(check_lemma1_ratio());
    checks.push(check_gue_subexponential(scale));
    checks.push(check_goe_bound(scale));
    checks.push(check_wigner_spacing(scale));
    checks.push(check_surmise_rplus());
    checks.push(check_sao_moments(scale));
    checks.push(check_sao_zero_noise());
    checks.push(check_bisection_vs_charpoly(scale));
    checks.push(check_householder_spectrum(scale));
    checks.push(check_painleve_integrity(sol));
    checks.push(check_threads_determinism());
    let all_passed = checks.iter().all(|c| c.passed);
    VerifyReport { scale: scale.name().to_string(), all_passed, checks }
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// Right-tail power-law fit of the exact 1 - F2 over [4, 7].
///
/// The target window [1.40, 1.60] for the exponent and 15% on the
/// coefficient assume the leading-order law exp(-(4/3) x^{3/2}) alone; the
/// exact tail carries the prefactor 1/(16 pi x^{3/2}), which over this
/// window drags the fitted exponent to ~1.13. The check is retained at the
/// stated tolerance and fails against the exact computation.
pub fn check_right_tail_fit(sol: &PainleveSolution) -> CheckResult {
    let pts: Vec<(f64, f64)> = grid(4.0, 7.0, 0.25)
        .into_iter()
        .map(|x| (x, 1.0 - tw_cdf(TwBeta::Two, x, sol).unwrap()))
        .collect();
    let fit = fit_tail_exponent(&pts).unwrap();
    let k = fit.coefficient();
    let k_target = 4.0 / 3.0;
    let c_ok = (1.40..=1.60).contains(&fit.exponent);
    let k_ok = (k - k_target).abs() <= 0.15 * k_target;
    CheckResult::new(
        "right_tail_fit_f2",
        c_ok && k_ok,
        json!({"exponent": fit.exponent, "coefficient": k, "r_squared": fit.r_squared}),
        "exponent in [1.40, 1.60], coefficient within 15% of 4/3",
        format!(
            "exact tail carries a 1/(16 pi x^{{3/2}}) prefactor; fitted c = {:.4}, k = {:.4}",
            fit.exponent, k
        ),
    )
}

/// Left-tail power-law fit of the exact F2(-x) over [4, 7].
///
/// The exponent lands inside [2.85, 3.15]; the coefficient is dragged ~17%
/// above 1/12 by the x^{-1/8} prefactor of the exact left tail, outside
/// the 15% tolerance, so this check fails against the exact computation.
pub fn check_left_tail_fit(sol: &PainleveSolution) -> CheckResult {
    let pts: Vec<(f64, f64)> = grid(4.0, 7.0, 0.25)
        .into_iter()
        .map(|x| (x, tw_cdf(TwBeta::Two, -x, sol).unwrap()))
        .collect();
    let fit = fit_tail_exponent(&pts).unwrap();
    let k = fit.coefficient();
    let k_target = 1.0 / 12.0;
    let c_ok = (2.85..=3.15).contains(&fit.exponent);
    let k_ok = (k - k_target).abs() <= 0.15 * k_target;
    CheckResult::new(
        "left_tail_fit_f2",
        c_ok && k_ok,
        json!({"exponent": fit.exponent, "coefficient": k, "coefficient_times_12": 12.0 * k}),
        "exponent in [2.85, 3.15], coefficient within 15% of 1/12",
        format!("fitted c = {:.4}, k = {:.5} = {:.4}/12", fit.exponent, k, 12.0 * k),
    )
}

/// Edge universality: scaled largest-eigenvalue samples against F_beta.
pub fn check_edge_ks(beta: TwBeta, scale: VerifyScale, sol: &PainleveSolution) -> CheckResult {
    let (n_samples, tol) = match scale {
        VerifyScale::Default => (50_000, 0.05),
        VerifyScale::Quick => (5_000, 0.08),
    };
    let spec = EnsembleSpec::BetaHermite { beta: beta.as_f64(), n_dim: 200 };
    let batch = run_batch(&spec, n_samples, VERIFY_SEED).unwrap();
    let (lo, hi) = tw_range(beta, sol);
    let ks = ks_statistic(&batch.scaled_samples, |x| {
        if x <= lo {
            0.0
        } else if x >= hi {
            1.0
        } else {
            tw_cdf(beta, x, sol).unwrap()
        }
    });
    CheckResult::new(
        &format!("edge_ks_beta{}", beta.as_f64() as u32),
        ks <= tol,
        json!({"ks": ks, "n_dim": 200, "samples": n_samples}),
        &format!("KS <= {tol}"),
        String::new(),
    )
}

/// The Gaussian-criterion statistic approaches (2 beta/3) sqrt(x)/log(x)
/// and the classifier flags every beta.
pub fn check_theorem1_limit() -> CheckResult {
    let mut measured = serde_json::Map::new();
    let mut ok = true;
    for beta in [0.5, 1.0, 2.0, 4.0, 10.0] {
        let tail = TailFunction::absolute(
            TailFunction::asymptote(beta, Side::Left).unwrap(),
            TailFunction::asymptote(beta, Side::Right).unwrap(),
        );
        let x = 1e4_f64;
        let stat = id_gaussian_statistic(&tail, x).unwrap();
        let ratio = stat * x.ln() / ((2.0 * beta / 3.0) * x.sqrt());
        // The statistic is linear in beta, so the decision threshold
        // scales with it (10 at beta = 2).
        let threshold = 5.0 * beta;
        let grid: Vec<f64> = (0..25)
            .map(|i| (10.0_f64.ln() + (1e6_f64.ln() - 10.0_f64.ln()) * i as f64 / 24.0).exp())
            .collect();
        let opts = ClassifyOptions { non_gaussian_asserted: true, exp_bound: None };
        let verdict = classify_id(&tail, &grid, threshold, &opts).unwrap();
        let this_ok = (0.95..=1.05).contains(&ratio)
            && verdict.verdict == VerdictKind::NotIdGaussianCriterion;
        ok &= this_ok;
        measured.insert(
            format!("beta_{beta}"),
            json!({"limit_ratio": ratio, "verdict": verdict.verdict}),
        );
    }
    CheckResult::new(
        "theorem1_limit_and_classify",
        ok,
        serde_json::Value::Object(measured),
        "limit ratio in [0.95, 1.05] at x = 1e4; NotID_GaussianCriterion on [10, 1e6]",
        String::new(),
    )
}

/// Two-sided/right tail ratio at x = 5, beta = 2.
///
/// At leading order the left tail exp(-beta x^3/24) still dominates the
/// right tail at x = 5 (the crossover sits at x = 16^{2/3} ~ 6.35), so the
/// ratio there is ~90, far above the stated 1 + 1e-6; the bound only sets
/// in around x = 8.2. The check is retained as stated and fails.
pub fn check_lemma1_ratio() -> CheckResult {
    let x = 5.0;
    let log_diff = two_sided_tail(2.0, x).unwrap() - tail_asymptote(2.0, Side::Right, x).unwrap();
    let ratio = log_diff.exp();
    CheckResult::new(
        "lemma1_ratio_at_5",
        (1.0..=1.0 + 1e-6).contains(&ratio),
        json!({"ratio": ratio, "log_difference": log_diff}),
        "ratio in [1, 1 + 1e-6] at x = 5",
        format!("left/right crossover is at x = 16^(2/3) ~ 6.35; ratio(5) = {ratio:.1}"),
    )
}

/// Empirical GUE-law batch satisfies the subexponential bound with
/// (a, b, c) = (2, 0.8 * 2N, 2) on the centered, sqrt(N)-normalized scale.
pub fn check_gue_subexponential(scale: VerifyScale) -> CheckResult {
    let n_samples = match scale {
        VerifyScale::Default => 100_000,
        VerifyScale::Quick => 10_000,
    };
    let n_dim = 50usize;
    let spec = EnsembleSpec::BetaHermite { beta: 2.0, n_dim };
    let batch = run_batch(&spec, n_samples, VERIFY_SEED).unwrap();
    let nf = n_dim as f64;
    let mean = batch.scaled_samples.iter().sum::<f64>() / n_samples as f64;
    // (lambda - mean lambda)/sqrt(N) = (scaled - mean scaled)/N^{2/3}
    let mut devs: Vec<f64> = batch
        .scaled_samples
        .iter()
        .map(|s| (s - mean).abs() / nf.powf(2.0 / 3.0))
        .collect();
    devs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tail = TailFunction::empirical_from_sorted(devs);
    let (a, b, c) = (2.0, 0.8 * 2.0 * nf, 2.0);
    let x_grid = grid(0.2, 0.8, 0.05);
    let opts = ClassifyOptions { non_gaussian_asserted: true, exp_bound: Some((a, b, c)) };
    let verdict = classify_id(&tail, &x_grid, 10.0, &opts).unwrap();
    let report = check_exponential_bound(&tail, a, b, c, &x_grid).unwrap();
    CheckResult::new(
        "gue_subexponential_verdict",
        verdict.verdict == VerdictKind::NotIdSubexponentialBound && report.holds,
        json!({
            "verdict": verdict.verdict,
            "bound_holds": report.holds,
            "first_violation": report.first_violation,
            "samples": n_samples,
        }),
        "NotID_SubexponentialBound with (a, b, c) = (2, 80, 2) on [0.2, 0.8]",
        String::new(),
    )
}

/// Empirical GOE batch against exp(-N x^2 / 9) for x >= 2.5 on the
/// |lambda|/sqrt(N) scale.
///
/// At this sample size the empirical tail is zero beyond 2.5 and the bound
/// holds; rate-function arithmetic puts the true exceedance probability at
/// x = 2.5 near 1e-6, above the bound's 8e-16, so the bound itself is only
/// genuinely valid from roughly x = 3.5 on. The check records what the
/// data can resolve.
pub fn check_goe_bound(scale: VerifyScale) -> CheckResult {
    let n_samples = match scale {
        VerifyScale::Default => 100_000,
        VerifyScale::Quick => 10_000,
    };
    let n_dim = 50usize;
    let spec = EnsembleSpec::BetaHermite { beta: 1.0, n_dim };
    let batch = run_batch(&spec, n_samples, VERIFY_SEED).unwrap();
    let nf = n_dim as f64;
    let mut normed: Vec<f64> = batch
        .scaled_samples
        .iter()
        .map(|s| {
            let lambda = s / nf.powf(1.0 / 6.0) + 2.0 * nf.sqrt();
            (lambda / nf.sqrt()).abs()
        })
        .collect();
    normed.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let max_seen = *normed.last().unwrap();
    let tail = TailFunction::empirical_from_sorted(normed);
    let x_grid = grid(2.5, 3.5, 0.1);
    let report = check_exponential_bound(&tail, 1.0, nf / 9.0, 2.0, &x_grid).unwrap();
    CheckResult::new(
        "goe_bound_check",
        report.holds,
        json!({
            "bound_holds": report.holds,
            "first_violation": report.first_violation,
            "max_normalized_sample": max_seen,
            "samples": n_samples,
        }),
        "empirical P(|lambda|/sqrt(N) >= x) <= exp(-N x^2/9) for x in [2.5, 3.5]",
        String::new(),
    )
}

/// Mean-normalized 2x2 spacing against the Wigner surmise CDF.
pub fn check_wigner_spacing(scale: VerifyScale) -> CheckResult {
    let (n_samples, tol) = match scale {
        VerifyScale::Default => (100_000, 0.02),
        VerifyScale::Quick => (20_000, 0.03),
    };
    let spec = EnsembleSpec::BetaHermite { beta: 1.0, n_dim: 2 };
    let mut spacings: Vec<f64> = (0..n_samples as u64)
        .map(|i| {
            let mut rng = substream(VERIFY_SEED, i);
            let t = sample_beta_hermite(&spec, &mut rng).unwrap();
            let ev = all_eigenvalues(&t, 1e-12);
            ev[1] - ev[0]
        })
        .collect();
    let mean = spacings.iter().sum::<f64>() / n_samples as f64;
    for s in &mut spacings {
        *s /= mean;
    }
    spacings.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ks = ks_statistic(&spacings, |s| {
        1.0 - (-std::f64::consts::FRAC_PI_4 * s * s).exp()
    });
    CheckResult::new(
        "wigner_spacing_ks",
        ks <= tol,
        json!({"ks": ks, "samples": n_samples, "mean_spacing": mean}),
        &format!("KS <= {tol}"),
        String::new(),
    )
}

/// The surmise survival violates the R+ divisibility condition for each
/// scanned constant.
pub fn check_surmise_rplus() -> CheckResult {
    let tail = TailFunction::analytic_log("wigner-surmise", |x| {
        -std::f64::consts::FRAC_PI_4 * x * x
    });
    let x_grid: Vec<f64> = (0..400)
        .map(|i| (2.0_f64.ln() + (1e4_f64.ln() - 2.0_f64.ln()) * i as f64 / 399.0).exp())
        .collect();
    let verdict = classify_rplus_id(&tail, &[1.0, 10.0, 100.0], &x_grid).unwrap();
    CheckResult::new(
        "surmise_rplus",
        verdict.verdict == VerdictKind::NotIdRPlusCriterion && verdict.evidence.len() == 3,
        json!({"verdict": verdict.verdict, "witnesses": verdict.evidence}),
        "violation witness for each a in {1, 10, 100} on [2, 1e4]",
        String::new(),
    )
}

/// Stochastic Airy draws match the tridiagonal model's moments.
pub fn check_sao_moments(scale: VerifyScale) -> CheckResult {
    let (n_sao, n_tri) = match scale {
        VerifyScale::Default => (2_000, 10_000),
        VerifyScale::Quick => (300, 2_000),
    };
    let sao_spec =
        EnsembleSpec::StochasticAiry { beta: 2.0, domain_length: 10.0, step_size: 0.01 };
    let sao = run_batch(&sao_spec, n_sao, VERIFY_SEED).unwrap();
    let tri_spec = EnsembleSpec::BetaHermite { beta: 2.0, n_dim: 500 };
    let tri = run_batch(&tri_spec, n_tri, VERIFY_SEED + 1).unwrap();

    let stats = |v: &[f64]| {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, var)
    };
    let (m1, v1) = stats(&sao.scaled_samples);
    let (m2, v2) = stats(&tri.scaled_samples);
    let se_mean = (v1 / n_sao as f64 + v2 / n_tri as f64).sqrt();
    let se_var = ((2.0 / (n_sao as f64 - 1.0)) * v1 * v1
        + (2.0 / (n_tri as f64 - 1.0)) * v2 * v2)
        .sqrt();
    let mean_z = (m1 - m2) / se_mean;
    let var_z = (v1 - v2) / se_var;
    CheckResult::new(
        "sao_vs_tridiagonal_moments",
        mean_z.abs() <= 3.0 && var_z.abs() <= 3.0,
        json!({
            "sao_mean": m1, "sao_var": v1,
            "tridiag_mean": m2, "tridiag_var": v2,
            "mean_z": mean_z, "var_z": var_z,
        }),
        "mean and variance within 3 combined standard errors",
        String::new(),
    )
}

/// First zero of Ai located by bisection; the operator's ground state is
/// the continuum limit of the zero-noise discretization.
pub fn first_airy_zero() -> f64 {
    let (mut lo, mut hi) = (-2.5_f64, -2.2_f64);
    debug_assert!(airy_ai(lo) < 0.0 && airy_ai(hi) > 0.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if airy_ai(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Zero-noise stochastic Airy ground state against the first Airy zero.
pub fn check_sao_zero_noise() -> CheckResult {
    use crate::ensembles::{sao_ground_state_negated, SaoGrid};
    let grid = SaoGrid::zero_noise(10.0, 0.005);
    let got = sao_ground_state_negated(2.0, &grid);
    let want = first_airy_zero();
    let diff = (got - want).abs();
    CheckResult::new(
        "sao_zero_noise_ground_state",
        diff <= 0.01,
        json!({"ground_state": got, "first_airy_zero": want, "difference": diff}),
        "within 0.01 at h = 0.005",
        String::new(),
    )
}

/// Expands det(T - x I) by the three-term recurrence and returns its real
/// roots, located by sign scanning plus bisection. Exact-arithmetic-free
/// but entirely independent of the Sturm-count path.
pub fn charpoly_roots(t: &TridiagonalMatrix) -> Vec<f64> {
    let n = t.order();
    // p_k holds coefficients of det(T_k - x I), ascending powers.
    let mut p_prev: Vec<f64> = vec![1.0];
    let mut p: Vec<f64> = vec![t.diag()[0], -1.0];
    for k in 1..n {
        // p_next = (d_k - x) p - e_{k-1}^2 p_prev
        let mut next = vec![0.0; p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i] += t.diag()[k] * c;
            next[i + 1] -= c;
        }
        let e2 = t.offdiag()[k - 1] * t.offdiag()[k - 1];
        for (i, c) in p_prev.iter().enumerate() {
            next[i] -= e2 * c;
        }
        p_prev = std::mem::replace(&mut p, next);
    }
    let eval = |x: f64| p.iter().rev().fold(0.0_f64, |acc, c| acc * x + c);

    let (lo, hi) = t.gershgorin_bounds();
    let (lo, hi) = (lo - 1.0, hi + 1.0);
    let steps = 20_000;
    let h = (hi - lo) / steps as f64;
    let mut roots = Vec::with_capacity(n);
    let mut prev_x = lo;
    let mut prev_v = eval(lo);
    for i in 1..=steps {
        let x = lo + i as f64 * h;
        let v = eval(x);
        if prev_v == 0.0 {
            roots.push(prev_x);
        } else if prev_v.signum() != v.signum() && v != 0.0 {
            let (mut a, mut b) = (prev_x, x);
            let mut fa = prev_v;
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = eval(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fa.signum() == fm.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_x = x;
        prev_v = v;
    }
    roots
}

/// Cyclic Jacobi eigenvalue iteration for small dense symmetric matrices;
/// independent of both the Householder reduction and the Sturm solver.
pub fn jacobi_eigenvalues(m: &DenseSymmetricMatrix) -> Vec<f64> {
    let n = m.order();
    let mut a: Vec<f64> = (0..n * n).map(|i| m.at(i / n, i % n)).collect();
    let idx = |i: usize, j: usize| i * n + j;
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[idx(i, j)] * a[idx(i, j)];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[idx(q, q)] - a[idx(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - s * aqk;
                    a[idx(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Bisection eigenvalues against characteristic-polynomial roots for
/// random small tridiagonal matrices.
pub fn check_bisection_vs_charpoly(scale: VerifyScale) -> CheckResult {
    let trials = match scale {
        VerifyScale::Default => 1000,
        VerifyScale::Quick => 200,
    };
    let mut rng = substream(VERIFY_SEED, 0xC0FFEE);
    let mut worst = 0.0_f64;
    for trial in 0..trials {
        let n = 2 + (trial % 3);
        let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let t = TridiagonalMatrix::new(diag, off).unwrap();
        let got = all_eigenvalues(&t, 1e-13);
        let want = charpoly_roots(&t);
        if want.len() != n {
            return CheckResult::new(
                "bisection_vs_charpoly",
                false,
                json!({"trial": trial, "roots_found": want.len(), "order": n}),
                "oracle must isolate all roots",
                "characteristic polynomial root scan failed".to_string(),
            );
        }
        for (g, w) in got.iter().zip(want.iter()) {
            worst = worst.max((g - w).abs());
        }
    }
    CheckResult::new(
        "bisection_vs_charpoly",
        worst <= 1e-9,
        json!({"trials": trials, "worst_abs_difference": worst}),
        "agreement to 1e-9",
        String::new(),
    )
}

/// Householder reduction preserves dense spectra (against the Jacobi
/// oracle) for random symmetric matrices.
pub fn check_householder_spectrum(scale: VerifyScale) -> CheckResult {
    let trials = match scale {
        VerifyScale::Default => 100,
        VerifyScale::Quick => 20,
    };
    let mut rng = substream(VERIFY_SEED, 0xBEEF);
    let n = 10;
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let mut lower = vec![0.0; n * (n + 1) / 2];
        for v in &mut lower {
            *v = rng.gen_range(-1.0..1.0);
        }
        let dense =
            DenseSymmetricMatrix::from_lower(n, |i, j| lower[i * (i + 1) / 2 + j]).unwrap();
        let tri = householder_tridiagonalize(&dense);
        let got = all_eigenvalues(&tri, 1e-13);
        let want = jacobi_eigenvalues(&dense);
        for (g, w) in got.iter().zip(want.iter()) {
            worst = worst.max((g - w).abs());
        }
    }
    CheckResult::new(
        "householder_spectrum_preserved",
        worst <= 1e-9,
        json!({"trials": trials, "order": n, "worst_abs_difference": worst}),
        "agreement to 1e-9",
        String::new(),
    )
}

/// Painleve pipeline integrity: boundary match, ordering, monotone CDFs
/// with correct limits, and step-halving stability.
pub fn check_painleve_integrity(sol: &PainleveSolution) -> CheckResult {
    let q6_diff = (sol.q_at(6.0).unwrap() - airy_ai(6.0)).abs();
    let q6_ok = q6_diff <= 1e-8;

    // Ordering at a common Painleve argument (F4's argument is rescaled,
    // so it is sampled at y / 2^{2/3}).
    let mut ordering_ok = true;
    let mut y = sol.s_min();
    while y <= sol.s_max() {
        let f1 = tw_cdf(TwBeta::One, y, sol).unwrap();
        let f2 = tw_cdf(TwBeta::Two, y, sol).unwrap();
        let f4 = tw_cdf(TwBeta::Four, y / crate::painleve::F4_ARG_SCALE, sol).unwrap();
        ordering_ok &= f1 <= f2.sqrt() + 1e-14 && f2.sqrt() <= f4 + 1e-14;
        y += 0.1;
    }

    let mut monotone_ok = true;
    let mut edges_ok = true;
    for beta in [TwBeta::One, TwBeta::Two, TwBeta::Four] {
        let (lo, hi) = tw_range(beta, sol);
        let mut prev = -1.0;
        let mut x = lo;
        while x <= hi {
            let f = tw_cdf(beta, x, sol).unwrap();
            monotone_ok &= f >= prev - 1e-12 && (0.0..=1.0).contains(&f);
            prev = f;
            x += 0.05;
        }
        edges_ok &= tw_cdf(beta, lo, sol).unwrap() <= 1e-6;
        edges_ok &= tw_cdf(beta, hi, sol).unwrap() >= 1.0 - 1e-6;
    }

    let halved =
        crate::painleve::solve_hastings_mcleod(sol.s_min(), sol.s_max(), 0.5 * sol.step())
            .unwrap();
    let mut halving_worst = 0.0_f64;
    for x in [-5.0, -2.0, 0.0, 2.0] {
        let a = tw_cdf(TwBeta::Two, x, sol).unwrap();
        let b = tw_cdf(TwBeta::Two, x, &halved).unwrap();
        halving_worst = halving_worst.max((a - b).abs());
    }
    let halving_ok = halving_worst <= 1e-8;

    CheckResult::new(
        "painleve_integrity",
        q6_ok && ordering_ok && monotone_ok && edges_ok && halving_ok,
        json!({
            "q6_vs_airy": q6_diff,
            "ordering_ok": ordering_ok,
            "monotone_ok": monotone_ok,
            "edges_ok": edges_ok,
            "step_halving_worst": halving_worst,
        }),
        "q(6)-Ai(6) <= 1e-8; F1 <= sqrt(F2) <= F4; monotone with 1e-6 edge limits; halving <= 1e-8",
        String::new(),
    )
}

/// Identical batches from 1-thread and 8-thread pools, byte for byte.
pub fn check_threads_determinism() -> CheckResult {
    let spec = EnsembleSpec::BetaHermite { beta: 2.0, n_dim: 20 };
    let run_with = |threads: usize| -> SampleBatch {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| run_batch(&spec, 500, VERIFY_SEED).unwrap())
    };
    let a = run_with(1);
    let b = run_with(8);
    let render = |batch: &SampleBatch| {
        let mut s = String::from("index,scaled_value\n");
        for (i, v) in batch.scaled_samples.iter().enumerate() {
            s.push_str(&format!("{i},{v}\n"));
        }
        s
    };
    let csv_a = render(&a);
    let csv_b = render(&b);
    CheckResult::new(
        "threads_determinism",
        a.scaled_samples == b.scaled_samples && csv_a == csv_b,
        json!({"samples": 500, "identical": csv_a == csv_b}),
        "byte-identical output from 1-thread and 8-thread pools",
        String::new(),
    )
}
