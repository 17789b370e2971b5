//! Closed-form tail laws, concentration bounds and the
//! infinite-divisibility diagnostics built on them.
//!
//! Tail values are tiny far out (exp(-beta x^3/24) at x = 1e4 underflows
//! any float), so [`TailFunction`] works in log space throughout:
//! `log_survival` is the primitive and `survival` just exponentiates it.

use crate::montecarlo::SampleBatch;
use crate::painleve::{tw_range, PainleveError, PainleveSolution, TwBeta, F4_ARG_SCALE};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TailsError {
    #[error("{what} must be positive (got {value})")]
    NonPositive { what: &'static str, value: f64 },
    #[error("{0}")]
    Precondition(String),
    #[error("survival at {x} is {value}, not a probability below 1")]
    NotATail { x: f64, value: f64 },
    #[error("truncation at {at} leaves no probability mass")]
    ZeroMass { at: f64 },
    #[error(transparent)]
    Painleve(#[from] PainleveError),
}

/// Which tail of a two-sided law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// log(1 - e^a) for a <= 0, stable near both ends.
fn ln1mexp(a: f64) -> f64 {
    if a >= 0.0 {
        if a == 0.0 {
            return f64::NEG_INFINITY;
        }
        return f64::NAN;
    }
    if a > -std::f64::consts::LN_2 {
        (-a.exp_m1()).ln()
    } else {
        (-a.exp()).ln_1p()
    }
}

/// log(e^a + e^b), stable for deeply negative arguments.
fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// log cosh(u), stable for large |u|.
fn ln_cosh(u: f64) -> f64 {
    let a = u.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

#[derive(Clone)]
enum TailKind {
    /// Closed-form log-survival function.
    Analytic {
        name: &'static str,
        log_survival: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
    /// Leading-order Tracy-Widom tail with the o(1) factor dropped.
    Asymptote { beta: f64, side: Side },
    /// Exact tail from the Painleve pipeline.
    Painleve {
        beta: TwBeta,
        side: Side,
        sol: Arc<PainleveSolution>,
    },
    /// Step tail of a sorted sample with its stated validity range.
    Empirical {
        samples: Arc<Vec<f64>>,
        valid_range: (f64, f64),
    },
    /// P(|X| > x) from a (left, right) tail pair.
    Absolute {
        left: Box<TailFunction>,
        right: Box<TailFunction>,
    },
    /// Law conditioned on X > at.
    TruncateLeft {
        left: Box<TailFunction>,
        right: Box<TailFunction>,
        at: f64,
        log_retained: f64,
    },
    /// Law conditioned on X <= at.
    TruncateRight {
        left: Box<TailFunction>,
        right: Box<TailFunction>,
        at: f64,
        log_survival_at: f64,
        log_retained: f64,
    },
}

/// Survival-function abstraction x -> P(X > x).
#[derive(Clone)]
pub struct TailFunction {
    kind: TailKind,
}

impl fmt::Debug for TailFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TailKind::Analytic { name, .. } => write!(f, "TailFunction::Analytic({name})"),
            TailKind::Asymptote { beta, side } => {
                write!(f, "TailFunction::Asymptote(beta={beta}, {side:?})")
            }
            TailKind::Painleve { beta, side, .. } => {
                write!(f, "TailFunction::Painleve({beta:?}, {side:?})")
            }
            TailKind::Empirical { samples, valid_range } => write!(
                f,
                "TailFunction::Empirical(n={}, range=[{}, {}])",
                samples.len(),
                valid_range.0,
                valid_range.1
            ),
            TailKind::Absolute { .. } => write!(f, "TailFunction::Absolute"),
            TailKind::TruncateLeft { at, .. } => write!(f, "TailFunction::TruncateLeft({at})"),
            TailKind::TruncateRight { at, .. } => write!(f, "TailFunction::TruncateRight({at})"),
        }
    }
}

/// Modes for [`transform_tail`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailTransform {
    AbsoluteValue,
    TruncateLeft(f64),
    TruncateRight(f64),
}

impl TailFunction {
    /// Wraps a closed-form log-survival function.
    pub fn analytic_log(
        name: &'static str,
        log_survival: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TailFunction {
            kind: TailKind::Analytic { name, log_survival: Arc::new(log_survival) },
        }
    }

    /// Leading-order tail of TW_beta on the given side.
    pub fn asymptote(beta: f64, side: Side) -> Result<Self, TailsError> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(TailsError::NonPositive { what: "beta", value: beta });
        }
        Ok(TailFunction { kind: TailKind::Asymptote { beta, side } })
    }

    /// Exact Painleve-backed tail (`1 - F_beta` on the right,
    /// `F_beta(-x)` on the left).
    pub fn painleve(beta: TwBeta, side: Side, sol: Arc<PainleveSolution>) -> Self {
        TailFunction { kind: TailKind::Painleve { beta, side, sol } }
    }

    /// Empirical survival of a sample batch (step function of the sorted
    /// samples, resolution 1/n).
    pub fn empirical(batch: &SampleBatch) -> Self {
        Self::empirical_from_sorted(batch.scaled_samples.clone())
    }

    /// Empirical survival from an already-sorted sample vector.
    pub fn empirical_from_sorted(samples: Vec<f64>) -> Self {
        assert!(!samples.is_empty(), "empirical tail needs samples");
        let valid_range = (samples[0], samples[samples.len() - 1]);
        TailFunction {
            kind: TailKind::Empirical { samples: Arc::new(samples), valid_range },
        }
    }

    /// P(|X| > x) from the component tails.
    pub fn absolute(left: TailFunction, right: TailFunction) -> Self {
        TailFunction {
            kind: TailKind::Absolute { left: Box::new(left), right: Box::new(right) },
        }
    }

    /// x-range over which an empirical tail resolves probabilities; full
    /// line for analytic kinds.
    pub fn validity_range(&self) -> (f64, f64) {
        match &self.kind {
            TailKind::Empirical { valid_range, .. } => *valid_range,
            TailKind::Painleve { beta, sol, side } => {
                let (lo, hi) = tw_range(*beta, sol);
                match side {
                    Side::Right => (lo, hi),
                    Side::Left => (-hi, -lo),
                }
            }
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// log P(X > x); negative infinity where the tail vanishes.
    pub fn log_survival(&self, x: f64) -> Result<f64, TailsError> {
        match &self.kind {
            TailKind::Analytic { log_survival, .. } => Ok(log_survival(x)),
            TailKind::Asymptote { beta, side } => tail_asymptote(*beta, *side, x),
            TailKind::Painleve { beta, side, sol } => painleve_log_tail(*beta, *side, sol, x),
            TailKind::Empirical { samples, .. } => {
                let n = samples.len();
                let k = n - samples.partition_point(|v| *v <= x);
                Ok((k as f64 / n as f64).ln())
            }
            TailKind::Absolute { left, right } => {
                if !(x > 0.0) {
                    return Err(TailsError::NonPositive {
                        what: "two-sided tail argument",
                        value: x,
                    });
                }
                Ok(logaddexp(left.log_survival(x)?, right.log_survival(x)?))
            }
            TailKind::TruncateLeft { left, right, at, log_retained } => {
                if x <= *at {
                    Ok(0.0)
                } else {
                    Ok(full_log_survival(left, right, x)? - log_retained)
                }
            }
            TailKind::TruncateRight { left, right, at, log_survival_at, log_retained } => {
                if x >= *at {
                    Ok(f64::NEG_INFINITY)
                } else {
                    let ls = full_log_survival(left, right, x)?;
                    // log(S(x) - S(at)) - log(1 - S(at))
                    Ok(ls + ln1mexp(log_survival_at - ls) - log_retained)
                }
            }
        }
    }

    /// P(X > x).
    pub fn survival(&self, x: f64) -> Result<f64, TailsError> {
        Ok(self.log_survival(x)?.exp())
    }
}

/// Full-line survival assembled from a (left, right) tail pair:
/// P(X > x) is the right tail for x >= 0 and 1 - P(X < -|x|) below zero.
fn full_log_survival(
    left: &TailFunction,
    right: &TailFunction,
    x: f64,
) -> Result<f64, TailsError> {
    if x >= 0.0 {
        right.log_survival(x.max(f64::MIN_POSITIVE))
    } else {
        Ok(ln1mexp(left.log_survival(-x)?))
    }
}

fn painleve_log_tail(
    beta: TwBeta,
    side: Side,
    sol: &PainleveSolution,
    x: f64,
) -> Result<f64, TailsError> {
    let arg = match (side, beta) {
        (Side::Right, TwBeta::Four) => F4_ARG_SCALE * x,
        (Side::Right, _) => x,
        (Side::Left, TwBeta::Four) => -F4_ARG_SCALE * x,
        (Side::Left, _) => -x,
    };
    let i2w = sol.i2w_at(arg)?;
    let e = sol.e_at(arg)?;
    let log_cdf = match beta {
        TwBeta::Two => -i2w,
        TwBeta::One => e - 0.5 * i2w,
        TwBeta::Four => ln_cosh(e) - 0.5 * i2w,
    };
    Ok(match side {
        Side::Left => log_cdf,
        Side::Right => ln1mexp(log_cdf.min(0.0)),
    })
}

/// Leading-order log tail of TW_beta: -beta x^3 / 24 on the left,
/// -(2/3) beta x^{3/2} on the right; the o(1) factor is dropped.
pub fn tail_asymptote(beta: f64, side: Side, x: f64) -> Result<f64, TailsError> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(TailsError::NonPositive { what: "beta", value: beta });
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(TailsError::NonPositive { what: "tail argument", value: x });
    }
    Ok(match side {
        Side::Left => -beta * x * x * x / 24.0,
        Side::Right => -(2.0 / 3.0) * beta * x.powf(1.5),
    })
}

/// log P(|TW_beta| > x) from the leading-order tails, summed stably in
/// log space.
pub fn two_sided_tail(beta: f64, x: f64) -> Result<f64, TailsError> {
    Ok(logaddexp(
        tail_asymptote(beta, Side::Left, x)?,
        tail_asymptote(beta, Side::Right, x)?,
    ))
}

/// The Gaussian-characterization statistic -log P(|X| > x) / (x log x).
///
/// Returns infinity where the tail is identically zero (the statistic's
/// limsup diverges trivially there).
pub fn id_gaussian_statistic(tail: &TailFunction, x: f64) -> Result<f64, TailsError> {
    if !(x > 1.0) {
        return Err(TailsError::Precondition(format!(
            "statistic requires x > 1, got {x}"
        )));
    }
    let ls = tail.log_survival(x)?;
    if ls >= 0.0 {
        return Err(TailsError::NotATail { x, value: ls.exp() });
    }
    if ls == f64::NEG_INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok(-ls / (x * x.ln()))
}

/// One grid row of an exponential-bound comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub x: f64,
    pub log_tail: f64,
    pub log_bound: f64,
    pub pass: bool,
}

/// Result of checking `tail(x) <= a exp(-b x^c)` over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub holds: bool,
    pub first_violation: Option<f64>,
    pub rows: Vec<BoundRow>,
}

/// Checks P(|X| > x) <= a exp(-b x^c) at every grid point. The hypotheses
/// of the subexponential criterion require a, b > 0 and c > 1.
pub fn check_exponential_bound(
    tail: &TailFunction,
    a: f64,
    b: f64,
    c: f64,
    x_grid: &[f64],
) -> Result<BoundReport, TailsError> {
    if !(a > 0.0) {
        return Err(TailsError::NonPositive { what: "bound prefactor a", value: a });
    }
    if !(b > 0.0) {
        return Err(TailsError::NonPositive { what: "bound rate b", value: b });
    }
    if !(c > 1.0) {
        return Err(TailsError::Precondition(format!(
            "bound exponent must exceed 1, got {c}"
        )));
    }
    if x_grid.is_empty() {
        return Err(TailsError::Precondition("bound grid is empty".into()));
    }
    let mut rows = Vec::with_capacity(x_grid.len());
    let mut first_violation = None;
    for &x in x_grid {
        if !(x > 0.0) {
            return Err(TailsError::NonPositive { what: "bound grid point", value: x });
        }
        let log_tail = tail.log_survival(x)?;
        let log_bound = a.ln() - b * x.powf(c);
        let pass = log_tail <= log_bound;
        if !pass && first_violation.is_none() {
            first_violation = Some(x);
        }
        rows.push(BoundRow { x, log_tail, log_bound, pass });
    }
    Ok(BoundReport { holds: first_violation.is_none(), first_violation, rows })
}

/// Invariant random-matrix family for the finite-N concentration bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcentrationEnsemble {
    Goe,
    Gue,
}

/// Finite-N concentration bound: exp(-N x^2 / 9) for the GOE two-sided
/// uncentered tail, min(1, 2 exp(-2 N x^2)) for the GUE tail about the
/// mean. Both apply to eigenvalues normalized by sqrt(N).
pub fn concentration_bound(
    ensemble: ConcentrationEnsemble,
    n: usize,
    x: f64,
) -> Result<f64, TailsError> {
    if n == 0 {
        return Err(TailsError::Precondition("dimension must be at least 1".into()));
    }
    if !(x > 0.0) {
        return Err(TailsError::NonPositive { what: "bound argument", value: x });
    }
    let nf = n as f64;
    Ok(match ensemble {
        ConcentrationEnsemble::Goe => (-nf * x * x / 9.0).exp(),
        ConcentrationEnsemble::Gue => (2.0 * (-2.0 * nf * x * x).exp()).min(1.0),
    })
}

/// Result of the R+ infinite-divisibility necessary-condition scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RPlusReport {
    pub holds: bool,
    pub first_violation: Option<f64>,
}

/// Checks the necessary condition -log P(X > x) <= a x log x for a law on
/// R+ at every grid point (x > 1); a violation rules out infinite
/// divisibility for that `a`.
pub fn rplus_id_check(
    tail: &TailFunction,
    a: f64,
    x_grid: &[f64],
) -> Result<RPlusReport, TailsError> {
    if !(a > 0.0) {
        return Err(TailsError::NonPositive { what: "criterion constant a", value: a });
    }
    if x_grid.is_empty() {
        return Err(TailsError::Precondition("criterion grid is empty".into()));
    }
    let mut first_violation = None;
    for &x in x_grid {
        if !(x > 1.0) {
            return Err(TailsError::Precondition(format!(
                "criterion grid points must exceed 1, got {x}"
            )));
        }
        let neg_log = -tail.log_survival(x)?;
        if neg_log > a * x * x.ln() {
            first_violation = Some(x);
            break;
        }
    }
    Ok(RPlusReport { holds: first_violation.is_none(), first_violation })
}

/// Wigner surmise density (pi/2) s exp(-pi s^2 / 4).
pub fn wigner_surmise_pdf(s: f64) -> Result<f64, TailsError> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(TailsError::NonPositive { what: "spacing", value: s });
    }
    Ok(std::f64::consts::FRAC_PI_2 * s * (-std::f64::consts::FRAC_PI_4 * s * s).exp())
}

/// Wigner surmise survival exp(-pi s^2 / 4) (the integral of the density).
pub fn wigner_surmise_survival(s: f64) -> f64 {
    (-std::f64::consts::FRAC_PI_4 * s * s).exp()
}

/// Builds the transformed law's survival function from a (left, right)
/// tail pair: |X|, or X conditioned to one side of a cut.
pub fn transform_tail(
    left: &TailFunction,
    right: &TailFunction,
    mode: TailTransform,
) -> Result<TailFunction, TailsError> {
    match mode {
        TailTransform::AbsoluteValue => {
            Ok(TailFunction::absolute(left.clone(), right.clone()))
        }
        TailTransform::TruncateLeft(at) => {
            let log_retained = full_log_survival(left, right, at)?;
            if log_retained == f64::NEG_INFINITY {
                return Err(TailsError::ZeroMass { at });
            }
            Ok(TailFunction {
                kind: TailKind::TruncateLeft {
                    left: Box::new(left.clone()),
                    right: Box::new(right.clone()),
                    at,
                    log_retained,
                },
            })
        }
        TailTransform::TruncateRight(at) => {
            let log_survival_at = full_log_survival(left, right, at)?;
            if log_survival_at == 0.0 {
                return Err(TailsError::ZeroMass { at });
            }
            let log_retained = ln1mexp(log_survival_at);
            Ok(TailFunction {
                kind: TailKind::TruncateRight {
                    left: Box::new(left.clone()),
                    right: Box::new(right.clone()),
                    at,
                    log_survival_at,
                    log_retained,
                },
            })
        }
    }
}

/// Infinite-divisibility diagnostic outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    #[serde(rename = "NotID_GaussianCriterion")]
    NotIdGaussianCriterion,
    #[serde(rename = "NotID_SubexponentialBound")]
    NotIdSubexponentialBound,
    #[serde(rename = "NotID_RPlusCriterion")]
    NotIdRPlusCriterion,
    #[serde(rename = "Inconclusive")]
    Inconclusive,
}

/// Diagnostic outcome with its supporting evidence.
///
/// Evidence pairs are (x, statistic) for the Gaussian criterion, (x,
/// log tail - log bound) for the subexponential bound, and (witness x,
/// statistic at the witness) for the R+ criterion. A NotID verdict always
/// carries nonempty evidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdVerdict {
    pub verdict: VerdictKind,
    pub evidence: Vec<(f64, f64)>,
    #[serde(rename = "thresholdUsed")]
    pub threshold_used: f64,
}

/// Caller-supplied side conditions and fallbacks for [`classify_id`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    /// The criterion only rules out infinite divisibility for laws that
    /// are neither Gaussian nor degenerate; the caller asserts this.
    pub non_gaussian_asserted: bool,
    /// Optional (a, b, c) for the subexponential-bound fallback.
    pub exp_bound: Option<(f64, f64, f64)>,
}

/// Runs the tail diagnostics on a two-sided tail: the Gaussian-criterion
/// statistic on a wide grid, falling back to the subexponential bound.
/// Never claims infinite divisibility, only rules it out.
pub fn classify_id(
    tail: &TailFunction,
    evidence_grid: &[f64],
    threshold: f64,
    opts: &ClassifyOptions,
) -> Result<IdVerdict, TailsError> {
    if evidence_grid.len() < 8 {
        return Err(TailsError::Precondition(format!(
            "evidence grid needs at least 8 points, got {}",
            evidence_grid.len()
        )));
    }
    if evidence_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(TailsError::Precondition("evidence grid must be ascending".into()));
    }
    if !(threshold > 0.0) {
        return Err(TailsError::NonPositive { what: "threshold", value: threshold });
    }
    let inconclusive = IdVerdict {
        verdict: VerdictKind::Inconclusive,
        evidence: Vec::new(),
        threshold_used: threshold,
    };
    if !opts.non_gaussian_asserted {
        // Without the side condition no tail shape licenses a verdict.
        return Ok(inconclusive);
    }

    let first = evidence_grid[0];
    let last = evidence_grid[evidence_grid.len() - 1];
    // The statistic route needs x > 1 and at least a decade of growth to
    // read off the limsup trend.
    if first > 1.0 && last / first >= 10.0 {
        let stats: Vec<(f64, f64)> = evidence_grid
            .iter()
            .map(|&x| Ok((x, id_gaussian_statistic(tail, x)?)))
            .collect::<Result<_, TailsError>>()?;
        let top_decade_ok = stats
            .iter()
            .filter(|(x, _)| *x >= last / 10.0)
            .all(|(_, s)| *s > threshold);
        let upper_half = &stats[stats.len() / 2..];
        let increasing = upper_half.windows(2).all(|w| w[1].1 > w[0].1);
        if top_decade_ok && increasing {
            return Ok(IdVerdict {
                verdict: VerdictKind::NotIdGaussianCriterion,
                evidence: stats,
                threshold_used: threshold,
            });
        }
    }

    if let Some((a, b, c)) = opts.exp_bound {
        let report = check_exponential_bound(tail, a, b, c, evidence_grid)?;
        if report.holds {
            let evidence =
                report.rows.iter().map(|r| (r.x, r.log_tail - r.log_bound)).collect();
            return Ok(IdVerdict {
                verdict: VerdictKind::NotIdSubexponentialBound,
                evidence,
                threshold_used: threshold,
            });
        }
    }

    Ok(inconclusive)
}

/// Scans constants `a`: if the R+ necessary condition fails for every
/// scanned `a`, the law on R+ is flagged as not infinitely divisible.
pub fn classify_rplus_id(
    tail: &TailFunction,
    a_values: &[f64],
    x_grid: &[f64],
) -> Result<IdVerdict, TailsError> {
    if a_values.is_empty() {
        return Err(TailsError::Precondition("need at least one criterion constant".into()));
    }
    let mut evidence = Vec::with_capacity(a_values.len());
    for &a in a_values {
        let report = rplus_id_check(tail, a, x_grid)?;
        match report.first_violation {
            Some(x) => {
                let stat = -tail.log_survival(x)? / (x * x.ln());
                evidence.push((x, stat));
            }
            None => {
                return Ok(IdVerdict {
                    verdict: VerdictKind::Inconclusive,
                    evidence: Vec::new(),
                    threshold_used: a,
                })
            }
        }
    }
    Ok(IdVerdict {
        verdict: VerdictKind::NotIdRPlusCriterion,
        evidence,
        threshold_used: *a_values.last().unwrap(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::painleve::solve_default;
    use std::sync::OnceLock;

    fn sol() -> Arc<PainleveSolution> {
        static SOL: OnceLock<Arc<PainleveSolution>> = OnceLock::new();
        SOL.get_or_init(|| Arc::new(solve_default())).clone()
    }

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    #[test]
    fn asymptote_values() {
        assert!((tail_asymptote(2.0, Side::Left, 2.0).unwrap() + 2.0 / 3.0).abs() < 1e-15);
        assert!((tail_asymptote(2.0, Side::Right, 4.0).unwrap() + 32.0 / 3.0).abs() < 1e-12);
        assert!((tail_asymptote(1.0, Side::Right, 1.0).unwrap() + 2.0 / 3.0).abs() < 1e-15);
        assert!(tail_asymptote(0.0, Side::Left, 1.0).is_err());
        assert!(tail_asymptote(2.0, Side::Left, -1.0).is_err());
    }

    #[test]
    fn two_sided_sums_in_log_space() {
        // At small x both sides contribute; the sum exceeds each term.
        let both = two_sided_tail(2.0, 0.1).unwrap();
        let right = tail_asymptote(2.0, Side::Right, 0.1).unwrap();
        let left = tail_asymptote(2.0, Side::Left, 0.1).unwrap();
        assert!(both > right && both > left);
    }

    #[test]
    fn two_sided_collapses_to_right_tail_far_out() {
        // The left term decays like exp(-beta x^3/24), overtaking the right
        // term beyond x = 16^{2/3} ~ 6.35; by x = 9 the ratio is within
        // 1e-6 of 1 in log space.
        let d = two_sided_tail(2.0, 9.0).unwrap() - tail_asymptote(2.0, Side::Right, 9.0).unwrap();
        assert!(d >= 0.0 && d <= 1e-6, "log difference {d:e}");
    }

    #[test]
    fn two_sided_ratio_decreases_beyond_crossover() {
        // exp(two_sided)/exp(right) decreases monotonically to 1 once the
        // left tail is subdominant (x >= 4 at leading order).
        let mut prev = f64::INFINITY;
        let mut x = 4.0;
        while x <= 10.0 {
            let r = (two_sided_tail(2.0, x).unwrap()
                - tail_asymptote(2.0, Side::Right, x).unwrap())
            .exp();
            assert!(r >= 1.0);
            assert!(r <= prev);
            prev = r;
            x += 0.5;
        }
    }

    #[test]
    fn lemma_one_proof_shape() {
        // ratio - 1 = exp(-beta x^3/24 + (2/3) beta x^{3/2}) at leading
        // order, so it is dominated by the same expression with the right
        // exponent inflated by 1%.
        for beta in [0.5, 2.0, 4.0] {
            let mut x = 3.0;
            while x <= 10.0 {
                let ratio_minus_one = (two_sided_tail(beta, x).unwrap()
                    - tail_asymptote(beta, Side::Right, x).unwrap())
                .exp_m1();
                let envelope =
                    (-beta * x * x * x / 24.0 + (2.0 / 3.0) * beta * x.powf(1.5) * 1.01).exp();
                assert!(ratio_minus_one <= envelope, "x={x} beta={beta}");
                x += 0.5;
            }
        }
    }

    #[test]
    fn statistic_on_gaussian_square_tail() {
        // tail = exp(-x^2): statistic at x = e is e^2/(e * 1) = e.
        let t = TailFunction::analytic_log("exp(-x^2)", |x| -x * x);
        let s = id_gaussian_statistic(&t, std::f64::consts::E).unwrap();
        assert!((s - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn statistic_exact_cancellation() {
        let t = TailFunction::analytic_log("exp(-x log x)", |x: f64| -x * x.ln());
        for x in [1.5, 2.0, 10.0, 1e4] {
            assert!((id_gaussian_statistic(&t, x).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn statistic_on_tw_asymptote_matches_limit_form() {
        // (2/3) beta x^{3/2} / (x log x) = (2 beta / 3) sqrt(x) / log x;
        // at beta = 2, x = 1e4 that is 14.476...
        let t = TailFunction::asymptote(2.0, Side::Right).unwrap();
        let s = id_gaussian_statistic(&t, 1e4).unwrap();
        assert!((s - 14.476482730108394).abs() < 1e-9, "stat {s}");
        // The two-sided tail gives the same value: the left term is
        // negligible at x = 1e4.
        let both = TailFunction::absolute(
            TailFunction::asymptote(2.0, Side::Left).unwrap(),
            t,
        );
        let s2 = id_gaussian_statistic(&both, 1e4).unwrap();
        assert!((s2 - s).abs() < 1e-12);
    }

    #[test]
    fn statistic_theorem_limit_across_beta() {
        // stat * log(x) / ((2 beta/3) sqrt(x)) -> 1.
        for beta in [0.5, 1.0, 2.0, 4.0, 10.0] {
            let t = TailFunction::absolute(
                TailFunction::asymptote(beta, Side::Left).unwrap(),
                TailFunction::asymptote(beta, Side::Right).unwrap(),
            );
            let x = 1e4_f64;
            let s = id_gaussian_statistic(&t, x).unwrap();
            let ratio = s * x.ln() / ((2.0 * beta / 3.0) * x.sqrt());
            assert!((0.95..=1.05).contains(&ratio), "beta={beta}: ratio {ratio}");
        }
    }

    #[test]
    fn statistic_domain_errors() {
        let t = TailFunction::analytic_log("one", |_| 0.0);
        assert!(matches!(
            id_gaussian_statistic(&t, 2.0),
            Err(TailsError::NotATail { .. })
        ));
        let t2 = TailFunction::analytic_log("exp(-x)", |x| -x);
        assert!(id_gaussian_statistic(&t2, 0.5).is_err());
        let dead = TailFunction::analytic_log("zero", |_| f64::NEG_INFINITY);
        assert_eq!(id_gaussian_statistic(&dead, 2.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn exponential_bound_self_comparison() {
        // The GOE bound formula against itself holds everywhere (the
        // closure mirrors the bound's own arithmetic bit for bit).
        let n = 10.0;
        let t = TailFunction::analytic_log("goe-bound", move |x: f64| {
            1.0_f64.ln() - n / 9.0 * x.powf(2.0)
        });
        let grid: Vec<f64> = (1..=20).map(|i| 0.25 * i as f64).collect();
        let rep = check_exponential_bound(&t, 1.0, n / 9.0, 2.0, &grid).unwrap();
        assert!(rep.holds);
        assert!(rep.first_violation.is_none());
    }

    #[test]
    fn exponential_bound_witness() {
        // exp(-x) vs exp(-x^2) on [2, 10]: e^{-2} > e^{-4}, witness at 2.
        let t = TailFunction::analytic_log("exp(-x)", |x| -x);
        let grid: Vec<f64> = (2..=10).map(|i| i as f64).collect();
        let rep = check_exponential_bound(&t, 1.0, 1.0, 2.0, &grid).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.first_violation, Some(2.0));
    }

    #[test]
    fn exponential_bound_dominates_painleve_two_sided() {
        // a = 3, b = 1/13, c = 3 dominates the exact two-sided TW2 tail on
        // [1, 7]: the bound's cubic rate is slower than beta x^3/24 = x^3/12
        // with margin, and the prefactor covers the distribution body.
        let two_sided = TailFunction::absolute(
            TailFunction::painleve(TwBeta::Two, Side::Left, sol()),
            TailFunction::painleve(TwBeta::Two, Side::Right, sol()),
        );
        let grid: Vec<f64> = (0..25).map(|i| 1.0 + 6.0 * i as f64 / 24.0).collect();
        let rep = check_exponential_bound(&two_sided, 3.0, 1.0 / 13.0, 3.0, &grid).unwrap();
        assert!(rep.holds, "violation at {:?}", rep.first_violation);
    }

    #[test]
    fn painleve_right_tail_below_asymptote() {
        // Dropping the o(1) factor makes the leading-order tail an
        // overestimate: the exact -log(1 - F2) exceeds (4/3) x^{3/2} by a
        // factor that shrinks from ~1.43 at x = 5 to ~1.28 at x = 7.
        let exact = TailFunction::painleve(TwBeta::Two, Side::Right, sol());
        let leading = TailFunction::asymptote(2.0, Side::Right).unwrap();
        for x in [5.0, 6.0, 7.0] {
            let le = exact.log_survival(x).unwrap();
            let la = leading.log_survival(x).unwrap();
            assert!(le < la, "exact tail must be smaller at {x}");
            let log_ratio = le / la;
            assert!((1.25..=1.45).contains(&log_ratio), "x={x}: {log_ratio}");
        }
    }

    #[test]
    fn concentration_bound_values() {
        let goe = concentration_bound(ConcentrationEnsemble::Goe, 10, 3.0).unwrap();
        assert!((goe - (-10.0f64).exp()).abs() < 1e-18);
        let gue = concentration_bound(ConcentrationEnsemble::Gue, 10, 1.0).unwrap();
        assert!((gue - 2.0 * (-20.0f64).exp()).abs() < 1e-22);
        let capped = concentration_bound(ConcentrationEnsemble::Gue, 10, 1e-9).unwrap();
        assert_eq!(capped, 1.0);
    }

    #[test]
    fn rplus_check_exponential_tail_passes() {
        // x <= x log x for x > e, so exp(-x) satisfies the condition with
        // a = 1 on [3, 100].
        let t = TailFunction::analytic_log("exp(-x)", |x| -x);
        let grid: Vec<f64> = (3..=100).map(|i| i as f64).collect();
        assert!(rplus_id_check(&t, 1.0, &grid).unwrap().holds);
    }

    #[test]
    fn rplus_check_sqrt_tail_passes() {
        // sqrt(x) <= x log x requires x > e.
        let t = TailFunction::analytic_log("exp(-sqrt x)", |x: f64| -x.sqrt());
        let grid = log_grid(3.0, 1e6, 50);
        assert!(rplus_id_check(&t, 1.0, &grid).unwrap().holds);
    }

    #[test]
    fn rplus_check_surmise_fails_with_witness() {
        // pi x^2/4 outgrows a x log x; with a = 5 the witness is within
        // [2, 1e4].
        let t = TailFunction::analytic_log("surmise", |x| wigner_surmise_survival(x).ln());
        let grid = log_grid(2.0, 1e4, 200);
        let rep = rplus_id_check(&t, 5.0, &grid).unwrap();
        assert!(!rep.holds);
        assert!(rep.first_violation.is_some());
    }

    #[test]
    fn rplus_power_tail_dichotomy() {
        // exp(-k x^p): fails for every fixed a when p > 1 (long grid);
        // holds for p <= 1 once a >= k (grid beyond e).
        for (k, p, a, expect) in [
            (1.0, 1.5, 7.0, false),
            (0.5, 2.0, 20.0, false),
            (2.0, 1.0, 2.0, true),
            (3.0, 0.5, 3.0, true),
        ] {
            let t = TailFunction::analytic_log("power", move |x: f64| -k * x.powf(p));
            let grid = log_grid(3.0, 1e8, 120);
            let rep = rplus_id_check(&t, a, &grid).unwrap();
            assert_eq!(rep.holds, expect, "k={k} p={p} a={a}");
        }
    }

    #[test]
    fn surmise_density_normalization_and_mean() {
        // Simpson on [0, 12].
        let n = 24_000;
        let h = 12.0 / n as f64;
        let (mut mass, mut mean) = (0.0, 0.0);
        for i in 0..=n {
            let s = (i as f64 * h).max(1e-300);
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let p = wigner_surmise_pdf(s).unwrap();
            mass += w * p;
            mean += w * s * p;
        }
        mass *= h / 3.0;
        mean *= h / 3.0;
        assert!((mass - 1.0).abs() < 1e-10, "mass {mass}");
        assert!((mean - 1.0).abs() < 1e-8, "mean {mean}");
    }

    #[test]
    fn surmise_mode_at_sqrt_two_over_pi() {
        let mode = (2.0 / std::f64::consts::PI).sqrt();
        let eps = 1e-6;
        let at = wigner_surmise_pdf(mode).unwrap();
        assert!(wigner_surmise_pdf(mode - eps).unwrap() < at);
        assert!(wigner_surmise_pdf(mode + eps).unwrap() < at);
        // Derivative changes sign at the mode.
        let d_left = wigner_surmise_pdf(mode).unwrap() - wigner_surmise_pdf(mode - 1e-4).unwrap();
        let d_right = wigner_surmise_pdf(mode + 1e-4).unwrap() - wigner_surmise_pdf(mode).unwrap();
        assert!(d_left > 0.0 && d_right < 0.0);
    }

    #[test]
    fn surmise_survival_matches_integrated_density() {
        // d/ds [-exp(-pi s^2/4)] reproduces the density.
        for s in [0.3, 1.0, 2.5] {
            let h = 1e-6;
            let fd = (wigner_surmise_survival(s - h) - wigner_surmise_survival(s + h)) / (2.0 * h);
            assert!((fd - wigner_surmise_pdf(s).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn absolute_transform_matches_right_tail_far_out() {
        let left = TailFunction::asymptote(2.0, Side::Left).unwrap();
        let right = TailFunction::asymptote(2.0, Side::Right).unwrap();
        let abs = transform_tail(&left, &right, TailTransform::AbsoluteValue).unwrap();
        let d = abs.log_survival(9.0).unwrap() - right.log_survival(9.0).unwrap();
        assert!(d >= 0.0 && d <= 1e-6);
    }

    #[test]
    fn truncate_left_conditional_survival() {
        let left = TailFunction::painleve(TwBeta::Two, Side::Left, sol());
        let right = TailFunction::painleve(TwBeta::Two, Side::Right, sol());
        let t = 1.0;
        let trunc = transform_tail(&left, &right, TailTransform::TruncateLeft(t)).unwrap();
        // Survival is identically 1 up to the cut.
        assert_eq!(trunc.survival(t).unwrap(), 1.0);
        assert_eq!(trunc.survival(t - 0.5).unwrap(), 1.0);
        // Above the cut it is the renormalized parent survival.
        let x = 2.0;
        let want = right.survival(x).unwrap() / right.survival(t).unwrap();
        let got = trunc.survival(x).unwrap();
        assert!((got - want).abs() < 1e-12 * want);
    }

    #[test]
    fn truncate_right_conditional_survival() {
        let left = TailFunction::painleve(TwBeta::Two, Side::Left, sol());
        let right = TailFunction::painleve(TwBeta::Two, Side::Right, sol());
        let t = 0.0;
        let trunc = transform_tail(&left, &right, TailTransform::TruncateRight(t)).unwrap();
        assert_eq!(trunc.survival(t).unwrap(), 0.0);
        assert_eq!(trunc.survival(5.0).unwrap(), 0.0);
        // P(X > x | X <= 0) = (S(x) - S(0)) / (1 - S(0)).
        let x = -2.0;
        let s = |v: f64| {
            if v >= 0.0 {
                right.survival(v.max(1e-300)).unwrap()
            } else {
                1.0 - left.survival(-v).unwrap()
            }
        };
        let want = (s(x) - s(t)) / (1.0 - s(t));
        let got = trunc.survival(x).unwrap();
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn truncation_with_no_mass_is_an_error() {
        let emp = TailFunction::empirical_from_sorted(vec![0.0, 1.0, 2.0]);
        // Conditioning on X > 5 leaves nothing.
        let r = transform_tail(&emp, &emp, TailTransform::TruncateLeft(5.0));
        assert!(matches!(r, Err(TailsError::ZeroMass { .. })));
    }

    #[test]
    fn absolute_value_tail_fails_rplus_criterion() {
        // -log P(|TW_2| > x) grows like (4/3) x^{3/2}, eventually beating
        // a x log x for every fixed a; witnesses for a = 100 appear only
        // past x ~ 6e5, so the scan grid extends to 1e7.
        let abs = TailFunction::absolute(
            TailFunction::asymptote(2.0, Side::Left).unwrap(),
            TailFunction::asymptote(2.0, Side::Right).unwrap(),
        );
        let grid = log_grid(3.0, 1e7, 300);
        for a in [1.0, 10.0, 100.0] {
            let rep = rplus_id_check(&abs, a, &grid).unwrap();
            assert!(!rep.holds, "a = {a} not violated");
        }
        let verdict = classify_rplus_id(&abs, &[1.0, 10.0, 100.0], &grid).unwrap();
        assert_eq!(verdict.verdict, VerdictKind::NotIdRPlusCriterion);
        assert_eq!(verdict.evidence.len(), 3);
    }

    #[test]
    fn classify_tw_asymptote_not_id() {
        let t = TailFunction::absolute(
            TailFunction::asymptote(2.0, Side::Left).unwrap(),
            TailFunction::asymptote(2.0, Side::Right).unwrap(),
        );
        let grid = log_grid(10.0, 1e6, 25);
        let opts = ClassifyOptions { non_gaussian_asserted: true, exp_bound: None };
        let v = classify_id(&t, &grid, 10.0, &opts).unwrap();
        assert_eq!(v.verdict, VerdictKind::NotIdGaussianCriterion);
        assert!(!v.evidence.is_empty());
    }

    #[test]
    fn classify_exponential_tail_inconclusive() {
        // Statistic 2x/(x log x) = 2/log x decays; no verdict.
        let t = TailFunction::analytic_log("exp(-2x)", |x| -2.0 * x);
        let grid = log_grid(10.0, 1e6, 25);
        let opts = ClassifyOptions { non_gaussian_asserted: true, exp_bound: None };
        let v = classify_id(&t, &grid, 10.0, &opts).unwrap();
        assert_eq!(v.verdict, VerdictKind::Inconclusive);
    }

    #[test]
    fn classify_gated_by_gaussian_exclusion_flag() {
        // Even a super-(x log x) tail yields no verdict when the caller
        // does not assert non-Gaussianity.
        let t = TailFunction::analytic_log("exp(-x^2/2)", |x| -0.5 * x * x);
        let grid = log_grid(10.0, 1e6, 25);
        let opts = ClassifyOptions { non_gaussian_asserted: false, exp_bound: None };
        let v = classify_id(&t, &grid, 10.0, &opts).unwrap();
        assert_eq!(v.verdict, VerdictKind::Inconclusive);
        assert!(v.evidence.is_empty());
    }

    #[test]
    fn classify_rejects_bad_grids() {
        let t = TailFunction::analytic_log("exp(-x)", |x| -x);
        let opts = ClassifyOptions { non_gaussian_asserted: true, exp_bound: None };
        assert!(classify_id(&t, &[2.0, 3.0], 10.0, &opts).is_err());
        let descending: Vec<f64> = (0..10).map(|i| 100.0 - i as f64).collect();
        assert!(classify_id(&t, &descending, 10.0, &opts).is_err());
    }

    #[test]
    fn verdict_serializes_with_spec_names() {
        let v = IdVerdict {
            verdict: VerdictKind::NotIdGaussianCriterion,
            evidence: vec![(10.0, 3.5)],
            threshold_used: 10.0,
        };
        let json = serde_json::to_string(&v).unwrap();
        assert!(json.contains("\"NotID_GaussianCriterion\""));
        assert!(json.contains("\"thresholdUsed\""));
        let back: IdVerdict = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn painleve_tail_consistent_with_cdf() {
        use crate::painleve::tw_cdf;
        let right = TailFunction::painleve(TwBeta::One, Side::Right, sol());
        let left = TailFunction::painleve(TwBeta::One, Side::Left, sol());
        for x in [0.5, 2.0, 4.0] {
            let s = right.survival(x).unwrap();
            let c = tw_cdf(TwBeta::One, x, &sol()).unwrap();
            assert!((s + c - 1.0).abs() < 1e-12);
            let sl = left.survival(x).unwrap();
            let cl = tw_cdf(TwBeta::One, -x, &sol()).unwrap();
            assert!((sl - cl).abs() < 1e-12);
        }
    }

    #[test]
    fn empirical_tail_steps() {
        let t = TailFunction::empirical_from_sorted(vec![1.0, 2.0, 3.0, 4.0]);
        assert!((t.survival(2.5).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(t.survival(9.0).unwrap(), 0.0);
        assert_eq!(t.log_survival(9.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(t.validity_range(), (1.0, 4.0));
    }
}
