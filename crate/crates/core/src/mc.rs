//! Monte Carlo verification of the predicted decay rates.
//!
//! The deviation probability `P(|θ̂_n − θ0| ≥ ε)` of either estimator should
//! shrink like `exp(−n inf I)`, the infimum running over the deviation set.
//! [`decay_rate`] estimates the exponent empirically by simulating the
//! estimator at several sample sizes and fitting `−log p̂(n)` through the
//! origin, then compares against the infimum of the analytic rate.
//!
//! Randomness comes from a counter-based construction: every variate is a
//! hash of (seed, stream, index), so any cell of any replication can be
//! regenerated independently and in parallel without carrying RNG state.

use crate::distributions::{FamilyId, FamilySpec};
use crate::exec;
use crate::mm_rate::{MmContext, MmError};
use crate::mq_rate::{entropy_bernoulli, MqContext};
use crate::search::bisect;
use crate::special::SQRT_2PI;
use crate::table::Table;
use std::fmt;

const GOLDEN_GAMMA: u64 = 0x9e3779b97f4a7c15;

/// SplitMix64 finalizer: a bijective avalanche mix on 64 bits.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xbf58476d1ce4e5b9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94d049bb133111eb);
    z ^= z >> 31;
    z
}

/// Uniform variate in the open interval (0, 1), fully determined by
/// (seed, stream, index).
#[inline]
pub fn u01(seed: u64, stream: u64, index: u64) -> f64 {
    let k = mix64(mix64(mix64(seed ^ GOLDEN_GAMMA).wrapping_add(stream)).wrapping_add(index));
    // 53 uniform bits, centered so 0 and 1 are unreachable
    ((k >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
}

/// n i.i.d. draws from F_θ0 by quantile transform (stream 0 of the seed).
pub fn sample(family: &FamilySpec, theta0: f64, n: usize, seed: u64) -> Vec<f64> {
    let fam = *family;
    exec::map_indexed(n, move |i| fam.quantile(theta0, u01(seed, 0, i as u64)))
}

/// 1-based index of the sample λ-quantile: ⌈λn⌉ clamped into [1, n].
pub fn quantile_index(lambda: f64, n: usize) -> usize {
    debug_assert!(lambda > 0.0 && lambda < 1.0);
    ((lambda * n as f64).ceil() as usize).clamp(1, n)
}

/// k-th smallest element (1-based), by in-place selection.
pub fn order_statistic(xs: &mut [f64], k: usize) -> f64 {
    assert!(k >= 1 && k <= xs.len());
    let (_, kth, _) = xs.select_nth_unstable_by(k - 1, f64::total_cmp);
    *kth
}

/// Inverts F_θ^{-1}(λ) = x for θ.  None when no parameter produces this
/// quantile value (wrong sign for a scale family, a skew quantile outside
/// the reachable range, and so on).
pub fn mq_estimate(family: &FamilySpec, lambda: f64, x: f64) -> Option<f64> {
    debug_assert!(lambda > 0.0 && lambda < 1.0);
    match family.id {
        FamilyId::WeibullScale { .. }
        | FamilyId::NormalScale { .. }
        | FamilyId::CauchyScale { .. }
        | FamilyId::LogisticScale { .. }
        | FamilyId::GumbelScale { .. } => {
            let q1 = family.quantile(1.0, lambda);
            let theta = x / q1;
            (theta > 0.0 && theta.is_finite()).then_some(theta)
        }
        FamilyId::NormalLoc { .. }
        | FamilyId::CauchyLoc { .. }
        | FamilyId::LogisticLoc { .. }
        | FamilyId::GumbelLoc { .. }
        | FamilyId::GTilde { .. } => Some(x - family.quantile(0.0, lambda)),
        FamilyId::Pareto => {
            if x <= 1.0 {
                return None;
            }
            Some(x.ln() / -(-lambda).ln_1p())
        }
        FamilyId::RightEndpoint { g } => {
            if x <= 0.0 {
                return None;
            }
            Some(g.g_inv(g.g(x) / lambda))
        }
        FamilyId::SkewNormal { .. }
        | FamilyId::SkewCauchy { .. }
        | FamilyId::SkewLogistic { .. } => {
            // quantile is strictly decreasing in θ; bisect on (-1, 1)
            let f = |t: f64| family.quantile(t, lambda) - x;
            let (a, b) = (-1.0 + 1e-12, 1.0 - 1e-12);
            if f(a) * f(b) > 0.0 {
                return None;
            }
            bisect(f, a, b, 1e-13).ok()
        }
    }
}

/// Inverts mean(θ) = m for θ.  None when the observed mean is outside the
/// range of the mean map.
pub fn mm_estimate(family: &FamilySpec, m: f64) -> Option<f64> {
    match family.id {
        FamilyId::WeibullScale { rho } => {
            let theta = m / crate::special::gamma(1.0 + 1.0 / rho);
            (theta > 0.0).then_some(theta)
        }
        FamilyId::LogisticScale { eta } => {
            if eta == 0.0 {
                return None;
            }
            let theta = m / eta;
            (theta > 0.0).then_some(theta)
        }
        FamilyId::GumbelScale { eta } => {
            let slope = eta + crate::special::EULER_GAMMA;
            if slope.abs() < 1e-12 {
                return None;
            }
            let theta = m / slope;
            (theta > 0.0).then_some(theta)
        }
        FamilyId::NormalLoc { .. } | FamilyId::LogisticLoc { .. } | FamilyId::GTilde { .. } => {
            Some(m)
        }
        FamilyId::GumbelLoc { s } => Some(m - s * crate::special::EULER_GAMMA),
        FamilyId::SkewNormal { s } => {
            let theta = -m / (4.0 * s / SQRT_2PI);
            (theta > -1.0 && theta < 1.0).then_some(theta)
        }
        FamilyId::SkewLogistic { s } => {
            let theta = -m / (4.0 * s * std::f64::consts::LN_2);
            (theta > -1.0 && theta < 1.0).then_some(theta)
        }
        FamilyId::Pareto => {
            if m <= 1.0 {
                return None;
            }
            Some(1.0 - 1.0 / m)
        }
        FamilyId::RightEndpoint { g } => match g {
            crate::distributions::EndpointG::Identity => (m > 0.0).then_some(2.0 * m),
            crate::distributions::EndpointG::Power { y } => (m > 0.0).then_some((y + 1.0) * m / y),
            crate::distributions::EndpointG::ExpMinusOne => {
                if m <= 0.0 {
                    return None;
                }
                let fam = *family;
                let f = |t: f64| fam.mean(t).unwrap() - m;
                let hi = m + 2.0; // mean(θ) ~ θ - 1 for large θ
                bisect(f, 1e-12, hi, 1e-13).ok()
            }
        },
        FamilyId::NormalScale { .. }
        | FamilyId::CauchyScale { .. }
        | FamilyId::CauchyLoc { .. }
        | FamilyId::SkewCauchy { .. } => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    Mq,
    Mm,
}

impl EstimatorKind {
    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Mq => "mq",
            EstimatorKind::Mm => "mm",
        }
    }
}

/// Full description of a decay-rate experiment.
#[derive(Debug, Clone)]
pub struct SimPlan {
    pub family: FamilySpec,
    pub theta0: f64,
    /// Quantile level; only used by the Mq estimator.
    pub lambda: f64,
    pub estimator: EstimatorKind,
    pub ns: Vec<usize>,
    pub reps: usize,
    pub eps: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum McError {
    InvalidPlan(String),
    /// Every cell came back with zero deviations: nothing to fit.  Larger
    /// reps or smaller n/ε would be needed.
    NoTailEvents,
    DegenerateFit(String),
}

impl fmt::Display for McError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McError::InvalidPlan(s) => write!(f, "invalid simulation plan: {s}"),
            McError::NoTailEvents => write!(
                f,
                "no deviation events observed in any cell; increase reps or decrease n or eps"
            ),
            McError::DegenerateFit(s) => write!(f, "degenerate decay fit: {s}"),
        }
    }
}

impl std::error::Error for McError {}

/// One sample size of the experiment.
#[derive(Debug, Clone, Copy)]
pub struct DecayCell {
    pub n: usize,
    pub deviations: usize,
    /// Replications whose estimator had no solution; counted as deviations.
    pub out_of_range: usize,
    pub p_hat: f64,
}

/// Fitted decay exponent plus the analytic prediction.
#[derive(Debug, Clone)]
pub struct DecayEstimate {
    pub plan: SimPlan,
    pub cells: Vec<DecayCell>,
    /// Cells with p̂ strictly inside (0, 1), the ones entering the fit.
    pub used: usize,
    /// Least-squares slope of −log p̂ against n, through the origin.
    pub slope: f64,
    /// inf of the rate over {|θ − θ0| ≥ ε} ∩ Θ.
    pub predicted: f64,
    pub relative_gap: f64,
}

impl DecayEstimate {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(vec![
            "n",
            "deviations",
            "out_of_range",
            "p_hat",
            "rate_estimate",
        ]);
        for (k, v) in self.plan.family.meta_pairs() {
            t.push_meta(&k, &v);
        }
        t.push_meta("theta0", &format!("{}", self.plan.theta0));
        t.push_meta("estimator", self.plan.estimator.name());
        if self.plan.estimator == EstimatorKind::Mq {
            t.push_meta("lambda", &format!("{}", self.plan.lambda));
        }
        t.push_meta("eps", &format!("{}", self.plan.eps));
        t.push_meta("reps", &format!("{}", self.plan.reps));
        t.push_meta("seed", &format!("{}", self.plan.seed));
        t.push_meta("slope", &format!("{:.17e}", self.slope));
        t.push_meta("predicted_rate", &format!("{:.17e}", self.predicted));
        t.push_meta("relative_gap", &format!("{:.17e}", self.relative_gap));
        t.push_meta("cells_used", &format!("{}", self.used));
        for c in &self.cells {
            let rate = if c.p_hat > 0.0 && c.p_hat < 1.0 {
                -c.p_hat.ln() / c.n as f64
            } else {
                f64::NAN
            };
            t.push_row(vec![
                c.n as f64,
                c.deviations as f64,
                c.out_of_range as f64,
                c.p_hat,
                rate,
            ]);
        }
        t
    }
}

/// inf of the analytic rate over the deviation set {|θ − θ0| ≥ ε} ∩ Θ.
/// Both rates grow with |θ − θ0| (the quantile map is monotone in θ), so
/// the infimum sits at one of the two boundary points.
fn predicted_rate(plan: &SimPlan) -> Result<f64, McError> {
    let dom = plan.family.theta_domain();
    let mut best = f64::INFINITY;
    for cand in [plan.theta0 - plan.eps, plan.theta0 + plan.eps] {
        if !dom.contains(cand) {
            continue;
        }
        let r = match plan.estimator {
            EstimatorKind::Mq => MqContext::new(plan.family, plan.theta0, plan.lambda)
                .map_err(|e| McError::InvalidPlan(e.to_string()))?
                .rate(cand),
            EstimatorKind::Mm => MmContext::new(plan.family, plan.theta0)
                .map_err(|e| McError::InvalidPlan(e.to_string()))?
                .rate(cand),
        };
        best = best.min(r);
    }
    Ok(best)
}

/// Runs the experiment and fits the empirical decay exponent.
pub fn decay_rate(plan: &SimPlan) -> Result<DecayEstimate, McError> {
    if !plan.family.theta_domain().contains(plan.theta0) {
        return Err(McError::InvalidPlan(format!(
            "theta0 = {} outside the parameter domain",
            plan.theta0
        )));
    }
    if plan.estimator == EstimatorKind::Mq && !(plan.lambda > 0.0 && plan.lambda < 1.0) {
        return Err(McError::InvalidPlan(format!(
            "lambda = {} outside (0, 1)",
            plan.lambda
        )));
    }
    if plan.reps < 1000 {
        return Err(McError::InvalidPlan(format!(
            "reps = {} too small for tail probabilities; need at least 1000",
            plan.reps
        )));
    }
    if plan.ns.is_empty() || plan.ns.iter().any(|&n| n < 2) {
        return Err(McError::InvalidPlan("sample sizes must be >= 2".into()));
    }
    if !(plan.eps > 0.0 && plan.eps.is_finite()) {
        return Err(McError::InvalidPlan(format!(
            "eps = {} must be positive",
            plan.eps
        )));
    }
    if plan.estimator == EstimatorKind::Mm {
        MmContext::new(plan.family, plan.theta0)
            .map_err(|e: MmError| McError::InvalidPlan(e.to_string()))?;
    }

    let predicted = predicted_rate(plan)?;

    let family = plan.family;
    let theta0 = plan.theta0;
    let lambda = plan.lambda;
    let eps = plan.eps;
    let seed = plan.seed;
    let estimator = plan.estimator;

    let mut cells = Vec::with_capacity(plan.ns.len());
    for &n in &plan.ns {
        let k = quantile_index(lambda, n);
        let flags = exec::map_indexed(plan.reps, move |r| {
            let stream = (n as u64).wrapping_mul(GOLDEN_GAMMA).wrapping_add(r as u64);
            let mut xs: Vec<f64> = (0..n)
                .map(|i| family.quantile(theta0, u01(seed, stream, i as u64)))
                .collect();
            let est = match estimator {
                EstimatorKind::Mq => {
                    let x = order_statistic(&mut xs, k);
                    mq_estimate(&family, lambda, x)
                }
                EstimatorKind::Mm => {
                    let m = xs.iter().sum::<f64>() / n as f64;
                    mm_estimate(&family, m)
                }
            };
            match est {
                None => (1u32, 1u32),
                Some(t) => (u32::from((t - theta0).abs() >= eps), 0),
            }
        });
        let deviations: usize = flags.iter().map(|&(d, _)| d as usize).sum();
        let out_of_range: usize = flags.iter().map(|&(_, o)| o as usize).sum();
        cells.push(DecayCell {
            n,
            deviations,
            out_of_range,
            p_hat: deviations as f64 / plan.reps as f64,
        });
    }

    let usable: Vec<&DecayCell> = cells
        .iter()
        .filter(|c| c.p_hat > 0.0 && c.p_hat < 1.0)
        .collect();
    if usable.is_empty() {
        return if cells.iter().all(|c| c.p_hat == 0.0) {
            Err(McError::NoTailEvents)
        } else {
            Err(McError::DegenerateFit(
                "every cell saturated at p = 1; the deviation threshold never discriminates".into(),
            ))
        };
    }

    let mut num = 0.0;
    let mut den = 0.0;
    for c in &usable {
        let n = c.n as f64;
        num += n * (-c.p_hat.ln());
        den += n * n;
    }
    let slope = num / den;
    let relative_gap = if predicted.is_finite() && predicted > 0.0 {
        (slope - predicted).abs() / predicted
    } else {
        f64::NAN
    };

    Ok(DecayEstimate {
        plan: plan.clone(),
        used: usable.len(),
        cells,
        slope,
        predicted,
        relative_gap,
    })
}

/// Consistency check of the curvature normalization against the classical
/// CLT for sample quantiles.
#[derive(Debug, Clone)]
pub struct VarianceCheck {
    pub family: FamilySpec,
    pub theta0: f64,
    pub lambda: f64,
    /// λ(1-λ)/f(q)², the CLT variance of √n (X_(k) − q).
    pub sigma2: f64,
    /// Second difference of x ↦ H(λ | F_θ0(x)) at the quantile; should be
    /// 1/sigma2.
    pub entropy_fd: f64,
    pub analytic_rel_err: f64,
    pub empirical_var: f64,
    pub empirical_rel_err: f64,
}

pub fn asymptotic_variance_check(
    family: &FamilySpec,
    theta0: f64,
    lambda: f64,
    n: usize,
    reps: usize,
    seed: u64,
) -> VarianceCheck {
    let q = family.quantile(theta0, lambda);
    let fq = family.pdf(theta0, q);
    let sigma2 = lambda * (1.0 - lambda) / (fq * fq);

    // analytic side: curvature of the entropy in x-space
    let fam = *family;
    let entropy_x = move |x: f64| entropy_bernoulli(lambda, fam.cdf(theta0, x).clamp(0.0, 1.0));
    let h = 1e-4 * q.abs().max(1.0);
    let d = |h: f64| (entropy_x(q + h) + entropy_x(q - h)) / (h * h);
    let entropy_fd = (4.0 * d(0.5 * h) - d(h)) / 3.0;
    let analytic_rel_err = (entropy_fd * sigma2 - 1.0).abs();

    // empirical side: variance of the scaled order statistic
    let k = quantile_index(lambda, n);
    let scaled = exec::map_indexed(reps, move |r| {
        let stream = (r as u64).wrapping_add(1).wrapping_mul(GOLDEN_GAMMA);
        let mut xs: Vec<f64> = (0..n)
            .map(|i| fam.quantile(theta0, u01(seed, stream, i as u64)))
            .collect();
        let x = order_statistic(&mut xs, k);
        (n as f64).sqrt() * (x - q)
    });
    let mean = scaled.iter().sum::<f64>() / reps as f64;
    let empirical_var =
        scaled.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (reps as f64 - 1.0);
    let empirical_rel_err = (empirical_var / sigma2 - 1.0).abs();

    VarianceCheck {
        family: *family,
        theta0,
        lambda,
        sigma2,
        entropy_fd,
        analytic_rel_err,
        empirical_var,
        empirical_rel_err,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{make_family, EndpointG};

    #[test]
    fn counter_rng_is_deterministic_and_in_range() {
        let a = u01(42, 7, 1000);
        let b = u01(42, 7, 1000);
        assert_eq!(a, b);
        assert_ne!(u01(42, 7, 1000), u01(42, 7, 1001));
        assert_ne!(u01(42, 7, 1000), u01(42, 8, 1000));
        assert_ne!(u01(42, 7, 1000), u01(43, 7, 1000));
        for i in 0..10_000 {
            let u = u01(1, 2, i);
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn counter_rng_is_roughly_uniform() {
        let n = 100_000;
        let mean: f64 = (0..n).map(|i| u01(9, 0, i)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.005, "mean = {mean}");
        let var: f64 = (0..n).map(|i| (u01(9, 0, i) - 0.5).powi(2)).sum::<f64>() / n as f64;
        assert!((var - 1.0 / 12.0).abs() < 0.002, "var = {var}");
    }

    #[test]
    fn sampling_matches_the_distribution() {
        let f = make_family(FamilyId::WeibullScale { rho: 1.0 }).unwrap();
        let xs = sample(&f, 2.0, 50_000, 11);
        assert_eq!(xs.len(), 50_000);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        // exponential(scale 2): sd of the mean is 2/sqrt(50000) ~ 0.009
        assert!((mean - 2.0).abs() < 0.04, "mean = {mean}");
        assert_eq!(sample(&f, 2.0, 100, 11), sample(&f, 2.0, 100, 11));
    }

    #[test]
    fn quantile_index_is_the_ceiling() {
        assert_eq!(quantile_index(0.5, 10), 5);
        assert_eq!(quantile_index(0.5, 9), 5);
        assert_eq!(quantile_index(0.501, 10), 6);
        assert_eq!(quantile_index(1e-9, 10), 1);
        assert_eq!(quantile_index(1.0 - 1e-12, 10), 10);
    }

    #[test]
    fn order_statistic_selects() {
        let mut xs: Vec<f64> = (1..=101).rev().map(|i| i as f64).collect();
        assert_eq!(order_statistic(&mut xs, 51), 51.0);
        assert_eq!(order_statistic(&mut xs, 1), 1.0);
        assert_eq!(order_statistic(&mut xs, 101), 101.0);
    }

    #[test]
    fn quantile_estimator_inverts_every_family() {
        use crate::distributions::SymmetricBase;
        let cases: Vec<(FamilySpec, f64)> = vec![
            (
                make_family(FamilyId::WeibullScale { rho: 0.5 }).unwrap(),
                1.3,
            ),
            (
                make_family(FamilyId::NormalScale { eta: -0.7 }).unwrap(),
                0.8,
            ),
            (
                make_family(FamilyId::CauchyScale { eta: 1.0 }).unwrap(),
                2.0,
            ),
            (
                make_family(FamilyId::LogisticScale { eta: 1.1 }).unwrap(),
                1.0,
            ),
            (
                make_family(FamilyId::GumbelScale { eta: 0.4 }).unwrap(),
                0.5,
            ),
            (make_family(FamilyId::NormalLoc { s: 2.0 }).unwrap(), -0.6),
            (make_family(FamilyId::CauchyLoc { s: 0.5 }).unwrap(), 1.4),
            (make_family(FamilyId::LogisticLoc { s: 1.5 }).unwrap(), 0.0),
            (make_family(FamilyId::GumbelLoc { s: 0.8 }).unwrap(), -2.0),
            (make_family(FamilyId::SkewNormal { s: 1.0 }).unwrap(), 0.4),
            (make_family(FamilyId::SkewCauchy { s: 1.0 }).unwrap(), -0.3),
            (make_family(FamilyId::SkewLogistic { s: 2.0 }).unwrap(), 0.7),
            (make_family(FamilyId::Pareto).unwrap(), 0.6),
            (
                make_family(FamilyId::RightEndpoint {
                    g: EndpointG::ExpMinusOne,
                })
                .unwrap(),
                1.7,
            ),
            (
                make_family(FamilyId::GTilde {
                    base: SymmetricBase::Normal,
                    s: 1.0,
                })
                .unwrap(),
                0.3,
            ),
        ];
        for (f, theta) in cases {
            for &lam in &[0.2, 0.5, 0.8] {
                let x = f.quantile(theta, lam);
                let est = mq_estimate(&f, lam, x).unwrap();
                assert!(
                    (est - theta).abs() <= 1e-9 * theta.abs().max(1.0),
                    "{}: inverted {est}, want {theta} at lambda {lam}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn quantile_estimator_rejects_unreachable_values() {
        // positive-scale family cannot produce a negative lower quantile value
        let f = make_family(FamilyId::WeibullScale { rho: 1.0 }).unwrap();
        assert_eq!(mq_estimate(&f, 0.5, -1.0), None);
        let f = make_family(FamilyId::Pareto).unwrap();
        assert_eq!(mq_estimate(&f, 0.5, 0.9), None);
        // skew quantile range at lambda = 0.5 is bounded
        let f = make_family(FamilyId::SkewNormal { s: 1.0 }).unwrap();
        assert_eq!(mq_estimate(&f, 0.5, 100.0), None);
    }

    #[test]
    fn moment_estimator_inverts_the_mean_map() {
        let cases: Vec<(FamilySpec, f64)> = vec![
            (
                make_family(FamilyId::WeibullScale { rho: 2.0 }).unwrap(),
                1.3,
            ),
            (
                make_family(FamilyId::GumbelScale { eta: 0.4 }).unwrap(),
                0.5,
            ),
            (
                make_family(FamilyId::LogisticScale { eta: -1.0 }).unwrap(),
                2.0,
            ),
            (make_family(FamilyId::NormalLoc { s: 2.0 }).unwrap(), -0.6),
            (make_family(FamilyId::GumbelLoc { s: 0.8 }).unwrap(), 1.0),
            (make_family(FamilyId::SkewNormal { s: 1.0 }).unwrap(), 0.4),
            (
                make_family(FamilyId::SkewLogistic { s: 2.0 }).unwrap(),
                -0.7,
            ),
            (make_family(FamilyId::Pareto).unwrap(), 0.6),
            (
                make_family(FamilyId::RightEndpoint {
                    g: EndpointG::Identity,
                })
                .unwrap(),
                1.7,
            ),
            (
                make_family(FamilyId::RightEndpoint {
                    g: EndpointG::ExpMinusOne,
                })
                .unwrap(),
                0.9,
            ),
            (
                make_family(FamilyId::RightEndpoint {
                    g: EndpointG::Power { y: 2.5 },
                })
                .unwrap(),
                1.1,
            ),
        ];
        for (f, theta) in cases {
            let m = f.mean(theta).unwrap();
            let est = mm_estimate(&f, m).unwrap();
            assert!(
                (est - theta).abs() <= 1e-9 * theta.abs().max(1.0),
                "{}: inverted {est}, want {theta}",
                f.name()
            );
        }
        let f = make_family(FamilyId::Pareto).unwrap();
        assert_eq!(mm_estimate(&f, 0.8), None);
    }

    #[test]
    fn decay_rate_approaches_the_exponent_from_above() {
        // Exact order-statistic tail probabilities (Beta law of U_(k)) for
        // this plan are 6.930e-2, 1.255e-2, 7.254e-4, so every cell keeps a
        // healthy event count at 20000 reps.  The through-origin fit carries
        // the subexponential prefactor into the slope, so it overshoots the
        // predicted exponent 0.030211 by a known margin: the exact-p slope
        // is 0.048024, a relative gap of 0.5896.
        let plan = SimPlan {
            family: make_family(FamilyId::WeibullScale { rho: 1.0 }).unwrap(),
            theta0: 1.0,
            lambda: 0.5,
            estimator: EstimatorKind::Mq,
            ns: vec![40, 80, 160],
            reps: 20000,
            eps: 0.4,
            seed: 7,
        };
        let est = decay_rate(&plan).unwrap();
        assert_eq!(est.used, 3);
        assert!(
            est.slope > est.predicted,
            "prefactor makes the fit overshoot"
        );
        assert!(
            est.relative_gap > 0.45 && est.relative_gap < 0.72,
            "gap {} should sit near the exact-probability value 0.59",
            est.relative_gap
        );
        // the per-n ratio -log(p)/n falls toward the exponent as n grows
        let ratios: Vec<f64> = est
            .cells
            .iter()
            .map(|c| -c.p_hat.ln() / c.n as f64)
            .collect();
        assert!(ratios[0] > ratios[1] && ratios[1] > ratios[2], "{ratios:?}");
        // deterministic reruns
        let again = decay_rate(&plan).unwrap();
        assert_eq!(est.slope, again.slope);
    }

    #[test]
    fn decay_rate_flags_empty_tails() {
        let plan = SimPlan {
            family: make_family(FamilyId::WeibullScale { rho: 1.0 }).unwrap(),
            theta0: 1.0,
            lambda: 0.5,
            estimator: EstimatorKind::Mq,
            ns: vec![400],
            reps: 1000,
            eps: 9.0,
            seed: 1,
        };
        assert!(matches!(decay_rate(&plan), Err(McError::NoTailEvents)));
    }

    #[test]
    fn decay_rate_validates_the_plan() {
        let f = make_family(FamilyId::WeibullScale { rho: 1.0 }).unwrap();
        let base = SimPlan {
            family: f,
            theta0: 1.0,
            lambda: 0.5,
            estimator: EstimatorKind::Mq,
            ns: vec![50],
            reps: 1000,
            eps: 0.3,
            seed: 0,
        };
        let mut bad = base.clone();
        bad.reps = 10;
        assert!(matches!(decay_rate(&bad), Err(McError::InvalidPlan(_))));
        let mut bad = base.clone();
        bad.lambda = 1.5;
        assert!(matches!(decay_rate(&bad), Err(McError::InvalidPlan(_))));
        let mut bad = base.clone();
        bad.eps = -1.0;
        assert!(matches!(decay_rate(&bad), Err(McError::InvalidPlan(_))));
        let mut bad = base;
        bad.estimator = EstimatorKind::Mm;
        bad.family = make_family(FamilyId::CauchyLoc { s: 1.0 }).unwrap();
        bad.theta0 = 0.0;
        assert!(matches!(decay_rate(&bad), Err(McError::InvalidPlan(_))));
    }

    #[test]
    fn variance_check_exponential_median() {
        let f = make_family(FamilyId::WeibullScale { rho: 1.0 }).unwrap();
        let check = asymptotic_variance_check(&f, 1.0, 0.5, 500, 2000, 3);
        // q = log 2, f(q) = 1/2, sigma2 = 0.25/0.25 = 1
        assert!((check.sigma2 - 1.0).abs() < 1e-14);
        assert!(
            check.analytic_rel_err < 1e-6,
            "analytic err {}",
            check.analytic_rel_err
        );
        assert!(
            check.empirical_rel_err < 0.15,
            "empirical err {}",
            check.empirical_rel_err
        );
    }
}
