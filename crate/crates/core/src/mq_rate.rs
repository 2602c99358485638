//! Large-deviation rate function of the quantile-method estimator.
//!
//! Fix a level λ in (0, 1) and estimate θ by solving
//! `F_θ^{-1}(λ) = (sample λ-quantile)`.  The sample quantile of an i.i.d.
//! sample from F_{θ0} satisfies a large deviation principle, and pushing it
//! through the inverse quantile map gives the estimator the rate function
//!
//! ```text
//! I_{λ,θ0}(θ) = H(λ | h(θ)),   h(θ) = F_{θ0}(F_θ^{-1}(λ)),
//! ```
//!
//! where `H(p|q)` is the Bernoulli relative entropy.  When `F_θ^{-1}(λ)`
//! falls outside the support of F_{θ0} the rate is +∞.  The local curvature
//! `I''_{λ,θ0}(θ0) = h'(θ0)^2 / (λ(1-λ))` measures the exponential speed of
//! convergence near the truth and is the quantity the level search in
//! [`crate::lambda_opt`] maximizes.

use crate::distributions::{FamilyId, FamilySpec, SymmetricBase};
use crate::exec;
use crate::special::{norm_pdf, norm_quantile};
use crate::table::Table;
use std::f64::consts::PI;
use std::fmt;

/// Validation error for quantile-method computations.
#[derive(Debug, Clone, PartialEq)]
pub enum MqError {
    InvalidLambda { lambda: f64 },
    ThetaOutsideDomain { theta: f64, family: String },
}

impl fmt::Display for MqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MqError::InvalidLambda { lambda } => {
                write!(f, "quantile level {lambda} outside (0, 1)")
            }
            MqError::ThetaOutsideDomain { theta, family } => {
                write!(
                    f,
                    "theta = {theta} outside the parameter domain of {family}"
                )
            }
        }
    }
}

impl std::error::Error for MqError {}

/// Bernoulli relative entropy H(p|q) = p log(p/q) + (1-p) log((1-p)/(1-q)).
///
/// `p` must lie strictly inside (0, 1); `q` may touch the endpoints, where
/// the entropy is +∞.  The implementation is exact both for q close to p
/// (no cancellation: the log1p form keeps the quadratic term) and for q
/// within a few ulps of 0 or 1.
pub fn entropy_bernoulli(p: f64, q: f64) -> f64 {
    assert!(
        p > 0.0 && p < 1.0,
        "entropy_bernoulli: p = {p} outside (0,1)"
    );
    debug_assert!((0.0..=1.0).contains(&q), "entropy_bernoulli: q = {q}");
    if q <= 0.0 || q >= 1.0 {
        return f64::INFINITY;
    }
    // Near the diagonal the two log terms are each O(q-p) and cancel to
    // O((q-p)^2), so the direct form loses relative accuracy; expand
    // H = integral of (u-p)/(u(1-u)) du from p to q in powers of q-p instead.
    let t = q - p;
    let pq = p * (1.0 - p);
    if t.abs() <= 1e-5 * pq.min(q * (1.0 - q)) {
        let a = (2.0 * p - 1.0) / pq;
        let b = 1.0 / (p * p) - 1.0 / pq + 1.0 / ((1.0 - p) * (1.0 - p));
        return t * t / pq * (0.5 + a * t / 3.0 + b * t * t / 4.0);
    }
    let first = if q < 1e-300 {
        // (p-q)/q would overflow; split the logarithm instead
        p * (p.ln() - q.ln())
    } else {
        p * ((p - q) / q).ln_1p()
    };
    let second = (1.0 - p) * ((q - p) / (1.0 - q)).ln_1p();
    first + second
}

/// A family pinned at a true parameter θ0 and a quantile level λ.
#[derive(Debug, Clone, Copy)]
pub struct MqContext {
    pub family: FamilySpec,
    pub theta0: f64,
    pub lambda: f64,
}

impl MqContext {
    pub fn new(family: FamilySpec, theta0: f64, lambda: f64) -> Result<Self, MqError> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(MqError::InvalidLambda { lambda });
        }
        if !family.theta_domain().contains(theta0) {
            return Err(MqError::ThetaOutsideDomain {
                theta: theta0,
                family: family.name(),
            });
        }
        Ok(MqContext {
            family,
            theta0,
            lambda,
        })
    }

    /// h(θ) = F_{θ0}(F_θ^{-1}(λ)), or None when the θ-quantile leaves the
    /// support of F_{θ0}.
    pub fn h_value(&self, theta: f64) -> Option<f64> {
        debug_assert!(self.family.theta_domain().contains(theta));
        let q = self.family.quantile(theta, self.lambda);
        if !self.family.support(self.theta0).contains(q) {
            return None;
        }
        // guard against cdf rounding a hair outside [0,1]
        Some(self.family.cdf(self.theta0, q).clamp(0.0, 1.0))
    }

    /// Rate I_{λ,θ0}(θ).  Infinite when h(θ) is 0, 1 or undefined; in the
    /// far tails the CDF underflows to exactly 0 or 1 and the rate becomes
    /// +∞ a little before the support boundary, which only affects θ values
    /// whose true rate already exceeds ~700.
    pub fn rate(&self, theta: f64) -> f64 {
        if theta == self.theta0 {
            // h(theta0) = lambda identically; skip the quantile/CDF round
            // trip, whose rounding would turn an exact zero into ~1e-33.
            return 0.0;
        }
        match self.h_value(theta) {
            Some(h) => entropy_bernoulli(self.lambda, h),
            None => f64::INFINITY,
        }
    }

    /// Local curvature I''_{λ,θ0}(θ0) in closed form.
    pub fn curvature(&self) -> f64 {
        let lam = self.lambda;
        let t0 = self.theta0;
        let denom = lam * (1.0 - lam);
        match self.family.id {
            FamilyId::WeibullScale { rho } => {
                let l1 = (-lam).ln_1p(); // log(1-lambda)
                rho * rho * (1.0 - lam) * l1 * l1 / (lam * t0 * t0)
            }
            FamilyId::NormalScale { eta } => {
                let z = norm_quantile(lam);
                let d = norm_pdf(z) * (eta + z);
                d * d / (denom * t0 * t0)
            }
            FamilyId::CauchyScale { eta } => {
                let t = ((lam - 0.5) * PI).tan();
                let d = (eta + t) / (PI * (1.0 + t * t));
                d * d / (denom * t0 * t0)
            }
            FamilyId::LogisticScale { eta } => {
                let q = eta - (1.0 / lam - 1.0).ln();
                denom * q * q / (t0 * t0)
            }
            FamilyId::GumbelScale { eta } => {
                let l = lam.ln();
                let q = eta - (-l).ln();
                lam * l * l * q * q / ((1.0 - lam) * t0 * t0)
            }
            FamilyId::NormalLoc { s } => {
                let d = norm_pdf(norm_quantile(lam));
                d * d / (s * s * denom)
            }
            FamilyId::CauchyLoc { s } => {
                let t = ((lam - 0.5) * PI).tan();
                let c = 1.0 + t * t;
                1.0 / (s * s * PI * PI * c * c * denom)
            }
            FamilyId::LogisticLoc { s } => denom / (s * s),
            FamilyId::GumbelLoc { s } => {
                let l = lam.ln();
                lam * l * l / ((1.0 - lam) * s * s)
            }
            FamilyId::SkewNormal { .. } => skew_curvature(SymmetricBase::Normal, t0, lam),
            FamilyId::SkewCauchy { .. } => skew_curvature(SymmetricBase::Cauchy, t0, lam),
            FamilyId::SkewLogistic { .. } => skew_curvature(SymmetricBase::Logistic, t0, lam),
            FamilyId::Pareto => {
                let l1 = (-lam).ln_1p();
                (1.0 - lam) * l1 * l1 / (lam * t0 * t0)
            }
            FamilyId::RightEndpoint { g } => {
                let gp = g.g_prime(t0);
                let gv = g.g(t0);
                lam * gp * gp / ((1.0 - lam) * gv * gv)
            }
            FamilyId::GTilde { base, s } => {
                let shape = crate::distributions::GtildeShape::new(base, s);
                let d = shape.pdf(shape.quantile(lam));
                d * d / denom
            }
        }
    }

    /// Rate evaluated over a parameter grid.
    pub fn rate_curve(&self, thetas: &[f64]) -> RateCurve {
        let ctx = *self;
        let values = exec::map_slice(thetas, move |&t| ctx.rate(t));
        RateCurve {
            family: self.family,
            theta0: self.theta0,
            kind: RateKind::Mq {
                lambda: self.lambda,
            },
            thetas: thetas.to_vec(),
            values,
        }
    }
}

/// Derivative of u ↦ G'(G^{-1}(u)) G^{-1}(u)-style product used by the skew
/// curvature: d(u) = G'(G^{-1}(u)) · G^{-1}(u) for the standard base.
fn skew_d(base: SymmetricBase, u: f64) -> f64 {
    let z = base.quantile0(u);
    base.pdf0(z) * z
}

/// Curvature of the skew family at (θ0, λ); independent of the base scale s.
fn skew_curvature(base: SymmetricBase, theta0: f64, lam: f64) -> f64 {
    let denom = lam * (1.0 - lam);
    let hp = if lam <= 0.5 * (1.0 + theta0) {
        let u = lam / (1.0 + theta0);
        skew_d(base, u) - u
    } else {
        let v = (lam - theta0) / (1.0 - theta0);
        -skew_d(base, v) + (lam - 1.0) / (1.0 - theta0)
    };
    hp * hp / denom
}

/// Free-function forms of the context methods, convenient for one-off calls.
pub fn mq_rate(family: &FamilySpec, theta0: f64, lambda: f64, theta: f64) -> Result<f64, MqError> {
    let ctx = MqContext::new(*family, theta0, lambda)?;
    if !family.theta_domain().contains(theta) {
        return Err(MqError::ThetaOutsideDomain {
            theta,
            family: family.name(),
        });
    }
    Ok(ctx.rate(theta))
}

pub fn mq_curvature(family: &FamilySpec, theta0: f64, lambda: f64) -> Result<f64, MqError> {
    Ok(MqContext::new(*family, theta0, lambda)?.curvature())
}

pub fn h_value(
    family: &FamilySpec,
    theta0: f64,
    lambda: f64,
    theta: f64,
) -> Result<Option<f64>, MqError> {
    let ctx = MqContext::new(*family, theta0, lambda)?;
    if !family.theta_domain().contains(theta) {
        return Err(MqError::ThetaOutsideDomain {
            theta,
            family: family.name(),
        });
    }
    Ok(ctx.h_value(theta))
}

/// Rate of the sample-maximum estimator of a right-endpoint family (the
/// λ → 1 limit of the quantile method): log(g(θ0)/g(θ)) for θ in (0, θ0],
/// +∞ beyond the endpoint.  Decays only linearly near θ0, which is the
/// hallmark super-efficient case.
pub fn right_endpoint_rate_lambda1(family: &FamilySpec, theta0: f64, theta: f64) -> f64 {
    let g = match family.id {
        FamilyId::RightEndpoint { g } => g,
        _ => panic!("lambda = 1 rate is specific to right-endpoint families"),
    };
    assert!(theta0 > 0.0 && theta > 0.0);
    if theta > theta0 {
        f64::INFINITY
    } else {
        (g.g(theta0) / g.g(theta)).ln()
    }
}

/// Which estimator a rate curve belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateKind {
    Mq { lambda: f64 },
    Mm,
    GmmNormalScale,
    MaxOrderRightEndpoint,
}

impl RateKind {
    pub fn column_name(&self) -> &'static str {
        match self {
            RateKind::Mq { .. } => "mq_rate",
            RateKind::Mm => "mm_rate",
            RateKind::GmmNormalScale => "gmm_rate",
            RateKind::MaxOrderRightEndpoint => "max_order_rate",
        }
    }
}

/// A rate function sampled on a parameter grid.
#[derive(Debug, Clone)]
pub struct RateCurve {
    pub family: FamilySpec,
    pub theta0: f64,
    pub kind: RateKind,
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
}

impl RateCurve {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(vec!["theta", self.kind.column_name()]);
        for (k, v) in self.family.meta_pairs() {
            t.push_meta(&k, &v);
        }
        t.push_meta("theta0", &format!("{}", self.theta0));
        if let RateKind::Mq { lambda } = self.kind {
            t.push_meta("lambda", &format!("{lambda}"));
        }
        t.push_meta(
            "estimator",
            match self.kind {
                RateKind::Mq { .. } => "mq",
                RateKind::Mm => "mm",
                RateKind::GmmNormalScale => "gmm",
                RateKind::MaxOrderRightEndpoint => "max-order",
            },
        );
        for (&th, &v) in self.thetas.iter().zip(&self.values) {
            t.push_row(vec![th, v]);
        }
        t
    }
}
