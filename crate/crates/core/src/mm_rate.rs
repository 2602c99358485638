//! Large-deviation rate function of the moment-method estimator.
//!
//! The estimator solves `mean(θ) = (sample mean)`.  By Cramér's theorem the
//! sample mean of an i.i.d. sample from F_{θ0} obeys an LDP with rate
//! Λ*_{θ0}, the Legendre transform of the cumulant generating function, so
//! the estimator inherits
//!
//! ```text
//! J_{θ0}(θ) = Λ*_{θ0}(mean(θ)),
//! Λ*_{θ0}(x) = sup_γ { γx − Λ_{θ0}(γ) }.
//! ```
//!
//! For light-tailed families this is a good rate function with curvature
//! `J''(θ0) = mean'(θ0)^2 / var(θ0)`.  For heavy right tails (Weibull with
//! shape < 1, Pareto) the supremum over γ > 0 collapses and J vanishes on
//! the whole half-line θ ≥ θ0: upward deviations of the sample mean are
//! sub-exponential, and only the left branch of J carries information.

use crate::distributions::{
    EndpointG, FamilyId, FamilySpec, Interval, MmApplicability, SymmetricBase, TailClass,
};
use crate::exec;
use crate::mq_rate::{RateCurve, RateKind};
use crate::search::golden_section_max;
use crate::special::{gamma, EULER_GAMMA, SQRT_2PI};
use std::f64::consts::LN_2;
use std::fmt;

/// Why a moment-method computation could not be set up.
#[derive(Debug, Clone, PartialEq)]
pub enum MmError {
    NotApplicable { family: String, reason: String },
    ThetaOutsideDomain { theta: f64, family: String },
}

impl fmt::Display for MmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MmError::NotApplicable { family, reason } => {
                write!(f, "moment method not applicable to {family}: {reason}")
            }
            MmError::ThetaOutsideDomain { theta, family } => {
                write!(
                    f,
                    "theta = {theta} outside the parameter domain of {family}"
                )
            }
        }
    }
}

impl std::error::Error for MmError {}

/// A family pinned at a true parameter θ0, ready to evaluate J.
#[derive(Debug, Clone, Copy)]
pub struct MmContext {
    pub family: FamilySpec,
    pub theta0: f64,
    pub tail: TailClass,
    pub applicability: MmApplicability,
    /// False when the rate expression below is only formal: the Pareto mean
    /// exists for θ < 1 but upward deviations have no exponential decay at
    /// all, so no LDP with this rate holds for the estimator.
    pub ldp_applicable: bool,
}

impl MmContext {
    pub fn new(family: FamilySpec, theta0: f64) -> Result<Self, MmError> {
        if !family.theta_domain().contains(theta0) {
            return Err(MmError::ThetaOutsideDomain {
                theta: theta0,
                family: family.name(),
            });
        }
        let applicability = family.mm_applicability();
        if applicability == MmApplicability::Undefined {
            let reason = match family.id {
                FamilyId::CauchyScale { .. }
                | FamilyId::CauchyLoc { .. }
                | FamilyId::SkewCauchy { .. }
                | FamilyId::GTilde {
                    base: SymmetricBase::Cauchy,
                    ..
                } => "the distribution has no mean".to_string(),
                FamilyId::NormalScale { .. } => {
                    "the first moment does not identify the scale; use the second-moment estimator"
                        .to_string()
                }
                _ => "the mean map is not injective in theta".to_string(),
            };
            return Err(MmError::NotApplicable {
                family: family.name(),
                reason,
            });
        }
        if family.mean(theta0).is_none() {
            return Err(MmError::NotApplicable {
                family: family.name(),
                reason: format!("no finite mean at theta0 = {theta0}"),
            });
        }
        let ldp_applicable = !matches!(family.id, FamilyId::Pareto);
        Ok(MmContext {
            family,
            theta0,
            tail: family.tail_class(),
            applicability,
            ldp_applicable,
        })
    }

    /// Cumulant generating function of F_{θ0}.
    pub fn cgf(&self, gamma_: f64) -> f64 {
        self.family.cgf(self.theta0, gamma_)
    }

    /// Legendre transform Λ*_{θ0}(x); +∞ outside the closed support hull,
    /// 0 at the mean, and identically 0 for x above the mean when the right
    /// tail is heavy.
    pub fn legendre(&self, x: f64) -> f64 {
        let sup = self.family.support(self.theta0);
        if x <= sup.lo || x >= sup.hi {
            return f64::INFINITY;
        }
        let mean = self.family.mean(self.theta0).expect("checked in new()");
        if x == mean {
            return 0.0;
        }
        if self.tail == TailClass::Heavy && x > mean {
            return 0.0;
        }
        let region = self.family.cgf_region(self.theta0);
        let fam = self.family;
        let t0 = self.theta0;
        let phi = move |g: f64| {
            let l = fam.cgf(t0, g);
            if l.is_finite() {
                g * x - l
            } else {
                f64::NEG_INFINITY
            }
        };
        let direction = if x > mean { 1.0 } else { -1.0 };
        let (_, best) = maximize_concave(&phi, region, direction);
        best.max(0.0)
    }

    /// Rate J(θ) = Λ*_{θ0}(mean(θ)); +∞ when θ has no finite mean.
    pub fn rate(&self, theta: f64) -> f64 {
        debug_assert!(self.family.theta_domain().contains(theta));
        match self.family.mean(theta) {
            Some(x) => self.legendre(x),
            None => f64::INFINITY,
        }
    }

    /// Curvature J''(θ0) = mean'(θ0)^2 / var(θ0) in closed form.  For heavy
    /// right tails this is the left second derivative (the right one is 0).
    /// None when the variance does not exist (Pareto with θ0 ≥ 1/2).
    pub fn curvature(&self) -> Option<f64> {
        let mp = mean_prime(&self.family, self.theta0);
        let var = self.family.variance(self.theta0)?;
        Some(mp * mp / var)
    }

    pub fn rate_curve(&self, thetas: &[f64]) -> RateCurve {
        let ctx = *self;
        let values = exec::map_slice(thetas, move |&t| ctx.rate(t));
        RateCurve {
            family: self.family,
            theta0: self.theta0,
            kind: RateKind::Mm,
            thetas: thetas.to_vec(),
            values,
        }
    }
}

/// d(mean)/dθ in closed form.
fn mean_prime(family: &FamilySpec, theta: f64) -> f64 {
    match family.id {
        FamilyId::WeibullScale { rho } => gamma(1.0 + 1.0 / rho),
        FamilyId::NormalScale { eta } => eta,
        FamilyId::LogisticScale { eta } => eta,
        FamilyId::GumbelScale { eta } => eta + EULER_GAMMA,
        FamilyId::NormalLoc { .. }
        | FamilyId::LogisticLoc { .. }
        | FamilyId::GumbelLoc { .. }
        | FamilyId::GTilde { .. } => 1.0,
        FamilyId::SkewNormal { s } => -4.0 * s / SQRT_2PI,
        FamilyId::SkewLogistic { s } => -4.0 * s * LN_2,
        FamilyId::Pareto => {
            let d = 1.0 - theta;
            1.0 / (d * d)
        }
        FamilyId::RightEndpoint { g } => match g {
            EndpointG::Identity => 0.5,
            EndpointG::ExpMinusOne => {
                let em = theta.exp_m1();
                theta.exp() * (theta.exp_m1() - theta) / (em * em)
            }
            EndpointG::Power { y } => y / (y + 1.0),
        },
        FamilyId::CauchyScale { .. } | FamilyId::CauchyLoc { .. } | FamilyId::SkewCauchy { .. } => {
            f64::NAN
        }
    }
}

/// Maximizes a concave function over the open `region`, searching on the
/// side of 0 indicated by `direction`.  The bracket is grown from 0 by
/// doubling (or by geometric approach to a finite region endpoint) until the
/// function turns over, then refined by golden section.
fn maximize_concave(phi: &dyn Fn(f64) -> f64, region: Interval, direction: f64) -> (f64, f64) {
    let bound = if direction > 0.0 {
        region.hi
    } else {
        region.lo
    };
    let mut pts: Vec<f64> = vec![0.0];
    let mut vals: Vec<f64> = vec![phi(0.0)];
    let mut g = if bound.is_finite() {
        bound / 2.0
    } else {
        direction
    };
    if g == 0.0 {
        // degenerate region such as the Cauchy point mass at gamma = 0
        return (0.0, vals[0]);
    }
    for _ in 0..300 {
        let v = phi(g);
        pts.push(g);
        vals.push(v);
        if v < vals[vals.len() - 2] {
            break;
        }
        g = if bound.is_finite() {
            0.5 * (g + bound)
        } else {
            2.0 * g
        };
    }
    let n = pts.len();
    let last = pts[n - 1];
    let before = if n >= 3 { pts[n - 3] } else { pts[0] };
    let (a, b) = (before.min(last), before.max(last));
    let tol = 1e-12 * a.abs().max(b.abs()).max(1.0);
    let (gstar, best) = golden_section_max(|g| phi(g), a, b, tol);
    // the bracket always contains 0 or starts there; never worse than phi(0)
    if best < vals[0] {
        (pts[0], vals[0])
    } else {
        (gstar, best)
    }
}

/// Rate of the second-moment estimator of the normal scale family
/// (solve E[X²] observed): 0.5 (r − 1 − log r) with r = θ²/θ0², for any
/// fixed location offset η.  +∞ for θ ≤ 0.
pub fn gmm_normal_scale_rate(theta0: f64, theta: f64) -> f64 {
    assert!(theta0 > 0.0);
    if theta <= 0.0 {
        return f64::INFINITY;
    }
    let r = (theta * theta) / (theta0 * theta0);
    0.5 * (r - 1.0 - r.ln())
}

/// Curvature of the second-moment estimator rate at θ0: 2/θ0².
pub fn gmm_normal_scale_curvature(theta0: f64) -> f64 {
    assert!(theta0 > 0.0);
    2.0 / (theta0 * theta0)
}

/// Second-moment rate sampled on a grid, tagged with the family it
/// describes (the values do not depend on η).
pub fn gmm_normal_scale_curve(eta: f64, theta0: f64, thetas: &[f64]) -> RateCurve {
    let family = FamilySpec {
        id: FamilyId::NormalScale { eta },
    };
    let values = exec::map_slice(thetas, move |&t| gmm_normal_scale_rate(theta0, t));
    RateCurve {
        family,
        theta0,
        kind: RateKind::GmmNormalScale,
        thetas: thetas.to_vec(),
        values,
    }
}

/// Free-function forms.
pub fn mm_rate(family: &FamilySpec, theta0: f64, theta: f64) -> Result<f64, MmError> {
    let ctx = MmContext::new(*family, theta0)?;
    if !family.theta_domain().contains(theta) {
        return Err(MmError::ThetaOutsideDomain {
            theta,
            family: family.name(),
        });
    }
    Ok(ctx.rate(theta))
}

pub fn mm_curvature(family: &FamilySpec, theta0: f64) -> Result<Option<f64>, MmError> {
    Ok(MmContext::new(*family, theta0)?.curvature())
}

pub fn cgf(family: &FamilySpec, theta0: f64, gamma_: f64) -> f64 {
    family.cgf(theta0, gamma_)
}

pub fn legendre(family: &FamilySpec, theta0: f64, x: f64) -> Result<f64, MmError> {
    Ok(MmContext::new(*family, theta0)?.legendre(x))
}
