//! The catalog of one-parameter families the estimators are compared on.
//!
//! Five structural groups share most of the machinery:
//!
//! * scale families `F_θ(x) = G(x/θ)` on `θ > 0`, where `G` is a Weibull,
//!   normal, Cauchy, logistic or Gumbel distribution function whose location
//!   offset `η` is a fixed (known) nuisance parameter;
//! * location families `F_θ(x) = G(x − θ)` on `θ ∈ ℝ` with `G` a normal,
//!   Cauchy, logistic or Gumbel distribution scaled by a fixed `s > 0`;
//! * skew families on `θ ∈ (−1, 1)` that stretch a symmetric base density by
//!   `1 + θ` left of the origin and `1 − θ` right of it, keeping it
//!   continuous: `F_θ(x) = (1+θ) G(x/(s(1+θ)))` for `x ≤ 0` and
//!   `θ + (1−θ) G(x/(s(1−θ)))` for `x > 0`;
//! * a Pareto family `F_θ(x) = 1 − x^(−1/θ)` on `x > 1`, the image of the
//!   exponential scale family under `x ↦ e^x`;
//! * right-endpoint families `F_θ(x) = g(x)/g(θ)` on `(0, θ)` where `g` is a
//!   strictly increasing map with `g(0) = 0` (not itself a CDF), so θ is the
//!   supremum of the support.
//!
//! On top of these, [`make_gtilde`] flattens a symmetric location density
//! into a plateau of width 2 around its center.  The resulting location
//! family is the standard counterexample to "the best quantile level is the
//! median for symmetric densities": its quantile-method curvature is locally
//! *minimized* at λ = 1/2.

use crate::quad::log_integrate_exp;
use crate::special::{gamma, ln_gamma, norm_cdf, norm_pdf, norm_quantile, EULER_GAMMA, SQRT_2PI};
use std::f64::consts::PI;
use std::fmt;

/// An open interval (lo, hi); either endpoint may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    /// Membership in the open interval.
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// Membership in the closure of the interval.
    pub fn contains_closed(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Clamps x to the closed interval shrunk by `margin` on finite ends.
    pub fn clamp_inside(&self, x: f64, margin: f64) -> f64 {
        let lo = if self.lo.is_finite() {
            self.lo + margin
        } else {
            f64::NEG_INFINITY
        };
        let hi = if self.hi.is_finite() {
            self.hi - margin
        } else {
            f64::INFINITY
        };
        x.clamp(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Symmetric base distributions (standardized: location 0, scale 1) used by
/// the skew construction and by the flattened counterexample family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetricBase {
    Normal,
    Cauchy,
    Logistic,
}

impl SymmetricBase {
    pub fn cdf0(self, z: f64) -> f64 {
        match self {
            SymmetricBase::Normal => norm_cdf(z),
            SymmetricBase::Cauchy => z.atan() / PI + 0.5,
            SymmetricBase::Logistic => 1.0 / (1.0 + (-z).exp()),
        }
    }

    pub fn pdf0(self, z: f64) -> f64 {
        match self {
            SymmetricBase::Normal => norm_pdf(z),
            SymmetricBase::Cauchy => 1.0 / (PI * (1.0 + z * z)),
            SymmetricBase::Logistic => {
                let e = (-z.abs()).exp();
                e / ((1.0 + e) * (1.0 + e))
            }
        }
    }

    /// Natural log of `pdf0`, computed without forming the density, so it
    /// stays accurate far into the tails where the density underflows.
    pub fn ln_pdf0(self, z: f64) -> f64 {
        match self {
            SymmetricBase::Normal => -0.5 * z * z - SQRT_2PI.ln(),
            SymmetricBase::Cauchy => {
                if z.abs() > 1e150 {
                    -PI.ln() - 2.0 * z.abs().ln()
                } else {
                    -PI.ln() - (z * z).ln_1p()
                }
            }
            SymmetricBase::Logistic => -z.abs() - 2.0 * (-z.abs()).exp().ln_1p(),
        }
    }

    pub fn quantile0(self, u: f64) -> f64 {
        debug_assert!(u > 0.0 && u < 1.0);
        match self {
            SymmetricBase::Normal => norm_quantile(u),
            SymmetricBase::Cauchy => ((u - 0.5) * PI).tan(),
            SymmetricBase::Logistic => -(1.0 / u - 1.0).ln(),
        }
    }

    /// Variance of the standardized base; None when it does not exist.
    pub fn var0(self) -> Option<f64> {
        match self {
            SymmetricBase::Normal => Some(1.0),
            SymmetricBase::Cauchy => None,
            SymmetricBase::Logistic => Some(PI * PI / 3.0),
        }
    }

    /// Half absolute first moment: the integral of z times the density over
    /// (0, inf).  None for Cauchy.
    pub fn half_abs0(self) -> Option<f64> {
        match self {
            SymmetricBase::Normal => Some(1.0 / SQRT_2PI),
            SymmetricBase::Cauchy => None,
            SymmetricBase::Logistic => Some(std::f64::consts::LN_2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SymmetricBase::Normal => "normal",
            SymmetricBase::Cauchy => "cauchy",
            SymmetricBase::Logistic => "logistic",
        }
    }
}

/// The increasing map `g` of a right-endpoint family: `g: [0,∞) → [0,∞)`,
/// strictly increasing, `g(0) = 0`.  `F_θ = g/g(θ)` on `(0, θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndpointG {
    /// g(x) = x: the uniform distribution on (0, θ).
    Identity,
    /// g(x) = e^x − 1.
    ExpMinusOne,
    /// g(x) = x^y for a fixed y > 0.
    Power { y: f64 },
}

impl EndpointG {
    pub fn g(self, x: f64) -> f64 {
        match self {
            EndpointG::Identity => x,
            EndpointG::ExpMinusOne => x.exp_m1(),
            EndpointG::Power { y } => x.powf(y),
        }
    }

    pub fn g_prime(self, x: f64) -> f64 {
        match self {
            EndpointG::Identity => 1.0,
            EndpointG::ExpMinusOne => x.exp(),
            EndpointG::Power { y } => y * x.powf(y - 1.0),
        }
    }

    pub fn g_inv(self, u: f64) -> f64 {
        match self {
            EndpointG::Identity => u,
            EndpointG::ExpMinusOne => u.ln_1p(),
            EndpointG::Power { y } => u.powf(1.0 / y),
        }
    }

    pub fn name(self) -> String {
        match self {
            EndpointG::Identity => "identity".into(),
            EndpointG::ExpMinusOne => "exp-minus-one".into(),
            EndpointG::Power { y } => format!("power({y})"),
        }
    }
}

/// Identifier plus fixed (non-estimated) shape constants of a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyId {
    /// Weibull scale family with shape rho; rho = 1 is the exponential.
    WeibullScale {
        rho: f64,
    },
    NormalScale {
        eta: f64,
    },
    CauchyScale {
        eta: f64,
    },
    LogisticScale {
        eta: f64,
    },
    GumbelScale {
        eta: f64,
    },
    NormalLoc {
        s: f64,
    },
    CauchyLoc {
        s: f64,
    },
    LogisticLoc {
        s: f64,
    },
    GumbelLoc {
        s: f64,
    },
    SkewNormal {
        s: f64,
    },
    SkewCauchy {
        s: f64,
    },
    SkewLogistic {
        s: f64,
    },
    Pareto,
    RightEndpoint {
        g: EndpointG,
    },
    /// Flattened symmetric location family produced by [`make_gtilde`].
    GTilde {
        base: SymmetricBase,
        s: f64,
    },
}

/// How the method of moments applies to a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmApplicability {
    /// Mean map invertible and the rate has a closed form.
    ClosedFormGood,
    /// Mean map invertible; rate computed by numeric Legendre transform.
    NumericGood,
    /// Estimator defined but its rate function is not good (heavy tail):
    /// the rate vanishes on one side of the true parameter.
    NotGood,
    /// Moment estimator undefined or uninformative (no mean, or a mean that
    /// does not identify θ).
    Undefined,
}

impl MmApplicability {
    pub fn name(self) -> &'static str {
        match self {
            MmApplicability::ClosedFormGood => "closed-form",
            MmApplicability::NumericGood => "numeric",
            MmApplicability::NotGood => "not-good",
            MmApplicability::Undefined => "undefined",
        }
    }
}

/// Tail behaviour relevant to the moment method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailClass {
    /// Cumulant generating function finite in a neighbourhood of 0.
    Light,
    /// CGF finite only on (−∞, 0]: exponential decay fails on the right.
    Heavy,
    /// No finite mean at all.
    Undefined,
}

impl TailClass {
    pub fn name(self) -> &'static str {
        match self {
            TailClass::Light => "light",
            TailClass::Heavy => "heavy",
            TailClass::Undefined => "undefined",
        }
    }
}

/// Validation error from [`make_family`] or [`make_gtilde`].
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyError {
    InvalidParameter {
        family: &'static str,
        param: &'static str,
        value: f64,
        requirement: &'static str,
    },
    GtildeBase {
        detail: String,
    },
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::InvalidParameter {
                family,
                param,
                value,
                requirement,
            } => {
                write!(
                    f,
                    "{family}: parameter {param} = {value} must satisfy {requirement}"
                )
            }
            FamilyError::GtildeBase { detail } => write!(f, "gtilde base: {detail}"),
        }
    }
}

impl std::error::Error for FamilyError {}

/// A validated family.  All methods take the running parameter θ explicitly,
/// so one spec serves a whole parameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySpec {
    pub id: FamilyId,
}

/// Validates the fixed constants of a family description.
pub fn make_family(id: FamilyId) -> Result<FamilySpec, FamilyError> {
    let bad = |family, param, value, requirement| {
        Err(FamilyError::InvalidParameter {
            family,
            param,
            value,
            requirement,
        })
    };
    match id {
        FamilyId::WeibullScale { rho } => {
            if !(rho > 0.0 && rho.is_finite()) {
                return bad("weibull-scale", "rho", rho, "rho > 0");
            }
        }
        FamilyId::NormalScale { eta }
        | FamilyId::CauchyScale { eta }
        | FamilyId::LogisticScale { eta }
        | FamilyId::GumbelScale { eta } => {
            if !eta.is_finite() {
                return bad("scale family", "eta", eta, "finite");
            }
        }
        FamilyId::NormalLoc { s }
        | FamilyId::CauchyLoc { s }
        | FamilyId::LogisticLoc { s }
        | FamilyId::GumbelLoc { s }
        | FamilyId::SkewNormal { s }
        | FamilyId::SkewCauchy { s }
        | FamilyId::SkewLogistic { s }
        | FamilyId::GTilde { s, .. } => {
            if !(s > 0.0 && s.is_finite()) {
                return bad("location/skew family", "s", s, "s > 0");
            }
        }
        FamilyId::Pareto => {}
        FamilyId::RightEndpoint { g } => {
            if let EndpointG::Power { y } = g {
                if !(y > 0.0 && y.is_finite()) {
                    return bad("right-endpoint", "y", y, "y > 0");
                }
            }
        }
    }
    Ok(FamilySpec { id })
}

/// Builds the flattened variant of a symmetric location family.
///
/// Accepts normal, Cauchy or logistic location specs and checks numerically
/// that the base is symmetric with a stationary density at its center
/// (those guarantee the flattened density is again a C² distribution
/// function wherever the base is smooth).
pub fn make_gtilde(base: &FamilySpec) -> Result<FamilySpec, FamilyError> {
    let (b, s) = match base.id {
        FamilyId::NormalLoc { s } => (SymmetricBase::Normal, s),
        FamilyId::CauchyLoc { s } => (SymmetricBase::Cauchy, s),
        FamilyId::LogisticLoc { s } => (SymmetricBase::Logistic, s),
        other => {
            return Err(FamilyError::GtildeBase {
                detail: format!(
                    "expected a symmetric location family (normal-loc, cauchy-loc, logistic-loc), got {}",
                    FamilySpec { id: other }.name()
                ),
            })
        }
    };
    // Symmetry of the base CDF about 0.
    for k in 1..=20 {
        let z = 0.25 * k as f64;
        let dev = (b.cdf0(z) + b.cdf0(-z) - 1.0).abs();
        if dev > 1e-12 {
            return Err(FamilyError::GtildeBase {
                detail: format!("base not symmetric: |G(z)+G(-z)-1| = {dev:e} at z = {z}"),
            });
        }
    }
    // Stationary density at the center (second derivative of the CDF is 0).
    let h = 1e-4;
    let d = (b.pdf0(h) - b.pdf0(-h)) / (2.0 * h);
    if d.abs() > 1e-8 {
        return Err(FamilyError::GtildeBase {
            detail: format!("base density not stationary at 0: G''(0) ~ {d:e}"),
        });
    }
    Ok(FamilySpec {
        id: FamilyId::GTilde { base: b, s },
    })
}

/// Quantile of the skew family built on `base` with scale `s`, skewness θ.
///
/// Used by the estimators directly; `FamilySpec::quantile` routes here for
/// the skew variants.
pub fn skew_quantile(base: SymmetricBase, s: f64, theta: f64, lambda: f64) -> f64 {
    debug_assert!(theta > -1.0 && theta < 1.0);
    debug_assert!(lambda > 0.0 && lambda < 1.0);
    if lambda <= 0.5 * (1.0 + theta) {
        s * (1.0 + theta) * base.quantile0(lambda / (1.0 + theta))
    } else {
        s * (1.0 - theta) * base.quantile0((lambda - theta) / (1.0 - theta))
    }
}

fn skew_cdf(base: SymmetricBase, s: f64, theta: f64, x: f64) -> f64 {
    if x <= 0.0 {
        (1.0 + theta) * base.cdf0(x / (s * (1.0 + theta)))
    } else {
        theta + (1.0 - theta) * base.cdf0(x / (s * (1.0 - theta)))
    }
}

fn skew_pdf(base: SymmetricBase, s: f64, theta: f64, x: f64) -> f64 {
    if x <= 0.0 {
        base.pdf0(x / (s * (1.0 + theta))) / s
    } else {
        base.pdf0(x / (s * (1.0 - theta))) / s
    }
}

fn skew_ln_pdf(base: SymmetricBase, s: f64, theta: f64, x: f64) -> f64 {
    if x <= 0.0 {
        base.ln_pdf0(x / (s * (1.0 + theta))) - s.ln()
    } else {
        base.ln_pdf0(x / (s * (1.0 - theta))) - s.ln()
    }
}

/// Internal shape constants of a flattened family.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GtildeShape {
    pub base: SymmetricBase,
    pub s: f64,
    /// Base density at its center, after scaling: G'(0).
    pub g0: f64,
    /// Normalizer 2 G'(0) + 1.
    pub c: f64,
}

impl GtildeShape {
    pub fn new(base: SymmetricBase, s: f64) -> Self {
        let g0 = base.pdf0(0.0) / s;
        GtildeShape {
            base,
            s,
            g0,
            c: 2.0 * g0 + 1.0,
        }
    }

    /// CDF of the centered flattened distribution.
    pub fn cdf(&self, u: f64) -> f64 {
        if u <= -1.0 {
            self.base.cdf0((1.0 + u) / self.s) / self.c
        } else if u < 1.0 {
            0.5 + self.g0 * u / self.c
        } else {
            (2.0 * self.g0 + self.base.cdf0((u - 1.0) / self.s)) / self.c
        }
    }

    pub fn pdf(&self, u: f64) -> f64 {
        if u <= -1.0 {
            self.base.pdf0((1.0 + u) / self.s) / (self.s * self.c)
        } else if u < 1.0 {
            self.g0 / self.c
        } else {
            self.base.pdf0((u - 1.0) / self.s) / (self.s * self.c)
        }
    }

    pub fn ln_pdf(&self, u: f64) -> f64 {
        if u <= -1.0 {
            self.base.ln_pdf0((1.0 + u) / self.s) - (self.s * self.c).ln()
        } else if u < 1.0 {
            (self.g0 / self.c).ln()
        } else {
            self.base.ln_pdf0((u - 1.0) / self.s) - (self.s * self.c).ln()
        }
    }

    pub fn quantile(&self, lambda: f64) -> f64 {
        let (lo, hi) = self.window();
        if lambda <= lo {
            self.s * self.base.quantile0(lambda * self.c) - 1.0
        } else if lambda < hi {
            (lambda - 0.5) * self.c / self.g0
        } else {
            self.s * self.base.quantile0(lambda * self.c - 2.0 * self.g0) + 1.0
        }
    }

    /// The λ-window covered by the flat middle piece.
    pub fn window(&self) -> (f64, f64) {
        (0.5 / self.c, (4.0 * self.g0 + 1.0) / (2.0 * self.c))
    }

    /// Variance of the flattened distribution; None for a Cauchy base.
    pub fn variance(&self) -> Option<f64> {
        let v = self.base.var0()? * self.s * self.s;
        let m = self.base.half_abs0()? * self.s;
        Some((2.0 * self.g0 / 3.0 + v + 4.0 * m + 1.0) / self.c)
    }
}

impl FamilySpec {
    /// The open parameter domain Θ.
    pub fn theta_domain(&self) -> Interval {
        match self.id {
            FamilyId::WeibullScale { .. }
            | FamilyId::NormalScale { .. }
            | FamilyId::CauchyScale { .. }
            | FamilyId::LogisticScale { .. }
            | FamilyId::GumbelScale { .. }
            | FamilyId::Pareto
            | FamilyId::RightEndpoint { .. } => Interval::new(0.0, f64::INFINITY),
            FamilyId::NormalLoc { .. }
            | FamilyId::CauchyLoc { .. }
            | FamilyId::LogisticLoc { .. }
            | FamilyId::GumbelLoc { .. }
            | FamilyId::GTilde { .. } => Interval::REAL,
            FamilyId::SkewNormal { .. }
            | FamilyId::SkewCauchy { .. }
            | FamilyId::SkewLogistic { .. } => Interval::new(-1.0, 1.0),
        }
    }

    /// Open support of F_θ.
    pub fn support(&self, theta: f64) -> Interval {
        debug_assert!(self.theta_domain().contains(theta));
        match self.id {
            FamilyId::WeibullScale { .. } => Interval::new(0.0, f64::INFINITY),
            FamilyId::Pareto => Interval::new(1.0, f64::INFINITY),
            FamilyId::RightEndpoint { .. } => Interval::new(0.0, theta),
            _ => Interval::REAL,
        }
    }

    /// Distribution function F_θ(x).
    ///
    /// # Panics
    /// Debug-asserts that θ lies in the parameter domain and x in the open
    /// support; callers (CLI, simulation) validate beforehand.
    pub fn cdf(&self, theta: f64, x: f64) -> f64 {
        debug_assert!(self.theta_domain().contains(theta), "theta = {theta}");
        debug_assert!(
            self.support(theta).contains_closed(x),
            "x = {x} outside support"
        );
        match self.id {
            FamilyId::WeibullScale { rho } => -(-((x / theta).powf(rho))).exp_m1(),
            FamilyId::NormalScale { eta } => norm_cdf(x / theta - eta),
            FamilyId::CauchyScale { eta } => (x / theta - eta).atan() / PI + 0.5,
            FamilyId::LogisticScale { eta } => 1.0 / (1.0 + (eta - x / theta).exp()),
            FamilyId::GumbelScale { eta } => (-(-(x / theta - eta)).exp()).exp(),
            FamilyId::NormalLoc { s } => norm_cdf((x - theta) / s),
            FamilyId::CauchyLoc { s } => ((x - theta) / s).atan() / PI + 0.5,
            FamilyId::LogisticLoc { s } => 1.0 / (1.0 + ((theta - x) / s).exp()),
            FamilyId::GumbelLoc { s } => (-(-((x - theta) / s)).exp()).exp(),
            FamilyId::SkewNormal { s } => skew_cdf(SymmetricBase::Normal, s, theta, x),
            FamilyId::SkewCauchy { s } => skew_cdf(SymmetricBase::Cauchy, s, theta, x),
            FamilyId::SkewLogistic { s } => skew_cdf(SymmetricBase::Logistic, s, theta, x),
            FamilyId::Pareto => -(-x.ln() / theta).exp_m1(),
            FamilyId::RightEndpoint { g } => g.g(x) / g.g(theta),
            FamilyId::GTilde { base, s } => GtildeShape::new(base, s).cdf(x - theta),
        }
    }

    /// Density of F_θ on the closed support.
    ///
    /// Boundary points take the continuous limit of the interior formula,
    /// which may be 0 or +inf (integrable endpoint singularities).
    pub fn pdf(&self, theta: f64, x: f64) -> f64 {
        debug_assert!(self.theta_domain().contains(theta));
        debug_assert!(self.support(theta).contains_closed(x));
        match self.id {
            FamilyId::WeibullScale { rho } => {
                let z = x / theta;
                rho / theta * z.powf(rho - 1.0) * (-z.powf(rho)).exp()
            }
            FamilyId::NormalScale { eta } => norm_pdf(x / theta - eta) / theta,
            FamilyId::CauchyScale { eta } => {
                let w = x / theta - eta;
                1.0 / (theta * PI * (1.0 + w * w))
            }
            FamilyId::LogisticScale { eta } => {
                SymmetricBase::Logistic.pdf0(x / theta - eta) / theta
            }
            FamilyId::GumbelScale { eta } => {
                let w = x / theta - eta;
                ((-w).exp() * (-(-w).exp()).exp()) / theta
            }
            FamilyId::NormalLoc { s } => norm_pdf((x - theta) / s) / s,
            FamilyId::CauchyLoc { s } => {
                let w = (x - theta) / s;
                1.0 / (s * PI * (1.0 + w * w))
            }
            FamilyId::LogisticLoc { s } => SymmetricBase::Logistic.pdf0((x - theta) / s) / s,
            FamilyId::GumbelLoc { s } => {
                let w = (x - theta) / s;
                ((-w).exp() * (-(-w).exp()).exp()) / s
            }
            FamilyId::SkewNormal { s } => skew_pdf(SymmetricBase::Normal, s, theta, x),
            FamilyId::SkewCauchy { s } => skew_pdf(SymmetricBase::Cauchy, s, theta, x),
            FamilyId::SkewLogistic { s } => skew_pdf(SymmetricBase::Logistic, s, theta, x),
            FamilyId::Pareto => (-(1.0 / theta + 1.0) * x.ln()).exp() / theta,
            FamilyId::RightEndpoint { g } => g.g_prime(x) / g.g(theta),
            FamilyId::GTilde { base, s } => GtildeShape::new(base, s).pdf(x - theta),
        }
    }

    /// Natural log of the density, computed in log space throughout.
    ///
    /// Stays finite and accurate deep in the tails where `pdf` underflows to
    /// zero; this is what keeps the tilted integrands of `cgf` representable.
    pub fn ln_pdf(&self, theta: f64, x: f64) -> f64 {
        debug_assert!(self.theta_domain().contains(theta));
        debug_assert!(self.support(theta).contains_closed(x));
        match self.id {
            FamilyId::WeibullScale { rho } => {
                let z = x / theta;
                rho.ln() - theta.ln() + (rho - 1.0) * z.ln() - z.powf(rho)
            }
            FamilyId::NormalScale { eta } => {
                SymmetricBase::Normal.ln_pdf0(x / theta - eta) - theta.ln()
            }
            FamilyId::CauchyScale { eta } => {
                SymmetricBase::Cauchy.ln_pdf0(x / theta - eta) - theta.ln()
            }
            FamilyId::LogisticScale { eta } => {
                SymmetricBase::Logistic.ln_pdf0(x / theta - eta) - theta.ln()
            }
            FamilyId::GumbelScale { eta } => {
                let w = x / theta - eta;
                -w - (-w).exp() - theta.ln()
            }
            FamilyId::NormalLoc { s } => SymmetricBase::Normal.ln_pdf0((x - theta) / s) - s.ln(),
            FamilyId::CauchyLoc { s } => SymmetricBase::Cauchy.ln_pdf0((x - theta) / s) - s.ln(),
            FamilyId::LogisticLoc { s } => {
                SymmetricBase::Logistic.ln_pdf0((x - theta) / s) - s.ln()
            }
            FamilyId::GumbelLoc { s } => {
                let w = (x - theta) / s;
                -w - (-w).exp() - s.ln()
            }
            FamilyId::SkewNormal { s } => skew_ln_pdf(SymmetricBase::Normal, s, theta, x),
            FamilyId::SkewCauchy { s } => skew_ln_pdf(SymmetricBase::Cauchy, s, theta, x),
            FamilyId::SkewLogistic { s } => skew_ln_pdf(SymmetricBase::Logistic, s, theta, x),
            FamilyId::Pareto => -(1.0 / theta + 1.0) * x.ln() - theta.ln(),
            FamilyId::RightEndpoint { g } => match g {
                EndpointG::Identity => -theta.ln(),
                EndpointG::ExpMinusOne => {
                    let norm = if theta > 700.0 {
                        theta
                    } else {
                        theta.exp_m1().ln()
                    };
                    x - norm
                }
                EndpointG::Power { y } => y.ln() + (y - 1.0) * x.ln() - y * theta.ln(),
            },
            FamilyId::GTilde { base, s } => GtildeShape::new(base, s).ln_pdf(x - theta),
        }
    }

    /// Quantile function F_θ^{-1}(λ) for λ in (0, 1).
    ///
    /// # Panics
    /// Panics when λ is outside the open unit interval.
    pub fn quantile(&self, theta: f64, lambda: f64) -> f64 {
        assert!(
            lambda > 0.0 && lambda < 1.0,
            "quantile level {lambda} outside (0,1)"
        );
        debug_assert!(self.theta_domain().contains(theta));
        match self.id {
            FamilyId::WeibullScale { rho } => theta * (-(-lambda).ln_1p()).powf(1.0 / rho),
            FamilyId::NormalScale { eta } => theta * (eta + norm_quantile(lambda)),
            FamilyId::CauchyScale { eta } => theta * (eta + ((lambda - 0.5) * PI).tan()),
            FamilyId::LogisticScale { eta } => theta * (eta - (1.0 / lambda - 1.0).ln()),
            FamilyId::GumbelScale { eta } => theta * (eta - (-lambda.ln()).ln()),
            FamilyId::NormalLoc { s } => theta + s * norm_quantile(lambda),
            FamilyId::CauchyLoc { s } => theta + s * ((lambda - 0.5) * PI).tan(),
            FamilyId::LogisticLoc { s } => theta - s * (1.0 / lambda - 1.0).ln(),
            FamilyId::GumbelLoc { s } => theta - s * (-lambda.ln()).ln(),
            FamilyId::SkewNormal { s } => skew_quantile(SymmetricBase::Normal, s, theta, lambda),
            FamilyId::SkewCauchy { s } => skew_quantile(SymmetricBase::Cauchy, s, theta, lambda),
            FamilyId::SkewLogistic { s } => {
                skew_quantile(SymmetricBase::Logistic, s, theta, lambda)
            }
            FamilyId::Pareto => (-theta * (-lambda).ln_1p()).exp(),
            FamilyId::RightEndpoint { g } => g.g_inv(lambda * g.g(theta)),
            FamilyId::GTilde { base, s } => theta + GtildeShape::new(base, s).quantile(lambda),
        }
    }

    /// Mean of F_θ; None when it does not exist (Cauchy variants, Pareto
    /// with θ ≥ 1).
    pub fn mean(&self, theta: f64) -> Option<f64> {
        debug_assert!(self.theta_domain().contains(theta));
        match self.id {
            FamilyId::WeibullScale { rho } => Some(theta * gamma(1.0 + 1.0 / rho)),
            FamilyId::NormalScale { eta } => Some(theta * eta),
            FamilyId::CauchyScale { .. }
            | FamilyId::CauchyLoc { .. }
            | FamilyId::SkewCauchy { .. } => None,
            FamilyId::LogisticScale { eta } => Some(theta * eta),
            FamilyId::GumbelScale { eta } => Some(theta * (eta + EULER_GAMMA)),
            FamilyId::NormalLoc { .. } | FamilyId::LogisticLoc { .. } => Some(theta),
            FamilyId::GumbelLoc { s } => Some(theta + s * EULER_GAMMA),
            FamilyId::SkewNormal { s } => Some(-4.0 * theta * s / SQRT_2PI),
            FamilyId::SkewLogistic { s } => Some(-4.0 * theta * s * std::f64::consts::LN_2),
            FamilyId::Pareto => {
                if theta < 1.0 {
                    Some(1.0 / (1.0 - theta))
                } else {
                    None
                }
            }
            FamilyId::RightEndpoint { g } => Some(match g {
                EndpointG::Identity => 0.5 * theta,
                EndpointG::ExpMinusOne => theta * theta.exp() / theta.exp_m1() - 1.0,
                EndpointG::Power { y } => y * theta / (y + 1.0),
            }),
            FamilyId::GTilde { .. } => Some(theta),
        }
    }

    /// Variance of F_θ; None when it does not exist.
    pub fn variance(&self, theta: f64) -> Option<f64> {
        debug_assert!(self.theta_domain().contains(theta));
        let t2 = theta * theta;
        match self.id {
            FamilyId::WeibullScale { rho } => {
                let g1 = gamma(1.0 + 1.0 / rho);
                Some(t2 * (gamma(1.0 + 2.0 / rho) - g1 * g1))
            }
            FamilyId::NormalScale { .. } => Some(t2),
            FamilyId::CauchyScale { .. }
            | FamilyId::CauchyLoc { .. }
            | FamilyId::SkewCauchy { .. } => None,
            FamilyId::LogisticScale { .. } => Some(t2 * PI * PI / 3.0),
            FamilyId::GumbelScale { .. } => Some(t2 * PI * PI / 6.0),
            FamilyId::NormalLoc { s } => Some(s * s),
            FamilyId::LogisticLoc { s } => Some(s * s * PI * PI / 3.0),
            FamilyId::GumbelLoc { s } => Some(s * s * PI * PI / 6.0),
            FamilyId::SkewNormal { s } => {
                let m = s / SQRT_2PI;
                Some(s * s * (1.0 + 3.0 * theta * theta) - 16.0 * m * m * theta * theta)
            }
            FamilyId::SkewLogistic { s } => {
                let m = s * std::f64::consts::LN_2;
                Some(
                    s * s * PI * PI / 3.0 * (1.0 + 3.0 * theta * theta)
                        - 16.0 * m * m * theta * theta,
                )
            }
            FamilyId::Pareto => {
                if theta < 0.5 {
                    let mean = 1.0 / (1.0 - theta);
                    Some(1.0 / (1.0 - 2.0 * theta) - mean * mean)
                } else {
                    None
                }
            }
            FamilyId::RightEndpoint { g } => Some(match g {
                EndpointG::Identity => t2 / 12.0,
                EndpointG::ExpMinusOne => {
                    let em = theta.exp_m1();
                    (em * em - t2 * theta.exp()) / (em * em)
                }
                EndpointG::Power { y } => y * t2 / ((y + 2.0) * (y + 1.0) * (y + 1.0)),
            }),
            FamilyId::GTilde { base, s } => GtildeShape::new(base, s).variance(),
        }
    }

    /// Parameter sub-domain on which the mean exists (the full domain except
    /// for Pareto, whose mean requires θ < 1).
    pub fn mean_domain(&self) -> Interval {
        match self.id {
            FamilyId::Pareto => Interval::new(0.0, 1.0),
            _ => self.theta_domain(),
        }
    }

    /// Open interval of exponents γ with a finite cumulant generating
    /// function; for heavy tails this is (−∞, 0) plus the point γ = 0, and
    /// for Cauchy variants only γ = 0 remains (encoded as the empty open
    /// interval (0, 0)).
    pub fn cgf_region(&self, theta: f64) -> Interval {
        debug_assert!(self.theta_domain().contains(theta));
        match self.id {
            FamilyId::WeibullScale { rho } => {
                if rho > 1.0 {
                    Interval::REAL
                } else if rho == 1.0 {
                    Interval::new(f64::NEG_INFINITY, 1.0 / theta)
                } else {
                    Interval::new(f64::NEG_INFINITY, 0.0)
                }
            }
            FamilyId::NormalScale { .. }
            | FamilyId::NormalLoc { .. }
            | FamilyId::SkewNormal { .. } => Interval::REAL,
            FamilyId::CauchyScale { .. }
            | FamilyId::CauchyLoc { .. }
            | FamilyId::SkewCauchy { .. } => Interval::new(0.0, 0.0),
            FamilyId::LogisticScale { .. } => Interval::new(-1.0 / theta, 1.0 / theta),
            FamilyId::GumbelScale { .. } => Interval::new(f64::NEG_INFINITY, 1.0 / theta),
            FamilyId::LogisticLoc { s } => Interval::new(-1.0 / s, 1.0 / s),
            FamilyId::GumbelLoc { s } => Interval::new(f64::NEG_INFINITY, 1.0 / s),
            FamilyId::SkewLogistic { s } => {
                Interval::new(-1.0 / (s * (1.0 + theta)), 1.0 / (s * (1.0 - theta)))
            }
            FamilyId::Pareto => Interval::new(f64::NEG_INFINITY, 0.0),
            FamilyId::RightEndpoint { .. } => Interval::REAL,
            FamilyId::GTilde { base, s } => match base {
                SymmetricBase::Normal => Interval::REAL,
                SymmetricBase::Cauchy => Interval::new(0.0, 0.0),
                SymmetricBase::Logistic => Interval::new(-1.0 / s, 1.0 / s),
            },
        }
    }

    /// Cumulant generating function Λ_θ(γ) = log E[e^{γX}], X ~ F_θ.
    ///
    /// Returns +∞ outside the finiteness region and 0 at γ = 0.  Closed
    /// forms are used where they exist; otherwise the defining integral is
    /// evaluated adaptively to ~1e-12 relative accuracy.
    pub fn cgf(&self, theta: f64, gamma_: f64) -> f64 {
        debug_assert!(self.theta_domain().contains(theta));
        if gamma_ == 0.0 {
            return 0.0;
        }
        if !self.cgf_region(theta).contains(gamma_) {
            return f64::INFINITY;
        }
        match self.id {
            FamilyId::WeibullScale { rho } => {
                if rho == 1.0 {
                    -(-theta * gamma_).ln_1p()
                } else {
                    // Substituting u = (x/theta)^rho turns the density into a
                    // standard exponential, removing the x^(rho-1) endpoint
                    // singularity that slows the direct integral.
                    log_integrate_exp(
                        |u| gamma_ * theta * u.powf(1.0 / rho) - u,
                        0.0,
                        f64::INFINITY,
                        1e-12,
                    )
                }
            }
            FamilyId::NormalScale { eta } => {
                theta * eta * gamma_ + 0.5 * theta * theta * gamma_ * gamma_
            }
            FamilyId::LogisticScale { eta } => {
                theta * eta * gamma_ + log_x_over_sin(PI * theta * gamma_)
            }
            FamilyId::GumbelScale { eta } => theta * eta * gamma_ + ln_gamma(1.0 - theta * gamma_),
            FamilyId::NormalLoc { s } => theta * gamma_ + 0.5 * s * s * gamma_ * gamma_,
            FamilyId::LogisticLoc { s } => theta * gamma_ + log_x_over_sin(PI * s * gamma_),
            FamilyId::GumbelLoc { s } => theta * gamma_ + ln_gamma(1.0 - s * gamma_),
            FamilyId::SkewNormal { s } => {
                let a = s * (1.0 + theta);
                let b = s * (1.0 - theta);
                let t1 =
                    (1.0 + theta).ln() + 0.5 * gamma_ * gamma_ * a * a + norm_cdf(-gamma_ * a).ln();
                let t2 =
                    (1.0 - theta).ln() + 0.5 * gamma_ * gamma_ * b * b + norm_cdf(gamma_ * b).ln();
                log_sum_exp(t1, t2)
            }
            FamilyId::RightEndpoint { g } => match g {
                EndpointG::Identity => log_mean_exp(gamma_ * theta),
                EndpointG::ExpMinusOne => {
                    log_mean_exp((gamma_ + 1.0) * theta) - log_mean_exp(theta)
                }
                EndpointG::Power { y } => {
                    // u = (x/theta)^y maps the density to uniform on (0,1),
                    // removing the endpoint singularity for y < 1.
                    log_integrate_exp(|u| gamma_ * theta * u.powf(1.0 / y), 0.0, 1.0, 1e-12)
                }
            },
            FamilyId::CauchyScale { .. }
            | FamilyId::CauchyLoc { .. }
            | FamilyId::SkewCauchy { .. } => {
                // region check above already returned infinity
                unreachable!("cauchy cgf is finite only at 0")
            }
            _ => self.cgf_by_quadrature(theta, gamma_),
        }
    }

    fn cgf_by_quadrature(&self, theta: f64, gamma_: f64) -> f64 {
        let sup = self.support(theta);
        log_integrate_exp(
            |x| gamma_ * x + self.ln_pdf(theta, x),
            sup.lo,
            sup.hi,
            1e-12,
        )
    }

    /// The quantile level pinned by a scale family at the origin: when the
    /// base distribution puts the point 0 inside its support, the λ = G(0)
    /// quantile of F_θ is 0 for every θ and carries no information.
    pub fn not_allowed_level(&self) -> Option<f64> {
        match self.id {
            FamilyId::NormalScale { eta } => Some(norm_cdf(-eta)),
            FamilyId::CauchyScale { eta } => Some((-eta).atan() / PI + 0.5),
            FamilyId::LogisticScale { eta } => Some(1.0 / (1.0 + eta.exp())),
            FamilyId::GumbelScale { eta } => Some((-(eta.exp())).exp()),
            _ => None,
        }
    }

    /// How the method of moments applies to this family.
    pub fn mm_applicability(&self) -> MmApplicability {
        match self.id {
            FamilyId::WeibullScale { rho } => {
                if rho < 1.0 {
                    MmApplicability::NotGood
                } else if rho == 1.0 {
                    MmApplicability::ClosedFormGood
                } else {
                    MmApplicability::NumericGood
                }
            }
            // The mean of the normal scale family is θη, but the moment
            // comparison for this family is defined through the second
            // moment (see mm_rate::gmm_normal_scale_rate); the plain mean
            // estimator is treated as unavailable.
            FamilyId::NormalScale { .. } => MmApplicability::Undefined,
            FamilyId::CauchyScale { .. }
            | FamilyId::CauchyLoc { .. }
            | FamilyId::SkewCauchy { .. } => MmApplicability::Undefined,
            FamilyId::LogisticScale { eta } => {
                if eta == 0.0 {
                    // mean identically zero: not injective in θ
                    MmApplicability::Undefined
                } else {
                    MmApplicability::NumericGood
                }
            }
            FamilyId::GumbelScale { eta } => {
                if (eta + EULER_GAMMA).abs() < 1e-12 {
                    MmApplicability::Undefined
                } else {
                    MmApplicability::NumericGood
                }
            }
            FamilyId::NormalLoc { .. } => MmApplicability::ClosedFormGood,
            FamilyId::LogisticLoc { .. } | FamilyId::GumbelLoc { .. } => {
                MmApplicability::NumericGood
            }
            FamilyId::SkewNormal { .. } | FamilyId::SkewLogistic { .. } => {
                MmApplicability::NumericGood
            }
            FamilyId::Pareto => MmApplicability::NotGood,
            FamilyId::RightEndpoint { .. } => MmApplicability::NumericGood,
            FamilyId::GTilde { base, .. } => match base {
                SymmetricBase::Cauchy => MmApplicability::Undefined,
                _ => MmApplicability::NumericGood,
            },
        }
    }

    /// Tail class relevant to the moment method.
    pub fn tail_class(&self) -> TailClass {
        match self.id {
            FamilyId::WeibullScale { rho } if rho < 1.0 => TailClass::Heavy,
            FamilyId::Pareto => TailClass::Heavy,
            FamilyId::CauchyScale { .. }
            | FamilyId::CauchyLoc { .. }
            | FamilyId::SkewCauchy { .. } => TailClass::Undefined,
            FamilyId::GTilde {
                base: SymmetricBase::Cauchy,
                ..
            } => TailClass::Undefined,
            _ => TailClass::Light,
        }
    }

    /// λ-window of the flat middle piece together with the constant density
    /// on it; Some only for the flattened families.
    pub fn flat_density_window(&self) -> Option<(Interval, f64)> {
        match self.id {
            FamilyId::GTilde { base, s } => {
                let shape = GtildeShape::new(base, s);
                let (lo, hi) = shape.window();
                Some((Interval::new(lo, hi), shape.g0 / shape.c))
            }
            _ => None,
        }
    }

    /// Human-readable identifier including fixed constants.
    pub fn name(&self) -> String {
        match self.id {
            FamilyId::WeibullScale { rho } => format!("weibull-scale(rho={rho})"),
            FamilyId::NormalScale { eta } => format!("normal-scale(eta={eta})"),
            FamilyId::CauchyScale { eta } => format!("cauchy-scale(eta={eta})"),
            FamilyId::LogisticScale { eta } => format!("logistic-scale(eta={eta})"),
            FamilyId::GumbelScale { eta } => format!("gumbel-scale(eta={eta})"),
            FamilyId::NormalLoc { s } => format!("normal-loc(s={s})"),
            FamilyId::CauchyLoc { s } => format!("cauchy-loc(s={s})"),
            FamilyId::LogisticLoc { s } => format!("logistic-loc(s={s})"),
            FamilyId::GumbelLoc { s } => format!("gumbel-loc(s={s})"),
            FamilyId::SkewNormal { s } => format!("skew-normal(s={s})"),
            FamilyId::SkewCauchy { s } => format!("skew-cauchy(s={s})"),
            FamilyId::SkewLogistic { s } => format!("skew-logistic(s={s})"),
            FamilyId::Pareto => "pareto".into(),
            FamilyId::RightEndpoint { g } => format!("right-endpoint(g={})", g.name()),
            FamilyId::GTilde { base, s } => format!("gtilde(base={}, s={s})", base.name()),
        }
    }

    /// Short kebab-case family keyword (no parameters), as used by the CLI.
    pub fn kind_name(&self) -> &'static str {
        match self.id {
            FamilyId::WeibullScale { .. } => "weibull-scale",
            FamilyId::NormalScale { .. } => "normal-scale",
            FamilyId::CauchyScale { .. } => "cauchy-scale",
            FamilyId::LogisticScale { .. } => "logistic-scale",
            FamilyId::GumbelScale { .. } => "gumbel-scale",
            FamilyId::NormalLoc { .. } => "normal-loc",
            FamilyId::CauchyLoc { .. } => "cauchy-loc",
            FamilyId::LogisticLoc { .. } => "logistic-loc",
            FamilyId::GumbelLoc { .. } => "gumbel-loc",
            FamilyId::SkewNormal { .. } => "skew-normal",
            FamilyId::SkewCauchy { .. } => "skew-cauchy",
            FamilyId::SkewLogistic { .. } => "skew-logistic",
            FamilyId::Pareto => "pareto",
            FamilyId::RightEndpoint { .. } => "right-endpoint",
            FamilyId::GTilde { .. } => "gtilde",
        }
    }

    /// Metadata pairs describing the family, for table headers.
    pub fn meta_pairs(&self) -> Vec<(String, String)> {
        let mut out = vec![("family".to_string(), self.kind_name().to_string())];
        match self.id {
            FamilyId::WeibullScale { rho } => out.push(("rho".into(), format!("{rho}"))),
            FamilyId::NormalScale { eta }
            | FamilyId::CauchyScale { eta }
            | FamilyId::LogisticScale { eta }
            | FamilyId::GumbelScale { eta } => out.push(("eta".into(), format!("{eta}"))),
            FamilyId::NormalLoc { s }
            | FamilyId::CauchyLoc { s }
            | FamilyId::LogisticLoc { s }
            | FamilyId::GumbelLoc { s }
            | FamilyId::SkewNormal { s }
            | FamilyId::SkewCauchy { s }
            | FamilyId::SkewLogistic { s } => out.push(("s".into(), format!("{s}"))),
            FamilyId::Pareto => {}
            FamilyId::RightEndpoint { g } => out.push(("g".into(), g.name())),
            FamilyId::GTilde { base, s } => {
                out.push(("base".into(), base.name().into()));
                out.push(("s".into(), format!("{s}")));
            }
        }
        out
    }
}

/// log(x / sin(x)) with the removable singularity at x = 0 filled in by its
/// Taylor expansion; finite for |x| < pi.
fn log_x_over_sin(x: f64) -> f64 {
    debug_assert!(x.abs() < PI);
    if x.abs() < 1e-6 {
        let x2 = x * x;
        x2 / 6.0 + 7.0 * x2 * x2 / 360.0
    } else {
        (x / x.sin()).ln()
    }
}

/// log((e^u - 1)/u), the CGF of the uniform distribution on (0,1) at u.
fn log_mean_exp(u: f64) -> f64 {
    if u.abs() < 1e-5 {
        // log((e^u-1)/u) = u/2 + u^2/24 - u^4/2880 + ...
        u / 2.0 + u * u / 24.0
    } else {
        (u.exp_m1() / u).ln()
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}
