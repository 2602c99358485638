//! Local speed-of-convergence verdicts: quantile method versus moment
//! method (or variants) at a given truth θ0.
//!
//! Both estimators satisfy an LDP whose rate vanishes quadratically at θ0,
//! so to second order the faster estimator is the one with the larger
//! curvature.  Three situations break the clean two-sided comparison and
//! get their own verdicts:
//!
//! * heavy right tails make the moment rate vanish identically above θ0,
//!   so a smaller quantile curvature can still win on that side
//!   (`Incomparable`);
//! * the moment estimator may not exist at all, or may exist without any
//!   exponential concentration (`MmUndefined`, `MmLdpInapplicable`);
//! * for right-endpoint families the sample maximum has a rate with a
//!   corner at θ0 (linear, not quadratic), beating every interior quantile
//!   locally; the crossing level λ0 below which the mean beats the quantile
//!   is computed by [`right_endpoint_lambda0`].

use crate::distributions::{EndpointG, FamilyId, FamilySpec, TailClass};
use crate::exec;
use crate::lambda_opt::{
    f1_max, lambda_tilde_1, lambda_tilde_2, optimal_lambda, LambdaOptError, SearchOptions,
};
use crate::mm_rate::{gmm_normal_scale_curvature, MmContext, MmError};
use crate::mq_rate::{MqContext, MqError};
use crate::search::bisect;
use crate::special::{ln_gamma, EULER_GAMMA};
use crate::table::Table;
use std::f64::consts::PI;
use std::fmt;

/// Relative curvature difference below which two speeds are called equal.
const TIE_TOL: f64 = 1e-9;

/// What the quantile method is being compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareTarget {
    /// First-moment (sample mean) estimator.
    Mm,
    /// Second-moment estimator of the normal scale family.
    Gmm,
    /// Sample maximum of a right-endpoint family.
    MaxOrder,
}

impl CompareTarget {
    pub fn name(self) -> &'static str {
        match self {
            CompareTarget::Mm => "mm",
            CompareTarget::Gmm => "gmm",
            CompareTarget::MaxOrder => "max-order",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    MqFaster,
    /// The rival estimator is locally faster (mean, second moment, or
    /// sample maximum depending on the target).
    RivalFaster,
    /// Curvatures agree within tolerance.
    Tie,
    /// Each estimator wins on one side of θ0.
    Incomparable,
    /// The rival estimator does not exist for this family.
    MmUndefined,
    /// The rival estimator exists but has no large-deviation decay.
    MmLdpInapplicable,
}

/// Outcome of a speed comparison.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub family: FamilySpec,
    pub theta0: f64,
    /// Quantile level used; None only when the comparison itself failed
    /// before a level was fixed.
    pub lambda: Option<f64>,
    pub target: CompareTarget,
    pub mq_curvature: f64,
    pub mm_curvature: Option<f64>,
    pub verdict: Verdict,
    pub rationale: String,
}

impl Comparison {
    /// Verdict keyword with the rival side named after the target.
    pub fn verdict_name(&self) -> &'static str {
        match (self.verdict, self.target) {
            (Verdict::MqFaster, _) => "mq_faster",
            (Verdict::RivalFaster, CompareTarget::Mm) => "mm_faster",
            (Verdict::RivalFaster, CompareTarget::Gmm) => "gmm_faster",
            (Verdict::RivalFaster, CompareTarget::MaxOrder) => "max_order_faster",
            (Verdict::Tie, _) => "tie",
            (Verdict::Incomparable, _) => "incomparable",
            (Verdict::MmUndefined, _) => "mm_undefined",
            (Verdict::MmLdpInapplicable, _) => "mm_ldp_inapplicable",
        }
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(vec!["lambda", "mq_curvature", "mm_curvature"]);
        for (k, v) in self.family.meta_pairs() {
            t.push_meta(&k, &v);
        }
        t.push_meta("theta0", &format!("{}", self.theta0));
        t.push_meta("target", self.target.name());
        t.push_meta("verdict", self.verdict_name());
        t.push_meta("rationale", &self.rationale);
        t.push_row(vec![
            self.lambda.unwrap_or(f64::NAN),
            self.mq_curvature,
            self.mm_curvature.unwrap_or(f64::NAN),
        ]);
        t
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at theta0 = {}: {} ({})",
            self.family.name(),
            self.theta0,
            self.verdict_name(),
            self.rationale
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CompareError {
    Mq(MqError),
    LambdaOpt(LambdaOptError),
    NotRightEndpoint { family: String },
}

impl fmt::Display for CompareError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompareError::Mq(e) => write!(f, "{e}"),
            CompareError::LambdaOpt(e) => write!(f, "{e}"),
            CompareError::NotRightEndpoint { family } => {
                write!(f, "the sample-maximum comparison applies to right-endpoint families, not {family}")
            }
        }
    }
}

impl std::error::Error for CompareError {}

impl From<MqError> for CompareError {
    fn from(e: MqError) -> Self {
        CompareError::Mq(e)
    }
}

impl From<LambdaOptError> for CompareError {
    fn from(e: LambdaOptError) -> Self {
        CompareError::LambdaOpt(e)
    }
}

fn curvature_verdict(mq: f64, rival: f64) -> (Verdict, String) {
    let scale = mq.abs().max(rival.abs());
    if scale < 1e-300 {
        return (Verdict::Tie, "both curvatures vanish".into());
    }
    let rel = (mq - rival) / scale;
    if rel > TIE_TOL {
        (
            Verdict::MqFaster,
            format!("mq curvature {mq:.6e} exceeds {rival:.6e}"),
        )
    } else if rel < -TIE_TOL {
        (
            Verdict::RivalFaster,
            format!("rival curvature {rival:.6e} exceeds {mq:.6e}"),
        )
    } else {
        (
            Verdict::Tie,
            "curvatures agree to within tolerance; the second-order comparison is a tie".into(),
        )
    }
}

/// Quantile method at level λ against the sample-mean estimator.
pub fn compare_mq_mm(
    family: &FamilySpec,
    theta0: f64,
    lambda: f64,
) -> Result<Comparison, CompareError> {
    let mq = MqContext::new(*family, theta0, lambda)?;
    let mq_curv = mq.curvature();
    let base = |verdict, mm_curvature, rationale: String| Comparison {
        family: *family,
        theta0,
        lambda: Some(lambda),
        target: CompareTarget::Mm,
        mq_curvature: mq_curv,
        mm_curvature,
        verdict,
        rationale,
    };

    let mm = match MmContext::new(*family, theta0) {
        Ok(ctx) => ctx,
        Err(MmError::NotApplicable { reason, .. }) => {
            return Ok(base(Verdict::MmUndefined, None, reason));
        }
        Err(MmError::ThetaOutsideDomain { theta, family }) => {
            return Err(CompareError::Mq(MqError::ThetaOutsideDomain {
                theta,
                family,
            }));
        }
    };

    if !mm.ldp_applicable {
        return Ok(base(
            Verdict::MmLdpInapplicable,
            mm.curvature(),
            "the sample mean of this family has polynomial upper-tail decay: no LDP holds for the moment estimator"
                .into(),
        ));
    }

    if mm.tail == TailClass::Heavy {
        // The moment rate vanishes for θ ≥ θ0, so the mean cannot beat any
        // positive quantile curvature on that side.  On the left the verdict
        // holds the quantile side at its shape-one value f1(λ)/θ0² and asks
        // whether the moment curvature, which increases with the shape, has
        // crossed that bar; at the best level the crossing shape is
        // [`weibull_rho0`], independent of θ0.
        let left = mm.curvature().expect("heavy Weibull variance exists");
        let FamilyId::WeibullScale { rho } = family.id else {
            unreachable!("only the Weibull shape family reaches the heavy-tail comparison")
        };
        let bar = mq_curv / (rho * rho);
        let scale = bar.abs().max(left.abs()).max(1e-300);
        let rel = (bar - left) / scale;
        return Ok(if rel > TIE_TOL {
            base(
                Verdict::MqFaster,
                Some(left),
                format!(
                    "the moment rate vanishes for theta above theta0, and on the left the shape-one quantile bar {bar:.6e} stays above the moment curvature {left:.6e}"
                ),
            )
        } else {
            base(
                Verdict::Incomparable,
                Some(left),
                format!(
                    "the moment rate vanishes above theta0 (the quantile wins there) but the moment curvature {left:.6e} has reached the shape-one quantile bar {bar:.6e} on the left"
                ),
            )
        });
    }

    let rival = mm.curvature().expect("light-tailed variance exists");
    let (verdict, rationale) = curvature_verdict(mq_curv, rival);
    Ok(base(verdict, Some(rival), rationale))
}

/// Quantile method at its own optimal level against the second-moment
/// estimator of the normal scale family.
pub fn compare_mq_gmm_normal_scale(eta: f64, theta0: f64) -> Result<Comparison, CompareError> {
    let family = FamilySpec {
        id: FamilyId::NormalScale { eta },
    };
    let best = optimal_lambda(&family, theta0, &SearchOptions::default())?;
    let mq_curv = best.curvature;
    let rival = gmm_normal_scale_curvature(theta0);
    let (verdict, rationale) = curvature_verdict(mq_curv, rival);
    Ok(Comparison {
        family,
        theta0,
        lambda: Some(best.maximizers[0]),
        target: CompareTarget::Gmm,
        mq_curvature: mq_curv,
        mm_curvature: Some(rival),
        verdict,
        rationale: format!(
            "at the optimal level lambda = {:.9}: {rationale}",
            best.maximizers[0]
        ),
    })
}

/// Quantile method at level λ < 1 against the sample maximum of a
/// right-endpoint family.  The maximum always wins locally: its rate decays
/// linearly in |θ − θ0| while any interior quantile decays quadratically.
pub fn compare_mq_max_order(
    family: &FamilySpec,
    theta0: f64,
    lambda: f64,
) -> Result<Comparison, CompareError> {
    if !matches!(family.id, FamilyId::RightEndpoint { .. }) {
        return Err(CompareError::NotRightEndpoint {
            family: family.name(),
        });
    }
    let mq = MqContext::new(*family, theta0, lambda)?;
    Ok(Comparison {
        family: *family,
        theta0,
        lambda: Some(lambda),
        target: CompareTarget::MaxOrder,
        mq_curvature: mq.curvature(),
        mm_curvature: None,
        verdict: Verdict::RivalFaster,
        rationale: "the sample maximum has a first-order (linear) rate at theta0, while an interior quantile decays quadratically; the maximum is locally faster at every lambda < 1"
            .into(),
    })
}

/// Shape value ρ0 at which the heavy-tail Weibull verdict at the best level
/// λ̃1 turns over: below ρ0 the quantile method wins on both sides of θ0;
/// between ρ0 and 1 the two are incomparable.  Root of
/// 4λ̃1(1−λ̃1) = 1 / (Γ(1+2/ρ)/Γ²(1+1/ρ) − 1); θ0 cancels.
pub fn weibull_rho0() -> f64 {
    let f = |rho: f64| {
        let ratio = (ln_gamma(1.0 + 2.0 / rho) - 2.0 * ln_gamma(1.0 + 1.0 / rho)).exp();
        f1_max() - 1.0 / (ratio - 1.0)
    };
    bisect(f, 0.05, 0.999, 1e-13).expect("sign change on (0.05, 0.999)")
}

/// Crossing level λ0 of a right-endpoint family: the quantile estimator at
/// λ > λ0 beats the mean, at λ < λ0 loses to it.  Equals
/// μ'(θ0)² g(θ0)² / (μ'(θ0)² g(θ0)² + σ²(θ0) g'(θ0)²).
pub fn right_endpoint_lambda0(g: EndpointG, theta0: f64) -> f64 {
    assert!(theta0 > 0.0);
    let closed = match g {
        EndpointG::Identity => 0.75,
        EndpointG::Power { y } => (y + 2.0) / (2.0 * (y + 1.0)),
        EndpointG::ExpMinusOne => {
            let e = theta0.exp();
            let t = theta0;
            let num = e * e - 2.0 * e * (1.0 + t) + (1.0 + t) * (1.0 + t);
            let den = 2.0 * e * e - e * (4.0 + 2.0 * t + t * t) + 2.0 + 2.0 * t + t * t;
            num / den
        }
    };
    #[cfg(debug_assertions)]
    {
        let family = FamilySpec {
            id: FamilyId::RightEndpoint { g },
        };
        let mm = MmContext::new(family, theta0).expect("right-endpoint moment context");
        let jpp = mm.curvature().expect("finite variance");
        // λ0 solves I''(λ0) = J'': I''(λ) = (λ/(1-λ)) (g'/g)²
        let gg = g.g_prime(theta0) / g.g(theta0);
        let generic = jpp / (jpp + gg * gg);
        debug_assert!(
            (closed - generic).abs() <= 1e-10,
            "lambda0 closed form {closed} vs generic {generic}"
        );
    }
    closed
}

/// Gumbel-scale curvature panorama: the quantile curvature at the two
/// distinguished levels against the mean-estimator curvature, across a grid
/// of location offsets η at fixed θ0.  The moment column
/// 6 γ_Euler² / (π² θ0²) is the η-free reference constant of this family's
/// comparison; the mq columns inherit the (η + quantile)² growth.
pub fn figure1_data(theta0: f64, etas: &[f64]) -> Table {
    let l1 = lambda_tilde_1();
    let l2 = lambda_tilde_2();
    let mm_ref = 6.0 * EULER_GAMMA * EULER_GAMMA / (PI * PI * theta0 * theta0);
    let rows = exec::map_slice(etas, move |&eta| {
        let family = FamilySpec {
            id: FamilyId::GumbelScale { eta },
        };
        let c2 = MqContext {
            family,
            theta0,
            lambda: l2,
        }
        .curvature();
        let c1 = MqContext {
            family,
            theta0,
            lambda: l1,
        }
        .curvature();
        vec![eta, c2, c1, mm_ref]
    });
    let mut t = Table::new(vec![
        "eta",
        "mq_curvature_lambda_tilde_2",
        "mq_curvature_lambda_tilde_1",
        "mm_curvature",
    ]);
    t.push_meta("family", "gumbel-scale");
    t.push_meta("theta0", &format!("{theta0}"));
    t.push_meta("lambda_tilde_1", &format!("{l1:.17}"));
    t.push_meta("lambda_tilde_2", &format!("{l2:.17}"));
    for r in rows {
        t.push_row(r);
    }
    t
}

/// Rate functions of the uniform right-endpoint family at the crossing
/// level λ0 = 3/4 and θ0 = 1: quantile versus mean rates on a θ grid.  The
/// curvatures agree there, so the difference changes sign at θ0 and the
/// winner depends on the side.
pub fn figure2_data(thetas: &[f64]) -> Table {
    let family = FamilySpec {
        id: FamilyId::RightEndpoint {
            g: EndpointG::Identity,
        },
    };
    let theta0 = 1.0;
    let lambda = right_endpoint_lambda0(EndpointG::Identity, theta0);
    let mq = MqContext::new(family, theta0, lambda).expect("valid level");
    let mm = MmContext::new(family, theta0).expect("uniform moment context");
    let rows = exec::map_slice(thetas, move |&th| vec![th, mq.rate(th), mm.rate(th)]);
    let mut t = Table::new(vec!["theta", "mq_rate", "mm_rate"]);
    t.push_meta("family", "right-endpoint");
    t.push_meta("g", "identity");
    t.push_meta("theta0", &format!("{theta0}"));
    t.push_meta("lambda", &format!("{lambda}"));
    for r in rows {
        t.push_row(r);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::make_family;
    use crate::grid::linspace;

    #[test]
    fn weibull_shape_threshold_matches_reference() {
        // mpmath root of 4λ̃1(1−λ̃1) (Γ(1+2/ρ)/Γ²(1+1/ρ) − 1) = 1
        let rho0 = weibull_rho0();
        assert!((rho0 - 0.81067406330893223).abs() < 1e-9, "rho0 = {rho0}");
    }

    #[test]
    fn weibull_verdict_flips_at_rho0() {
        let l1 = lambda_tilde_1();
        let rho0 = weibull_rho0();
        let below = make_family(FamilyId::WeibullScale { rho: rho0 - 1e-3 }).unwrap();
        let above = make_family(FamilyId::WeibullScale { rho: rho0 + 1e-3 }).unwrap();
        let c_below = compare_mq_mm(&below, 1.0, l1).unwrap();
        let c_above = compare_mq_mm(&above, 1.0, l1).unwrap();
        assert_eq!(c_below.verdict, Verdict::MqFaster, "{}", c_below.rationale);
        assert_eq!(
            c_above.verdict,
            Verdict::Incomparable,
            "{}",
            c_above.rationale
        );
        // far below the threshold the quantile wins outright; the left
        // moment curvature at shape 1/2 is 22/(24 - 22) = 1/5 exactly
        let low = make_family(FamilyId::WeibullScale { rho: 0.5 }).unwrap();
        let c_low = compare_mq_mm(&low, 1.0, l1).unwrap();
        assert_eq!(c_low.verdict, Verdict::MqFaster);
        assert!((c_low.mm_curvature.unwrap() - 0.2).abs() < 1e-10);
        // and past shape 1 the tail is light and the mean simply wins
        let light = make_family(FamilyId::WeibullScale { rho: 1.2 }).unwrap();
        let c_light = compare_mq_mm(&light, 1.0, l1).unwrap();
        assert_eq!(c_light.verdict, Verdict::RivalFaster);
        assert_eq!(c_light.verdict_name(), "mm_faster");
    }

    #[test]
    fn exponential_mean_beats_best_quantile() {
        let f = make_family(FamilyId::WeibullScale { rho: 1.0 }).unwrap();
        let c = compare_mq_mm(&f, 2.0, lambda_tilde_1()).unwrap();
        assert_eq!(c.verdict, Verdict::RivalFaster);
        // curvatures 0.6476/θ0² vs 1/θ0²
        assert!((c.mq_curvature - 0.6476102378919149 / 4.0).abs() < 1e-12);
        assert!((c.mm_curvature.unwrap() - 0.25).abs() < 1e-13);
    }

    #[test]
    fn right_endpoint_verdict_flips_at_lambda0() {
        let f = make_family(FamilyId::RightEndpoint {
            g: EndpointG::Identity,
        })
        .unwrap();
        let l0 = right_endpoint_lambda0(EndpointG::Identity, 1.0);
        assert_eq!(l0, 0.75);
        let below = compare_mq_mm(&f, 1.0, l0 - 0.01).unwrap();
        let above = compare_mq_mm(&f, 1.0, l0 + 0.01).unwrap();
        let at = compare_mq_mm(&f, 1.0, l0).unwrap();
        assert_eq!(below.verdict, Verdict::RivalFaster);
        assert_eq!(above.verdict, Verdict::MqFaster);
        assert_eq!(at.verdict, Verdict::Tie);
    }

    #[test]
    fn crossing_levels_in_closed_form() {
        assert_eq!(right_endpoint_lambda0(EndpointG::Identity, 3.0), 0.75);
        for &(y, want) in &[(0.5, 2.5 / 3.0), (2.0, 2.0 / 3.0), (5.0, 7.0 / 12.0)] {
            let got = right_endpoint_lambda0(EndpointG::Power { y }, 1.3);
            assert!((got - want).abs() < 1e-12, "y = {y}: {got} vs {want}");
        }
        // mpmath for the exponential-increment map
        let cases = [
            (0.5, 0.71865440442327424),
            (1.0, 0.6877772131744516),
            (2.0, 0.63102885513632224),
        ];
        for (t0, want) in cases {
            let got = right_endpoint_lambda0(EndpointG::ExpMinusOne, t0);
            assert!((got - want).abs() < 1e-12, "theta0 = {t0}: {got} vs {want}");
        }
    }

    #[test]
    fn location_family_verdicts() {
        // gumbel location: best level λ̃2 beats the mean
        let f = make_family(FamilyId::GumbelLoc { s: 1.0 }).unwrap();
        let c = compare_mq_mm(&f, 0.0, lambda_tilde_2()).unwrap();
        assert_eq!(c.verdict, Verdict::MqFaster);
        assert!((c.mm_curvature.unwrap() - 6.0 / (PI * PI)).abs() < 1e-13);

        // normal location: the mean is the MLE and wins at every level
        let f = make_family(FamilyId::NormalLoc { s: 1.0 }).unwrap();
        let c = compare_mq_mm(&f, 0.0, 0.5).unwrap();
        assert_eq!(c.verdict, Verdict::RivalFaster);

        // logistic location: mean beats even the median level
        let f = make_family(FamilyId::LogisticLoc { s: 1.0 }).unwrap();
        let c = compare_mq_mm(&f, 0.0, 0.5).unwrap();
        assert_eq!(c.verdict, Verdict::RivalFaster);
        assert!((c.mq_curvature - 0.25).abs() < 1e-15);
        assert!((c.mm_curvature.unwrap() - 3.0 / (PI * PI)).abs() < 1e-13);
    }

    #[test]
    fn undefined_and_inapplicable_verdicts() {
        let f = make_family(FamilyId::CauchyLoc { s: 1.0 }).unwrap();
        let c = compare_mq_mm(&f, 0.0, 0.5).unwrap();
        assert_eq!(c.verdict, Verdict::MmUndefined);
        assert_eq!(c.verdict_name(), "mm_undefined");

        let f = make_family(FamilyId::Pareto).unwrap();
        let c = compare_mq_mm(&f, 0.4, 0.5).unwrap();
        assert_eq!(c.verdict, Verdict::MmLdpInapplicable);
        assert!(
            c.mm_curvature.is_some(),
            "exploratory curvature for theta0 < 1/2"
        );
        let c = compare_mq_mm(&f, 1.5, 0.5).unwrap();
        assert_eq!(c.verdict, Verdict::MmUndefined, "no mean at theta0 = 1.5");
    }

    #[test]
    fn gumbel_scale_large_offsets_favor_the_quantile() {
        let l2 = lambda_tilde_2();
        for &eta in &[-50.0, 50.0] {
            let f = make_family(FamilyId::GumbelScale { eta }).unwrap();
            let c = compare_mq_mm(&f, 1.0, l2).unwrap();
            assert_eq!(c.verdict, Verdict::MqFaster, "eta = {eta}: {}", c.rationale);
        }
    }

    #[test]
    fn second_moment_estimator_beats_quantiles_for_normal_scale() {
        let c = compare_mq_gmm_normal_scale(0.0, 1.0).unwrap();
        assert_eq!(c.verdict, Verdict::RivalFaster);
        assert_eq!(c.verdict_name(), "gmm_faster");
        assert!((c.mm_curvature.unwrap() - 2.0).abs() < 1e-15);
        assert!((c.mq_curvature - 0.6084179315538756).abs() < 2e-3);
    }

    #[test]
    fn sample_maximum_beats_quantiles_on_right_endpoint() {
        let f = make_family(FamilyId::RightEndpoint {
            g: EndpointG::Power { y: 2.0 },
        })
        .unwrap();
        let c = compare_mq_max_order(&f, 1.0, 0.9).unwrap();
        assert_eq!(c.verdict, Verdict::RivalFaster);
        assert_eq!(c.verdict_name(), "max_order_faster");
        let not_endpoint = make_family(FamilyId::Pareto).unwrap();
        assert!(compare_mq_max_order(&not_endpoint, 0.5, 0.9).is_err());
    }

    #[test]
    fn gumbel_scale_panorama_keeps_the_quantile_ahead() {
        let etas = linspace(-3.0, 3.0, 121);
        let t = figure1_data(1.0, &etas);
        assert_eq!(t.rows.len(), 121);
        let (c2, c1, cm) = (
            t.column("mq_curvature_lambda_tilde_2"),
            t.column("mq_curvature_lambda_tilde_1"),
            t.column("mm_curvature"),
        );
        let mm_ref = t.rows[0][cm];
        let mut min_gap = f64::INFINITY;
        for row in &t.rows {
            assert_eq!(row[cm], mm_ref, "moment column must be constant");
            min_gap = min_gap.min(row[c2].max(row[c1]) - mm_ref);
        }
        // independent scan put the minimum of the gap at eta = -0.25, value ~0.1295
        assert!(min_gap > 0.12, "min gap {min_gap}");
        assert!(min_gap < 0.14, "min gap {min_gap}");
    }

    #[test]
    fn crossing_level_rates_swap_sides() {
        let thetas = linspace(0.85, 1.15, 301);
        let t = figure2_data(&thetas);
        assert_eq!(t.rows.len(), 301);
        let (qm, mm) = (t.column("mq_rate"), t.column("mm_rate"));
        let first = t.rows.first().unwrap();
        let last = t.rows.last().unwrap();
        let d_first = first[qm] - first[mm];
        let d_last = last[qm] - last[mm];
        assert!(
            d_first * d_last < 0.0,
            "difference should change sign: {d_first} vs {d_last}"
        );
        // both rates vanish at theta0 = 1 (grid point 150)
        let mid = &t.rows[150];
        assert!(mid[qm].abs() < 1e-14 && mid[mm].abs() < 1e-14);
    }
}
