//! Search for the quantile level λ that maximizes the local curvature
//! I''_{λ,θ0}(θ0), i.e. the level at which the quantile estimator converges
//! fastest in the large-deviation sense.
//!
//! Two distinguished levels show up repeatedly in closed-form answers:
//!
//! * `lambda_tilde_1`, the maximizer of f1(λ) = (1-λ) log²(1-λ) / λ
//!   (Weibull/exponential scale and Pareto families);
//! * `lambda_tilde_2 = 1 - lambda_tilde_1`, the maximizer of
//!   f2(λ) = λ log²λ / (1-λ) (Gumbel location).
//!
//! Everything else is found by a dense grid scan refined with golden
//! section.  The scan reports every level whose curvature ties the global
//! supremum, since symmetric families genuinely have twin maximizers.

use crate::distributions::{make_gtilde, FamilyError, FamilyId, FamilySpec, Interval};
use crate::exec;
use crate::mq_rate::{MqContext, MqError};
use crate::search::{golden_section_max, newton_bisect};
use crate::table::Table;
use std::fmt;
use std::sync::OnceLock;

/// Maximizer of f1(λ) = (1-λ) log²(1-λ) / λ over (0, 1): the unique root of
/// 2λ + log(1-λ) in (1/2, 1).
pub fn lambda_tilde_1() -> f64 {
    static CACHE: OnceLock<f64> = OnceLock::new();
    *CACHE.get_or_init(|| {
        newton_bisect(
            |l| 2.0 * l + (-l).ln_1p(),
            |l| 2.0 - 1.0 / (1.0 - l),
            0.5 + 1e-12,
            1.0 - 1e-12,
            1e-15,
        )
        .expect("bracketed root")
    })
}

/// Maximizer of f2(λ) = λ log²λ / (1-λ) over (0, 1): the unique root of
/// log λ + 2 - 2λ in (0, 1/2).  Equals 1 - lambda_tilde_1.
pub fn lambda_tilde_2() -> f64 {
    static CACHE: OnceLock<f64> = OnceLock::new();
    *CACHE.get_or_init(|| {
        newton_bisect(
            |l| l.ln() + 2.0 - 2.0 * l,
            |l| 1.0 / l - 2.0,
            1e-12,
            0.5 - 1e-12,
            1e-15,
        )
        .expect("bracketed root")
    })
}

/// f1 evaluated at its maximizer; equals 4 λ̃1 (1 - λ̃1).
pub fn f1_max() -> f64 {
    let l = lambda_tilde_1();
    4.0 * l * (1.0 - l)
}

/// Knobs of the grid search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Number of grid points across (margin, 1 - margin).
    pub grid_points: usize,
    /// Distance kept from the endpoints of (0, 1).
    pub margin: f64,
    /// Golden-section tolerance on λ.
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            grid_points: 4096,
            margin: 1e-6,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    /// The maximizer is known analytically (and was cross-checked by a scan).
    ClosedForm,
    /// Dense scan plus golden-section refinement.
    GridRefined,
}

/// Result of the level search.
#[derive(Debug, Clone)]
pub struct OptimalLambda {
    pub family: FamilySpec,
    pub theta0: f64,
    /// Every level achieving the supremum, ascending.  Symmetric families
    /// report the twin pair {λ*, 1 − λ*}.
    pub maximizers: Vec<f64>,
    /// The (common) curvature at the maximizers.
    pub curvature: f64,
    pub method: SearchMethod,
    pub symmetric_pair: bool,
}

impl OptimalLambda {
    /// Smallest distance from any maximizer to a reference level.
    pub fn gap_to(&self, reference: f64) -> f64 {
        self.maximizers
            .iter()
            .map(|m| (m - reference).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(vec!["lambda_max", "curvature"]);
        for (k, v) in self.family.meta_pairs() {
            t.push_meta(&k, &v);
        }
        t.push_meta("theta0", &format!("{}", self.theta0));
        t.push_meta(
            "method",
            match self.method {
                SearchMethod::ClosedForm => "closed-form",
                SearchMethod::GridRefined => "grid-refined",
            },
        );
        for &m in &self.maximizers {
            t.push_row(vec![m, self.curvature]);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaOptError {
    /// The curvature has no interior maximizer: its supremum sits on the
    /// boundary of (0, 1).
    NoInteriorMaximizer {
        family: String,
        detail: String,
    },
    Mq(MqError),
}

impl fmt::Display for LambdaOptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaOptError::NoInteriorMaximizer { family, detail } => {
                write!(f, "{family}: no interior optimal level: {detail}")
            }
            LambdaOptError::Mq(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LambdaOptError {}

impl From<MqError> for LambdaOptError {
    fn from(e: MqError) -> Self {
        LambdaOptError::Mq(e)
    }
}

/// Curvature as a function of λ with everything else pinned.
fn curvature_at(family: FamilySpec, theta0: f64, lambda: f64) -> f64 {
    MqContext {
        family,
        theta0,
        lambda,
    }
    .curvature()
}

/// Is the curvature symmetric under λ ↦ 1 − λ for this family and θ0?
/// True for scale families with a symmetric base centered at the origin
/// (η = 0, excluding Gumbel), skew families at θ0 = 0, symmetric location
/// families, and the flattened families.
fn curvature_symmetric(family: &FamilySpec, theta0: f64) -> bool {
    match family.id {
        FamilyId::NormalScale { eta }
        | FamilyId::CauchyScale { eta }
        | FamilyId::LogisticScale { eta } => eta == 0.0,
        FamilyId::SkewNormal { .. }
        | FamilyId::SkewCauchy { .. }
        | FamilyId::SkewLogistic { .. } => theta0 == 0.0,
        FamilyId::NormalLoc { .. }
        | FamilyId::CauchyLoc { .. }
        | FamilyId::LogisticLoc { .. }
        | FamilyId::GTilde { .. } => true,
        _ => false,
    }
}

/// Closed-form optimal levels, where known.
fn closed_form_level(family: &FamilySpec) -> Option<Vec<f64>> {
    match family.id {
        FamilyId::WeibullScale { .. } | FamilyId::Pareto => Some(vec![lambda_tilde_1()]),
        FamilyId::NormalLoc { .. } | FamilyId::CauchyLoc { .. } | FamilyId::LogisticLoc { .. } => {
            Some(vec![0.5])
        }
        FamilyId::GumbelLoc { .. } => Some(vec![lambda_tilde_2()]),
        _ => None,
    }
}

struct ScanOutcome {
    maximizers: Vec<f64>,
    curvature: f64,
}

/// Dense scan over `lo..=hi` followed by golden refinement of every local
/// maximum; `closed_right` marks hi as a legitimate candidate (used for the
/// half-interval scan of symmetric curvatures, where hi = 1/2 is interior).
fn scan_interval(
    family: FamilySpec,
    theta0: f64,
    lo: f64,
    hi: f64,
    n: usize,
    tol: f64,
    closed_right: bool,
) -> Result<ScanOutcome, LambdaOptError> {
    let skip = family.not_allowed_level();
    let grid: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let vals = exec::map_slice(&grid, move |&l| {
        if let Some(l0) = skip {
            if (l - l0).abs() <= 1e-9 {
                return f64::NEG_INFINITY;
            }
        }
        curvature_at(family, theta0, l)
    });

    let mut best_idx = 0usize;
    for i in 1..n {
        if vals[i] > vals[best_idx] {
            best_idx = i;
        }
    }
    if best_idx == 0 || (best_idx == n - 1 && !closed_right) {
        return Err(LambdaOptError::NoInteriorMaximizer {
            family: family.name(),
            detail: format!(
                "the scan peaks at the grid edge lambda = {:.6}; the supremum is approached at the boundary of (0, 1)",
                grid[best_idx]
            ),
        });
    }

    // refine every local maximum
    let mut cands: Vec<(f64, f64)> = Vec::new();
    let f = |l: f64| curvature_at(family, theta0, l);
    for i in 1..n - 1 {
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] && vals[i].is_finite() {
            let (x, v) = golden_section_max(f, grid[i - 1], grid[i + 1], tol);
            cands.push((x, v));
        }
    }
    if closed_right && vals[n - 1] >= vals[n - 2] {
        let (x, v) = golden_section_max(f, grid[n - 2], hi, tol);
        cands.push((x.min(hi), v));
    }
    if cands.is_empty() {
        // flat or pathological profile: fall back to the raw grid best
        cands.push((grid[best_idx], vals[best_idx]));
    }

    // dedupe nearby candidates, keeping the better value
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (x, v) in cands {
        match merged.last_mut() {
            Some((mx, mv)) if (x - *mx).abs() <= 1e-7 => {
                if v > *mv {
                    *mx = x;
                    *mv = v;
                }
            }
            _ => merged.push((x, v)),
        }
    }

    let sup = merged
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let keep_tol = 1e-9 * sup.abs().max(1.0);
    let maximizers: Vec<f64> = merged
        .iter()
        .filter(|&&(_, v)| sup - v <= keep_tol)
        .map(|&(x, _)| x)
        .collect();
    Ok(ScanOutcome {
        maximizers,
        curvature: sup,
    })
}

/// Finds every λ in (0, 1) maximizing the curvature of the quantile-method
/// rate at θ0.
pub fn optimal_lambda(
    family: &FamilySpec,
    theta0: f64,
    opts: &SearchOptions,
) -> Result<OptimalLambda, LambdaOptError> {
    // validate inputs through the usual constructor
    MqContext::new(*family, theta0, 0.5)?;

    if let FamilyId::RightEndpoint { .. } = family.id {
        return Err(LambdaOptError::NoInteriorMaximizer {
            family: family.name(),
            detail: "curvature grows like lambda/(1-lambda) toward lambda = 1; \
                     the sample maximum is the natural estimator here"
                .into(),
        });
    }

    let lo = opts.margin;
    let hi = 1.0 - opts.margin;

    if let Some(levels) = closed_form_level(family) {
        let curvature = curvature_at(*family, theta0, levels[0]);
        // cross-check against a coarse scan: the closed form must dominate
        let scan = scan_interval(*family, theta0, lo, hi, opts.grid_points, opts.tol, false)?;
        if scan.curvature <= curvature * (1.0 + 1e-9) + 1e-12 {
            return Ok(OptimalLambda {
                family: *family,
                theta0,
                maximizers: levels,
                curvature,
                method: SearchMethod::ClosedForm,
                symmetric_pair: false,
            });
        }
        // should not happen; trust the scan if it ever does
        return Ok(OptimalLambda {
            family: *family,
            theta0,
            maximizers: scan.maximizers,
            curvature: scan.curvature,
            method: SearchMethod::GridRefined,
            symmetric_pair: false,
        });
    }

    if curvature_symmetric(family, theta0) {
        // scan only (margin, 1/2] and mirror the answer exactly
        let n = (opts.grid_points / 2).max(8);
        let scan = scan_interval(*family, theta0, lo, 0.5, n, opts.tol, true)?;
        let mut maximizers = Vec::new();
        let mut pair = false;
        for m in scan.maximizers {
            if (m - 0.5).abs() <= 1e-7 {
                maximizers.push(0.5);
            } else {
                maximizers.push(m);
                maximizers.push(1.0 - m);
                pair = true;
            }
        }
        maximizers.sort_by(f64::total_cmp);
        maximizers.dedup();
        return Ok(OptimalLambda {
            family: *family,
            theta0,
            maximizers,
            curvature: scan.curvature,
            method: SearchMethod::GridRefined,
            symmetric_pair: pair,
        });
    }

    let scan = scan_interval(*family, theta0, lo, hi, opts.grid_points, opts.tol, false)?;
    Ok(OptimalLambda {
        family: *family,
        theta0,
        maximizers: scan.maximizers,
        curvature: scan.curvature,
        method: SearchMethod::GridRefined,
        symmetric_pair: false,
    })
}

/// Tabulates the optimal level of the Gumbel scale family across a grid of
/// location offsets η, with the distance to λ̃2 in the last column.  As
/// |η| grows the offset dominates the quantile factor and the optimal level
/// drifts toward λ̃2 at an O(1/|η|) pace.
pub fn gumbel_scale_lambda_limit(theta0: f64, etas: &[f64]) -> Table {
    lambda_limit_table(theta0, etas, lambda_tilde_2(), |eta| {
        FamilyId::GumbelScale { eta }
    })
}

/// Same study for the normal scale family, whose optimal level drifts
/// toward 1/2.
pub fn normal_scale_lambda_limit(theta0: f64, etas: &[f64]) -> Table {
    lambda_limit_table(theta0, etas, 0.5, |eta| FamilyId::NormalScale { eta })
}

fn lambda_limit_table(
    theta0: f64,
    etas: &[f64],
    reference: f64,
    id_of: impl Fn(f64) -> FamilyId,
) -> Table {
    let mut t = Table::new(vec!["eta", "lambda_max", "curvature", "gap"]);
    t.push_meta("theta0", &format!("{theta0}"));
    t.push_meta("reference_level", &format!("{reference:.17}"));
    let opts = SearchOptions::default();
    for &eta in etas {
        let family = FamilySpec { id: id_of(eta) };
        match optimal_lambda(&family, theta0, &opts) {
            Ok(b) => {
                // report the maximizer closest to the reference level
                let m = b
                    .maximizers
                    .iter()
                    .copied()
                    .min_by(|a, b| (a - reference).abs().total_cmp(&(b - reference).abs()))
                    .unwrap();
                t.push_row(vec![eta, m, b.curvature, (m - reference).abs()]);
            }
            Err(_) => t.push_row(vec![eta, f64::NAN, f64::NAN, f64::NAN]),
        }
    }
    t
}

/// Everything the flattened-family counterexample asserts, in one report.
#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub base: FamilySpec,
    pub gtilde: FamilySpec,
    /// λ-window covered by the flat piece of the density.
    pub window: Interval,
    /// Constant density value on the flat piece.
    pub window_density: f64,
    /// max over the open window of |I''(λ) λ(1-λ) / density² − 1|.
    pub window_identity_max_dev: f64,
    /// Curvature of the flattened family is strictly larger at 1/2 ± δ
    /// than at 1/2.
    pub gtilde_min_at_half: bool,
    /// Curvature of the unflattened base is strictly smaller at 1/2 ± δ.
    pub base_max_at_half: bool,
    pub gtilde_curv_at_half: f64,
    pub base_curv_at_half: f64,
}

impl CounterexampleReport {
    /// The claim verified: on the window the curvature is exactly
    /// density²/(λ(1-λ)), so λ = 1/2 is a strict local minimum of the
    /// flattened family even though it is the maximum of the base.
    pub fn passed(&self) -> bool {
        self.window_identity_max_dev <= 1e-8 && self.gtilde_min_at_half && self.base_max_at_half
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(vec![
            "lambda",
            "gtilde_curvature",
            "base_curvature",
            "on_window",
            "window_identity_residual",
        ]);
        for (k, v) in self.gtilde.meta_pairs() {
            t.push_meta(&k, &v);
        }
        t.push_meta("window_lo", &format!("{:.17e}", self.window.lo));
        t.push_meta("window_hi", &format!("{:.17e}", self.window.hi));
        t.push_meta("passed", if self.passed() { "true" } else { "false" });
        let d2 = self.window_density * self.window_density;
        for i in 1..200 {
            let lam = i as f64 / 200.0;
            let g = curvature_at(self.gtilde, 0.0, lam);
            let b = curvature_at(self.base, 0.0, lam);
            let on = self.window.contains(lam);
            let resid = if on {
                (g * lam * (1.0 - lam) / d2 - 1.0).abs()
            } else {
                f64::NAN
            };
            t.push_row(vec![lam, g, b, if on { 1.0 } else { 0.0 }, resid]);
        }
        t
    }
}

/// Builds the flattened variant of a symmetric location family and checks
/// that its optimal-level profile dips at the median.
pub fn counterexample_check(base: &FamilySpec) -> Result<CounterexampleReport, FamilyError> {
    let gtilde = make_gtilde(base)?;
    let (window, density) = gtilde.flat_density_window().expect("gtilde has a window");
    let d2 = density * density;

    // identity on the open window, 101 interior points
    let mut max_dev: f64 = 0.0;
    for i in 1..=101 {
        let lam = window.lo + (window.hi - window.lo) * i as f64 / 102.0;
        let c = curvature_at(gtilde, 0.0, lam);
        max_dev = max_dev.max((c * lam * (1.0 - lam) / d2 - 1.0).abs());
    }

    let half_width = 0.5 * (window.hi - window.lo);
    let delta = (0.5 * half_width).min(0.01);
    let g_mid = curvature_at(gtilde, 0.0, 0.5);
    let g_lo = curvature_at(gtilde, 0.0, 0.5 - delta);
    let g_hi = curvature_at(gtilde, 0.0, 0.5 + delta);
    let b_mid = curvature_at(*base, 0.0, 0.5);
    let b_lo = curvature_at(*base, 0.0, 0.5 - delta);
    let b_hi = curvature_at(*base, 0.0, 0.5 + delta);

    Ok(CounterexampleReport {
        base: *base,
        gtilde,
        window,
        window_density: density,
        window_identity_max_dev: max_dev,
        gtilde_min_at_half: g_lo > g_mid && g_hi > g_mid,
        base_max_at_half: b_lo < b_mid && b_hi < b_mid,
        gtilde_curv_at_half: g_mid,
        base_curv_at_half: b_mid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::make_family;

    #[test]
    fn distinguished_levels_match_references() {
        // mpmath, 50 digits
        assert!((lambda_tilde_1() - 0.79681213002002005).abs() < 1e-14);
        assert!((lambda_tilde_2() - 0.20318786997997995).abs() < 1e-14);
        assert!((lambda_tilde_1() + lambda_tilde_2() - 1.0).abs() < 1e-13);
        assert!((f1_max() - 0.64761023789191486).abs() < 1e-14);
    }

    #[test]
    fn distinguished_levels_are_stationary() {
        let f1 = |l: f64| (1.0 - l) * (-l).ln_1p().powi(2) / l;
        let f2 = |l: f64| l * l.ln().powi(2) / (1.0 - l);
        let (l1, l2) = (lambda_tilde_1(), lambda_tilde_2());
        let h = 1e-6;
        assert!((f1(l1 + h) - f1(l1 - h)).abs() / (2.0 * h) < 1e-8);
        assert!((f2(l2 + h) - f2(l2 - h)).abs() / (2.0 * h) < 1e-8);
        assert!(f1(l1) > f1(l1 + 1e-3) && f1(l1) > f1(l1 - 1e-3));
        assert!(f2(l2) > f2(l2 + 1e-3) && f2(l2) > f2(l2 - 1e-3));
    }

    #[test]
    fn closed_form_families() {
        let opts = SearchOptions::default();
        let wb = make_family(FamilyId::WeibullScale { rho: 2.0 }).unwrap();
        let b = optimal_lambda(&wb, 1.5, &opts).unwrap();
        assert_eq!(b.method, SearchMethod::ClosedForm);
        assert_eq!(b.maximizers, vec![lambda_tilde_1()]);
        let want = 4.0 * 0.6476102378919149 / 2.25; // rho² f1max / θ0²
        assert!((b.curvature - want).abs() < 1e-12 * want);

        let nl = make_family(FamilyId::NormalLoc { s: 1.0 }).unwrap();
        let b = optimal_lambda(&nl, 0.0, &opts).unwrap();
        assert_eq!(b.maximizers, vec![0.5]);

        let gl = make_family(FamilyId::GumbelLoc { s: 1.0 }).unwrap();
        let b = optimal_lambda(&gl, 2.0, &opts).unwrap();
        assert_eq!(b.maximizers, vec![lambda_tilde_2()]);
        // f2(λ̃2) = 4 λ̃2 (1 − λ̃2) = f1max
        assert!((b.curvature - f1_max()).abs() < 1e-12);
    }

    #[test]
    fn symmetric_scale_families_report_twin_levels() {
        let opts = SearchOptions::default();
        // reference levels from an independent high-precision scan
        let f = make_family(FamilyId::NormalScale { eta: 0.0 }).unwrap();
        let b = optimal_lambda(&f, 1.0, &opts).unwrap();
        assert!(b.symmetric_pair);
        assert_eq!(b.maximizers.len(), 2);
        assert!((b.maximizers[1] - 0.94237596272496796).abs() < 1e-7);
        assert!((b.maximizers[0] + b.maximizers[1] - 1.0).abs() < 1e-15);
        assert!((b.curvature - 0.60841793155387556).abs() < 1e-9);

        let f = make_family(FamilyId::CauchyScale { eta: 0.0 }).unwrap();
        let b = optimal_lambda(&f, 1.0, &opts).unwrap();
        assert!((b.maximizers[0] - 0.20550946182543913).abs() < 1e-7);
        assert!((b.curvature - 0.14332792508905077).abs() < 1e-9);

        let f = make_family(FamilyId::LogisticScale { eta: 0.0 }).unwrap();
        let b = optimal_lambda(&f, 1.0, &opts).unwrap();
        assert!((b.maximizers[1] - 0.91677827980048239).abs() < 1e-7);
        assert!((b.curvature - 0.43922883989064515).abs() < 1e-9);
    }

    #[test]
    fn asymmetric_scans() {
        let opts = SearchOptions::default();
        let f = make_family(FamilyId::CauchyScale { eta: 1.0 }).unwrap();
        let b = optimal_lambda(&f, 1.0, &opts).unwrap();
        assert_eq!(b.maximizers.len(), 1);
        assert!((b.maximizers[0] - 0.65439188322252905).abs() < 1e-7);
        assert!((b.curvature - 0.63984484873181668).abs() < 1e-9);

        let f = make_family(FamilyId::GumbelScale { eta: 0.0 }).unwrap();
        let b = optimal_lambda(&f, 1.0, &opts).unwrap();
        assert!((b.maximizers[0] - 0.030493067777949365).abs() < 1e-7);
        assert!((b.curvature - 0.59864235026230283).abs() < 1e-9);

        let f = make_family(FamilyId::SkewNormal { s: 1.0 }).unwrap();
        let b = optimal_lambda(&f, 0.5, &opts).unwrap();
        assert!((b.maximizers[0] - 0.94045325177992521).abs() < 1e-7);
        assert!((b.curvature - 2.2350762133801863).abs() < 1e-8);

        let f = make_family(FamilyId::SkewCauchy { s: 1.0 }).unwrap();
        let b = optimal_lambda(&f, 0.5, &opts).unwrap();
        assert!((b.maximizers[0] - 0.84155264811244106).abs() < 1e-7);

        let f = make_family(FamilyId::SkewLogistic { s: 1.0 }).unwrap();
        let b = optimal_lambda(&f, 0.5, &opts).unwrap();
        assert!((b.maximizers[0] - 0.91552110642639891).abs() < 1e-7);
    }

    #[test]
    fn skew_at_zero_is_symmetric() {
        let opts = SearchOptions::default();
        let f = make_family(FamilyId::SkewNormal { s: 1.0 }).unwrap();
        let b = optimal_lambda(&f, 0.0, &opts).unwrap();
        assert!(b.symmetric_pair);
        assert!((b.maximizers[0] - 0.1496748799912788).abs() < 1e-7);
        assert!((b.curvature - 1.2030793264382488).abs() < 1e-9);
        assert!((b.maximizers[0] + b.maximizers[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn right_endpoint_has_no_interior_optimum() {
        use crate::distributions::EndpointG;
        let f = make_family(FamilyId::RightEndpoint {
            g: EndpointG::Identity,
        })
        .unwrap();
        match optimal_lambda(&f, 1.0, &SearchOptions::default()) {
            Err(LambdaOptError::NoInteriorMaximizer { .. }) => {}
            other => panic!("expected boundary supremum, got {other:?}"),
        }
    }

    #[test]
    fn gumbel_scale_level_drifts_toward_lambda_tilde_2() {
        let etas = [-200.0, -100.0, 100.0, 200.0];
        let t = gumbel_scale_lambda_limit(1.0, &etas);
        let gap = t.column("gap");
        // gap shrinks like 1/|eta|: at |eta| = 100 it is ~0.0056, at 200 ~0.0028
        for row in &t.rows {
            assert!(row[gap] <= 0.01, "gap {} at eta {}", row[gap], row[0]);
        }
        assert!(t.rows[0][gap] < t.rows[1][gap]); // |−200| tighter than |−100|
        assert!(t.rows[3][gap] < t.rows[2][gap]);
    }

    #[test]
    fn normal_scale_level_drifts_toward_half() {
        let etas = [-200.0, 200.0];
        let t = normal_scale_lambda_limit(1.0, &etas);
        let gap = t.column("gap");
        for row in &t.rows {
            assert!(row[gap] <= 0.01, "gap {} at eta {}", row[gap], row[0]);
        }
        // and the drift is monotone in |eta|
        let wider = normal_scale_lambda_limit(1.0, &[-50.0, 50.0]);
        assert!(wider.rows[0][gap] > t.rows[0][gap]);
        assert!(wider.rows[1][gap] > t.rows[1][gap]);
    }

    #[test]
    fn flattened_family_dips_at_the_median() {
        for id in [
            FamilyId::NormalLoc { s: 1.0 },
            FamilyId::CauchyLoc { s: 1.0 },
            FamilyId::LogisticLoc { s: 1.0 },
        ] {
            let base = make_family(id).unwrap();
            let report = counterexample_check(&base).unwrap();
            assert!(
                report.passed(),
                "{}: dev {:e}, min@half {}, base max@half {}",
                base.name(),
                report.window_identity_max_dev,
                report.gtilde_min_at_half,
                report.base_max_at_half
            );
            assert!(report.window_identity_max_dev <= 1e-10);
            // the window straddles 1/2
            assert!(report.window.lo < 0.5 && report.window.hi > 0.5);
        }
    }

    #[test]
    fn gtilde_optimal_levels_avoid_the_median() {
        let opts = SearchOptions::default();
        let base = make_family(FamilyId::NormalLoc { s: 1.0 }).unwrap();
        let flat = make_gtilde(&base).unwrap();
        let b = optimal_lambda(&flat, 0.0, &opts).unwrap();
        assert!(
            b.symmetric_pair,
            "expected twin maximizers, got {:?}",
            b.maximizers
        );
        for m in &b.maximizers {
            assert!((m - 0.5).abs() > 0.05, "maximizer {m} too close to 1/2");
        }
        // the optimum beats the median level strictly
        let at_half = curvature_at(flat, 0.0, 0.5);
        assert!(b.curvature > at_half * 1.01);
    }
}
