//! Adaptive quadrature over finite and infinite intervals.
//!
//! Infinite endpoints are mapped to finite ones with a tangent substitution
//! (x = tan t for the whole line, x = a + tan t for a half line), after which
//! an adaptive Simpson rule drives the error down panel by panel.  The
//! integrators target a relative tolerance; integrands produced by cumulant
//! generating functions are smooth but can be sharply peaked, so the finite
//! core starts from 32 panels before adapting.
//!
//! Exponentially tilted densities need more care than plain ones: the factor
//! e^{gamma x} can overflow while the density underflows, even though their
//! product is a perfectly representable number.  [`log_integrate_exp`] takes
//! the integrand in log form, shifts it by its maximum, and integrates the
//! shifted exponential, so only the true magnitude of the result matters.

/// Integrates f over (lo, hi); either endpoint may be infinite.
///
/// `rel_tol` is the target relative accuracy (1e-12 is attainable for the
/// smooth densities used in this crate).  Integrand values at non-finite or
/// out-of-range substituted points are treated as zero, which is the correct
/// limit for every integrable density here.  The integrand must itself be
/// evaluable in floating point; when it is a product of huge and tiny factors,
/// use [`log_integrate_exp`] instead.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> f64 {
    assert!(lo < hi, "integrate: empty interval [{lo}, {hi}]");
    let guard = |x: f64, w: f64| {
        if !x.is_finite() || !w.is_finite() {
            return 0.0;
        }
        let v = f(x) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => adaptive(&|x| guard(x, 1.0), lo, hi, rel_tol),
        (true, false) => {
            // x = lo + tan t, dx = sec^2 t dt, t in (0, pi/2)
            adaptive(
                &|t: f64| {
                    let c = t.cos();
                    guard(lo + t.tan(), 1.0 / (c * c))
                },
                0.0,
                std::f64::consts::FRAC_PI_2,
                rel_tol,
            )
        }
        (false, true) => {
            // mirror of the half-line case: u = -x over (-hi, inf)
            adaptive(
                &|t: f64| {
                    let c = t.cos();
                    guard(hi - t.tan(), 1.0 / (c * c))
                },
                0.0,
                std::f64::consts::FRAC_PI_2,
                rel_tol,
            )
        }
        (false, false) => adaptive(
            &|t: f64| {
                let c = t.cos();
                guard(t.tan(), 1.0 / (c * c))
            },
            -std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_2,
            rel_tol,
        ),
    }
}

/// Computes ln of the integral of e^{phi(x)} over (lo, hi) without ever
/// forming e^{phi} at its raw scale; either endpoint may be infinite.
///
/// The exponent is shifted by its maximum over a fine scan of the
/// (tangent-substituted) axis, so the result is accurate even when the
/// integral overflows or underflows f64, as happens for strongly tilted
/// densities.  The scan grid also seeds the initial panels, so a peak much
/// narrower than the integration range is still resolved.  Non-finite
/// exponent values are treated as -inf (zero integrand).
pub fn log_integrate_exp<F: Fn(f64) -> f64>(phi: F, lo: f64, hi: f64, rel_tol: f64) -> f64 {
    assert!(lo < hi, "log_integrate_exp: empty interval [{lo}, {hi}]");
    // Exponent in the substituted variable, log-Jacobian included.
    let shifted: Box<dyn Fn(f64) -> f64>;
    let (t_lo, t_hi) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            shifted = Box::new(move |t: f64| phi(t));
            (lo, hi)
        }
        (true, false) => {
            shifted = Box::new(move |t: f64| {
                let c = t.cos();
                phi(lo + t.tan()) - 2.0 * c.abs().ln()
            });
            (0.0, std::f64::consts::FRAC_PI_2)
        }
        (false, true) => {
            shifted = Box::new(move |t: f64| {
                let c = t.cos();
                phi(hi - t.tan()) - 2.0 * c.abs().ln()
            });
            (0.0, std::f64::consts::FRAC_PI_2)
        }
        (false, false) => {
            shifted = Box::new(move |t: f64| {
                let c = t.cos();
                phi(t.tan()) - 2.0 * c.abs().ln()
            });
            (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2)
        }
    };
    const SCAN_PANELS: usize = 512;
    let step = (t_hi - t_lo) / SCAN_PANELS as f64;
    let mut peak = f64::NEG_INFINITY;
    let mut peak_at = t_lo;
    for j in 0..=SCAN_PANELS {
        let t = if j == SCAN_PANELS {
            t_hi
        } else {
            t_lo + j as f64 * step
        };
        let v = shifted(t);
        if v.is_finite() && v > peak {
            peak = v;
            peak_at = t;
        }
    }
    if peak == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    // Polish the maximum between scan points: a peak narrower than the grid
    // can top the scanned value by many log units, and the shift must be
    // close to the true supremum for the shifted integrand to stay O(1).
    let guarded = |t: f64| {
        let v = shifted(t);
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    };
    let (_, polished) = crate::search::golden_section_max(
        guarded,
        (peak_at - step).max(t_lo),
        (peak_at + step).min(t_hi),
        1e-10 * step,
    );
    if polished.is_finite() && polished > peak {
        peak = polished;
    }
    // exp(phi - peak) carries relative noise of about |peak| * eps, so a
    // tolerance below that level would never be met.
    let eff_rel = rel_tol.max(256.0 * f64::EPSILON * peak.abs().max(1.0));
    let g = move |t: f64| {
        let v = shifted(t) - peak;
        if v.is_finite() {
            v.exp()
        } else {
            0.0
        }
    };
    let total = adaptive_on_panels(&g, t_lo, t_hi, SCAN_PANELS, eff_rel);
    peak + total.ln()
}

/// Adaptive Simpson on a finite interval with a fixed initial partition.
fn adaptive(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, rel_tol: f64) -> f64 {
    adaptive_on_panels(f, lo, hi, 32, rel_tol)
}

/// Adaptive Simpson starting from `n` uniform panels.  The rough pass over
/// the initial partition sets the absolute tolerance scale.
fn adaptive_on_panels(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize, rel_tol: f64) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut rough = 0.0;
    let mut panels = Vec::with_capacity(n);
    for i in 0..n {
        let a = lo + i as f64 * h;
        let b = if i + 1 == n { hi } else { a + h };
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        let s = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rough += s;
        panels.push((a, b, fa, fm, fb, s));
    }
    let abs_tol = (rough.abs() * rel_tol).max(1e-300);
    let mut total = 0.0;
    for (a, b, fa, fm, fb, s) in panels {
        total += simpson_step(f, a, b, fa, fm, fb, s, abs_tol / n as f64, 30);
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // The second disjunct is a roundoff floor: once the panel disagreement is
    // at the level of summation noise, further splitting cannot reduce it.
    if depth == 0
        || delta.abs() <= 15.0 * tol
        || delta.abs() <= 30.0 * f64::EPSILON * (left.abs() + right.abs() + whole.abs())
    {
        // Richardson extrapolation of the halved step.
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::SQRT_2PI;

    fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
        let rel = (got - want).abs() / want.abs().max(1e-300);
        assert!(
            rel <= tol,
            "{what}: got {got:e}, want {want:e}, rel {rel:e}"
        );
    }

    #[test]
    fn polynomial_on_finite_interval() {
        let v = integrate(|x| x * x, 0.0, 3.0, 1e-13);
        assert_rel(v, 9.0, 1e-13, "x^2 on [0,3]");
    }

    #[test]
    fn gaussian_over_whole_line() {
        let v = integrate(
            |x| (-0.5 * x * x).exp() / SQRT_2PI,
            f64::NEG_INFINITY,
            f64::INFINITY,
            1e-12,
        );
        assert_rel(v, 1.0, 1e-11, "normal density mass");
    }

    #[test]
    fn exponential_moments_on_half_line() {
        let mass = integrate(|x| (-x).exp(), 0.0, f64::INFINITY, 1e-12);
        assert_rel(mass, 1.0, 1e-11, "exp mass");
        let mean = integrate(|x| x * (-x).exp(), 0.0, f64::INFINITY, 1e-12);
        assert_rel(mean, 1.0, 1e-10, "exp mean");
        let second = integrate(|x| x * x * (-x).exp(), 0.0, f64::INFINITY, 1e-12);
        assert_rel(second, 2.0, 1e-10, "exp second moment");
    }

    #[test]
    fn left_half_line() {
        let v = integrate(|x| x.exp(), f64::NEG_INFINITY, 0.0, 1e-12);
        assert_rel(v, 1.0, 1e-11, "exp(x) on (-inf,0)");
    }

    #[test]
    fn moderately_tilted_density() {
        // e^(gamma x) * exp(-x) on (0, inf) with gamma = 0.5: mass 1/(1-gamma) = 2.
        let v = integrate(|x| (0.5 * x).exp() * (-x).exp(), 0.0, f64::INFINITY, 1e-12);
        assert_rel(v, 2.0, 1e-11, "tilted exponential");
    }

    #[test]
    fn log_space_handles_a_tilt_whose_factors_overflow() {
        // With gamma = 0.99 the factor e^(0.99 x) overflows f64 long before the
        // product e^(-0.01 x) stops carrying mass; the log form has no factors.
        let v = log_integrate_exp(|x| -0.01 * x, 0.0, f64::INFINITY, 1e-12);
        assert_rel(v, 100.0f64.ln(), 1e-11, "ln mass of a strong tilt");
    }

    #[test]
    fn log_space_handles_a_narrow_peak_with_huge_magnitude() {
        // ln of the integral of e^(100x - x^2) over (0, inf): the peak at x = 50
        // has height e^2500 and width ~1, far outside f64 range and much
        // narrower than the substituted axis.
        let v = log_integrate_exp(|x| 100.0 * x - x * x, 0.0, f64::INFINITY, 1e-12);
        let want = 2500.0 + 0.5 * std::f64::consts::PI.ln();
        assert_rel(v, want, 1e-12, "ln of a Gaussian spike");
    }

    #[test]
    fn log_space_matches_linear_space_on_a_plain_density() {
        let lin = integrate(
            |x| (-0.5 * x * x).exp() / SQRT_2PI,
            f64::NEG_INFINITY,
            f64::INFINITY,
            1e-12,
        );
        let log = log_integrate_exp(
            |x| -0.5 * x * x - SQRT_2PI.ln(),
            f64::NEG_INFINITY,
            f64::INFINITY,
            1e-12,
        );
        assert_rel(log.exp(), lin, 1e-11, "whole-line normal mass");
    }

    #[test]
    fn cauchy_mass() {
        let v = integrate(
            |x| 1.0 / (std::f64::consts::PI * (1.0 + x * x)),
            f64::NEG_INFINITY,
            f64::INFINITY,
            1e-12,
        );
        assert_rel(v, 1.0, 1e-10, "cauchy mass");
    }
}
