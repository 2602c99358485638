//! One-dimensional search primitives: golden-section maximization, bisection
//! and a safeguarded Newton that never leaves its bracket.

use std::fmt;

/// Errors from the root finders.
#[derive(Debug, Clone, PartialEq)]
pub enum RootError {
    /// The supplied endpoints do not bracket a sign change.
    NoSignChange { a: f64, b: f64, fa: f64, fb: f64 },
    /// The iteration budget ran out before reaching the tolerance.
    NoConvergence { last: f64 },
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::NoSignChange { a, b, fa, fb } => write!(
                f,
                "no sign change on [{a}, {b}]: f(a) = {fa:e}, f(b) = {fb:e}"
            ),
            RootError::NoConvergence { last } => {
                write!(f, "root iteration failed to converge (last iterate {last})")
            }
        }
    }
}

impl std::error::Error for RootError {}

const INV_GOLDEN: f64 = 0.61803398874989484820;

/// Maximizes a unimodal function on [a, b] by golden-section search.
///
/// Returns the abscissa and value of the maximum.  The bracket shrinks until
/// its width is below `tol`, so the abscissa carries an O(tol) error and the
/// value an O(tol^2) error near a smooth interior peak.  Value-only search
/// cannot place the abscissa better than about sqrt(eps) times the problem
/// scale, because the function is flat to machine precision across that
/// neighborhood; tolerances below that floor only buy accuracy in the value.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    assert!(a < b, "golden_section_max: empty bracket [{a}, {b}]");
    let mut lo = a;
    let mut hi = b;
    let mut x1 = hi - INV_GOLDEN * (hi - lo);
    let mut x2 = lo + INV_GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    let xm = 0.5 * (lo + hi);
    let fm = f(xm);
    if f1 >= f2 && f1 >= fm {
        (x1, f1)
    } else if f2 >= fm {
        (x2, f2)
    } else {
        (xm, fm)
    }
}

/// Finds a root of f on [a, b] by plain bisection.  Requires a sign change.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64, RootError> {
    let mut lo = a;
    let mut hi = b;
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(RootError::NoSignChange {
            a,
            b,
            fa: flo,
            fb: fhi,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton iteration safeguarded by a bisection bracket.
///
/// Keeps the invariant that the root stays inside [lo, hi]; any Newton step
/// that would escape the bracket, or that follows a vanishing derivative,
/// degrades to a bisection step.  Converges to ~tol in the abscissa.
pub fn newton_bisect<F, G>(mut f: F, mut df: G, a: f64, b: f64, tol: f64) -> Result<f64, RootError>
where
    F: FnMut(f64) -> f64,
    G: FnMut(f64) -> f64,
{
    let mut lo = a;
    let mut hi = b;
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(RootError::NoSignChange {
            a,
            b,
            fa: flo,
            fb: fhi,
        });
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let d = df(x);
        let newton = x - fx / d;
        x = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(RootError::NoConvergence { last: x })
}
