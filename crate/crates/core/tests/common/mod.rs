//! Helpers shared by the integration suites: closeness assertions,
//! Richardson-extrapolated finite differences, and a roster of family
//! configurations that exercises every constructor.
//!
//! Each test target compiles its own copy, so helpers used by only one
//! suite would warn in the others.
#![allow(dead_code)]

use qldp_core::{make_family, make_gtilde, EndpointG, FamilyId, FamilySpec};

/// Asserts |got − want| ≤ tol · max(1, |want|).
pub fn assert_close(got: f64, want: f64, tol: f64, label: &str) {
    let err = (got - want).abs();
    let bound = tol * want.abs().max(1.0);
    assert!(
        err <= bound,
        "{label}: got {got}, want {want} (error {err:.3e} > {bound:.3e})"
    );
}

/// Second derivative of `f` at `x` by a central second difference at steps
/// h and h/2 combined by Richardson extrapolation (error O(h^4)).
pub fn fd_second<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// One representative configuration per family constructor.
pub fn family_roster() -> Vec<FamilySpec> {
    let mut v = vec![
        make_family(FamilyId::WeibullScale { rho: 0.5 }).unwrap(),
        make_family(FamilyId::WeibullScale { rho: 1.0 }).unwrap(),
        make_family(FamilyId::WeibullScale { rho: 2.3 }).unwrap(),
        make_family(FamilyId::NormalScale { eta: 0.0 }).unwrap(),
        make_family(FamilyId::NormalScale { eta: -0.8 }).unwrap(),
        make_family(FamilyId::CauchyScale { eta: 0.0 }).unwrap(),
        make_family(FamilyId::CauchyScale { eta: 1.0 }).unwrap(),
        make_family(FamilyId::LogisticScale { eta: 0.0 }).unwrap(),
        make_family(FamilyId::LogisticScale {
            eta: 1.0986122886681098,
        })
        .unwrap(),
        make_family(FamilyId::GumbelScale { eta: 0.0 }).unwrap(),
        make_family(FamilyId::GumbelScale { eta: 0.7 }).unwrap(),
        make_family(FamilyId::NormalLoc { s: 1.0 }).unwrap(),
        make_family(FamilyId::CauchyLoc { s: 1.0 }).unwrap(),
        make_family(FamilyId::LogisticLoc { s: 1.3 }).unwrap(),
        make_family(FamilyId::GumbelLoc { s: 0.9 }).unwrap(),
        make_family(FamilyId::SkewNormal { s: 1.0 }).unwrap(),
        make_family(FamilyId::SkewCauchy { s: 1.0 }).unwrap(),
        make_family(FamilyId::SkewLogistic { s: 1.0 }).unwrap(),
        make_family(FamilyId::Pareto).unwrap(),
        make_family(FamilyId::RightEndpoint {
            g: EndpointG::Identity,
        })
        .unwrap(),
        make_family(FamilyId::RightEndpoint {
            g: EndpointG::ExpMinusOne,
        })
        .unwrap(),
        make_family(FamilyId::RightEndpoint {
            g: EndpointG::Power { y: 2.0 },
        })
        .unwrap(),
    ];
    let normal = make_family(FamilyId::NormalLoc { s: 1.0 }).unwrap();
    let logistic = make_family(FamilyId::LogisticLoc { s: 1.0 }).unwrap();
    v.push(make_gtilde(&normal).unwrap());
    v.push(make_gtilde(&logistic).unwrap());
    v
}

/// A θ0 test grid inside the family's parameter domain.
pub fn theta0_grid(f: &FamilySpec) -> Vec<f64> {
    match f.id {
        FamilyId::SkewNormal { .. }
        | FamilyId::SkewCauchy { .. }
        | FamilyId::SkewLogistic { .. } => {
            vec![-0.6, -0.2, 0.0, 0.3, 0.5]
        }
        FamilyId::NormalLoc { .. }
        | FamilyId::CauchyLoc { .. }
        | FamilyId::LogisticLoc { .. }
        | FamilyId::GumbelLoc { .. }
        | FamilyId::GTilde { .. } => vec![-1.2, -0.3, 0.0, 0.7, 1.9],
        FamilyId::Pareto => vec![0.3, 0.45, 0.6, 0.8, 0.95],
        _ => vec![0.5, 0.8, 1.0, 1.7, 2.5],
    }
}

/// Quantile levels kept away from 0, 1 and from the not-allowed level of
/// full-support scale families.
pub fn lambda_grid(f: &FamilySpec) -> Vec<f64> {
    let candidates = [0.15, 0.35, 0.62, 0.88];
    let banned = f.not_allowed_level();
    candidates
        .iter()
        .copied()
        .map(|l| match banned {
            Some(b) if (l - b).abs() < 5e-3 => l + 0.01,
            _ => l,
        })
        .collect()
}
