//! The `d`-balanced action and the `d`-Minkowski gauge by bisection.

use num_complex::Complex64;

use super::{DegreeVector, DomainSpec, Point2C};
use crate::error::{Error, Result};

/// Upper end of the bisection bracket. Every supported domain lies in
/// `{|z1| < 2, |z2| < 1}`, so inputs with `max(|z1|, |z2|) <= 2` have gauge
/// below this.
pub const T_MAX: f64 = 4.0;

/// `(lambda^d1 z1, lambda^d2 z2)`.
pub fn d_action(z: &Point2C, lambda: Complex64, d: DegreeVector) -> Point2C {
    Point2C::new(lambda.powu(d.d1()) * z.z1, lambda.powu(d.d2()) * z.z2)
}

fn scaled(z: &Point2C, t: f64, d: DegreeVector) -> Point2C {
    Point2C::new(z.z1 / t.powi(d.d1() as i32), z.z2 / t.powi(d.d2() as i32))
}

/// `h_{d,domain}(z) = inf { t > 0 : (z1 / t^d1, z2 / t^d2) in domain }`,
/// computed by bisection on `[0, T_MAX]` to within `tol`.
///
/// Bisection relies on the scaled membership being monotone in `t`, which
/// holds for every `d`-balanced domain; unbalanced combinations are rejected.
pub fn d_minkowski(z: &Point2C, domain: &DomainSpec, d: DegreeVector, tol: f64) -> Result<f64> {
    z.ensure_finite()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    if !domain.is_balanced(d) {
        return Err(Error::Unsupported("balanced for the requested degree vector"));
    }
    if z.is_origin() {
        return Ok(0.0);
    }
    if !domain.contains_open(&scaled(z, T_MAX, d)) {
        return Err(Error::BracketingFailed { t_max: T_MAX });
    }
    let (mut lo, mut hi) = (0.0_f64, T_MAX);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if domain.contains_open(&scaled(z, mid, d)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Membership in the open sublevel set `{ h_{d,domain} < level }`, with a
/// tolerance margin: true iff the gauge is below `level - tol`.
pub fn d_sublevel_contains(
    z: &Point2C,
    domain: &DomainSpec,
    d: DegreeVector,
    level: f64,
    tol: f64,
) -> Result<bool> {
    if !(level > 0.0 && level <= 1.0) {
        return Err(Error::domain(format!("sublevel {level} not in (0, 1]")));
    }
    Ok(d_minkowski(z, domain, d, tol)? < level - tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const D12: DegreeVector = DegreeVector::SYMMETRIZED;

    #[test]
    fn action_examples() {
        let z = Point2C::real(1.0, 1.0);
        assert_eq!(d_action(&z, c(0.0, 0.0), D12), Point2C::ORIGIN);
        assert_eq!(d_action(&z, c(0.0, 1.0), D12), Point2C::new(c(0.0, 1.0), c(-1.0, 0.0)));
    }

    #[test]
    fn polydisc_gauge_examples() {
        let r = 0.4;
        let p = DomainSpec::polydisc(r).unwrap();
        let tol = 1e-9;
        assert_eq!(d_minkowski(&Point2C::ORIGIN, &p, D12, tol).unwrap(), 0.0);
        let h = d_minkowski(&Point2C::real(r / 2.0, 0.0), &p, D12, tol).unwrap();
        assert!((h - 0.5).abs() <= tol);
        let h = d_minkowski(&Point2C::real(0.0, r / 4.0), &p, D12, tol).unwrap();
        assert!((h - 0.5).abs() <= tol);
    }

    #[test]
    fn sublevel_examples() {
        let r = 0.4;
        let p = DomainSpec::polydisc(r).unwrap();
        assert!(d_sublevel_contains(&Point2C::ORIGIN, &p, D12, 0.3, 1e-9).unwrap());
        assert!(d_sublevel_contains(&Point2C::real(r / 2.0, 0.0), &p, D12, 0.6, 1e-9).unwrap());
        assert!(!d_sublevel_contains(&Point2C::real(r / 2.0, 0.0), &p, D12, 0.4, 1e-9).unwrap());
        assert!(d_sublevel_contains(&Point2C::ORIGIN, &p, D12, 1.5, 1e-9).is_err());
        assert!(d_sublevel_contains(&Point2C::ORIGIN, &p, D12, 0.0, 1e-9).is_err());
    }

    #[test]
    fn bracketing_failure_is_reported() {
        let p = DomainSpec::polydisc(0.1).unwrap();
        let err = d_minkowski(&Point2C::real(1.0, 0.0), &p, D12, 1e-9).unwrap_err();
        assert!(matches!(err, Error::BracketingFailed { .. }));
    }

    #[test]
    fn rejects_unbalanced_and_bad_input() {
        let g = DomainSpec::conv_hull_g2();
        let d11 = DegreeVector::new(1, 1).unwrap();
        assert!(d_minkowski(&Point2C::real(0.1, 0.0), &g, d11, 1e-9).is_err());
        assert!(d_minkowski(&Point2C::real(f64::NAN, 0.0), &g, D12, 1e-9).is_err());
        assert!(d_minkowski(&Point2C::real(0.1, 0.0), &g, D12, 0.0).is_err());
    }

    #[test]
    fn bisection_matches_oracles() {
        let z = Point2C::new(c(0.3, -0.7), c(-0.2, 0.15));
        for dom in [
            DomainSpec::symmetrized_bidisc(),
            DomainSpec::conv_hull_g2(),
            DomainSpec::polydisc(0.9).unwrap(),
        ] {
            let h = d_minkowski(&z, &dom, D12, 1e-10).unwrap();
            let o = dom.gauge_oracle(&z, D12).unwrap();
            assert!((h - o).abs() < 1e-9, "{dom:?}: {h} vs {o}");
        }
        let ball = DomainSpec::ball(Point2C::ORIGIN, 0.8).unwrap();
        let d11 = DegreeVector::new(1, 1).unwrap();
        let h = d_minkowski(&z, &ball, d11, 1e-10).unwrap();
        assert!((h - z.norm() / 0.8).abs() < 1e-9);
    }
}
