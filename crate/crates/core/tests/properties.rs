//! Randomized properties of gauges, membership and the slice bounds.

use std::f64::consts::TAU;

use proptest::prelude::*;
use squeeze_lab::domain::{
    conv_g2_contains, conv_g2_gauge, d_action, d_minkowski, g2_contains, DegreeVector, DomainSpec, MembershipStatus,
    Point2C,
};
use squeeze_lab::metrics::{c_g2, CircleGrid};
use squeeze_lab::squeeze::{beta_threshold, sq_upper_closed_form, CounterexampleConfig};
use squeeze_lab::Complex64;

const D: DegreeVector = DegreeVector::SYMMETRIZED;

fn complex(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..TAU).prop_map(|(m, a)| Complex64::from_polar(m, a))
}

fn point(m1: f64, m2: f64) -> impl Strategy<Value = Point2C> {
    (complex(m1), complex(m2)).prop_map(|(a, b)| Point2C::new(a, b))
}

fn bidisc_image(max: f64) -> impl Strategy<Value = Point2C> {
    (complex(max), complex(max)).prop_map(|(a, b)| Point2C::new(a + b, a * b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hull_gauge_is_homogeneous(z in point(2.0, 1.0), lambda in complex(1.5)) {
        let h = conv_g2_gauge(&z);
        let scaled = conv_g2_gauge(&d_action(&z, lambda, D));
        prop_assert!((scaled - lambda.norm() * h).abs() <= 1e-12 * (1.0 + h));
    }

    #[test]
    fn bisection_agrees_with_closed_forms(z in point(2.0, 1.0), r in 0.1f64..0.9) {
        let hull = d_minkowski(&z, &DomainSpec::conv_hull_g2(), D, 1e-10).unwrap();
        prop_assert!((hull - conv_g2_gauge(&z)).abs() <= 1e-9);
        let poly = DomainSpec::polydisc(r).unwrap();
        let w = Point2C::new(z.z1 * r, z.z2 * r);
        let exact = (w.z1.norm() / r).max((w.z2.norm() / r).sqrt());
        prop_assert!((d_minkowski(&w, &poly, D, 1e-10).unwrap() - exact).abs() <= 1e-9);
    }

    #[test]
    fn hull_verdicts_are_sound(z in point(2.2, 1.1)) {
        let v = conv_g2_contains(&z, 1e-9).unwrap();
        match v.status {
            MembershipStatus::Inside => {
                let terms = v.certificate.as_ref().unwrap();
                prop_assert!(terms.iter().all(|t| g2_contains(&t.point, 1e-9).status != MembershipStatus::Outside));
                prop_assert!(v.certificate_sum().unwrap().dist(&z) <= 1e-9);
            }
            MembershipStatus::Outside => {
                prop_assert!(v.separator.unwrap().separation > 0.0);
                prop_assert!(g2_contains(&z, 1e-9).status == MembershipStatus::Outside);
            }
            MembershipStatus::Boundary => prop_assert!(v.margin.abs() <= 1e-9),
        }
    }

    #[test]
    fn images_of_the_bidisc_lie_in_g2(z in bidisc_image(0.999)) {
        prop_assert_eq!(g2_contains(&z, 1e-12).status, MembershipStatus::Inside);
        prop_assert!(conv_g2_contains(&z, 1e-12).unwrap().is_inside());
    }

    #[test]
    fn distance_is_rotation_invariant(z in bidisc_image(0.9), w in bidisc_image(0.9), angle in 0.0..TAU) {
        // (z1, z2) -> (e^{it} z1, e^{2it} z2) is an automorphism of G2
        let rot = Complex64::from_polar(1.0, angle);
        let grid = CircleGrid::new(1024, 40).unwrap();
        let a = c_g2(&z, &w, grid).unwrap().rho;
        let b = c_g2(&d_action(&z, rot, D), &d_action(&w, rot, D), grid).unwrap().rho;
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn closed_form_decreases_in_modulus(a in 0.001f64..0.399, b in 0.001f64..0.399, angle in 0.0..TAU) {
        prop_assume!((a - b).abs() > 1e-9);
        let cfg = CounterexampleConfig::default();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let f = |m: f64| sq_upper_closed_form(Complex64::from_polar(m, angle), &cfg).unwrap().upper;
        prop_assert!(f(hi) < f(lo));
    }

    #[test]
    fn closed_form_crosses_half_r_at_beta(r in 0.05f64..0.49, t in 0.01f64..0.99) {
        let eps = r / 4.0;
        let cfg = CounterexampleConfig::new(r, eps).unwrap();
        let beta = beta_threshold(r);
        let below = sq_upper_closed_form(Complex64::new(beta * t, 0.0), &cfg).unwrap().upper;
        let above = sq_upper_closed_form(Complex64::new(beta + (r - beta) * t, 0.0), &cfg).unwrap().upper;
        prop_assert!(below > r / 2.0);
        prop_assert!(above < r / 2.0);
    }
}
