//! The symmetrized bidisc `G2 = {(a + b, ab) : a, b in D}`.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{MembershipVerdict, Point2C};

/// Roots of `t^2 - s t + p`, i.e. a preimage of `(s, p)` under the
/// symmetrization map. The larger-modulus root is taken first and the other
/// recovered as `p / t1`, which avoids cancellation. Roots are ordered
/// lexicographically by real then imaginary part.
pub fn quadratic_roots(s: Complex64, p: Complex64) -> (Complex64, Complex64) {
    let disc = (s * s - 4.0 * p).sqrt();
    // pick the sign that makes |s + disc| as large as possible
    let disc = if (s.conj() * disc).re >= 0.0 { disc } else { -disc };
    let t1 = 0.5 * (s + disc);
    let t2 = if t1.norm_sqr() == 0.0 { Complex64::new(0.0, 0.0) } else { p / t1 };
    match cmp_lex(&t1, &t2) {
        Ordering::Greater => (t2, t1),
        _ => (t1, t2),
    }
}

fn cmp_lex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub(crate) fn max_root_modulus(s: Complex64, p: Complex64) -> f64 {
    let (a, b) = quadratic_roots(s, p);
    a.norm().max(b.norm())
}

/// Membership in `G2`: Inside iff both roots of `t^2 - z1 t + z2` have
/// modulus below `1 - tol`. The margin is `1 - max |root|`.
pub fn g2_contains(z: &Point2C, tol: f64) -> MembershipVerdict {
    if !z.is_finite() {
        return MembershipVerdict::from_margin(f64::NEG_INFINITY, tol);
    }
    MembershipVerdict::from_margin(1.0 - max_root_modulus(z.z1, z.z2), tol)
}

/// Image of an `n x n x n x n` polar grid of the bidisc under the
/// symmetrization map. Radii are `k / n` for `k < n`, so the origin is
/// included and every point lands strictly inside `G2`.
pub fn sample_g2(n: usize) -> Vec<Point2C> {
    assert!(n >= 2, "sample_g2 needs n >= 2");
    let disc: Vec<Complex64> = (0..n)
        .flat_map(|i| {
            let rho = i as f64 / n as f64;
            (0..n).map(move |j| Complex64::from_polar(rho, TAU * j as f64 / n as f64))
        })
        .collect();
    let mut out = Vec::with_capacity(disc.len() * disc.len());
    for a in &disc {
        for b in &disc {
            out.push(Point2C::new(a + b, a * b));
        }
    }
    out
}
