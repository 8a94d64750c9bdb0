//! The convex hull `Omega = conv(G2)`.
//!
//! A linear functional on `G2` is maximized on the torus image
//! `{(2w, w^2) : |w| = 1}`, so the closure of `Omega` is the convex hull of
//! that curve, i.e. the set of first two trigonometric moments `(c1, c2)` of
//! probability measures on the circle, with `c1 = z1 / 2` and `c2 = z2`. By the
//! Caratheodory-Toeplitz theorem such moments are exactly those whose Toeplitz
//! matrix
//!
//! ```text
//! [ 1      c1     c2 ]
//! [ c1*    1      c1 ]
//! [ c2*    c1*    1  ]
//! ```
//!
//! is positive semidefinite; `Omega` itself is where it is positive definite.
//! Membership and the `(1,2)`-gauge are therefore algebraic. The support
//! function is computed independently from the bidisc parametrization and is
//! used to confirm every separating hyperplane.

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::g2::quadratic_roots;
use super::{g2_contains, CertificateTerm, MembershipStatus, MembershipVerdict, Point2C};
use crate::error::{Error, Result};
use crate::search::maximize_on_circle;

const SUPPORT_GRID: usize = 256;
const SUPPORT_REFINE: usize = 60;

/// A hyperplane `<direction, x> = offset` with `Omega` on the side `<= offset`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Separator {
    /// Unit vector in `R^4 = (Re z1, Im z1, Re z2, Im z2)`.
    pub direction: [f64; 4],
    /// Offset implied by the Toeplitz eigenvector.
    pub offset: f64,
    /// Numerically maximized support function in `direction`.
    pub support: f64,
    /// `<direction, z> - support`.
    pub separation: f64,
}

/// Support function of `closure(G2)` (equivalently of `closure(Omega)`) in the
/// unit direction `u`.
///
/// With `a = u0 + i u1`, `b = u2 + i u3` the functional is
/// `Re(conj(a)(x + y) + conj(b) x y)` over the closed bidisc. Maximizing over
/// `x` first gives `|conj(a) + conj(b) y| + Re(conj(a) y)`, a subharmonic
/// function of `y`, so the remaining maximum is taken over `|y| = 1`.
/// The result is nondecreasing in `refine_iters`.
pub fn support_conv_g2(direction: [f64; 4], refine_iters: usize) -> f64 {
    debug_assert!(
        (direction.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-9,
        "support direction must be a unit vector"
    );
    let a = Complex64::new(direction[0], -direction[1]);
    let b = Complex64::new(direction[2], -direction[3]);
    maximize_on_circle(
        |theta| {
            let y = Complex64::from_polar(1.0, theta);
            (a + b * y).norm() + (a * y).re
        },
        SUPPORT_GRID,
        refine_iters,
    )
    .value
}

fn moments(z: &Point2C) -> (Complex64, Complex64) {
    (0.5 * z.z1, z.z2)
}

fn toeplitz_det(c1: Complex64, c2: Complex64) -> f64 {
    1.0 - 2.0 * c1.norm_sqr() - c2.norm_sqr() + 2.0 * (c1.conj() * c1.conj() * c2).re
}

/// Exact membership in the open hull.
pub(crate) fn toeplitz_positive(z: &Point2C) -> bool {
    let (c1, c2) = moments(z);
    c1.norm_sqr() < 1.0 && toeplitz_det(c1, c2) > 0.0
}

fn toeplitz_matrix(z: &Point2C) -> Matrix3<Complex64> {
    let (c1, c2) = moments(z);
    let one = Complex64::new(1.0, 0.0);
    Matrix3::new(
        one,
        c1,
        c2,
        c1.conj(),
        one,
        c1,
        c2.conj(),
        c1.conj(),
        one,
    )
}

/// Closed-form `(1,2)`-Minkowski gauge of `Omega`:
/// `h(z) = sqrt(|z1|^2 / 4 + |z2 - z1^2 / 4|)`.
///
/// The scaled point `(z1 / t, z2 / t^2)` has Toeplitz determinant
/// `(u^2 - |z1|^2 u / 2 - C) / u^2` with `u = t^2` and
/// `C = |z2|^2 - Re(conj(z1)^2 z2) / 2`. The discriminant of that quadratic is
/// `4 |z2 - z1^2 / 4|^2`, and the gauge is the square root of the larger root.
/// At `u = |z1|^2 / 4` the determinant is `<= 0`, so that root also dominates
/// the `|c1| < 1` constraint.
pub fn conv_g2_gauge(z: &Point2C) -> f64 {
    let q = 0.25 * z.z1 * z.z1;
    (q.norm() + (z.z2 - q).norm()).sqrt()
}

/// Decomposes a boundary moment pair `(c1, c2)` (singular positive
/// semidefinite Toeplitz matrix) into at most two atoms `(weight, w)` on the
/// unit circle with `sum weight * w = c1` and `sum weight * w^2 = c2`.
///
/// Atoms are the roots of the kernel polynomial `v0 + v1 x + v2 x^2`. When
/// those roots nearly coincide a single atom `c1 / |c1|` is used instead;
/// whichever candidate reproduces the moments better wins.
pub fn toeplitz_atoms(c1: Complex64, c2: Complex64) -> Vec<(f64, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let rows = [[one, c1, c2], [c1.conj(), one, c1], [c2.conj(), c1.conj(), one]];
    let kernel = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| cross(&rows[i], &rows[j]))
        .max_by(|u, v| norm3(u).total_cmp(&norm3(v)))
        .expect("three candidates");

    let mut candidates: Vec<Vec<(f64, Complex64)>> = Vec::with_capacity(2);
    if c1.norm() > 0.0 {
        candidates.push(vec![(1.0, c1 / c1.norm())]);
    }
    if kernel[2].norm() > 1e-300 {
        let (r1, r2) = quadratic_roots(-kernel[1] / kernel[2], kernel[0] / kernel[2]);
        if r1.norm() > 0.0 && r2.norm() > 0.0 {
            let (w1, w2) = (r1 / r1.norm(), r2 / r2.norm());
            if (w1 - w2).norm() > 0.0 {
                let t = ((c1 - w2) / (w1 - w2)).re.clamp(0.0, 1.0);
                candidates.push(vec![(t, w1), (1.0 - t, w2)]);
            }
        }
    }
    candidates
        .into_iter()
        .min_by(|a, b| moment_residual(a, c1, c2).total_cmp(&moment_residual(b, c1, c2)))
        .unwrap_or_else(|| vec![(1.0, one)])
}

fn moment_residual(atoms: &[(f64, Complex64)], c1: Complex64, c2: Complex64) -> f64 {
    let m1: Complex64 = atoms.iter().map(|&(t, w)| w * t).sum();
    let m2: Complex64 = atoms.iter().map(|&(t, w)| w * w * t).sum();
    (m1 - c1).norm() + (m2 - c2).norm()
}

fn cross(u: &[Complex64; 3], v: &[Complex64; 3]) -> [Complex64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn norm3(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Separating hyperplane from the eigenvector of the smallest Toeplitz
/// eigenvalue. Every moment pair of the hull gives `v* T v >= 0`, which is an
/// affine inequality in `z`.
fn toeplitz_separator(z: &Point2C) -> Option<Separator> {
    let eig = SymmetricEigen::new(toeplitz_matrix(z));
    let (imin, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    let v = eig.eigenvectors.column(imin);
    let (v0, v1, v2) = (v[0], v[1], v[2]);
    let alpha = v0.conj() * v1 + v1.conj() * v2;
    let gamma = v0.conj() * v2;
    let vv = v0.norm_sqr() + v1.norm_sqr() + v2.norm_sqr();
    // v* T v = vv + <g, z>
    let g = [alpha.re, -alpha.im, 2.0 * gamma.re, -2.0 * gamma.im];
    let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    if gn == 0.0 {
        return None;
    }
    let direction = g.map(|x| -x / gn);
    let support = support_conv_g2(direction, SUPPORT_REFINE);
    let x = z.to_real4();
    let dot: f64 = direction.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    Some(Separator { direction, offset: vv / gn, support, separation: dot - support })
}

/// Tri-state membership in `Omega = conv(G2)`.
///
/// The margin is `1 - h(z)` with `h` the closed-form `(1,2)`-gauge. Inside
/// verdicts carry a convex combination of at most two points of `G2`: the
/// point is rescaled to the boundary, split into circle atoms, and the atoms
/// pushed back inside along the `(1,2)`-action. Outside verdicts carry a
/// separating hyperplane confirmed by the support function.
pub fn conv_g2_contains(z: &Point2C, tol: f64) -> Result<MembershipVerdict> {
    z.ensure_finite()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    let h = conv_g2_gauge(z);
    let mut verdict = MembershipVerdict::from_margin(1.0 - h, tol);
    match verdict.status {
        MembershipStatus::Inside => {
            let terms = inside_certificate(z, h);
            let reason = check_certificate(z, &terms, tol);
            if let Some(reason) = reason {
                return Err(Error::CertificateSearchFailed { point: *z, reason });
            }
            verdict.certificate = Some(terms);
        }
        MembershipStatus::Outside => {
            let sep = toeplitz_separator(z).ok_or_else(|| Error::CertificateSearchFailed {
                point: *z,
                reason: "degenerate Toeplitz eigenvector".into(),
            })?;
            if sep.separation <= 0.0 {
                return Err(Error::CertificateSearchFailed {
                    point: *z,
                    reason: format!("support function does not confirm separation ({})", sep.separation),
                });
            }
            if sep.separation <= tol {
                verdict.status = MembershipStatus::Boundary;
            }
            verdict.separator = Some(sep);
        }
        MembershipStatus::Boundary => {}
    }
    Ok(verdict)
}

fn inside_certificate(z: &Point2C, h: f64) -> Vec<CertificateTerm> {
    if h == 0.0 {
        return vec![CertificateTerm { weight: 1.0, point: Point2C::ORIGIN }];
    }
    let c1 = z.z1 / (2.0 * h);
    let c2 = z.z2 / (h * h);
    toeplitz_atoms(c1, c2)
        .into_iter()
        .filter(|&(t, _)| t > 0.0)
        .map(|(t, w)| CertificateTerm {
            weight: t,
            // image of (h w, h w) under the symmetrization map
            point: Point2C::new(2.0 * h * w, h * h * w * w),
        })
        .collect()
}

fn check_certificate(z: &Point2C, terms: &[CertificateTerm], tol: f64) -> Option<String> {
    let wsum: f64 = terms.iter().map(|t| t.weight).sum();
    if (wsum - 1.0).abs() > tol {
        return Some(format!("weights sum to {wsum}"));
    }
    if let Some(bad) = terms.iter().find(|t| !g2_contains(&t.point, tol).is_inside()) {
        return Some(format!("certificate point {:?} not inside G2", bad.point));
    }
    let sum = terms.iter().fold(Point2C::ORIGIN, |acc, t| acc + t.weight * t.point);
    let residual = sum.dist(z);
    if residual > tol {
        return Some(format!("certificate residual {residual:e}"));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    
    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn support_examples() {
        assert!((support_conv_g2([1.0, 0.0, 0.0, 0.0], 40) - 2.0).abs() < 1e-6);
        assert!((support_conv_g2([0.0, 0.0, 1.0, 0.0], 40) - 1.0).abs() < 1e-6);
        assert!((support_conv_g2([-1.0, 0.0, 0.0, 0.0], 40) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn support_dominates_samples() {
        // dense sample of the torus image, where linear functionals peak
        let pts: Vec<Point2C> = (0..200)
            .flat_map(|i| {
                (0..200).map(move |j| {
                    let a = Complex64::from_polar(1.0, 0.0314159 * i as f64);
                    let b = Complex64::from_polar(1.0, 0.0314159 * j as f64);
                    Point2C::new(a + b, a * b)
                })
            })
            .collect();
        let dirs = [
            [0.5, 0.5, 0.5, 0.5],
            [0.6, -0.8, 0.0, 0.0],
            [0.0, 0.28, -0.96, 0.0],
            [-0.2, 0.4, 0.4, -0.8],
        ];
        for u in dirs {
            let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            let u = u.map(|x| x / n);
            let h = support_conv_g2(u, 40);
            let best = pts
                .iter()
                .map(|p| p.to_real4().iter().zip(u.iter()).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(best <= h + 1e-12, "sample beats support: {best} > {h}");
            assert!(h - best < 1e-3);
        }
    }

    #[test]
    fn hull_examples() {
        assert!(conv_g2_contains(&Point2C::ORIGIN, 1e-9).unwrap().is_inside());
        assert!(conv_g2_contains(&Point2C::real(2.1, 0.0), 1e-9).unwrap().is_outside());
        // (1 + i, 0) is the midpoint of (2, 1) and (2i, -1): on the hull boundary
        let v = conv_g2_contains(&Point2C::new(c(1.0, 1.0), c(0.0, 0.0)), 1e-9).unwrap();
        assert_eq!(v.status, MembershipStatus::Boundary);
    }

    #[test]
    fn explicit_two_point_combination_is_inside() {
        let a = Point2C::new(c(0.99 + 0.99, 0.0), c(0.99 * 0.99, 0.0));
        let ai = Point2C::new(c(0.0, 2.0 * 0.99), c(-0.99 * 0.99, 0.0));
        assert!(g2_contains(&a, 1e-9).is_inside() && g2_contains(&ai, 1e-9).is_inside());
        let mid = 0.5 * a + 0.5 * ai;
        assert!((mid.z1 - c(0.99, 0.99)).norm() < 1e-15 && mid.z2.norm() < 1e-15);
        let v = conv_g2_contains(&mid, 1e-9).unwrap();
        assert!(v.is_inside());
        let terms = v.certificate.as_ref().unwrap();
        assert!(!terms.is_empty() && terms.len() <= 5);
        assert!(v.certificate_sum().unwrap().dist(&mid) < 1e-9);
    }

    #[test]
    fn gauge_closed_form_on_axes() {
        assert!((conv_g2_gauge(&Point2C::real(1.0, 0.0)) - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((conv_g2_gauge(&Point2C::real(0.0, 0.25)) - 0.5).abs() < 1e-15);
        assert_eq!(conv_g2_gauge(&Point2C::ORIGIN), 0.0);
        // the curve (2w, w^2) lies on the unit level set
        for k in 0..12 {
            let w = Complex64::from_polar(1.0, 0.5 * k as f64);
            assert!((conv_g2_gauge(&Point2C::new(2.0 * w, w * w)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn atoms_reproduce_moments() {
        let w1 = Complex64::from_polar(1.0, 0.3);
        let w2 = Complex64::from_polar(1.0, 2.1);
        let (c1, c2) = (0.3 * w1 + 0.7 * w2, 0.3 * w1 * w1 + 0.7 * w2 * w2);
        let atoms = toeplitz_atoms(c1, c2);
        assert_eq!(atoms.len(), 2);
        assert!(moment_residual(&atoms, c1, c2) < 1e-12);
        let single = toeplitz_atoms(w1, w1 * w1);
        assert!(moment_residual(&single, w1, w1 * w1) < 1e-12);
    }
}
