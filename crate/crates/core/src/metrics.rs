//! Invariant distances: the Poincare distance on the disc, the extremal family
//! `phi_tau` of `G2`, the Caratheodory distance on `G2` and distances to a
//! sampled compact set.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{d_minkowski, g2_contains, DegreeVector, DomainSpec, Point2C};
use crate::error::{Error, Result};
use crate::search::{grid_angle, refine_golden, AngleMax};

/// Membership tolerance for points handed to the `G2` distance.
const G2_TOL: f64 = 1e-12;
/// Number of grid directions used to lower-bound a distance before the full
/// circle maximization.
const PROBES: usize = 8;

/// Pseudo-hyperbolic distance `|a - b| / |1 - conj(a) b|` on the unit disc.
pub fn mobius(a: Complex64, b: Complex64) -> Result<f64> {
    if !(a.norm() < 1.0 && b.norm() < 1.0) {
        return Err(Error::domain(format!("mobius arguments {a}, {b} not in the unit disc")));
    }
    Ok(mobius_unchecked(a, b))
}

#[inline]
fn mobius_unchecked(a: Complex64, b: Complex64) -> f64 {
    if a == b {
        return 0.0;
    }
    // ratio of norms keeps the value bit-identical under swapping a and b
    (a - b).norm() / (1.0 - a.conj() * b).norm()
}

/// Poincare distance `atanh(mobius(a, b))`.
pub fn poincare(a: Complex64, b: Complex64) -> Result<f64> {
    Ok(mobius(a, b)?.atanh())
}

/// The extremal map `phi_tau(s, p) = (2 tau p - s) / (2 - tau s)` of `G2`.
///
/// The denominator uses the first coordinate. With the second coordinate in
/// the denominator the map leaves the disc, e.g. at `(1.5, 0.56)`, `tau = -1`.
pub fn extremal_phi(z: &Point2C, tau: Complex64) -> Result<Complex64> {
    let den = 2.0 - tau * z.z1;
    if den.norm() < 1e-12 {
        return Err(Error::domain(format!("phi_tau denominator vanishes at {z:?}")));
    }
    Ok((2.0 * tau * z.z2 - z.z1) / den)
}

#[inline]
fn phi_unchecked(z: &Point2C, tau: Complex64) -> Complex64 {
    (2.0 * tau * z.z2 - z.z1) / (2.0 - tau * z.z1)
}

#[inline]
fn grid_tau(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, grid_angle(k, n))
}

/// Discretization of the circle `|tau| = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleGrid {
    n: usize,
    refine_iters: usize,
}

impl CircleGrid {
    pub fn new(n: usize, refine_iters: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::domain(format!("circle grid needs at least 16 points, got {n}")));
        }
        Ok(Self { n, refine_iters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn refine_iters(&self) -> usize {
        self.refine_iters
    }

    pub fn doubled(&self) -> Self {
        Self { n: 2 * self.n, refine_iters: self.refine_iters }
    }
}

impl Default for CircleGrid {
    fn default() -> Self {
        Self { n: 512, refine_iters: 40 }
    }
}

/// A distance in tanh scale together with its Poincare-scale value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceValue {
    pub rho: f64,
    pub dist: f64,
    pub argmax_tau: Complex64,
}

impl DistanceValue {
    fn new(rho: f64, theta: f64) -> Self {
        Self { rho, dist: rho.atanh(), argmax_tau: Complex64::from_polar(1.0, theta) }
    }
}

fn require_in_g2(z: &Point2C) -> Result<()> {
    z.ensure_finite()?;
    if g2_contains(z, G2_TOL).is_inside() {
        Ok(())
    } else {
        Err(Error::domain(format!("{z:?} is not inside G2")))
    }
}

fn phi_table(z: &Point2C, n: usize) -> Vec<Complex64> {
    (0..n).map(|k| phi_unchecked(z, grid_tau(k, n))).collect()
}

/// Circle maximization with `phi_tau(z)` already tabulated on the grid.
fn c_g2_tabulated(z: &Point2C, phi_z: &[Complex64], w: &Point2C, grid: CircleGrid) -> DistanceValue {
    if z == w {
        return DistanceValue::new(0.0, 0.0);
    }
    let n = grid.n;
    let mut best = AngleMax { theta: 0.0, value: f64::NEG_INFINITY };
    for (k, &pz) in phi_z.iter().enumerate() {
        let v = mobius_unchecked(pz, phi_unchecked(w, grid_tau(k, n)));
        if v > best.value {
            best = AngleMax { theta: grid_angle(k, n), value: v };
        }
    }
    let f = |theta: f64| {
        let tau = Complex64::from_polar(1.0, theta);
        mobius_unchecked(phi_unchecked(z, tau), phi_unchecked(w, tau))
    };
    let h = std::f64::consts::TAU / n as f64;
    refine_golden(&f, best.theta - h, best.theta + h, grid.refine_iters, &mut best);
    DistanceValue::new(best.value, best.theta)
}

/// Caratheodory distance of `G2` in tanh scale: the maximum over `|tau| = 1`
/// of `mobius(phi_tau(z), phi_tau(w))`, taken on the grid and refined by
/// golden-section search. Since every grid value is a lower bound, the result
/// approaches the true distance from below.
pub fn c_g2(z: &Point2C, w: &Point2C, grid: CircleGrid) -> Result<DistanceValue> {
    require_in_g2(z)?;
    require_in_g2(w)?;
    Ok(c_g2_tabulated(z, &phi_table(z, grid.n), w, grid))
}

/// Minimum of the `G2` distance from a query point to a fixed finite set.
///
/// Each candidate is first bounded below by [`PROBES`] grid directions; the
/// full maximization only runs when that bound can still beat the running
/// minimum. Probe directions are grid points, so the pruning never changes
/// the result.
pub struct CompactEvaluator<'a> {
    points: &'a [Point2C],
    grid: CircleGrid,
    probe_k: [usize; PROBES],
    probe_phi: Vec<[Complex64; PROBES]>,
}

impl<'a> CompactEvaluator<'a> {
    pub fn new(points: &'a [Point2C], grid: CircleGrid) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCompactSet);
        }
        for w in points {
            require_in_g2(w)?;
        }
        let n = grid.n;
        let probe_k: [usize; PROBES] = std::array::from_fn(|m| m * n / PROBES);
        let probe_phi = points
            .iter()
            .map(|w| probe_k.map(|k| phi_unchecked(w, grid_tau(k, n))))
            .collect();
        Ok(Self { points, grid, probe_k, probe_phi })
    }

    /// `(min rho, index of a minimizer)`.
    pub fn nearest(&self, z: &Point2C) -> Result<(f64, usize)> {
        require_in_g2(z)?;
        let phi_z = phi_table(z, self.grid.n);
        let seed = self
            .points
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.dist(z).total_cmp(&b.1.dist(z)))
            .map(|(i, _)| i)
            .expect("nonempty");
        let mut best = (c_g2_tabulated(z, &phi_z, &self.points[seed], self.grid).rho, seed);
        let probe_z = self.probe_k.map(|k| phi_z[k]);
        for (i, w) in self.points.iter().enumerate() {
            let lower = probe_z
                .iter()
                .zip(self.probe_phi[i].iter())
                .map(|(&a, &b)| mobius_unchecked(a, b))
                .fold(0.0, f64::max);
            if lower >= best.0 {
                continue;
            }
            let rho = c_g2_tabulated(z, &phi_z, w, self.grid).rho;
            if rho < best.0 {
                best = (rho, i);
            }
        }
        Ok(best)
    }

    pub fn distance(&self, z: &Point2C) -> Result<f64> {
        Ok(self.nearest(z)?.0)
    }
}

/// `min_{w in K} tanh c_G2(z, w)` over a sampled compact set. Since
/// `G2 ⊆ conv(G2)` and Caratheodory distances shrink under inclusion, this
/// bounds the corresponding hull quantity from above (up to sampling of `K`).
pub fn dist_to_compact(z: &Point2C, points: &[Point2C], grid: CircleGrid) -> Result<f64> {
    CompactEvaluator::new(points, grid)?.distance(z)
}

/// Bounds `(atanh(h^L), atanh(h))` on the Caratheodory distance from the
/// origin, where `h` is the `d`-Minkowski gauge and `L = max(d1, d2)`.
/// Requires a bounded convex `d`-balanced domain.
pub fn c_origin_sandwich(
    z: &Point2C,
    domain: &DomainSpec,
    d: DegreeVector,
    tol: f64,
) -> Result<(f64, f64)> {
    if !domain.is_convex() {
        return Err(Error::Unsupported("convex"));
    }
    let h = d_minkowski(z, domain, d, tol)?;
    if h >= 1.0 {
        return Err(Error::domain(format!("{z:?} is not inside the domain (gauge {h})")));
    }
    let lower = h.powi(d.max_degree() as i32).atanh();
    Ok((lower, h.atanh()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::sample_g2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mobius_examples() {
        let mu = c(0.3, -0.4);
        assert!((mobius(c(0.0, 0.0), mu).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(mobius(mu, mu).unwrap(), 0.0);
        assert!((mobius(c(0.5, 0.0), c(-0.5, 0.0)).unwrap() - 0.8).abs() < 1e-15);
        assert!(mobius(c(1.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(mobius(c(0.0, 0.0), c(0.0, -1.2)).is_err());
    }

    #[test]
    fn poincare_examples() {
        assert_eq!(poincare(c(0.0, 0.0), c(0.0, 0.0)).unwrap(), 0.0);
        assert!((poincare(c(0.0, 0.0), c(0.5, 0.0)).unwrap() - 0.549_306_144_334_054_8).abs() < 1e-12);
    }

    #[test]
    fn phi_examples() {
        for k in 0..8 {
            let tau = Complex64::from_polar(1.0, k as f64);
            assert_eq!(extremal_phi(&Point2C::ORIGIN, tau).unwrap(), c(0.0, 0.0));
        }
        let x = 0.7;
        let v = extremal_phi(&Point2C::real(x, 0.0), c(1.0, 0.0)).unwrap();
        assert!((v - c(-x / (2.0 - x), 0.0)).norm() < 1e-15);
        assert!(extremal_phi(&Point2C::real(2.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn phi_maps_g2_into_disc() {
        let pts = sample_g2(6);
        for k in 0..64 {
            let tau = grid_tau(k, 64);
            for z in &pts {
                assert!(extremal_phi(z, tau).unwrap().norm() < 1.0);
            }
        }
    }

    #[test]
    fn second_coordinate_denominator_leaves_disc() {
        // roots 0.7 and 0.8: well inside G2
        let z = Point2C::real(1.5, 0.56);
        let tau = c(-1.0, 0.0);
        let variant = (2.0 * tau * z.z2 - z.z1) / (2.0 - tau * z.z2);
        assert!(variant.norm() > 1.0);
        assert!(extremal_phi(&z, tau).unwrap().norm() < 1.0);
    }

    #[test]
    fn grid_validation() {
        assert!(CircleGrid::new(15, 0).is_err());
        assert_eq!(CircleGrid::default().n(), 512);
        assert_eq!(CircleGrid::default().doubled().n(), 1024);
    }

    #[test]
    fn c_g2_examples() {
        let grid = CircleGrid::default();
        let z = Point2C::new(c(0.3, 0.1), c(0.02, -0.01));
        assert_eq!(c_g2(&z, &z, grid).unwrap().rho, 0.0);
        for x in [0.1, 0.2, 0.3, 0.9] {
            let v = c_g2(&Point2C::ORIGIN, &Point2C::real(x, 0.0), grid).unwrap();
            assert!((v.rho - x / (2.0 - x)).abs() < 1e-12, "x = {x}: {}", v.rho);
            assert!((v.dist - v.rho.atanh()).abs() < 1e-15);
        }
        let v = c_g2(&Point2C::ORIGIN, &Point2C::real(0.2, 0.0), grid).unwrap();
        assert!((v.rho - 0.111_111_111_111_111).abs() < 1e-12);
        assert!(c_g2(&Point2C::ORIGIN, &Point2C::real(2.0, 1.0), grid).is_err());
    }

    #[test]
    fn c_g2_is_symmetric() {
        let grid = CircleGrid::default();
        let z = Point2C::new(c(0.5, -0.2), c(0.1, 0.3));
        let w = Point2C::new(c(-0.4, 0.6), c(-0.2, 0.05));
        assert_eq!(c_g2(&z, &w, grid).unwrap().rho, c_g2(&w, &z, grid).unwrap().rho);
    }

    #[test]
    fn compact_distance_examples() {
        let grid = CircleGrid::default();
        let z = Point2C::new(c(0.2, 0.1), c(0.05, 0.0));
        assert_eq!(dist_to_compact(&z, &[z], grid).unwrap(), 0.0);
        let ring: Vec<Point2C> = (0..24)
            .map(|k| Point2C::new(Complex64::from_polar(0.4, 0.26 * k as f64), c(0.0, 0.0)))
            .collect();
        let d = dist_to_compact(&Point2C::ORIGIN, &ring, grid).unwrap();
        assert!((d - 0.25).abs() < 1e-12);
        assert!(matches!(dist_to_compact(&z, &[], grid), Err(Error::EmptyCompactSet)));
    }

    #[test]
    fn pruned_minimum_equals_brute_force() {
        let grid = CircleGrid::new(64, 20).unwrap();
        let pts = sample_g2(5);
        let z = Point2C::new(c(0.35, -0.1), c(0.05, 0.02));
        let brute = pts
            .iter()
            .map(|w| c_g2(&z, w, grid).unwrap().rho)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(dist_to_compact(&z, &pts, grid).unwrap(), brute);
    }

    #[test]
    fn sandwich_examples() {
        let r = 0.4;
        let p = DomainSpec::polydisc(r).unwrap();
        let d = DegreeVector::SYMMETRIZED;
        assert_eq!(c_origin_sandwich(&Point2C::ORIGIN, &p, d, 1e-10).unwrap(), (0.0, 0.0));
        let (lo, hi) = c_origin_sandwich(&Point2C::real(0.3, 0.0), &p, d, 1e-10).unwrap();
        let t: f64 = 0.3 / r;
        assert!((hi - t.atanh()).abs() < 1e-9 && (lo - (t * t).atanh()).abs() < 1e-9);
        let (lo, _) = c_origin_sandwich(&Point2C::real(0.0, 0.3), &p, d, 1e-10).unwrap();
        assert!((lo - t.atanh()).abs() < 1e-9);
        let g2 = DomainSpec::symmetrized_bidisc();
        assert!(c_origin_sandwich(&Point2C::ORIGIN, &g2, d, 1e-10).is_err());
    }
}
