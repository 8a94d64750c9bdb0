//! Points of `C^2`, domain descriptors and membership.

mod g2;
mod gauge;
mod hull;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use g2::{g2_contains, quadratic_roots, sample_g2};
pub use gauge::{d_action, d_minkowski, d_sublevel_contains, T_MAX};
pub use hull::{conv_g2_contains, conv_g2_gauge, support_conv_g2, toeplitz_atoms, Separator};

/// Default tolerance for gauge computations.
pub const GAUGE_TOL: f64 = 1e-9;
/// Default tolerance for support-function comparisons.
pub const SUPPORT_TOL: f64 = 1e-6;

/// A point `(z1, z2)` of `C^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point2C {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Point2C {
    pub const ORIGIN: Point2C = Point2C {
        z1: Complex64::new(0.0, 0.0),
        z2: Complex64::new(0.0, 0.0),
    };

    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    /// Point with real coordinates.
    pub fn real(x1: f64, x2: f64) -> Self {
        Self::new(Complex64::new(x1, 0.0), Complex64::new(x2, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.z1.is_finite() && self.z2.is_finite()
    }

    pub fn is_origin(&self) -> bool {
        self.z1 == Complex64::new(0.0, 0.0) && self.z2 == Complex64::new(0.0, 0.0)
    }

    /// `(Re z1, Im z1, Re z2, Im z2)`.
    pub fn to_real4(&self) -> [f64; 4] {
        [self.z1.re, self.z1.im, self.z2.re, self.z2.im]
    }

    pub fn from_real4(v: [f64; 4]) -> Self {
        Self::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]))
    }

    /// Euclidean distance in `C^2 = R^4`.
    pub fn dist(&self, other: &Point2C) -> f64 {
        ((self.z1 - other.z1).norm_sqr() + (self.z2 - other.z2).norm_sqr()).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.dist(&Point2C::ORIGIN)
    }

    pub(crate) fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!("non-finite point {self:?}")))
        }
    }
}

impl std::ops::Add for Point2C {
    type Output = Point2C;
    fn add(self, rhs: Point2C) -> Point2C {
        Point2C::new(self.z1 + rhs.z1, self.z2 + rhs.z2)
    }
}

impl std::ops::Mul<Point2C> for f64 {
    type Output = Point2C;
    fn mul(self, rhs: Point2C) -> Point2C {
        Point2C::new(rhs.z1 * self, rhs.z2 * self)
    }
}

/// Weights `d = (d1, d2)` of the action `(lambda^d1 z1, lambda^d2 z2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeVector {
    d1: u32,
    d2: u32,
}

impl DegreeVector {
    /// The weights `(1, 2)` under which `G2` and its hull are balanced.
    pub const SYMMETRIZED: DegreeVector = DegreeVector { d1: 1, d2: 2 };

    pub fn new(d1: u32, d2: u32) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::domain(format!("degree vector ({d1}, {d2}) must be positive")));
        }
        Ok(Self { d1, d2 })
    }

    pub fn d1(&self) -> u32 {
        self.d1
    }

    pub fn d2(&self) -> u32 {
        self.d2
    }

    /// `L = max(d1, d2)`.
    pub fn max_degree(&self) -> u32 {
        self.d1.max(self.d2)
    }
}

impl Default for DegreeVector {
    fn default() -> Self {
        Self::SYMMETRIZED
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    SymmetrizedBidisc,
    ConvHullG2,
    /// The polydisc `D^2(0, radius)`.
    Polydisc { radius: f64 },
    /// The Euclidean ball `B^2(center, radius)`.
    Ball { center: Point2C, radius: f64 },
}

/// A supported domain together with the tolerance band used by its
/// membership verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub tol: f64,
}

impl DomainSpec {
    pub fn symmetrized_bidisc() -> Self {
        Self { kind: DomainKind::SymmetrizedBidisc, tol: GAUGE_TOL }
    }

    pub fn conv_hull_g2() -> Self {
        Self { kind: DomainKind::ConvHullG2, tol: GAUGE_TOL }
    }

    /// Polydisc of radius `r in (0, 1)`.
    pub fn polydisc(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::domain(format!("polydisc radius {radius} not in (0, 1)")));
        }
        Ok(Self { kind: DomainKind::Polydisc { radius }, tol: GAUGE_TOL })
    }

    pub fn ball(center: Point2C, radius: f64) -> Result<Self> {
        center.ensure_finite()?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::domain(format!("ball radius {radius} must be positive")));
        }
        Ok(Self { kind: DomainKind::Ball { center, radius }, tol: GAUGE_TOL })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Whether the domain is invariant under the `d`-action for `|lambda| <= 1`.
    pub fn is_balanced(&self, d: DegreeVector) -> bool {
        match self.kind {
            DomainKind::SymmetrizedBidisc | DomainKind::ConvHullG2 => d.d2 == 2 * d.d1,
            DomainKind::Polydisc { .. } => true,
            DomainKind::Ball { center, .. } => center.is_origin() && d.d1 == d.d2,
        }
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self.kind, DomainKind::SymmetrizedBidisc)
    }

    /// Exact membership in the open domain, without a tolerance band.
    pub fn contains_open(&self, z: &Point2C) -> bool {
        match self.kind {
            DomainKind::SymmetrizedBidisc => g2::max_root_modulus(z.z1, z.z2) < 1.0,
            DomainKind::ConvHullG2 => hull::toeplitz_positive(z),
            DomainKind::Polydisc { radius } => z.z1.norm() < radius && z.z2.norm() < radius,
            DomainKind::Ball { center, radius } => z.dist(&center) < radius,
        }
    }

    /// Tri-state membership verdict at the spec's tolerance.
    pub fn membership(&self, z: &Point2C) -> Result<MembershipVerdict> {
        match self.kind {
            DomainKind::SymmetrizedBidisc => Ok(g2_contains(z, self.tol)),
            DomainKind::ConvHullG2 => conv_g2_contains(z, self.tol),
            DomainKind::Polydisc { radius } => {
                let margin = 1.0 - z.z1.norm().max(z.z2.norm()) / radius;
                Ok(MembershipVerdict::from_margin(margin, self.tol))
            }
            DomainKind::Ball { center, radius } => {
                let margin = 1.0 - z.dist(&center) / radius;
                Ok(MembershipVerdict::from_margin(margin, self.tol))
            }
        }
    }

    /// Closed-form `d`-Minkowski gauge where one is known.
    pub fn gauge_oracle(&self, z: &Point2C, d: DegreeVector) -> Option<f64> {
        if !self.is_balanced(d) {
            return None;
        }
        match self.kind {
            DomainKind::SymmetrizedBidisc => {
                Some(g2::max_root_modulus(z.z1, z.z2).powf(1.0 / d.d1 as f64))
            }
            DomainKind::ConvHullG2 => Some(conv_g2_gauge(z).powf(1.0 / d.d1 as f64)),
            DomainKind::Polydisc { radius } => {
                let a = (z.z1.norm() / radius).powf(1.0 / d.d1 as f64);
                let b = (z.z2.norm() / radius).powf(1.0 / d.d2 as f64);
                Some(a.max(b))
            }
            DomainKind::Ball { radius, .. } => Some((z.norm() / radius).powf(1.0 / d.d1 as f64)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipStatus {
    Inside,
    Outside,
    Boundary,
}

/// A convex-combination term of an Inside certificate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub weight: f64,
    pub point: Point2C,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    /// Signed proxy for the distance to the boundary: positive inside.
    pub margin: f64,
    /// Points of `G2` whose convex combination reproduces the queried point.
    pub certificate: Option<Vec<CertificateTerm>>,
    /// Hyperplane separating the queried point from the domain.
    pub separator: Option<Separator>,
}

impl MembershipVerdict {
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        let status = if margin > tol {
            MembershipStatus::Inside
        } else if margin < -tol {
            MembershipStatus::Outside
        } else {
            MembershipStatus::Boundary
        };
        Self { status, margin, certificate: None, separator: None }
    }

    pub fn is_inside(&self) -> bool {
        self.status == MembershipStatus::Inside
    }

    pub fn is_outside(&self) -> bool {
        self.status == MembershipStatus::Outside
    }

    /// Weighted sum of the certificate points.
    pub fn certificate_sum(&self) -> Option<Point2C> {
        self.certificate.as_ref().map(|terms| {
            terms.iter().fold(Point2C::ORIGIN, |acc, t| acc + t.weight * t.point)
        })
    }
}
