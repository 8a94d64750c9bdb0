//! Gauges, invariant metrics and squeezing-function bounds for the symmetrized
//! bidisc `G2` and its convex hull.
//!
//! The crate is organised bottom-up:
//!
//! - [`domain`]: points of `C^2`, domain descriptors, membership tests, the
//!   `d`-balanced scaling action and `d`-Minkowski gauges.
//! - [`metrics`]: Moebius/Poincare distances on the disc, the extremal family
//!   `phi_tau` of `G2`, the Caratheodory distance on `G2` and
//!   distance-to-compact functionals.
//! - [`squeeze`]: the domain `conv(G2) \ K`, bounds on its `(1,2)`-balanced
//!   squeezing function and the maximum-principle violation report.
//! - [`harness`]: configuration, the `verify-paper` pipeline and report output.

pub mod domain;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod search;
pub mod squeeze;

pub use domain::{DegreeVector, DomainKind, DomainSpec, MembershipStatus, MembershipVerdict, Point2C};
pub use error::{Error, Result};
pub use metrics::{CircleGrid, DistanceValue};
pub use squeeze::{BoundInterval, CompactSetSample, CounterexampleConfig, ViolationReport};

pub use num_complex::Complex64;

