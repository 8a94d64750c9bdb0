//! Bounds on the `(1,2)`-balanced squeezing function of `D = conv(G2) \ K`,
//! `K = ∂D^2(0, r) \ B^2(Q, eps)`, `Q = (0, r)`, and the certificate that its
//! restriction to `{z2 = 0}` violates the maximum principle.
//!
//! The squeezing function itself is never evaluated; only bounds are:
//!
//! - at the origin, `S(0) >= r / 2`, because the gauge sublevel set
//!   `{h < r/2}` of the hull misses `K`;
//! - on the slice, `S(z1, 0)^2 <= (r - |z1|) / (1 - r|z1|)` in closed form,
//!   and `S(z)^2 <= min_K tanh c_G2(z, .)` numerically.
//!
//! The closed form drops below `r / 2` exactly when `|z1| > beta` with
//! `beta = r(4 - r) / (4 - r^3)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{d_minkowski, g2_contains, DegreeVector, DomainSpec, Point2C};
use crate::error::{Error, Result};
use crate::metrics::{c_g2, CircleGrid, CompactEvaluator};

/// Margin required for the strict inequalities of the verdict.
pub const VERDICT_MARGIN: f64 = 1e-12;
/// Slack when comparing a grid maximum against the closed-form bound.
pub const LEMMA33_SLACK: f64 = 1e-12;

/// Sampling of the slice `{(rho e^{i theta}, 0)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceGrid {
    /// Radii strictly inside the annulus `(beta, r)`.
    pub radii: usize,
    /// Angles per radius.
    pub angles: usize,
}

impl Default for SliceGrid {
    fn default() -> Self {
        Self { radii: 16, angles: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleConfig {
    /// Polydisc radius, in `(0, 1/2)`.
    pub r: f64,
    /// Radius of the ball removed around `Q = (0, r)`, in `(0, r)`.
    pub eps: f64,
    /// Samples per angle parameter of each face of `∂D^2(0, r)`.
    pub k_density: usize,
    pub slice: SliceGrid,
    pub tau_grid: CircleGrid,
    /// Number of points in the origin certification grid.
    pub certification_points: usize,
    /// Gauge tolerance.
    pub tol: f64,
    /// Replaces the computed threshold. Only meant for negative controls.
    #[doc(hidden)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta_override: Option<f64>,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self {
            r: 0.4,
            eps: 0.05,
            k_density: 64,
            slice: SliceGrid::default(),
            tau_grid: CircleGrid::default(),
            certification_points: 10_000,
            tol: 1e-9,
            beta_override: None,
        }
    }
}

impl CounterexampleConfig {
    pub fn new(r: f64, eps: f64) -> Result<Self> {
        let cfg = Self { r, eps, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `r < 1/2` keeps the closed polydisc inside `G2`, so every distance
    /// against `K` is defined.
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r < 0.5) {
            return Err(Error::Config(format!("r = {} must lie in (0, 0.5)", self.r)));
        }
        if !(self.eps > 0.0 && self.eps < self.r) {
            return Err(Error::Config(format!("eps = {} must lie in (0, r)", self.eps)));
        }
        if self.k_density < 4 {
            return Err(Error::Config(format!("k_density = {} must be at least 4", self.k_density)));
        }
        if self.slice.radii == 0 || self.slice.angles == 0 {
            return Err(Error::Config("slice grid must be nonempty".into()));
        }
        if self.certification_points == 0 {
            return Err(Error::Config("certification grid must be nonempty".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Config(format!("tol = {} must be positive", self.tol)));
        }
        Ok(())
    }

    pub fn d(&self) -> DegreeVector {
        DegreeVector::SYMMETRIZED
    }

    pub fn q(&self) -> Point2C {
        Point2C::real(0.0, self.r)
    }

    pub fn beta(&self) -> f64 {
        self.beta_override.unwrap_or_else(|| beta_threshold(self.r))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceTag {
    /// `|z1| = r`, `|z2| <= r`.
    Z1OnCircle,
    /// `|z2| = r`, `|z1| <= r`.
    Z2OnCircle,
}

/// Finite sample of `K = ∂D^2(0, r) \ B^2(Q, eps)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactSetSample {
    pub r: f64,
    pub eps: f64,
    pub density: usize,
    points: Vec<Point2C>,
    faces: Vec<FaceTag>,
}

impl CompactSetSample {
    pub fn points(&self) -> &[Point2C] {
        &self.points
    }

    pub fn faces(&self) -> &[FaceTag] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps the points selected by `keep`. The result may be empty.
    pub fn filtered(&self, mut keep: impl FnMut(&Point2C, FaceTag) -> bool) -> CompactSetSample {
        let (points, faces) = self
            .points
            .iter()
            .zip(self.faces.iter())
            .filter(|(p, f)| keep(p, **f))
            .map(|(p, f)| (*p, *f))
            .unzip();
        CompactSetSample { points, faces, ..self.clone() }
    }
}

/// Samples both faces of the polydisc boundary: the circle coordinate on
/// `k_density` angles, the free coordinate on a polar grid with
/// `max(2, k_density / 8)` radial levels in `[0, r]` and `k_density` angles.
/// Points closer than `eps` to `Q` are dropped.
pub fn build_k(cfg: &CounterexampleConfig) -> Result<CompactSetSample> {
    cfg.validate()?;
    let (r, n) = (cfg.r, cfg.k_density);
    let levels = (n / 8).max(2);
    let circle: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(r, TAU * j as f64 / n as f64)).collect();
    let mut disc = vec![Complex64::new(0.0, 0.0)];
    for k in 1..=levels {
        let rho = r * k as f64 / levels as f64;
        disc.extend((0..n).map(|j| Complex64::from_polar(rho, TAU * j as f64 / n as f64)));
    }

    let q = cfg.q();
    let mut points = Vec::with_capacity(2 * circle.len() * disc.len());
    let mut faces = Vec::with_capacity(points.capacity());
    for &c in &circle {
        for &f in &disc {
            for (p, tag) in [
                (Point2C::new(c, f), FaceTag::Z1OnCircle),
                (Point2C::new(f, c), FaceTag::Z2OnCircle),
            ] {
                if p.dist(&q) >= cfg.eps {
                    points.push(p);
                    faces.push(tag);
                }
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyCompactSet);
    }
    for p in &points {
        let m = p.z1.norm().max(p.z2.norm());
        if (m - r).abs() > 1e-12 {
            return Err(Error::domain(format!("{p:?} is off the polydisc boundary")));
        }
        if !g2_contains(p, 1e-12).is_inside() {
            return Err(Error::domain(format!("{p:?} is not inside G2")));
        }
    }
    Ok(CompactSetSample { r, eps: cfg.eps, density: n, points, faces })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    NumericK,
    OriginCertificate,
}

/// Certified bounds on a squeezing-function value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInterval {
    pub lower: f64,
    pub upper: f64,
    pub provenance: Provenance,
}

/// Outcome of the origin certification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OriginCertificate {
    pub bound: BoundInterval,
    pub checked: usize,
    /// Grid points found in the sublevel set `{h < r/2 - tol}`.
    pub in_sublevel: usize,
    /// Largest `|z1|` and `|z2|` seen among those points.
    pub max_z1: f64,
    pub max_z2: f64,
}

/// Certifies that the hull gauge sublevel set `{h < r/2}` avoids `K`, which
/// makes the identity map a witness for `S(0) >= r/2`.
///
/// The grid is polar in each coordinate, `m` radii and `m` angles apiece with
/// `m^4 >= certification_grid`, and reaches 25% past the claimed bounds
/// `|z1| < r`, `|z2| < r^2/4` so that the gauge has to do the excluding.
pub fn certify_origin(cfg: &CounterexampleConfig, certification_grid: usize) -> Result<OriginCertificate> {
    cfg.validate()?;
    let r = cfg.r;
    let level = r / 2.0;
    let hull = DomainSpec::conv_hull_g2();
    let m = (certification_grid as f64).powf(0.25).ceil().max(2.0) as usize;
    let polar = |radius: f64| -> Vec<Complex64> {
        (0..m)
            .flat_map(|i| {
                let rho = radius * i as f64 / (m - 1) as f64;
                (0..m).map(move |j| Complex64::from_polar(rho, TAU * j as f64 / m as f64))
            })
            .collect()
    };
    let first = polar(1.25 * r);
    let second = polar(1.25 * r * r / 4.0);

    let mut cert = OriginCertificate {
        bound: BoundInterval { lower: level, upper: 1.0, provenance: Provenance::OriginCertificate },
        checked: 0,
        in_sublevel: 0,
        max_z1: 0.0,
        max_z2: 0.0,
    };
    for &a in &first {
        for &b in &second {
            let z = Point2C::new(a, b);
            cert.checked += 1;
            let h = d_minkowski(&z, &hull, cfg.d(), cfg.tol)?;
            if h >= level - cfg.tol {
                continue;
            }
            cert.in_sublevel += 1;
            cert.max_z1 = cert.max_z1.max(a.norm());
            cert.max_z2 = cert.max_z2.max(b.norm());
            let fail = |reason: String| Error::CertificationFailed { point: z, reason };
            // (2 z1 / r, 4 z2 / r^2) must lie in the hull
            let stretched = Point2C::new(a / level, b / (level * level));
            if !hull.contains_open(&stretched) {
                return Err(fail(format!("stretched point {stretched:?} outside the hull")));
            }
            if a.norm() >= r {
                return Err(fail(format!("|z1| = {} >= r", a.norm())));
            }
            if b.norm() >= r * r / 4.0 {
                return Err(fail(format!("|z2| = {} >= r^2/4", b.norm())));
            }
        }
    }
    Ok(cert)
}

/// `S(0) >= r / 2`, after running [`certify_origin`].
pub fn sq_lower_origin(cfg: &CounterexampleConfig, certification_grid: usize) -> Result<BoundInterval> {
    Ok(certify_origin(cfg, certification_grid)?.bound)
}

/// `S(z1, 0) <= sqrt((r - |z1|) / (1 - r|z1|))` for `0 < |z1| < r`.
pub fn sq_upper_closed_form(z1: Complex64, cfg: &CounterexampleConfig) -> Result<BoundInterval> {
    let (r, m) = (cfg.r, z1.norm());
    if !(m > 0.0 && m < r) {
        return Err(Error::domain(format!("|z1| = {m} not in (0, {r})")));
    }
    Ok(BoundInterval {
        lower: 0.0,
        upper: ((r - m) / (1.0 - r * m)).sqrt(),
        provenance: Provenance::ClosedForm,
    })
}

/// `S(z) <= sqrt(min_K tanh c_G2(z, .))`: the squared-scale bound with the
/// exponent `L = 2`, evaluated on the sampled `K`.
pub fn sq_upper_numeric(
    z: &Point2C,
    k: &CompactSetSample,
    grid: CircleGrid,
    cfg: &CounterexampleConfig,
) -> Result<BoundInterval> {
    cfg.validate()?;
    let eval = CompactEvaluator::new(k.points(), grid)?;
    numeric_bound(&eval, z)
}

fn numeric_bound(eval: &CompactEvaluator<'_>, z: &Point2C) -> Result<BoundInterval> {
    let d = eval.distance(z)?;
    Ok(BoundInterval { lower: 0.0, upper: d.sqrt(), provenance: Provenance::NumericK })
}

/// `beta = r(4 - r) / (4 - r^3)`, the root of `(r - x) / (1 - r x) = r^2 / 4`.
pub fn beta_threshold(r: f64) -> f64 {
    debug_assert!(r > 0.0 && r < 1.0);
    r * (4.0 - r) / (4.0 - r * r * r)
}

/// One evaluation of the distance between `(z1, 0)` and its radial
/// projection `w0 = (r z1 / |z1|, 0)` onto `K`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma33Record {
    pub z1: Complex64,
    pub modulus: f64,
    /// Grid maximum of `mobius(phi_tau(z), phi_tau(w0))`.
    pub max_value: f64,
    pub argmax_tau: Complex64,
    /// `(r - |z1|) / (1 - r|z1|)`.
    pub bound: f64,
    pub doubled_bound: f64,
    pub pass_bound: bool,
    pub pass_doubled: bool,
}

pub fn lemma33_check(z1: Complex64, cfg: &CounterexampleConfig, grid: CircleGrid) -> Result<Lemma33Record> {
    let (r, m) = (cfg.r, z1.norm());
    if !(m > 0.0 && m < r) {
        return Err(Error::domain(format!("|z1| = {m} not in (0, {r})")));
    }
    let z = Point2C::new(z1, Complex64::new(0.0, 0.0));
    let w0 = Point2C::new(z1 * (r / m), Complex64::new(0.0, 0.0));
    let v = c_g2(&z, &w0, grid)?;
    let bound = (r - m) / (1.0 - r * m);
    Ok(Lemma33Record {
        z1,
        modulus: m,
        max_value: v.rho,
        argmax_tau: v.argmax_tau,
        bound,
        doubled_bound: 2.0 * bound,
        pass_bound: v.rho <= bound + LEMMA33_SLACK,
        pass_doubled: v.rho <= 2.0 * bound + LEMMA33_SLACK,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma33Summary {
    pub records: Vec<Lemma33Record>,
    pub pass_bound: usize,
    pub pass_doubled: usize,
    /// Largest `max_value / bound` over the sweep.
    pub worst_ratio: f64,
}

/// Runs [`lemma33_check`] on `samples` points drawn uniformly in modulus
/// from `(0, r)` and in angle, from a seeded generator.
pub fn lemma33_sweep(
    cfg: &CounterexampleConfig,
    grid: CircleGrid,
    samples: usize,
    seed: u64,
) -> Result<Lemma33Summary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(samples);
    while records.len() < samples {
        let m = rng.gen::<f64>() * cfg.r;
        let theta = rng.gen::<f64>() * TAU;
        if m <= 0.0 {
            continue;
        }
        records.push(lemma33_check(Complex64::from_polar(m, theta), cfg, grid)?);
    }
    let pass_bound = records.iter().filter(|r| r.pass_bound).count();
    let pass_doubled = records.iter().filter(|r| r.pass_doubled).count();
    let worst_ratio = records.iter().map(|r| r.max_value / r.bound).fold(0.0, f64::max);
    Ok(Lemma33Summary { records, pass_bound, pass_doubled, worst_ratio })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Violated,
    NotViolated,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceRow {
    pub modulus: f64,
    pub angle: f64,
    pub closed_form: f64,
    /// Only evaluated on the verdict annulus.
    pub numeric: Option<f64>,
    pub in_annulus: bool,
}

impl SliceRow {
    /// Largest of the available upper bounds.
    pub fn worst_upper(&self) -> f64 {
        self.numeric.map_or(self.closed_form, |n| n.max(self.closed_form))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub r: f64,
    pub eps: f64,
    pub beta: f64,
    pub center_lower: f64,
    pub origin: OriginCertificate,
    pub k_points: usize,
    pub tau_grid: CircleGrid,
    pub slice_upper: Vec<SliceRow>,
    /// Supremum over the annulus rows of every upper bound in the table.
    pub sup_annulus_upper: f64,
    pub verdict: Verdict,
    pub violated: bool,
    pub ambiguity_log: Vec<String>,
}

/// Conventions fixed where the construction admits more than one reading.
pub fn standard_ambiguity_log() -> Vec<String> {
    vec![
        "extremal map: phi_tau(s, p) = (2 tau p - s) / (2 - tau s); the variant with \
         (2 - tau p) in the denominator does not map G2 into the disc"
            .into(),
        "origin lower bound: S(0) >= r/2, the sublevel radius certified by the identity map \
         (not the constant 1/2)"
            .into(),
        "slice upper bound: S(z1, 0)^2 <= (r - |z1|) / (1 - r|z1|); the denominator \
         2 - r|z1| is not used"
            .into(),
        "slice: the complex line {z2 = 0}".into(),
        "w0 = (r z1 / |z1|, 0) is checked to lie in K directly (distance to Q is r*sqrt(2) > eps)"
            .into(),
        "sublevel notation: open sublevel set {h < level} of the (1,2)-gauge".into(),
        "excluded ball B^2(Q, eps) has radius eps".into(),
    ]
}

/// Assembles the origin lower bound and the slice upper bounds and decides
/// whether the slice restriction violates the maximum principle.
///
/// The verdict annulus is `beta < |z1| < r`, sampled at `slice.radii` radii
/// strictly inside and `slice.angles` angles; numeric bounds are evaluated
/// there. Rows with `|z1| <= beta` are added at angle zero with the closed
/// form only and never enter the verdict. `Violated` requires every bound on
/// the annulus to sit below the center's lower bound by [`VERDICT_MARGIN`].
pub fn psh_violation_report(cfg: &CounterexampleConfig) -> Result<ViolationReport> {
    cfg.validate()?;
    let (r, beta) = (cfg.r, cfg.beta());
    let origin = certify_origin(cfg, cfg.certification_points)?;
    let center_lower = origin.bound.lower;

    let k = build_k(cfg)?;
    let eval = CompactEvaluator::new(k.points(), cfg.tau_grid)?;
    let m = cfg.slice.radii;

    let mut rows = Vec::new();
    for i in 1..=m {
        let modulus = beta * i as f64 / m as f64;
        if modulus > 0.0 && modulus < r {
            let closed_form = sq_upper_closed_form(Complex64::new(modulus, 0.0), cfg)?.upper;
            rows.push(SliceRow { modulus, angle: 0.0, closed_form, numeric: None, in_annulus: false });
        }
    }
    for i in 1..=m {
        let modulus = beta + (r - beta) * i as f64 / (m + 1) as f64;
        if !(modulus > beta && modulus < r) {
            continue;
        }
        for j in 0..cfg.slice.angles {
            let angle = TAU * j as f64 / cfg.slice.angles as f64;
            let z1 = Complex64::from_polar(modulus, angle);
            let closed_form = sq_upper_closed_form(z1, cfg)?.upper;
            let z = Point2C::new(z1, Complex64::new(0.0, 0.0));
            let numeric = numeric_bound(&eval, &z)?.upper;
            rows.push(SliceRow { modulus, angle, closed_form, numeric: Some(numeric), in_annulus: true });
        }
    }

    let sup = rows
        .iter()
        .filter(|row| row.in_annulus)
        .map(SliceRow::worst_upper)
        .fold(f64::NEG_INFINITY, f64::max);
    let verdict = if !sup.is_finite() {
        Verdict::Indeterminate
    } else if sup < center_lower - VERDICT_MARGIN {
        Verdict::Violated
    } else if sup > center_lower + VERDICT_MARGIN {
        Verdict::NotViolated
    } else {
        Verdict::Indeterminate
    };

    Ok(ViolationReport {
        r,
        eps: cfg.eps,
        beta,
        center_lower,
        origin,
        k_points: k.len(),
        tau_grid: cfg.tau_grid,
        slice_upper: rows,
        sup_annulus_upper: sup,
        verdict,
        violated: verdict == Verdict::Violated,
        ambiguity_log: standard_ambiguity_log(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> CounterexampleConfig {
        CounterexampleConfig::default()
    }

    #[test]
    fn config_invariants() {
        assert!(CounterexampleConfig::new(0.4, 0.05).is_ok());
        assert!(CounterexampleConfig::new(0.5, 0.05).is_err());
        assert!(CounterexampleConfig::new(0.4, 0.4).is_err());
        assert!(CounterexampleConfig::new(0.4, 0.0).is_err());
        assert_eq!(cfg().q(), Point2C::real(0.0, 0.4));
    }

    #[test]
    fn k_sample_invariants() {
        let mut c = cfg();
        c.k_density = 32;
        let k = build_k(&c).unwrap();
        assert!(!k.is_empty());
        assert_eq!(k.points().len(), k.faces().len());
        for (p, f) in k.points().iter().zip(k.faces()) {
            assert!((p.z1.norm().max(p.z2.norm()) - 0.4).abs() <= 1e-12);
            assert!(p.dist(&c.q()) >= c.eps);
            assert!(g2_contains(p, 1e-12).is_inside());
            match f {
                FaceTag::Z1OnCircle => assert!((p.z1.norm() - 0.4).abs() < 1e-12),
                FaceTag::Z2OnCircle => assert!((p.z2.norm() - 0.4).abs() < 1e-12),
            }
        }
        assert!(k.points().contains(&Point2C::real(0.4, 0.0)));
        // (0, 0.4 e^{i psi}) close to Q is dropped
        let near_q = k
            .points()
            .iter()
            .filter(|p| p.z1.norm() == 0.0 && (p.z2 - Complex64::new(0.4, 0.0)).norm() < c.eps);
        assert_eq!(near_q.count(), 0);
        assert!(!k.points().contains(&Point2C::real(0.0, 0.4)));
    }

    #[test]
    fn closed_form_examples() {
        let c = cfg();
        let v = sq_upper_closed_form(Complex64::new(0.38, 0.0), &c).unwrap();
        assert!((v.upper - (0.02f64 / 0.848).sqrt()).abs() < 1e-15);
        assert!((v.upper - 0.15357).abs() < 1e-5);
        assert_eq!(v.provenance, Provenance::ClosedForm);
        let near = sq_upper_closed_form(Complex64::new(0.4 - 1e-12, 0.0), &c).unwrap();
        assert!(near.upper < 1e-5);
        let at_beta = sq_upper_closed_form(Complex64::new(beta_threshold(0.4), 0.0), &c).unwrap();
        assert!((at_beta.upper - 0.2).abs() < 1e-12);
        assert!(sq_upper_closed_form(Complex64::new(0.0, 0.0), &c).is_err());
        assert!(sq_upper_closed_form(Complex64::new(0.0, 0.4), &c).is_err());
    }

    #[test]
    fn beta_examples() {
        assert!((beta_threshold(0.4) - 1.44 / 3.936).abs() < 1e-15);
        assert!((beta_threshold(0.4) - 0.365_853_7).abs() < 1e-7);
        for i in 1..100 {
            let r = i as f64 / 100.0;
            let b = beta_threshold(r);
            assert!(b < r);
            assert!(((r - b) / (1.0 - r * b) - r * r / 4.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn lemma33_single_direction_value() {
        // at tau = 1 the value is (r - x) / (2 - x - r)
        let (r, x) = (0.4, 0.15);
        let z = Point2C::real(x, 0.0);
        let w0 = Point2C::real(r, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let a = crate::metrics::extremal_phi(&z, one).unwrap();
        let b = crate::metrics::extremal_phi(&w0, one).unwrap();
        let v = crate::metrics::mobius(a, b).unwrap();
        assert!((v - (r - x) / (2.0 - x - r)).abs() < 1e-15);
        assert!(v <= (r - x) / (1.0 - r * x));
        let rec = lemma33_check(Complex64::new(x, 0.0), &cfg(), CircleGrid::default()).unwrap();
        assert!(rec.max_value >= v - 1e-15);
        assert!(rec.pass_bound && rec.pass_doubled);
    }

    #[test]
    fn lemma33_coincidence_limit() {
        let rec = lemma33_check(Complex64::new(0.4 - 1e-9, 0.0), &cfg(), CircleGrid::default()).unwrap();
        assert!(rec.max_value < 1e-8 && rec.bound < 1e-8);
        assert!(lemma33_check(Complex64::new(0.0, 0.0), &cfg(), CircleGrid::default()).is_err());
    }

    #[test]
    fn origin_certificate_small_grid() {
        let cert = certify_origin(&cfg(), 256).unwrap();
        assert_eq!(cert.bound.lower, 0.2);
        assert_eq!(cert.bound.provenance, Provenance::OriginCertificate);
        assert!(cert.in_sublevel > 0 && cert.in_sublevel < cert.checked);
        assert!(cert.max_z1 < 0.4 && cert.max_z2 < 0.04);
    }

    #[test]
    fn numeric_bound_on_a_ring() {
        let c = cfg();
        let k = build_k(&c).unwrap();
        let ring = k.filtered(|p, f| f == FaceTag::Z1OnCircle && p.z2.norm() == 0.0);
        assert_eq!(ring.len(), c.k_density);
        let v = sq_upper_numeric(&Point2C::ORIGIN, &ring, CircleGrid::default(), &c).unwrap();
        assert!((v.upper - 0.5).abs() < 1e-12);
        let empty = k.filtered(|_, _| false);
        assert!(matches!(
            sq_upper_numeric(&Point2C::ORIGIN, &empty, CircleGrid::default(), &c),
            Err(Error::EmptyCompactSet)
        ));
    }
}
