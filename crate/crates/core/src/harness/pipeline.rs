//! The `verify-paper` pipeline: every check in dependency order, then the
//! maximum-principle verdict.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::RunConfig;
use super::output::{emit_csv, emit_svg_plot, Cell, RefLine, Series, SlicePlot, Table};
use crate::domain::{
    conv_g2_contains, d_action, d_minkowski, d_sublevel_contains, g2_contains, sample_g2, support_conv_g2,
    DegreeVector, DomainSpec, MembershipStatus, Point2C, SUPPORT_TOL,
};
use crate::error::Result;
use crate::metrics::{c_g2, c_origin_sandwich, extremal_phi, mobius, CircleGrid, CompactEvaluator};
use crate::squeeze::{
    beta_threshold, build_k, lemma33_sweep, psh_violation_report, sq_upper_closed_form,
    CounterexampleConfig, Lemma33Summary, OriginCertificate, ViolationReport,
};

pub const SCHEMA_VERSION: u32 = 1;

const D12: DegreeVector = DegreeVector::SYMMETRIZED;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckVerdict {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub verdict: CheckVerdict,
    pub tolerance: Option<f64>,
    pub metrics: BTreeMap<&'static str, Value>,
}

impl CheckResult {
    fn new(name: &'static str, tolerance: Option<f64>) -> Self {
        Self { name, verdict: CheckVerdict::Pass, tolerance, metrics: BTreeMap::new() }
    }

    fn metric(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Self {
        self.metrics.insert(key, value.into());
        self
    }

    /// Fails the check unless `ok`.
    fn require(&mut self, ok: bool) -> &mut Self {
        if !ok {
            self.verdict = CheckVerdict::Fail;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == CheckVerdict::Pass
    }
}

/// Everything a run produces. Wall-clock timings are kept out of the JSON
/// summary so identical configurations give byte-identical files.
#[derive(Clone, Debug)]
pub struct ReportBundle {
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
    pub violation: ViolationReport,
    pub lemma33: Lemma33Summary,
    pub slice_table: Table,
    pub lemma33_table: Table,
    pub gauge_table: Table,
    pub plot: SlicePlot,
    pub timings: Vec<(&'static str, Duration)>,
}

impl ReportBundle {
    /// Exit-status contract: every check passes and the violation is certified.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed) && self.violation.violated
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn summary_json(&self) -> Value {
        let v = &self.violation;
        // The output directory is where the summary lives, not an input to it.
        let mut config = serde_json::to_value(&self.config).unwrap_or(Value::Null);
        if let Value::Object(map) = &mut config {
            map.remove("out");
        }
        json!({
            "schema": SCHEMA_VERSION,
            "config": config,
            "checks": self.checks,
            "violation": {
                "r": v.r,
                "eps": v.eps,
                "beta": v.beta,
                "center_lower": v.center_lower,
                "sup_annulus_upper": v.sup_annulus_upper,
                "verdict": v.verdict,
                "violated": v.violated,
                "k_points": v.k_points,
                "tau_grid": v.tau_grid,
                "slice_rows": v.slice_upper.len(),
                "origin": v.origin,
            },
            "lemma33": {
                "total": self.lemma33.records.len(),
                "pass_bound": self.lemma33.pass_bound,
                "pass_doubled": self.lemma33.pass_doubled,
                "worst_ratio": self.lemma33.worst_ratio,
            },
            "ambiguity_log": v.ambiguity_log,
            "aggregate": if self.passed() { "pass" } else { "fail" },
        })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut summary = serde_json::to_string_pretty(&self.summary_json())?;
        summary.push('\n');
        std::fs::write(dir.join("summary.json"), summary)?;
        emit_csv(&self.slice_table, &dir.join("slice_bounds.csv"))?;
        emit_csv(&self.lemma33_table, &dir.join("lemma33.csv"))?;
        emit_csv(&self.gauge_table, &dir.join("gauge_residuals.csv"))?;
        emit_svg_plot(&self.plot, &dir.join("slice.svg"))?;
        let timings: BTreeMap<&str, f64> = self.timings.iter().map(|(k, d)| (*k, d.as_secs_f64())).collect();
        std::fs::write(dir.join("timings.json"), serde_json::to_string_pretty(&timings)? + "\n")?;
        Ok(())
    }
}

fn rng(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    rng
}

fn rand_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>())
}

fn rand_point(rng: &mut ChaCha8Rng, r1: f64, r2: f64) -> Point2C {
    Point2C::new(rand_disc(rng, r1), rand_disc(rng, r2))
}

fn rand_unit4(rng: &mut ChaCha8Rng) -> [f64; 4] {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| 2.0 * rng.gen::<f64>() - 1.0);
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

fn dot4(a: [f64; 4], b: [f64; 4]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Runs every check and assembles the bundle. Component errors abort the run.
pub fn run_verify_paper(cfg: &RunConfig) -> Result<ReportBundle> {
    cfg.validate()?;
    let cx = cfg.counterexample()?;
    let mut checks = Vec::new();
    let mut timings = Vec::new();
    let mut gauge_table = Table::new(&[
        "domain", "r", "tol", "seed", "z1_re", "z1_im", "z2_re", "z2_im", "bisection", "oracle", "residual",
    ]);

    macro_rules! timed {
        ($name:literal, $e:expr) => {{
            let t = Instant::now();
            let out = $e;
            timings.push(($name, t.elapsed()));
            out
        }};
    }

    timed!("gauge", {
        checks.push(check_gauge_oracle(cfg, DomainSpec::polydisc(cfg.r)?, "gauge_oracle_polydisc", 1, &mut gauge_table)?);
        checks.push(check_gauge_oracle(cfg, DomainSpec::conv_hull_g2(), "gauge_oracle_conv_hull", 2, &mut gauge_table)?);
        checks.push(check_homogeneity(cfg)?);
    });
    timed!("sandwich", checks.push(check_sandwich(cfg)?));
    timed!("membership", {
        checks.push(check_g2_membership());
        checks.push(check_hull_soundness(cfg)?);
        checks.push(check_sublevel_agreement(cfg)?);
        checks.push(check_hull_balanced(cfg)?);
    });
    timed!("metric", checks.push(check_metric_axioms(cfg)?));
    let (lemma33, lemma33_table) = timed!("lemma33", check_lemma33(cfg, &cx, &mut checks)?);
    timed!("beta", checks.push(check_beta(&cx)));
    let violation = timed!("slice", psh_violation_report(&cx)?);
    checks.push(check_origin(&cx, &violation.origin));
    timed!("consistency", {
        checks.push(check_slice_closed_form(&violation));
        checks.push(check_numeric_consistency(&cx, &violation)?);
    });

    let mut violation = violation;
    violation.ambiguity_log.push(format!(
        "lemma33 bound: grid maximum <= (r - |z1|)/(1 - r|z1|) for {}/{} samples, <= twice that for {}/{}",
        lemma33.pass_bound,
        lemma33.records.len(),
        lemma33.pass_doubled,
        lemma33.records.len()
    ));
    let mut verdict = CheckResult::new("maximum_principle_violation", Some(crate::squeeze::VERDICT_MARGIN));
    verdict
        .metric("center_lower", violation.center_lower)
        .metric("sup_annulus_upper", violation.sup_annulus_upper)
        .metric("beta", violation.beta)
        .require(violation.violated);
    checks.push(verdict);

    let slice_table = slice_table(cfg, &violation);
    let plot = slice_plot(&violation);
    Ok(ReportBundle {
        config: cfg.clone(),
        checks,
        violation,
        lemma33,
        slice_table,
        lemma33_table,
        gauge_table,
        plot,
        timings,
    })
}

fn check_gauge_oracle(
    cfg: &RunConfig,
    domain: DomainSpec,
    name: &'static str,
    stream: u64,
    table: &mut Table,
) -> Result<CheckResult> {
    const TOL: f64 = 1e-8;
    let mut rng = rng(cfg, stream);
    let (r1, r2) = match domain.kind {
        crate::domain::DomainKind::Polydisc { radius } => (1.5 * radius, 1.5 * radius),
        _ => (2.0, 1.0),
    };
    let label = if name.ends_with("polydisc") { "polydisc" } else { "conv_hull_g2" };
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let z = rand_point(&mut rng, r1, r2);
        let h = d_minkowski(&z, &domain, D12, cfg.tol)?;
        let o = domain.gauge_oracle(&z, D12).expect("closed form available");
        worst = worst.max((h - o).abs());
        table.push(vec![
            label.into(),
            cfg.r.into(),
            cfg.tol.into(),
            cfg.seed.into(),
            z.z1.re.into(),
            z.z1.im.into(),
            z.z2.re.into(),
            z.z2.im.into(),
            h.into(),
            o.into(),
            (h - o).abs().into(),
        ]);
    }
    let mut c = CheckResult::new(name, Some(TOL));
    c.metric("samples", cfg.samples).metric("max_residual", worst).require(worst <= TOL);
    Ok(c)
}

fn check_homogeneity(cfg: &RunConfig) -> Result<CheckResult> {
    const PAIRS: usize = 200;
    let tol = 5.0 * cfg.tol;
    let mut c = CheckResult::new("homogeneity", Some(tol));
    for (domain, r1, r2, key, stream) in [
        (DomainSpec::conv_hull_g2(), 2.0, 1.0, "max_defect_conv_hull", 3),
        (DomainSpec::polydisc(cfg.r)?, 1.5 * cfg.r, 1.5 * cfg.r, "max_defect_polydisc", 4),
    ] {
        let mut rng = rng(cfg, stream);
        let mut worst: f64 = 0.0;
        for _ in 0..PAIRS {
            let z = rand_point(&mut rng, r1, r2);
            let lambda = rand_disc(&mut rng, 1.5);
            let lhs = d_minkowski(&d_action(&z, lambda, D12), &domain, D12, cfg.tol)?;
            let rhs = lambda.norm() * d_minkowski(&z, &domain, D12, cfg.tol)?;
            worst = worst.max((lhs - rhs).abs());
        }
        c.metric(key, worst).require(worst <= tol);
    }
    c.metric("pairs", PAIRS);
    Ok(c)
}

fn check_sandwich(cfg: &RunConfig) -> Result<CheckResult> {
    const TOL: f64 = 1e-9;
    let r = cfg.r;
    let domain = DomainSpec::polydisc(r)?;
    let gauge_tol = cfg.tol * 1e-2;
    let oracle = |z: &Point2C| (z.z1.norm() / r).atanh().max((z.z2.norm() / r).atanh());
    let mut rng = rng(cfg, 5);
    let mut order_violations = 0usize;
    let mut worst_right: f64 = 0.0;
    let mut worst_left: f64 = 0.0;
    for _ in 0..cfg.samples {
        let z = rand_point(&mut rng, 0.9 * r, 0.9 * r);
        let (lo, hi) = c_origin_sandwich(&z, &domain, D12, gauge_tol)?;
        let o = oracle(&z);
        if !(lo <= o + TOL && o <= hi + TOL) {
            order_violations += 1;
        }
    }
    for _ in 0..100 {
        let a = rand_disc(&mut rng, 0.9 * r);
        let zero = Complex64::new(0.0, 0.0);
        let on_first = Point2C::new(a, zero);
        let (_, hi) = c_origin_sandwich(&on_first, &domain, D12, gauge_tol)?;
        worst_right = worst_right.max((hi - oracle(&on_first)).abs());
        let on_second = Point2C::new(zero, a);
        let (lo, _) = c_origin_sandwich(&on_second, &domain, D12, gauge_tol)?;
        worst_left = worst_left.max((lo - oracle(&on_second)).abs());
    }
    let mut c = CheckResult::new("sandwich_polydisc", Some(TOL));
    c.metric("samples", cfg.samples)
        .metric("order_violations", order_violations)
        .metric("right_tightness_on_z1_axis", worst_right)
        .metric("left_tightness_on_z2_axis", worst_left)
        .require(order_violations == 0 && worst_right <= TOL && worst_left <= TOL);
    Ok(c)
}

fn check_g2_membership() -> CheckResult {
    let tol = 1e-9;
    let pts = sample_g2(10);
    let inside = pts.iter().filter(|z| g2_contains(z, 1e-12).is_inside()).count();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let off = g2_contains(&Point2C::new(c(1.0, 1.0), c(0.0, 0.0)), tol).status;
    let edge1 = g2_contains(&Point2C::real(2.0, 1.0), tol).status;
    let edge2 = g2_contains(&Point2C::new(c(0.0, 2.0), c(-1.0, 0.0)), tol).status;
    let mut r = CheckResult::new("g2_membership", Some(tol));
    r.metric("parametric_samples", pts.len())
        .metric("parametric_inside", inside)
        .metric("one_plus_i_zero_outside", off == MembershipStatus::Outside)
        .metric("closure_points_on_boundary", edge1 == MembershipStatus::Boundary && edge2 == MembershipStatus::Boundary)
        .require(inside == pts.len())
        .require(off == MembershipStatus::Outside)
        .require(edge1 == MembershipStatus::Boundary && edge2 == MembershipStatus::Boundary);
    r
}

fn check_hull_soundness(cfg: &RunConfig) -> Result<CheckResult> {
    const DIRECTIONS: usize = 8;
    let mut rng = rng(cfg, 6);
    let (mut inside, mut outside, mut boundary, mut contradictions) = (0usize, 0usize, 0usize, 0usize);
    let mut worst_residual: f64 = 0.0;
    for _ in 0..cfg.samples {
        let z = rand_point(&mut rng, 2.2, 1.1);
        let v = conv_g2_contains(&z, cfg.tol)?;
        match v.status {
            MembershipStatus::Inside => {
                inside += 1;
                let terms = v.certificate.as_deref().unwrap_or(&[]);
                let wsum: f64 = terms.iter().map(|t| t.weight).sum();
                let residual = v.certificate_sum().map_or(f64::INFINITY, |s| s.dist(&z));
                worst_residual = worst_residual.max(residual);
                let valid = !terms.is_empty()
                    && terms.len() <= 5
                    && terms.iter().all(|t| (0.0..=1.0).contains(&t.weight) && g2_contains(&t.point, cfg.tol).is_inside())
                    && (wsum - 1.0).abs() <= cfg.tol
                    && residual <= cfg.tol;
                if !valid {
                    contradictions += 1;
                }
                for _ in 0..DIRECTIONS {
                    let u = rand_unit4(&mut rng);
                    if dot4(u, z.to_real4()) > support_conv_g2(u, 40) + SUPPORT_TOL {
                        contradictions += 1;
                    }
                }
            }
            MembershipStatus::Outside => {
                outside += 1;
                if v.separator.is_none_or(|s| s.separation <= cfg.tol) {
                    contradictions += 1;
                }
                if g2_contains(&z, cfg.tol).is_inside() {
                    contradictions += 1;
                }
            }
            MembershipStatus::Boundary => boundary += 1,
        }
    }
    let mut c = CheckResult::new("conv_hull_soundness", Some(SUPPORT_TOL));
    c.metric("trials", cfg.samples)
        .metric("inside", inside)
        .metric("outside", outside)
        .metric("boundary", boundary)
        .metric("max_certificate_residual", worst_residual)
        .metric("contradictions", contradictions)
        .require(contradictions == 0 && inside > 0 && outside > 0);
    Ok(c)
}

fn check_sublevel_agreement(cfg: &RunConfig) -> Result<CheckResult> {
    let band = 10.0 * cfg.tol;
    let mut c = CheckResult::new("sublevel_agreement", Some(band));
    for (domain, r1, r2, key, stream) in [
        (DomainSpec::conv_hull_g2(), 2.2, 1.1, "mismatches_conv_hull", 7),
        (DomainSpec::polydisc(cfg.r)?, 1.3 * cfg.r, 1.3 * cfg.r, "mismatches_polydisc", 8),
    ] {
        let mut rng = rng(cfg, stream);
        let (mut compared, mut mismatches) = (0usize, 0usize);
        for _ in 0..cfg.samples {
            let z = rand_point(&mut rng, r1, r2);
            let v = domain.membership(&z)?;
            if v.margin.abs() <= band || v.status == MembershipStatus::Boundary {
                continue;
            }
            compared += 1;
            if d_sublevel_contains(&z, &domain, D12, 1.0, cfg.tol)? != v.is_inside() {
                mismatches += 1;
            }
        }
        c.metric(key, mismatches).require(mismatches == 0 && compared > 0);
    }
    Ok(c)
}

fn check_hull_balanced(cfg: &RunConfig) -> Result<CheckResult> {
    let pts = sample_g2(10);
    let mut rng = rng(cfg, 9);
    let mut failures = 0usize;
    for _ in 0..cfg.samples {
        let k = rng.gen_range(1..=5);
        let weights: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        let combo = weights
            .iter()
            .fold(Point2C::ORIGIN, |acc, w| acc + (w / total) * pts[rng.gen_range(0..pts.len())]);
        let lambda = rand_disc(&mut rng, 1.0);
        if !conv_g2_contains(&d_action(&combo, lambda, D12), cfg.tol)?.is_inside() {
            failures += 1;
        }
    }
    let mut c = CheckResult::new("conv_hull_balanced", None);
    c.metric("samples", cfg.samples).metric("failures", failures).require(failures == 0);
    Ok(c)
}

fn check_metric_axioms(cfg: &RunConfig) -> Result<CheckResult> {
    const TRIANGLE_SLACK: f64 = 1e-8;
    const PICK_SLACK: f64 = 1e-12;
    const CLOSED_FORM_TOL: f64 = 1e-9;
    let grid = cfg.circle_grid();
    let pts = sample_g2(10);
    let mut rng = rng(cfg, 10);
    let (mut asym, mut self_nonzero, mut pick_violations) = (0usize, 0usize, 0usize);
    let mut worst_triangle = f64::NEG_INFINITY;
    for _ in 0..cfg.samples {
        let [x, y, z] = std::array::from_fn(|_| pts[rng.gen_range(0..pts.len())]);
        let xy = c_g2(&x, &y, grid)?;
        if xy.rho != c_g2(&y, &x, grid)?.rho {
            asym += 1;
        }
        if c_g2(&x, &x, grid)?.rho != 0.0 {
            self_nonzero += 1;
        }
        let yz = c_g2(&y, &z, grid)?.dist;
        let xz = c_g2(&x, &z, grid)?.dist;
        worst_triangle = worst_triangle.max(xz - xy.dist - yz);
        let tau = Complex64::from_polar(1.0, TAU * rng.gen::<f64>());
        if mobius(extremal_phi(&x, tau)?, extremal_phi(&y, tau)?)? > xy.rho + PICK_SLACK {
            pick_violations += 1;
        }
    }
    let mut worst_closed: f64 = 0.0;
    for x in [0.1, 0.2, 0.3] {
        let v = c_g2(&Point2C::ORIGIN, &Point2C::real(x, 0.0), grid)?;
        worst_closed = worst_closed.max((v.rho - x / (2.0 - x)).abs());
    }
    let mut c = CheckResult::new("metric_axioms", Some(TRIANGLE_SLACK));
    c.metric("triples", cfg.samples)
        .metric("asymmetric", asym)
        .metric("self_distance_nonzero", self_nonzero)
        .metric("max_triangle_excess", worst_triangle)
        .metric("schwarz_pick_violations", pick_violations)
        .metric("axis_closed_form_error", worst_closed)
        .require(asym == 0 && self_nonzero == 0 && pick_violations == 0)
        .require(worst_triangle <= TRIANGLE_SLACK && worst_closed <= CLOSED_FORM_TOL);
    Ok(c)
}

fn check_lemma33(
    cfg: &RunConfig,
    cx: &CounterexampleConfig,
    checks: &mut Vec<CheckResult>,
) -> Result<(Lemma33Summary, Table)> {
    let grid = CircleGrid::new(4 * cfg.tau_grid, cfg.refine_iters)?;
    let summary = lemma33_sweep(cx, grid, cfg.samples, cfg.seed)?;
    let mut table = Table::new(&[
        "r", "tau_grid", "seed", "z1_re", "z1_im", "modulus", "max_value", "argmax_tau_re", "argmax_tau_im", "bound",
        "doubled_bound", "pass_bound", "pass_doubled",
    ]);
    for rec in &summary.records {
        table.push(vec![
            cfg.r.into(),
            grid.n().into(),
            cfg.seed.into(),
            rec.z1.re.into(),
            rec.z1.im.into(),
            rec.modulus.into(),
            rec.max_value.into(),
            rec.argmax_tau.re.into(),
            rec.argmax_tau.im.into(),
            rec.bound.into(),
            rec.doubled_bound.into(),
            rec.pass_bound.into(),
            rec.pass_doubled.into(),
        ]);
    }
    let total = summary.records.len();
    let mut c = CheckResult::new("lemma33_doubled_bound", Some(crate::squeeze::LEMMA33_SLACK));
    c.metric("samples", total)
        .metric("tau_grid", grid.n())
        .metric("pass_doubled", summary.pass_doubled)
        .metric("pass_bound_reported", summary.pass_bound)
        .metric("worst_ratio_to_bound", summary.worst_ratio)
        .require(summary.pass_doubled == total);
    checks.push(c);
    Ok((summary, table))
}

fn check_beta(cx: &CounterexampleConfig) -> CheckResult {
    const TOL: f64 = 1e-12;
    let identity = |r: f64, b: f64| ((r - b) / (1.0 - r * b) - r * r / 4.0).abs();
    let mut worst: f64 = 0.0;
    let mut below = true;
    for i in 1..=50 {
        let r = 0.5 * i as f64 / 51.0;
        let b = beta_threshold(r);
        worst = worst.max(identity(r, b));
        below &= b < r;
    }
    let configured = identity(cx.r, cx.beta());
    let mut c = CheckResult::new("beta_identity", Some(TOL));
    c.metric("max_identity_error", worst)
        .metric("configured_beta", cx.beta())
        .metric("configured_identity_error", configured)
        .require(worst <= TOL && below && configured <= TOL && cx.beta() < cx.r);
    c
}

fn check_origin(cx: &CounterexampleConfig, cert: &OriginCertificate) -> CheckResult {
    let mut c = CheckResult::new("origin_certificate", Some(cx.tol));
    c.metric("checked", cert.checked)
        .metric("in_sublevel", cert.in_sublevel)
        .metric("max_z1", cert.max_z1)
        .metric("max_z2", cert.max_z2)
        .metric("lower", cert.bound.lower)
        .require(cert.bound.lower == cx.r / 2.0 && cert.checked >= cx.certification_points);
    c
}

fn check_slice_closed_form(v: &ViolationReport) -> CheckResult {
    let mut rows: Vec<_> = v.slice_upper.iter().filter(|r| r.angle == 0.0).collect();
    rows.sort_by(|a, b| a.modulus.total_cmp(&b.modulus));
    let decreasing = rows.windows(2).all(|w| w[1].closed_form < w[0].closed_form);
    let half = v.r / 2.0;
    let crossing = v.slice_upper.iter().all(|row| {
        if row.in_annulus {
            row.closed_form < half
        } else {
            row.closed_form >= half - 1e-12
        }
    });
    let mut c = CheckResult::new("slice_closed_form", Some(1e-12));
    c.metric("rows", v.slice_upper.len())
        .metric("strictly_decreasing", decreasing)
        .metric("crosses_half_r_at_beta", crossing)
        .require(decreasing && crossing);
    c
}

fn check_numeric_consistency(cx: &CounterexampleConfig, v: &ViolationReport) -> Result<CheckResult> {
    const SLACK: f64 = 1e-3;
    let k = build_k(cx)?;
    let eval = CompactEvaluator::new(k.points(), cx.tau_grid)?;
    let mut worst = f64::NEG_INFINITY;
    let xs: Vec<f64> = (0..50).map(|i| cx.r * (0.125 + 0.85 * i as f64 / 49.0)).collect();
    for &x in &xs {
        let closed = sq_upper_closed_form(Complex64::new(x, 0.0), cx)?.upper;
        let numeric = eval.distance(&Point2C::real(x, 0.0))?.sqrt();
        worst = worst.max(numeric - closed);
    }
    for row in v.slice_upper.iter().filter(|r| r.in_annulus) {
        if let Some(n) = row.numeric {
            worst = worst.max(n - row.closed_form);
        }
    }
    let at_origin = eval.distance(&Point2C::ORIGIN)?.sqrt();
    let mut c = CheckResult::new("numeric_vs_closed_form", Some(SLACK));
    c.metric("slice_samples", xs.len())
        .metric("max_numeric_minus_closed", worst)
        .metric("numeric_upper_at_origin", at_origin)
        .metric("origin_lower", v.center_lower)
        .require(worst <= SLACK && v.center_lower <= at_origin);
    Ok(c)
}

pub fn slice_table(cfg: &RunConfig, v: &ViolationReport) -> Table {
    let mut t = Table::new(&[
        "r", "eps", "beta", "k_density", "tau_grid", "modulus", "angle", "closed_form", "numeric", "in_annulus",
        "center_lower",
    ]);
    for row in &v.slice_upper {
        t.push(vec![
            cfg.r.into(),
            cfg.eps.into(),
            v.beta.into(),
            cfg.k_density.into(),
            cfg.tau_grid.into(),
            row.modulus.into(),
            row.angle.into(),
            row.closed_form.into(),
            Cell::from(row.numeric),
            row.in_annulus.into(),
            v.center_lower.into(),
        ]);
    }
    t
}

/// Closed-form bound at angle zero as a line, numeric bounds as dots, with
/// reference lines at `r / 2` and `beta`.
pub fn slice_plot(v: &ViolationReport) -> SlicePlot {
    let mut closed: Vec<(f64, f64)> =
        v.slice_upper.iter().filter(|r| r.angle == 0.0).map(|r| (r.modulus, r.closed_form)).collect();
    closed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let numeric: Vec<(f64, f64)> =
        v.slice_upper.iter().filter_map(|r| r.numeric.map(|n| (r.modulus, n))).collect();
    SlicePlot {
        title: format!("Upper bounds on the squeezing function along z2 = 0 (r = {}, eps = {})", v.r, v.eps),
        x_label: "|z1|".into(),
        y_label: "upper bound".into(),
        series: vec![
            Series { name: "closed form sqrt((r-|z1|)/(1-r|z1|))".into(), points: closed, line: true },
            Series { name: "numeric sqrt(min over K of tanh c)".into(), points: numeric, line: false },
        ],
        hlines: vec![RefLine { label: format!("r/2 = {}", v.center_lower), at: v.center_lower }],
        vlines: vec![RefLine { label: format!("beta = {:.6}", v.beta), at: v.beta }],
    }
}
