//! One-dimensional maximization over the circle: a uniform grid followed by
//! golden-section refinement around the best grid point.

use std::f64::consts::TAU;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Result of a maximization over an angle `theta in [0, 2pi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleMax {
    pub theta: f64,
    pub value: f64,
}

/// Angle of the `k`-th point of an `n`-point uniform grid.
#[inline]
pub fn grid_angle(k: usize, n: usize) -> f64 {
    TAU * k as f64 / n as f64
}

/// Maximizes `f` over the circle. The grid has `n` points; refinement runs
/// `refine_iters` golden-section steps on the two cells adjacent to the best
/// grid point. The returned value is a running maximum, so it never decreases
/// as `refine_iters` grows.
pub fn maximize_on_circle<F>(f: F, n: usize, refine_iters: usize) -> AngleMax
where
    F: Fn(f64) -> f64,
{
    let mut best = AngleMax { theta: 0.0, value: f64::NEG_INFINITY };
    for k in 0..n {
        let theta = grid_angle(k, n);
        let v = f(theta);
        if v > best.value {
            best = AngleMax { theta, value: v };
        }
    }
    let h = TAU / n as f64;
    refine_golden(&f, best.theta - h, best.theta + h, refine_iters, &mut best);
    best.theta = best.theta.rem_euclid(TAU);
    best
}

/// Golden-section search for a maximum on `[lo, hi]`, folding every evaluation
/// into `best`.
pub fn refine_golden<F>(f: &F, mut lo: f64, mut hi: f64, iters: usize, best: &mut AngleMax)
where
    F: Fn(f64) -> f64,
{
    if iters == 0 {
        return;
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    fold(best, x1, f1);
    fold(best, x2, f2);
    for _ in 1..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            fold(best, x2, f2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            fold(best, x1, f1);
        }
    }
}

#[inline]
fn fold(best: &mut AngleMax, theta: f64, value: f64) {
    if value > best.value {
        *best = AngleMax { theta, value };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_off_grid_maximum() {
        let peak = 1.234_567;
        let m = maximize_on_circle(|t| (t - peak).cos(), 16, 60);
        assert!((m.theta - peak).abs() < 1e-7);
        assert!((m.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn refinement_is_monotone() {
        let f = |t: f64| (3.0 * t).sin() + 0.3 * (t + 0.4).cos();
        let mut prev = f64::NEG_INFINITY;
        for iters in 0..50 {
            let v = maximize_on_circle(f, 16, iters).value;
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn wraps_theta_into_range() {
        let m = maximize_on_circle(|t| (t + 0.01).cos(), 32, 40);
        assert!((0.0..TAU).contains(&m.theta));
        assert!((m.theta - (TAU - 0.01)).abs() < 1e-7);
    }
}
