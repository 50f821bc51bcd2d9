//! Least concave majorants of step data, their one-sided derivatives, the
//! argmax operators, and the switching-relation checks.
//!
//! A [`StepFunction`] is right-continuous, nondecreasing, and flat after its
//! last knot, so its least concave majorant on `[0, inf)` is the upper convex
//! hull of the step corners with a horizontal terminal ray.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::fabs;

/// Which one-sided limit to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Right-continuous nondecreasing step path on `[0, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
    origin: f64,
}

impl StepFunction {
    /// Build from strictly increasing knots and nondecreasing values, with
    /// ordinate `origin` at 0 (use [`StepFunction::new`] for `origin = 0`).
    pub fn with_origin(knots: Vec<f64>, values: Vec<f64>, origin: f64) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::EmptyInput);
        }
        if knots.len() != values.len() {
            return Err(Error::InvalidArgument {
                what: "values length",
                value: values.len() as f64,
            });
        }
        let mut prev_x = f64::NEG_INFINITY;
        let mut prev_v = origin;
        for (i, (&x, &v)) in knots.iter().zip(values.iter()).enumerate() {
            let x_ok = x.is_finite() && if i == 0 { x >= 0.0 } else { x > prev_x };
            if !x_ok {
                return Err(Error::InvalidArgument { what: "knot", value: x });
            }
            if !v.is_finite() || v < prev_v {
                return Err(Error::InvalidArgument { what: "value", value: v });
            }
            prev_x = x;
            prev_v = v;
        }
        Ok(StepFunction { knots, values, origin })
    }

    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::with_origin(knots, values, 0.0)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn last_knot(&self) -> f64 {
        *self.knots.last().expect("nonempty by construction")
    }

    /// Right-continuous evaluation: the ordinate of the largest knot `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.knots.partition_point(|&k| k <= x);
        if idx == 0 {
            self.origin
        } else {
            self.values[idx - 1]
        }
    }

    /// `inf` (left) or `sup` (right) of the maximizers of `x -> step(x) - y x`
    /// over `[0, inf)`.
    ///
    /// The objective is piecewise linear and decreasing between knots for
    /// `y > 0`, so the maximizer set is scanned over `{0} U knots`.
    pub fn argmax_affine(&self, y: f64, side: Side) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::UnboundedArgmax { y });
        }
        let mut best_x = 0.0;
        let mut best = self.origin;
        for (&x, &v) in self.knots.iter().zip(self.values.iter()) {
            let score = v - y * x;
            let improves = match side {
                Side::Left => score > best,
                Side::Right => score >= best,
            };
            if improves {
                best = score;
                best_x = x;
            }
        }
        Ok(best_x)
    }

    /// Least concave majorant; linear-time upper-hull scan over the corners.
    pub fn lcm(&self) -> Majorant {
        // Relative tolerance for merging numerically collinear segments.
        const COLLINEAR_RTOL: f64 = 1e-12;

        let mut xs: Vec<f64> = Vec::with_capacity(self.knots.len() + 1);
        let mut ys: Vec<f64> = Vec::with_capacity(self.knots.len() + 1);
        if self.knots[0] > 0.0 {
            xs.push(0.0);
            ys.push(self.origin);
        }
        xs.extend_from_slice(&self.knots);
        ys.extend_from_slice(&self.values);

        let slope = |xa: f64, ya: f64, xb: f64, yb: f64| (yb - ya) / (xb - xa);
        let mut hull: Vec<(f64, f64)> = Vec::with_capacity(xs.len());
        for (&x, &y) in xs.iter().zip(ys.iter()) {
            while hull.len() >= 2 {
                let (x1, y1) = hull[hull.len() - 2];
                let (x2, y2) = hull[hull.len() - 1];
                let s_old = slope(x1, y1, x2, y2);
                let s_new = slope(x2, y2, x, y);
                let scale = fabs(s_old).max(fabs(s_new));
                let collinear = fabs(s_new - s_old) <= COLLINEAR_RTOL * scale;
                if s_new >= s_old || collinear {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push((x, y));
        }

        let slopes = hull
            .windows(2)
            .map(|w| slope(w[0].0, w[0].1, w[1].0, w[1].1))
            .collect();
        Majorant { vertices: hull, slopes, terminal_slope: 0.0 }
    }

    /// Check both switching relations and the naive weak/weak relation on the
    /// grid `x_grid x y_grid`.
    pub fn verify_switching(&self, x_grid: &[f64], y_grid: &[f64]) -> Result<SwitchingReport> {
        let majorant = self.lcm();
        let mut report = SwitchingReport {
            x_grid_len: x_grid.len(),
            y_grid_len: y_grid.len(),
            pairs_checked: 0,
            s1_violations: 0,
            s2_violations: 0,
            naive_failures: Vec::new(),
        };
        for &y in y_grid {
            if !(y > 0.0) {
                return Err(Error::InvalidArgument { what: "y grid entry", value: y });
            }
            let s_right = self.argmax_affine(y, Side::Right)?;
            let s_left = self.argmax_affine(y, Side::Left)?;
            for &x in x_grid {
                report.pairs_checked += 1;
                // At x = 0 there is no left derivative; the boundary
                // convention slope_L(0) = +inf keeps S1 two-sided.
                let slope_left =
                    if x == 0.0 { f64::INFINITY } else { majorant.slope(x, Side::Left)? };
                let slope_right = majorant.slope(x, Side::Right)?;

                let s1_lhs = slope_left < y;
                let s1_rhs = s_right < x;
                if s1_lhs != s1_rhs {
                    report.s1_violations += 1;
                }

                let s2_lhs = slope_right <= y;
                let s2_rhs = s_left <= x;
                if s2_lhs != s2_rhs {
                    report.s2_violations += 1;
                }

                let naive_lhs = slope_left <= y;
                let naive_rhs = s_right <= x;
                if naive_lhs != naive_rhs {
                    report.naive_failures.push(NaiveWitness {
                        x,
                        y,
                        lhs: naive_lhs,
                        rhs: naive_rhs,
                    });
                }
            }
        }
        Ok(report)
    }
}

/// Least concave majorant: ordered hull vertices with per-segment slopes and
/// a terminal slope on `(last vertex, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Majorant {
    vertices: Vec<(f64, f64)>,
    slopes: Vec<f64>,
    terminal_slope: f64,
}

impl Majorant {
    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn terminal_slope(&self) -> f64 {
        self.terminal_slope
    }

    pub fn last_vertex(&self) -> (f64, f64) {
        *self.vertices.last().expect("hull is nonempty")
    }

    /// Piecewise-linear evaluation of the majorant.
    pub fn eval(&self, x: f64) -> f64 {
        let (x_last, y_last) = self.last_vertex();
        if x >= x_last {
            return y_last + self.terminal_slope * (x - x_last);
        }
        let idx = self.vertices.partition_point(|&(vx, _)| vx <= x);
        if idx == 0 {
            // x below the first vertex only if the step starts at knot 0.
            let (vx, vy) = self.vertices[0];
            return vy - self.slopes.first().copied().unwrap_or(0.0) * (vx - x);
        }
        let (vx, vy) = self.vertices[idx - 1];
        vy + self.slopes[idx - 1] * (x - vx)
    }

    /// One-sided derivative of the majorant at `x >= 0`.
    pub fn slope(&self, x: f64, side: Side) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::InvalidArgument { what: "slope x", value: x });
        }
        if x == 0.0 && side == Side::Left {
            return Err(Error::InvalidArgument { what: "left slope at", value: 0.0 });
        }
        let (x_last, _) = self.last_vertex();
        if x > x_last {
            return Ok(self.terminal_slope);
        }
        // Index of the first vertex with abscissa >= x.
        let idx = self.vertices.partition_point(|&(vx, _)| vx < x);
        let at_vertex = idx < self.vertices.len() && self.vertices[idx].0 == x;
        match side {
            Side::Left => {
                // Slope of the segment ending at or spanning x.
                Ok(self.slopes.get(idx.saturating_sub(1)).copied().unwrap_or(self.terminal_slope))
            }
            Side::Right => {
                let seg = if at_vertex { idx } else { idx.saturating_sub(1) };
                Ok(self.slopes.get(seg).copied().unwrap_or(self.terminal_slope))
            }
        }
    }
}

/// A `(x, y)` pair where the naive weak/weak relation came out two-sided
/// different.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveWitness {
    pub x: f64,
    pub y: f64,
    /// Truth of `{slope_L(x) <= y}`.
    pub lhs: bool,
    /// Truth of `{argmax_R(y) <= x}`.
    pub rhs: bool,
}

/// Outcome of a switching-relation grid check.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingReport {
    pub x_grid_len: usize,
    pub y_grid_len: usize,
    pub pairs_checked: usize,
    pub s1_violations: usize,
    pub s2_violations: usize,
    pub naive_failures: Vec<NaiveWitness>,
}

impl SwitchingReport {
    pub fn holds(&self) -> bool {
        self.s1_violations == 0 && self.s2_violations == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_21() -> StepFunction {
        StepFunction::new(vec![1.0, 2.0, 4.0], vec![1.0 / 3.0, 2.0 / 3.0, 1.0]).unwrap()
    }

    #[test]
    fn step_eval_is_right_continuous() {
        let s = example_21();
        assert_eq!(s.eval(0.0), 0.0);
        assert_eq!(s.eval(0.99), 0.0);
        assert_eq!(s.eval(1.0), 1.0 / 3.0);
        assert_eq!(s.eval(3.9), 2.0 / 3.0);
        assert_eq!(s.eval(4.0), 1.0);
        assert_eq!(s.eval(100.0), 1.0);
    }

    #[test]
    fn step_rejects_bad_input() {
        assert!(StepFunction::new(vec![], vec![]).is_err());
        assert!(StepFunction::new(vec![1.0, 1.0], vec![0.5, 1.0]).is_err());
        assert!(StepFunction::new(vec![1.0, 2.0], vec![1.0, 0.5]).is_err());
        assert!(StepFunction::new(vec![1.0], vec![0.5, 1.0]).is_err());
    }

    #[test]
    fn lcm_example_21() {
        // Observations (1, 2, 4): the hull drops the collinear corner at 1.
        let m = example_21().lcm();
        assert_eq!(m.vertices(), &[(0.0, 0.0), (2.0, 2.0 / 3.0), (4.0, 1.0)]);
        assert!((m.slopes()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.slopes()[1] - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(m.terminal_slope(), 0.0);
    }

    #[test]
    fn lcm_collinear_collapses_to_one_segment() {
        let s = StepFunction::new(vec![0.25, 0.5, 0.75], vec![1.0 / 3.0, 2.0 / 3.0, 1.0]).unwrap();
        let m = s.lcm();
        assert_eq!(m.vertices(), &[(0.0, 0.0), (0.75, 1.0)]);
        assert_eq!(m.slopes().len(), 1);
        assert!((m.slopes()[0] - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn slopes_example_21() {
        let m = example_21().lcm();
        assert!((m.slope(2.0, Side::Left).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.slope(2.0, Side::Right).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(m.slope(5.0, Side::Left).unwrap(), 0.0);
        assert_eq!(m.slope(5.0, Side::Right).unwrap(), 0.0);
        assert!(m.slope(0.0, Side::Left).is_err());
        assert!((m.slope(0.0, Side::Right).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn slope_single_segment_interior() {
        let s = StepFunction::new(vec![1.0], vec![1.0]).unwrap();
        let m = s.lcm();
        assert_eq!(m.slope(0.5, Side::Left).unwrap(), 1.0);
        assert_eq!(m.slope(0.5, Side::Right).unwrap(), 1.0);
    }

    #[test]
    fn argmax_example_21() {
        let s = example_21();
        assert_eq!(s.argmax_affine(0.1, Side::Right).unwrap(), 4.0);
        assert_eq!(s.argmax_affine(0.25, Side::Right).unwrap(), 2.0);
        assert_eq!(s.argmax_affine(0.5, Side::Right).unwrap(), 0.0);
        assert!(s.argmax_affine(0.0, Side::Right).is_err());
        assert!(s.argmax_affine(-1.0, Side::Left).is_err());
    }

    #[test]
    fn switching_example_21_naive_fails_at_x4() {
        let s = example_21();
        let report = s
            .verify_switching(&[0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0], &[0.1, 0.25, 0.5])
            .unwrap();
        assert!(report.holds());
        assert!(report
            .naive_failures
            .iter()
            .any(|w| w.x == 4.0 && w.y == 0.1 && !w.lhs && w.rhs));
    }

    #[test]
    fn switching_single_observation_clean() {
        let s = StepFunction::new(vec![1.0], vec![1.0]).unwrap();
        let report = s
            .verify_switching(&[0.0, 0.5, 1.0, 2.0], &[0.2, 0.5, 0.9, 1.1, 2.0])
            .unwrap();
        assert!(report.holds());
        assert_eq!(report.pairs_checked, 20);
    }

    #[test]
    fn majorant_eval_interpolates() {
        let m = example_21().lcm();
        assert_eq!(m.eval(0.0), 0.0);
        assert!((m.eval(1.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.eval(3.0) - (2.0 / 3.0 + 1.0 / 6.0)).abs() < 1e-15);
        assert_eq!(m.eval(4.0), 1.0);
        assert_eq!(m.eval(10.0), 1.0);
    }

    // Brute-force oracle: the LCM at a point is the smallest value of any
    // affine function with nonnegative slope dominating all corners (the
    // terminal flat tail rules out negative slopes). Candidate slopes are 0
    // and all pairwise corner slopes.
    fn hull_oracle(s: &StepFunction, q: f64) -> f64 {
        let mut pts = vec![(0.0, s.origin())];
        for (&x, &v) in s.knots().iter().zip(s.values().iter()) {
            if x > 0.0 {
                pts.push((x, v));
            } else {
                pts[0] = (x, v);
            }
        }
        let mut slopes = vec![0.0];
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let sl = (pts[j].1 - pts[i].1) / (pts[j].0 - pts[i].0);
                if sl >= 0.0 {
                    slopes.push(sl);
                }
            }
        }
        let mut best = f64::INFINITY;
        for b in slopes {
            let a = pts
                .iter()
                .map(|&(x, v)| v - b * x)
                .fold(f64::NEG_INFINITY, f64::max);
            best = best.min(a + b * q);
        }
        best
    }

    #[test]
    fn lcm_matches_bruteforce_oracle_on_random_inputs() {
        let mut rng = crate::rng::Stream::from_seed(0x5eed);
        for _ in 0..200 {
            let n = 1 + (rng.next_u64() % 12) as usize;
            let mut knots: Vec<f64> = (0..n).map(|_| rng.uniform_open() * 10.0).collect();
            knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
            knots.dedup();
            let mut values = Vec::with_capacity(knots.len());
            let mut acc = 0.0;
            for _ in 0..knots.len() {
                acc += rng.uniform_open();
                values.push(acc);
            }
            let s = StepFunction::new(knots.clone(), values).unwrap();
            let m = s.lcm();
            for &q in &knots {
                let want = hull_oracle(&s, q);
                let got = m.eval(q);
                assert!(
                    (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                    "hull mismatch at {q}: got {got}, oracle {want}"
                );
            }
        }
    }

    #[test]
    fn lcm_is_idempotent_on_its_own_vertices() {
        let mut rng = crate::rng::Stream::from_seed(77);
        for _ in 0..100 {
            let n = 2 + (rng.next_u64() % 20) as usize;
            let mut knots: Vec<f64> = (0..n).map(|_| rng.uniform_open() * 5.0).collect();
            knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
            knots.dedup();
            let mut values = Vec::with_capacity(knots.len());
            let mut acc = 0.0;
            for _ in 0..knots.len() {
                acc += rng.uniform_open();
                values.push(acc);
            }
            let m = StepFunction::new(knots, values).unwrap().lcm();
            let (vx, vy): (Vec<f64>, Vec<f64>) =
                m.vertices().iter().skip(1).copied().unzip();
            let again = StepFunction::new(vx, vy).unwrap().lcm();
            assert_eq!(again.vertices(), m.vertices());
        }
    }

    #[test]
    fn majorant_invariants_on_random_inputs() {
        let mut rng = crate::rng::Stream::from_seed(123);
        for _ in 0..200 {
            let n = 1 + (rng.next_u64() % 30) as usize;
            let mut knots: Vec<f64> = (0..n).map(|_| rng.uniform_open() * 3.0).collect();
            knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
            knots.dedup();
            let mut values = Vec::with_capacity(knots.len());
            let mut acc = 0.0;
            for _ in 0..knots.len() {
                acc += rng.uniform_open() / 3.0;
                values.push(acc);
            }
            let s = StepFunction::new(knots, values).unwrap();
            let m = s.lcm();
            // Slopes strictly decrease.
            for w in m.slopes().windows(2) {
                assert!(w[1] < w[0], "slopes not strictly decreasing: {:?}", m.slopes());
            }
            // Majorant dominates the step at the knots, touches at vertices.
            for (&x, &v) in s.knots().iter().zip(s.values().iter()) {
                assert!(m.eval(x) >= v - 1e-12 * v.abs().max(1.0));
            }
            for &(vx, vy) in m.vertices() {
                assert!((m.eval(vx) - vy).abs() < 1e-12);
                if vx > 0.0 {
                    assert_eq!(s.eval(vx), vy);
                }
            }
        }
    }
}
