//! Piecewise Hermite interpolation of grid samples.

use crate::ode::Grid;

/// Hermite interpolant through `(x_i, y_i, y'_i)`, cubic by default and
/// quintic when second derivatives are supplied.
///
/// Exact at the grid points; off-grid error is `O(h^4)` (cubic) or `O(h^6)`
/// (quintic). Outside the grid (beyond a millionth of a step) evaluation
/// returns `NaN`.
#[derive(Debug, Clone)]
pub struct HermiteSpline {
    grid: Grid,
    values: Vec<f64>,
    slopes: Vec<f64>,
    curvatures: Option<Vec<f64>>,
}

impl HermiteSpline {
    pub fn new(grid: Grid, values: Vec<f64>, slopes: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.n_points());
        assert_eq!(slopes.len(), grid.n_points());
        Self {
            grid,
            values,
            slopes,
            curvatures: None,
        }
    }

    pub fn quintic(grid: Grid, values: Vec<f64>, slopes: Vec<f64>, curvatures: Vec<f64>) -> Self {
        assert_eq!(curvatures.len(), grid.n_points());
        Self {
            curvatures: Some(curvatures),
            ..Self::new(grid, values, slopes)
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let Some((i, t)) = self.grid.locate(x) else {
            return f64::NAN;
        };
        if t == 0.0 {
            return self.values[i];
        }
        if t == 1.0 {
            return self.values[i + 1];
        }
        let h = self.grid.step();
        let t2 = t * t;
        let t3 = t2 * t;
        if let Some(curv) = &self.curvatures {
            let t4 = t3 * t;
            let t5 = t4 * t;
            let p0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
            let d0 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
            let q0 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
            let p1 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
            let d1 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
            let q1 = 0.5 * (t3 - 2.0 * t4 + t5);
            return p0 * self.values[i]
                + d0 * h * self.slopes[i]
                + q0 * h * h * curv[i]
                + p1 * self.values[i + 1]
                + d1 * h * self.slopes[i + 1]
                + q1 * h * h * curv[i + 1];
        }
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.values[i]
            + h10 * h * self.slopes[i]
            + h01 * self.values[i + 1]
            + h11 * h * self.slopes[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_and_grid_values() {
        let g = Grid::new(-1.0, 2.0, 7).unwrap();
        let f = |x: f64| x * x * x - 2.0 * x + 0.5;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let s = HermiteSpline::new(
            g,
            g.points().iter().map(|&x| f(x)).collect(),
            g.points().iter().map(|&x| df(x)).collect(),
        );
        for k in 0..=60 {
            let x = -1.0 + 3.0 * k as f64 / 60.0;
            assert!((s.eval(x) - f(x)).abs() < 1e-12);
        }
        assert!(s.eval(2.5).is_nan());
        assert!(s.eval(-1.5).is_nan());
    }

    #[test]
    fn fourth_order_off_grid() {
        let mut errs = Vec::new();
        for n in [21, 41] {
            let g = Grid::new(0.0, 3.0, n).unwrap();
            let s = HermiteSpline::new(
                g,
                g.points().iter().map(|x| x.sin()).collect(),
                g.points().iter().map(|x| x.cos()).collect(),
            );
            let e = (0..n - 1)
                .map(|i| {
                    let x = g.x(i) + 0.5 * g.step();
                    (s.eval(x) - x.sin()).abs()
                })
                .fold(0.0, f64::max);
            errs.push(e);
        }
        let ratio = errs[0] / errs[1];
        assert!((14.0..18.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn quintic_reproduces_quintics() {
        let g = Grid::new(-1.0, 2.0, 5).unwrap();
        let f = |x: f64| x.powi(5) - 3.0 * x.powi(3) + x;
        let df = |x: f64| 5.0 * x.powi(4) - 9.0 * x * x + 1.0;
        let d2f = |x: f64| 20.0 * x.powi(3) - 18.0 * x;
        let pts = g.points();
        let s = HermiteSpline::quintic(
            g,
            pts.iter().map(|x| f(*x)).collect(),
            pts.iter().map(|x| df(*x)).collect(),
            pts.iter().map(|x| d2f(*x)).collect(),
        );
        for k in 0..=60 {
            let x = -1.0 + 3.0 * k as f64 / 60.0;
            assert!((s.eval(x) - f(x)).abs() < 1e-11, "x = {x}");
        }
    }

    #[test]
    fn quintic_sixth_order_off_grid() {
        let mut errs = Vec::new();
        for n in [21, 41] {
            let g = Grid::new(0.0, 3.0, n).unwrap();
            let pts = g.points();
            let s = HermiteSpline::quintic(
                g,
                pts.iter().map(|x| x.sin()).collect(),
                pts.iter().map(|x| x.cos()).collect(),
                pts.iter().map(|x| -x.sin()).collect(),
            );
            let e = (0..n - 1)
                .map(|i| {
                    let x = g.x(i) + 0.5 * g.step();
                    (s.eval(x) - x.sin()).abs()
                })
                .fold(0.0, f64::max);
            errs.push(e);
        }
        let ratio = errs[0] / errs[1];
        assert!((56.0..72.0).contains(&ratio), "{ratio}");
    }
}
