use serde::{Deserialize, Serialize};

/// Residual statistics of one check.
///
/// `max_abs` and `rms` are taken over `|r_i| / scale`; `scale` is 1 for
/// absolute residuals. `pass` holds exactly when `max_abs <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub name: String,
    pub max_abs: f64,
    pub rms: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub grid_points: usize,
    pub scale: f64,
}

impl ResidualReport {
    pub fn from_residuals(
        name: impl Into<String>,
        residuals: &[f64],
        scale: f64,
        tolerance: f64,
    ) -> Self {
        let scale = if scale > 0.0 && scale.is_finite() {
            scale
        } else {
            1.0
        };
        let n = residuals.len();
        let mut max_abs = 0.0f64;
        let mut sum_sq = 0.0;
        for r in residuals {
            let v = r.abs() / scale;
            // NaN must never pass silently.
            if v.is_nan() {
                max_abs = f64::NAN;
            } else if !max_abs.is_nan() {
                max_abs = max_abs.max(v);
            }
            sum_sq += v * v;
        }
        let rms = if n == 0 { 0.0 } else { (sum_sq / n as f64).sqrt() };
        Self {
            name: name.into(),
            max_abs,
            rms,
            tolerance,
            pass: max_abs <= tolerance,
            grid_points: n,
            scale,
        }
    }

    /// The same statistics judged against another tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.max_abs <= tolerance;
        self
    }
}

/// Normalisation for differential-equation residuals: the largest summed
/// magnitude of the equation's terms on the grid, floored at 1.
///
/// Residuals are absolute while every term is `O(1)` or smaller and relative
/// to the dominant term once solutions grow (classically forbidden regions).
pub fn equation_scale<'a>(term_magnitudes: impl IntoIterator<Item = &'a [f64]>) -> f64 {
    let mut sums: Vec<f64> = Vec::new();
    for terms in term_magnitudes {
        if sums.is_empty() {
            sums = terms.iter().map(|t| t.abs()).collect();
        } else {
            for (s, t) in sums.iter_mut().zip(terms) {
                *s += t.abs();
            }
        }
    }
    sums.into_iter().fold(1.0, f64::max)
}
