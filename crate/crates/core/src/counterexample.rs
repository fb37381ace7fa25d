//! Variable-phase solutions of the nonlinear equation
//! `psi'' + k^2 psi = c1^2 / psi^3`.
//!
//! Take `psi = e^{iS}` with `S'' + c1^2 sin(4S) = 0` and
//! `k^2 = S'^2 + c1^2 cos(4S)`. Then `psi` solves the nonlinear equation for
//! any nonconstant `S`, while `calK = c1^2 (u/psi)^2 = c1^2 e^{-2iS} / N^2`
//! keeps unit-scaled modulus and a rotating phase. Constancy of `calK`
//! therefore holds only at the equilibria of the phase equation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interp::HermiteSpline;
use crate::milne::NODE_THRESHOLD;
use crate::ode::{self, DerivativeOrder, Grid, IntegratorConfig};
use crate::report::{equation_scale, ResidualReport};
use crate::schrodinger::{ComplexWaveFunction, KSquaredProfile, KSquaredSource};

/// Sampled solution of `S'' + c1^2 sin(4S) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PendulumPhase {
    grid: Grid,
    s: Vec<f64>,
    s_prime: Vec<f64>,
    c1: f64,
}

impl PendulumPhase {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn s_prime(&self) -> &[f64] {
        &self.s_prime
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// First integral `S'^2/2 - (c1^2/4) cos(4S)` at sample `i`.
    pub fn energy(&self, i: usize) -> f64 {
        pendulum_energy(self.s[i], self.s_prime[i], self.c1)
    }

    /// Drift of the first integral from its value at `x_start`, scaled by
    /// `1 + |E(x_start)|`.
    pub fn energy_report(&self, tolerance: f64) -> ResidualReport {
        let e0 = self.energy(0);
        let drift: Vec<f64> = (0..self.s.len()).map(|i| self.energy(i) - e0).collect();
        ResidualReport::from_residuals("energy-drift", &drift, 1.0 + e0.abs(), tolerance)
    }

    /// Largest excursion `max_i |S_i - S_0|`.
    pub fn excursion(&self) -> f64 {
        let s0 = self.s[0];
        self.s.iter().map(|s| (s - s0).abs()).fold(0.0, f64::max)
    }

    /// True when `S` does not change anywhere on the grid.
    pub fn is_constant(&self) -> bool {
        self.s.iter().all(|&s| s == self.s[0])
    }
}

fn pendulum_energy(s: f64, sp: f64, c1: f64) -> f64 {
    0.5 * sp * sp - 0.25 * c1 * c1 * (4.0 * s).cos()
}

/// Whether `(s0, 0)` is a rest point of the phase equation to rounding.
fn is_equilibrium(c1: f64, s0: f64, ds0: f64) -> bool {
    ds0 == 0.0 && (c1 == 0.0 || (4.0 * s0).sin().abs() <= 8.0 * f64::EPSILON * (4.0 * s0).abs().max(1.0))
}

/// Solves `S'' + c1^2 sin(4S) = 0` with `S(x_start) = s0`, `S'(x_start) = ds0`.
///
/// Rest points (`ds0 = 0`, `sin(4 s0) = 0` to rounding) return the exact
/// constant solution.
pub fn solve_pendulum_phase(
    c1: f64,
    s0: f64,
    ds0: f64,
    grid: &Grid,
    cfg: &IntegratorConfig,
) -> Result<PendulumPhase> {
    if !(c1.is_finite() && s0.is_finite() && ds0.is_finite()) {
        return Err(Error::InvalidParameter("c1, S0 and dS0 must be finite".into()));
    }
    let n = grid.n_points();
    if is_equilibrium(c1, s0, ds0) {
        return Ok(PendulumPhase {
            grid: *grid,
            s: vec![s0; n],
            s_prime: vec![0.0; n],
            c1,
        });
    }
    let c1sq = c1 * c1;
    let rhs = |_x: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = -c1sq * (4.0 * y[0]).sin();
    };
    let traj = ode::integrate(rhs, grid.x_start(), &[s0, ds0], grid, cfg)?;
    Ok(PendulumPhase {
        grid: *grid,
        s: traj.component(0),
        s_prime: traj.component(1),
        c1,
    })
}

/// `k^2 = S'^2 + c1^2 cos(4S)`, with `S` and `S'` cubic-Hermite interpolated
/// between samples (slopes `S'` and `S'' = -c1^2 sin(4S)`).
pub fn k_squared_from_phase(phase: &PendulumPhase) -> KSquaredProfile {
    let c1 = phase.c1;
    let c1sq = c1 * c1;
    let s_spline = HermiteSpline::new(phase.grid, phase.s.clone(), phase.s_prime.clone());
    let accel: Vec<f64> = phase.s.iter().map(|s| -c1sq * (4.0 * s).sin()).collect();
    let sp_spline = HermiteSpline::new(phase.grid, phase.s_prime.clone(), accel);
    KSquaredProfile::with_source(
        move |x| {
            let s = s_spline.eval(x);
            let sp = sp_spline.eval(x);
            sp * sp + c1sq * (4.0 * s).cos()
        },
        KSquaredSource::FromPhase { c1 },
    )
}

/// `psi = e^{iS}`, `psi' = i S' e^{iS}`.
pub fn compose_counterexample_psi(phase: &PendulumPhase) -> ComplexWaveFunction {
    let psi: Vec<Complex64> = phase.s.iter().map(|s| Complex64::from_polar(1.0, *s)).collect();
    let psi_prime = psi
        .iter()
        .zip(&phase.s_prime)
        .map(|(z, sp)| Complex64::new(0.0, *sp) * z)
        .collect();
    ComplexWaveFunction::new(phase.grid, psi, psi_prime)
        .expect("finite phase composes to a finite wave function")
}

fn check_nodeless(psi: &ComplexWaveFunction) -> Result<Vec<f64>> {
    let modulus = psi.modulus();
    let peak = modulus.iter().fold(0.0, |m: f64, v| m.max(*v));
    for (i, m) in modulus.iter().enumerate() {
        if *m <= NODE_THRESHOLD * peak {
            return Err(Error::NodeEncountered {
                x: psi.grid().x(i),
                modulus: *m,
            });
        }
    }
    Ok(modulus)
}

/// Finite-difference residual of `psi'' + k^2 psi - c1^2 / psi^3 = 0`.
pub fn nonlinear_milne_residual(
    psi: &ComplexWaveFunction,
    k2: &KSquaredProfile,
    c1: f64,
    tolerance: f64,
) -> Result<ResidualReport> {
    check_nodeless(psi)?;
    let grid = psi.grid();
    let d2 = ode::fd_derivative(psi.psi(), grid, DerivativeOrder::Second)?;
    let k2s = k2.sample(grid);
    let c1sq = c1 * c1;
    let kpsi: Vec<Complex64> = psi.psi().iter().zip(&k2s).map(|(p, k)| p * k).collect();
    let inv: Vec<Complex64> = psi.psi().iter().map(|p| c1sq / (p * p * p)).collect();
    let res: Vec<f64> = (0..d2.len()).map(|i| (d2[i] + kpsi[i] - inv[i]).norm()).collect();
    let mags = |v: &[Complex64]| v.iter().map(|z| z.norm()).collect::<Vec<_>>();
    let scale = equation_scale([&mags(&d2)[..], &mags(&kpsi)[..], &mags(&inv)[..]]);
    Ok(ResidualReport::from_residuals(
        "nonlinear-milne",
        &res,
        scale,
        tolerance,
    ))
}

/// Sampled `calK` with its two constancy checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CalKSamples {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    /// Spread of `|calK|` about its mean, relative to that mean.
    pub modulus_report: ResidualReport,
    /// Spread of `calK` about its mean, relative to `c1^2 / N^2`.
    pub constancy_report: ResidualReport,
}

impl CalKSamples {
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    /// `max_i |calK_i - mean(calK)|`, unscaled.
    pub fn spread(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|k| (k - m).norm()).fold(0.0, f64::max)
    }
}

/// `calK = c1^2 (u/psi)^2` with `u = |psi| / N`.
///
/// Both reports use `tolerance`. For nonconstant phase the constancy report
/// is expected to fail.
pub fn evaluate_calk(
    psi: &ComplexWaveFunction,
    c1: f64,
    n: f64,
    tolerance: f64,
) -> Result<CalKSamples> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::InvalidParameter(format!("N must be positive, got {n}")));
    }
    let modulus = check_nodeless(psi)?;
    let c1sq = c1 * c1;
    let values: Vec<Complex64> = psi
        .psi()
        .iter()
        .zip(&modulus)
        .map(|(p, m)| {
            let ratio = (m / n) / p;
            ratio * ratio * c1sq
        })
        .collect();
    let len = values.len() as f64;
    let norms: Vec<f64> = values.iter().map(|k| k.norm()).collect();
    let mean_norm = norms.iter().sum::<f64>() / len;
    let mean = values.iter().sum::<Complex64>() / len;
    let modulus_dev: Vec<f64> = norms.iter().map(|v| v - mean_norm).collect();
    let spread: Vec<f64> = values.iter().map(|k| (k - mean).norm()).collect();
    Ok(CalKSamples {
        grid: *psi.grid(),
        modulus_report: ResidualReport::from_residuals(
            "calK-modulus",
            &modulus_dev,
            mean_norm,
            tolerance,
        ),
        constancy_report: ResidualReport::from_residuals(
            "calK-constancy",
            &spread,
            c1sq / (n * n),
            tolerance,
        ),
        values,
    })
}
