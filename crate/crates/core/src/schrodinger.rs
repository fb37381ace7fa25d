//! The linear equation `psi'' + k^2(x) psi = 0` with `k^2 = 2m(E - V)/hbar^2`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{self, DerivativeOrder, Grid, IntegratorConfig};
use crate::report::{equation_scale, ResidualReport};

/// Mass, reduced Planck constant and energy in dimensionless units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub mass: f64,
    pub hbar: f64,
    pub energy: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
            energy: 0.5,
        }
    }
}

impl PhysicalParams {
    pub fn new(mass: f64, hbar: f64, energy: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        if !energy.is_finite() {
            return Err(Error::InvalidParameter("energy must be finite".into()));
        }
        Ok(Self { mass, hbar, energy })
    }

    /// Unit mass and `hbar` at the given energy.
    pub fn with_energy(energy: f64) -> Self {
        Self {
            energy,
            ..Self::default()
        }
    }
}

/// Potential sampled on a uniform grid, linearly interpolated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedPotential {
    grid: Grid,
    values: Vec<f64>,
}

impl TabulatedPotential {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::GridMismatch);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("tabulated potential must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.grid.locate(x) {
            Some((i, 0.0)) => self.values[i],
            Some((i, t)) => (1.0 - t) * self.values[i] + t * self.values[i + 1],
            None => f64::NAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Potential {
    Free,
    Constant(f64),
    /// `V = m omega^2 x^2 / 2`
    Harmonic { omega: f64 },
    /// `V = slope * x`
    Linear { slope: f64 },
    Tabulated(TabulatedPotential),
}

impl Potential {
    pub fn value(&self, x: f64, mass: f64) -> f64 {
        match self {
            Potential::Free => 0.0,
            Potential::Constant(v0) => *v0,
            Potential::Harmonic { omega } => 0.5 * mass * omega * omega * x * x,
            Potential::Linear { slope } => slope * x,
            Potential::Tabulated(t) => t.eval(x),
        }
    }

    /// Whether the potential is defined on all of `grid`.
    pub fn covers(&self, grid: &Grid) -> bool {
        match self {
            Potential::Tabulated(t) => {
                let h = t.grid().step();
                grid.x_start() >= t.grid().x_start() - 1e-6 * h
                    && grid.x_end() <= t.grid().x_end() + 1e-6 * h
            }
            _ => true,
        }
    }
}

/// Where a `k^2` profile came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KSquaredSource {
    FromPotential {
        potential: Potential,
        params: PhysicalParams,
    },
    /// Derived as `S'^2 + c1^2 cos(4S)` from a pendulum-type phase.
    FromPhase { c1: f64 },
    Direct,
}

/// The coefficient `k^2(x)`.
#[derive(Clone)]
pub struct KSquaredProfile {
    evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    source: KSquaredSource,
}

impl fmt::Debug for KSquaredProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KSquaredProfile")
            .field("source", &self.source)
            .finish_non_exhaustive()
    }
}

impl KSquaredProfile {
    pub fn direct(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            evaluator: Arc::new(f),
            source: KSquaredSource::Direct,
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::direct(move |_| value)
    }

    pub(crate) fn with_source(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        source: KSquaredSource,
    ) -> Self {
        Self {
            evaluator: Arc::new(f),
            source,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.evaluator)(x)
    }

    pub fn source(&self) -> &KSquaredSource {
        &self.source
    }

    pub fn sample(&self, grid: &Grid) -> Vec<f64> {
        grid.points().into_iter().map(|x| self.eval(x)).collect()
    }

    /// Fails unless `k^2` is defined and finite at every point of `grid`.
    pub fn check_on(&self, grid: &Grid) -> Result<()> {
        if let KSquaredSource::FromPotential { potential, .. } = &self.source {
            if !potential.covers(grid) {
                return Err(Error::InvalidParameter(
                    "tabulated potential does not cover the working grid".into(),
                ));
            }
        }
        for x in grid.points() {
            if !self.eval(x).is_finite() {
                return Err(Error::InvalidParameter(format!("k^2 is not finite at x = {x}")));
            }
        }
        Ok(())
    }

    /// `base` scaled up tenfold for linearly interpolated potentials, whose
    /// `k^2` is only piecewise smooth.
    pub fn residual_tolerance(&self, base: f64) -> f64 {
        match &self.source {
            KSquaredSource::FromPotential {
                potential: Potential::Tabulated(_),
                ..
            } => 10.0 * base,
            _ => base,
        }
    }
}

/// `k^2(x) = 2m (E - V(x)) / hbar^2`.
pub fn k_squared(potential: &Potential, params: &PhysicalParams) -> KSquaredProfile {
    let pot = potential.clone();
    let p = *params;
    KSquaredProfile::with_source(
        move |x| 2.0 * p.mass * (p.energy - pot.value(x, p.mass)) / (p.hbar * p.hbar),
        KSquaredSource::FromPotential {
            potential: potential.clone(),
            params: *params,
        },
    )
}

/// Complex samples of `psi` and `psi'` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexWaveFunction {
    grid: Grid,
    psi: Vec<Complex64>,
    psi_prime: Vec<Complex64>,
}

impl ComplexWaveFunction {
    pub fn new(grid: Grid, psi: Vec<Complex64>, psi_prime: Vec<Complex64>) -> Result<Self> {
        if psi.len() != grid.n_points() || psi_prime.len() != grid.n_points() {
            return Err(Error::GridMismatch);
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if let Some(i) = (0..psi.len()).find(|&i| !finite(&psi[i]) || !finite(&psi_prime[i])) {
            return Err(Error::NonFiniteState { x: grid.x(i) });
        }
        Ok(Self {
            grid,
            psi,
            psi_prime,
        })
    }

    pub fn from_real(grid: Grid, f: &[f64], f_prime: &[f64]) -> Result<Self> {
        Self::new(
            grid,
            f.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            f_prime.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn psi(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn psi_prime(&self) -> &[Complex64] {
        &self.psi_prime
    }

    pub fn modulus(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.norm()).collect()
    }

    pub fn real_part(&self) -> Self {
        Self {
            grid: self.grid,
            psi: self.psi.iter().map(|z| Complex64::new(z.re, 0.0)).collect(),
            psi_prime: self.psi_prime.iter().map(|z| Complex64::new(z.re, 0.0)).collect(),
        }
    }

    pub fn imag_part(&self) -> Self {
        Self {
            grid: self.grid,
            psi: self.psi.iter().map(|z| Complex64::new(z.im, 0.0)).collect(),
            psi_prime: self.psi_prime.iter().map(|z| Complex64::new(z.im, 0.0)).collect(),
        }
    }

    /// True when every imaginary part is at most `rel_tol` times the
    /// largest sample magnitude.
    pub fn is_real(&self, rel_tol: f64) -> bool {
        let scale = self
            .psi
            .iter()
            .chain(&self.psi_prime)
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        self.psi
            .iter()
            .chain(&self.psi_prime)
            .all(|z| z.im.abs() <= rel_tol * scale)
    }
}

/// Solves `psi'' + k^2 psi = 0` from data at the grid start.
pub fn solve_linear(
    k2: &KSquaredProfile,
    psi0: Complex64,
    dpsi0: Complex64,
    grid: &Grid,
    cfg: &IntegratorConfig,
) -> Result<ComplexWaveFunction> {
    solve_linear_from(k2, grid.x_start(), psi0, dpsi0, grid, cfg)
}

/// Solves `psi'' + k^2 psi = 0` with `psi(x0) = psi0`, `psi'(x0) = dpsi0`,
/// where `x0` is any grid point. Integration runs outward from `x0`.
pub fn solve_linear_from(
    k2: &KSquaredProfile,
    x0: f64,
    psi0: Complex64,
    dpsi0: Complex64,
    grid: &Grid,
    cfg: &IntegratorConfig,
) -> Result<ComplexWaveFunction> {
    if psi0 == Complex64::new(0.0, 0.0) && dpsi0 == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidParameter(
            "initial data (0, 0) gives the trivial solution".into(),
        ));
    }
    let anchor = grid
        .index_of(x0)
        .ok_or_else(|| Error::InvalidParameter(format!("x0 = {x0} is not a grid point")))?;
    k2.check_on(grid)?;
    let rhs = |x: f64, y: &[Complex64], dy: &mut [Complex64]| {
        dy[0] = y[1];
        dy[1] = -y[0] * k2.eval(x);
    };
    let traj = ode::integrate_from(rhs, anchor, &[psi0, dpsi0], grid, cfg)?;
    ComplexWaveFunction::new(*grid, traj.component(0), traj.component(1))
}

/// Pointwise Wronskian `f g' - f' g` and its spread.
#[derive(Debug, Clone, PartialEq)]
pub struct WronskianReport {
    pub values: Vec<Complex64>,
    pub mean: Complex64,
    /// `max_i |W_i - mean|`
    pub max_deviation: f64,
}

pub fn wronskian(f: &ComplexWaveFunction, g: &ComplexWaveFunction) -> Result<WronskianReport> {
    f.grid.ensure_same(&g.grid)?;
    let values: Vec<Complex64> = (0..f.psi.len())
        .map(|i| f.psi[i] * g.psi_prime[i] - f.psi_prime[i] * g.psi[i])
        .collect();
    let mean = values.iter().sum::<Complex64>() / values.len() as f64;
    let max_deviation = values.iter().map(|w| (w - mean).norm()).fold(0.0, f64::max);
    Ok(WronskianReport {
        values,
        mean,
        max_deviation,
    })
}

/// Pointwise `alpha f + beta g`, values and derivatives alike.
pub fn superpose(
    f: &ComplexWaveFunction,
    g: &ComplexWaveFunction,
    alpha: Complex64,
    beta: Complex64,
) -> Result<ComplexWaveFunction> {
    f.grid.ensure_same(&g.grid)?;
    let psi = f.psi.iter().zip(&g.psi).map(|(a, b)| alpha * a + beta * b).collect();
    let psi_prime = f
        .psi_prime
        .iter()
        .zip(&g.psi_prime)
        .map(|(a, b)| alpha * a + beta * b)
        .collect();
    ComplexWaveFunction::new(f.grid, psi, psi_prime)
}

/// Finite-difference residual of `psi'' + k^2 psi = 0`.
pub fn linear_residual(
    psi: &ComplexWaveFunction,
    k2: &KSquaredProfile,
    tolerance: f64,
) -> Result<ResidualReport> {
    let grid = psi.grid();
    let d2 = ode::fd_derivative(psi.psi(), grid, DerivativeOrder::Second)?;
    let k2s = k2.sample(grid);
    let kpsi: Vec<Complex64> = psi.psi().iter().zip(&k2s).map(|(p, k)| p * k).collect();
    let residuals: Vec<f64> = d2.iter().zip(&kpsi).map(|(a, b)| (a + b).norm()).collect();
    let t1: Vec<f64> = d2.iter().map(|z| z.norm()).collect();
    let t2: Vec<f64> = kpsi.iter().map(|z| z.norm()).collect();
    let scale = equation_scale([&t1[..], &t2[..]]);
    Ok(ResidualReport::from_residuals(
        "schrodinger",
        &residuals,
        scale,
        tolerance,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn k_squared_catalog() {
        let unit = PhysicalParams::with_energy(0.5);
        let free = k_squared(&Potential::Free, &unit);
        assert_eq!(free.eval(-3.0), 1.0);
        assert_eq!(free.eval(7.0), 1.0);
        let ho = k_squared(&Potential::Harmonic { omega: 1.0 }, &unit);
        assert_eq!(ho.eval(0.0), 1.0);
        assert_eq!(ho.eval(1.0), 0.0);
        let lin = k_squared(&Potential::Linear { slope: 1.0 }, &PhysicalParams::with_energy(0.0));
        for x in [-2.0, 0.0, 0.5, 3.0] {
            assert_eq!(lin.eval(x), -2.0 * x);
        }
        let heavy = PhysicalParams::new(2.0, 0.5, 1.0).unwrap();
        let k = k_squared(&Potential::Constant(0.25), &heavy);
        assert_eq!(k.eval(0.0), 2.0 * 2.0 * 0.75 / 0.25);
    }

    #[test]
    fn params_validation() {
        assert!(PhysicalParams::new(0.0, 1.0, 0.0).is_err());
        assert!(PhysicalParams::new(1.0, -1.0, 0.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn tabulated_interpolates_linearly() {
        let g = Grid::new(0.0, 2.0, 3).unwrap();
        let t = TabulatedPotential::new(g, vec![0.0, 1.0, 4.0]).unwrap();
        assert_eq!(t.eval(0.5), 0.5);
        assert_eq!(t.eval(1.5), 2.5);
        assert!(t.eval(3.0).is_nan());
        let pot = Potential::Tabulated(t);
        assert!(pot.covers(&Grid::new(0.5, 2.0, 10).unwrap()));
        assert!(!pot.covers(&Grid::new(0.0, 3.0, 10).unwrap()));
        let k2 = k_squared(&pot, &PhysicalParams::default());
        assert!((k2.residual_tolerance(1e-6) - 1e-5).abs() < 1e-20);
        let wide = Grid::new(-1.0, 2.0, 31).unwrap();
        assert!(solve_linear(&k2, c(1.0, 0.0), c(0.0, 0.0), &wide, &IntegratorConfig::default())
            .is_err());
    }

    #[test]
    fn plane_wave() {
        let g = Grid::new(0.0, PI, 1001).unwrap();
        let k2 = KSquaredProfile::constant(1.0);
        let psi = solve_linear(&k2, c(1.0, 0.0), c(0.0, 1.0), &g, &IntegratorConfig::default())
            .unwrap();
        assert!((psi.psi()[1000] - c(-1.0, 0.0)).norm() < 1e-8);
        let cosine =
            solve_linear(&k2, c(1.0, 0.0), c(0.0, 0.0), &g, &IntegratorConfig::default()).unwrap();
        for (i, z) in cosine.psi().iter().enumerate() {
            assert!((z.re - g.x(i).cos()).abs() < 1e-10 && z.im == 0.0);
        }
    }

    #[test]
    fn harmonic_ground_state_is_gaussian() {
        let g = Grid::new(-5.0, 5.0, 4001).unwrap();
        let k2 = k_squared(&Potential::Harmonic { omega: 1.0 }, &PhysicalParams::with_energy(0.5));
        let psi = solve_linear_from(&k2, 0.0, c(1.0, 0.0), c(0.0, 0.0), &g, &IntegratorConfig::default())
            .unwrap();
        let err = (0..g.n_points())
            .map(|i| (psi.psi()[i].re - (-0.5 * g.x(i).powi(2)).exp()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "max deviation {err}");
    }

    #[test]
    fn rejects_trivial_data_and_off_grid_anchor() {
        let g = Grid::new(0.0, 1.0, 11).unwrap();
        let k2 = KSquaredProfile::constant(1.0);
        let cfg = IntegratorConfig::default();
        assert!(solve_linear(&k2, c(0.0, 0.0), c(0.0, 0.0), &g, &cfg).is_err());
        assert!(solve_linear_from(&k2, 0.55, c(1.0, 0.0), c(0.0, 0.0), &g, &cfg).is_err());
    }

    #[test]
    fn wronskian_of_cos_sin() {
        let g = Grid::new(0.0, 10.0, 1001).unwrap();
        let k2 = KSquaredProfile::constant(1.0);
        let cfg = IntegratorConfig::default();
        let f = solve_linear(&k2, c(1.0, 0.0), c(0.0, 0.0), &g, &cfg).unwrap();
        let s = solve_linear(&k2, c(0.0, 0.0), c(1.0, 0.0), &g, &cfg).unwrap();
        let w = wronskian(&f, &s).unwrap();
        assert!((w.mean - c(1.0, 0.0)).norm() < 1e-9);
        assert!(w.max_deviation < 1e-9);
        let same = wronskian(&f, &f).unwrap();
        assert!(same.values.iter().all(|z| z.norm() == 0.0));
        let other = Grid::new(0.0, 10.0, 1000).unwrap();
        let f2 = solve_linear(&k2, c(1.0, 0.0), c(0.0, 0.0), &other, &cfg).unwrap();
        assert_eq!(wronskian(&f, &f2).unwrap_err(), Error::GridMismatch);
    }

    #[test]
    fn superpose_builds_plane_wave() {
        let g = Grid::new(0.0, 5.0, 501).unwrap();
        let k2 = KSquaredProfile::constant(1.0);
        let cfg = IntegratorConfig::default();
        let f = solve_linear(&k2, c(1.0, 0.0), c(0.0, 0.0), &g, &cfg).unwrap();
        let s = solve_linear(&k2, c(0.0, 0.0), c(1.0, 0.0), &g, &cfg).unwrap();
        let psi = superpose(&f, &s, c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        for (i, z) in psi.psi().iter().enumerate() {
            assert!((z - Complex64::from_polar(1.0, g.x(i))).norm() < 1e-9);
        }
        let same = superpose(&f, &s, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(same, f);
    }

    #[test]
    fn residual_is_fourth_order() {
        let k2 = k_squared(&Potential::Harmonic { omega: 1.0 }, &PhysicalParams::with_energy(0.5));
        let cfg = IntegratorConfig::default();
        let mut g = Grid::new(-3.0, 3.0, 121).unwrap();
        let mut errs = Vec::new();
        let mut steps = Vec::new();
        for _ in 0..4 {
            let psi = solve_linear(&k2, c(1.0, 0.3), c(-0.2, 0.7), &g, &cfg).unwrap();
            errs.push(linear_residual(&psi, &k2, 1e-6).unwrap().max_abs);
            steps.push(g.step());
            g = g.refined();
        }
        let p = ode::observed_order(&steps, &errs);
        assert!(p >= 3.5, "order {p}, errors {errs:?}");
    }
}
