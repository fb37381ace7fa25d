//! Amplitude-phase form `psi = N u e^{iS}` of the linear equation.
//!
//! A complex solution of `psi'' + k^2 psi = 0` with nonzero phase current
//! splits into a positive amplitude `u` obeying the Milne equation
//! `u'' + k^2 u = c^2 / u^3` and a phase with `S' = c / u^2`. The module
//! builds such triples in both directions (from real solution pairs and
//! from a given complex `psi`) and checks every identity relating them,
//! including the vanishing of
//!
//! ```text
//! K = c^2 (psi/u)^2 + (psi' u - u' psi)^2.
//! ```
//!
//! `K` is a cancellation of two terms of modulus `c^2 N^2`, so its report is
//! scaled by that magnitude.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interp::HermiteSpline;
use crate::ode::{self, DerivativeOrder, Grid, IntegratorConfig};
use crate::report::{equation_scale, ResidualReport};
use crate::schrodinger::{ComplexWaveFunction, KSquaredProfile};

/// Threshold, relative to the largest sample, below which `|psi|` counts as
/// a node.
pub const NODE_THRESHOLD: f64 = 1e-12;

/// Positive amplitude `u`, its derivative, and the Milne constant `c`.
///
/// `c = 0` is allowed and marks the degenerate real-`psi` case.
#[derive(Debug, Clone, PartialEq)]
pub struct MilneSolution {
    grid: Grid,
    u: Vec<f64>,
    u_prime: Vec<f64>,
    c: f64,
}

impl MilneSolution {
    pub fn new(grid: Grid, u: Vec<f64>, u_prime: Vec<f64>, c: f64) -> Result<Self> {
        if u.len() != grid.n_points() || u_prime.len() != grid.n_points() {
            return Err(Error::GridMismatch);
        }
        if !c.is_finite() {
            return Err(Error::InvalidParameter("Milne constant must be finite".into()));
        }
        for i in 0..u.len() {
            if !u_prime[i].is_finite() || !u[i].is_finite() {
                return Err(Error::NonFiniteState { x: grid.x(i) });
            }
            if u[i] <= 0.0 {
                return Err(Error::AmplitudeCollapse { x: grid.x(i) });
            }
        }
        Ok(Self {
            grid,
            u,
            u_prime,
            c,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn u_prime(&self) -> &[f64] {
        &self.u_prime
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// Continuous (unwrapped) phase and its derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunction {
    grid: Grid,
    s: Vec<f64>,
    s_prime: Vec<f64>,
}

impl PhaseFunction {
    pub fn new(grid: Grid, s: Vec<f64>, s_prime: Vec<f64>) -> Result<Self> {
        if s.len() != grid.n_points() || s_prime.len() != grid.n_points() {
            return Err(Error::GridMismatch);
        }
        for i in 0..s.len() {
            if !s[i].is_finite() || !s_prime[i].is_finite() {
                return Err(Error::NonFiniteState { x: grid.x(i) });
            }
            if i + 1 < s.len() && (s[i + 1] - s[i]).abs() >= PI {
                return Err(Error::UnresolvedPhase { x: grid.x(i) });
            }
        }
        Ok(Self { grid, s, s_prime })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn s_prime(&self) -> &[f64] {
        &self.s_prime
    }
}

/// `(N, u, S)` with `S' = c / u^2` on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarTriple {
    n: f64,
    amp: MilneSolution,
    phase: PhaseFunction,
}

impl PolarTriple {
    pub fn new(n: f64, amp: MilneSolution, phase: PhaseFunction) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidParameter(format!("N must be positive, got {n}")));
        }
        amp.grid.ensure_same(&phase.grid)?;
        let current: Vec<f64> = amp
            .u
            .iter()
            .zip(&phase.s_prime)
            .map(|(u, sp)| sp * u * u)
            .collect();
        let scale = current.iter().fold(amp.c.abs(), |m, v| m.max(v.abs()));
        for (i, j) in current.iter().enumerate() {
            if (j - amp.c).abs() > 1e-8 * scale {
                return Err(Error::InvalidParameter(format!(
                    "S' u^2 = {j} differs from c = {} at x = {}",
                    amp.c,
                    amp.grid.x(i)
                )));
            }
        }
        Ok(Self { n, amp, phase })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn amp(&self) -> &MilneSolution {
        &self.amp
    }

    pub fn phase(&self) -> &PhaseFunction {
        &self.phase
    }

    pub fn grid(&self) -> &Grid {
        &self.amp.grid
    }
}

/// Solves `u'' + k^2 u = c^2 / u^3` from data at the grid start.
pub fn solve_milne(
    k2: &KSquaredProfile,
    c: f64,
    u0: f64,
    du0: f64,
    grid: &Grid,
    cfg: &IntegratorConfig,
) -> Result<MilneSolution> {
    solve_milne_from(k2, c, grid.x_start(), u0, du0, grid, cfg)
}

/// As [`solve_milne`], with the data given at the grid point `x0`.
pub fn solve_milne_from(
    k2: &KSquaredProfile,
    c: f64,
    x0: f64,
    u0: f64,
    du0: f64,
    grid: &Grid,
    cfg: &IntegratorConfig,
) -> Result<MilneSolution> {
    if !(u0 > 0.0 && u0.is_finite()) {
        return Err(Error::InvalidParameter(format!("u0 must be positive, got {u0}")));
    }
    if !du0.is_finite() || !c.is_finite() {
        return Err(Error::InvalidParameter("du0 and c must be finite".into()));
    }
    let anchor = grid
        .index_of(x0)
        .ok_or_else(|| Error::InvalidParameter(format!("x0 = {x0} is not a grid point")))?;
    k2.check_on(grid)?;
    let c2 = c * c;
    let rhs = |x: f64, y: &[f64], dy: &mut [f64]| {
        let u = y[0];
        dy[0] = y[1];
        // Leaving u > 0 is a collapse, never a valid continuation.
        dy[1] = if u > 0.0 {
            c2 / (u * u * u) - k2.eval(x) * u
        } else {
            f64::NAN
        };
    };
    let traj = ode::integrate_from(rhs, anchor, &[u0, du0], grid, cfg).map_err(|e| match e {
        Error::NonFiniteState { x } => Error::AmplitudeCollapse { x },
        other => other,
    })?;
    MilneSolution::new(*grid, traj.component(0), traj.component(1), c)
}

fn real_samples(w: &ComplexWaveFunction) -> Result<(Vec<f64>, Vec<f64>)> {
    if !w.is_real(1e-12) {
        return Err(Error::InvalidParameter(
            "amplitude_from_pair expects real-valued solutions".into(),
        ));
    }
    Ok((
        w.psi().iter().map(|z| z.re).collect(),
        w.psi_prime().iter().map(|z| z.re).collect(),
    ))
}

/// Amplitude `u = sqrt(f^2 + g^2)` of two real solutions, with `c` the mean
/// of their Wronskian `f g' - f' g`.
pub fn amplitude_from_pair(
    f: &ComplexWaveFunction,
    g: &ComplexWaveFunction,
) -> Result<MilneSolution> {
    f.grid().ensure_same(g.grid())?;
    let (fv, fp) = real_samples(f)?;
    let (gv, gp) = real_samples(g)?;
    let n = fv.len();
    let w: Vec<f64> = (0..n).map(|i| fv[i] * gp[i] - fp[i] * gv[i]).collect();
    let c = w.iter().sum::<f64>() / n as f64;
    let scale = (0..n)
        .map(|i| (fv[i] * gp[i]).abs() + (fp[i] * gv[i]).abs())
        .fold(0.0, f64::max);
    let threshold = 1e-12 * scale;
    if !(c.abs() > threshold) {
        return Err(Error::DegeneratePair {
            wronskian: c,
            threshold,
        });
    }
    let u: Vec<f64> = (0..n).map(|i| fv[i].hypot(gv[i])).collect();
    let u_prime = (0..n).map(|i| (fv[i] * fp[i] + gv[i] * gp[i]) / u[i]).collect();
    MilneSolution::new(*f.grid(), u, u_prime, c)
}

/// Integrates `S' = c / u^2` from `S(x_start) = s0`.
///
/// Between grid points `u` is the quintic Hermite interpolant of
/// `(u, u', u'')`, with `u''` the finite-difference derivative of `u'`.
/// The stored `S'` is `c / u_i^2` at the samples.
pub fn integrate_phase(
    amp: &MilneSolution,
    s0: f64,
    cfg: &IntegratorConfig,
) -> Result<PhaseFunction> {
    if !s0.is_finite() {
        return Err(Error::InvalidParameter("S0 must be finite".into()));
    }
    let grid = amp.grid;
    let c = amp.c;
    let s_prime: Vec<f64> = amp.u.iter().map(|u| c / (u * u)).collect();
    if c == 0.0 {
        return PhaseFunction::new(grid, vec![s0; grid.n_points()], s_prime);
    }
    let u_second = ode::fd_derivative(&amp.u_prime, &grid, DerivativeOrder::First)?;
    let spline = HermiteSpline::quintic(grid, amp.u.clone(), amp.u_prime.clone(), u_second);
    let rhs = |x: f64, _y: &[f64], dy: &mut [f64]| {
        let u = spline.eval(x);
        dy[0] = c / (u * u);
    };
    let traj = ode::integrate(rhs, grid.x_start(), &[s0], &grid, cfg)?;
    PhaseFunction::new(grid, traj.component(0), s_prime)
}

/// `psi = N u e^{iS}` and `psi' = N (u' + i u S') e^{iS}`.
pub fn compose_psi(triple: &PolarTriple) -> ComplexWaveFunction {
    let amp = &triple.amp;
    let ph = &triple.phase;
    let n = triple.n;
    let mut psi = Vec::with_capacity(amp.u.len());
    let mut psi_prime = Vec::with_capacity(amp.u.len());
    for i in 0..amp.u.len() {
        let rot = Complex64::from_polar(1.0, ph.s[i]);
        psi.push(rot * (n * amp.u[i]));
        psi_prime.push(rot * Complex64::new(n * amp.u_prime[i], n * amp.u[i] * ph.s_prime[i]));
    }
    ComplexWaveFunction::new(amp.grid, psi, psi_prime)
        .expect("finite triple composes to a finite wave function")
}

/// Wraps an angle into `(-pi, pi]`.
fn wrap_angle(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

/// Splits a nodeless `psi` into `(N, u, S)` for the given `N`.
///
/// `u = |psi| / N`, `c` is the mean of `Im(conj(psi) psi') / N^2`, and `S`
/// is the principal argument at `x_start` continued across the grid. Each
/// increment is checked against the trapezoidal prediction from `S' = c/u^2`;
/// an ambiguity of a full turn is reported as `UnresolvedPhase`.
pub fn polar_decompose(psi: &ComplexWaveFunction, n: f64) -> Result<PolarTriple> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::InvalidParameter(format!("N must be positive, got {n}")));
    }
    let grid = *psi.grid();
    let modulus = psi.modulus();
    let peak = modulus.iter().fold(0.0, |m: f64, v| m.max(*v));
    for (i, m) in modulus.iter().enumerate() {
        if *m <= NODE_THRESHOLD * peak {
            return Err(Error::NodeEncountered {
                x: grid.x(i),
                modulus: *m,
            });
        }
    }
    let len = modulus.len();
    let u: Vec<f64> = modulus.iter().map(|m| m / n).collect();
    let mut u_prime = Vec::with_capacity(len);
    let mut current = Vec::with_capacity(len);
    for ((p, dp), m) in psi.psi().iter().zip(psi.psi_prime()).zip(&modulus) {
        let z = p.conj() * dp;
        u_prime.push(z.re / (m * n));
        current.push(z.im / (n * n));
    }
    let c = current.iter().sum::<f64>() / len as f64;
    let s_prime: Vec<f64> = u.iter().map(|u| c / (u * u)).collect();

    let h = grid.step();
    let mut s = Vec::with_capacity(len);
    s.push(psi.psi()[0].arg());
    for i in 0..len - 1 {
        let wrapped = wrap_angle(psi.psi()[i + 1].arg() - psi.psi()[i].arg());
        let predicted = 0.5 * h * (s_prime[i] + s_prime[i + 1]);
        if (wrapped - predicted).abs() > PI / 2.0 {
            return Err(Error::UnresolvedPhase { x: grid.x(i) });
        }
        s.push(s[i] + wrapped);
    }

    let amp = MilneSolution::new(grid, u, u_prime, c)?;
    let phase = PhaseFunction::new(grid, s, s_prime)?;
    PolarTriple::new(n, amp, phase)
}

/// Sampled `K` together with its report.
#[derive(Debug, Clone, PartialEq)]
pub struct KEvaluation {
    pub values: Vec<Complex64>,
    /// `max_i |c^2 (psi_i/u_i)^2|`, equal to `c^2 N^2` for consistent input.
    pub term_magnitude: f64,
    /// `max |K| / term_magnitude` against `tolerance`.
    pub report: ResidualReport,
}

/// `K = c^2 (psi/u)^2 + (psi' u - u' psi)^2` at every sample.
///
/// Any `(psi, u, c)` combination is accepted; consistency is not assumed.
pub fn evaluate_k(
    psi: &ComplexWaveFunction,
    amp: &MilneSolution,
    tolerance: f64,
) -> Result<KEvaluation> {
    psi.grid().ensure_same(&amp.grid)?;
    let c2 = amp.c * amp.c;
    let mut values = Vec::with_capacity(amp.u.len());
    let mut term_magnitude = 0.0f64;
    for i in 0..amp.u.len() {
        let p = psi.psi()[i];
        let dp = psi.psi_prime()[i];
        let ratio = p / amp.u[i];
        let first = ratio * ratio * c2;
        let cross = dp * amp.u[i] - p * amp.u_prime[i];
        term_magnitude = term_magnitude.max(first.norm());
        values.push(first + cross * cross);
    }
    let moduli: Vec<f64> = values.iter().map(|k| k.norm()).collect();
    let report = ResidualReport::from_residuals("K", &moduli, term_magnitude, tolerance);
    Ok(KEvaluation {
        values,
        term_magnitude,
        report,
    })
}

/// `|psi' u - u' psi - i c N e^{iS}|`, scaled by `|c| N`.
pub fn wronskian_identity_residual(
    triple: &PolarTriple,
    psi: &ComplexWaveFunction,
    tolerance: f64,
) -> Result<ResidualReport> {
    triple.grid().ensure_same(psi.grid())?;
    let amp = &triple.amp;
    let n = triple.n;
    let residuals: Vec<f64> = (0..amp.u.len())
        .map(|i| {
            let lhs = psi.psi_prime()[i] * amp.u[i] - psi.psi()[i] * amp.u_prime[i];
            let rhs = Complex64::new(0.0, amp.c * n) * Complex64::from_polar(1.0, triple.phase.s[i]);
            (lhs - rhs).norm()
        })
        .collect();
    let scale = amp.c.abs() * n;
    Ok(ResidualReport::from_residuals(
        "wronskian-identity",
        &residuals,
        scale,
        tolerance,
    ))
}

/// Finite-difference residuals of the polar equations:
/// `u'' + (k^2 - S'^2) u = 0` and `u S'' + 2 u' S' = 0`, the latter divided
/// by `u > 0`.
pub fn polar_equation_residuals(
    triple: &PolarTriple,
    k2: &KSquaredProfile,
    tolerance: f64,
) -> Result<(ResidualReport, ResidualReport)> {
    let grid = triple.grid();
    let amp = &triple.amp;
    let ph = &triple.phase;
    let u2 = ode::fd_derivative(&amp.u, grid, DerivativeOrder::Second)?;
    let s2 = ode::fd_derivative(&ph.s, grid, DerivativeOrder::Second)?;
    let k2s = k2.sample(grid);
    let len = amp.u.len();

    let coupling: Vec<f64> = (0..len)
        .map(|i| (k2s[i] - ph.s_prime[i] * ph.s_prime[i]) * amp.u[i])
        .collect();
    let amp_res: Vec<f64> = (0..len).map(|i| u2[i] + coupling[i]).collect();
    let amp_scale = equation_scale([&u2[..], &coupling[..]]);

    let drag: Vec<f64> = (0..len)
        .map(|i| 2.0 * amp.u_prime[i] * ph.s_prime[i] / amp.u[i])
        .collect();
    let phase_res: Vec<f64> = (0..len).map(|i| s2[i] + drag[i]).collect();
    let phase_scale = equation_scale([&s2[..], &drag[..]]);

    Ok((
        ResidualReport::from_residuals("polar-amplitude", &amp_res, amp_scale, tolerance),
        ResidualReport::from_residuals("polar-phase", &phase_res, phase_scale, tolerance),
    ))
}

/// Finite-difference residual of `u'' + k^2 u - c^2 / u^3 = 0`.
pub fn milne_residual(
    amp: &MilneSolution,
    k2: &KSquaredProfile,
    tolerance: f64,
) -> Result<ResidualReport> {
    let grid = &amp.grid;
    let u2 = ode::fd_derivative(&amp.u, grid, DerivativeOrder::Second)?;
    let k2s = k2.sample(grid);
    let c2 = amp.c * amp.c;
    let len = amp.u.len();
    let ku: Vec<f64> = (0..len).map(|i| k2s[i] * amp.u[i]).collect();
    let inv: Vec<f64> = amp.u.iter().map(|u| c2 / (u * u * u)).collect();
    let res: Vec<f64> = (0..len).map(|i| u2[i] + ku[i] - inv[i]).collect();
    let scale = equation_scale([&u2[..], &ku[..], &inv[..]]);
    Ok(ResidualReport::from_residuals("milne", &res, scale, tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schrodinger::solve_linear;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cos_sin_pair(grid: &Grid, g_scale: f64) -> (ComplexWaveFunction, ComplexWaveFunction) {
        let x = grid.points();
        let f = ComplexWaveFunction::from_real(
            *grid,
            &x.iter().map(|x| x.cos()).collect::<Vec<_>>(),
            &x.iter().map(|x| -x.sin()).collect::<Vec<_>>(),
        )
        .unwrap();
        let g = ComplexWaveFunction::from_real(
            *grid,
            &x.iter().map(|x| g_scale * x.sin()).collect::<Vec<_>>(),
            &x.iter().map(|x| g_scale * x.cos()).collect::<Vec<_>>(),
        )
        .unwrap();
        (f, g)
    }

    #[test]
    fn milne_fixed_points() {
        let grid = Grid::new(0.0, 10.0, 1001).unwrap();
        let cfg = IntegratorConfig::default();
        let unit = solve_milne(&KSquaredProfile::constant(1.0), 1.0, 1.0, 0.0, &grid, &cfg).unwrap();
        assert!(unit.u().iter().all(|&u| (u - 1.0).abs() <= 1e-10));
        let u_star = 0.5f64.sqrt();
        let quarter =
            solve_milne(&KSquaredProfile::constant(4.0), 1.0, u_star, 0.0, &grid, &cfg).unwrap();
        assert!(quarter.u().iter().all(|&u| (u - u_star).abs() <= 1e-10));
    }

    #[test]
    fn milne_matches_linear_pair() {
        // u0 = 2, c = 1: f(0) = 2, f'(0) = 0, g(0) = 0, g'(0) = 1/2.
        let grid = Grid::new(0.0, 10.0, 4001).unwrap();
        let cfg = IntegratorConfig::default();
        let k2 = KSquaredProfile::constant(1.0);
        let amp = solve_milne(&k2, 1.0, 2.0, 0.0, &grid, &cfg).unwrap();
        let x = grid.points();
        let oracle: Vec<f64> = x
            .iter()
            .map(|x| (4.0 * x.cos().powi(2) + 0.25 * x.sin().powi(2)).sqrt())
            .collect();
        for (u, o) in amp.u().iter().zip(&oracle) {
            assert!((u - o).abs() < 1e-7);
        }
        assert!(amp.u().iter().all(|&u| u > 0.0));
        assert!(milne_residual(&amp, &k2, 1e-7).unwrap().pass);
    }

    #[test]
    fn milne_rejects_nonpositive_start_and_collapse() {
        let grid = Grid::new(0.0, 10.0, 201).unwrap();
        let cfg = IntegratorConfig::default();
        let k2 = KSquaredProfile::constant(1.0);
        assert!(solve_milne(&k2, 1.0, 0.0, 0.0, &grid, &cfg).is_err());
        // c = 0 reduces to the linear equation; u = cos x crosses zero.
        let r = solve_milne(&k2, 0.0, 1.0, 0.0, &grid, &cfg);
        assert!(matches!(r, Err(Error::AmplitudeCollapse { .. })), "{r:?}");
    }

    #[test]
    fn pair_amplitudes() {
        let grid = Grid::new(0.0, 6.0, 2401).unwrap();
        let (f, g) = cos_sin_pair(&grid, 1.0);
        let amp = amplitude_from_pair(&f, &g).unwrap();
        assert!(amp.u().iter().all(|&u| (u - 1.0).abs() < 1e-15));
        assert!((amp.c() - 1.0).abs() < 1e-15);

        let (f, g) = cos_sin_pair(&grid, 2.0);
        let amp = amplitude_from_pair(&f, &g).unwrap();
        assert!((amp.c() - 2.0).abs() < 1e-14);
        for (i, u) in amp.u().iter().enumerate() {
            let x = grid.x(i);
            assert!((u - (x.cos().powi(2) + 4.0 * x.sin().powi(2)).sqrt()).abs() < 1e-14);
        }
        let res = milne_residual(&amp, &KSquaredProfile::constant(1.0), 1e-7).unwrap();
        assert!(res.pass, "{res:?}");

        let err = amplitude_from_pair(&f, &f).unwrap_err();
        assert!(matches!(err, Error::DegeneratePair { .. }));
    }

    #[test]
    fn phase_integration() {
        let grid = Grid::new(0.0, 10.0, 4001).unwrap();
        let cfg = IntegratorConfig::default();
        let (f, g) = cos_sin_pair(&grid, 1.0);
        let unit = amplitude_from_pair(&f, &g).unwrap();
        let s = integrate_phase(&unit, 0.0, &cfg).unwrap();
        for (i, v) in s.s().iter().enumerate() {
            assert!((v - grid.x(i)).abs() < 1e-12);
        }

        let flat = MilneSolution::new(grid, vec![1.5; 4001], vec![0.0; 4001], 0.0).unwrap();
        let s = integrate_phase(&flat, 0.3, &cfg).unwrap();
        assert!(s.s().iter().all(|&v| v == 0.3));

        // Oracle: unwrapped argument of cos x + 2i sin x.
        let (f, g) = cos_sin_pair(&grid, 2.0);
        let amp = amplitude_from_pair(&f, &g).unwrap();
        let s = integrate_phase(&amp, 0.0, &cfg).unwrap();
        let mut oracle = vec![0.0];
        for i in 1..grid.n_points() {
            let a = c64(grid.x(i).cos(), 2.0 * grid.x(i).sin()).arg();
            let prev: f64 = oracle[i - 1];
            let turns = ((prev - a) / (2.0 * PI)).round();
            oracle.push(a + 2.0 * PI * turns);
        }
        for (v, o) in s.s().iter().zip(&oracle) {
            assert!((v - o).abs() < 1e-8, "{v} vs {o}");
        }
        assert!(s.s().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn compose_simple_triples() {
        let grid = Grid::new(0.0, 4.0, 41).unwrap();
        let x = grid.points();
        let amp = MilneSolution::new(grid, vec![1.0; 41], vec![0.0; 41], 1.0).unwrap();
        let phase = PhaseFunction::new(grid, x.clone(), vec![1.0; 41]).unwrap();
        let psi = compose_psi(&PolarTriple::new(1.0, amp, phase).unwrap());
        for (i, z) in psi.psi().iter().enumerate() {
            assert!((z - Complex64::from_polar(1.0, x[i])).norm() < 1e-15);
            assert!((psi.psi_prime()[i] - c64(0.0, 1.0) * z).norm() < 1e-15);
        }

        let amp = MilneSolution::new(grid, vec![1.0; 41], vec![0.0; 41], 0.0).unwrap();
        let phase = PhaseFunction::new(grid, vec![0.0; 41], vec![0.0; 41]).unwrap();
        let psi = compose_psi(&PolarTriple::new(2.0, amp, phase).unwrap());
        assert!(psi.psi().iter().all(|z| *z == c64(2.0, 0.0)));
    }

    #[test]
    fn triple_rejects_incompatible_phase() {
        let grid = Grid::new(0.0, 1.0, 11).unwrap();
        let amp = MilneSolution::new(grid, vec![1.0; 11], vec![0.0; 11], 1.0).unwrap();
        let phase = PhaseFunction::new(grid, vec![0.0; 11], vec![0.0; 11]).unwrap();
        assert!(PolarTriple::new(1.0, amp.clone(), phase.clone()).is_err());
        let other = Grid::new(0.0, 1.0, 12).unwrap();
        let p2 = PhaseFunction::new(other, vec![0.0; 12], vec![1.0; 12]).unwrap();
        assert_eq!(PolarTriple::new(1.0, amp, p2).unwrap_err(), Error::GridMismatch);
        assert!(PhaseFunction::new(grid, (0..11).map(|i| 4.0 * i as f64).collect(), vec![4.0; 11])
            .is_err());
    }

    #[test]
    fn decompose_plane_wave_and_node() {
        let grid = Grid::new(0.0, 8.0, 801).unwrap();
        let (f, g) = cos_sin_pair(&grid, 1.0);
        let psi = crate::schrodinger::superpose(&f, &g, c64(1.0, 0.0), c64(0.0, 1.0)).unwrap();
        let t = polar_decompose(&psi, 1.0).unwrap();
        assert!((t.amp().c() - 1.0).abs() < 1e-14);
        for (i, s) in t.phase().s().iter().enumerate() {
            assert!((s - grid.x(i)).abs() < 1e-12);
            assert!((t.amp().u()[i] - 1.0).abs() < 1e-15);
        }
        let err = polar_decompose(&g, 1.0).unwrap_err();
        assert!(matches!(err, Error::NodeEncountered { x, .. } if x == 0.0));
    }

    #[test]
    fn decompose_matches_pair_amplitude() {
        let grid = Grid::new(0.0, 8.0, 801).unwrap();
        let (f, g) = cos_sin_pair(&grid, 2.0);
        let psi = crate::schrodinger::superpose(&f, &g, c64(1.0, 0.0), c64(0.0, 1.0)).unwrap();
        let t = polar_decompose(&psi, 1.0).unwrap();
        let amp = amplitude_from_pair(&f, &g).unwrap();
        assert!((t.amp().c() - 2.0).abs() < 1e-9);
        for (a, b) in t.amp().u().iter().zip(amp.u()) {
            assert!((a - b).abs() < 1e-9);
        }
        let back = compose_psi(&t);
        for (a, b) in back.psi().iter().zip(psi.psi()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn decompose_flags_undersampled_phase() {
        let grid = Grid::new(0.0, 10.0, 11).unwrap();
        let x = grid.points();
        // Phase advances 4 rad per step: wrapped increments disagree with S'.
        let psi = ComplexWaveFunction::new(
            grid,
            x.iter().map(|x| Complex64::from_polar(1.0, 4.0 * x)).collect(),
            x.iter().map(|x| c64(0.0, 4.0) * Complex64::from_polar(1.0, 4.0 * x)).collect(),
        )
        .unwrap();
        assert!(matches!(
            polar_decompose(&psi, 1.0),
            Err(Error::UnresolvedPhase { .. })
        ));
    }

    #[test]
    fn k_cancels_for_plane_wave() {
        let grid = Grid::new(0.0, 6.0, 61).unwrap();
        let x = grid.points();
        let psi = ComplexWaveFunction::new(
            grid,
            x.iter().map(|x| Complex64::from_polar(1.0, *x)).collect(),
            x.iter().map(|x| c64(0.0, 1.0) * Complex64::from_polar(1.0, *x)).collect(),
        )
        .unwrap();
        let amp = MilneSolution::new(grid, vec![1.0; 61], vec![0.0; 61], 1.0).unwrap();
        let k = evaluate_k(&psi, &amp, 1e-7).unwrap();
        assert!((k.term_magnitude - 1.0).abs() < 1e-15);
        assert!(k.values.iter().all(|v| v.norm() < 1e-15));
        assert!(k.report.pass);

        // u = 1 with c = 2: first term 4 e^{2ix}, second -e^{2ix}.
        let wrong = MilneSolution::new(grid, vec![1.0; 61], vec![0.0; 61], 2.0).unwrap();
        let k = evaluate_k(&psi, &wrong, 1e-7).unwrap();
        assert!((k.report.max_abs - 0.75).abs() < 1e-12);
        assert!(!k.report.pass);
    }

    #[test]
    fn wronskian_identity_simple_cases() {
        let grid = Grid::new(0.0, 6.0, 61).unwrap();
        let x = grid.points();
        let amp = MilneSolution::new(grid, vec![1.0; 61], vec![0.0; 61], 1.0).unwrap();
        let phase = PhaseFunction::new(grid, x.clone(), vec![1.0; 61]).unwrap();
        let t = PolarTriple::new(1.0, amp, phase).unwrap();
        let psi = compose_psi(&t);
        let r = wronskian_identity_residual(&t, &psi, 1e-8).unwrap();
        assert_eq!(r.max_abs, 0.0);

        // c = 0, psi = u real.
        let u: Vec<f64> = x.iter().map(|x| 2.0 + x.sin()).collect();
        let du: Vec<f64> = x.iter().map(|x| x.cos()).collect();
        let amp = MilneSolution::new(grid, u.clone(), du.clone(), 0.0).unwrap();
        let phase = PhaseFunction::new(grid, vec![0.0; 61], vec![0.0; 61]).unwrap();
        let t = PolarTriple::new(1.0, amp, phase).unwrap();
        let psi = ComplexWaveFunction::from_real(grid, &u, &du).unwrap();
        let r = wronskian_identity_residual(&t, &psi, 1e-8).unwrap();
        assert_eq!(r.max_abs, 0.0);
    }

    #[test]
    fn polar_residuals_trivial_triples() {
        let grid = Grid::new(0.0, 6.0, 61).unwrap();
        let x = grid.points();
        let amp = MilneSolution::new(grid, vec![1.0; 61], vec![0.0; 61], 1.0).unwrap();
        let phase = PhaseFunction::new(grid, x.clone(), vec![1.0; 61]).unwrap();
        let t = PolarTriple::new(1.0, amp, phase).unwrap();
        let (a, p) = polar_equation_residuals(&t, &KSquaredProfile::constant(1.0), 1e-6).unwrap();
        assert!(a.max_abs == 0.0, "{a:?}");
        assert!(p.max_abs < 1e-12, "{p:?}");

        // c = 0: phase equation vanishes, amplitude equation is the linear one.
        let g2 = Grid::new(-1.0, 1.0, 401).unwrap();
        let y = g2.points();
        let amp = MilneSolution::new(
            g2,
            y.iter().map(|x| x.cosh()).collect(),
            y.iter().map(|x| x.sinh()).collect(),
            0.0,
        )
        .unwrap();
        let phase = PhaseFunction::new(g2, vec![0.5; 401], vec![0.0; 401]).unwrap();
        let t = PolarTriple::new(1.0, amp, phase).unwrap();
        let (a, p) = polar_equation_residuals(&t, &KSquaredProfile::constant(-1.0), 1e-6).unwrap();
        assert_eq!(p.max_abs, 0.0);
        assert!(a.pass, "{a:?}");
    }

    #[test]
    fn pipeline_on_free_particle() {
        let grid = Grid::new(-5.0, 5.0, 2001).unwrap();
        let cfg = IntegratorConfig::default();
        let k2 = KSquaredProfile::constant(0.7);
        let f = solve_linear(&k2, c64(0.8, 0.0), c64(0.3, 0.0), &grid, &cfg).unwrap();
        let g = solve_linear(&k2, c64(-0.2, 0.0), c64(1.1, 0.0), &grid, &cfg).unwrap();
        let amp = amplitude_from_pair(&f, &g).unwrap();
        let phase = integrate_phase(&amp, 0.1, &cfg).unwrap();
        let t = PolarTriple::new(1.3, amp, phase).unwrap();
        let psi = compose_psi(&t);
        let k = evaluate_k(&psi, t.amp(), 1e-7).unwrap();
        assert!(k.report.pass, "{:?}", k.report);
        assert!(wronskian_identity_residual(&t, &psi, 1e-8).unwrap().pass);
        let (a, p) = polar_equation_residuals(&t, &k2, 1e-6).unwrap();
        assert!(a.pass && p.pass, "{a:?} {p:?}");
        assert!(crate::schrodinger::linear_residual(&psi, &k2, 1e-7).unwrap().pass);
    }
}
