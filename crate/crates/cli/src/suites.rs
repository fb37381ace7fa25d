//! The verification suites behind each subcommand.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::time::Instant;

use amphase::counterexample::{
    compose_counterexample_psi, evaluate_calk, k_squared_from_phase, nonlinear_milne_residual,
    solve_pendulum_phase,
};
use amphase::milne::{
    amplitude_from_pair, compose_psi, evaluate_k, integrate_phase, milne_residual,
    polar_equation_residuals, solve_milne, solve_milne_from, wronskian_identity_residual,
    PolarTriple,
};
use amphase::ode::{observed_order, Grid, IntegratorConfig};
use amphase::schrodinger::{
    k_squared, linear_residual, solve_linear, solve_linear_from, wronskian,
    ComplexWaveFunction, KSquaredProfile, PhysicalParams,
};
use amphase::ResidualReport;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::args::SweepOver;
use crate::config::{CommandKind, PhaseConfig, PotentialConfig, RunConfig, Tolerances};
use crate::report::{CaseKind, CaseReport, Check, OrderReport, SampleTable, SuiteReport};
use crate::CliError;

/// Initial data `psi(x0)`, `psi'(x0)` at the grid centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialData {
    pub psi0: Complex64,
    pub dpsi0: Complex64,
}

/// Below this `|sin(arg psi' - arg psi)|` the pair is nearly real and the
/// amplitude nearly touches zero; such draws are replaced.
pub const MIN_PHASE_SINE: f64 = 0.1;

/// Draws `count` initial conditions with moduli in `[0.5, 2]` and uniform
/// phases from a ChaCha8 stream seeded with `seed`.
pub fn random_initial_data(seed: u64, count: usize) -> Vec<InitialData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let r0: f64 = rng.gen_range(0.5..=2.0);
            let p0: f64 = rng.gen_range(0.0..TAU);
            let r1: f64 = rng.gen_range(0.5..=2.0);
            let p1: f64 = rng.gen_range(0.0..TAU);
            if (p1 - p0).sin().abs() >= MIN_PHASE_SINE {
                break InitialData {
                    psi0: Complex64::from_polar(r0, p0),
                    dpsi0: Complex64::from_polar(r1, p1),
                };
            }
        })
        .collect()
}

/// The grid point used as the anchor for outward integration.
pub fn anchor(grid: &Grid) -> f64 {
    grid.x((grid.n_points() - 1) / 2)
}

fn k2_for(p: &PotentialConfig) -> KSquaredProfile {
    k_squared(&p.potential, &PhysicalParams::with_energy(p.energy))
}

/// Real solutions `f = Re psi`, `g = Im psi` and their complex combination.
fn solve_pair(
    k2: &KSquaredProfile,
    grid: &Grid,
    ic: InitialData,
    cfg: &IntegratorConfig,
) -> amphase::Result<(ComplexWaveFunction, ComplexWaveFunction, ComplexWaveFunction)> {
    let x0 = anchor(grid);
    let re = Complex64::new;
    let f = solve_linear_from(k2, x0, re(ic.psi0.re, 0.0), re(ic.dpsi0.re, 0.0), grid, cfg)?;
    let g = solve_linear_from(k2, x0, re(ic.psi0.im, 0.0), re(ic.dpsi0.im, 0.0), grid, cfg)?;
    let i = Complex64::i();
    let psi = f.psi().iter().zip(g.psi()).map(|(a, b)| a + i * b).collect();
    let dpsi = f.psi_prime().iter().zip(g.psi_prime()).map(|(a, b)| a + i * b).collect();
    let psi = ComplexWaveFunction::new(*grid, psi, dpsi)?;
    Ok((f, g, psi))
}

/// The consistent triple built from the pair `(Re psi, Im psi)` with
/// `N = 1`, together with the integrated `psi`.
pub fn build_triple(
    k2: &KSquaredProfile,
    grid: &Grid,
    ic: InitialData,
    cfg: &IntegratorConfig,
) -> amphase::Result<(PolarTriple, ComplexWaveFunction)> {
    let (f, g, psi) = solve_pair(k2, grid, ic, cfg)?;
    let amp = amplitude_from_pair(&f, &g)?;
    let phase = integrate_phase(&amp, psi.psi()[0].arg(), cfg)?;
    Ok((PolarTriple::new(1.0, amp, phase)?, psi))
}

/// Checks of the identity `K = 0`: `K` on the recomposed wave function, the
/// size of its cancelling term, and the Wronskian identity on the
/// integrated `psi`.
pub fn k_checks(
    triple: &PolarTriple,
    psi: &ComplexWaveFunction,
    tol: &Tolerances,
) -> amphase::Result<Vec<Check>> {
    let composed = compose_psi(triple);
    let k = evaluate_k(&composed, triple.amp(), tol.k_relative)?;
    let c2n2 = (triple.amp().c() * triple.n()).powi(2);
    let term = ResidualReport::from_residuals(
        "K-term",
        &[k.term_magnitude - c2n2],
        c2n2,
        tol.k_term,
    );
    let wi = wronskian_identity_residual(triple, psi, tol.wronskian_identity)?;
    Ok(vec![
        Check::expect_pass(k.report),
        Check::expect_pass(term),
        Check::expect_pass(wi),
    ])
}

/// Finite-difference residuals of the polar equations and of the Milne
/// equation for a triple.
pub fn equation_checks(
    triple: &PolarTriple,
    k2: &KSquaredProfile,
    tol: &Tolerances,
) -> amphase::Result<Vec<Check>> {
    let eq_tol = k2.residual_tolerance(tol.equation_residual);
    let (pa, pp) = polar_equation_residuals(triple, k2, eq_tol)?;
    let mr = milne_residual(triple.amp(), k2, eq_tol)?;
    Ok(vec![
        Check::expect_pass(pa),
        Check::expect_pass(pp),
        Check::expect_pass(mr),
    ])
}

/// Negative control: `psi` paired with the Milne amplitude of constant `2c`
/// that shares `u` and `u'` at the anchor. `max |K|` is reported relative to
/// the true `c^2 N^2` and is expected to exceed the control threshold.
pub fn negative_control_checks(
    k2: &KSquaredProfile,
    grid: &Grid,
    ic: InitialData,
    cfg: &IntegratorConfig,
    tol: &Tolerances,
) -> amphase::Result<Vec<Check>> {
    let (f, g, psi) = solve_pair(k2, grid, ic, cfg)?;
    let amp = amplitude_from_pair(&f, &g)?;
    let c = amp.c();
    let i0 = (grid.n_points() - 1) / 2;
    let wrong = solve_milne_from(
        k2,
        2.0 * c,
        anchor(grid),
        amp.u()[i0],
        amp.u_prime()[i0],
        grid,
        cfg,
    )?;
    let k = evaluate_k(&psi, &wrong, tol.negative_control)?;
    let moduli: Vec<f64> = k.values.iter().map(|v| v.norm()).collect();
    let report = ResidualReport::from_residuals("K", &moduli, c * c, tol.negative_control);
    Ok(vec![Check::expect_fail(report)])
}

/// Residual orders of the polar and Milne equations over `levels` halvings,
/// starting from `grid`.
pub fn refinement_orders(
    k2: &KSquaredProfile,
    grid: &Grid,
    ic: InitialData,
    cfg: &IntegratorConfig,
    tol: &Tolerances,
    levels: usize,
) -> amphase::Result<Vec<OrderReport>> {
    const NAMES: [&str; 3] = ["polar-amplitude", "polar-phase", "milne"];
    let mut g = *grid;
    let mut points = Vec::new();
    let mut steps = Vec::new();
    let mut errors = vec![Vec::new(); NAMES.len()];
    for level in 0..=levels {
        if level > 0 {
            g = g.refined();
        }
        let (triple, _) = build_triple(k2, &g, ic, cfg)?;
        let checks = equation_checks(&triple, k2, tol)?;
        points.push(g.n_points());
        steps.push(g.step());
        for (name, errs) in NAMES.iter().zip(errors.iter_mut()) {
            let c = checks.iter().find(|c| c.report.name == *name);
            errs.push(c.map_or(f64::NAN, |c| c.report.max_abs));
        }
    }
    Ok(NAMES
        .iter()
        .zip(errors)
        .map(|(name, errs)| {
            let order = observed_order(&steps, &errs);
            OrderReport {
                name: (*name).to_string(),
                grid_points: points.clone(),
                errors: errs,
                observed_order: order,
                min_order: tol.min_order,
                pass: order >= tol.min_order,
            }
        })
        .collect())
}

fn run_case(
    index: usize,
    label: String,
    kind: CaseKind,
    parameters: BTreeMap<String, f64>,
    body: impl FnOnce() -> amphase::Result<(CaseKind, Vec<Check>, Vec<OrderReport>)>,
) -> CaseReport {
    let start = Instant::now();
    let outcome = body();
    let wall_time_s = start.elapsed().as_secs_f64();
    let mut case = CaseReport {
        index,
        label,
        kind,
        parameters,
        checks: Vec::new(),
        orders: Vec::new(),
        error: None,
        pass: false,
        wall_time_s,
    };
    match outcome {
        Ok((kind, checks, orders)) => {
            case.kind = kind;
            case.checks = checks;
            case.orders = orders;
        }
        Err(e) => case.error = Some(e.to_string()),
    }
    case.settle();
    case
}

fn ic_parameters(ic: InitialData) -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("psi0_re".to_string(), ic.psi0.re),
        ("psi0_im".to_string(), ic.psi0.im),
        ("dpsi0_re".to_string(), ic.dpsi0.re),
        ("dpsi0_im".to_string(), ic.dpsi0.im),
    ])
}

fn k_case(
    index: usize,
    label: String,
    pot: &PotentialConfig,
    grid: &Grid,
    ic: InitialData,
    cfg: &RunConfig,
) -> CaseReport {
    let k2 = k2_for(pot);
    let integ = cfg.integrator();
    let tol = cfg.tolerances;
    let mut params = ic_parameters(ic);
    params.insert("energy".into(), pot.energy);
    let kind = if cfg.inconsistent {
        CaseKind::NegativeControl
    } else {
        CaseKind::KCheck
    };
    run_case(index, label, kind, params, || {
        if cfg.inconsistent {
            let checks = negative_control_checks(&k2, grid, ic, &integ, &tol)?;
            return Ok((kind, checks, Vec::new()));
        }
        let (triple, psi) = build_triple(&k2, grid, ic, &integ)?;
        let mut checks = k_checks(&triple, &psi, &tol)?;
        let mut orders = Vec::new();
        if cfg.refine > 0 {
            checks.extend(equation_checks(&triple, &k2, &tol)?);
            orders = refinement_orders(&k2, grid, ic, &integ, &tol, cfg.refine)?;
        }
        Ok((kind, checks, orders))
    })
}

/// Outcome of a run: the report plus optional plot data.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: SuiteReport,
    pub samples: Option<SampleTable>,
}

pub fn cmd_verify_k(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let grid = cfg.grid.grid()?;
    let pot = cfg
        .potential
        .as_ref()
        .ok_or_else(|| CliError::Config("verify-k needs a potential".into()))?;
    let ics = random_initial_data(cfg.seed, cfg.cases);
    let cases = ics
        .par_iter()
        .enumerate()
        .map(|(i, ic)| k_case(i, format!("{} seed={} #{i}", pot.label(), cfg.seed), pot, &grid, *ic, cfg))
        .collect();
    Ok(RunOutput {
        report: SuiteReport::new(cfg.clone(), cases),
        samples: None,
    })
}

/// Pendulum regime from the first integral `S'^2/2 - (c1^2/4) cos 4S`.
fn regime(p: &PhaseConfig, constant: bool) -> &'static str {
    if constant {
        return "equilibrium";
    }
    let energy = 0.5 * p.ds0 * p.ds0 - 0.25 * p.c1 * p.c1 * (4.0 * p.s0).cos();
    if energy > 0.25 * p.c1 * p.c1 {
        "rotation"
    } else {
        "libration"
    }
}

/// Counterexample checks for one `(c1, S0, dS0)`.
///
/// Variable phase: the nonlinear residual, energy drift and `|calK|` spread
/// must pass and the `calK` constancy check, judged against the minimum
/// spread, must fail. Constant phase: every check must pass.
pub fn counterexample_case(
    index: usize,
    p: PhaseConfig,
    grid: &Grid,
    integ: &IntegratorConfig,
    tol: &Tolerances,
    want_samples: bool,
) -> (CaseReport, Option<SampleTable>) {
    let params = BTreeMap::from([
        ("c1".to_string(), p.c1),
        ("s0".to_string(), p.s0),
        ("ds0".to_string(), p.ds0),
    ]);
    let mut samples = None;
    let mut label = format!("c1={} s0={} ds0={}", p.c1, p.s0, p.ds0);
    let mut case = run_case(index, String::new(), CaseKind::VariablePhase, params, || {
        let phase = solve_pendulum_phase(p.c1, p.s0, p.ds0, grid, integ)?;
        let k2 = k_squared_from_phase(&phase);
        let psi = compose_counterexample_psi(&phase);
        let residual = nonlinear_milne_residual(&psi, &k2, p.c1, tol.equation_residual)?;
        let energy = phase.energy_report(tol.energy_drift);
        let calk = evaluate_calk(&psi, p.c1, 1.0, tol.calk_constancy)?;
        let constant = phase.is_constant();
        label = format!("{label} {}", regime(&p, constant));
        let (kind, constancy) = if constant {
            (
                CaseKind::ConstantPhase,
                Check::expect_pass(calk.constancy_report.clone()),
            )
        } else {
            (
                CaseKind::VariablePhase,
                Check::expect_fail(calk.constancy_report.clone().with_tolerance(tol.calk_min_spread)),
            )
        };
        if want_samples {
            let xs = grid.points();
            let k2s = k2.sample(grid);
            samples = Some(SampleTable {
                columns: vec![
                    ("x".into(), xs),
                    ("S".into(), phase.s().to_vec()),
                    ("dS".into(), phase.s_prime().to_vec()),
                    ("k2".into(), k2s),
                    ("calK_re".into(), calk.values.iter().map(|z| z.re).collect()),
                    ("calK_im".into(), calk.values.iter().map(|z| z.im).collect()),
                ],
            });
        }
        Ok((
            kind,
            vec![
                Check::expect_pass(residual),
                Check::expect_pass(energy),
                Check::expect_pass(calk.modulus_report),
                constancy,
            ],
            Vec::new(),
        ))
    });
    case.label = label;
    (case, samples)
}

pub fn cmd_counterexample(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let grid = cfg.grid.grid()?;
    let p = cfg
        .phase
        .ok_or_else(|| CliError::Config("counterexample needs phase parameters".into()))?;
    let (case, samples) = counterexample_case(
        0,
        p,
        &grid,
        &cfg.integrator(),
        &cfg.tolerances,
        cfg.samples.is_some(),
    );
    Ok(RunOutput {
        report: SuiteReport::new(cfg.clone(), vec![case]),
        samples,
    })
}

/// Milne solve from `x_start` with a cross-check against `sqrt(f^2 + g^2)`
/// for the pair `f = (u0, du0)`, `g = (0, c/u0)`, whose Wronskian is `c`.
pub fn cmd_milne_solve(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let grid = cfg.grid.grid()?;
    let pot = cfg
        .potential
        .as_ref()
        .ok_or_else(|| CliError::Config("milne-solve needs a potential".into()))?;
    let start = cfg
        .milne_start
        .ok_or_else(|| CliError::Config("milne-solve needs starting values".into()))?;
    let k2 = k2_for(pot);
    let integ = cfg.integrator();
    let tol = cfg.tolerances;
    let params = BTreeMap::from([
        ("u0".to_string(), start.u0),
        ("du0".to_string(), start.du0),
        ("c".to_string(), start.c),
        ("energy".to_string(), pot.energy),
    ]);
    let mut samples = None;
    let case = run_case(0, pot.label(), CaseKind::Milne, params, || {
        let amp = solve_milne(&k2, start.c, start.u0, start.du0, &grid, &integ)?;
        let mut checks = vec![Check::expect_pass(milne_residual(
            &amp,
            &k2,
            k2.residual_tolerance(tol.equation_residual),
        )?)];
        if start.c != 0.0 {
            let re = |v: f64| Complex64::new(v, 0.0);
            let f = solve_linear(&k2, re(start.u0), re(start.du0), &grid, &integ)?;
            let g = solve_linear(&k2, re(0.0), re(start.c / start.u0), &grid, &integ)?;
            let pair = amplitude_from_pair(&f, &g)?;
            let gaps: Vec<f64> = amp
                .u()
                .iter()
                .zip(pair.u())
                .map(|(a, b)| (a - b) / b)
                .collect();
            checks.push(Check::expect_pass(ResidualReport::from_residuals(
                "pair-cross-check",
                &gaps,
                1.0,
                tol.pair_cross_check,
            )));
        }
        if cfg.samples.is_some() {
            samples = Some(SampleTable {
                columns: vec![
                    ("x".into(), grid.points()),
                    ("u".into(), amp.u().to_vec()),
                    ("du".into(), amp.u_prime().to_vec()),
                ],
            });
        }
        Ok((CaseKind::Milne, checks, Vec::new()))
    });
    Ok(RunOutput {
        report: SuiteReport::new(cfg.clone(), vec![case]),
        samples,
    })
}

/// Linear solve from the grid centre with residual and Wronskian checks.
pub fn cmd_schrodinger_solve(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let grid = cfg.grid.grid()?;
    let pot = cfg
        .potential
        .as_ref()
        .ok_or_else(|| CliError::Config("schrodinger-solve needs a potential".into()))?;
    let start = cfg
        .psi_start
        .ok_or_else(|| CliError::Config("schrodinger-solve needs starting values".into()))?;
    let k2 = k2_for(pot);
    let integ = cfg.integrator();
    let tol = cfg.tolerances;
    let ic = InitialData {
        psi0: Complex64::new(start.psi0[0], start.psi0[1]),
        dpsi0: Complex64::new(start.dpsi0[0], start.dpsi0[1]),
    };
    let mut params = ic_parameters(ic);
    params.insert("energy".into(), pot.energy);
    let mut samples = None;
    let case = run_case(0, pot.label(), CaseKind::Linear, params, || {
        let psi = solve_linear_from(&k2, anchor(&grid), ic.psi0, ic.dpsi0, &grid, &integ)?;
        let residual = linear_residual(&psi, &k2, k2.residual_tolerance(tol.equation_residual))?;
        let (f, g) = (psi.real_part(), psi.imag_part());
        let w = wronskian(&f, &g)?;
        // Deviations are judged against the products that cancel in W.
        let scale = (0..grid.n_points())
            .map(|i| {
                (f.psi()[i] * g.psi_prime()[i]).norm() + (f.psi_prime()[i] * g.psi()[i]).norm()
            })
            .fold(0.0, f64::max);
        let deviations: Vec<f64> = w.values.iter().map(|z| (z - w.mean).norm()).collect();
        let conservation = ResidualReport::from_residuals(
            "wronskian-conservation",
            &deviations,
            scale,
            tol.wronskian_identity,
        );
        if cfg.samples.is_some() {
            samples = Some(SampleTable {
                columns: vec![
                    ("x".into(), grid.points()),
                    ("psi_re".into(), psi.psi().iter().map(|z| z.re).collect()),
                    ("psi_im".into(), psi.psi().iter().map(|z| z.im).collect()),
                    ("dpsi_re".into(), psi.psi_prime().iter().map(|z| z.re).collect()),
                    ("dpsi_im".into(), psi.psi_prime().iter().map(|z| z.im).collect()),
                    ("modulus".into(), psi.modulus()),
                ],
            });
        }
        Ok((
            CaseKind::Linear,
            vec![Check::expect_pass(residual), Check::expect_pass(conservation)],
            Vec::new(),
        ))
    });
    Ok(RunOutput {
        report: SuiteReport::new(cfg.clone(), vec![case]),
        samples,
    })
}

/// Cross-product sweep. Cases run in parallel; the report keeps case order.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let grid = cfg.grid.grid()?;
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep needs parameter lists".into()))?;
    let cases = match sweep.over {
        SweepOver::Counterexample => {
            let mut points = Vec::new();
            for &c1 in &sweep.c1 {
                for &s0 in &sweep.s0 {
                    for &ds0 in &sweep.ds0 {
                        points.push(PhaseConfig { c1, s0, ds0 });
                    }
                }
            }
            let integ = cfg.integrator();
            points
                .par_iter()
                .enumerate()
                .map(|(i, p)| counterexample_case(i, *p, &grid, &integ, &cfg.tolerances, false).0)
                .collect()
        }
        SweepOver::Potential => {
            let ics = random_initial_data(cfg.seed, sweep.points.len());
            sweep
                .points
                .par_iter()
                .zip(ics)
                .enumerate()
                .map(|(i, (pot, ic))| k_case(i, pot.label(), pot, &grid, ic, cfg))
                .collect()
        }
    };
    Ok(RunOutput {
        report: SuiteReport::new(cfg.clone(), cases),
        samples: None,
    })
}

pub fn execute(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    match cfg.command {
        CommandKind::VerifyK => cmd_verify_k(cfg),
        CommandKind::Counterexample => cmd_counterexample(cfg),
        CommandKind::MilneSolve => cmd_milne_solve(cfg),
        CommandKind::SchrodingerSolve => cmd_schrodinger_solve(cfg),
        CommandKind::Sweep => cmd_sweep(cfg),
    }
}
