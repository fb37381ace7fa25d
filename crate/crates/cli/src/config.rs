//! Validated run configuration, echoed verbatim into every report.

use std::path::{Path, PathBuf};

use amphase::ode::{Grid, IntegratorConfig};
use amphase::schrodinger::{Potential, TabulatedPotential};
use amphase::tolerances;
use serde::Serialize;

use crate::args::{
    Command, CounterexampleArgs, Format, GridArgs, MethodName, MilneArgs, OutputArgs,
    PotentialArgs, PotentialKind, SchrodingerArgs, SweepArgs, SweepOver, VerifyKArgs,
};
use crate::CliError;

/// Smallest grid that supports the one-sided stencils after refinement.
pub const MIN_POINTS: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    VerifyK,
    Counterexample,
    MilneSolve,
    SchrodingerSolve,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    pub x_start: f64,
    pub x_end: f64,
    pub n_points: usize,
}

impl GridConfig {
    pub fn grid(&self) -> Result<Grid, CliError> {
        Grid::new(self.x_start, self.x_end, self.n_points).map_err(CliError::Setup)
    }
}

/// Thresholds applied by the suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub k_relative: f64,
    /// `| max |c^2 (psi/u)^2| - c^2 N^2 |` relative to `c^2 N^2`.
    pub k_term: f64,
    pub wronskian_identity: f64,
    pub equation_residual: f64,
    pub energy_drift: f64,
    pub calk_constancy: f64,
    pub calk_min_spread: f64,
    pub negative_control: f64,
    /// Pointwise relative gap between a Milne solve and `sqrt(f^2 + g^2)`.
    pub pair_cross_check: f64,
    pub min_order: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            k_relative: tolerances::K_RELATIVE,
            k_term: 1e-9,
            wronskian_identity: tolerances::WRONSKIAN_IDENTITY,
            equation_residual: tolerances::EQUATION_RESIDUAL,
            energy_drift: tolerances::ENERGY_DRIFT,
            calk_constancy: tolerances::CALK_CONSTANCY,
            calk_min_spread: tolerances::CALK_MIN_SPREAD,
            negative_control: tolerances::NEGATIVE_CONTROL,
            pair_cross_check: 1e-7,
            min_order: 3.5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PotentialConfig {
    pub kind: PotentialKind,
    pub energy: f64,
    /// `V0`, `omega` or `slope`, whichever the kind uses.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
    #[serde(skip)]
    pub potential: Potential,
}

impl PotentialConfig {
    pub fn label(&self) -> String {
        let kind = serde_json::to_value(self.kind)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        format!("{kind} E={}", self.energy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseConfig {
    pub c1: f64,
    pub s0: f64,
    pub ds0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MilneStart {
    pub u0: f64,
    pub du0: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiStart {
    pub psi0: [f64; 2],
    pub dpsi0: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub over: SweepOver,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub c1: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub s0: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ds0: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PotentialConfig>,
}

/// Everything a run depends on. Output paths are not part of the echo.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<PhaseConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub milne_start: Option<MilneStart>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_start: Option<PsiStart>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    pub grid: GridConfig,
    pub method: MethodName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_step: Option<f64>,
    pub tolerances: Tolerances,
    pub cases: usize,
    pub seed: u64,
    pub inconsistent: bool,
    pub refine: usize,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub samples: Option<PathBuf>,
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be finite, got {v}")))
    }
}

fn default_energy(kind: PotentialKind) -> f64 {
    match kind {
        PotentialKind::Linear => 0.0,
        _ => 0.5,
    }
}

/// Reads a two-column `x,V` csv with a header row.
pub fn load_table(path: &Path) -> Result<TabulatedPotential, CliError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if record.len() != 2 {
            return Err(CliError::Config(format!(
                "{}: row {} has {} fields, expected 2",
                path.display(),
                row + 1,
                record.len()
            )));
        }
        let parse = |s: &str| {
            s.trim().parse::<f64>().map_err(|e| {
                CliError::Config(format!("{}: row {}: {e}", path.display(), row + 1))
            })
        };
        xs.push(parse(&record[0])?);
        vs.push(parse(&record[1])?);
    }
    if xs.len() < 2 {
        return Err(CliError::Config(format!("{}: need at least two rows", path.display())));
    }
    let n = xs.len();
    let grid = Grid::new(xs[0], xs[n - 1], n).map_err(CliError::Setup)?;
    let h = grid.step();
    for (i, x) in xs.iter().enumerate() {
        if (x - grid.x(i)).abs() > 1e-9 * h.max(x.abs()) {
            return Err(CliError::Config(format!(
                "{}: abscissae are not uniformly spaced (row {})",
                path.display(),
                i + 1
            )));
        }
    }
    TabulatedPotential::new(grid, vs).map_err(CliError::Setup)
}

fn potential_config(
    kind: PotentialKind,
    energy: Option<f64>,
    v0: f64,
    omega: f64,
    slope: f64,
    table: Option<&PathBuf>,
) -> Result<PotentialConfig, CliError> {
    let energy = finite("energy", energy.unwrap_or_else(|| default_energy(kind)))?;
    let (parameter, potential, table) = match kind {
        PotentialKind::Free => (None, Potential::Free, None),
        PotentialKind::Constant => (Some(finite("v0", v0)?), Potential::Constant(v0), None),
        PotentialKind::Harmonic => (
            Some(finite("omega", omega)?),
            Potential::Harmonic { omega },
            None,
        ),
        PotentialKind::Linear => (Some(finite("slope", slope)?), Potential::Linear { slope }, None),
        PotentialKind::Tabulated => {
            let path = table.ok_or_else(|| {
                CliError::Config("the tabulated potential needs --table PATH".into())
            })?;
            (None, Potential::Tabulated(load_table(path)?), Some(path.clone()))
        }
    };
    Ok(PotentialConfig {
        kind,
        energy,
        parameter,
        table,
        potential,
    })
}

fn from_potential_args(p: &PotentialArgs) -> Result<PotentialConfig, CliError> {
    potential_config(p.potential, p.energy, p.v0, p.omega, p.slope, p.table.as_ref())
}

fn grid_config(g: &GridArgs, default: (f64, f64)) -> Result<GridConfig, CliError> {
    let cfg = GridConfig {
        x_start: finite("x-start", g.x_start.unwrap_or(default.0))?,
        x_end: finite("x-end", g.x_end.unwrap_or(default.1))?,
        n_points: g.n_points.unwrap_or(4001),
    };
    if cfg.n_points < MIN_POINTS {
        return Err(CliError::Config(format!(
            "n-points must be at least {MIN_POINTS}, got {}",
            cfg.n_points
        )));
    }
    if !(cfg.x_end > cfg.x_start) {
        return Err(CliError::Config("x-end must exceed x-start".into()));
    }
    Ok(cfg)
}

fn tolerances(o: &OutputArgs) -> Result<Tolerances, CliError> {
    let mut t = Tolerances::default();
    if let Some(tol) = o.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!("tol must be positive, got {tol}")));
        }
        t.equation_residual = tol;
    }
    Ok(t)
}

const SYMMETRIC: (f64, f64) = (-5.0, 5.0);
const FORWARD: (f64, f64) = (0.0, 10.0);

fn ensure_covers(pot: &PotentialConfig, grid: &GridConfig) -> Result<(), CliError> {
    if pot.potential.covers(&grid.grid()?) {
        Ok(())
    } else {
        Err(CliError::Config(
            "the tabulated potential does not cover the requested grid".into(),
        ))
    }
}

impl RunConfig {
    fn base(
        command: CommandKind,
        grid: &GridArgs,
        output: &OutputArgs,
        default_span: (f64, f64),
    ) -> Result<Self, CliError> {
        if let Some(m) = grid.max_step {
            if !(m > 0.0 && m.is_finite()) {
                return Err(CliError::Config(format!("max-step must be positive, got {m}")));
            }
        }
        Ok(Self {
            command,
            potential: None,
            phase: None,
            milne_start: None,
            psi_start: None,
            sweep: None,
            grid: grid_config(grid, default_span)?,
            method: grid.method,
            max_step: grid.max_step,
            tolerances: tolerances(output)?,
            cases: 1,
            seed: 0,
            inconsistent: false,
            refine: 0,
            format: output.format,
            out: output.out.clone(),
            samples: None,
        })
    }

    pub fn from_command(command: &Command) -> Result<Self, CliError> {
        match command {
            Command::VerifyK(a) => Self::verify_k(a),
            Command::Counterexample(a) => Self::counterexample(a),
            Command::MilneSolve(a) => Self::milne(a),
            Command::SchrodingerSolve(a) => Self::schrodinger(a),
            Command::Sweep(a) => Self::sweep(a),
        }
    }

    fn verify_k(a: &VerifyKArgs) -> Result<Self, CliError> {
        let mut cfg = Self::base(CommandKind::VerifyK, &a.grid, &a.output, SYMMETRIC)?;
        if a.cases == 0 {
            return Err(CliError::Config("cases must be at least 1".into()));
        }
        if a.refine > 6 {
            return Err(CliError::Config("refine is limited to 6 halvings".into()));
        }
        let pot = from_potential_args(&a.potential)?;
        ensure_covers(&pot, &cfg.grid)?;
        cfg.potential = Some(pot);
        cfg.cases = a.cases;
        cfg.seed = a.seed;
        cfg.inconsistent = a.inconsistent;
        cfg.refine = a.refine;
        Ok(cfg)
    }

    fn counterexample(a: &CounterexampleArgs) -> Result<Self, CliError> {
        let mut cfg = Self::base(CommandKind::Counterexample, &a.grid, &a.output, FORWARD)?;
        cfg.phase = Some(phase_config(a.c1, a.s0, a.ds0)?);
        cfg.samples = a.samples.clone();
        Ok(cfg)
    }

    fn milne(a: &MilneArgs) -> Result<Self, CliError> {
        let mut cfg = Self::base(CommandKind::MilneSolve, &a.grid, &a.output, SYMMETRIC)?;
        let pot = from_potential_args(&a.potential)?;
        ensure_covers(&pot, &cfg.grid)?;
        cfg.potential = Some(pot);
        if !(a.u0 > 0.0 && a.u0.is_finite()) {
            return Err(CliError::Config(format!("u0 must be positive, got {}", a.u0)));
        }
        cfg.milne_start = Some(MilneStart {
            u0: a.u0,
            du0: finite("du0", a.du0)?,
            c: finite("c", a.c)?,
        });
        cfg.samples = a.samples.clone();
        Ok(cfg)
    }

    fn schrodinger(a: &SchrodingerArgs) -> Result<Self, CliError> {
        let mut cfg = Self::base(CommandKind::SchrodingerSolve, &a.grid, &a.output, SYMMETRIC)?;
        let pot = from_potential_args(&a.potential)?;
        ensure_covers(&pot, &cfg.grid)?;
        cfg.potential = Some(pot);
        let pair = |name: &str, v: &[f64]| -> Result<[f64; 2], CliError> {
            Ok([finite(name, v[0])?, finite(name, v[1])?])
        };
        let start = PsiStart {
            psi0: pair("psi0", &a.psi0)?,
            dpsi0: pair("dpsi0", &a.dpsi0)?,
        };
        if start.psi0 == [0.0, 0.0] && start.dpsi0 == [0.0, 0.0] {
            return Err(CliError::Config("psi0 and dpsi0 are both zero".into()));
        }
        cfg.psi_start = Some(start);
        cfg.samples = a.samples.clone();
        Ok(cfg)
    }

    fn sweep(a: &SweepArgs) -> Result<Self, CliError> {
        let span = match a.over {
            SweepOver::Counterexample => FORWARD,
            SweepOver::Potential => SYMMETRIC,
        };
        let mut cfg = Self::base(CommandKind::Sweep, &a.grid, &a.output, span)?;
        cfg.seed = a.seed;
        let sweep = match a.over {
            SweepOver::Counterexample => {
                if a.c1.is_empty() || a.s0.is_empty() || a.ds0.is_empty() {
                    return Err(CliError::Config("sweep lists must not be empty".into()));
                }
                for &c1 in &a.c1 {
                    for &s0 in &a.s0 {
                        for &ds0 in &a.ds0 {
                            phase_config(c1, s0, ds0)?;
                        }
                    }
                }
                SweepConfig {
                    over: a.over,
                    c1: a.c1.clone(),
                    s0: a.s0.clone(),
                    ds0: a.ds0.clone(),
                    points: Vec::new(),
                }
            }
            SweepOver::Potential => {
                if a.potential.is_empty() {
                    return Err(CliError::Config("sweep needs at least one potential".into()));
                }
                let mut points = Vec::new();
                for &kind in &a.potential {
                    if a.energy.is_empty() {
                        points.push(potential_config(
                            kind,
                            None,
                            a.v0,
                            a.omega,
                            a.slope,
                            a.table.as_ref(),
                        )?);
                    }
                    for &e in &a.energy {
                        points.push(potential_config(
                            kind,
                            Some(e),
                            a.v0,
                            a.omega,
                            a.slope,
                            a.table.as_ref(),
                        )?);
                    }
                }
                for pot in &points {
                    ensure_covers(pot, &cfg.grid)?;
                }
                SweepConfig {
                    over: a.over,
                    c1: Vec::new(),
                    s0: Vec::new(),
                    ds0: Vec::new(),
                    points,
                }
            }
        };
        cfg.cases = match sweep.over {
            SweepOver::Counterexample => sweep.c1.len() * sweep.s0.len() * sweep.ds0.len(),
            SweepOver::Potential => sweep.points.len(),
        };
        cfg.sweep = Some(sweep);
        Ok(cfg)
    }

    pub fn integrator(&self) -> IntegratorConfig {
        let base = match self.method {
            MethodName::Rk4 => IntegratorConfig::rk4(),
            MethodName::Dp45 => IntegratorConfig::adaptive(),
        };
        match self.max_step {
            Some(m) => base.with_max_step(m),
            None => base,
        }
    }
}

fn phase_config(c1: f64, s0: f64, ds0: f64) -> Result<PhaseConfig, CliError> {
    let c1 = finite("c1", c1)?;
    if c1 == 0.0 {
        return Err(CliError::Config("c1 must be nonzero".into()));
    }
    Ok(PhaseConfig {
        c1,
        s0: finite("s0", s0)?,
        ds0: finite("ds0", ds0)?,
    })
}
