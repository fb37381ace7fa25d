//! Amplitude-phase (Milne) representation of the one-dimensional
//! time-independent Schrodinger equation, with residual-based checks of
//! every identity that links the representation to the wave function.
//!
//! * [`ode`]: grid, integrators, finite-difference stencils.
//! * [`schrodinger`]: `k^2` profiles and the linear equation.
//! * [`milne`]: amplitude, phase, polar triples and the quantity `K`.
//! * [`counterexample`]: variable-phase solutions of the nonlinear
//!   Milne-type equation and the quantity `calK`.

pub mod counterexample;
pub mod error;
mod interp;
pub mod milne;
pub mod ode;
pub mod report;
pub mod schrodinger;

pub use error::{Error, Result};
pub use report::ResidualReport;

/// Default thresholds used by the verification suites.
pub mod tolerances {
    /// `max |K|` relative to `c^2 N^2`.
    pub const K_RELATIVE: f64 = 1e-7;
    /// `|psi' u - u' psi - i c N e^{iS}|` relative to `|c| N`.
    pub const WRONSKIAN_IDENTITY: f64 = 1e-8;
    /// Finite-difference residuals of the differential equations.
    pub const EQUATION_RESIDUAL: f64 = 1e-6;
    /// Drift of the pendulum first integral relative to `1 + |E_0|`.
    pub const ENERGY_DRIFT: f64 = 1e-8;
    /// Spread of `|calK|` and of `calK` itself.
    pub const CALK_CONSTANCY: f64 = 1e-9;
    /// Minimum spread of `calK`, relative to `c1^2 / N^2`, that counts as a
    /// clearly nonconstant value.
    pub const CALK_MIN_SPREAD: f64 = 0.05;
    /// `max |K|` relative to `c^2 N^2` above which the negative control
    /// counts as detected.
    pub const NEGATIVE_CONTROL: f64 = 1e-2;
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/integrator.md")]
    pub struct Integrator;
    #[doc = include_str!("../../../book/src/schrodinger.md")]
    pub struct Schrodinger;
    #[doc = include_str!("../../../book/src/polar.md")]
    pub struct Polar;
    #[doc = include_str!("../../../book/src/k_vanishes.md")]
    pub struct KVanishes;
    #[doc = include_str!("../../../book/src/counterexample.md")]
    pub struct Counterexample;
}
