//! Two-field Liouville evolution with a defect at `x = 0`, exact oracles and
//! the Bäcklund generator.

pub mod backlund;
pub mod border;
pub mod exact;
pub mod state;
pub mod stepper;

pub use backlund::{backlund_generate, backlund_initial_state, LightConeField, LightConeGrid};
pub use border::{bulk_potential, BorderFunction};
pub use exact::{ExactKind, ExactSolution, ProbeRegion};
pub use state::FieldState;
pub use stepper::{bulk_rhs, defect_closure, OuterBoundary, SimConfig, Simulator};

use crate::error::Result;

/// Model parameters: mass scale `μ`, normalization `k` and defect
/// parameter `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub mu: f64,
    pub k: f64,
    pub lambda: f64,
}

impl Params {
    pub const DEFAULT_K: f64 = -4.0 * std::f64::consts::PI;

    pub fn new(mu: f64, k: f64, lambda: f64) -> Self {
        Self { mu, k, lambda }
    }

    pub fn border(&self) -> Result<BorderFunction> {
        BorderFunction::new(self.mu, self.k, self.lambda)
    }
}

/// How the two half-lines talk to each other at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// Frozen Bäcklund conditions from the border function.
    Defect,
    /// No defect: the two grids behave as one continuous field.
    Transparent,
}

/// Field value and derivatives up to second order at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub phi: f64,
    pub phi_t: f64,
    pub phi_x: f64,
    pub phi_tt: f64,
    pub phi_tx: f64,
    pub phi_xx: f64,
}

impl Jet {
    /// `∂φ = ½(φ_t + φ_x)`
    pub fn d(&self) -> f64 {
        0.5 * (self.phi_t + self.phi_x)
    }

    /// `∂̄φ = ½(φ_t − φ_x)`
    pub fn dbar(&self) -> f64 {
        0.5 * (self.phi_t - self.phi_x)
    }
}

/// The two fields at a common point, usually the defect.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JetPair {
    pub first: Jet,
    pub second: Jet,
}

impl JetPair {
    pub fn new(first: Jet, second: Jet) -> Self {
        Self { first, second }
    }

    /// `φ⁺ = φ₁ + φ₂`
    pub fn phi_plus(&self) -> f64 {
        self.first.phi + self.second.phi
    }

    /// `φ⁻ = φ₁ − φ₂`
    pub fn phi_minus(&self) -> f64 {
        self.first.phi - self.second.phi
    }
}
