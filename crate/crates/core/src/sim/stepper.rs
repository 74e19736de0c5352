//! Velocity-Verlet evolution of the two half-line fields.
//!
//! Interior nodes use the centered Laplacian. At `x = 0` each field gets a
//! ghost point whose value enforces the defect conditions
//!
//! ```text
//!   ∂ₓφ₁ = ∂ₜφ₂ − c₁,   ∂ₓφ₂ = ∂ₜφ₁ + c₂,   c_p = (4π/k) δB/δφ_p
//! ```
//!
//! The conditions couple positions to the other field's velocity, so the
//! closing half-kick is solved as a 2×2 linear system at the defect nodes.

use crate::error::{Error, Result};
use crate::sim::{BorderFunction, Coupling, ExactSolution, FieldState};

/// Largest accepted `dt / dx`.
pub const CFL_LIMIT: f64 = 0.5;

/// `∂ₜ²φ = ∂ₓ²φ + 4μ² e^{-2φ}` at the interior points (`len − 2` values).
pub fn bulk_rhs(phi: &[f64], dx: f64, mu: f64) -> Vec<f64> {
    let inv = 1.0 / (dx * dx);
    let m2 = 4.0 * mu * mu;
    phi.windows(3)
        .map(|w| (w[0] - 2.0 * w[1] + w[2]) * inv + m2 * (-2.0 * w[1]).exp())
        .collect()
}

/// Spatial derivatives `(∂ₓφ₁(0), ∂ₓφ₂(0))` demanded by the defect
/// conditions, given the fields and their time derivatives at `x = 0`.
pub fn closure_at(border: &BorderFunction, phi1: f64, phi2: f64, pi1: f64, pi2: f64) -> (f64, f64) {
    let (c1, c2) = border.closure_terms(phi1, phi2);
    (pi2 - c1, pi1 + c2)
}

/// [`closure_at`] evaluated on the defect values of a state.
pub fn defect_closure(s: &FieldState) -> Result<(f64, f64)> {
    let border = s.params.border()?;
    let n = s.n;
    Ok(closure_at(&border, s.phi1[n], s.phi2[0], s.pi1[n], s.pi2[0]))
}

/// Treatment of `x = ±L`.
#[derive(Debug, Clone)]
pub enum OuterBoundary {
    /// Dirichlet data from exact solutions for the left and right fields.
    Exact {
        left: ExactSolution,
        right: ExactSolution,
    },
    /// Reflecting wall plus a damping layer `−σ(x)∂ₜφ` of the given width,
    /// `σ` rising quadratically to `strength`.
    Sponge { width: f64, strength: f64 },
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub dt: f64,
    pub boundary: OuterBoundary,
    pub phi_max: f64,
}

impl SimConfig {
    pub const DEFAULT_PHI_MAX: f64 = 30.0;

    pub fn new(dt: f64, boundary: OuterBoundary) -> Self {
        Self {
            dt,
            boundary,
            phi_max: Self::DEFAULT_PHI_MAX,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Simulator {
    state: FieldState,
    config: SimConfig,
    border: BorderFunction,
    t0: f64,
    steps: u64,
    sigma1: Vec<f64>,
    sigma2: Vec<f64>,
}

impl Simulator {
    pub fn new(state: FieldState, config: SimConfig) -> Result<Self> {
        let ratio = config.dt / state.dx;
        if !(config.dt > 0.0) || ratio > CFL_LIMIT {
            return Err(Error::config(
                "dt",
                format!("dt/dx = {ratio} violates the CFL bound dt/dx <= {CFL_LIMIT}"),
            ));
        }
        let border = state.params.border()?;
        let len = state.n + 1;
        let (sigma1, sigma2) = match config.boundary {
            OuterBoundary::Sponge { width, strength } => {
                let s2: Vec<f64> = (0..len)
                    .map(|j| sponge_profile(state.half_length() - state.x2(j), width, strength))
                    .collect();
                let s1 = s2.iter().rev().copied().collect();
                (s1, s2)
            }
            OuterBoundary::Exact { .. } => (vec![0.0; len], vec![0.0; len]),
        };
        let t0 = state.t;
        let mut sim = Self {
            state,
            config,
            border,
            t0,
            steps: 0,
            sigma1,
            sigma2,
        };
        sim.apply_dirichlet();
        sim.check_bounds()?;
        Ok(sim)
    }

    pub fn state(&self) -> &FieldState {
        &self.state
    }

    pub fn into_state(self) -> FieldState {
        self.state
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn border(&self) -> &BorderFunction {
        &self.border
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Number of steps that reach `t_end` from the current time, rounding
    /// to the nearest multiple of `dt`.
    pub fn steps_until(&self, t_end: f64) -> u64 {
        let n = ((t_end - self.state.t) / self.config.dt).round();
        if n > 0.0 {
            n as u64
        } else {
            0
        }
    }

    /// Advances one `dt`.
    pub fn step(&mut self) -> Result<()> {
        let dt = self.config.dt;
        let half = 0.5 * dt;

        let (a1, a2) = self.accelerations();
        let s = &mut self.state;
        for i in 0..=s.n {
            s.pi1[i] += half * (a1[i] - self.sigma1[i] * s.pi1[i]);
            s.pi2[i] += half * (a2[i] - self.sigma2[i] * s.pi2[i]);
        }
        for i in 0..=s.n {
            s.phi1[i] += dt * s.pi1[i];
            s.phi2[i] += dt * s.pi2[i];
        }
        self.steps += 1;
        self.state.t = self.t0 + self.steps as f64 * dt;
        self.apply_dirichlet();

        // closing half-kick: explicit except for the velocity terms of the
        // defect ghosts and the damping, which are taken at the new level
        let (a1, a2) = self.accelerations_without_velocity();
        let s = &mut self.state;
        let n = s.n;
        for i in 0..=n {
            s.pi1[i] = (s.pi1[i] + half * a1[i]) / (1.0 + half * self.sigma1[i]);
            s.pi2[i] = (s.pi2[i] + half * a2[i]) / (1.0 + half * self.sigma2[i]);
        }
        if s.coupling == Coupling::Defect {
            let kappa = dt / s.dx;
            let (p1, p2) = (s.pi1[n], s.pi2[0]);
            let x = (p1 + kappa * p2) / (1.0 + kappa * kappa);
            s.pi1[n] = x;
            s.pi2[0] = p2 - kappa * x;
        }
        self.apply_dirichlet();
        self.check_bounds()
    }

    /// Steps until `t_end`, calling `observe` on the initial state and after
    /// every step.
    pub fn run<F>(&mut self, t_end: f64, mut observe: F) -> Result<()>
    where
        F: FnMut(&FieldState) -> Result<()>,
    {
        observe(&self.state)?;
        for _ in 0..self.steps_until(t_end) {
            self.step()?;
            observe(&self.state)?;
        }
        Ok(())
    }

    fn accelerations(&self) -> (Vec<f64>, Vec<f64>) {
        let (mut a1, mut a2) = self.accelerations_without_velocity();
        if self.state.coupling == Coupling::Defect {
            let s = &self.state;
            let k = 2.0 / s.dx;
            a1[s.n] += k * s.pi2[0];
            a2[0] -= k * s.pi1[s.n];
        }
        (a1, a2)
    }

    /// Accelerations with the defect-ghost velocity terms left out.
    fn accelerations_without_velocity(&self) -> (Vec<f64>, Vec<f64>) {
        let s = &self.state;
        let n = s.n;
        let dx = s.dx;
        let inv = 1.0 / (dx * dx);
        let m2 = 4.0 * s.params.mu * s.params.mu;
        let pot = |p: f64| m2 * (-2.0 * p).exp();

        let mut a1 = vec![0.0; n + 1];
        let mut a2 = vec![0.0; n + 1];
        a1[1..n].copy_from_slice(&bulk_rhs(&s.phi1, dx, s.params.mu));
        a2[1..n].copy_from_slice(&bulk_rhs(&s.phi2, dx, s.params.mu));

        match s.coupling {
            Coupling::Defect => {
                let (c1, c2) = self.border.closure_terms(s.phi1[n], s.phi2[0]);
                a1[n] = (2.0 * s.phi1[n - 1] - 2.0 * s.phi1[n] - 2.0 * dx * c1) * inv
                    + pot(s.phi1[n]);
                a2[0] = (2.0 * s.phi2[1] - 2.0 * s.phi2[0] - 2.0 * dx * c2) * inv
                    + pot(s.phi2[0]);
            }
            Coupling::Transparent => {
                a1[n] = (s.phi1[n - 1] - 2.0 * s.phi1[n] + s.phi2[1]) * inv + pot(s.phi1[n]);
                a2[0] = (s.phi1[n - 1] - 2.0 * s.phi2[0] + s.phi2[1]) * inv + pot(s.phi2[0]);
            }
        }

        if let OuterBoundary::Sponge { .. } = self.config.boundary {
            a1[0] = 2.0 * (s.phi1[1] - s.phi1[0]) * inv + pot(s.phi1[0]);
            a2[n] = 2.0 * (s.phi2[n - 1] - s.phi2[n]) * inv + pot(s.phi2[n]);
        }
        (a1, a2)
    }

    fn apply_dirichlet(&mut self) {
        if let OuterBoundary::Exact { left, right } = &self.config.boundary {
            let s = &mut self.state;
            let l = s.half_length();
            let j1 = left.jet(s.t, -l);
            let j2 = right.jet(s.t, l);
            s.phi1[0] = j1.phi;
            s.pi1[0] = j1.phi_t;
            s.phi2[s.n] = j2.phi;
            s.pi2[s.n] = j2.phi_t;
        }
    }

    fn check_bounds(&self) -> Result<()> {
        let bound = self.config.phi_max;
        let worst = self.state.max_abs_phi();
        if !(worst <= bound) {
            return Err(Error::Blowup {
                t: self.state.t,
                value: worst,
                bound,
            });
        }
        Ok(())
    }
}

/// `σ` at distance `d` from the outer edge.
fn sponge_profile(d: f64, width: f64, strength: f64) -> f64 {
    if width <= 0.0 || d >= width {
        0.0
    } else {
        let u = 1.0 - d / width;
        strength * u * u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{ExactKind, Params, ProbeRegion};
    use std::f64::consts::PI;

    #[test]
    fn rhs_of_zero_field_is_four_mu_squared() {
        let r = bulk_rhs(&[0.0; 6], 0.1, 1.0);
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|&v| (v - 4.0).abs() < 1e-15));
    }

    #[test]
    fn rhs_of_static_log_is_small() {
        let (mu, x0, dx) = (0.7, -1.0, 1e-3);
        let phi: Vec<f64> = (0..50)
            .map(|i| (2.0 * mu * (i as f64 * dx - x0)).ln())
            .collect();
        let r = bulk_rhs(&phi, dx, mu);
        assert!(r.iter().all(|v| v.abs() < 1e-5));
    }

    #[test]
    fn closure_at_origin() {
        let b = BorderFunction::new(1.0, 2.0 * PI, 1.0).unwrap();
        let (d1, d2) = closure_at(&b, 0.0, 0.0, 0.0, 0.0);
        assert!((d1 - 2.0).abs() < 1e-15);
        assert!((d2 + 2.0).abs() < 1e-15);
    }

    #[test]
    fn closure_is_frozen_backlund() {
        let b = BorderFunction::new(1.3, -4.0 * PI, 0.45).unwrap();
        let (p1, p2, q1, q2) = (0.3, -0.6, 0.9, -0.2);
        let (x1, x2) = closure_at(&b, p1, p2, q1, q2);
        let d = |t: f64, x: f64| 0.5 * (t + x);
        let db = |t: f64, x: f64| 0.5 * (t - x);
        let r1 = d(q1, x1) - d(q2, x2) - 2.0 * b.mu * b.lambda * (-(p1 + p2)).exp();
        let r2 = db(q1, x1) + db(q2, x2) - b.mu / b.lambda * (p1 - p2).sinh();
        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);
    }

    #[test]
    fn free_closure_is_transmission() {
        let b = BorderFunction::new(0.0, 1.0, 0.0).unwrap();
        assert_eq!(closure_at(&b, 0.4, 0.1, 0.7, -0.3), (-0.3, 0.7));
    }

    #[test]
    fn cfl_violation_rejected() {
        let probe = ProbeRegion::new((0.0, 1.0), (-1.0, 1.0));
        let sol = ExactSolution::new(1.0, ExactKind::CoshTime { omega: 1.0 }, probe).unwrap();
        let p = Params::new(1.0, Params::DEFAULT_K, 1.0);
        let s = FieldState::from_exact(p, Coupling::Transparent, 0.0, 0.1, 10, &sol, &sol)
            .unwrap();
        let cfg = SimConfig::new(0.09, OuterBoundary::Sponge { width: 0.2, strength: 1.0 });
        let err = Simulator::new(s, cfg).unwrap_err();
        assert!(err.to_string().contains("CFL"));
    }

    #[test]
    fn zero_span_is_identity() {
        let probe = ProbeRegion::new((0.0, 1.0), (-1.0, 1.0));
        let sol = ExactSolution::new(1.0, ExactKind::CoshTime { omega: 1.0 }, probe).unwrap();
        let p = Params::new(1.0, Params::DEFAULT_K, 1.0);
        let s = FieldState::from_exact(p, Coupling::Defect, 0.0, 0.1, 10, &sol, &sol).unwrap();
        let mut sim = Simulator::new(
            s.clone(),
            SimConfig::new(0.05, OuterBoundary::Sponge { width: 0.0, strength: 0.0 }),
        )
        .unwrap();
        sim.run(0.0, |_| Ok(())).unwrap();
        assert_eq!(sim.state(), &s);
    }

    #[test]
    fn blowup_reported() {
        let probe = ProbeRegion::new((0.0, 1.0), (-1.0, 1.0));
        let sol = ExactSolution::new(1.0, ExactKind::CoshTime { omega: 1.0 }, probe).unwrap();
        let p = Params::new(1.0, Params::DEFAULT_K, 1.0);
        let s = FieldState::from_exact(p, Coupling::Transparent, 0.0, 0.1, 10, &sol, &sol)
            .unwrap();
        let mut cfg = SimConfig::new(0.05, OuterBoundary::Sponge { width: 0.0, strength: 0.0 });
        cfg.phi_max = 0.8;
        let mut sim = Simulator::new(s, cfg).unwrap();
        let err = sim.run(5.0, |_| Ok(())).unwrap_err();
        assert!(matches!(err, Error::Blowup { .. }));
    }

    #[test]
    fn transparent_run_tracks_cosh_time() {
        let (mu, omega) = (1.0, 1.2);
        let probe = ProbeRegion::new((0.0, 1.0), (-1.0, 1.0));
        let sol = ExactSolution::new(mu, ExactKind::CoshTime { omega }, probe).unwrap();
        let p = Params::new(mu, Params::DEFAULT_K, 1.0);
        let dx = 1.0 / 64.0;
        let s = FieldState::from_exact(p, Coupling::Transparent, 0.0, dx, 64, &sol, &sol)
            .unwrap();
        let boundary = OuterBoundary::Exact {
            left: sol.clone(),
            right: sol.clone(),
        };
        let mut sim = Simulator::new(s, SimConfig::new(0.5 * dx, boundary)).unwrap();
        sim.run(1.0, |_| Ok(())).unwrap();
        let st = sim.state();
        let err = (0..=st.n)
            .map(|i| (st.phi1[i] - sol.value(st.t, st.x1(i))).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-4, "err = {err}");
    }
}
