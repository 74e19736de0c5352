//! Momentum, energy and the modified charges `P + M(0)` and `E − B(0)`.
//!
//! On a finite domain the charges also change through the outer edges, so
//! every report carries the edge flux rates and their time integrals. The
//! conserved combinations are `P + M₀ − ∫flux_p` and `E − B₀ − ∫flux_e`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sim::state::d1;
use crate::sim::{bulk_potential, Coupling, FieldState};

/// `P = (k/4π) ∫ ∂ₜφ ∂ₓφ dx` over both half-lines.
pub fn momentum(s: &FieldState) -> f64 {
    let density = |phi: &[f64], pi: &[f64]| -> Vec<f64> {
        (0..phi.len()).map(|i| pi[i] * d1(phi, i, s.dx)).collect()
    };
    let total = trapezoid(&density(&s.phi1, &s.pi1), s.dx)
        + trapezoid(&density(&s.phi2, &s.pi2), s.dx);
    s.params.k / (4.0 * PI) * total
}

/// `E = (k/8π) ∫ [(8π/k) V − (∂ₜφ)² − (∂ₓφ)²] dx` with
/// `V = −(kμ²/2π) e^{-2φ}`.
pub fn energy(s: &FieldState) -> f64 {
    let (mu, k) = (s.params.mu, s.params.k);
    let density = |phi: &[f64], pi: &[f64]| -> Vec<f64> {
        (0..phi.len())
            .map(|i| {
                let px = d1(phi, i, s.dx);
                bulk_potential(phi[i], mu, k) - k / (8.0 * PI) * (pi[i] * pi[i] + px * px)
            })
            .collect()
    };
    trapezoid(&density(&s.phi1, &s.pi1), s.dx) + trapezoid(&density(&s.phi2, &s.pi2), s.dx)
}

/// `(B₀, M₀)`: border function and its partner at the defect.
pub fn border_values(s: &FieldState) -> Result<(f64, f64)> {
    if s.params.lambda == 0.0 {
        return Err(Error::DivisionByZero("border values need lambda != 0"));
    }
    let b = s.params.border()?;
    let (p1, p2) = (s.phi1[s.n], s.phi2[0]);
    Ok((b.value(p1, p2), b.partner(p1, p2)))
}

/// Rates `(dP/dt, dE/dt)` contributed by the edges `x = −L` and `x = L`.
pub fn edge_flux(s: &FieldState) -> (f64, f64) {
    let (mu, k) = (s.params.mu, s.params.k);
    let c = k / (4.0 * PI);
    let n = s.n;
    let (p1, t1, x1) = (s.phi1[0], s.pi1[0], d1(&s.phi1, 0, s.dx));
    let (p2, t2, x2) = (s.phi2[n], s.pi2[n], d1(&s.phi2, n, s.dx));
    let w = |p: f64, t: f64, x: f64| c * 0.5 * (t * t + x * x) + bulk_potential(p, mu, k);
    let flux_p = w(p2, t2, x2) - w(p1, t1, x1);
    let flux_e = c * (t1 * x1 - t2 * x2);
    (flux_p, flux_e)
}

fn trapezoid(v: &[f64], h: f64) -> f64 {
    let n = v.len();
    if n < 2 {
        return 0.0;
    }
    h * (v[1..n - 1].iter().sum::<f64>() + 0.5 * (v[0] + v[n - 1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChargeReport {
    pub t: f64,
    pub p: f64,
    pub e: f64,
    pub b0: f64,
    pub m0: f64,
    pub p_mod: f64,
    pub e_mod: f64,
    pub flux_p: f64,
    pub flux_e: f64,
    pub cum_flux_p: f64,
    pub cum_flux_e: f64,
}

impl ChargeReport {
    pub const CSV_HEADER: &'static str =
        "t,P,E,B0,M0,P_mod,E_mod,flux_p,flux_e,cum_flux_p,cum_flux_e";

    pub fn csv_row(&self) -> String {
        [
            self.t,
            self.p,
            self.e,
            self.b0,
            self.m0,
            self.p_mod,
            self.e_mod,
            self.flux_p,
            self.flux_e,
            self.cum_flux_p,
            self.cum_flux_e,
        ]
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(",")
    }

    /// `P + M₀ − ∫flux_p`
    pub fn p_conserved(&self) -> f64 {
        self.p_mod - self.cum_flux_p
    }

    /// `E − B₀ − ∫flux_e`
    pub fn e_conserved(&self) -> f64 {
        self.e_mod - self.cum_flux_e
    }

    /// `P − ∫flux_p`, the momentum without the defect correction.
    pub fn p_uncorrected(&self) -> f64 {
        self.p - self.cum_flux_p
    }
}

/// Builds a [`ChargeReport`] series, integrating the edge flux in time
/// with the trapezoid rule between successive observations.
#[derive(Debug, Clone, Default)]
pub struct ChargeMonitor {
    reports: Vec<ChargeReport>,
}

impl ChargeMonitor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn observe(&mut self, s: &FieldState) -> Result<ChargeReport> {
        let (b0, m0) = match s.coupling {
            Coupling::Defect if s.params.mu != 0.0 => border_values(s)?,
            _ => (0.0, 0.0),
        };
        let (p, e) = (momentum(s), energy(s));
        let (flux_p, flux_e) = edge_flux(s);
        let (cum_flux_p, cum_flux_e) = match self.reports.last() {
            Some(prev) => {
                let dt = s.t - prev.t;
                (
                    prev.cum_flux_p + 0.5 * dt * (prev.flux_p + flux_p),
                    prev.cum_flux_e + 0.5 * dt * (prev.flux_e + flux_e),
                )
            }
            None => (0.0, 0.0),
        };
        let r = ChargeReport {
            t: s.t,
            p,
            e,
            b0,
            m0,
            p_mod: p + m0,
            e_mod: e - b0,
            flux_p,
            flux_e,
            cum_flux_p,
            cum_flux_e,
        };
        self.reports.push(r);
        Ok(r)
    }

    pub fn reports(&self) -> &[ChargeReport] {
        &self.reports
    }

    pub fn into_reports(self) -> Vec<ChargeReport> {
        self.reports
    }
}

/// Largest deviations from the initial value over a series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftStats {
    pub p_mod: f64,
    pub e_mod: f64,
    pub p_uncorrected: f64,
}

pub fn drift_monitor(series: &[ChargeReport]) -> Result<DriftStats> {
    let first = match series {
        [first, _, ..] => first,
        _ => {
            return Err(Error::InvalidInput(
                "drift needs at least two charge reports".into(),
            ))
        }
    };
    let drift = |f: fn(&ChargeReport) -> f64| {
        let base = f(first);
        series.iter().map(|r| (f(r) - base).abs()).fold(0.0, f64::max)
    };
    Ok(DriftStats {
        p_mod: drift(ChargeReport::p_conserved),
        e_mod: drift(ChargeReport::e_conserved),
        p_uncorrected: drift(ChargeReport::p_uncorrected),
    })
}

/// `log₂(coarse / fine)` for a pair of runs whose step differs by two.
pub fn observed_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}
