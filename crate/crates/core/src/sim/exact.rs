//! Closed-form solutions of `φ_tt − φ_xx = 4μ² e^{-2φ}` used as oracles.
//!
//! Every solution is checked when it is built: the residual of the field
//! equation, computed from the analytic derivatives, must stay below
//! [`ORACLE_TOL`] over a probe grid. Custom light-cone solutions are also
//! checked against finite differences of the closed form, which catches
//! derivative closures that do not belong to the supplied profiles.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sim::Jet;

/// Relative residual bound accepted at construction time.
pub const ORACLE_TOL: f64 = 1e-8;

/// A monotone profile `F` with its first three derivatives: `[F, F', F'', F''']`.
pub type Profile = Arc<dyn Fn(f64) -> [f64; 4] + Send + Sync>;

#[derive(Clone)]
pub enum ExactKind {
    /// `φ = ln(2|μ|(x − x₀))`, static, singular at `x = x₀`.
    StaticLog { x0: f64 },
    /// `φ = ln((2|μ|/ω) cosh ωt)`.
    CoshTime { omega: f64 },
    /// `φ = ln((2|μ|/ω) cosh(ω(t cosh β + x sinh β − s)))`: the cosh
    /// solution boosted with rapidity `β` and delayed by `s`.
    BoostedCosh {
        omega: f64,
        rapidity: f64,
        shift: f64,
    },
    /// `φ = ln|μ| + ln|F(z) − G(z̄)| − ½ ln(F'(z) G'(z̄))` with `F' G' > 0`,
    /// `z = t + x`, `z̄ = t − x`.
    Custom { f: Profile, g: Profile },
}

impl fmt::Debug for ExactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactKind::StaticLog { x0 } => write!(f, "StaticLog {{ x0: {x0} }}"),
            ExactKind::CoshTime { omega } => write!(f, "CoshTime {{ omega: {omega} }}"),
            ExactKind::BoostedCosh {
                omega,
                rapidity,
                shift,
            } => write!(
                f,
                "BoostedCosh {{ omega: {omega}, rapidity: {rapidity}, shift: {shift} }}"
            ),
            ExactKind::Custom { .. } => write!(f, "Custom {{ .. }}"),
        }
    }
}

/// Rectangle of `(t, x)` on which an exact solution is probed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRegion {
    pub t: (f64, f64),
    pub x: (f64, f64),
}

impl ProbeRegion {
    pub fn new(t: (f64, f64), x: (f64, f64)) -> Self {
        Self { t, x }
    }

    fn points(&self, n: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        let lerp = move |(a, b): (f64, f64), i: usize| a + (b - a) * i as f64 / (n - 1) as f64;
        (0..n).flat_map(move |i| (0..n).map(move |j| (lerp(self.t, i), lerp(self.x, j))))
    }
}

#[derive(Clone, Debug)]
pub struct ExactSolution {
    mu: f64,
    kind: ExactKind,
}

impl ExactSolution {
    /// Builds and verifies a solution on `probe`.
    pub fn new(mu: f64, kind: ExactKind, probe: ProbeRegion) -> Result<Self> {
        if mu == 0.0 {
            return Err(Error::InvalidInput(
                "exact Liouville solutions need mu != 0".into(),
            ));
        }
        match &kind {
            ExactKind::CoshTime { omega } | ExactKind::BoostedCosh { omega, .. }
                if *omega <= 0.0 =>
            {
                return Err(Error::InvalidInput("omega must be positive".into()));
            }
            _ => {}
        }
        let sol = Self { mu, kind };
        sol.verify(probe)?;
        Ok(sol)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kind(&self) -> &ExactKind {
        &self.kind
    }

    /// The Bäcklund partner pair `(φ₁, φ₂)` built from boosted cosh
    /// solutions. Both satisfy the Bäcklund relations with parameter
    /// `lambda` at every `(t, x)`: the unboosted pair needs the delay
    /// `sinh(ω s) = λ₀ ω / μ`, and a boost of rapidity `β` rescales
    /// `λ₀ → λ₀ e^β`.
    pub fn backlund_pair(
        mu: f64,
        lambda: f64,
        omega: f64,
        rapidity: f64,
        probe: ProbeRegion,
    ) -> Result<(Self, Self)> {
        if lambda == 0.0 {
            return Err(Error::DivisionByZero("Backlund pair needs lambda != 0"));
        }
        let lambda0 = lambda * (-rapidity).exp();
        let shift = (lambda0 * omega / mu).asinh() / omega;
        let first = Self::new(
            mu,
            ExactKind::BoostedCosh {
                omega,
                rapidity,
                shift: 0.0,
            },
            probe,
        )?;
        let second = Self::new(
            mu,
            ExactKind::BoostedCosh {
                omega,
                rapidity,
                shift,
            },
            probe,
        )?;
        Ok((first, second))
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        self.jet(t, x).phi
    }

    /// Field and derivatives up to second order, evaluated analytically.
    pub fn jet(&self, t: f64, x: f64) -> Jet {
        let amu = self.mu.abs();
        match &self.kind {
            ExactKind::StaticLog { x0 } => {
                let s = x - x0;
                Jet {
                    phi: (2.0 * amu * s).ln(),
                    phi_t: 0.0,
                    phi_x: 1.0 / s,
                    phi_tt: 0.0,
                    phi_tx: 0.0,
                    phi_xx: -1.0 / (s * s),
                }
            }
            ExactKind::CoshTime { omega } => cosh_jet(amu, *omega, 0.0, 0.0, t, x),
            ExactKind::BoostedCosh {
                omega,
                rapidity,
                shift,
            } => cosh_jet(amu, *omega, *rapidity, *shift, t, x),
            ExactKind::Custom { f, g } => {
                let [fv, f1, f2, f3] = f(t + x);
                let [gv, g1, g2, g3] = g(t - x);
                let d = fv - gv;
                let phi = amu.ln() + d.abs().ln() - 0.5 * (f1 * g1).ln();
                // light-cone derivatives
                let dz = f1 / d - f2 / (2.0 * f1);
                let dzb = -g1 / d - g2 / (2.0 * g1);
                let dzz = f2 / d - f1 * f1 / (d * d) - f3 / (2.0 * f1) + f2 * f2 / (2.0 * f1 * f1);
                let dzbzb =
                    -g2 / d - g1 * g1 / (d * d) - g3 / (2.0 * g1) + g2 * g2 / (2.0 * g1 * g1);
                let dzzb = f1 * g1 / (d * d);
                Jet {
                    phi,
                    phi_t: dz + dzb,
                    phi_x: dz - dzb,
                    phi_tt: dzz + 2.0 * dzzb + dzbzb,
                    phi_tx: dzz - dzbzb,
                    phi_xx: dzz - 2.0 * dzzb + dzbzb,
                }
            }
        }
    }

    /// `φ_tt − φ_xx − 4μ² e^{-2φ}` from the analytic derivatives.
    pub fn residual(&self, t: f64, x: f64) -> f64 {
        let j = self.jet(t, x);
        j.phi_tt - j.phi_xx - 4.0 * self.mu * self.mu * (-2.0 * j.phi).exp()
    }

    fn verify(&self, probe: ProbeRegion) -> Result<()> {
        const N: usize = 9;
        for (t, x) in probe.points(N) {
            let j = self.jet(t, x);
            let pot = 4.0 * self.mu * self.mu * (-2.0 * j.phi).exp();
            let res = (j.phi_tt - j.phi_xx - pot).abs();
            let scale = 1.0 + j.phi_tt.abs() + j.phi_xx.abs() + pot;
            let rel = res / scale;
            if !rel.is_finite() || !j.phi.is_finite() || rel > ORACLE_TOL {
                return Err(Error::OracleRejected {
                    residual: if rel.is_finite() { rel } else { f64::INFINITY },
                    t,
                    x,
                });
            }
            if let ExactKind::Custom { .. } = self.kind {
                self.check_derivatives(t, x, &j)?;
            }
        }
        Ok(())
    }

    fn check_derivatives(&self, t: f64, x: f64, j: &Jet) -> Result<()> {
        const H: f64 = 1e-5;
        const TOL: f64 = 1e-6;
        let ft = (self.value(t + H, x) - self.value(t - H, x)) / (2.0 * H);
        let fx = (self.value(t, x + H) - self.value(t, x - H)) / (2.0 * H);
        let ftt = (self.jet(t + H, x).phi_t - self.jet(t - H, x).phi_t) / (2.0 * H);
        let fxx = (self.jet(t, x + H).phi_x - self.jet(t, x - H).phi_x) / (2.0 * H);
        let ftx = (self.jet(t, x + H).phi_t - self.jet(t, x - H).phi_t) / (2.0 * H);
        let worst = [
            (ft, j.phi_t),
            (fx, j.phi_x),
            (ftt, j.phi_tt),
            (fxx, j.phi_xx),
            (ftx, j.phi_tx),
        ]
        .iter()
        .map(|(fd, an)| (fd - an).abs() / (1.0 + an.abs()))
        .fold(0.0, f64::max);
        if !worst.is_finite() || worst > TOL {
            return Err(Error::OracleRejected {
                residual: if worst.is_finite() { worst } else { f64::INFINITY },
                t,
                x,
            });
        }
        Ok(())
    }
}

fn log_cosh(s: f64) -> f64 {
    let a = s.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

fn cosh_jet(amu: f64, omega: f64, rapidity: f64, shift: f64, t: f64, x: f64) -> Jet {
    let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
    let s = omega * (t * ch + x * sh - shift);
    let th = s.tanh();
    let sech2 = 1.0 - th * th;
    let w2 = omega * omega;
    Jet {
        phi: (2.0 * amu / omega).ln() + log_cosh(s),
        phi_t: omega * ch * th,
        phi_x: omega * sh * th,
        phi_tt: w2 * ch * ch * sech2,
        phi_tx: w2 * ch * sh * sech2,
        phi_xx: w2 * sh * sh * sech2,
    }
}
