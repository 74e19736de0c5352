//! Bäcklund generation of a partner field on a light-cone grid.
//!
//! Given `φ₁` with its light-cone derivatives, `φ₂` is obtained by
//! integrating
//!
//! ```text
//!   ∂φ₂ = ∂φ₁ − 2μλ e^{-(φ₁+φ₂)}
//!   ∂̄φ₂ = −∂̄φ₁ + (μ/λ) sinh(φ₁ − φ₂)
//! ```
//!
//! with Heun's method: first along `z̄` on the column `z = z₀`, then along
//! `z` on every row.

use crate::error::{Error, Result};
use crate::sim::{Coupling, ExactSolution, FieldState, Jet, Params};

/// Nodes `(z₀ + i·h, z̄₀ + j·h)` for `i ≤ nz`, `j ≤ nzbar`, where
/// `z = t + x`, `z̄ = t − x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightConeGrid {
    pub z0: f64,
    pub zbar0: f64,
    pub step: f64,
    pub nz: usize,
    pub nzbar: usize,
}

impl LightConeGrid {
    /// The square grid whose anti-diagonal `i + j = 2n` is the slice
    /// `t = t0`, `x ∈ [−n·dx, n·dx]` with spacing `dx`.
    pub fn for_slice(t0: f64, dx: f64, n: usize) -> Self {
        let l = n as f64 * dx;
        Self {
            z0: t0 - l,
            zbar0: t0 - l,
            step: dx,
            nz: 2 * n,
            nzbar: 2 * n,
        }
    }

    pub fn z(&self, i: usize) -> f64 {
        self.z0 + i as f64 * self.step
    }

    pub fn zbar(&self, j: usize) -> f64 {
        self.zbar0 + j as f64 * self.step
    }

    /// `(t, x)` of node `(i, j)`.
    pub fn tx(&self, i: usize, j: usize) -> (f64, f64) {
        let (z, zb) = (self.z(i), self.zbar(j));
        (0.5 * (z + zb), 0.5 * (z - zb))
    }

    fn index(&self, i: usize, j: usize) -> usize {
        i * (self.nzbar + 1) + j
    }

    fn len(&self) -> usize {
        (self.nz + 1) * (self.nzbar + 1)
    }
}

/// A field with its light-cone derivatives on a [`LightConeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct LightConeField {
    pub grid: LightConeGrid,
    pub phi: Vec<f64>,
    pub d: Vec<f64>,
    pub dbar: Vec<f64>,
}

impl LightConeField {
    /// Samples a field given by its jet at each `(t, x)`.
    pub fn sample<F: Fn(f64, f64) -> Jet>(grid: LightConeGrid, jet: F) -> Self {
        let mut out = Self::zeros(grid);
        for i in 0..=grid.nz {
            for j in 0..=grid.nzbar {
                let (t, x) = grid.tx(i, j);
                let k = grid.index(i, j);
                let jt = jet(t, x);
                out.phi[k] = jt.phi;
                out.d[k] = jt.d();
                out.dbar[k] = jt.dbar();
            }
        }
        out
    }

    fn zeros(grid: LightConeGrid) -> Self {
        let n = grid.len();
        Self {
            grid,
            phi: vec![0.0; n],
            d: vec![0.0; n],
            dbar: vec![0.0; n],
        }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.phi[self.grid.index(i, j)]
    }

    /// `(x, φ, ∂ₜφ)` along the anti-diagonal `i + j = level`, ordered by
    /// increasing `x`.
    pub fn slice(&self, level: usize) -> Vec<(f64, f64, f64)> {
        let g = &self.grid;
        let lo = level.saturating_sub(g.nzbar);
        let hi = level.min(g.nz);
        (lo..=hi)
            .map(|i| {
                let j = level - i;
                let k = g.index(i, j);
                (g.tx(i, j).1, self.phi[k], self.d[k] + self.dbar[k])
            })
            .collect()
    }
}

/// Integrates the Bäcklund pair from `seed = φ₂(z₀, z̄₀)`.
pub fn backlund_generate(
    first: &LightConeField,
    mu: f64,
    lambda: f64,
    seed: f64,
) -> Result<LightConeField> {
    if lambda == 0.0 {
        return Err(Error::DivisionByZero("Backlund generation needs lambda != 0"));
    }
    let g = first.grid;
    let h = g.step;
    let mut out = LightConeField::zeros(g);

    // ∂φ₂ and ∂̄φ₂ at node k for a given φ₂
    let rates = move |k: usize, p2: f64| {
        let p1 = first.phi[k];
        let dz = first.d[k] - 2.0 * mu * lambda * (-(p1 + p2)).exp();
        let dzb = -first.dbar[k] + mu / lambda * (p1 - p2).sinh();
        (dz, dzb)
    };
    let store = move |out: &mut LightConeField, i: usize, j: usize, p2: f64| -> Result<()> {
        let k = g.index(i, j);
        let (dz, dzb) = rates(k, p2);
        if !(p2.is_finite() && dz.is_finite() && dzb.is_finite()) {
            return Err(Error::IntegrationDiverged { i, j });
        }
        out.phi[k] = p2;
        out.d[k] = dz;
        out.dbar[k] = dzb;
        Ok(())
    };

    store(&mut out, 0, 0, seed)?;
    for j in 1..=g.nzbar {
        let prev = g.index(0, j - 1);
        let p = out.phi[prev];
        let s0 = out.dbar[prev];
        let s1 = rates(g.index(0, j), p + h * s0).1;
        store(&mut out, 0, j, p + 0.5 * h * (s0 + s1))?;
    }
    for j in 0..=g.nzbar {
        for i in 1..=g.nz {
            let prev = g.index(i - 1, j);
            let p = out.phi[prev];
            let s0 = out.d[prev];
            let s1 = rates(g.index(i, j), p + h * s0).0;
            store(&mut out, i, j, p + 0.5 * h * (s0 + s1))?;
        }
    }
    Ok(out)
}

/// Initial state whose second field is the Bäcklund partner of `first`.
///
/// `φ₁` is sampled from `first` at `t0` on `[−L, 0]`; `φ₂` on `[0, L]` is
/// read off the anti-diagonal of [`backlund_generate`] run on the grid of
/// [`LightConeGrid::for_slice`], seeded with `seed = φ₂(t0 − L, 0)`.
pub fn backlund_initial_state(
    params: Params,
    t0: f64,
    dx: f64,
    n: usize,
    first: &ExactSolution,
    seed: f64,
) -> Result<FieldState> {
    let grid = LightConeGrid::for_slice(t0, dx, n);
    let f1 = LightConeField::sample(grid, |t, x| first.jet(t, x));
    let f2 = backlund_generate(&f1, params.mu, params.lambda, seed)?;
    let slice = f2.slice(2 * n);
    let (phi2, pi2): (Vec<f64>, Vec<f64>) = slice[n..].iter().map(|&(_, p, q)| (p, q)).unzip();
    let (phi1, pi1): (Vec<f64>, Vec<f64>) = (0..=n)
        .map(|i| {
            let j = first.jet(t0, (i as f64 - n as f64) * dx);
            (j.phi, j.phi_t)
        })
        .unzip();
    FieldState::new(params, Coupling::Defect, t0, dx, phi1, pi1, phi2, pi2)
}

/// Max over cells of `|∂∂̄φ − μ² e^{-2φ}|`, both evaluated at cell centres.
pub fn liouville_residual(f: &LightConeField, mu: f64) -> f64 {
    let g = &f.grid;
    let h2 = g.step * g.step;
    let mut worst: f64 = 0.0;
    for i in 0..g.nz {
        for j in 0..g.nzbar {
            let (a, b, c, d) = (f.at(i, j), f.at(i + 1, j), f.at(i, j + 1), f.at(i + 1, j + 1));
            let mixed = (d - b - c + a) / h2;
            let centre = 0.25 * (a + b + c + d);
            worst = worst.max((mixed - mu * mu * (-2.0 * centre).exp()).abs());
        }
    }
    worst
}

/// Max over cells of the residuals of
///
/// ```text
///   ∂̄∂(φ₁ − φ₂) = μ² (e^{-2φ₁} − e^{-2φ₂})
///   ∂̄∂(φ₁ + φ₂) = μ² (e^{-2φ₁} + e^{-2φ₂})
/// ```
pub fn cross_residuals(first: &LightConeField, second: &LightConeField, mu: f64) -> (f64, f64) {
    let g = &first.grid;
    let h2 = g.step * g.step;
    let centre = |f: &LightConeField, i: usize, j: usize| {
        let v = [f.at(i, j), f.at(i + 1, j), f.at(i, j + 1), f.at(i + 1, j + 1)];
        let mixed = (v[3] - v[1] - v[2] + v[0]) / h2;
        (0.25 * v.iter().sum::<f64>(), mixed)
    };
    let (mut rm, mut rp): (f64, f64) = (0.0, 0.0);
    for i in 0..g.nz {
        for j in 0..g.nzbar {
            let (c1, m1) = centre(first, i, j);
            let (c2, m2) = centre(second, i, j);
            let (e1, e2) = ((-2.0 * c1).exp(), (-2.0 * c2).exp());
            rm = rm.max((m1 - m2 - mu * mu * (e1 - e2)).abs());
            rp = rp.max((m1 + m2 - mu * mu * (e1 + e2)).abs());
        }
    }
    (rm, rp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::ProbeRegion;

    fn setup(n: usize) -> (ExactSolution, ExactSolution, LightConeGrid) {
        let probe = ProbeRegion::new((-1.0, 1.0), (-1.0, 1.0));
        let (a, b) = ExactSolution::backlund_pair(1.0, 0.8, 1.1, 0.3, probe).unwrap();
        (a, b, LightConeGrid::for_slice(0.0, 1.0 / n as f64, n))
    }

    #[test]
    fn slice_geometry() {
        let g = LightConeGrid::for_slice(0.5, 0.25, 4);
        let f = LightConeField::sample(g, |t, x| Jet {
            phi: t + 10.0 * x,
            phi_t: 1.0,
            ..Jet::default()
        });
        let s = f.slice(8);
        assert_eq!(s.len(), 9);
        for (k, (x, phi, pt)) in s.iter().enumerate() {
            assert!((x - (k as f64 * 0.25 - 1.0)).abs() < 1e-15);
            assert!((phi - (0.5 + 10.0 * x)).abs() < 1e-12);
            assert!((pt - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn reproduces_analytic_partner() {
        let (a, b, g) = setup(32);
        let f1 = LightConeField::sample(g, |t, x| a.jet(t, x));
        let (t, x) = g.tx(0, 0);
        let f2 = backlund_generate(&f1, 1.0, 0.8, b.value(t, x)).unwrap();
        let err = (0..=g.nz)
            .flat_map(|i| (0..=g.nzbar).map(move |j| (i, j)))
            .map(|(i, j)| {
                let (t, x) = g.tx(i, j);
                (f2.at(i, j) - b.value(t, x)).abs()
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "err = {err}");
    }

    #[test]
    fn free_case_transports_invariants() {
        let g = LightConeGrid::for_slice(0.0, 0.1, 5);
        let f1 = LightConeField::sample(g, |t, x| Jet {
            phi: (t + 0.3 * x).sin(),
            phi_t: (t + 0.3 * x).cos(),
            phi_x: 0.3 * (t + 0.3 * x).cos(),
            ..Jet::default()
        });
        let f2 = backlund_generate(&f1, 0.0, 1.0, 0.2).unwrap();
        for j in 0..=g.nzbar {
            let d0 = f1.at(0, j) - f2.at(0, j);
            for i in 1..=g.nz {
                assert!((f1.at(i, j) - f2.at(i, j) - d0).abs() < 1e-2);
            }
        }
    }

    #[test]
    fn zero_lambda_rejected() {
        let g = LightConeGrid::for_slice(0.0, 0.1, 2);
        let f1 = LightConeField::sample(g, |_, _| Jet::default());
        assert!(matches!(
            backlund_generate(&f1, 1.0, 0.0, 0.0),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn divergence_reported() {
        let g = LightConeGrid::for_slice(0.0, 0.5, 4);
        let f1 = LightConeField::sample(g, |_, _| Jet::default());
        let r = backlund_generate(&f1, 1e3, 1e3, -400.0);
        assert!(matches!(r, Err(Error::IntegrationDiverged { .. })));
    }
}
