use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::sim::{Coupling, ExactSolution, Jet, JetPair, Params};

/// Both fields on their half-lines at one instant.
///
/// `phi1[i]` lives at `x = (i − n)·dx` for `i = 0..=n` (so `phi1[n]` is at the
/// defect) and `phi2[j]` at `x = j·dx`. The two grids share `x = 0` but keep
/// separate values there. `pi1`, `pi2` hold `∂ₜφ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub dx: f64,
    pub n: usize,
    pub phi1: Vec<f64>,
    pub pi1: Vec<f64>,
    pub phi2: Vec<f64>,
    pub pi2: Vec<f64>,
    pub params: Params,
    pub coupling: Coupling,
}

impl FieldState {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        params: Params,
        coupling: Coupling,
        t: f64,
        dx: f64,
        phi1: Vec<f64>,
        pi1: Vec<f64>,
        phi2: Vec<f64>,
        pi2: Vec<f64>,
    ) -> Result<Self> {
        let len = phi1.len();
        if len < 4 || [pi1.len(), phi2.len(), pi2.len()].iter().any(|&l| l != len) {
            return Err(Error::InvalidInput(format!(
                "field arrays must share one length >= 4 (got {}, {}, {}, {})",
                phi1.len(),
                pi1.len(),
                phi2.len(),
                pi2.len()
            )));
        }
        if !(dx > 0.0) {
            return Err(Error::InvalidInput("dx must be positive".into()));
        }
        Ok(Self {
            t,
            dx,
            n: len - 1,
            phi1,
            pi1,
            phi2,
            pi2,
            params,
            coupling,
        })
    }

    /// Samples `φ` and `∂ₜφ` of two exact solutions at time `t` on `[−L, 0]`
    /// and `[0, L]`, with `L = n·dx`.
    pub fn from_exact(
        params: Params,
        coupling: Coupling,
        t: f64,
        dx: f64,
        n: usize,
        first: &ExactSolution,
        second: &ExactSolution,
    ) -> Result<Self> {
        let mut phi1 = Vec::with_capacity(n + 1);
        let mut pi1 = Vec::with_capacity(n + 1);
        let mut phi2 = Vec::with_capacity(n + 1);
        let mut pi2 = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let j1 = first.jet(t, (i as f64 - n as f64) * dx);
            phi1.push(j1.phi);
            pi1.push(j1.phi_t);
            let j2 = second.jet(t, i as f64 * dx);
            phi2.push(j2.phi);
            pi2.push(j2.phi_t);
        }
        Self::new(params, coupling, t, dx, phi1, pi1, phi2, pi2)
    }

    pub fn half_length(&self) -> f64 {
        self.n as f64 * self.dx
    }

    pub fn x1(&self, i: usize) -> f64 {
        (i as f64 - self.n as f64) * self.dx
    }

    pub fn x2(&self, j: usize) -> f64 {
        j as f64 * self.dx
    }

    pub fn max_abs_phi(&self) -> f64 {
        self.phi1
            .iter()
            .chain(&self.phi2)
            .fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
    }

    /// Jet of `φ₁` at grid index `i` from this snapshot. Spatial derivatives
    /// are centered inside and one-sided second order at the ends; `φ_tt`
    /// comes from the field equation.
    pub fn jet1(&self, i: usize) -> Jet {
        snapshot_jet(&self.phi1, &self.pi1, i, self.dx, self.params.mu)
    }

    pub fn jet2(&self, j: usize) -> Jet {
        snapshot_jet(&self.phi2, &self.pi2, j, self.dx, self.params.mu)
    }

    /// Both fields at `x = 0`.
    pub fn defect_jets(&self) -> JetPair {
        JetPair::new(self.jet1(self.n), self.jet2(0))
    }

    /// Writes one field as whitespace-separated columns `x φ ∂ₜφ`.
    pub fn write_field<W: Write>(&self, which: usize, mut out: W) -> Result<()> {
        let (phi, pi) = self.field(which)?;
        for (i, (p, q)) in phi.iter().zip(pi).enumerate() {
            let x = if which == 1 { self.x1(i) } else { self.x2(i) };
            writeln!(out, "{x:.16e} {p:.16e} {q:.16e}")?;
        }
        Ok(())
    }

    fn field(&self, which: usize) -> Result<(&[f64], &[f64])> {
        match which {
            1 => Ok((&self.phi1, &self.pi1)),
            2 => Ok((&self.phi2, &self.pi2)),
            _ => Err(Error::InvalidInput(format!("no field {which}"))),
        }
    }

    /// Builds a state from two column files. The first must cover `[−L, 0]`
    /// and the second `[0, L]` on the same uniform grid.
    pub fn from_columns<R1: BufRead, R2: BufRead>(
        params: Params,
        coupling: Coupling,
        t: f64,
        first: R1,
        second: R2,
    ) -> Result<Self> {
        let (x1, phi1, pi1) = read_columns(first)?;
        let (x2, phi2, pi2) = read_columns(second)?;
        if x1.len() != x2.len() || x1.len() < 4 {
            return Err(Error::InvalidInput(
                "initial-data files must have the same number of rows (>= 4)".into(),
            ));
        }
        let dx = x2[1] - x2[0];
        let n = x1.len() - 1;
        let tol = 1e-9 * dx.abs().max(1.0);
        for (i, (a, b)) in x1.iter().zip(&x2).enumerate() {
            let want1 = (i as f64 - n as f64) * dx;
            let want2 = i as f64 * dx;
            if (a - want1).abs() > tol || (b - want2).abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "row {}: grids must be uniform, field 1 ending and field 2 starting at x = 0",
                    i + 1
                )));
            }
        }
        Self::new(params, coupling, t, dx, phi1, pi1, phi2, pi2)
    }
}

type Columns = (Vec<f64>, Vec<f64>, Vec<f64>);

fn read_columns<R: BufRead>(input: R) -> Result<Columns> {
    let (mut xs, mut phis, mut pis) = (Vec::new(), Vec::new(), Vec::new());
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let vals: Vec<f64> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidInput(format!("line {}: {e}", lineno + 1)))?;
        if vals.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "line {}: expected 3 columns (x, phi, phi_t), found {}",
                lineno + 1,
                vals.len()
            )));
        }
        xs.push(vals[0]);
        phis.push(vals[1]);
        pis.push(vals[2]);
    }
    Ok((xs, phis, pis))
}

/// First derivative at index `i` of uniformly spaced samples.
pub(crate) fn d1(v: &[f64], i: usize, h: f64) -> f64 {
    let n = v.len() - 1;
    if i == 0 {
        (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    } else if i == n {
        (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h)
    } else {
        (v[i + 1] - v[i - 1]) / (2.0 * h)
    }
}

/// Second derivative at index `i`; the one-sided forms need four points.
pub(crate) fn d2(v: &[f64], i: usize, h: f64) -> f64 {
    let n = v.len() - 1;
    let h2 = h * h;
    if i == 0 {
        (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2
    } else if i == n {
        (2.0 * v[n] - 5.0 * v[n - 1] + 4.0 * v[n - 2] - v[n - 3]) / h2
    } else {
        (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2
    }
}

fn snapshot_jet(phi: &[f64], pi: &[f64], i: usize, dx: f64, mu: f64) -> Jet {
    let phi_xx = d2(phi, i, dx);
    Jet {
        phi: phi[i],
        phi_t: pi[i],
        phi_x: d1(phi, i, dx),
        phi_tt: phi_xx + 4.0 * mu * mu * (-2.0 * phi[i]).exp(),
        phi_tx: d1(pi, i, dx),
        phi_xx,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{ExactKind, ProbeRegion};

    fn params() -> Params {
        Params::new(1.0, Params::DEFAULT_K, 0.5)
    }

    #[test]
    fn grid_coordinates() {
        let s = FieldState::new(
            params(),
            Coupling::Defect,
            0.0,
            0.25,
            vec![0.0; 5],
            vec![0.0; 5],
            vec![0.0; 5],
            vec![0.0; 5],
        )
        .unwrap();
        assert_eq!(s.x1(0), -1.0);
        assert_eq!(s.x1(4), 0.0);
        assert_eq!(s.x2(4), 1.0);
        assert_eq!(s.half_length(), 1.0);
    }

    #[test]
    fn rejects_ragged_arrays() {
        let r = FieldState::new(
            params(),
            Coupling::Defect,
            0.0,
            0.1,
            vec![0.0; 5],
            vec![0.0; 4],
            vec![0.0; 5],
            vec![0.0; 5],
        );
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn one_sided_derivatives_exact_on_quadratics() {
        let v: Vec<f64> = (0..6).map(|i| (i as f64 * 0.1).powi(2) + 3.0).collect();
        for i in 0..6 {
            assert!((d1(&v, i, 0.1) - 2.0 * i as f64 * 0.1).abs() < 1e-12);
            assert!((d2(&v, i, 0.1) - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn column_round_trip() {
        let probe = ProbeRegion::new((0.0, 0.5), (-1.0, 1.0));
        let sol = ExactSolution::new(1.0, ExactKind::CoshTime { omega: 0.8 }, probe).unwrap();
        let s = FieldState::from_exact(params(), Coupling::Defect, 0.3, 0.125, 8, &sol, &sol)
            .unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        s.write_field(1, &mut a).unwrap();
        s.write_field(2, &mut b).unwrap();
        let back =
            FieldState::from_columns(params(), Coupling::Defect, 0.3, &a[..], &b[..]).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn column_reader_reports_line() {
        let bad = "0 1 2\n0.1 1\n";
        let err = read_columns(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }
}
