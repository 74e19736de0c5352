//! Exact θ/δ coefficient algebra for the two-patch connections.
//!
//! Expressions are expanded on the step basis about a centre `c`
//!
//! ```text
//!   U = θ(x−c) + θ(c−x),  L = θ(c−x),  R = θ(x−c),  P = θ(x−c)θ(c−x)
//! ```
//!
//! with `θ(0) = 0`, so every basis function vanishes at `x = c` and `P`
//! vanishes everywhere. Products follow from `θ² = θ`; derivatives produce
//! `δ(x−c)` from `R` and `−δ(c−x)` from `L`. Coefficients are carried as
//! jets (value and first derivatives at the evaluation point), which is all
//! the curvature needs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::defect::{defect_residual_jets, defect_residuals, DefectResiduals};
use crate::lie::{commutator, LieElement};
use crate::sim::state::{d1, d2};
use crate::sim::{BorderFunction, FieldState, Jet, JetPair};

/// Lie-algebra coefficient with its `t` and `x` derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Coef {
    pub v: LieElement,
    pub dt: LieElement,
    pub dx: LieElement,
}

impl Coef {
    fn scale(self, s: f64) -> Self {
        Self {
            v: self.v * s,
            dt: self.dt * s,
            dx: self.dx * s,
        }
    }
}

/// Step-basis expression with jet coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepExpr {
    pub centre: f64,
    pub u: Coef,
    pub l: Coef,
    pub r: Coef,
    pub p: Coef,
}

/// Step-basis expression with plain coefficients plus delta content
/// `δ(x−c)` and `δ(c−x)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DistributionalExpr {
    pub centre: f64,
    pub u: LieElement,
    pub l: LieElement,
    pub r: LieElement,
    pub p: LieElement,
    pub delta_right: LieElement,
    pub delta_left: LieElement,
}

impl StepExpr {
    pub fn zero(centre: f64) -> Self {
        Self {
            centre,
            ..Self::default()
        }
    }

    fn values(&self) -> [LieElement; 4] {
        [self.u.v, self.l.v, self.r.v, self.p.v]
    }

    /// Smooth value at `x` (the coefficients are taken as given).
    pub fn evaluate(&self, x: f64) -> LieElement {
        basis_at(self.centre, x)
            .iter()
            .zip(self.values())
            .fold(LieElement::ZERO, |acc, (b, v)| acc + *b * v)
    }

    /// `∂ₜ`: the basis is time independent.
    pub fn dt(&self) -> DistributionalExpr {
        DistributionalExpr {
            centre: self.centre,
            u: self.u.dt,
            l: self.l.dt,
            r: self.r.dt,
            p: self.p.dt,
            ..Default::default()
        }
    }

    /// `∂ₓ` with `∂ₓU = δ(x−c) − δ(c−x)`, `∂ₓL = −δ(c−x)`, `∂ₓR = δ(x−c)`
    /// and `∂ₓP = 0`.
    pub fn dx(&self) -> DistributionalExpr {
        DistributionalExpr {
            centre: self.centre,
            u: self.u.dx,
            l: self.l.dx,
            r: self.r.dx,
            p: self.p.dx,
            delta_right: self.u.v + self.r.v,
            delta_left: -self.u.v - self.l.v,
        }
    }

    /// Commutator expanded through the product table of the basis.
    pub fn bracket(&self, other: &StepExpr) -> DistributionalExpr {
        // index order U, L, R, P; entry = (U, L, R, P) weights of the product
        const TABLE: [[[f64; 4]; 4]; 4] = [
            [[1.0, 0.0, 0.0, 2.0], [0.0, 1.0, 0.0, 1.0], [0.0, 0.0, 1.0, 1.0], [0.0, 0.0, 0.0, 2.0]],
            [[0.0, 1.0, 0.0, 1.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 1.0]],
            [[0.0, 0.0, 1.0, 1.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]],
            [[0.0, 0.0, 0.0, 2.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 1.0]],
        ];
        let (a, b) = (self.values(), other.values());
        let mut out = [LieElement::ZERO; 4];
        for i in 0..4 {
            for j in 0..4 {
                let c = commutator(a[i], b[j]);
                for (k, w) in TABLE[i][j].iter().enumerate() {
                    if *w != 0.0 {
                        out[k] += *w * c;
                    }
                }
            }
        }
        DistributionalExpr {
            centre: self.centre,
            u: out[0],
            l: out[1],
            r: out[2],
            p: out[3],
            ..Default::default()
        }
    }
}

impl DistributionalExpr {
    /// Value of the step part at `x`.
    pub fn smooth_at(&self, x: f64) -> LieElement {
        basis_at(self.centre, x)
            .iter()
            .zip([self.u, self.l, self.r, self.p])
            .fold(LieElement::ZERO, |acc, (b, v)| acc + *b * v)
    }

    /// Total coefficient of the delta at the centre.
    pub fn net_delta(&self) -> LieElement {
        self.delta_right + self.delta_left
    }

    fn combine(&self, o: &Self, s: f64) -> Self {
        Self {
            centre: self.centre,
            u: self.u + s * o.u,
            l: self.l + s * o.l,
            r: self.r + s * o.r,
            p: self.p + s * o.p,
            delta_right: self.delta_right + s * o.delta_right,
            delta_left: self.delta_left + s * o.delta_left,
        }
    }
}

fn basis_at(c: f64, x: f64) -> [f64; 4] {
    let r = if x > c { 1.0 } else { 0.0 };
    let l = if x < c { 1.0 } else { 0.0 };
    [r + l, l, r, r * l]
}

/// Which of the two hatted connections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Patch {
    /// Defined for `x < b`, steps centred at `a`.
    First,
    /// Defined for `x > a`, steps centred at `b`.
    Second,
}

/// `A_t` and `A_x` of one field as jet coefficients.
fn bulk_coefs(j: &Jet, mu: f64) -> (Coef, Coef) {
    let m = mu * (-j.phi).exp();
    let a_t = Coef {
        v: LieElement::new(0.5 * j.phi_x, -m, m),
        dt: LieElement::new(0.5 * j.phi_tx, m * j.phi_t, -m * j.phi_t),
        dx: LieElement::new(0.5 * j.phi_xx, m * j.phi_x, -m * j.phi_x),
    };
    let a_x = Coef {
        v: LieElement::new(0.5 * j.phi_t, m, m),
        dt: LieElement::new(0.5 * j.phi_tt, -m * j.phi_t, -m * j.phi_t),
        dx: LieElement::new(0.5 * j.phi_tx, -m * j.phi_x, -m * j.phi_x),
    };
    (a_t, a_x)
}

/// The hatted connections
///
/// ```text
///   Â⁽¹⁾_t = U_a A⁽¹⁾_t − ½ R_a D₁ h,   Â⁽¹⁾_x = L_a A⁽¹⁾_x    (x < b)
///   Â⁽²⁾_t = U_b A⁽²⁾_t − ½ L_b D₂ h,   Â⁽²⁾_x = R_b A⁽²⁾_x    (x > a)
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HattedConnection {
    pub patch: Patch,
    pub a: f64,
    pub b: f64,
    pub border: BorderFunction,
}

impl HattedConnection {
    pub fn new(patch: Patch, a: f64, b: f64, border: BorderFunction) -> Result<Self> {
        if !(a < 0.0 && 0.0 < b) {
            return Err(Error::InvalidInput(format!(
                "need a < 0 < b, got a = {a}, b = {b}"
            )));
        }
        Ok(Self {
            patch,
            a,
            b,
            border,
        })
    }

    pub fn contains(&self, x: f64) -> bool {
        match self.patch {
            Patch::First => x < self.b,
            Patch::Second => x > self.a,
        }
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "x = {x} is outside patch {:?} (a = {}, b = {})",
                self.patch, self.a, self.b
            )))
        }
    }

    /// `(Â_t, Â_x)` as step expressions built from the jets at one point.
    pub fn expressions(&self, x: f64, pair: &JetPair) -> Result<(StepExpr, StepExpr)> {
        self.check(x)?;
        let mu = self.border.mu;
        let (d1, d2) = defect_residual_jets(pair, &self.border);
        let dh = |d: [f64; 3]| Coef {
            v: LieElement::h(d[0]),
            dt: LieElement::h(d[1]),
            dx: LieElement::h(d[2]),
        };
        Ok(match self.patch {
            Patch::First => {
                let (at, ax) = bulk_coefs(&pair.first, mu);
                let mut t = StepExpr::zero(self.a);
                t.u = at;
                t.r = dh(d1).scale(-0.5);
                let mut xx = StepExpr::zero(self.a);
                xx.l = ax;
                (t, xx)
            }
            Patch::Second => {
                let (at, ax) = bulk_coefs(&pair.second, mu);
                let mut t = StepExpr::zero(self.b);
                t.u = at;
                t.l = dh(d2).scale(-0.5);
                let mut xx = StepExpr::zero(self.b);
                xx.r = ax;
                (t, xx)
            }
        })
    }

    /// `(Â_t, Â_x)` evaluated at `x`.
    pub fn evaluate(&self, x: f64, pair: &JetPair) -> Result<(LieElement, LieElement)> {
        let (t, xx) = self.expressions(x, pair)?;
        Ok((t.evaluate(x), xx.evaluate(x)))
    }

    /// `∂ₜÂ_x − ∂ₓÂ_t + [Â_t, Â_x]` as a distribution.
    pub fn curvature(&self, x: f64, pair: &JetPair) -> Result<DistributionalExpr> {
        let (t, xx) = self.expressions(x, pair)?;
        Ok(xx.dt().combine(&t.dx(), -1.0).combine(&t.bracket(&xx), 1.0))
    }
}

/// Curvature content of one patch, region by region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionReport {
    pub patch: Patch,
    pub a: f64,
    pub b: f64,
    /// Max smooth curvature in `x < a` (patch 1) or `x > b` (patch 2).
    pub bulk_max: f64,
    pub bulk_points: usize,
    /// Net delta coefficient at `x = a` (patch 1) or `x = b` (patch 2).
    pub delta: [f64; 3],
    /// `D₁` at `a` or `D₂` at `b`, computed directly.
    pub defect_residual: f64,
    /// `|delta − (±½ D h)|`, `+` for patch 1 and `−` for patch 2.
    pub delta_mismatch: f64,
    /// Max smooth curvature on `a < x < b`.
    pub overlap_max: f64,
    pub overlap_points: usize,
    /// Max `|∂ₓφ_p|` of this patch's field on the overlap.
    pub overlap_gradient: f64,
}

/// Region report of one patch from jets sampled on a set of points. The
/// centre (`a` or `b`) must be among the samples.
pub fn distributional_curvature(
    hat: &HattedConnection,
    samples: &[(f64, JetPair)],
) -> Result<RegionReport> {
    let centre = match hat.patch {
        Patch::First => hat.a,
        Patch::Second => hat.b,
    };
    let mut report = RegionReport {
        patch: hat.patch,
        a: hat.a,
        b: hat.b,
        bulk_max: 0.0,
        bulk_points: 0,
        delta: [0.0; 3],
        defect_residual: f64::NAN,
        delta_mismatch: f64::NAN,
        overlap_max: 0.0,
        overlap_points: 0,
        overlap_gradient: 0.0,
    };
    let mut centre_seen = false;
    for (x, pair) in samples.iter().filter(|(x, _)| hat.contains(*x)) {
        let f = hat.curvature(*x, pair)?;
        if *x == centre {
            centre_seen = true;
            let delta = f.net_delta();
            let DefectResiduals { d1, d2 } = defect_residuals(pair, &hat.border);
            let expected = match hat.patch {
                Patch::First => LieElement::h(0.5 * d1),
                Patch::Second => LieElement::h(-0.5 * d2),
            };
            report.delta = delta.as_array();
            report.defect_residual = if hat.patch == Patch::First { d1 } else { d2 };
            report.delta_mismatch = (delta - expected).max_abs();
        } else if *x > hat.a && *x < hat.b {
            report.overlap_points += 1;
            report.overlap_max = report.overlap_max.max(f.smooth_at(*x).max_abs());
            let own = if hat.patch == Patch::First {
                &pair.first
            } else {
                &pair.second
            };
            report.overlap_gradient = report.overlap_gradient.max(own.phi_x.abs());
        } else {
            report.bulk_points += 1;
            report.bulk_max = report.bulk_max.max(f.smooth_at(*x).max_abs());
        }
    }
    if !centre_seen {
        return Err(Error::InvalidInput(format!(
            "no sample at the step centre x = {centre}"
        )));
    }
    Ok(report)
}

/// Jets on the strip `(−L, L)` from three consecutive snapshots.
///
/// `∂ₜφ` is the stored velocity and `∂ₜ²φ` its centered time difference;
/// spatial derivatives are centered, one-sided at `x = 0`. The outer edge
/// nodes have no interior stencil and are left out.
///
/// Each field is extended past `x = 0` by its defect value: the extension
/// is constant in `x`, so it carries `φ`, `∂ₜφ` and `∂ₜ²φ` from `x = 0`
/// and zero spatial derivatives.
pub fn strip_jets(
    prev: &FieldState,
    cur: &FieldState,
    next: &FieldState,
) -> Result<Vec<(f64, JetPair)>> {
    let n = cur.n;
    if prev.n != n || next.n != n {
        return Err(Error::InvalidInput("snapshots on different grids".into()));
    }
    let dt_prev = cur.t - prev.t;
    let dt_next = next.t - cur.t;
    if !(dt_prev > 0.0) || (dt_prev - dt_next).abs() > 1e-9 * dt_prev {
        return Err(Error::InvalidInput(
            "snapshots must be equally spaced in time".into(),
        ));
    }
    let h = dt_prev;
    let field_jets = |c: &[f64], v: &[f64], vp: &[f64], vn: &[f64]| -> Vec<Jet> {
        (0..=n)
            .map(|i| Jet {
                phi: c[i],
                phi_t: v[i],
                phi_x: d1(c, i, cur.dx),
                phi_tt: (vn[i] - vp[i]) / (2.0 * h),
                phi_tx: d1(v, i, cur.dx),
                phi_xx: d2(c, i, cur.dx),
            })
            .collect()
    };
    let j1 = field_jets(&cur.phi1, &cur.pi1, &prev.pi1, &next.pi1);
    let j2 = field_jets(&cur.phi2, &cur.pi2, &prev.pi2, &next.pi2);
    let flat = |j: &Jet| Jet {
        phi: j.phi,
        phi_t: j.phi_t,
        phi_tt: j.phi_tt,
        ..Jet::default()
    };
    let mut out = Vec::with_capacity(2 * n - 1);
    for i in 1..n {
        out.push((cur.x1(i), JetPair::new(j1[i], flat(&j2[0]))));
    }
    out.push((0.0, JetPair::new(j1[n], j2[0])));
    for j in 1..n {
        out.push((cur.x2(j), JetPair::new(flat(&j1[n]), j2[j])));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn border() -> BorderFunction {
        BorderFunction::new(1.1, -4.0 * PI, 0.6).unwrap()
    }

    fn generic_pair() -> JetPair {
        JetPair::new(
            Jet {
                phi: 0.3,
                phi_t: 0.2,
                phi_x: -0.4,
                phi_tt: 0.9,
                phi_tx: 0.1,
                phi_xx: -0.5,
            },
            Jet {
                phi: -0.2,
                phi_t: -0.6,
                phi_x: 0.7,
                phi_tt: 0.3,
                phi_tx: -0.8,
                phi_xx: 0.25,
            },
        )
    }

    #[test]
    fn basis_values() {
        assert_eq!(basis_at(0.0, -1.0), [1.0, 1.0, 0.0, 0.0]);
        assert_eq!(basis_at(0.0, 1.0), [1.0, 0.0, 1.0, 0.0]);
        assert_eq!(basis_at(0.0, 0.0), [0.0; 4]);
    }

    #[test]
    fn patch_one_outside_steps_is_bulk() {
        let h = HattedConnection::new(Patch::First, -0.5, 0.5, border()).unwrap();
        let pair = generic_pair();
        let (at, ax) = h.evaluate(-1.0, &pair).unwrap();
        let (bt, bx) = crate::gauge::bulk_connection(0.3, 0.2, -0.4, 1.1);
        assert!((at - bt).max_abs() < 1e-15 && (ax - bx).max_abs() < 1e-15);
        let (_, ax) = h.evaluate(0.1, &pair).unwrap();
        assert_eq!(ax, LieElement::ZERO);
        assert!(matches!(h.evaluate(0.5, &pair), Err(Error::Domain(_))));
    }

    #[test]
    fn patch_two_outside_steps_is_bulk() {
        let h = HattedConnection::new(Patch::Second, -0.5, 0.5, border()).unwrap();
        let pair = generic_pair();
        let (at, ax) = h.evaluate(1.0, &pair).unwrap();
        let (bt, bx) = crate::gauge::bulk_connection(-0.2, -0.6, 0.7, 1.1);
        assert!((at - bt).max_abs() < 1e-15 && (ax - bx).max_abs() < 1e-15);
        assert!(matches!(h.evaluate(-0.5, &pair), Err(Error::Domain(_))));
    }

    #[test]
    fn bulk_region_curvature_is_field_equation() {
        let pair = generic_pair();
        let h = HattedConnection::new(Patch::First, -0.5, 0.5, border()).unwrap();
        let f = h.curvature(-1.0, &pair).unwrap().smooth_at(-1.0);
        let j = pair.first;
        let eq = j.phi_tt - j.phi_xx - 4.0 * 1.1 * 1.1 * (-2.0 * j.phi).exp();
        assert!((f - LieElement::h(0.5 * eq)).max_abs() < 1e-14);
    }

    #[test]
    fn delta_coefficients() {
        let pair = generic_pair();
        let r = defect_residuals(&pair, &border());
        let h1 = HattedConnection::new(Patch::First, -0.5, 0.5, border()).unwrap();
        let d = h1.curvature(-0.5, &pair).unwrap();
        assert!((d.net_delta() - LieElement::h(0.5 * r.d1)).max_abs() < 1e-14);
        assert_eq!(d.smooth_at(-0.5), LieElement::ZERO);
        let h2 = HattedConnection::new(Patch::Second, -0.5, 0.5, border()).unwrap();
        let d = h2.curvature(0.5, &pair).unwrap();
        assert!((d.net_delta() + LieElement::h(0.5 * r.d2)).max_abs() < 1e-14);
    }

    #[test]
    fn overlap_curvature_matches_closed_form() {
        let pair = generic_pair();
        let b = border();
        let (mu, lam) = (b.mu, b.lambda);
        let h1 = HattedConnection::new(Patch::First, -0.5, 0.5, b).unwrap();
        let f = h1.curvature(0.1, &pair).unwrap().smooth_at(0.1);
        let (p, q) = (pair.first, pair.second);
        let e1 = (-p.phi).exp();
        let plus = p.phi + q.phi;
        let minus = p.phi - q.phi;
        let d_exp = -(p.phi_x + q.phi_x) * (-plus).exp();
        let d_sinh = (p.phi_x - q.phi_x) * minus.cosh();
        let want = LieElement::new(
            -0.5 * q.phi_tx - mu * lam * d_exp + mu / (2.0 * lam) * d_sinh,
            -mu * p.phi_x * e1,
            mu * p.phi_x * e1,
        );
        assert!((f - want).max_abs() < 1e-14, "{f:?} vs {want:?}");
        let h2 = HattedConnection::new(Patch::Second, -0.5, 0.5, b).unwrap();
        let f = h2.curvature(0.1, &pair).unwrap().smooth_at(0.1);
        let e2 = (-q.phi).exp();
        let want = LieElement::new(
            -0.5 * p.phi_tx + mu * lam * d_exp + mu / (2.0 * lam) * d_sinh,
            -mu * q.phi_x * e2,
            mu * q.phi_x * e2,
        );
        assert!((f - want).max_abs() < 1e-14, "{f:?} vs {want:?}");
    }

    #[test]
    fn flat_overlap_has_no_curvature() {
        let mut pair = generic_pair();
        for j in [&mut pair.first, &mut pair.second] {
            j.phi_x = 0.0;
            j.phi_tx = 0.0;
            j.phi_xx = 0.0;
        }
        for patch in [Patch::First, Patch::Second] {
            let h = HattedConnection::new(patch, -0.5, 0.5, border()).unwrap();
            let f = h.curvature(0.2, &pair).unwrap().smooth_at(0.2);
            assert!(f.max_abs() < 1e-15);
        }
    }

    #[test]
    fn product_table_matches_pointwise_products() {
        // U, L, R, P at x ≠ c behave as ordinary functions
        let a = StepExpr {
            centre: 0.0,
            u: Coef {
                v: LieElement::H,
                ..Coef::default()
            },
            l: Coef {
                v: LieElement::E_PLUS,
                ..Coef::default()
            },
            r: Coef {
                v: LieElement::E_MINUS,
                ..Coef::default()
            },
            p: Coef::default(),
        };
        let b = StepExpr {
            centre: 0.0,
            u: Coef {
                v: LieElement::new(0.3, -1.0, 2.0),
                ..Coef::default()
            },
            l: Coef {
                v: LieElement::new(1.0, 0.5, 0.0),
                ..Coef::default()
            },
            r: Coef {
                v: LieElement::new(0.0, 0.0, 1.5),
                ..Coef::default()
            },
            p: Coef::default(),
        };
        for x in [-1.0, 1.0] {
            let direct = commutator(a.evaluate(x), b.evaluate(x));
            assert!((a.bracket(&b).smooth_at(x) - direct).max_abs() < 1e-15);
        }
    }
}
