use crate::error::{Error, Result};
use crate::lie::{adjoint, commutator, GroupElement, LieElement};
use crate::sim::Jet;

/// `A_t = −μe^{-φ}E+ + μe^{-φ}E- + (∂ₓφ/2)h`,
/// `A_x =  μe^{-φ}E+ + μe^{-φ}E- + (∂ₜφ/2)h`.
pub fn bulk_connection(phi: f64, phi_t: f64, phi_x: f64, mu: f64) -> (LieElement, LieElement) {
    let m = mu * (-phi).exp();
    (
        LieElement::new(0.5 * phi_x, -m, m),
        LieElement::new(0.5 * phi_t, m, m),
    )
}

/// Uniform space-time grid: `t_i = t0 + i·dt` for `i < nt`, `x_j = x0 + j·dx`
/// for `j < nx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t0: f64,
    pub dt: f64,
    pub nt: usize,
    pub x0: f64,
    pub dx: f64,
    pub nx: usize,
}

impl GridSpec {
    pub fn t(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn len(&self) -> usize {
        self.nt * self.nx
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn index(&self, i: usize, j: usize) -> usize {
        i * self.nx + j
    }

    fn interior(&self) -> Result<GridSpec> {
        if self.nt < 3 || self.nx < 3 {
            return Err(Error::GridTooSmall {
                nt: self.nt,
                nx: self.nx,
            });
        }
        Ok(GridSpec {
            t0: self.t(1),
            nt: self.nt - 2,
            x0: self.x(1),
            nx: self.nx - 2,
            ..*self
        })
    }
}

/// Where a connection lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Whole,
    /// `x < b`
    Below(f64),
    /// `x > a`
    Above(f64),
}

impl Domain {
    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Domain::Whole => true,
            Domain::Below(b) => x < b,
            Domain::Above(a) => x > a,
        }
    }
}

/// Values of a Lie-algebra field on a grid, row-major in time.
#[derive(Debug, Clone, PartialEq)]
pub struct LieGrid {
    pub grid: GridSpec,
    pub values: Vec<LieElement>,
}

impl LieGrid {
    pub fn at(&self, i: usize, j: usize) -> LieElement {
        self.values[self.grid.index(i, j)]
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(LieElement::max_abs).fold(0.0, f64::max)
    }
}

/// Grid-sampled `(A_t, A_x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub grid: GridSpec,
    pub domain: Domain,
    pub a_t: Vec<LieElement>,
    pub a_x: Vec<LieElement>,
}

impl Connection {
    pub fn new(
        grid: GridSpec,
        domain: Domain,
        a_t: Vec<LieElement>,
        a_x: Vec<LieElement>,
    ) -> Result<Self> {
        if a_t.len() != grid.len() || a_x.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "connection needs {} samples per component, got {} and {}",
                grid.len(),
                a_t.len(),
                a_x.len()
            )));
        }
        if let Some(j) = (0..grid.nx).find(|&j| !domain.contains(grid.x(j))) {
            return Err(Error::Domain(format!(
                "grid point x = {} lies outside {domain:?}",
                grid.x(j)
            )));
        }
        Ok(Self {
            grid,
            domain,
            a_t,
            a_x,
        })
    }

    pub fn from_fn<F>(grid: GridSpec, domain: Domain, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> (LieElement, LieElement),
    {
        let (a_t, a_x) = (0..grid.nt)
            .flat_map(|i| (0..grid.nx).map(move |j| (i, j)))
            .map(|(i, j)| f(grid.t(i), grid.x(j)))
            .unzip();
        Self::new(grid, domain, a_t, a_x)
    }

    /// The bulk connection of a field given through its jet.
    pub fn from_field<F>(grid: GridSpec, domain: Domain, mu: f64, jet: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Jet,
    {
        Self::from_fn(grid, domain, |t, x| {
            let j = jet(t, x);
            bulk_connection(j.phi, j.phi_t, j.phi_x, mu)
        })
    }
}

/// `∂ₜA_x − ∂ₓA_t + [A_t, A_x]` at interior points, centered differences.
pub fn curvature_residual(c: &Connection) -> Result<LieGrid> {
    let g = c.grid;
    let inner = g.interior()?;
    let mut values = Vec::with_capacity(inner.len());
    for i in 1..g.nt - 1 {
        for j in 1..g.nx - 1 {
            let dt_ax = (c.a_x[g.index(i + 1, j)] - c.a_x[g.index(i - 1, j)]) * (0.5 / g.dt);
            let dx_at = (c.a_t[g.index(i, j + 1)] - c.a_t[g.index(i, j - 1)]) * (0.5 / g.dx);
            let k = g.index(i, j);
            values.push(dt_ax - dx_at + commutator(c.a_t[k], c.a_x[k]));
        }
    }
    Ok(LieGrid {
        grid: inner,
        values,
    })
}

/// Grid-sampled group element.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupField {
    pub grid: GridSpec,
    pub values: Vec<GroupElement>,
}

impl GroupField {
    pub fn from_fn<F: Fn(f64, f64) -> GroupElement>(grid: GridSpec, f: F) -> Self {
        let values = (0..grid.nt)
            .flat_map(|i| (0..grid.nx).map(move |j| (i, j)))
            .map(|(i, j)| f(grid.t(i), grid.x(j)))
            .collect();
        Self { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> GroupElement {
        self.values[self.grid.index(i, j)]
    }
}

/// `A′_μ = g A_μ g⁻¹ − (∂_μ g) g⁻¹`.
///
/// Derivatives of `g` are second-order differences, one-sided at the grid
/// edges. The Maurer–Cartan term is only traceless up to that error, so it
/// is projected onto the algebra rather than decomposed.
pub fn gauge_transform(g: &GroupField, c: &Connection) -> Result<Connection> {
    let grid = c.grid;
    if g.grid.nt != grid.nt || g.grid.nx != grid.nx {
        return Err(Error::InvalidInput(
            "gauge field and connection are sampled on different grids".into(),
        ));
    }
    if grid.nt < 3 || grid.nx < 3 {
        return Err(Error::GridTooSmall {
            nt: grid.nt,
            nx: grid.nx,
        });
    }
    let mut a_t = Vec::with_capacity(grid.len());
    let mut a_x = Vec::with_capacity(grid.len());
    for i in 0..grid.nt {
        for j in 0..grid.nx {
            let k = grid.index(i, j);
            let gk = g.values[k];
            let inv = gk.inverse();
            let dg_t = diff(|m| *g.at(m, j).matrix(), i, grid.nt, grid.dt);
            let dg_x = diff(|m| *g.at(i, m).matrix(), j, grid.nx, grid.dx);
            let mc_t = LieElement::project(&(dg_t * inv.matrix()));
            let mc_x = LieElement::project(&(dg_x * inv.matrix()));
            a_t.push(adjoint(&gk, c.a_t[k])? - mc_t);
            a_x.push(adjoint(&gk, c.a_x[k])? - mc_x);
        }
    }
    Connection::new(grid, c.domain, a_t, a_x)
}

fn diff<F>(f: F, i: usize, n: usize, h: f64) -> nalgebra::Matrix2<f64>
where
    F: Fn(usize) -> nalgebra::Matrix2<f64>,
{
    if i == 0 {
        (f(0) * -3.0 + f(1) * 4.0 - f(2)) / (2.0 * h)
    } else if i == n - 1 {
        (f(n - 1) * 3.0 - f(n - 2) * 4.0 + f(n - 3)) / (2.0 * h)
    } else {
        (f(i + 1) - f(i - 1)) / (2.0 * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::exp_alg;

    fn grid(n: usize) -> GridSpec {
        GridSpec {
            t0: 0.0,
            dt: 1.0 / n as f64,
            nt: n + 1,
            x0: -0.5,
            dx: 1.0 / n as f64,
            nx: n + 1,
        }
    }

    #[test]
    fn bulk_connection_examples() {
        let (at, ax) = bulk_connection(0.0, 0.0, 0.0, 1.0);
        assert_eq!(at, LieElement::new(0.0, -1.0, 1.0));
        assert_eq!(ax, LieElement::new(0.0, 1.0, 1.0));
        let (at, ax) = bulk_connection(3.0, 0.4, -0.6, 0.0);
        assert_eq!(at, LieElement::h(-0.3));
        assert_eq!(ax, LieElement::h(0.2));
        let (at, ax) = bulk_connection(2f64.ln(), 1.0, 0.0, 1.0);
        assert!((at - LieElement::new(0.0, -0.5, 0.5)).max_abs() < 1e-15);
        assert!((ax - LieElement::new(0.5, 0.5, 0.5)).max_abs() < 1e-15);
    }

    #[test]
    fn constant_connection_curvature() {
        let c = Connection::from_fn(grid(4), Domain::Whole, |_, _| {
            (LieElement::H, LieElement::E_PLUS)
        })
        .unwrap();
        let r = curvature_residual(&c).unwrap();
        assert_eq!(r.values.len(), 9);
        assert!(r.values.iter().all(|v| *v == LieElement::e_plus(2.0)));
    }

    #[test]
    fn small_grid_rejected() {
        let mut g = grid(4);
        g.nt = 2;
        let c = Connection::from_fn(g, Domain::Whole, |_, _| (LieElement::ZERO, LieElement::ZERO))
            .unwrap();
        assert!(matches!(
            curvature_residual(&c),
            Err(Error::GridTooSmall { nt: 2, nx: 5 })
        ));
    }

    #[test]
    fn domain_checked() {
        let r = Connection::from_fn(grid(4), Domain::Below(0.2), |_, _| {
            (LieElement::ZERO, LieElement::ZERO)
        });
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn gauge_by_exp_th() {
        let g = grid(16);
        let c = Connection::from_fn(g, Domain::Whole, |_, _| (LieElement::ZERO, LieElement::ZERO))
            .unwrap();
        let gf = GroupField::from_fn(g, |t, _| exp_alg(LieElement::h(t)));
        let out = gauge_transform(&gf, &c).unwrap();
        // (∂ₜg)g⁻¹ = h up to the differencing error
        let tol = 0.5 * g.dt * g.dt;
        for (at, ax) in out.a_t.iter().zip(&out.a_x) {
            assert!((*at + LieElement::H).max_abs() < tol);
            assert!(ax.max_abs() < 1e-12);
        }
        let id = GroupField::from_fn(g, |_, _| GroupElement::identity());
        let c2 = Connection::from_fn(g, Domain::Whole, |t, x| {
            (LieElement::new(t, x, 1.0), LieElement::new(x * t, 0.0, -t))
        })
        .unwrap();
        assert_eq!(gauge_transform(&id, &c2).unwrap(), c2);
    }
}
