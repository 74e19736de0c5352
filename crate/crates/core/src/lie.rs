//! The Lie algebra A₁ in the Chevalley basis and its group in the 2×2
//! fundamental representation.
//!
//! Basis and representation:
//!
//! ```text
//!   h    = diag(1, -1)       [h, E+] =  2 E+
//!   E+   = [[0, 1], [0, 0]]  [h, E-] = -2 E-
//!   E-   = [[0, 0], [1, 0]]  [E+, E-] = h
//! ```
//!
//! Every operation here is pure; the types are `Copy` and can be shared freely.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::Matrix2;

use crate::error::{Error, Result};

/// Tolerance on the trace of a conjugated matrix, relative to its size.
pub const DECOMPOSITION_TOL: f64 = 1e-12;

/// Element `c_h h + c_p E+ + c_m E-` of A₁.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LieElement {
    pub c_h: f64,
    pub c_p: f64,
    pub c_m: f64,
}

impl LieElement {
    pub const ZERO: LieElement = LieElement::new(0.0, 0.0, 0.0);
    pub const H: LieElement = LieElement::new(1.0, 0.0, 0.0);
    pub const E_PLUS: LieElement = LieElement::new(0.0, 1.0, 0.0);
    pub const E_MINUS: LieElement = LieElement::new(0.0, 0.0, 1.0);

    pub const fn new(c_h: f64, c_p: f64, c_m: f64) -> Self {
        Self { c_h, c_p, c_m }
    }

    pub fn h(c: f64) -> Self {
        Self::new(c, 0.0, 0.0)
    }

    pub fn e_plus(c: f64) -> Self {
        Self::new(0.0, c, 0.0)
    }

    pub fn e_minus(c: f64) -> Self {
        Self::new(0.0, 0.0, c)
    }

    pub fn to_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.c_h, self.c_p, self.c_m, -self.c_h)
    }

    /// Projects a 2×2 matrix onto the algebra through the trace pairing
    /// with the dual basis, discarding any multiple of the identity.
    pub fn project(m: &Matrix2<f64>) -> Self {
        Self::new(0.5 * (m[(0, 0)] - m[(1, 1)]), m[(0, 1)], m[(1, 0)])
    }

    /// Like [`LieElement::project`] but fails when the matrix carries a
    /// trace beyond [`DECOMPOSITION_TOL`] (relative to its largest entry).
    pub fn decompose(m: &Matrix2<f64>) -> Result<Self> {
        let trace = m.trace();
        let scale = m.amax().max(1.0);
        if !trace.is_finite() || trace.abs() > DECOMPOSITION_TOL * scale {
            return Err(Error::Decomposition { trace });
        }
        Ok(Self::project(m))
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.c_h.abs().max(self.c_p.abs()).max(self.c_m.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.c_h.is_finite() && self.c_p.is_finite() && self.c_m.is_finite()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c_h, self.c_p, self.c_m]
    }
}

impl Add for LieElement {
    type Output = LieElement;
    fn add(self, o: LieElement) -> LieElement {
        LieElement::new(self.c_h + o.c_h, self.c_p + o.c_p, self.c_m + o.c_m)
    }
}

impl AddAssign for LieElement {
    fn add_assign(&mut self, o: LieElement) {
        *self = *self + o;
    }
}

impl Sub for LieElement {
    type Output = LieElement;
    fn sub(self, o: LieElement) -> LieElement {
        LieElement::new(self.c_h - o.c_h, self.c_p - o.c_p, self.c_m - o.c_m)
    }
}

impl Neg for LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        LieElement::new(-self.c_h, -self.c_p, -self.c_m)
    }
}

impl Mul<LieElement> for f64 {
    type Output = LieElement;
    fn mul(self, a: LieElement) -> LieElement {
        LieElement::new(self * a.c_h, self * a.c_p, self * a.c_m)
    }
}

impl Mul<f64> for LieElement {
    type Output = LieElement;
    fn mul(self, s: f64) -> LieElement {
        s * self
    }
}

/// Lie bracket `[a, b]`, expanded on the structure constants.
pub fn commutator(a: LieElement, b: LieElement) -> LieElement {
    LieElement::new(
        a.c_p * b.c_m - a.c_m * b.c_p,
        2.0 * (a.c_h * b.c_p - a.c_p * b.c_h),
        -2.0 * (a.c_h * b.c_m - a.c_m * b.c_h),
    )
}

/// Element of the structure group, stored as a 2×2 real matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    m: Matrix2<f64>,
}

impl Default for GroupElement {
    fn default() -> Self {
        Self::identity()
    }
}

impl GroupElement {
    pub fn identity() -> Self {
        Self {
            m: Matrix2::identity(),
        }
    }

    /// Wraps a raw matrix. No unimodularity check is made; see [`GroupElement::det`].
    pub fn from_matrix(m: Matrix2<f64>) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    pub fn det(&self) -> f64 {
        self.m.determinant()
    }

    /// Inverse through the adjugate.
    pub fn inverse(&self) -> Self {
        let m = &self.m;
        let adj = Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]);
        Self { m: adj / self.det() }
    }

    pub fn compose(&self, other: &GroupElement) -> Self {
        Self { m: self.m * other.m }
    }

    /// Left action on the fibre. The fibre of a principal bundle is the
    /// group itself, so this is left multiplication.
    pub fn act(&self, f: &GroupElement) -> GroupElement {
        self.compose(f)
    }

    /// Max-abs entry distance to the identity matrix.
    pub fn distance_from_identity(&self) -> f64 {
        (self.m - Matrix2::identity()).amax()
    }

    /// Max-abs entry distance between two elements.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        (self.m - other.m).amax()
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.m[(0, 0)], self.m[(0, 1)], self.m[(1, 0)], self.m[(1, 1)]]
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|v| v.is_finite())
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, o: GroupElement) -> GroupElement {
        self.compose(&o)
    }
}

/// Matrix exponential of the representation of `a`.
///
/// For a traceless 2×2 matrix `A² = δ I` with `δ = c_h² + c_p c_m`, so
/// `exp(A) = C(δ) I + S(δ) A` where `C = cosh √δ` and `S = sinh √δ / √δ`
/// (continued analytically for `δ < 0`). Near `δ = 0` both are summed as
/// power series in `δ`.
pub fn exp_alg(a: LieElement) -> GroupElement {
    let delta = a.c_h * a.c_h + a.c_p * a.c_m;
    let (c, s) = exp_coefficients(delta);
    GroupElement {
        m: Matrix2::identity() * c + a.to_matrix() * s,
    }
}

fn exp_coefficients(delta: f64) -> (f64, f64) {
    if delta.abs() < 1e-2 {
        // cosh √δ = Σ δ^n/(2n)!, sinh √δ/√δ = Σ δ^n/(2n+1)!
        let mut c = 0.0;
        let mut s = 0.0;
        let mut term_c = 1.0;
        let mut term_s = 1.0;
        for n in 0..10 {
            c += term_c;
            s += term_s;
            let k = 2.0 * n as f64;
            term_c *= delta / ((k + 1.0) * (k + 2.0));
            term_s *= delta / ((k + 2.0) * (k + 3.0));
        }
        (c, s)
    } else if delta > 0.0 {
        let r = delta.sqrt();
        (r.cosh(), r.sinh() / r)
    } else {
        let r = (-delta).sqrt();
        (r.cos(), r.sin() / r)
    }
}

/// `g · a · g⁻¹`, decomposed back onto the Chevalley basis.
pub fn adjoint(g: &GroupElement, a: LieElement) -> Result<LieElement> {
    let m = g.m * a.to_matrix() * g.inverse().m;
    LieElement::decompose(&m)
}

/// `exp(λ₁E+) · exp(λ₂h) · exp(λ₃E-)`.
pub fn gauss_compose(lambda1: f64, lambda2: f64, lambda3: f64) -> GroupElement {
    let upper = Matrix2::new(1.0, lambda1, 0.0, 1.0);
    let diag = Matrix2::new(lambda2.exp(), 0.0, 0.0, (-lambda2).exp());
    let lower = Matrix2::new(1.0, 0.0, lambda3, 1.0);
    GroupElement {
        m: upper * diag * lower,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: LieElement, b: LieElement, tol: f64) -> bool {
        (a - b).max_abs() < tol
    }

    #[test]
    fn chevalley_table() {
        let h = LieElement::H;
        let ep = LieElement::E_PLUS;
        let em = LieElement::E_MINUS;
        assert_eq!(commutator(h, ep), 2.0 * ep);
        assert_eq!(commutator(h, em), -2.0 * em);
        assert_eq!(commutator(ep, em), h);
        let a = LieElement::new(0.3, -1.2, 2.5);
        assert_eq!(commutator(a, a), LieElement::ZERO);
    }

    #[test]
    fn commutator_matches_matrix_bracket() {
        let a = LieElement::new(0.7, -0.4, 1.9);
        let b = LieElement::new(-1.1, 0.25, 0.6);
        let (ma, mb) = (a.to_matrix(), b.to_matrix());
        let direct = LieElement::decompose(&(ma * mb - mb * ma)).unwrap();
        assert!(close(direct, commutator(a, b), 1e-14));
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        assert_eq!(exp_alg(LieElement::ZERO), GroupElement::identity());
        let g = exp_alg(LieElement::h(1.0));
        let e = std::f64::consts::E;
        assert!((g.matrix()[(0, 0)] - e).abs() < 1e-14);
        assert!((g.matrix()[(1, 1)] - 1.0 / e).abs() < 1e-15);
        assert_eq!(g.matrix()[(0, 1)], 0.0);
        assert_eq!(g.matrix()[(1, 0)], 0.0);
    }

    #[test]
    fn exp_of_nilpotent_terminates() {
        // 2λE+ with λ = 0.5
        let g = exp_alg(LieElement::e_plus(1.0));
        assert_eq!(g.entries(), [1.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn exp_elliptic_branch() {
        // E+ - E- generates rotations: exp(θ(E+ - E-)) = [[cos, sin], [-sin, cos]]
        let theta = 0.9_f64;
        let g = exp_alg(LieElement::new(0.0, theta, -theta));
        let expected = [theta.cos(), theta.sin(), -theta.sin(), theta.cos()];
        for (got, want) in g.entries().iter().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn exp_series_branch_is_continuous() {
        // δ on both sides of the series switch
        for &s in &[0.0999, 0.1001] {
            let a = LieElement::h(s);
            let g = exp_alg(a);
            assert!((g.matrix()[(0, 0)] - s.exp()).abs() < 1e-15);
            assert!((g.matrix()[(1, 1)] - (-s).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn adjoint_gauss_examples() {
        let l1 = 0.8;
        let gc = gauss_compose(l1, 0.0, 0.0);
        let h_img = adjoint(&gc, LieElement::H).unwrap();
        assert!(close(h_img, LieElement::new(1.0, -2.0 * l1, 0.0), 1e-14));
        let em_img = adjoint(&gc, LieElement::E_MINUS).unwrap();
        assert!(close(em_img, LieElement::new(l1, -l1 * l1, 1.0), 1e-14));
        let a = LieElement::new(0.2, 0.3, -0.4);
        assert!(close(adjoint(&GroupElement::identity(), a).unwrap(), a, 1e-16));
    }

    #[test]
    fn adjoint_full_gauss_formulas() {
        let (l1, l2, l3) = (0.6, -0.35, 0.45);
        let gc = gauss_compose(l1, l2, l3);
        let e2 = (2.0 * l2).exp();
        let em2 = (-2.0 * l2).exp();
        let lower_img = LieElement::new(l1, -l1 * l1, 1.0);
        let want_em = em2 * lower_img;
        let want_h = LieElement::new(1.0, -2.0 * l1, 0.0) + 2.0 * l3 * em2 * lower_img;
        let want_ep = LieElement::e_plus(e2)
            - l3 * LieElement::new(1.0, -2.0 * l1, 0.0)
            - l3 * l3 * em2 * lower_img;
        assert!(close(adjoint(&gc, LieElement::E_MINUS).unwrap(), want_em, 1e-13));
        assert!(close(adjoint(&gc, LieElement::H).unwrap(), want_h, 1e-13));
        assert!(close(adjoint(&gc, LieElement::E_PLUS).unwrap(), want_ep, 1e-13));
    }

    #[test]
    fn adjoint_rejects_corrupted_group_element() {
        let singular = GroupElement::from_matrix(Matrix2::new(1.0, 2.0, 0.5, 1.0));
        assert!(matches!(
            adjoint(&singular, LieElement::H),
            Err(Error::Decomposition { .. })
        ));
        let m = Matrix2::new(1.0, 0.0, 0.0, 0.5);
        assert!(matches!(
            LieElement::decompose(&m),
            Err(Error::Decomposition { .. })
        ));
    }

    #[test]
    fn gauss_compose_examples() {
        assert_eq!(gauss_compose(0.0, 0.0, 0.0), GroupElement::identity());
        assert_eq!(gauss_compose(2.0, 0.0, 0.0).entries(), [1.0, 2.0, 0.0, 1.0]);
        let g = gauss_compose(0.0, 1.0, 0.0);
        let e = std::f64::consts::E;
        assert!((g.matrix()[(0, 0)] - e).abs() < 1e-15);
        assert!((g.matrix()[(1, 1)] - 1.0 / e).abs() < 1e-15);
    }

    #[test]
    fn gauss_compose_matches_exponentials() {
        let (l1, l2, l3) = (0.3, -0.7, 1.1);
        let direct = exp_alg(LieElement::e_plus(l1))
            * exp_alg(LieElement::h(l2))
            * exp_alg(LieElement::e_minus(l3));
        assert!(direct.distance(&gauss_compose(l1, l2, l3)) < 1e-14);
        assert!((direct.det() - 1.0).abs() < 1e-12);
    }
}
