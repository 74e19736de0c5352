use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Border function `B(φ₁, φ₂) = B⁺(φ₁+φ₂) + B⁻(φ₁−φ₂)` of the Liouville defect,
/// with
///
/// ```text
///   B⁺(φ⁺) = (k/2π) μ λ e^{-φ⁺}
///   B⁻(φ⁻) = ½ (k/2π) (μ/λ) cosh φ⁻
/// ```
///
/// and its partner `M = B⁺ − B⁻`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorderFunction {
    pub mu: f64,
    pub k: f64,
    pub lambda: f64,
}

impl BorderFunction {
    /// Fails with `DivisionByZero` when `λ = 0` and `μ ≠ 0`, and with
    /// `InvalidInput` for `k = 0`.
    pub fn new(mu: f64, k: f64, lambda: f64) -> Result<Self> {
        if k == 0.0 {
            return Err(Error::InvalidInput("k must be nonzero".into()));
        }
        if lambda == 0.0 && mu != 0.0 {
            return Err(Error::DivisionByZero("border function needs lambda != 0"));
        }
        Ok(Self { mu, k, lambda })
    }

    fn active(&self) -> bool {
        self.mu != 0.0
    }

    pub fn b_plus(&self, phi_plus: f64) -> f64 {
        if !self.active() {
            return 0.0;
        }
        self.k / (2.0 * PI) * self.mu * self.lambda * (-phi_plus).exp()
    }

    pub fn b_minus(&self, phi_minus: f64) -> f64 {
        if !self.active() {
            return 0.0;
        }
        0.5 * self.k / (2.0 * PI) * self.mu / self.lambda * phi_minus.cosh()
    }

    /// `dB⁺/dφ⁺`
    pub fn db_plus(&self, phi_plus: f64) -> f64 {
        -self.b_plus(phi_plus)
    }

    /// `dB⁻/dφ⁻`
    pub fn db_minus(&self, phi_minus: f64) -> f64 {
        if !self.active() {
            return 0.0;
        }
        0.5 * self.k / (2.0 * PI) * self.mu / self.lambda * phi_minus.sinh()
    }

    pub fn value(&self, phi1: f64, phi2: f64) -> f64 {
        self.b_plus(phi1 + phi2) + self.b_minus(phi1 - phi2)
    }

    /// `M = B⁺ − B⁻`
    pub fn partner(&self, phi1: f64, phi2: f64) -> f64 {
        self.b_plus(phi1 + phi2) - self.b_minus(phi1 - phi2)
    }

    /// `(δB/δφ₁, δB/δφ₂)` through the chain rule on `φ± = φ₁ ± φ₂`.
    pub fn grad(&self, phi1: f64, phi2: f64) -> (f64, f64) {
        let p = self.db_plus(phi1 + phi2);
        let m = self.db_minus(phi1 - phi2);
        (p + m, p - m)
    }

    /// `(δM/δφ₁, δM/δφ₂)`
    pub fn partner_grad(&self, phi1: f64, phi2: f64) -> (f64, f64) {
        let p = self.db_plus(phi1 + phi2);
        let m = self.db_minus(phi1 - phi2);
        (p - m, p + m)
    }

    /// Second derivatives `(∂²B/∂φ₁², ∂²B/∂φ₂², ∂²B/∂φ₁∂φ₂)`.
    pub fn hessian(&self, phi1: f64, phi2: f64) -> (f64, f64, f64) {
        if !self.active() {
            return (0.0, 0.0, 0.0);
        }
        let pp = self.b_plus(phi1 + phi2);
        let mm = self.b_minus(phi1 - phi2);
        (pp + mm, pp + mm, pp - mm)
    }

    /// `((4π/k) δB/δφ₁, (4π/k) δB/δφ₂)`, written so that `k` cancels:
    ///
    /// ```text
    ///   (4π/k) δB/δφ₁ = −2μλ e^{-φ⁺} + (μ/λ) sinh φ⁻
    ///   (4π/k) δB/δφ₂ = −2μλ e^{-φ⁺} − (μ/λ) sinh φ⁻
    /// ```
    pub fn closure_terms(&self, phi1: f64, phi2: f64) -> (f64, f64) {
        if !self.active() {
            return (0.0, 0.0);
        }
        let plus = -2.0 * self.mu * self.lambda * (-(phi1 + phi2)).exp();
        let minus = self.mu / self.lambda * (phi1 - phi2).sinh();
        (plus + minus, plus - minus)
    }

    /// Partial derivatives of [`BorderFunction::closure_terms`]:
    /// `[[∂c₁/∂φ₁, ∂c₁/∂φ₂], [∂c₂/∂φ₁, ∂c₂/∂φ₂]]`.
    pub fn closure_jacobian(&self, phi1: f64, phi2: f64) -> [[f64; 2]; 2] {
        if !self.active() {
            return [[0.0; 2]; 2];
        }
        let e = 2.0 * self.mu * self.lambda * (-(phi1 + phi2)).exp();
        let c = self.mu / self.lambda * (phi1 - phi2).cosh();
        [[e + c, e - c], [e - c, e + c]]
    }
}

/// Bulk potential `V = −(kμ²/2π) e^{-2φ}`.
pub fn bulk_potential(phi: f64, mu: f64, k: f64) -> f64 {
    -k * mu * mu / (2.0 * PI) * (-2.0 * phi).exp()
}
