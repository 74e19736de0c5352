//! Defect residuals, the defect gauge element and the Gauss-parameter solve.

use nalgebra::{DMatrix, Dyn, Matrix3, SMatrix, Vector3, SVD};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{adjoint, exp_alg, gauss_compose, GroupElement, LieElement};
use crate::sim::{BorderFunction, FieldState, JetPair};

/// `D₁ = ∂ₓφ₁ − ∂ₜφ₂ + (4π/k)δB/δφ₁`, `D₂ = ∂ₓφ₂ − ∂ₜφ₁ − (4π/k)δB/δφ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DefectResiduals {
    pub d1: f64,
    pub d2: f64,
}

pub fn defect_residuals(pair: &JetPair, border: &BorderFunction) -> DefectResiduals {
    let (f, s) = (&pair.first, &pair.second);
    let (c1, c2) = border.closure_terms(f.phi, s.phi);
    DefectResiduals {
        d1: f.phi_x - s.phi_t + c1,
        d2: s.phi_x - f.phi_t - c2,
    }
}

/// Residuals at the defect point of a state, with one-sided `∂ₓ`.
pub fn state_defect_residuals(s: &FieldState) -> Result<DefectResiduals> {
    Ok(defect_residuals(&s.defect_jets(), &s.params.border()?))
}

/// `(D, ∂ₜD, ∂ₓD)` for `D₁` and `D₂`, from the chain rule through the
/// closure terms.
pub(crate) fn defect_residual_jets(pair: &JetPair, border: &BorderFunction) -> ([f64; 3], [f64; 3]) {
    let (f, s) = (&pair.first, &pair.second);
    let r = defect_residuals(pair, border);
    let j = border.closure_jacobian(f.phi, s.phi);
    let dc = |row: [f64; 2], a: f64, b: f64| row[0] * a + row[1] * b;
    let d1 = [
        r.d1,
        f.phi_tx - s.phi_tt + dc(j[0], f.phi_t, s.phi_t),
        f.phi_xx - s.phi_tx + dc(j[0], f.phi_x, s.phi_x),
    ];
    let d2 = [
        r.d2,
        s.phi_tx - f.phi_tt - dc(j[1], f.phi_t, s.phi_t),
        s.phi_xx - f.phi_tx - dc(j[1], f.phi_x, s.phi_x),
    ];
    (d1, d2)
}

/// `g = exp(−φ₂h/2) · exp(2λE+) · exp(φ₁h/2)`.
pub fn defect_gauge_element(phi1: f64, phi2: f64, lambda: f64) -> GroupElement {
    dressed(phi1, phi2, &gauss_compose(2.0 * lambda, 0.0, 0.0))
}

/// `exp(−φ₂h/2) · g_c · exp(φ₁h/2)`.
fn dressed(phi1: f64, phi2: f64, gc: &GroupElement) -> GroupElement {
    exp_alg(LieElement::h(-0.5 * phi2)) * *gc * exp_alg(LieElement::h(0.5 * phi1))
}

/// Parameters of `g_c = exp(λ₁E+) exp(λ₂h) exp(λ₃E-)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl GaussParams {
    pub fn new(lambda1: f64, lambda2: f64, lambda3: f64) -> Self {
        Self {
            lambda1,
            lambda2,
            lambda3,
        }
    }

    /// The expected solution `(2λ, 0, 0)`.
    pub fn expected(lambda: f64) -> Self {
        Self::new(2.0 * lambda, 0.0, 0.0)
    }

    pub fn group(&self) -> GroupElement {
        gauss_compose(self.lambda1, self.lambda2, self.lambda3)
    }

    fn from_vector(v: &Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

/// Tolerance on `∂ₓφ` for the overlap regime.
pub const FLAT_TOL: f64 = 1e-10;

/// `Â⁽¹⁾_t − [g Â⁽²⁾_t g⁻¹ − (∂ₜg) g⁻¹]` in the overlap, with
/// `g = exp(−φ₂h/2) g_c exp(φ₁h/2)` and `∂ₜg` from the product rule.
pub fn gauge_relation_residual(
    pair: &JetPair,
    border: &BorderFunction,
    gc: &GaussParams,
) -> Result<LieElement> {
    let (f, s) = (&pair.first, &pair.second);
    if f.phi_x.abs() > FLAT_TOL || s.phi_x.abs() > FLAT_TOL {
        return Err(Error::Precondition(format!(
            "gauge relation needs x-independent fields, got phi1_x = {:e}, phi2_x = {:e}",
            f.phi_x, s.phi_x
        )));
    }
    let mu = border.mu;
    let r = defect_residuals(pair, border);
    let a_t = |phi: f64, phi_x: f64| {
        let m = mu * (-phi).exp();
        LieElement::new(0.5 * phi_x, -m, m)
    };
    let hat1 = a_t(f.phi, f.phi_x) - LieElement::h(0.5 * r.d1);
    let hat2 = a_t(s.phi, s.phi_x) - LieElement::h(0.5 * r.d2);
    let g = dressed(f.phi, s.phi, &gc.group());
    let ad_h = adjoint(&g, LieElement::H)?;
    let dg = LieElement::h(-0.5 * s.phi_t) + 0.5 * f.phi_t * ad_h;
    Ok(hat1 - (adjoint(&g, hat2)? - dg))
}

/// The gauge relation for `g_c = exp(2λE+)`, the defect gauge element.
pub fn verify_gauge_relation(pair: &JetPair, border: &BorderFunction) -> Result<LieElement> {
    gauge_relation_residual(pair, border, &GaussParams::expected(border.lambda))
}

/// Time derivatives `(∂ₜφ₁, ∂ₜφ₂)` that satisfy the frozen Bäcklund
/// relations when `∂ₓφ₁ = ∂ₓφ₂ = 0`.
pub fn flat_time_derivatives(border: &BorderFunction, phi1: f64, phi2: f64) -> (f64, f64) {
    let (mu, lambda) = (border.mu, border.lambda);
    if mu == 0.0 {
        return (0.0, 0.0);
    }
    let e = 2.0 * mu * lambda * (-(phi1 + phi2)).exp();
    let s = mu / lambda * (phi1 - phi2).sinh();
    (e + s, s - e)
}

pub const SOLVE_TOL: f64 = 1e-10;
pub const SOLVE_MAX_ITER: usize = 100;

/// The nine coefficients of the gauge relation for a trial `g_c`.
///
/// After conjugation by `exp(φ₂h/2)` the residual is exactly a combination
/// of `e^{φ₁−φ₂}`, `e^{φ₂−φ₁}` and `e^{−φ₁−φ₂}` with constant Lie-algebra
/// coefficients. They are recovered by least squares over the samples; each
/// must vanish.
fn nine_coefficients(
    border: &BorderFunction,
    samples: &[(f64, f64)],
    fit: &SVD<f64, Dyn, Dyn>,
    gc: &GaussParams,
) -> Result<[f64; 9]> {
    let n = samples.len();
    let mut rhs = DMatrix::<f64>::zeros(n, 3);
    for (row, &(p1, p2)) in samples.iter().enumerate() {
        let mut pair = JetPair::default();
        pair.first.phi = p1;
        pair.second.phi = p2;
        let (t1, t2) = flat_time_derivatives(border, p1, p2);
        pair.first.phi_t = t1;
        pair.second.phi_t = t2;
        let r = gauge_relation_residual(&pair, border, gc)?;
        let q = adjoint(&exp_alg(LieElement::h(0.5 * p2)), r)?;
        rhs[(row, 0)] = q.c_h;
        rhs[(row, 1)] = q.c_p;
        rhs[(row, 2)] = q.c_m;
    }
    let coeffs = fit
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidInput(format!("sample fit failed: {e}")))?;
    let mut out = [0.0; 9];
    for k in 0..3 {
        for c in 0..3 {
            out[3 * k + c] = coeffs[(k, c)];
        }
    }
    Ok(out)
}

/// Solves the nine equations for `(λ₁, λ₂, λ₃)` by damped Gauss–Newton
/// from `(0, 0, 0)`.
pub fn solve_gauss_parameters(
    mu: f64,
    lambda: f64,
    samples: &[(f64, f64)],
) -> Result<GaussParams> {
    if mu == 0.0 {
        return Err(Error::InvalidInput(
            "Gauss solve needs mu != 0 (every g_c works otherwise)".into(),
        ));
    }
    if lambda == 0.0 {
        // no defect: g collapses to exp(−φ₂h/2) exp(φ₁h/2)
        return Ok(GaussParams::new(0.0, 0.0, 0.0));
    }
    if samples.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "Gauss solve needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    // k cancels in every closure term
    let border = BorderFunction::new(mu, 1.0, lambda)?;
    let design = DMatrix::from_fn(samples.len(), 3, |row, col| {
        let (p1, p2) = samples[row];
        match col {
            0 => (p1 - p2).exp(),
            1 => (p2 - p1).exp(),
            _ => (-p1 - p2).exp(),
        }
    });
    let scale = design.amax();
    let fit = design.svd(true, true);
    if fit.rank(1e-9 * scale) < 3 {
        return Err(Error::InvalidInput(
            "samples are not in general position".into(),
        ));
    }
    let eval = |p: &Vector3<f64>| -> Result<SMatrix<f64, 9, 1>> {
        let c = nine_coefficients(&border, samples, &fit, &GaussParams::from_vector(p))?;
        Ok(SMatrix::<f64, 9, 1>::from_column_slice(&c))
    };

    let mut p = Vector3::zeros();
    let mut f = eval(&p)?;
    let mut damping = 1e-3;
    let mut iterations = 0;
    while f.amax() > SOLVE_TOL {
        if iterations == SOLVE_MAX_ITER {
            return Err(Error::NoSolution {
                iterations,
                residual: f.amax(),
            });
        }
        iterations += 1;
        let mut jac = SMatrix::<f64, 9, 3>::zeros();
        for c in 0..3 {
            let h = 1e-6 * (1.0 + p[c].abs());
            let mut hi = p;
            let mut lo = p;
            hi[c] += h;
            lo[c] -= h;
            jac.set_column(c, &((eval(&hi)? - eval(&lo)?) / (2.0 * h)));
        }
        let jtj = jac.transpose() * jac;
        let jtf = jac.transpose() * f;
        loop {
            let lhs = jtj + Matrix3::from_diagonal(&jtj.diagonal()) * damping
                + Matrix3::identity() * 1e-15;
            let step = lhs
                .lu()
                .solve(&(-jtf))
                .ok_or(Error::NoSolution {
                    iterations,
                    residual: f.amax(),
                })?;
            let trial = p + step;
            let ft = eval(&trial)?;
            if ft.norm() < f.norm() {
                p = trial;
                f = ft;
                damping = (damping * 0.3).max(1e-12);
                break;
            }
            damping *= 10.0;
            if damping > 1e12 {
                return Err(Error::NoSolution {
                    iterations,
                    residual: f.amax(),
                });
            }
        }
    }
    Ok(GaussParams::from_vector(&p))
}
