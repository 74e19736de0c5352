use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};

/// Distance from the circle tolerated by [`CirclePoint::new`].
pub const ON_CIRCLE_TOL: f64 = 1e-12;

/// The two components of the chart overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Arc {
    /// `t > 0`
    A,
    /// `t < 0`
    B,
}

/// A point of `S¹(r) = {t² + x² = r²}` with its chart memberships.
///
/// `U₁` is the circle minus `(t, x) = (0, −r)`, `U₂` the circle minus
/// `(0, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint {
    pub t: f64,
    pub x: f64,
    pub in_u1: bool,
    pub in_u2: bool,
}

impl CirclePoint {
    pub fn new(r: f64, t: f64, x: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::InvalidInput(format!("circle radius must be positive, got {r}")));
        }
        let off = ((t * t + x * x).sqrt() - r).abs();
        if off > ON_CIRCLE_TOL * r.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "({t}, {x}) is {off:e} away from the circle of radius {r}"
            )));
        }
        let pole = t == 0.0;
        Ok(Self {
            t,
            x,
            in_u1: !(pole && x < 0.0),
            in_u2: !(pole && x > 0.0),
        })
    }

    pub fn in_overlap(&self) -> bool {
        self.in_u1 && self.in_u2
    }

    pub fn arc(&self) -> Option<Arc> {
        if self.t > 0.0 {
            Some(Arc::A)
        } else if self.t < 0.0 {
            Some(Arc::B)
        } else {
            None
        }
    }
}

/// Uniformly angled samples of `S¹(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub r: f64,
    pub points: Vec<CirclePoint>,
}

/// Samples `θ_k = 2πk/n` as `(t, x) = (r sin θ, r cos θ)`.
///
/// Quarter-turn angles are placed exactly, so the poles `(0, ±r)` are hit
/// whenever `n` is a multiple of 4 (or 2 for the poles alone).
pub fn build_cover(r: f64, n: usize) -> Result<Cover> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("circle radius must be positive, got {r}")));
    }
    if n < 8 {
        return Err(Error::InvalidInput(format!("a cover needs at least 8 samples, got {n}")));
    }
    let points = (0..n)
        .map(|k| {
            let (t, x) = if (4 * k) % n == 0 {
                match 4 * k / n {
                    0 => (0.0, r),
                    1 => (r, 0.0),
                    2 => (0.0, -r),
                    _ => (-r, 0.0),
                }
            } else {
                let theta = TAU * k as f64 / n as f64;
                (r * theta.sin(), r * theta.cos())
            };
            CirclePoint::new(r, t, x)
        })
        .collect::<Result<_>>()?;
    Ok(Cover { r, points })
}

/// Counts of points by chart membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverStats {
    pub points: usize,
    pub u1_only: usize,
    pub u2_only: usize,
    pub overlap: usize,
    pub arc_a: usize,
    pub arc_b: usize,
}

impl Cover {
    pub fn stats(&self) -> CoverStats {
        let count = |f: &dyn Fn(&CirclePoint) -> bool| self.points.iter().filter(|p| f(p)).count();
        CoverStats {
            points: self.points.len(),
            u1_only: count(&|p| p.in_u1 && !p.in_u2),
            u2_only: count(&|p| p.in_u2 && !p.in_u1),
            overlap: count(&|p| p.in_overlap()),
            arc_a: count(&|p| p.arc() == Some(Arc::A)),
            arc_b: count(&|p| p.arc() == Some(Arc::B)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poles_and_arcs() {
        let c = build_cover(1.0, 8).unwrap();
        let p0 = c.points[0];
        assert_eq!((p0.t, p0.x), (0.0, 1.0));
        assert!(p0.in_u1 && !p0.in_u2);
        let p4 = c.points[4];
        assert_eq!((p4.t, p4.x), (0.0, -1.0));
        assert!(!p4.in_u1 && p4.in_u2);
        assert_eq!(c.points[1].arc(), Some(Arc::A));
        assert_eq!(c.points[6].arc(), Some(Arc::B));
        assert!(c.points.iter().all(|p| p.in_u1 || p.in_u2));
        assert_eq!(
            c.stats(),
            CoverStats { points: 8, u1_only: 1, u2_only: 1, overlap: 6, arc_a: 3, arc_b: 3 }
        );
    }

    #[test]
    fn odd_cover_misses_poles() {
        let s = build_cover(2.0, 9).unwrap().stats();
        assert_eq!(s.u2_only, 0);
        assert_eq!(s.u1_only, 1);
        assert_eq!(s.overlap, 8);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_cover(0.0, 16).is_err());
        assert!(build_cover(1.0, 7).is_err());
        assert!(CirclePoint::new(1.0, 0.5, 0.5).is_err());
    }
}
