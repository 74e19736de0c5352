use crate::error::{Error, Result};
use crate::sim::{Coupling, FieldState};

/// Slack allowed when a query time sits just past the recorded range.
const TIME_SLACK: f64 = 1e-9;

/// A recorded run, interpolated to arbitrary `(t, x)`.
///
/// Values are linear in `t` between snapshots and linear in `x` between
/// grid nodes. Each field is continued past the defect as a constant in
/// `x`, so both are defined on the whole strip.
#[derive(Debug, Clone)]
pub struct History {
    snapshots: Vec<FieldState>,
    offset: f64,
}

impl History {
    pub fn new(snapshots: Vec<FieldState>) -> Result<Self> {
        let Some(first) = snapshots.first() else {
            return Err(Error::InvalidInput("empty field history".into()));
        };
        let (dx, n, coupling) = (first.dx, first.n, first.coupling);
        if snapshots
            .iter()
            .any(|s| s.dx != dx || s.n != n || s.coupling != coupling)
        {
            return Err(Error::InvalidInput("snapshots use different grids".into()));
        }
        if snapshots.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::InvalidInput("snapshot times must increase".into()));
        }
        Ok(Self {
            snapshots,
            offset: 0.0,
        })
    }

    /// Places the defect at `x = offset` instead of the origin.
    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn snapshots(&self) -> &[FieldState] {
        &self.snapshots
    }

    pub fn coupling(&self) -> Coupling {
        self.snapshots[0].coupling
    }

    pub fn time_range(&self) -> (f64, f64) {
        (self.snapshots[0].t, self.snapshots[self.snapshots.len() - 1].t)
    }

    /// `(φ₁, φ₂)` at `(t, x)`.
    pub fn sample(&self, t: f64, x: f64) -> Result<(f64, f64)> {
        let out = || Error::OutOfRange { t, x };
        let (t0, t1) = self.time_range();
        let s0 = &self.snapshots[0];
        let half = s0.half_length();
        let y = x - self.offset;
        if t < t0 - TIME_SLACK || t > t1 + TIME_SLACK || y.abs() > half * (1.0 + 1e-12) {
            return Err(out());
        }
        let t = t.clamp(t0, t1);
        let (phi1, phi2) = if self.snapshots.len() == 1 {
            at_x(s0, y)
        } else {
            let k = self
                .snapshots
                .partition_point(|s| s.t <= t)
                .clamp(1, self.snapshots.len() - 1);
            let (a, b) = (&self.snapshots[k - 1], &self.snapshots[k]);
            let w = (t - a.t) / (b.t - a.t);
            let (a1, a2) = at_x(a, y);
            let (b1, b2) = at_x(b, y);
            (a1 + w * (b1 - a1), a2 + w * (b2 - a2))
        };
        if !(phi1.is_finite() && phi2.is_finite()) {
            return Err(Error::Interpolation(format!(
                "non-finite field value at (t, x) = ({t}, {x})"
            )));
        }
        Ok((phi1, phi2))
    }
}

fn at_x(s: &FieldState, y: f64) -> (f64, f64) {
    let n = s.n;
    let lerp = |v: &[f64], u: f64| {
        let i = (u.floor() as usize).min(n - 1);
        let w = u - i as f64;
        v[i] + w * (v[i + 1] - v[i])
    };
    let phi1 = if y >= 0.0 {
        s.phi1[n]
    } else {
        lerp(&s.phi1, ((y / s.dx) + n as f64).max(0.0))
    };
    let phi2 = if y <= 0.0 {
        s.phi2[0]
    } else {
        lerp(&s.phi2, y / s.dx)
    };
    (phi1, phi2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Params;

    fn linear(t: f64) -> FieldState {
        let n = 4;
        let dx = 0.25;
        let phi1 = (0..=n).map(|i| t + (i as f64 - n as f64) * dx).collect::<Vec<_>>();
        let phi2 = (0..=n).map(|j| t + 2.0 * j as f64 * dx).collect::<Vec<_>>();
        let z = vec![0.0; n + 1];
        FieldState::new(
            Params::new(1.0, 1.0, 1.0),
            Coupling::Defect,
            t,
            dx,
            phi1,
            z.clone(),
            phi2,
            z,
        )
        .unwrap()
    }

    #[test]
    fn reproduces_bilinear_data() {
        let h = History::new(vec![linear(-1.0), linear(0.0), linear(1.0)]).unwrap();
        let (p1, p2) = h.sample(0.3, -0.6).unwrap();
        assert!((p1 - (0.3 - 0.6)).abs() < 1e-15);
        assert!((p2 - 0.3).abs() < 1e-15);
        let (p1, p2) = h.sample(-0.7, 0.4).unwrap();
        assert!((p1 + 0.7).abs() < 1e-15);
        assert!((p2 - (-0.7 + 0.8)).abs() < 1e-15);
    }

    #[test]
    fn coverage_checked() {
        let h = History::new(vec![linear(0.0), linear(1.0)]).unwrap();
        assert!(matches!(h.sample(-0.5, 0.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(h.sample(0.5, 1.5), Err(Error::OutOfRange { .. })));
        assert!(h.sample(1.0 + 1e-12, 1.0).is_ok());
        let shifted = h.with_offset(0.5);
        assert!(shifted.sample(0.5, 1.5).is_ok());
    }

    #[test]
    fn rejects_unordered() {
        assert!(History::new(vec![linear(1.0), linear(0.0)]).is_err());
        assert!(History::new(vec![]).is_err());
    }
}
