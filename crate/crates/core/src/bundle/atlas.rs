use std::f64::consts::TAU;

use serde::Serialize;

use super::cover::{Arc, CirclePoint, Cover};
use super::history::History;
use crate::error::{Error, Result};
use crate::gauge::defect_gauge_element;
use crate::lie::GroupElement;
use crate::sim::Coupling;

/// Tolerance of the cocycle conditions.
pub const COCYCLE_TOL: f64 = 1e-12;
/// Distance from the identity below which a transition counts as trivial.
pub const TRIVIAL_TOL: f64 = 1e-10;
/// Default bound on `|Δt₁₂| / Δs` between neighbouring arc samples.
pub const DEFAULT_SMOOTHNESS_BOUND: f64 = 100.0;

/// Where the transition functions came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransitionSource {
    /// The defect gauge element along a recorded run.
    Defect { lambda: f64 },
    /// A recorded run without a defect: the two patches coincide.
    NoDefect,
    Identity,
    Custom,
}

/// Cover of `S¹(r)` with `t₁₂` on the overlap and `t₂₁ = t₁₂⁻¹`.
///
/// `overlap[k]` indexes `cover.points`; `t12[k]` and `t21[k]` live there.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionAtlas {
    pub cover: Cover,
    pub overlap: Vec<usize>,
    pub t12: Vec<GroupElement>,
    pub t21: Vec<GroupElement>,
    pub source: TransitionSource,
}

impl TransitionAtlas {
    pub fn r(&self) -> f64 {
        self.cover.r
    }

    /// Builds `t₁₂` pointwise from `f` and sets `t₂₁` to its inverse.
    pub fn from_fn<F>(cover: Cover, source: TransitionSource, f: F) -> Result<Self>
    where
        F: Fn(&CirclePoint) -> Result<GroupElement>,
    {
        let overlap: Vec<usize> = (0..cover.points.len())
            .filter(|&i| cover.points[i].in_overlap())
            .collect();
        let t12 = overlap
            .iter()
            .map(|&i| f(&cover.points[i]))
            .collect::<Result<Vec<_>>>()?;
        if let Some(k) = t12.iter().position(|g| !g.is_finite()) {
            let p = cover.points[overlap[k]];
            return Err(Error::Interpolation(format!(
                "non-finite transition at (t, x) = ({}, {})",
                p.t, p.x
            )));
        }
        let t21 = t12.iter().map(GroupElement::inverse).collect();
        Ok(Self {
            cover,
            overlap,
            t12,
            t21,
            source,
        })
    }

    pub fn identity(cover: Cover) -> Self {
        Self::from_fn(cover, TransitionSource::Identity, |_| Ok(GroupElement::identity()))
            .expect("identity transitions are finite")
    }

    pub fn custom<F>(cover: Cover, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> GroupElement,
    {
        Self::from_fn(cover, TransitionSource::Custom, |p| Ok(f(p.t, p.x)))
    }

    /// Index into `overlap` of cover point `i`, if it has transitions.
    pub fn overlap_index(&self, i: usize) -> Option<usize> {
        self.overlap.binary_search(&i).ok()
    }
}

/// `t₁₂(p) = g(p)` with `g` the defect gauge element of the interpolated
/// fields. A run without a defect gives identity transitions.
pub fn transition_from_defect(cover: Cover, history: &History, lambda: f64) -> Result<TransitionAtlas> {
    if history.coupling() == Coupling::Transparent {
        for p in cover.points.iter().filter(|p| p.in_overlap()) {
            history.sample(p.t, p.x)?;
        }
        return TransitionAtlas::from_fn(cover, TransitionSource::NoDefect, |_| {
            Ok(GroupElement::identity())
        });
    }
    TransitionAtlas::from_fn(cover, TransitionSource::Defect { lambda }, |p| {
        let (phi1, phi2) = history.sample(p.t, p.x)?;
        Ok(defect_gauge_element(phi1, phi2, lambda))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CocycleReport {
    pub pass: bool,
    pub points: usize,
    /// `max |t_ii − e|`
    pub diagonal_deviation: f64,
    /// `max |t₁₂t₂₁ − e|, |t₂₁t₁₂ − e|`
    pub inverse_deviation: f64,
    pub tolerance: f64,
}

pub fn cocycle_check(atlas: &TransitionAtlas) -> CocycleReport {
    // t_ii is the identity by construction of a two-chart atlas
    let diagonal_deviation = GroupElement::identity().distance_from_identity();
    let inverse_deviation = atlas
        .t12
        .iter()
        .zip(&atlas.t21)
        .map(|(a, b)| {
            (*a * *b)
                .distance_from_identity()
                .max((*b * *a).distance_from_identity())
        })
        .fold(0.0, f64::max);
    CocycleReport {
        pass: diagonal_deviation <= COCYCLE_TOL && inverse_deviation <= COCYCLE_TOL,
        points: atlas.t12.len(),
        diagonal_deviation,
        inverse_deviation,
        tolerance: COCYCLE_TOL,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcSummary {
    pub arc: Arc,
    pub points: usize,
    pub max_distance_from_identity: f64,
    pub mean_distance_from_identity: f64,
    /// Transition entries `[g11, g12, g21, g22]` keyed by `(t, x)`.
    pub samples: Vec<ArcSample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcSample {
    pub t: f64,
    pub x: f64,
    pub entries: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrivialityReport {
    pub trivial: bool,
    pub verdict: String,
    pub nontrivial_transitions: usize,
    pub max_distance_from_identity: f64,
    pub tolerance: f64,
    pub arcs: Vec<ArcSummary>,
}

/// Trivial iff every stored transition is the identity within
/// [`TRIVIAL_TOL`]. Anything else is reported as "not manifestly
/// trivial": a different choice of trivialisations might still remove it.
pub fn triviality_report(atlas: &TransitionAtlas) -> TrivialityReport {
    let dist: Vec<f64> = atlas.t12.iter().map(GroupElement::distance_from_identity).collect();
    let nontrivial = dist.iter().filter(|&&d| d > TRIVIAL_TOL).count();
    let arcs = [Arc::A, Arc::B]
        .into_iter()
        .map(|arc| {
            let on_arc: Vec<usize> = (0..atlas.overlap.len())
                .filter(|&k| atlas.cover.points[atlas.overlap[k]].arc() == Some(arc))
                .collect();
            let d: Vec<f64> = on_arc.iter().map(|&k| dist[k]).collect();
            ArcSummary {
                arc,
                points: on_arc.len(),
                max_distance_from_identity: d.iter().copied().fold(0.0, f64::max),
                mean_distance_from_identity: if d.is_empty() {
                    0.0
                } else {
                    d.iter().sum::<f64>() / d.len() as f64
                },
                samples: on_arc
                    .iter()
                    .map(|&k| {
                        let p = atlas.cover.points[atlas.overlap[k]];
                        ArcSample { t: p.t, x: p.x, entries: atlas.t12[k].entries() }
                    })
                    .collect(),
            }
        })
        .collect();
    TrivialityReport {
        trivial: nontrivial == 0,
        verdict: if nontrivial == 0 { "trivial" } else { "not manifestly trivial" }.into(),
        nontrivial_transitions: nontrivial,
        max_distance_from_identity: dist.iter().copied().fold(0.0, f64::max),
        tolerance: TRIVIAL_TOL,
        arcs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcSmoothness {
    pub arc: Arc,
    pub points: usize,
    /// Largest entry jump between neighbouring samples.
    pub max_jump: f64,
    /// `max_jump` divided by the arc length between samples.
    pub max_slope: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Discrete continuity of `t₁₂` along each arc, checked separately.
///
/// Assumes the cover is uniformly angled in point order, as produced by
/// [`super::build_cover`].
pub fn arc_smoothness(atlas: &TransitionAtlas, bound: f64) -> Vec<ArcSmoothness> {
    let n = atlas.cover.points.len();
    let ds = atlas.r() * TAU / n as f64;
    [Arc::A, Arc::B]
        .into_iter()
        .map(|arc| {
            let ks: Vec<usize> = (0..atlas.overlap.len())
                .filter(|&k| atlas.cover.points[atlas.overlap[k]].arc() == Some(arc))
                .collect();
            let max_jump = ks
                .windows(2)
                .filter(|w| atlas.overlap[w[1]] == atlas.overlap[w[0]] + 1)
                .map(|w| atlas.t12[w[1]].distance(&atlas.t12[w[0]]))
                .fold(0.0, f64::max);
            let max_slope = max_jump / ds;
            ArcSmoothness {
                arc,
                points: ks.len(),
                max_jump,
                max_slope,
                bound,
                pass: max_slope <= bound,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::build_cover;
    use crate::lie::{exp_alg, LieElement};

    #[test]
    fn identity_atlas_is_trivial() {
        let a = TransitionAtlas::identity(build_cover(1.0, 16).unwrap());
        assert_eq!(a.t12.len(), 14);
        let c = cocycle_check(&a);
        assert!(c.pass);
        assert_eq!(c.inverse_deviation, 0.0);
        let t = triviality_report(&a);
        assert!(t.trivial);
        assert_eq!(t.verdict, "trivial");
        assert_eq!(t.arcs[0].points, 7);
    }

    #[test]
    fn corrupted_inverse_detected() {
        let mut a = TransitionAtlas::custom(build_cover(1.0, 32).unwrap(), |t, x| {
            exp_alg(LieElement::new(0.3 * t, x, -0.2))
        })
        .unwrap();
        assert!(cocycle_check(&a).pass);
        let mut m = *a.t21[3].matrix();
        m[(0, 0)] += 1e-3;
        a.t21[3] = GroupElement::from_matrix(m);
        let c = cocycle_check(&a);
        assert!(!c.pass);
        assert!(c.inverse_deviation > 5e-4 && c.inverse_deviation < 5e-3);
        let t = triviality_report(&a);
        assert!(!t.trivial);
        assert_eq!(t.verdict, "not manifestly trivial");
    }

    #[test]
    fn smooth_and_jumpy_arcs() {
        let smooth = TransitionAtlas::custom(build_cover(1.0, 64).unwrap(), |t, x| {
            exp_alg(LieElement::new(t, x, 0.0))
        })
        .unwrap();
        assert!(arc_smoothness(&smooth, DEFAULT_SMOOTHNESS_BOUND).iter().all(|s| s.pass));
        let jumpy = TransitionAtlas::custom(build_cover(1.0, 64).unwrap(), |t, x| {
            exp_alg(LieElement::h(if x > 0.1 && t > 0.0 { 5.0 } else { 0.0 }))
        })
        .unwrap();
        let s = arc_smoothness(&jumpy, DEFAULT_SMOOTHNESS_BOUND);
        assert!(!s[0].pass);
        assert!(s[1].pass);
    }
}
