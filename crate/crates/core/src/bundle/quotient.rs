use serde::Serialize;

use super::atlas::{cocycle_check, TransitionAtlas};
use crate::error::{Error, Result};
use crate::lie::GroupElement;

/// Fibre elements closer than this in one chart over one point are the
/// same element of `U_i × F`.
const SAME_FIBRE_TOL: f64 = 1e-12;

/// The chart a local trivialisation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Chart {
    U1,
    U2,
}

/// Enumeration order of the charts while building `E₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartOrder {
    FirstThenSecond,
    SecondThenFirst,
}

/// `(i, p, f) ∈ U_i × F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BundleElement {
    pub chart: Chart,
    pub point: usize,
    pub fibre: GroupElement,
}

/// Bit-exact description of an element, independent of indexing.
pub type ElementKey = (Chart, u64, u64, [u64; 4]);

/// `E₀/∼` at sample resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSample {
    pub elements: Vec<BundleElement>,
    /// Each class lists indices into `elements`.
    pub classes: Vec<Vec<usize>>,
    /// `π` of each class, an index into the cover.
    pub projection: Vec<usize>,
    /// Largest distance between `f₁ f₂⁻¹` and the stored `t₁₂(p)` over
    /// classes with representatives `(1, p, f₁)` and `(2, p, f₂)`.
    pub transition_deviation: f64,
}

impl QuotientSample {
    /// Classes as sorted key lists, sorted, for order-free comparison.
    /// With `points` given, only classes over those `(t, x)` are kept.
    pub fn canonical_classes(
        &self,
        atlas: &TransitionAtlas,
        points: Option<&[(f64, f64)]>,
    ) -> Vec<Vec<ElementKey>> {
        let mut out: Vec<Vec<ElementKey>> = self
            .classes
            .iter()
            .filter(|c| {
                let p = atlas.cover.points[self.elements[c[0]].point];
                points.is_none_or(|ps| ps.contains(&(p.t, p.x)))
            })
            .map(|c| {
                let mut keys: Vec<ElementKey> = c
                    .iter()
                    .map(|&e| {
                        let el = &self.elements[e];
                        let p = atlas.cover.points[el.point];
                        (el.chart, p.t.to_bits(), p.x.to_bits(), el.fibre.entries().map(f64::to_bits))
                    })
                    .collect();
                keys.sort();
                keys
            })
            .collect();
        out.sort();
        out
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

pub fn quotient_build(atlas: &TransitionAtlas, fibres: &[GroupElement]) -> Result<QuotientSample> {
    quotient_build_ordered(atlas, fibres, ChartOrder::FirstThenSecond)
}

/// Forms `⋃ U_i × F`, identifies `(2, p, f) ∼ (1, p, t₁₂(p) f)` and
/// `(1, p, f) ∼ (2, p, t₂₁(p) f)`, and checks the projection and the
/// recovered transitions.
pub fn quotient_build_ordered(
    atlas: &TransitionAtlas,
    fibres: &[GroupElement],
    order: ChartOrder,
) -> Result<QuotientSample> {
    let cocycle = cocycle_check(atlas);
    if !cocycle.pass {
        return Err(Error::CocycleViolation {
            deviation: cocycle.inverse_deviation.max(cocycle.diagonal_deviation),
        });
    }
    let charts = match order {
        ChartOrder::FirstThenSecond => [Chart::U1, Chart::U2],
        ChartOrder::SecondThenFirst => [Chart::U2, Chart::U1],
    };
    let npts = atlas.cover.points.len();
    let mut by_point: Vec<Vec<usize>> = vec![Vec::new(); npts];
    let mut elements: Vec<BundleElement> = Vec::new();
    let mut links: Vec<(usize, usize)> = Vec::new();
    let mut intern = |el: BundleElement, elements: &mut Vec<BundleElement>| -> usize {
        let bucket = &mut by_point[el.point];
        if let Some(&i) = bucket
            .iter()
            .find(|&&i| elements[i].chart == el.chart && elements[i].fibre.distance(&el.fibre) <= SAME_FIBRE_TOL)
        {
            return i;
        }
        elements.push(el);
        bucket.push(elements.len() - 1);
        elements.len() - 1
    };
    for chart in charts {
        for (i, p) in atlas.cover.points.iter().enumerate() {
            let member = match chart {
                Chart::U1 => p.in_u1,
                Chart::U2 => p.in_u2,
            };
            if !member {
                continue;
            }
            for f in fibres {
                let a = intern(BundleElement { chart, point: i, fibre: *f }, &mut elements);
                if let Some(k) = atlas.overlap_index(i) {
                    let (other, g) = match chart {
                        Chart::U2 => (Chart::U1, atlas.t12[k]),
                        Chart::U1 => (Chart::U2, atlas.t21[k]),
                    };
                    let b = intern(BundleElement { chart: other, point: i, fibre: g * *f }, &mut elements);
                    links.push((a, b));
                }
            }
        }
    }
    let mut uf = UnionFind((0..elements.len()).collect());
    for (a, b) in links {
        uf.union(a, b);
    }
    let mut root_class = vec![usize::MAX; elements.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for e in 0..elements.len() {
        let r = uf.find(e);
        if root_class[r] == usize::MAX {
            root_class[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[root_class[r]].push(e);
    }
    let mut projection = Vec::with_capacity(classes.len());
    let mut transition_deviation: f64 = 0.0;
    for c in &classes {
        let p = elements[c[0]].point;
        if c.iter().any(|&e| elements[e].point != p) {
            return Err(Error::InvalidInput(
                "an equivalence class spans several base points".into(),
            ));
        }
        projection.push(p);
        if let Some(k) = atlas.overlap_index(p) {
            for &e1 in c.iter().filter(|&&e| elements[e].chart == Chart::U1) {
                for &e2 in c.iter().filter(|&&e| elements[e].chart == Chart::U2) {
                    let recovered = elements[e1].fibre * elements[e2].fibre.inverse();
                    transition_deviation = transition_deviation.max(recovered.distance(&atlas.t12[k]));
                }
            }
        }
    }
    Ok(QuotientSample {
        elements,
        classes,
        projection,
        transition_deviation,
    })
}
