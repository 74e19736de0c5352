//! The circle `S¹(r)` with a two-chart cover, a principal bundle over it
//! whose transition function is the defect gauge element, and checks of
//! the cocycle conditions, the quotient construction and triviality.
//!
//! Everything is represented at sample resolution: a finite set of points
//! on the circle and a finite set of fibre elements.

pub mod atlas;
pub mod cover;
pub mod history;
pub mod quotient;

pub use atlas::{
    arc_smoothness, cocycle_check, transition_from_defect, triviality_report, ArcSample,
    ArcSmoothness, ArcSummary, CocycleReport, TransitionAtlas, TransitionSource,
    TrivialityReport, COCYCLE_TOL, DEFAULT_SMOOTHNESS_BOUND, TRIVIAL_TOL,
};
pub use cover::{build_cover, Arc, CirclePoint, Cover, CoverStats};
pub use history::History;
pub use quotient::{quotient_build, quotient_build_ordered, BundleElement, Chart, ChartOrder, QuotientSample};
