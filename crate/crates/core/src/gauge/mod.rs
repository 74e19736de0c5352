//! Gauge potentials: the bulk Lax connection, the two-patch connections
//! with step and delta parts, and the defect gauge element.

pub mod connection;
pub mod defect;
pub mod distributional;

pub use connection::{
    bulk_connection, curvature_residual, gauge_transform, Connection, Domain, GridSpec, GroupField,
    LieGrid,
};
pub use defect::{
    defect_gauge_element, defect_residuals, flat_time_derivatives, gauge_relation_residual,
    solve_gauss_parameters, state_defect_residuals, verify_gauge_relation, DefectResiduals,
    GaussParams,
};
pub use distributional::{
    distributional_curvature, strip_jets, DistributionalExpr, HattedConnection, Patch,
    RegionReport, StepExpr,
};
