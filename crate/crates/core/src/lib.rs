//! Liouville field theory on a line with an integrable defect at `x = 0`.
//!
//! - [`lie`]: the algebra `sl(2)` in the basis `(h, E+, E-)` and its group.
//! - [`sim`]: the two half-line fields, the defect closure, a velocity-Verlet
//!   stepper, closed-form solutions and the Bäcklund generator.
//! - [`charges`]: momentum and energy with their defect corrections.
//! - [`gauge`]: lattice connections, curvature, gauge transformations, the
//!   defect gauge element and the two-patch hatted connections.
//! - [`bundle`]: transition functions on a circle around the defect, the
//!   cocycle check and the sampled quotient.
//! - [`cli`]: configuration and the subcommands behind the binary.
//!
//! Light-cone coordinates are `z = t + x`, `z̄ = t − x`, and the field
//! equation is `∂ₜ²φ − ∂ₓ²φ = 4μ² e^{-2φ}`.

pub mod bundle;
pub mod charges;
pub mod cli;
pub mod error;
pub mod gauge;
pub mod lie;
pub mod sim;

pub use error::{Error, Result};
