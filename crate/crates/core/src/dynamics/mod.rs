//! Straight-line flow on translation surfaces and billiard flow on garages.
//!
//! Surfaces are triangulated once into a [`Mesh`]; every tracing routine
//! walks triangles with exact translation offsets across face edges, so the
//! direction of motion never changes.

pub mod aperiodic;
pub mod billiard;
pub mod classify;
pub mod cylinders;
pub mod discrepancy;
pub mod flow;
pub mod growth;
pub mod saddle;
pub mod triangulation;

use thiserror::Error;

use crate::geometry::Vec2;

pub use aperiodic::{aperiodicity_evidence, continued_fraction_verdict, HeightSplitReport, Location, RationalityVerdict};
pub use billiard::{billiard_trace, BilliardTrajectory, BilliardTermination};
pub use classify::{classify_direction, ClassifyOptions, DirectionReport, Verdict};
pub use cylinders::{cylinder_decomposition, Cylinder, Decomposition};
pub use discrepancy::{discrepancy_sequence, DiscrepancyGrid};
pub use flow::{flow_trace, Segment, Termination, Trajectory};
pub use growth::{growth_count, GrowthReport, GrowthSource};
pub use saddle::{saddle_connections, HolonomyVector};
pub use triangulation::{Mesh, SurfacePoint};

/// Proximity and budget settings shared by the tracing routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// A ray passing this close to a cone point hits it.
    pub eps_sing: f64,
    /// Return to the start within this distance closes a trajectory.
    pub eps_close: f64,
    pub eps_len: f64,
    /// Hard cap on edge crossings per trajectory.
    pub max_crossings: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_sing: 1e-9,
            eps_close: 1e-9,
            eps_len: 1e-9,
            max_crossings: 100_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("start point lies on a cone point")]
    StartAtSingularity,
    #[error("start point lies on the garage boundary")]
    StartOnBoundary,
    #[error("start point is not inside the surface or garage")]
    StartOutside,
    #[error("direction must be nonzero and finite")]
    ZeroDirection,
    #[error("separatrix from vertex class {class} did not close within length {budget}")]
    BudgetExhausted { class: usize, budget: f64 },
    #[error("no cylinder decomposition: {0}")]
    NoDecomposition(String),
    #[error("point lies on a cylinder boundary")]
    PointOnBoundary,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub(crate) fn unit(dir: Vec2) -> Result<Vec2, DynamicsError> {
    let n = dir.norm();
    if !(n.is_finite() && n > 0.0) {
        return Err(DynamicsError::ZeroDirection);
    }
    Ok(dir * (1.0 / n))
}
