//! Translation surfaces from rational polygons and parking garages.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: rational angles and dihedral groups, integer-exact.
//! * [`garage`], [`catalog`], [`format`]: garages as reflection-tiling complexes.
//! * [`surface`]: unfolding a garage into a translation surface.
//! * [`covers`]: covers induced by one garage tiling another.
//! * [`dynamics`]: straight-line and billiard flow, saddle connections, cylinders.
//! * [`report`], [`svg`], [`repro`]: text output and reproduction scripts.

pub mod catalog;
pub mod covers;
pub mod dynamics;
pub mod exact;
pub mod format;
pub mod garage;
pub mod geometry;
pub mod report;
pub mod repro;
pub mod surface;
pub mod svg;

use thiserror::Error;

pub use exact::{Angle, DihedralElement, DihedralGroup};
pub use garage::{Garage, GarageSpec};
pub use geometry::Vec2;
pub use surface::TranslationSurface;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] exact::ExactError),
    #[error(transparent)]
    Garage(#[from] garage::GarageError),
    #[error(transparent)]
    Surface(#[from] surface::SurfaceError),
    #[error(transparent)]
    Cover(#[from] covers::CoverError),
    #[error(transparent)]
    Dynamics(#[from] dynamics::DynamicsError),
}
