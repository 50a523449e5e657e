//! Convex layers of a planar point set in O(n log n) time.
//!
//! The set is viewed through four rotations of the plane. In each rotation a
//! [`HullTree`] maintains the north-west monotone hull chain of the points
//! that remain; the four chains of the roots together form the outermost
//! remaining convex layer. Peeling that layer deletes its points from all
//! four trees and exposes the next one.
//!
//! Coordinates are integers with magnitude at most 2^30 and every predicate
//! is exact.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chain;
pub mod error;
pub mod geometry;
pub mod hull_tree;
pub mod layers;

pub use error::{Error, Invariant, ValidationError};
pub use geometry::{above, dominates, orientation, ExtPoint, Point, COORD_LIMIT};
pub use hull_tree::{HullTree, ScanCounters};
pub use layers::{peel_layers, LayerSet, Mode, PeelOptions, Peeler, Quadrant, Schedule, Sequential};
