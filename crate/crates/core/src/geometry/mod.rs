//! Exact convex geometry: polyhedra, volumes, fans and mixed volumes.

pub mod fan;
pub mod mixed;
pub mod polyhedron;
pub mod volume;

pub use fan::{fan_refinement, normal_fan, Fan, Wall};
pub use mixed::{dilate, minkowski_sum, mixed_volume, normalized_mixed_volume};
pub use polyhedron::{Inequality, RationalPolyhedron, VRep, MAX_DIM};
pub use volume::{first_moment, min_support, moment, triangulation, volume, volume_with_anchor};
