//! Geodesics, Fréchet means, and vistal-cell decompositions in globally
//! nonpositively curved (NPC) orthant spaces, with phylogenetic tree space
//! as the primary instance.
//!
//! An orthant space is a union of Euclidean orthants glued along shared
//! coordinate subspaces, described by a set of axes and a pairwise
//! compatibility relation (the scaffold graph).  Tree space is the instance
//! whose axes are the splits of a leaf set and whose compatibility relation
//! is split compatibility.  When the scaffold complex is flag, the space is
//! globally NPC, geodesics are unique, and Fréchet means are well defined.
//!
//! The crate is generic over the coordinate scalar via [`Scalar`]: metric
//! evaluation happens in floating point ([`Point`] is the `f64` alias) while
//! every combinatorial decision (support refinement, min-cut tests, vistal
//! inequality systems) runs in exact rational arithmetic ([`ExactPoint`],
//! [`Rat`]).  An `f64` coordinate embeds exactly into the rationals, so the
//! two layers never disagree on a tie.

pub mod error;
pub mod flow;
pub mod frechet;
pub mod geodesic;
pub mod point;
pub mod scalar;
pub mod simplex;
pub mod space;
pub mod split;
pub mod vistal;

pub use error::{Error, Result};
pub use point::{GenericPoint, SquaredPoint};
pub use scalar::Scalar;
pub use space::{Axis, ScaffoldGraph, Space, SpaceKind};
pub use split::Split;

/// Exact rational scalar used for all combinatorial decisions.
pub type Rat = num_rational::BigRational;

/// A point of an orthant space with double-precision coordinates.
///
/// This is the API-surface representation; lengths that must be decided
/// exactly are embedded into [`Rat`] internally.
pub type Point = GenericPoint<f64>;

/// A point with exact rational coordinates, used where the artifact needs
/// exact inequality decisions end to end (vistal systems, witnesses).
pub type ExactPoint = GenericPoint<Rat>;

/// A tree is a point of tree space; pendant edges are the singleton-side
/// splits (plus the side `{1..n}` for label 0) and flow through the same
/// machinery as internal splits.
pub type Tree = GenericPoint<f64>;
