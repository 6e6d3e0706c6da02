//! Bistellar flips on triangulated 3-spheres.
//!
//! The crate provides immutable triangulation values with validity checks
//! ([`complex`]), the four bistellar moves ([`flips`]), canonical labeling
//! for isomorphism-class dedup ([`canon`]), integer simplicial homology
//! ([`homology`]), search over the vertex-preserving flip graph
//! ([`explorer`]), simulated annealing with the reduction and
//! stacked-potential objectives ([`anneal`]), and generators for the standard
//! triangulation families ([`generators`]).
//!
//! All values are immutable after construction; flips produce new values.
//! With the default `parallel` feature, frontier expansion in [`explorer`]
//! can fan out over a rayon pool; without it the same searches run
//! sequentially with identical results.

pub mod anneal;
pub mod canon;
pub mod complex;
pub mod error;
pub mod explorer;
pub mod flips;
pub mod generators;
pub mod homology;

pub use canon::{are_isomorphic, canonical_form, CanonicalForm};
pub use complex::{parse_triangulation, Edge, FVector, Facet, Triangle, Triangulation};
pub use error::{Error, Result};
pub use flips::{FlipDelta, FlipKind, FlipMove};
