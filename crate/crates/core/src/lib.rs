//! Presentations of semi-invariant algebras of Euclidean quivers, with
//! exact randomized verification by Schofield determinants.

pub mod catalog;
pub mod error;
pub mod euclidean;
pub mod linalg;
pub mod presentation;
pub mod quiver;
pub mod schofield;
pub mod tubes;
pub mod verify;

pub use error::{Error, Result};
pub use euclidean::EuclideanStructure;
pub use presentation::{Classification, Presentation, PresentationConfig};
pub use quiver::{DimensionVector, Quiver, RawQuiver, Weight};
pub use schofield::Representation;
pub use verify::{SamplerConfig, VerificationReport};
