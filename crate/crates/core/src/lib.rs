#![no_std]

extern crate alloc;

pub mod amenability;
pub mod cone;
pub mod error;
pub mod faces;
pub mod fixtures;
pub mod linalg;
pub mod polynomial;
pub mod projection;
pub mod sampling;
pub mod scalar;
pub mod subspace;
pub mod univariate;

pub use amenability::{AmenabilityEstimate, AmenabilityOptions, Projectors};
pub use cone::{
    Certification, HyperbolicityCheck, HyperbolicityCone, Membership, MultiplicitySignature,
    Tolerances,
};
pub use error::{Error, Result};
pub use faces::{FaceDescriptor, Intersection, SpanDiscovery};
pub use fixtures::{CatalogFace, Fixture};
pub use polynomial::{Exponent, Polynomial};
pub use projection::{Metric, ProjectionResult, Projector};
pub use scalar::{CoefficientMode, Rational, Scalar};
pub use subspace::Subspace;
pub use univariate::{RealRootedness, RootList, UnivariatePoly};
