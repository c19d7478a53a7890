use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the polynomial, cone and face machinery.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("exponent vector {exponent:?} has total degree {actual}, expected {expected}")]
    NotHomogeneous {
        exponent: Vec<u32>,
        expected: u32,
        actual: u32,
    },

    #[error("derivative order {order} exceeds degree {degree}")]
    OrderTooLarge { order: usize, degree: usize },

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("polynomial is not certified real-rooted")]
    NotRealRooted,

    #[error("basis vectors are linearly dependent (rank {rank} < {count})")]
    DependentBasis { rank: usize, count: usize },

    #[error("p(e) = {value} is not positive")]
    NonPositiveAtDirection { value: f64 },

    #[error("line through witness {witness:?} is not real-rooted")]
    NotHyperbolic { witness: Vec<f64> },

    #[error("real-rootedness of the line through {witness:?} is inconclusive")]
    InconclusiveRealness { witness: Vec<f64> },

    #[error("point is not in the cone")]
    NotInCone,

    #[error("point is not in the interior of the cone")]
    NotInterior,

    #[error("point is not in the subspace (residual {residual})")]
    NotInSubspace { residual: f64 },

    #[error("derivative D_e^{order} p does not vanish identically on the span")]
    DerivativeDoesNotVanish { order: usize },

    #[error("witness is not interior to the derivative relaxation of order {order}")]
    NotRelativeInterior { order: usize },

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("could not generate relative-interior samples")]
    NoRelativeInteriorSamples,

    #[error("span discovery failed: {0}")]
    SpanDiscovery(String),

    #[error("iteration cap {iterations} reached (residual {residual})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
