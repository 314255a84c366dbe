//! Error type shared by the whole engine.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The quotient in question has infinitely many standard monomials.
    #[error("module is not Artinian: {0}")]
    NotArtinian(String),

    /// Length computation requested for a module of positive dimension.
    #[error("module does not have finite length: {0}")]
    NotFiniteLength(String),

    /// The element lies in the relation ideal, so its image in the module is zero.
    #[error("element is zero in the module")]
    InRelations,

    /// A weight c_i exceeds the largest power of q containing a_i.
    #[error("element {element} does not lie in q^{weight}")]
    WeightTooLarge { element: String, weight: u32 },

    /// An operation that needs at least one element got an empty list.
    #[error("empty element list")]
    EmptySystem,

    /// The elements do not form a system of parameters for the module.
    #[error("not a system of parameters: {0}")]
    NotSop(String),

    /// Matrix dimensions do not line up.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// The characteristic is not a prime in the supported range.
    #[error("{0} is not a prime in [2, 2^31)")]
    NotPrime(u64),

    /// A scan hit its degree or iteration bound before the observation window
    /// filled with constant values.
    #[error("no stabilization within bound: {0}")]
    Unstable(String),

    /// Two routes that must agree produced different values.
    #[error("route disagreement: {0}")]
    Disagreement(String),

    /// An ascending chain did not settle within the iteration bound.
    #[error("saturation chain did not stabilize within bound: {0}")]
    NoStabilization(String),

    /// The two element systems generate ideals with different radicals.
    #[error("element systems have different radicals")]
    RadicalMismatch,

    /// A parameter is outside the supported range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),


    /// An internal consistency check failed; this indicates a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// Text input could not be parsed.
    #[error("parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
