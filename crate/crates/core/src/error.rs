use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed triangulation document: {0}")]
    Parse(String),

    #[error("invalid complex `{name}`: {reason}")]
    InvalidComplex { name: String, reason: String },

    #[error("orientation incoherent across face {face:?} of `{name}`")]
    OrientationIncoherent { name: String, face: Vec<String> },

    #[error("non-manifold incidence in `{name}`: face {face:?} has {cofaces} cofaces")]
    NonManifold {
        name: String,
        face: Vec<String>,
        cofaces: usize,
    },

    #[error("unknown subcomplex `{0}`")]
    UnknownSubcomplex(String),

    #[error("simplex {0:?} is not a simplex of the complex")]
    SimplexNotInComplex(Vec<String>),

    #[error("gluing identifies two vertices of simplex {0:?}")]
    DegenerateGluing(Vec<String>),

    #[error("invalid gluing: {0}")]
    Gluing(String),

    #[error("enumeration limit exceeded: group order {order} exceeds limit {limit}")]
    EnumerationLimitExceeded { order: BigUint, limit: u64 },

    #[error("subspace meets the boundary")]
    SubspaceMeetsBoundary,

    #[error("`{0}` must be oriented")]
    OrientationMissing(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("coefficient mismatch: {0}")]
    ModulusMismatch(String),

    #[error("invalid coefficient group: {0}")]
    InvalidGroup(String),

    #[error("boundary component mismatch: {0}")]
    ComponentMismatch(String),

    #[error("cochain is not a cocycle")]
    NotACocycle,

    #[error("`{0}` has nonempty boundary")]
    NotClosed(String),

    #[error("brute-force oracle refused: {0}")]
    OracleTooLarge(String),
}
