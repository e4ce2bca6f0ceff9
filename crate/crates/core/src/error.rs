use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("element list is not closed under multiplication")]
    NotClosed,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("origin is not in the interior of the polytope")]
    OriginNotInterior,

    #[error("polytope is not reflexive: {0}")]
    NotReflexive(String),

    #[error("improper face: {0}")]
    ImproperFace(String),

    #[error("cone is not strictly convex")]
    NotStrictlyConvex,

    #[error("cone is not smooth: {0}")]
    NotSmooth(String),

    #[error("cone is not a maximal cone of the fan")]
    ConeNotInFan,

    #[error("action does not preserve the object set: {0}")]
    ActionNotClosed(String),

    #[error("no height given for ray {0:?}")]
    MissingHeight(Vec<i64>),

    #[error("element is not an involution")]
    NotInvolution,

    #[error("element is not a member of the group")]
    NotMember,

    #[error("no catalog entry covers groups of order {0}")]
    UnsupportedOrder(usize),

    #[error("group of order {0} matches no catalog entry")]
    NoCatalogMatch(usize),

    #[error("malformed catalog record on line {line}: {reason}")]
    Catalog { line: usize, reason: String },

    #[error("not an M16 pair: {0}")]
    NotM16(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("zero coordinate in a torus point or twist")]
    ZeroCoordinate,

    #[error("deformation defect is {0}; the polynomial-deformation count is incomplete")]
    NonzeroDefect(i64),

    #[error("action is not free: {0}")]
    NotFree(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
