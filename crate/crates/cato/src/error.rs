use thiserror::Error;

/// Failure modes shared across the crate. Precondition violations surface as
/// explicit variants rather than panics so the CLI can map them to exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown or unsupported root system type `{0}`")]
    UnknownType(String),

    #[error("rank {got} exceeds the materializable cap {cap}")]
    RankCap { got: usize, cap: usize },

    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("roots are proportional; the root string is undefined")]
    ProportionalRoots,

    #[error("`{0}` is not a root of this system")]
    NotARoot(String),

    #[error("`{0}` is not a positive root of this system")]
    NotAPositiveRoot(String),

    #[error("simple-root index {got} out of range for rank {rank}")]
    BadSimpleIndex { got: usize, rank: usize },

    #[error("elements belong to different bracket tables ({0} vs {1})")]
    TableMismatch(String, String),

    #[error("depth {got} exceeds the configured cap {cap}")]
    DepthCap { got: u32, cap: u32 },

    #[error("offset of height {got} lies beyond truncation depth {depth}")]
    BeyondDepth { got: u32, depth: u32 },

    #[error("weight difference is not a non-negative root-lattice combination")]
    NotInRootLattice,

    #[error("residue characteristic assumption violated: {0}")]
    HypViolated(String),

    #[error("{0}")]
    BadInput(String),
}
