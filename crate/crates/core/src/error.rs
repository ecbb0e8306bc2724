use alloc::string::String;

use crate::linalg::Int;

/// Errors produced by lattice and finite-form operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown lattice block `{0}`")]
    UnknownBlock(String),
    #[error("invalid block parameter for {name}: {value}")]
    BlockParameter { name: &'static str, value: Int },
    #[error("rank-one lattice [{0}] is not even")]
    OddRankOne(Int),
    #[error("invalid Gram matrix: {0}")]
    InvalidGram(&'static str),
    #[error("vector is zero")]
    ZeroVector,
    #[error("parse error at byte {pos} near `{token}`: {msg}")]
    Parse {
        pos: usize,
        token: String,
        msg: &'static str,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("matrix is not an isometry of the lattice")]
    NotIsometry,
    #[error("isometry order exceeds guard {0}")]
    OrderGuard(u32),
    #[error("group of order {0} exceeds the enumeration guard")]
    GroupGuard(u128),
    #[error("form is not 2-elementary")]
    NotTwoElementary,
    #[error("generators do not span an isotropic subgroup")]
    NotIsotropic,
    #[error("columns are linearly dependent")]
    DependentColumns,
    #[error("signature precondition failed: {0}")]
    Signature(&'static str),
    #[error("quotient is not elementary {0}-torsion")]
    IndexNotElementary(Int),
    #[error("rank guard exceeded ({0})")]
    RankGuard(usize),
    #[error("dual vector has no lift data")]
    NoLifts,
    #[error("vector is not in the dual lattice")]
    NotDual,
    #[error("determinants differ: {0} vs {1}")]
    DeterminantMismatch(Int, Int),
    #[error("unsupported case: {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
