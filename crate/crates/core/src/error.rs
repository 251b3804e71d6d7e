use thiserror::Error;

use crate::bits::BitString;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid bit string: {0}")]
    InvalidBitString(String),
    #[error("gamma code is undefined for 0")]
    ZeroLength,
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("invalid horizon: {0}")]
    InvalidHorizon(String),
    #[error("horizon exceeds resource limit: {programs} programs requested, limit is {limit}")]
    ResourceLimit { programs: u128, limit: u128 },
    #[error("step budget {requested} outside [1, {t_max}]")]
    BudgetOutOfRange { requested: u64, t_max: u32 },
    #[error("no program within the horizon outputs {0}")]
    NotFound(BitString),
    #[error("weight is zero at {0}; deficiency undefined")]
    ZeroWeight(BitString),
    #[error("cache mismatch: {0}")]
    CacheMismatch(String),
    #[error("corrupt cache: {0}")]
    CorruptCache(String),
    #[error("estimator refused: {0}")]
    EstimatorRefused(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
