use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} outside the supported range p < 2^31")]
    PrimeOutOfRange(u64),
    #[error("dimension {0} outside the supported range 1..=4")]
    DimensionOutOfRange(usize),
    #[error("radius exponent {0} outside the supported range |gamma| <= 64")]
    GammaOutOfRange(i64),
    #[error("context mismatch: expected p={expected_p}, n={expected_n}, found p={found_p}, n={found_n}")]
    ContextMismatch {
        expected_p: u32,
        expected_n: usize,
        found_p: u32,
        found_n: usize,
    },
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cells overlap: {0}")]
    OverlappingCells(String),
    #[error("refinement level {level} is above cell exponent {cell_gamma}")]
    RefineAboveCell { level: i32, cell_gamma: i32 },
    #[error("sphere cell level {level} must be at most {max}")]
    SphereLevel { level: i32, max: i32 },
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("mean-zero violated: unit-sphere integral is {0}")]
    KernelMeanNonZero(String),
    #[error("kernel is undefined at the origin")]
    KernelAtOrigin,
    #[error("weight is not positive on ball {ball}: {value}")]
    NonPositiveWeight { ball: String, value: String },
    #[error("tabulated weight has no entry for ball {0}")]
    TabulatedMiss(String),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("norm policy window [{lo}, {hi}] does not cover required [{need_lo}, {need_hi}]")]
    WindowTooSmall {
        lo: i32,
        hi: i32,
        need_lo: i32,
        need_hi: i32,
    },
    #[error("tail mode {mode} is not applicable: {reason}")]
    TailModeMismatch { mode: &'static str, reason: String },
    #[error("stabilization check failed at x={point}: T_{k} = {at_k}, T_{k_minus} = {at_k_minus}")]
    StabilizationFailed {
        point: String,
        k: i32,
        k_minus: i32,
        at_k: String,
        at_k_minus: String,
    },
    #[error("instance {instance}: {source}")]
    Instance {
        instance: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::param(name, reason)
}
