use alloc::string::String;
use core::fmt;

/// A spectral parameter, identified by its line (0-based internally, 1-based when printed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    X(usize),
    Y(usize),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::X(i) => write!(f, "x{}", i + 1),
            Param::Y(j) => write!(f, "y{}", j + 1),
        }
    }
}

/// The guarded quantity `|sin(left - right + offset)|` that fell below threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Degeneracy {
    pub left: Param,
    pub right: Param,
    pub offset: f64,
    pub value: f64,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.offset == 0.0 {
            write!(f, "|sin({} - {})| = {:e}", self.left, self.right, self.value)
        } else {
            write!(
                f,
                "|sin({} - {} {:+})| = {:e}",
                self.left, self.right, self.offset, self.value
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("degenerate crossing parameter: |sin eta| = {0:e}")]
    DegenerateEta(f64),
    #[error("counting weights are only defined at eta = 2pi/3 (got eta = {0})")]
    InvalidConvention(f64),
    #[error("operation requires eta = {expected}, got {found}")]
    InvalidEta { expected: f64, found: f64 },
    #[error("ice rule violated by arrows (h_left, h_right, v_top, v_bottom) = {0:?}")]
    IceViolation([i8; 4]),
    #[error("invalid six-vertex state: {0}")]
    InvalidState(String),
    #[error("invalid alternating sign matrix: {0}")]
    InvalidAsm(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("n = {n} exceeds the enumeration ceiling {ceiling}")]
    SizeTooLarge { n: usize, ceiling: usize },
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(Degeneracy),
    #[error("rank deficient system: singular values {smallest:e}, {second:e} relative to {largest:e}")]
    RankDeficient { smallest: f64, second: f64, largest: f64 },
    #[error("ill-conditioned evaluation (condition estimate {0:e})")]
    IllConditioned(f64),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("near-singular point: |sin 3u| = {0:e}")]
    NearSingular(f64),
    #[error("table mismatch at (r, r~) = ({r}, {rt}): {detail}")]
    TableMismatch { r: usize, rt: usize, detail: String },
    #[error("non-integer quotient at (r, r~) = ({r}, {rt})")]
    NonIntegerQuotient { r: usize, rt: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
