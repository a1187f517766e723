//! Error type shared across the crate.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Everything that can go wrong while building networks, filtrations,
/// persistence summaries, or running the grid optimizer.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// No records survived ingestion.
    EmptyCorpus,
    /// A record carried a frequency of zero.
    InvalidFrequency { concept: String },
    /// The corpus spans a single year and no zero-weight policy was requested.
    DegenerateYearRange { y_min: i32, y_max: i32 },
    /// A publication year falls outside the declared corpus range.
    YearOutOfRange { year: i32, y_min: i32, y_max: i32 },
    /// A threshold point was malformed (non-finite coordinate, lower > upper,
    /// or wrong dimensionality for the operation at hand).
    InvalidThreshold { reason: String },
    /// A network violated a structural invariant (unsorted nodes, dangling or
    /// reversed edge endpoints, weight outside [0, 1]).
    InvalidNetwork { reason: String },
    /// Requested maximum simplex dimension is too small.
    InvalidMaxDim { max_dim: usize },
    /// A simplex list does not form a filtration (unsorted vertices, missing
    /// face, or a face appearing later / at a larger value).
    InvalidFiltration { reason: String },
    /// A codimension-1 face was missing while assembling the boundary matrix.
    /// This signals a broken filtration, not a user error.
    FaceNotFound { simplex: Vec<usize> },
    /// The filtration cap is non-finite, non-positive, or below a simplex value.
    InvalidCap { cap: f64 },
    /// Homology dimension outside what the filtration can answer.
    DimensionOutOfRange { dim: usize, max_dim: usize },
    /// A persistence image configuration failed validation.
    InvalidImageConfig { reason: String },
    /// Images built under different configurations cannot be combined.
    ConfigMismatch,
    /// Vector lengths differ where they must agree.
    LengthMismatch { left: usize, right: usize },
    /// A p-norm order below one (or non-finite) was requested.
    InvalidNorm { p: f64 },
    /// Directional derivative between equal parameter values.
    EqualParameterValues { theta: f64 },
    /// Grid axes were empty, non-increasing, or inconsistent with the cells.
    InvalidAxes { reason: String },
    /// The grid has no neighboring cells in any direction.
    GridTooSmall,
    /// A grid operation needs at least one cell.
    EmptyGrid,
    /// A constraint specification failed validation.
    InvalidConstraint { reason: String },
    /// No grid cell satisfies every feature-count constraint. Carries one
    /// entry per homology dimension: (k, required count, best available).
    Infeasible { binding: Vec<(usize, f64, usize)> },
    /// Variance estimators need at least two entries per image block.
    TooFewSamples { n: usize },
    /// A variance estimator was asked for an unsupported configuration.
    InvalidVariance { reason: String },
    /// The spectrum of a graph with no edges is undefined here.
    AllVerticesIsolated,
    /// A per-cell pipeline failure, tagged with the cell's axis indices.
    Cell {
        indices: Vec<usize>,
        source: alloc::boxed::Box<Error>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyCorpus => write!(f, "corpus contains no records"),
            Error::InvalidFrequency { concept } => {
                write!(
                    f,
                    "concept {concept:?} has frequency 0; frequencies must be >= 1"
                )
            }
            Error::DegenerateYearRange { y_min, y_max } => write!(
                f,
                "year range [{y_min}, {y_max}] is degenerate; edge weights are undefined \
                 (enable the zero-weight policy to force w = 0)"
            ),
            Error::YearOutOfRange { year, y_min, y_max } => {
                write!(
                    f,
                    "publication year {year} outside corpus range [{y_min}, {y_max}]"
                )
            }
            Error::InvalidThreshold { reason } => write!(f, "invalid threshold point: {reason}"),
            Error::InvalidNetwork { reason } => write!(f, "invalid network: {reason}"),
            Error::InvalidMaxDim { max_dim } => {
                write!(f, "maximum simplex dimension must be >= 1, got {max_dim}")
            }
            Error::InvalidFiltration { reason } => write!(f, "invalid filtration: {reason}"),
            Error::FaceNotFound { simplex } => {
                write!(f, "face {simplex:?} not found in filtration order")
            }
            Error::InvalidCap { cap } => write!(
                f,
                "cap {cap} is not a finite value at or above every filtration value"
            ),
            Error::DimensionOutOfRange { dim, max_dim } => write!(
                f,
                "homology dimension {dim} needs simplices of dimension {} but the filtration \
                 stops at {max_dim}",
                dim + 1
            ),
            Error::InvalidImageConfig { reason } => write!(f, "invalid image config: {reason}"),
            Error::ConfigMismatch => {
                write!(
                    f,
                    "persistence images were built under different configurations"
                )
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "vector lengths differ: {left} vs {right}")
            }
            Error::InvalidNorm { p } => write!(f, "p-norm order must be finite and >= 1, got {p}"),
            Error::EqualParameterValues { theta } => {
                write!(
                    f,
                    "directional derivative undefined between equal parameter values {theta}"
                )
            }
            Error::InvalidAxes { reason } => write!(f, "invalid grid axes: {reason}"),
            Error::GridTooSmall => {
                write!(
                    f,
                    "grid has a single cell; no neighbor exists in any direction"
                )
            }
            Error::EmptyGrid => write!(f, "operation requires a non-empty grid"),
            Error::InvalidConstraint { reason } => write!(f, "invalid constraint: {reason}"),
            Error::Infeasible { binding } => {
                write!(f, "no cell satisfies the feature-count constraints;")?;
                for (k, delta, max_f) in binding {
                    write!(f, " dim {k}: require >= {delta}, best available {max_f};")?;
                }
                Ok(())
            }
            Error::TooFewSamples { n } => {
                write!(
                    f,
                    "sample variance needs at least 2 entries per block, got {n}"
                )
            }
            Error::InvalidVariance { reason } => write!(f, "invalid variance request: {reason}"),
            Error::AllVerticesIsolated => {
                write!(
                    f,
                    "every vertex is isolated; normalized Laplacian is undefined"
                )
            }
            Error::Cell { indices, source } => {
                write!(f, "cell {indices:?}: {source}")
            }
        }
    }
}

impl Error {
    /// Attaches grid-cell coordinates to a per-cell failure.
    pub fn at_cell(self, indices: Vec<usize>) -> Error {
        Error::Cell {
            indices,
            source: alloc::boxed::Box::new(self),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::Cell { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
