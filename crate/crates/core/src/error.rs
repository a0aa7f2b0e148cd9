//! Error type shared by all modules of the crate.

use std::fmt;

use crate::experiment::Mode;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building scenes, generating rays,
/// assembling the linear system, or running an experiment.
#[derive(Debug)]
pub enum Error {
    /// `boundary_points` was asked for an empty sample.
    EmptyBoundarySample,
    /// A point expected on a circle boundary is too far from it.
    NotOnBoundary { distance: f64, radius: f64 },
    /// A direction that must be unit length is not.
    NotUnit { norm: f64 },
    /// The incident direction does not point against the outward normal.
    OutgoingIncidence { dot: f64 },
    /// The obstacle is not strictly inside the observation domain.
    InvalidScene(String),
    /// A ray violates the guarantees of the generators.
    InvalidRay(String),
    /// Fewer admissible transmitter-receiver pairs than rays requested.
    InsufficientPairs { requested: usize, admissible: usize },
    /// Fewer admissible transmitter-receiver-reflection triples than
    /// rays requested.
    InsufficientTriples { requested: usize, admissible: usize },
    /// Specular sampling ran out of launch attempts.
    RetryBudgetExhausted { requested: usize, found: usize, attempts: usize },
    /// A ray endpoint lies outside the pixel grid.
    RayOutsideGrid,
    /// Ray list and travel-time list have different lengths.
    LengthMismatch { rays: usize, times: usize },
    /// The phantom vanishes somewhere inside the reconstruction domain.
    NonPositivePhantom,
    /// The reconstruction error was requested over an empty pixel mask.
    EmptyMask,
    /// An experiment configuration failed validation.
    Config(String),
    /// A text artifact could not be parsed (1-based line number).
    Parse { line: usize, message: String },
    Io(std::io::Error),
    /// Failure inside one experiment trial, with its mode and index.
    Trial { mode: Mode, trial: usize, source: Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyBoundarySample => write!(f, "requested zero boundary points"),
            Error::NotOnBoundary { distance, radius } => write!(
                f,
                "point at distance {distance} from the center is not on a circle of radius {radius}"
            ),
            Error::NotUnit { norm } => write!(f, "direction has norm {norm}, expected 1"),
            Error::OutgoingIncidence { dot } => write!(
                f,
                "incident direction must point against the outward normal (dot product {dot})"
            ),
            Error::InvalidScene(reason) => write!(f, "invalid scene: {reason}"),
            Error::InvalidRay(reason) => write!(f, "invalid ray: {reason}"),
            Error::InsufficientPairs { requested, admissible } => write!(
                f,
                "requested {requested} unbroken rays but only {admissible} unblocked \
                 transmitter-receiver pairs exist"
            ),
            Error::InsufficientTriples { requested, admissible } => write!(
                f,
                "requested {requested} broken rays but only {admissible} admissible \
                 transmitter-receiver-reflection triples exist"
            ),
            Error::RetryBudgetExhausted { requested, found, attempts } => write!(
                f,
                "found only {found} of {requested} specular rays after {attempts} attempts"
            ),
            Error::RayOutsideGrid => write!(f, "ray leaves the pixel grid"),
            Error::LengthMismatch { rays, times } => {
                write!(f, "{rays} rays but {times} travel times")
            }
            Error::NonPositivePhantom => {
                write!(f, "phantom is not strictly positive on the reconstruction domain")
            }
            Error::EmptyMask => write!(f, "reconstruction error over an empty pixel mask"),
            Error::Config(reason) => write!(f, "invalid config: {reason}"),
            Error::Parse { line, message } => write!(f, "parse error on line {line}: {message}"),
            Error::Io(err) => write!(f, "i/o error: {err}"),
            Error::Trial { mode, trial, source } => {
                write!(f, "{mode} trial {trial} failed: {source}")
            }
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            Error::Trial { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}
