//! Error type shared by every fallible operation in the crate.

use alloc::string::String;
use core::fmt;

/// Errors returned by graph operations, measure constructors, and checks.
///
/// Every variant carries enough context to explain the failure without
/// access to the call site; cap violations name both the offending size and
/// the cap so callers can surface actionable messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// An edge endpoint referred to a vertex outside `0..vertex_count`.
    VertexOutOfRange {
        vertex: usize,
        vertex_count: usize,
    },
    /// An edge index referred outside `0..edge_count`.
    EdgeOutOfRange { edge: usize, edge_count: usize },
    /// A configuration rank was not below `2^edge_count`.
    ConfigOutOfRange { rank: u64, edge_count: usize },
    /// A spin configuration rank was not below `colors^vertex_count`.
    SpinConfigOutOfRange { rank: u64, rank_count: u64 },
    /// A colour index was not below the measure's colour count.
    ColorOutOfRange { color: usize, color_count: usize },
    /// A measure construction was attempted on a graph with no vertices.
    EmptyGraph,
    /// The number of edges exceeds the exact-enumeration cap.
    EdgeCountCapExceeded { edges: usize, cap: usize },
    /// The joint edge/spin state space exceeds the cap on
    /// `edge_count + vertex_count` bits.
    JointSizeCapExceeded { bits: usize, cap: usize },
    /// An up-set enumeration or scan was requested over more coordinates
    /// than the cap allows.
    CoordinateCapExceeded { coordinates: usize, cap: usize },
    /// A parameter list had the wrong length (for example, one edge
    /// probability per edge is required).
    ParameterCountMismatch { expected: usize, actual: usize },
    /// A probability or weight parameter was outside its admissible range.
    /// The message names the parameter and the range.
    ParameterOutOfRange(&'static str),
    /// A Potts construction was requested with a non-integer or too-small
    /// number of states.
    InvalidStateCount(String),
    /// Weights supplied to a measure constructor were negative or summed
    /// to zero, so no probability measure can be formed.
    NotNormalizable,
    /// Two measures that must share a graph (or a state space) do not.
    IncompatibleMeasures,
    /// A conditioning event has probability zero.
    NullConditioning,
    /// The spins are not two-valued where a two-valued spin space is
    /// required (lattice-condition checks order spins as minus below plus).
    TwoColorsRequired { color_count: usize },
    /// The named edge is not incident to the named vertex, but incidence
    /// was required.
    EdgeNotIncident { edge: usize, vertex: usize },
    /// An exhaustive scan was skipped because the instance exceeds the cap,
    /// and the bounded fallback found no violation, so no verdict is sound.
    InconclusiveAboveCap { coordinates: usize, cap: usize },
    /// A rational literal could not be parsed. Accepted forms are `a/b`
    /// and plain integers.
    ParseRational(String),
    /// A structural precondition specific to one operation failed; the
    /// message explains which.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VertexOutOfRange {
                vertex,
                vertex_count,
            } => write!(
                f,
                "vertex {vertex} out of range for a graph with {vertex_count} vertices"
            ),
            Error::EdgeOutOfRange { edge, edge_count } => write!(
                f,
                "edge {edge} out of range for a graph with {edge_count} edges"
            ),
            Error::ConfigOutOfRange { rank, edge_count } => write!(
                f,
                "configuration rank {rank} out of range for {edge_count} edges"
            ),
            Error::SpinConfigOutOfRange { rank, rank_count } => write!(
                f,
                "spin configuration rank {rank} out of range (state space has {rank_count} configurations)"
            ),
            Error::ColorOutOfRange { color, color_count } => write!(
                f,
                "color {color} out of range for {color_count} colors"
            ),
            Error::EmptyGraph => {
                write!(f, "measures require a graph with at least one vertex")
            }
            Error::EdgeCountCapExceeded { edges, cap } => write!(
                f,
                "graph has {edges} edges, above the exact-enumeration cap of {cap}; \
                 raise the cap explicitly to proceed"
            ),
            Error::JointSizeCapExceeded { bits, cap } => write!(
                f,
                "joint edge/spin table needs {bits} bits of rank, above the cap of {cap}; \
                 raise the cap explicitly to proceed"
            ),
            Error::CoordinateCapExceeded { coordinates, cap } => write!(
                f,
                "up-set scan over {coordinates} coordinates is above the cap of {cap}; \
                 raise the cap explicitly to proceed"
            ),
            Error::ParameterCountMismatch { expected, actual } => write!(
                f,
                "expected {expected} parameters, got {actual}"
            ),
            Error::ParameterOutOfRange(what) => write!(f, "{what}"),
            Error::InvalidStateCount(msg) => write!(f, "{msg}"),
            Error::NotNormalizable => write!(
                f,
                "weights must be nonnegative with positive sum to define a measure"
            ),
            Error::IncompatibleMeasures => write!(
                f,
                "operation requires measures over the same graph and state space"
            ),
            Error::NullConditioning => {
                write!(f, "conditioning event has probability zero")
            }
            Error::TwoColorsRequired { color_count } => write!(
                f,
                "lattice-condition check needs two-valued spins, got {color_count} colors"
            ),
            Error::EdgeNotIncident { edge, vertex } => write!(
                f,
                "edge {edge} is not incident to vertex {vertex}"
            ),
            Error::InconclusiveAboveCap { coordinates, cap } => write!(
                f,
                "instance has {coordinates} coordinates, above the exhaustive cap of {cap}, \
                 and the bounded principal-up-set scan found no violation; \
                 no sound verdict is available"
            ),
            Error::ParseRational(s) => write!(
                f,
                "cannot parse {s:?} as a rational; use an integer or a/b with b > 0"
            ),
            Error::Unsupported(msg) => write!(f, "{msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
