//! Library half of the `fuzzy-potts` command-line tool.
//!
//! The binary in `main.rs` is a thin argument-parsing layer; everything it
//! does is implemented here so integration tests can call the same code
//! paths directly:
//!
//! * [`graphs`] — the graph-file format and the built-in graph families.
//! * [`report`] — the versioned JSON report envelope, exact-plus-decimal
//!   rational rendering, and the CSV/text renderings.
//! * [`commands`] — the commands themselves, over resolved typed
//!   parameters, each producing all three renderings plus an exit code.
//! * [`acceptance`] — the acceptance suite behind the `corpus` command:
//!   ten independent criteria, each returning a pass/fail result with a
//!   human-readable detail line.
//!
//! Everything here shares the exactness contract of the core crate: no
//! floating point is parsed, computed, or emitted anywhere (decimal strings
//! in reports are rendered from exact rationals by long division).

pub mod acceptance;
pub mod commands;
pub mod graphs;
pub mod report;

use std::fmt;

/// Error carrying a user-facing message; the binary prints it to stderr
/// and exits with code 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub message: String,
}

impl CliError {
    pub fn new(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<fuzzy_potts::Error> for CliError {
    fn from(err: fuzzy_potts::Error) -> CliError {
        CliError::new(err.to_string())
    }
}

/// Resolved size caps for a single invocation.
///
/// Each cap comes from, in order of precedence: a command-line flag, an
/// environment variable, or the library default. Instances larger than a
/// cap are refused with an error naming the cap rather than silently
/// truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest edge count for which full `2^m` tables are built
    /// (`FUZZY_POTTS_MAX_EDGES`).
    pub max_edges: usize,
    /// Largest vertex count for which up-set scans run
    /// (`FUZZY_POTTS_MAX_PA_VERTICES`).
    pub max_pa_vertices: usize,
    /// Largest `edges + vertices` bit count for joint edge/spin tables
    /// (`FUZZY_POTTS_MAX_JOINT_BITS`).
    pub max_joint_bits: usize,
}

/// Environment variable overriding the default edge-count cap.
pub const ENV_MAX_EDGES: &str = "FUZZY_POTTS_MAX_EDGES";
/// Environment variable overriding the default up-set scan vertex cap.
pub const ENV_MAX_PA_VERTICES: &str = "FUZZY_POTTS_MAX_PA_VERTICES";
/// Environment variable overriding the default joint-table bit cap.
pub const ENV_MAX_JOINT_BITS: &str = "FUZZY_POTTS_MAX_JOINT_BITS";

fn cap_from_env(name: &str, default: usize) -> Result<usize, CliError> {
    match std::env::var(name) {
        Ok(text) => text.trim().parse::<usize>().map_err(|_| {
            CliError::new(format!(
                "environment variable {name}={text:?} is not a nonnegative integer"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(default),
        Err(std::env::VarError::NotUnicode(_)) => Err(CliError::new(format!(
            "environment variable {name} is not valid unicode"
        ))),
    }
}

/// Resolves the three caps from flags, environment, and defaults.
pub fn resolve_caps(
    max_edges: Option<usize>,
    max_pa_vertices: Option<usize>,
    max_joint_bits: Option<usize>,
) -> Result<Caps, CliError> {
    Ok(Caps {
        max_edges: match max_edges {
            Some(v) => v,
            None => cap_from_env(ENV_MAX_EDGES, fuzzy_potts::edge_measure::DEFAULT_EDGE_CAP)?,
        },
        max_pa_vertices: match max_pa_vertices {
            Some(v) => v,
            None => cap_from_env(
                ENV_MAX_PA_VERTICES,
                fuzzy_potts::association::DEFAULT_COORDINATE_CAP,
            )?,
        },
        max_joint_bits: match max_joint_bits {
            Some(v) => v,
            None => cap_from_env(
                ENV_MAX_JOINT_BITS,
                fuzzy_potts::spin_measure::DEFAULT_JOINT_BITS_CAP,
            )?,
        },
    })
}

/// Parses a rational command-line argument, naming the flag on failure.
///
/// Accepted forms are `a/b` and plain integers; anything else — decimal
/// points and exponents included — is rejected, keeping the no-float
/// contract at the interface.
pub fn parse_rational_arg(flag: &str, text: &str) -> Result<fuzzy_potts::Rational, CliError> {
    fuzzy_potts::rational::parse_rational(text)
        .map_err(|err| CliError::new(format!("--{flag}: {err}")))
}

/// Parses a comma-separated list of rationals for `flag`.
pub fn parse_rational_list(flag: &str, text: &str) -> Result<Vec<fuzzy_potts::Rational>, CliError> {
    text.split(',')
        .map(|part| parse_rational_arg(flag, part.trim()))
        .collect()
}
