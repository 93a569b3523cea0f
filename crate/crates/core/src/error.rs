use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid author group pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid byline: {0}")]
    InvalidByline(String),

    #[error("oracle accepted no draws out of {draws}; raise the sample budget")]
    OracleExhausted { draws: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("duplicate person_id `{0}` in roster")]
    DuplicatePerson(String),

    #[error("group label `{0}` does not occur in the roster")]
    UnknownLabel(String),

    #[error("missing productivity scores for: {}", .0.join(", "))]
    MissingScores(Vec<String>),

    #[error("empty group `{0}`")]
    EmptyGroup(String),

    #[error("{}, {location}{}: {message}", file.display(), column.as_ref().map(|c| format!(", column `{c}`")).unwrap_or_default())]
    Schema {
        file: PathBuf,
        location: Location,
        column: Option<String>,
        message: String,
    },

    #[error("{}, {location}: person_id `{person_id}` is not in the roster", file.display())]
    OrphanPerson {
        file: PathBuf,
        location: Location,
        person_id: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Where in an input file a problem was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based line, header included.
    Line(u64),
    /// 1-based record ordinal, for formats without line tracking.
    Record(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(l) => write!(f, "line {l}"),
            Location::Record(r) => write!(f, "record {r}"),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
