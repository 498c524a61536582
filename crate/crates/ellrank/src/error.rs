//! Crate-wide error type.
//!
//! Every failure mode carries a stable category so the CLI can map it to its
//! documented exit code: 0 ok, 2 parse, 3 degenerate, 4 bad parameters,
//! 5 bad reduction, 6 resource bound, 7 internal inconsistency.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All error categories produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (model files, polynomial expressions, CLI JSON).
    #[error("parse error: {0}")]
    Parse(String),

    /// Input reading failed (missing file, unreadable stream).
    #[error("input error: {0}")]
    Io(#[from] std::io::Error),

    /// A Weierstrass model is degenerate: its discriminant vanishes
    /// identically, so there is no elliptic surface to analyze.
    #[error("degenerate model: {0}")]
    Degenerate(String),

    /// Arguments violate a documented precondition (family parameters,
    /// twist point sets, field sizes, prime choices).
    #[error("bad parameters: {0}")]
    BadParameters(String),

    /// The chosen prime does not give good reduction of the configuration.
    #[error("bad reduction at {prime}: {message}")]
    BadReduction { prime: u64, message: String },

    /// A configured resource limit was exceeded (factorization timeout,
    /// degree guard, field size guard, unsupported-scope request).
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    /// An internal cross-check failed. This always indicates a bug or an
    /// inconsistent input, never a routine condition.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// The documented process exit code for this error category.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            Error::Degenerate(_) => 3,
            Error::BadParameters(_) => 4,
            Error::BadReduction { .. } => 5,
            Error::ResourceBound(_) => 6,
            Error::Internal(_) => 7,
        }
    }

    /// Prefixes the message with the pipeline stage that failed, keeping the
    /// category (and therefore the exit code) unchanged. I/O errors pass
    /// through untouched since their payload is not a plain string.
    pub fn with_context(self, stage: &str) -> Error {
        match self {
            Error::Parse(m) => Error::Parse(format!("{stage}: {m}")),
            Error::Io(e) => Error::Io(e),
            Error::Degenerate(m) => Error::Degenerate(format!("{stage}: {m}")),
            Error::BadParameters(m) => Error::BadParameters(format!("{stage}: {m}")),
            Error::BadReduction { prime, message } => Error::BadReduction {
                prime,
                message: format!("{stage}: {message}"),
            },
            Error::ResourceBound(m) => Error::ResourceBound(format!("{stage}: {m}")),
            Error::Internal(m) => Error::Internal(format!("{stage}: {m}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_keeps_the_category() {
        let e = Error::BadParameters("p must be odd".into()).with_context("reduction at 2");
        assert_eq!(e.exit_code(), 4);
        assert_eq!(
            e.to_string(),
            "bad parameters: reduction at 2: p must be odd"
        );

        let e = Error::BadReduction { prime: 5, message: "collision".into() }
            .with_context("certification");
        assert_eq!(e.exit_code(), 5);
        assert!(e.to_string().contains("certification: collision"));
    }

    #[test]
    fn exit_codes_match_documented_map() {
        assert_eq!(Error::Parse("x".into()).exit_code(), 2);
        assert_eq!(Error::Degenerate("x".into()).exit_code(), 3);
        assert_eq!(Error::BadParameters("x".into()).exit_code(), 4);
        assert_eq!(
            Error::BadReduction { prime: 2, message: "x".into() }.exit_code(),
            5
        );
        assert_eq!(Error::ResourceBound("x".into()).exit_code(), 6);
        assert_eq!(Error::Internal("x".into()).exit_code(), 7);
    }
}
