use thiserror::Error;

/// Errors raised while loading theories, validating configuration, or
/// running queries and searches.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{}arity conflict for `{symbol}`: declared with {expected} arguments, used with {found}", fmt_line(.line))]
    ArityConflict {
        symbol: String,
        expected: usize,
        found: usize,
        line: Option<usize>,
    },

    #[error("{}unsafe clause: {message}", fmt_line(.line))]
    UnsafeClause {
        message: String,
        line: Option<usize>,
    },

    #[error("{}theory is not stratifiable: negation cycle through {}", fmt_line(.line), .predicates.join(", "))]
    Unstratifiable {
        predicates: Vec<String>,
        line: Option<usize>,
    },

    #[error("{}predicate `{symbol}` is reserved", fmt_line(.line))]
    ReservedPredicate {
        symbol: String,
        line: Option<usize>,
    },

    #[error("atom `{0}` is not ground")]
    NonGround(String),

    #[error("unsafe literal set: {0}")]
    UnsafeQuery(String),

    #[error("`{0}` is not a positive example under the theory")]
    NotPositive(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("template error: {0}")]
    Template(String),

    #[error("substitution domains differ: {0}")]
    DomainMismatch(String),

    #[error("oracle guard exceeded: {0}")]
    OracleGuard(String),
}

fn fmt_line(line: &Option<usize>) -> String {
    match line {
        Some(n) => format!("line {n}: "),
        None => String::new(),
    }
}

impl Error {
    /// Source line attached to a load-time error, when one is known.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::Syntax { line, .. } => Some(*line),
            Error::ArityConflict { line, .. }
            | Error::UnsafeClause { line, .. }
            | Error::Unstratifiable { line, .. }
            | Error::ReservedPredicate { line, .. } => *line,
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
