use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unsafe query: head variable `{0}` does not occur in the body")]
    UnsafeHead(String),
    #[error("query body is empty")]
    EmptyBody,

    #[error("hypergraph is not acyclic")]
    NotAcyclic,
    #[error("quantified variable elimination is stuck with quantified variables {0:?} remaining")]
    StuckNotFreeConnex(Vec<String>),
    #[error("query still has quantified variables {0:?}")]
    HasQuantifiedVars(Vec<String>),
    #[error("engine `{engine}` is not applicable: {reason}")]
    EngineInapplicable { engine: &'static str, reason: String },

    #[error("relation `{0}` is missing from the database")]
    MissingRelation(String),
    #[error("relation `{name}` has arity {found}, but the query uses it with arity {expected}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("{}: row {row} has {found} fields, expected {expected}", path.display())]
    RaggedRow {
        path: PathBuf,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{}: relation file is empty, arity unknown", .0.display())]
    EmptyRelationFile(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("graph input{}: {message}", line.map(|l| format!(", line {l}")).unwrap_or_default())]
    GraphFormat { line: Option<usize>, message: String },
    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("k must be at least 2, got {0}")]
    StarArityTooSmall(usize),
    #[error("k' = {k_prime} must be at least k = {k} and divisible by it")]
    NotDivisible { k: usize, k_prime: usize },
    #[error("answer count {count} exceeds the {total} possible selections")]
    CountOutOfRange { count: String, total: String },
    #[error("target query is free-connex, there is no free path to embed into")]
    TargetFreeConnex,
    #[error("target query has a self-join on `{0}`")]
    TargetSelfJoin(String),
    #[error("source relation `R` must be binary, found arity {0}")]
    NonBinarySource(usize),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Whether the error reports a structural property of the input (cyclic
    /// query, wrong engine, free-connex target) rather than malformed input.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Error::NotAcyclic
                | Error::StuckNotFreeConnex(_)
                | Error::HasQuantifiedVars(_)
                | Error::EngineInapplicable { .. }
                | Error::TargetFreeConnex
                | Error::TargetSelfJoin(_)
        )
    }
}
