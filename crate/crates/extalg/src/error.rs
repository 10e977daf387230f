use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("letter '{0}' is not in the alphabet")]
    InvalidLetter(char),

    #[error("word '{0}' is not well-matched")]
    NotWellMatched(String),

    #[error("malformed tables: {0}")]
    MalformedTables(String),

    #[error("missing image: {0}")]
    IncompleteMorphism(String),

    #[error("operation set is not closed: {0}")]
    ClosureViolation(String),

    #[error("size cap exceeded: {0}")]
    SizeCapExceeded(String),

    #[error("not a congruence: op {op} maps related elements {x}, {y} into different blocks")]
    NotACongruence { op: String, x: String, y: String },

    #[error("undefined run: reading '{word}' from counter {level} would drive the counter negative")]
    UndefinedRun { word: String, level: usize },

    #[error("unbound variable '{0}' in profinite term")]
    UnboundVariable(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("validation failed:\n{}", .0.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n"))]
    Validation(Vec<crate::algebra::Violation>),

    #[error("automaton is malformed: {0}")]
    MalformedAutomaton(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
