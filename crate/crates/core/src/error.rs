use thiserror::Error;

/// One connected component of an orthogonality graph, as reported when the
/// component structure does not match a union of equal cliques.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ComponentDiagnostic {
    pub vertices: Vec<usize>,
    pub complete: bool,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure in {context}: residual {residual:e}")]
    NumericalFailure { context: String, residual: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The vector system does not satisfy the orthogonal-or-unbiased hypothesis.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("component structure mismatch: expected {expected_parts} complete parts of size {expected_size}, found {} components", .components.len())]
    StructureMismatch { expected_parts: usize, expected_size: usize, components: Vec<ComponentDiagnostic> },
}

pub type Result<T> = std::result::Result<T, Error>;
