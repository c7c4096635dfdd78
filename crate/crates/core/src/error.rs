use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("vertex {vertex} has degree {degree}, exceeding the bound {bound}")]
    DegreeBound {
        vertex: usize,
        degree: usize,
        bound: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("ball has {size} vertices, above the canonicalization cap of {cap}")]
    CanonicalizationCap { size: usize, cap: usize },

    #[error("radius mismatch: {0} vs {1}")]
    RadiusMismatch(usize, usize),

    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),

    #[error("configuration model rejected {attempts} samples in a row")]
    RejectionCapExceeded { attempts: usize },

    #[error("exact Cheeger computation limited to {cap} vertices, got {n}")]
    CheegerCap { n: usize, cap: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("terminal sets overlap at vertex {0}")]
    OverlappingTerminals(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by a computation exceeding a size or iteration cap,
    /// as opposed to bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::CanonicalizationCap { .. }
                | Error::RejectionCapExceeded { .. }
                | Error::CheegerCap { .. }
                | Error::NonConvergence { .. }
        )
    }
}
