use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid scenario parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("observable {0} has an identity factor; its eigenbasis is degenerate")]
    DegenerateObservable(String),

    #[error("projector {observable}[{outcome}] has zero probability but {count} recorded counts")]
    ZeroProbability {
        observable: String,
        outcome: usize,
        count: u64,
    },

    #[error("data has counts on an outcome both hypotheses assign zero probability (observable {observable}, outcome {outcome})")]
    ImpossibleData { observable: String, outcome: usize },

    #[error("no sign change of the objective in bracket [{lo}, {hi}] (values {f_lo:.3e}, {f_hi:.3e})")]
    NoRootInBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("no feasible point found after {restarts} restarts (best negativity {best_negativity:.6}, bound {bound:.6})")]
    Infeasible {
        restarts: usize,
        best_negativity: f64,
        bound: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Numerical failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoRootInBracket { .. } | Error::Infeasible { .. } | Error::ZeroProbability { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
