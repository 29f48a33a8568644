use thiserror::Error;

/// Errors raised by formula evaluation over traces and grids.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unknown atom `{0}` (not declared in the atom map)")]
    UnknownAtom(String),

    #[error("trace horizon {available} too short: evaluation needs {needed}")]
    HorizonExceeded { needed: f64, available: f64 },

    #[error("temporal window is unbounded; clip it against a finite horizon first")]
    UnboundedWindow,

    #[error("temporal window must be a positive interval (lower endpoint >= 0)")]
    NegativeWindow,

    #[error("time {t} is not on the grid N/{n}")]
    OffGrid { t: f64, n: u32 },

    #[error("drift/diffusion returned a non-finite value at state {state}")]
    NonFiniteState { state: f64 },

    #[error("formula is not propositional (contains a temporal operator)")]
    NotPropositional,
}
