use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid search space: {0}")]
    InvalidSpace(String),
    #[error("assignment has {got} entries, space has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("variable `{0}` is unconditioned but assigned NA")]
    NaOnUnconditioned(String),
    #[error("infeasible assignment: {0}")]
    Infeasible(String),
    #[error("value out of domain for `{var}`: {detail}")]
    OutOfDomain { var: String, detail: String },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("missing performance record for instance `{instance}` and algorithm `{algorithm}`")]
    MissingRecord { instance: String, algorithm: String },
    #[error("budget violated: {0}")]
    Budget(String),
    #[error("degenerate portfolio: SBS ERT {sbs} does not exceed VBS ERT {vbs}")]
    DegeneratePortfolio { sbs: f64, vbs: f64 },
}
