use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undeclared generator family in letter `{0}`")]
    UndeclaredFamily(String),
    #[error("index out of declared domain in letter `{0}`")]
    IndexOutOfDomain(String),
    #[error("letter `{0}` is not a sigma/rho letter")]
    ForeignLetter(String),
    #[error("word `{word}` is not a kernel element (phi image ({m}, {k}))")]
    NotKernelElement { word: String, m: i64, k: i64 },
    #[error("guard `{0}` is violated")]
    GuardViolated(String),
    #[error("parameter `{0}` is unbound")]
    UnboundParameter(String),
    #[error("unknown group family `{0}`")]
    UnknownGroup(String),
    #[error("strand count n = {0} is not supported (need n >= 3)")]
    InvalidStrandCount(i64),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("elimination of `{target}` via `{relator}` rejected: {reason}")]
    Elimination {
        target: String,
        relator: String,
        reason: String,
    },
    #[error("script `{script}` failed at step `{step}`: {reason}")]
    Replay {
        script: String,
        step: String,
        reason: String,
    },
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("unknown script `{0}`")]
    UnknownScript(String),
    #[error("unknown diagram edge `{0}`")]
    UnknownEdge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
