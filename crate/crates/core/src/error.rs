use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A conjugated matrix left the algebra (nonzero trace).
    #[error("matrix is not traceless (trace {trace:e}); group element is corrupted")]
    Decomposition { trace: f64 },

    #[error("grid too small: need at least 3x3 points, got {nt}x{nx}")]
    GridTooSmall { nt: usize, nx: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("nonlinear solve did not converge after {iterations} iterations (residual {residual:e})")]
    NoSolution { iterations: usize, residual: f64 },

    #[error("field blow-up at t = {t}: |phi| = {value} exceeds bound {bound}")]
    Blowup { t: f64, value: f64, bound: f64 },

    #[error("Backlund integration diverged at light-cone node ({i}, {j})")]
    IntegrationDiverged { i: usize, j: usize },

    #[error("exact solution rejected: residual {residual:e} at (t, x) = ({t}, {x})")]
    OracleRejected { residual: f64, t: f64, x: f64 },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("point (t, x) = ({t}, {x}) is not covered by the field history")]
    OutOfRange { t: f64, x: f64 },

    #[error("interpolation error: {0}")]
    Interpolation(String),

    #[error("cocycle condition violated (max deviation {deviation:e})")]
    CocycleViolation { deviation: f64 },

    #[error("{}", config_message(*.line, .key, .message))]
    Config {
        line: Option<usize>,
        key: String,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn config_message(line: Option<usize>, key: &str, message: &str) -> String {
    match line {
        Some(l) => format!("config error at line {l}, key `{key}`: {message}"),
        None => format!("config error, key `{key}`: {message}"),
    }
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            line: None,
            key: key.into(),
            message: message.into(),
        }
    }
}
