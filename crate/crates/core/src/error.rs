use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state is not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("Kossakowski matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("matrix A is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("closed form not applicable: {0}")]
    NotApplicable(String),

    #[error("integration accuracy lost at t = {time}: min eigenvalue {min_eigenvalue:.3e}, try a smaller dt")]
    IntegrationAccuracy { time: f64, min_eigenvalue: f64 },

    #[error("no full-rank stationary state found (best min eigenvalue {best:.3e})")]
    NoFullRankMember { best: f64 },

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
