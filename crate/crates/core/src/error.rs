use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size out of range: {what} = {value} (allowed {min}..={max})")]
    Size {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("index {index} out of range for {what} of length {len}")]
    Index {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("closed-form formula degenerates: {0}; use the numeric eigensolver")]
    DegenerateFormula(&'static str),

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("degenerate ground state: {0}")]
    Degeneracy(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for failures of the numerical kernels (as opposed to bad inputs).
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_))
    }
}
