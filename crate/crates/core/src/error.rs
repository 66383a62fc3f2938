use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at {}: {msg}", fmt_pos(*.line, *.col))]
    Syntax { line: Option<usize>, col: usize, msg: String },

    #[error("unknown variable `{name}` at {}", fmt_pos(*.line, *.col))]
    UnknownVariable { line: Option<usize>, col: usize, name: String },

    #[error("zero denominator at {}", fmt_pos(*.line, *.col))]
    ZeroDenominator { line: Option<usize>, col: usize },

    #[error("polynomial is not homogeneous: {0}")]
    NonHomogeneous(String),

    #[error("ideal generator {index} has degree {degree}; generators must be homogeneous of degree at least 2")]
    GeneratorDegree { index: usize, degree: usize },

    #[error("degree {degree} exceeds the truncation degree {max}")]
    Truncated { degree: usize, max: usize },

    #[error("input is not a certified complete intersection: {0}")]
    NotCertified(String),

    #[error("not a chain map: {0}")]
    NotChainMap(String),

    #[error("duplicate generator label {0}")]
    LabelClash(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("element is not in the kernel; residual {0}")]
    NotInKernel(String),

    #[error("invalid cycles: {0}")]
    InvalidCycles(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_pos(line: Option<usize>, col: usize) -> String {
    match line {
        Some(l) => format!("line {l}, column {col}"),
        None => format!("column {col}"),
    }
}

impl Error {
    /// Attaches a line number to a position-carrying error.
    pub fn at_line(self, n: usize) -> Error {
        match self {
            Error::Syntax { col, msg, .. } => Error::Syntax { line: Some(n), col, msg },
            Error::UnknownVariable { col, name, .. } => Error::UnknownVariable { line: Some(n), col, name },
            Error::ZeroDenominator { col, .. } => Error::ZeroDenominator { line: Some(n), col },
            other => other,
        }
    }

    /// Errors caused by malformed user input rather than failed verification.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::NotCertified(_) | Error::NotChainMap(_) | Error::NotInKernel(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
