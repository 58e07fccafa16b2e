use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("symbol `{name}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("unassigned free variable `{0}`")]
    UnassignedVariable(String),
    #[error("bounded quantifier or membership atom used without a membership symbol")]
    NoMembership,
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("cost guard exceeded: {0}")]
    CostGuard(String),
    #[error("template cap of {cap} formulas exceeded")]
    TemplateCap { cap: usize },
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("bound mismatch: {0}")]
    BoundMismatch(String),
    #[error("formula is not Σ₁ (classified {0})")]
    NotSigma1(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("duplicate selection of `{0}`")]
    DuplicateSelection(String),
    #[error("free variable count mismatch: {0}")]
    FreeVarMismatch(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("io: {0}")]
    Io(String),
    #[error("json: {0}")]
    Json(String),
}

impl Error {
    /// True for the errors the command line reports with the "guard exceeded" exit code.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::CostGuard(_)
                | Error::TemplateCap { .. }
                | Error::Overflow(_)
                | Error::BoundMismatch(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
