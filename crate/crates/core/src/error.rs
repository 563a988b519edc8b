use thiserror::Error;

/// Every failure the simulator can report.
///
/// [`Error::kind`] gives the stable, machine-parsable name used by the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("tensor is singular (|det| = {det:e})")]
    SingularTensor { det: f64 },

    #[error("attachment stress cannot be represented: {0}")]
    NoInverse(String),

    #[error("CFL bound exceeded: Courant number {courant:.4} > {limit}")]
    CflViolation { courant: f64, limit: f64 },

    #[error("boundary is accreting but no inflow value was supplied")]
    MissingInflowBc,

    #[error("characteristic left the body at x = ({x1}, {x2}), t = {t}")]
    OutOfDomain { x1: f64, x2: f64, t: f64 },

    #[error("inverse-motion transport cannot handle a growing boundary (M = {mass_rate})")]
    GrowthNotSupported { mass_rate: f64 },

    #[error("elastic deformation leaves the reduced shear form at cell {cell} (deviation {deviation:e})")]
    NotReduced { cell: usize, deviation: f64 },

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("domain height would become non-positive ({height:e})")]
    NegativeHeight { height: f64 },

    #[error("x2 = {x2} lies outside the body (height {height}) at t = {t}")]
    OutOfBody { x2: f64, height: f64, t: f64 },

    #[error("through-thickness reduction is inconsistent: {0}")]
    IncompatibleAnsatz(String),

    #[error("scenario `{0}` has no closed-form oracle")]
    NoOracle(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularTensor { .. } => "SingularTensor",
            Error::NoInverse(_) => "NoInverse",
            Error::CflViolation { .. } => "CFLViolation",
            Error::MissingInflowBc => "MissingInflowBC",
            Error::OutOfDomain { .. } => "OutOfDomain",
            Error::GrowthNotSupported { .. } => "GrowthNotSupported",
            Error::NotReduced { .. } => "NotReduced",
            Error::SingularSystem(_) => "SingularSystem",
            Error::NegativeHeight { .. } => "NegativeHeight",
            Error::OutOfBody { .. } => "OutOfBody",
            Error::IncompatibleAnsatz(_) => "IncompatibleAnsatz",
            Error::NoOracle(_) => "NoOracle",
            Error::Parse { .. } => "ParseError",
            Error::Validation { .. } => "ValidationError",
            Error::Io(_) => "IoError",
        }
    }

    pub(crate) fn validation(field: &str, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
