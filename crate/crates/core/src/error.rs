use thiserror::Error;

/// Errors raised across the toolkit.
///
/// [`FcaError::is_size_guard`] separates resource caps from ordinary input
/// problems so front ends can report them differently.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FcaError {
    #[error("{side} index {index} out of range (size {size})")]
    IndexOutOfRange {
        side: &'static str,
        index: usize,
        size: usize,
    },
    #[error("duplicate {side} label {label:?}")]
    DuplicateLabel { side: &'static str, label: String },
    #[error("unknown {side} label {label:?}")]
    UnknownLabel { side: &'static str, label: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot scale object {object:?}, attribute {attribute:?}: value {value:?} is not a scale value")]
    ValueNotInScale {
        object: String,
        attribute: String,
        value: String,
    },
    #[error("no scale given for attribute {0:?}")]
    MissingScale(String),
    #[error("many-valued context is incomplete; missing cells: {}", format_cells(.0))]
    IncompleteContext(Vec<(String, String)>),
    #[error("{what} of size {size} exceeds the limit of {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("concept list is inconsistent: {0}")]
    Inconsistent(String),
    #[error("invalid threshold {name} = {value}: {reason}")]
    Threshold {
        name: &'static str,
        value: String,
        reason: &'static str,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("density undefined for an empty {0} set")]
    EmptyDensity(&'static str),
    #[error("training data invalid: {0}")]
    Training(String),
    #[error("unknown query term(s): {}", .0.join(", "))]
    UnknownTerms(Vec<String>),
    #[error("exploration: {0}")]
    Exploration(String),
    #[error("{0}")]
    Invalid(String),
}

fn format_cells(cells: &[(String, String)]) -> String {
    cells
        .iter()
        .map(|(g, m)| format!("({g}, {m})"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl FcaError {
    pub fn is_size_guard(&self) -> bool {
        matches!(self, FcaError::SizeLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, FcaError>;
