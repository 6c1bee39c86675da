use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input violated a structural or physical precondition
    /// (non-unitary gate, incomplete Kraus set, unnormalized state, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// Qubit indices were duplicated or out of range.
    #[error("index error: {0}")]
    Index(String),

    /// The register would exceed the configured qubit cap.
    #[error("capacity exceeded: {requested} qubits requested, cap is {cap}")]
    Capacity { requested: usize, cap: usize },

    /// Routing could not be performed on the coupling graph.
    #[error("layout error: {0}")]
    Layout(String),

    /// A quantity is undefined for the given parameters.
    #[error("undefined: {0}")]
    Undefined(String),

    /// Malformed text input.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
