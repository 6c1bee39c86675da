//! Noisy density-matrix simulation of small quantum error-correcting codes
//! and the gain of an encoded qubit over a bare one.

pub mod circuit;
pub mod error;
pub mod gates;
pub mod layout;
pub mod matrix;
pub mod linmodel;
pub mod noise;
pub mod oracle;
pub mod qec;
pub mod qstate;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use noise::{KrausChannel, NoiseParams, SpamParams, T2Convention};
pub use qstate::{DensityMatrix, PureState};

pub use matrix::C64;
