//! Coherent-state quantization of constrained systems on truncated Fock spaces.

pub mod bessel;
pub mod cli;
pub mod coherent;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod operator;
pub mod projector;
pub mod quadrature;

pub use error::{Error, Result};
pub use fock::{FockSpace, Truncation};
pub use operator::{OperatorMatrix, StateVector};
