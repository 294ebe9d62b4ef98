//! Symbolic Helmholtz conditions for second-order ODE systems, their
//! restriction to embedded submanifolds, and a seeded numeric oracle.

pub mod embedding;
pub mod error;
pub mod expr;
pub mod jet;
pub mod oracle;
pub mod topology;
pub mod variational;

pub use error::{Error, Result};
