//! Torsion theories, protoadditive reflectors and relative commutators on
//! finite algebras.
//!
//! Everything is computed exhaustively over small finite algebras; reports
//! produced by sweeps are only claims about the corpus they ran on.

pub mod algebra;
pub mod birkhoff;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod factorisation;
pub mod format;
pub mod reflectors;
pub mod report;
pub mod verification;

pub use error::{Error, Result};
