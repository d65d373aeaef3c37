//! Hecke eigenvalue families of level-1 cusp forms and the fluctuation
//! statistics of their Sato–Tate counts.

pub mod arith;
pub mod cli;
pub mod error;
pub mod hecke;
pub mod linalg;
pub mod measures;
pub mod qexp;
pub mod selberg;
pub mod stats;
pub mod traceformula;

pub use error::{Error, Result};
