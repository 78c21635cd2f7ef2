//! Finite 2-categorical computations: pseudofunctors into finite categories,
//! pseudonatural and extrapseudonatural transformations with full axiom
//! checkers, bicodescent objects (bicoends) computed as quotient categories,
//! and the Fubini adjoint equivalence between iterated and joint bicoends.

pub mod codescent;
pub mod compose;
pub mod derived;
pub mod dsl;
pub mod error;
pub mod extra;
pub mod fincat;
pub mod fubini;
pub mod gen;
pub mod oracle;
pub mod presentations;
pub mod pseudo;
pub mod report;
pub mod twocat;

pub use error::{Error, Result};
pub use report::{Report, ReportEntry, REPORT_SCHEMA};
