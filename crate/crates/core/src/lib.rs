//! Dependence analysis for bivariate discrete and gridded distributions.
//!
//! A table's dependence is the part of its log-probabilities that survives
//! every row and column rescaling. This crate computes it, compares it,
//! preserves it under margin fitting, and summarizes it in scalar measures.

pub mod cli;
pub mod dependence;
pub mod error;
mod exact;
pub mod grid;
pub mod io;
pub mod measures;
pub mod normal;
pub mod projection;
pub mod report;
pub mod support;
pub mod table;

pub use dependence::{compare, same_dependence, signature, signature_of, Comparison, DependenceSignature};
pub use error::{Error, Result};
pub use grid::{GridDensity, HaarCoefficients};
pub use measures::Calibration;
pub use projection::{i_project, ipf, IpfOptions, IpfReport};
pub use support::{dim_gamma, frechet_feasible, gamma_basis, DependenceBasis, Verdict};
pub use table::{MarginPair, ProbTable, SupportPattern};
