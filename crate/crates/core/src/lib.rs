//! Solvers for the doubly-constrained longest common subsequence problem and
//! its special cases (plain, string-constrained and repetition-free LCS).
//!
//! The main entry point is [`constraints::solve_dclcs`], a color-coding
//! algorithm whose running time is exponential only in the solution length.
//! [`oracle`] and [`baseline`] provide independent reference solvers and
//! [`reduction`] turns shortest-common-supersequence instances into
//! constrained-LCS instances.

pub mod baseline;
pub mod bench;
pub mod color;
pub mod constraints;
pub mod error;
pub mod format;
pub mod fpt;
pub mod model;
pub mod oracle;
pub mod reduction;

pub use color::FamilySpec;
pub use constraints::solve_dclcs;
pub use error::{Error, Result};
pub use format::{format_solution, parse_instance, serialize_instance};
pub use fpt::{SolveReport, SolverConfig};
pub use model::{is_subsequence, occ, verify_solution, Instance, Sequence, Solution, Symbol};
