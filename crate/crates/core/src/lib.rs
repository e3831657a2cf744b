//! Baxterisation of braided tensor categories.
//!
//! Given a category from the [`catalog`] (or a JSON document), a strand label
//! `ρ` and a fusion channel `φ`, [`baxterizer::solve_central`] returns the
//! spectral-parameter amplitudes `A_χ(μ)` of
//!
//! ```text
//! R(μ) = Σ_χ A_χ(μ) P^χ
//! ```
//!
//! and [`verifier`] checks them against the current at a vertex, Yang-Baxter
//! and commuting transfer matrices built on the fusion-tree space of
//! [`tree_rep`].

pub mod baxterizer;
pub mod catalog;
pub mod category;
pub mod error;
pub mod poly;
pub mod report;
pub mod sampling;
pub mod tree_rep;
pub mod verifier;

pub use baxterizer::{solve_central, AmplitudeSolution, SolveVerdict, SpanningTree};
pub use catalog::{Built, Family, FamilySpec};
pub use category::{CategoryData, ObjectLabel};
pub use error::{Error, Result};
pub use report::{Check, Verdict, VerificationReport};
