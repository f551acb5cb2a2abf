//! Matrix regularizations of embedded surfaces.
//!
//! Builds the fuzzy sphere, the fuzzy Clifford torus and axially symmetric
//! fuzzy surfaces from their embedding matrices, computes the discrete Gauss
//! curvature K̂, the density γ̂² and the discrete Euler characteristic
//! χ̂ = ħ Tr(γ̂ K̂), and measures how well the regularization axioms hold at
//! finite matrix size N.

pub mod curvature;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod regularize;
pub mod surfaces;
pub mod sweep;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{commutator, CMatrix};
pub use poly::Polynomial;
