//! Exact algebra for quadratic Sylvester–Gallai type questions.
//!
//! Everything is computed over the Gaussian rationals ℚ(i): dense linear
//! algebra, sparse polynomials, resultants, quadratic forms, radical membership
//! for ideals generated by two quadratics, the three-case structure
//! classifier, and checkers for robust Sylvester–Gallai and Edelstein–Kelly
//! configurations.

pub mod configurations;
pub mod error;
pub mod matrix;
pub mod membership;
pub mod poly;
pub mod quadratic;
pub mod rng;
pub mod scalar;
pub mod sparse;
pub mod structure;
pub mod univariate;

pub use error::{Error, Result};
pub use matrix::{ExactMatrix, RankProfile};
pub use membership::{radical_member, Budget, MembershipVerdict};
pub use poly::{Monomial, MultiPoly};
pub use quadratic::{LinearForm, QuadraticForm};
pub use scalar::Scalar;
pub use structure::{classify, Case3Search, CaseWitness, Classification, PencilSquare};
pub use univariate::{ScalarPoly, UniPoly};
