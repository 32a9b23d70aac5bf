//! Exact symbolic computation in the differential graded Lie algebra on
//! tensor powers of a universal enveloping algebra.
//!
//! The crate provides, over any Lie algebra given by structure constants or
//! as a truncated free Lie algebra:
//!
//! - [`algebra`]: enveloping algebras in canonical bases (word / PBW) with
//!   exact rational coefficients, the coproduct, and the symmetrization
//!   isomorphism with S(g);
//! - [`drinfeld`]: the graded space D^k = U^{(x)(k+1)} with its degree-one
//!   differential, circle product, and graded bracket, plus an exhaustive
//!   axiom verifier;
//! - [`exterior`]: the exterior algebra E(g) on a Lyndon or structure basis
//!   with the Schouten-type extension of the Lie bracket and triangularity
//!   checks for r-matrices;
//! - [`hkr`]: the quasi-isomorphism pair f and h between D and E(g), chain
//!   map checks, and blockwise cohomology dimensions;
//! - [`cochain`] and [`obstruction`]: graded Lie algebra cohomology of E(g)
//!   in adjoint coefficients, the first formality obstruction with exact
//!   coboundary witnesses, bracket-pattern census, and the two-dimensional
//!   vanishing argument;
//! - [`twist`]: order-by-order structure maps for the Borel algebra, the
//!   Maurer-Cartan twist of a triangular r-matrix, and the cocycle equation
//!   for T;
//! - [`expr`]: the plain-text expression grammar used by the CLI and report
//!   witnesses;
//! - [`report`]: machine-readable verification reports.
//!
//! All coefficients are exact rationals; every check is an exact identity
//! with zero tolerance.

pub mod algebra;
pub mod cochain;
pub mod drinfeld;
pub mod error;
pub mod expr;
pub mod exterior;
pub mod hkr;
pub mod hpoly;
pub mod linalg;
pub mod obstruction;
pub mod report;
pub mod scalar;
pub mod tensor;
pub mod twist;

pub use algebra::{nc_mul, LieAlgebraSpec, Monomial, NCElement, SymElement};
pub use error::CoreError;
pub use scalar::Scalar;
pub use tensor::TensorElement;
