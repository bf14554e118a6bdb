//! Exact graded contractions of the Pauli-graded Lie algebra sl(3,C).
//!
//! The crate covers arithmetic in cyclotomic fields, Lie algebras given by
//! structure constants, the symmetry group of the Pauli grading, the
//! quadratic contraction system with its solutions, and invariants used to
//! identify contracted algebras.

pub mod catalog;
pub mod contraction;
pub mod cyclo;
pub mod identify;
pub mod lattice;
pub mod liecore;
pub mod linalg;
pub mod poly;
pub mod symmetry;

pub use cyclo::{Cyclo, FieldError, Rational};
