//! Exact variational multivector calculus on jet spaces with parity-reversed
//! covector fibers, and three cross-checked constructions of the variational
//! Schouten bracket.
//!
//! The layers build on each other:
//!
//! * [`graded`]: graded differential polynomials, partial and total derivatives.
//! * [`variational`]: Euler operators, exactness and equivalence of functionals.
//! * [`multivector`]: k-vectors, insertion of covector slots, evaluation.
//! * [`schouten`]: the bracket as an odd Poisson bracket, recursively via
//!   insertions, and through graded evolutionary fields.
//! * [`frontend`]: expression parsing, printing and session files.
//! * [`verify`]: seeded generators and the verification batteries.

pub mod error;
pub mod frontend;
pub mod graded;
pub mod multivector;
pub mod schouten;
pub mod variational;
pub mod verify;

pub use error::{Error, Result};
pub use graded::{DiffPolynomial, Geometry, JetVariable, MultiIndex, Rational, Side, VarKind};
pub use multivector::Multivector;
pub use variational::Functional;
