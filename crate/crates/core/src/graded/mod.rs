//! The graded differential-polynomial ring on the jet space with odd
//! covector fibers.
//!
//! Generators are the base variables `x^i`, even jets `q^α_σ`, odd jets
//! `b_{α,σ}` and even covector-slot jets `p^(j)_{α,σ}`. Monomials keep their
//! odd factors sorted under a fixed total order and push every reordering
//! sign into the rational coefficient, so two polynomials are equal exactly
//! when their term maps are.

mod monomial;
mod multi_index;
mod polynomial;
mod substitute;
mod variable;

pub use monomial::{sort_odd, Monomial};
pub use multi_index::MultiIndex;
pub use polynomial::{integer, parity_sign, rational, DiffPolynomial, Side};
pub use substitute::{reconstruct_odd, substitute_positional, CovectorArg};
pub use variable::{Geometry, JetVariable, VarKind};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;
