//! Exact arithmetic substrate.
//!
//! Everything symbolic in this crate is computed in the types defined here:
//! arbitrary-precision rationals, multivariate Laurent polynomials with
//! half-integer exponents on the residue variable `q`, rational functions
//! kept as numerator/denominator pairs, truncated power series in one
//! distinguished variable, and small square matrices over the Laurent ring.
//!
//! No floating-point arithmetic happens on any symbolic path; the only float
//! entry point is [`eval::evaluate_complex`].

mod error;
pub mod eval;
pub mod matrix;
mod monomial;
mod poly;
pub mod rational;
mod ratfunc;
mod series;
pub mod text;

pub use error::ExactAlgError;
pub use eval::{evaluate, evaluate_complex, evaluate_rational, Value};
pub use matrix::SymbolicMatrix;
pub use monomial::{HalfInt, Monomial, Var, RESIDUE_VAR};
pub use poly::LaurentPoly;
pub use rational::Rational;
pub use ratfunc::RationalFunction;
pub use series::{series_equal, series_expand, TruncatedSeries};

pub type Result<T> = std::result::Result<T, ExactAlgError>;
