//! Numeric building blocks shared by the analysis modules: exact univariate
//! polynomials, multiprecision complex numbers, polynomial root isolation and
//! multi-modular linear algebra.

pub mod bareiss;
pub mod complex;
pub mod modular;
pub mod rational;
pub mod roots;
pub mod upoly;

pub use complex::BigComplex;
pub use rational::{format_rational, parse_rational};
pub use roots::{polynomial_roots, PolyRoot};
pub use upoly::RatPoly;
