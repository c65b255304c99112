//! Exact scalars, sparse multigraded polynomials and linear algebra.

pub mod linalg;
pub mod modular;
pub mod poly;
pub mod scalar;

pub use linalg::{rank_and_basis, Backend, CoeffMatrix, Echelon, Exact, FieldOps, Insert, RankResult, DEFAULT_PRIME};
pub use modular::{ModElem, ModField, LARGE_PRIME};
pub use poly::{Monomial, MultiDegree, Polynomial, Var};
pub use scalar::{GaussianRational, Rational};
