//! Exact computer algebra for `O(n)`-invariants of `d`-tuples of skew-symmetric
//! matrices.
//!
//! The crate is organised bottom-up:
//!
//! * [`corealg`]: Gaussian-rational scalars, sparse multigraded polynomials,
//!   monomial order and exact/modular linear algebra.
//! * [`words`]: words in the generic matrices modulo rotation and reversal.
//! * [`genmat`]: generic and numeric skew matrices, traces and `σ_t` of words,
//!   evaluation at numeric points.
//! * [`invbase`]: graded components, decomposability certificates and minimal
//!   generating sets.
//! * [`canonical`]: the nilpotent canonical blocks over `ℚ(i)`.
//! * [`hsp`]: homogeneous systems of parameters, Jacobian independence
//!   certificates and nullcone proof replay.
//! * [`suite`]: the identity suite and the aggregated run report used by the CLI.

pub mod canonical;
pub mod corealg;
pub mod error;
pub mod genmat;
pub mod hsp;
pub mod invbase;
pub mod suite;
pub mod words;

pub use canonical::{BlockSpec, CanonicalMatrix};
pub use corealg::{
    Backend, CoeffMatrix, GaussianRational, Monomial, MultiDegree, Polynomial, Rational, Var,
};
pub use error::{Error, Result};
pub use genmat::{Assignment, Invariant, Matrix, SkewMatrix};
pub use hsp::{HspCase, NullconeCertificate, VerificationReport};
pub use invbase::{DecompositionCertificate, GeneratorReport, GradedComponent};
pub use words::{Word, WordClass};

/// Library version reported in run reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
