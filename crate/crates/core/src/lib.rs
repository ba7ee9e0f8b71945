//! Decides stability of relations definable in dense linear orders and
//! ordered divisible abelian groups, and decomposes stable ones into finite
//! unions of special stable pieces.
//!
//! The pipeline: [`formula::parse`] a problem, eliminate quantifiers into a
//! [`SemilinearSet`], then [`stability::analyze`] it.

pub mod equational;
pub mod error;
pub mod formula;
pub mod linalg;
pub mod oracle;
pub mod polyhedra;
pub mod qe;
pub mod scalar;
pub mod stability;

pub use error::{Error, Result};
pub use formula::{parse, parse_as, Formula, Partition, Problem, Theory};
pub use polyhedra::{AffineSubspace, Hyperplane};
pub use qe::{Cell, LinExpr, SemilinearSet};
pub use scalar::Scalar;
pub use stability::{analyze, StabilityVerdict};

/// Arbitrary-precision rational; the default scalar.
pub type Rational = num_rational::BigRational;
/// Fixed-width rational; faster, panics on overflow.
pub type SmallRational = num_rational::Ratio<i64>;
/// Wider fixed-width rational.
pub type WideRational = num_rational::Ratio<i128>;
