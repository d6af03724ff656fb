//! Finite quasigroups, their translation groups, quasi-invariant measures
//! and modular cocycles, and the affine group of the line as a continuous
//! model of a modular function.
//!
//! The measure, cocycle, character and elimination code is generic over a
//! [`scalar::Field`]; the affine-group code is generic over a
//! [`scalar::Real`]. The aliases below fix the scalar types used by the
//! command-line tool: exact rationals for the finite modules and `f64` for
//! the continuous model.

pub mod axb;
pub mod character;
pub mod identity;
pub mod kunen;
pub mod latin;
pub mod linalg;
pub mod measure;
pub mod perm;
pub mod perm_group;
pub mod quasigroup;
pub mod scalar;

pub use measure::Side;
pub use perm::Perm;
pub use perm_group::PermGroup;
pub use quasigroup::{validate_cayley, Element, FiniteQuasigroup};

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type ExactMeasure = measure::Measure<Rational>;
pub type ExactCocycle = measure::Cocycle<Rational>;
pub type ExactCharacter = character::Character<Rational>;
pub type ExactSolution = measure::QuasiInvariantSolution<Rational>;

pub type Affine = axb::AffineElement<f64>;
pub type Bump = axb::TestFunction<f64>;
