//! Finite-field towers, polynomial iteration and additive-combinatorics
//! primitives, with experiment drivers that measure the quantities appearing
//! in sum-product and subfield-iterate statements.

mod base_field;
pub mod elemset;
pub mod error;
pub mod exponents;
pub mod fpoly;
pub mod gf_tower;
pub mod klinalg;
pub mod report;
pub mod rng;
pub mod setcalc;
pub mod theorems;

pub use elemset::ElemSet;
pub use error::{Error, Result};
pub use exponents::{ExactExponentTable, ExponentTable, FloatExponentTable};
pub use fpoly::Poly;
pub use gf_tower::{Elem, FieldCtx};
pub use klinalg::AffineSubspace;

/// Exact rational scalar used for every reported ratio.
pub type Rational = num_rational::BigRational;
