//! Exact computations for preprojective algebras and quiver Heisenberg
//! algebras of finite acyclic quivers.
//!
//! Two independent routes to the same numbers live here. The combinatorial
//! route ([`knit`]) works with the translation quiver ℤQ and dimension vectors.
//! The algebraic route ([`relations`]) takes ranks of ideal components in the
//! path algebra of the double quiver. [`weights`] holds the predicates on
//! vertex weights that decide when the two must agree.

pub mod catalog;
pub mod coxeter;
pub mod cyclotomic;
mod error;
pub mod field;
pub mod fp;
pub mod knit;
pub mod matrix;
pub mod quiver;
pub mod relations;
pub mod scalar;
pub mod weights;

pub use cyclotomic::{Cyclotomic, CyclotomicField};
pub use error::{Error, Result};
pub use field::{Field, Rational};
pub use fp::Fp;
pub use knit::{IndecMultiset, ZQVertex};
pub use matrix::{IntMatrix, Matrix};
pub use scalar::{AnyWeight, FieldSpec};
pub use quiver::{classify, double, DoubleQuiver, DynkinType, Quiver, QuiverClass};

/// Dimension vector indexed by the canonical vertex order.
pub type DimVec = Vec<i64>;
/// Vertex weight over a field `T`.
pub type Weight<T> = Vec<T>;
/// Matrices over ℚ.
pub type QMatrix = Matrix<Rational>;
/// Weight over ℚ.
pub type QWeight = Weight<Rational>;
/// Weight over ℚ(ζ_n).
pub type CyclotomicWeight = Weight<Cyclotomic>;
