//! Exact computation of class numbers of hereditary orders in definite
//! central simple algebras over global function fields.
//!
//! The pipeline runs bottom-up:
//!
//! * [`basefield`] describes the base field `K` with its distinguished place
//!   `∞` and evaluates `ζ_K(-i)`, `#Pic(A)` and constant field extensions;
//! * [`algebra`] holds the local invariants of `D/K`, the constant field
//!   degree `s₀` and the centralizer algebras `D'_s` over `L_s`;
//! * [`orders`] holds the invariant vectors of a hereditary order, the local
//!   unit indices and the genus parametrization;
//! * [`omega`] enumerates the local index sets of optimal embeddings;
//! * [`massform`] evaluates the mass formula;
//! * [`theta`] evaluates the local factors `Θ_v` by enumeration or through a
//!   truncated generating function ([`series`]);
//! * [`classnum`] runs the depth-ordered recursion for the weight class
//!   numbers `h_s` and the derived quantities.
//!
//! All arithmetic is exact; no floating point is used anywhere.

pub mod algebra;
pub mod arith;
pub mod basefield;
pub mod classnum;
pub mod error;
pub mod massform;
pub mod omega;
pub mod orders;
pub mod series;
pub mod theta;

pub use algebra::{AlgebraSpec, Place, INFINITY_LABEL};
pub use basefield::{BaseField, BaseKind, Rational};
pub use classnum::{ClassNumberEngine, ClassNumberReport, WeightEntry};
pub use error::{Error, Result};
pub use omega::{LocalShape, OmegaElement, OmegaIter};
pub use orders::{GenusVector, OrderSpec};
pub use theta::ThetaEngine;

pub use num_bigint::BigInt;
