//! Exact computations for Lie algebras in the null cone of the `O(p,q)` action.
//!
//! A Lie algebra is stored as a structure-constant tensor `C^c_{ab}` over
//! exact rationals. A [`frame::FrameLayout`] fixes a pseudo-orthonormal null
//! frame, which determines a metric and boost weights. A class vector `x`
//! certifies null-cone membership when every nonzero component has boost
//! weight `b` with `<x, b> <= -1`.
//!
//! Module map:
//! - [`algebra`]: structure tensors, Jacobi, series, Killing form.
//! - [`frame`]: null-frame metric, weights, certification, boost flow.
//! - [`classifier`]: exact feasibility and the frame search.
//! - [`curvature`]: Levi-Civita connection, Riemann tensor, invariant suite.
//! - [`rootsystems`]: root systems, Chevalley bases, height gradings.
//! - [`constructor`]: the `g ⊕ R^m` pairing construction and real-form bookkeeping.
//! - [`catalog`]: low-dimensional realizations and verdicts.

pub mod algebra;
pub mod catalog;
pub mod classifier;
pub mod constructor;
pub mod curvature;
pub mod error;
pub mod frame;
pub mod json;
pub mod linalg;
pub mod rational;
pub mod rootsystems;

pub use algebra::{StructureTensor, Subspace};
pub use error::{Error, Result};
pub use frame::{BoostWeight, ClassVector, FrameLayout, Role};

pub use rational::{q, Rational};
