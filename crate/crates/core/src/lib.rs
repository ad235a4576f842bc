//! Renormalization of non-isochronous oscillators near an elliptic equilibrium.
//!
//! Trajectories `x(v; t)` of `ẍ = -V'(x)` launched from the equilibrium are
//! rescaled as `x_n(v; t) = (-1)ⁿ Γ⁻¹ x(Γv; nπ - ℓt)` with
//! `Γ = √(8t/(3πn))`. As `n → ∞` they converge to the universal limit
//! `X_ℓ(v; t) = v sin(ℓt(v² - 1))`, which depends only on the sign `ℓ` of the
//! quartic term. The crate provides the elliptic-function solutions of the
//! quartic normal forms, the period map, the renormalized trajectories, and
//! focal-decomposition index grids.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod elliptic;
pub mod error;
pub mod focal;
pub mod ode;
pub mod output;
pub mod period;
pub mod potentials;
pub mod quadrature;
pub mod renorm;
pub mod roots;

pub use error::{Error, Result};
pub use potentials::{Ell, PotentialKind, PotentialSpec};
