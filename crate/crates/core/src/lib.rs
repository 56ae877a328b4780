//! Topological invariants of Weierstrass curves W_D and the polynomials f_D(t)
//! whose roots label their orbifold points.
//!
//! The crate is organised bottom-up: [`arith`] and [`classnum`] supply the
//! number theory, [`prototypes`], [`eulerchar`] and [`cusps`] compute the
//! three ingredients of the orbifold Euler characteristic, [`topology`]
//! assembles them into per-component records, and [`modular`] evaluates the
//! modular function a(τ) at prototype points. [`lattice`] holds exact oracles
//! used to cross-check the combinatorics.

pub mod arith;
pub mod classnum;
pub mod cusps;
pub mod error;
pub mod eulerchar;
pub mod lattice;
pub mod modular;
pub mod prototypes;
pub mod rational;
pub mod reference;
pub mod topology;

pub use arith::Discriminant;
pub use error::{Error, Result};
