//! Exact symbolic engine for the monomial expansions of deformed W-algebra
//! generating currents.
//!
//! The crate works over two formal deformation parameters (q, t). Generating
//! currents are expanded as sums of normally ordered monomials in variables
//! `Y_i(z a)`, where `i` is a node of a Dynkin diagram and `a` is a spectral
//! parameter drawn from a multiplicative lattice `u_k q^m t^n`. Every
//! coefficient is kept as an exact factored rational function of (q, t), so
//! all checks in this crate are symbolic, never floating point.
//!
//! Modules build on each other bottom-up:
//!
//! * [`cartan`]: root data and the (q, t)-deformed Cartan matrix,
//! * [`monomial`]: normally ordered monomials and their combinatorics,
//! * [`coeff`]: exact factored coefficients and their t -> 1 limits,
//! * [`engine`]: the breadth-first monomial expansion itself,
//! * [`verifier`]: the residue cancellation certificate for completed runs,
//! * [`catalog`]: closed-form expected monomial sets for classical types,
//! * [`limit`]: specialization of a completed expansion to a q-character.
//!
//! The crate is `no_std` (alloc only); serialization and IO live in the
//! companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cartan;
pub mod catalog;
pub mod coeff;
pub mod engine;
pub mod limit;
pub mod monomial;
pub mod verifier;

pub use cartan::{build_root_data, LieType, RootData, Series};
pub use coeff::FactoredCoeff;
pub use engine::{expand, ExpansionConfig, FieldExpansion, Status};
pub use monomial::{Monomial, Spectral};
