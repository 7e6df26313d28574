//! Symmetry types of families of automorphic L-functions computed from
//! local data.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`arith`]: prime sieve, Kronecker symbols, Dirichlet character tables,
//!   64-bit factorization.
//! * [`satake`]: power sums of Satake parameters, Hecke recursion,
//!   symmetric-power lifts and Rankin–Selberg products of local data.
//! * [`weil`]: exact algebra of representations of the Weil group of ℝ
//!   with ε-factors, Γ-factors and analytic conductors.
//! * [`rmt`]: random-matrix 1- and 2-level density predictions and the
//!   test-function library.
//! * [`ec`]: elliptic-curve invariants, conductor proxies, fiber traces,
//!   Nagao and Michel statistics, j-collisions.
//! * [`families`]: the [`families::Family`] contract and concrete families.
//! * [`stats`]: prime and prime-square sums, family constants, 1-level
//!   densities.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod ec;
mod error;
pub mod families;
pub mod math;
pub mod quad;
pub mod rmt;
pub mod satake;
pub mod stats;
pub mod tau;
pub mod weil;

pub use error::{Error, Result};
