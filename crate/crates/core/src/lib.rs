//! Exactly-verifying computational algebra, no floating point anywhere.
//!
//! The crate has three layers. [`exact`] and [`linalg`] provide
//! arbitrary-precision rationals with p-adic valuations and dense exact
//! linear algebra over Q. [`liealg`] and [`homology`] build finite
//! dimensional graded Lie algebras from structure constants and compute
//! their low-degree Chevalley-Eilenberg homology, including the classical
//! two-condition finite-presentability criterion of Abels for weight-graded
//! nilpotent algebras. [`gamma`] and [`marked`] construct a family of 5x5
//! matrix groups over Z[1/p], their subgroup filtrations, central quotients
//! and discriminating sets, and compute canonical Cayley balls of marked
//! groups so that two markings can be compared radius by radius.
//!
//! Everything is deterministic: randomized self-tests take explicit seeds,
//! and all reported data (echelon bases, coset representatives, ball
//! numberings) is in a canonical form.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod exact;
pub mod gamma;
pub mod homology;
pub mod liealg;
pub mod linalg;
pub mod marked;
