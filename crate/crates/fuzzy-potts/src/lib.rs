//! Exact construction and exhaustive verification of random-cluster, fuzzy
//! Potts, and divide-and-color measures on small finite multigraphs.
//!
//! Everything in this crate is computed with exact rational arithmetic over
//! arbitrary-precision integers; no floating point enters any probability
//! computation. Measures are represented by dense (or, for joint edge/spin
//! distributions, sparse) tables indexed by configuration rank, and every
//! check is a full enumeration over that table: a verdict of "holds" means
//! the inequality was verified for every configuration pair, and a verdict
//! of "fails" carries an exact witness.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] — finite multigraphs (loops and parallel edges allowed),
//!   edge configurations as bitmask ranks, connectivity, minors, and the
//!   two-path family of graphs used by the covariance counterexample.
//! * [`rational`] — helpers over [`Rational`] (exact `a/b` parsing,
//!   integer powers, decimal rendering).
//! * [`edge_measure`] — measures on `{0,1}^E`: random-cluster, uniform
//!   forest, product (percolation), conditioning on an edge state (as a
//!   measure on the corresponding minor), marginals, total variation.
//! * [`lattice`] — the positive lattice condition, its monotone-conditional
//!   equivalent, and conditional independence across vertex cuts.
//! * [`spin_measure`] — measures on spin space: fuzzy Potts (cluster
//!   colouring of an edge measure), the joint edge/spin distribution,
//!   divide-and-color from a random partition, and the Potts Gibbs measure.
//! * [`association`] — up-sets (increasing events), correlations, positive
//!   association by exhaustive up-set pair scan, and the conditional
//!   covariance checks for single-site conditioning.
//! * [`coupling`] — the edge-by-edge monotone coupling of the two
//!   single-edge conditionings of a random-cluster measure, its exhaustive
//!   verification, and an exact-threshold sampler.
//! * [`explorer`] — prepackaged studies: the two-path covariance
//!   sign-change family, boundary scans of the lattice-condition region,
//!   a q < 1 conjecture probe, and witnesses showing no single structural
//!   property accounts for positive association.
//!
//! The crate is `no_std`-compatible (with `alloc`); the `std` feature
//! (enabled by default) is only forwarded to dependencies.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod association;
pub mod coupling;
pub mod edge_measure;
pub mod error;
pub mod explorer;
pub mod graph;
pub mod lattice;
pub mod rational;
pub mod spin_measure;

pub use error::Error;
pub use rational::Rational;

/// Convenient result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
