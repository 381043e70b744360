//! Decision procedures for convergence of functions along ideals.
//!
//! The crate works over the countable index sets `N = {1, 2, ...}` and
//! `N x N`. Subsets are described by [`SetTerm`]s: boolean combinations of a
//! closed vocabulary of atoms (tails, upper quadrants, rows, columns, partition
//! blocks, finite sets). Every catalog [`Ideal`] decides membership of such
//! terms exactly, which in turn makes `I`-convergence and `I^J`-convergence of
//! piecewise-defined functions decidable for the shapes supported here.
//!
//! The [`finite`] module is an independent brute-force oracle over explicit
//! finite models; it shares no decision code with the symbolic layer.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod ap;
mod classify;
pub mod engine;
mod error;
pub mod finite;
pub mod function;
pub mod ideal;
mod partition;
pub mod sample;
pub mod space;
pub mod term;
mod universe;

pub use ap::{ApFailureWitness, ApVerdict};
pub use classify::{block_incidence, classify, ClassifyResult, Incidence};
pub use engine::{IhjVerdict, Verdict, Witness};
pub use error::{Error, Result};
pub use function::{PiecewiseFn, ValueSpec};
pub use ideal::{Ideal, IdealFlags, IdealKind, Ternary};
pub use partition::Partition;
pub use space::{ContinuousMap, OpenSet, Space};
pub use term::{Atom, Node, SetTerm};
pub use universe::{pair_decode, pair_encode, Bijection, Element, Universe};

/// Exact rationals used for every point of the metric codomain.
pub type Rational = num_rational::Ratio<i64>;
