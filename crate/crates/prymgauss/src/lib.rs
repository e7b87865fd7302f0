//! Exact combinatorics behind the Gauss-map degrees of bielliptic Prym varieties.
//!
//! The crate has two halves that meet in the middle:
//!
//! * closed-form side ([`formulas`]): exact binomial evaluation of every degree
//!   formula, the boundary degree μ(d̲) with its correction term μ̃(d̲), intersection
//!   numbers, an upper bound on the correction invariant, and the fixed summary
//!   tables in dimension 5;
//! * counting side ([`abelian`], [`relations`], [`counting`], [`lattice`],
//!   [`search`]): the invariant 𝔛 itself — the number of block-balanced index sets
//!   of a point configuration summing to zero — counted naively and by
//!   meet-in-the-middle, certified maxima over small groups, and the integer-lattice
//!   obstruction test for relation sets.
//!
//! Everything is exact: arbitrary-precision integers on the formula side, plain
//! integer group arithmetic on the counting side. The crate is `no_std`-compatible
//! (with `alloc`); IO, file formats and the CLI live in the companion crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod abelian;
pub mod counting;
pub mod error;
pub mod fixtures;
pub mod formulas;
pub mod lattice;
pub mod relations;
pub mod search;

pub use error::{Error, Result};
