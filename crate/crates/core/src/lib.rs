//! Bounded exploration of blind-counter Büchi automata.
//!
//! The crate builds finite prefixes of block-structured ω-words from subsets
//! of the binary tree, feeds them to one- and two-counter Büchi VASS, and
//! cross-validates the automata against independent combinatorial oracles
//! (maximal branch hits and correct-chain good steps). Acceptance is
//! truncated to "some run attains at least K accepting visits within N
//! phases", which makes every claim checkable at desk scale.
//!
//! Counter arithmetic is generic over [`scalar::Nat`]; [`BigNat`] is the
//! default scalar used by the command-line harness.

pub mod blocks;
pub mod encode;
pub mod oracle;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod suites;
pub mod tree;
pub mod vass;

/// Default arbitrary-precision scalar for counters and weights.
pub type BigNat = num_bigint::BigUint;

pub use scalar::Nat;
pub use tree::{Dir, Node};
