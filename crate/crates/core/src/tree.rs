//! Binary-tree nodes, the prefix/lexicographic/infix orders, and the level
//! weight functions that drive the one-counter encoding.
//!
//! Nodes are finite words over the two directions `L` and `R`. The infix
//! order compares nodes as if both were padded with a virtual middle
//! direction `M` (with `L < M < R`); `M` never occurs in a node itself.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{two_pow, Nat};

/// A tree direction. `L` sorts before `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    L,
    R,
}

impl Dir {
    pub const BOTH: [Dir; 2] = [Dir::L, Dir::R];

    pub fn as_char(self) -> char {
        match self {
            Dir::L => 'L',
            Dir::R => 'R',
        }
    }

    /// The bit contributed to the binary value: `L` is 0, `R` is 1.
    pub fn bit(self) -> u8 {
        match self {
            Dir::L => 0,
            Dir::R => 1,
        }
    }
}

/// The address of a binary-tree vertex: a finite sequence of directions.
/// The derived `Ord` is the lexicographic order (a prefix sorts before its
/// extensions), which on equal-depth nodes coincides with the infix order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    dirs: Vec<Dir>,
}

impl Node {
    /// The root ε.
    pub fn root() -> Self {
        Node { dirs: Vec::new() }
    }

    pub fn from_dirs(dirs: Vec<Dir>) -> Self {
        Node { dirs }
    }

    pub fn depth(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_root(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.dirs
    }

    pub fn child(&self, d: Dir) -> Node {
        let mut dirs = self.dirs.clone();
        dirs.push(d);
        Node { dirs }
    }

    pub fn parent(&self) -> Option<Node> {
        if self.dirs.is_empty() {
            return None;
        }
        Node {
            dirs: self.dirs[..self.dirs.len() - 1].to_vec(),
        }
        .into()
    }

    pub fn last_dir(&self) -> Option<Dir> {
        self.dirs.last().copied()
    }

    /// The first `n` directions. Panics if `n` exceeds the depth.
    pub fn prefix(&self, n: usize) -> Node {
        assert!(n <= self.depth(), "prefix length {n} exceeds depth");
        Node {
            dirs: self.dirs[..n].to_vec(),
        }
    }

    /// Position of this node within its level, i.e. its binary value as a
    /// machine integer. Panics beyond depth 63.
    pub fn index_in_level(&self) -> usize {
        assert!(self.depth() < 64, "level index overflows usize");
        self.dirs
            .iter()
            .fold(0usize, |acc, d| (acc << 1) | d.bit() as usize)
    }

    /// The level-`depth` node whose binary value is `index`.
    pub fn from_level_index(depth: usize, index: u64) -> Node {
        assert!(depth < 64 && index >> depth == 0);
        let dirs = (0..depth)
            .map(|i| {
                if (index >> (depth - 1 - i)) & 1 == 1 {
                    Dir::R
                } else {
                    Dir::L
                }
            })
            .collect();
        Node { dirs }
    }

    /// All nodes of the given depth, in lexicographic order.
    pub fn level(depth: usize) -> Vec<Node> {
        assert!(depth < 30, "level too large to materialise");
        (0..1u64 << depth)
            .map(|i| Node::from_level_index(depth, i))
            .collect()
    }

    /// Infix comparison: both nodes padded with the virtual direction `M` to
    /// equal length, then compared with `L < M < R`.
    pub fn infix_cmp(&self, other: &Node) -> Ordering {
        fn rank(d: Option<&Dir>) -> u8 {
            match d {
                Some(Dir::L) => 0,
                None => 1,
                Some(Dir::R) => 2,
            }
        }
        let n = self.depth().max(other.depth());
        for i in 0..n {
            match rank(self.dirs.get(i)).cmp(&rank(other.dirs.get(i))) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.dirs {
            write!(f, "{}", d.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            write!(f, "ε")
        } else {
            write!(f, "{self}")
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid node character {0:?} (expected 'L' or 'R')")]
pub struct ParseNodeError(pub char);

impl FromStr for Node {
    type Err = ParseNodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let dirs = s
            .chars()
            .map(|c| match c {
                'L' => Ok(Dir::L),
                'R' => Ok(Dir::R),
                other => Err(ParseNodeError(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Node { dirs })
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Node {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Prefix order: true iff `v` extends `u`.
pub fn prefix_leq(u: &Node, v: &Node) -> bool {
    v.dirs().starts_with(u.dirs())
}

/// Lexicographic order with a prefix sorting before its extensions.
pub fn lex_leq(u: &Node, v: &Node) -> bool {
    u <= v
}

/// Infix order: `u` padded with `M` is lexicographically at most `v` padded
/// with `M`.
pub fn infix_leq(u: &Node, v: &Node) -> bool {
    u.infix_cmp(v) != Ordering::Greater
}

/// Strict infix order.
pub fn infix_less(u: &Node, v: &Node) -> bool {
    u.infix_cmp(v) == Ordering::Less
}

/// Binary value of a node: `b(ε) = 0`, `b(vL) = 2 b(v)`, `b(vR) = 2 b(v) + 1`.
pub fn binary_value<T: Nat>(v: &Node) -> T {
    let mut acc = T::zero();
    for d in v.dirs() {
        acc = acc
            .checked_add(&acc)
            .expect("scalar overflow in binary value");
        if *d == Dir::R {
            acc = acc + T::one();
        }
    }
    acc
}

/// Complementary value `2^|v| - b(v) - 1`: the binary value read with the
/// directions swapped.
pub fn co_value<T: Nat>(v: &Node) -> T {
    let total = two_pow::<T>(v.depth());
    total
        .checked_sub(&binary_value::<T>(v))
        .and_then(|t| t.checked_sub(&T::one()))
        .expect("co_value underflow")
}

/// The fast-growing level budget: `m(-1) = 1`, `m(n) = m(n-1) * 2^n`, so
/// `m(n) = 2^(n(n+1)/2)`. Panics if `n < -1`.
pub fn growth<T: Nat>(n: i64) -> T {
    assert!(n >= -1, "growth is undefined below -1 (got {n})");
    let mut m = T::one();
    for i in 0..=n {
        m = m
            .checked_mul(&two_pow::<T>(i as usize))
            .expect("scalar overflow in growth");
    }
    m
}

/// Node weight `e(v) = m(|v| - 1) * b(v)`.
pub fn weight<T: Nat>(v: &Node) -> T {
    growth::<T>(v.depth() as i64 - 1)
        .checked_mul(&binary_value::<T>(v))
        .expect("scalar overflow in weight")
}

/// All weights of one tree level together with the level budget `m(n)`.
#[derive(Clone, Debug)]
pub struct LevelWeights<T> {
    pub level: usize,
    /// `m(level)`.
    pub growth: T,
    /// `e(v)` for every node `v` of this level.
    pub weights: BTreeMap<Node, T>,
}

impl<T: Nat> LevelWeights<T> {
    pub fn new(level: usize) -> Self {
        let weights = Node::level(level)
            .into_iter()
            .map(|v| {
                let w = weight::<T>(&v);
                (v, w)
            })
            .collect();
        LevelWeights {
            level,
            growth: growth::<T>(level as i64),
            weights,
        }
    }

    /// The two defining invariants: `m(n) = m(n-1) * 2^n` and
    /// `e(v) + m(n-1) <= m(n)` for every node of the level.
    pub fn check(&self) -> bool {
        let prev: T = growth(self.level as i64 - 1);
        if prev.clone() * two_pow::<T>(self.level) != self.growth {
            return false;
        }
        self.weights
            .values()
            .all(|e| e.clone() + prev.clone() <= self.growth)
    }
}
