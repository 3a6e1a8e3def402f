//! Combinatorial witness oracles.
//!
//! Two independent yardsticks for the engines: the maximal number of levels
//! at which some branch prefix is a member (two-counter side), and the
//! maximal number of good steps over all correct chains (one-counter side).
//! Both are dynamic programs over (level, node); both return witnesses that
//! re-validate. A decoder turns a maximising symbolic run back into the
//! node sequence its blocks encode.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{symbolic_run, Block, MachineKind, Sign, SymbolicWord};
use crate::encode::TreeSet;
use crate::scalar::{two_pow, Nat};
use crate::tree::{growth, infix_leq, Dir, Node};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{phases} phases requested but the tree set only supports {max} (depth {depth})")]
    PhasesExceedDepth {
        phases: usize,
        depth: usize,
        max: usize,
    },
}

fn check_phases(x: &TreeSet, phases: usize) -> Result<(), OracleError> {
    if phases > x.depth() + 1 {
        return Err(OracleError::PhasesExceedDepth {
            phases,
            depth: x.depth(),
            max: x.depth() + 1,
        });
    }
    Ok(())
}

/// Number of levels `n < branch.depth()` whose prefix of `branch` is a
/// member of `x`.
pub fn branch_hits(x: &TreeSet, branch: &Node) -> usize {
    (0..branch.depth())
        .filter(|&n| x.contains(&branch.prefix(n)))
        .count()
}

/// Maximum of [`branch_hits`] over all branches of length `phases`, with a
/// maximising branch, by level-wise dynamic programming.
pub fn max_branch_hits(x: &TreeSet, phases: usize) -> Result<(usize, Node), OracleError> {
    check_phases(x, phases)?;
    let mut hits = vec![0usize; 1];
    for n in 0..phases {
        let mut next = vec![0usize; 1 << (n + 1)];
        for (j, slot) in next.iter_mut().enumerate() {
            let parent = j >> 1;
            let member = x.contains(&Node::from_level_index(n, parent as u64));
            *slot = hits[parent] + usize::from(member);
        }
        hits = next;
    }
    let (best_j, best) = hits
        .iter()
        .enumerate()
        .max_by_key(|&(_, h)| h)
        .expect("level is non-empty");
    Ok((*best, Node::from_level_index(phases, best_j as u64)))
}

/// A level-by-level node sequence starting at the root, each successor
/// infix-at-most the previous node's right child. A step is *good* when the
/// current node is a member and the successor is infix-at-most the left
/// child.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectChain {
    pub nodes: Vec<Node>,
    pub good_steps: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("chain must contain at least the root")]
    Empty,
    #[error("chain must start at the root")]
    NotRoot,
    #[error("node {index} has depth {found}, expected {expected}")]
    DepthLaw {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("step {0} leaves the right-child bound")]
    OrderViolation(usize),
    #[error("good step {0} is not actually good")]
    BadGoodStep(usize),
    #[error("good step at {0} is missing from the set")]
    MissingGoodStep(usize),
    #[error("input node {0} is not strictly infix-below its predecessor")]
    NotDescending(usize),
    #[error("input node {0} is not strictly deeper than its predecessor")]
    DepthsNotIncreasing(usize),
    #[error("input node {0} is not a member of the tree set")]
    NotMember(usize),
}

impl CorrectChain {
    /// Build a chain from its nodes, checking the chain laws and computing
    /// the good steps against `x`. Membership is only consulted below the
    /// final node, so the last node may sit one level past the truncation.
    pub fn from_nodes(nodes: Vec<Node>, x: &TreeSet) -> Result<Self, ChainError> {
        if nodes.is_empty() {
            return Err(ChainError::Empty);
        }
        if !nodes[0].is_root() {
            return Err(ChainError::NotRoot);
        }
        for (i, v) in nodes.iter().enumerate() {
            if v.depth() != i {
                return Err(ChainError::DepthLaw {
                    index: i,
                    expected: i,
                    found: v.depth(),
                });
            }
        }
        let mut good_steps = Vec::new();
        for n in 0..nodes.len() - 1 {
            if !infix_leq(&nodes[n + 1], &nodes[n].child(Dir::R)) {
                return Err(ChainError::OrderViolation(n));
            }
            if x.contains(&nodes[n]) && infix_leq(&nodes[n + 1], &nodes[n].child(Dir::L)) {
                good_steps.push(n);
            }
        }
        Ok(CorrectChain { nodes, good_steps })
    }

    /// Chain length counted in steps.
    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Re-validate a chain including its recorded good steps.
    pub fn check(&self, x: &TreeSet) -> Result<(), ChainError> {
        let recomputed = CorrectChain::from_nodes(self.nodes.clone(), x)?;
        for &g in &self.good_steps {
            if !recomputed.good_steps.contains(&g) {
                return Err(ChainError::BadGoodStep(g));
            }
        }
        for &g in &recomputed.good_steps {
            if !self.good_steps.contains(&g) {
                return Err(ChainError::MissingGoodStep(g));
            }
        }
        Ok(())
    }
}

/// Maximum number of good steps over all correct chains of length `phases`,
/// with a maximising chain.
///
/// The dynamic program runs over level indices: at level `n+1`, a node with
/// binary value `j` can follow a level-`n` node with value `i` iff
/// `j <= 2i + 1`, and the step is good iff additionally `j <= 2i` and `i`
/// is a member. Suffix maxima make each level linear in its width.
pub fn max_good_steps(x: &TreeSet, phases: usize) -> Result<(usize, CorrectChain), OracleError> {
    check_phases(x, phases)?;
    // value[j] = best good-step count of a chain ending at the node with
    // binary value j on the current level.
    let mut value = vec![0usize; 1];
    // parents[n][j] = (parent value index, step was good).
    let mut parents: Vec<Vec<(usize, bool)>> = Vec::with_capacity(phases);

    for n in 0..phases {
        let width = value.len();
        // Suffix maxima over plain steps and over good steps.
        let mut suf_plain: Vec<(usize, usize)> = vec![(0, 0); width];
        let mut suf_good: Vec<Option<(usize, usize)>> = vec![None; width];
        let mut best_plain: Option<(usize, usize)> = None;
        let mut best_good: Option<(usize, usize)> = None;
        for i in (0..width).rev() {
            if best_plain.is_none_or(|(v, _)| value[i] > v) {
                best_plain = Some((value[i], i));
            }
            suf_plain[i] = best_plain.expect("set above");
            if x.contains(&Node::from_level_index(n, i as u64))
                && best_good.is_none_or(|(v, _)| value[i] + 1 > v)
            {
                best_good = Some((value[i] + 1, i));
            }
            suf_good[i] = best_good;
        }

        let mut next = vec![0usize; width * 2];
        let mut parent = vec![(0usize, false); width * 2];
        for j in 0..width * 2 {
            let plain_from = j / 2;
            let good_from = j.div_ceil(2);
            let (mut best, mut who) = suf_plain[plain_from];
            let mut good = false;
            if good_from < width {
                if let Some((gv, gi)) = suf_good[good_from] {
                    if gv > best {
                        best = gv;
                        who = gi;
                        good = true;
                    }
                }
            }
            next[j] = best;
            parent[j] = (who, good);
        }
        parents.push(parent);
        value = next;
    }

    let (mut j, best) = value
        .iter()
        .enumerate()
        .max_by_key(|&(_, v)| v)
        .map(|(j, v)| (j, *v))
        .expect("level is non-empty");

    let mut nodes_rev = vec![Node::from_level_index(phases, j as u64)];
    for n in (0..phases).rev() {
        let (i, _) = parents[n][j];
        nodes_rev.push(Node::from_level_index(n, i as u64));
        j = i;
    }
    nodes_rev.reverse();
    let chain = CorrectChain::from_nodes(nodes_rev, x).expect("DP yields a correct chain");
    debug_assert_eq!(chain.good_steps.len(), best);
    Ok((best, chain))
}

/// Interpolate a strictly infix-descending sequence of members (with
/// strictly increasing depths) into a correct chain: node `n` of the chain
/// is the length-`n` prefix of the first input deep enough to provide one.
/// Every input depth except the last becomes a good step.
pub fn chain_from_descending(xs: &[Node], x: &TreeSet) -> Result<CorrectChain, ChainError> {
    if xs.is_empty() {
        return Err(ChainError::Empty);
    }
    for (i, node) in xs.iter().enumerate() {
        if !x.contains(node) {
            return Err(ChainError::NotMember(i));
        }
        if i > 0 {
            if node.depth() <= xs[i - 1].depth() {
                return Err(ChainError::DepthsNotIncreasing(i));
            }
            if node.infix_cmp(&xs[i - 1]) != std::cmp::Ordering::Less {
                return Err(ChainError::NotDescending(i));
            }
        }
    }
    let total = xs.last().expect("non-empty").depth();
    let mut nodes = Vec::with_capacity(total + 1);
    let mut i = 0;
    for n in 0..=total {
        if n > xs[i].depth() {
            i += 1;
        }
        nodes.push(xs[i].prefix(n));
    }
    CorrectChain::from_nodes(nodes, x)
}

/// A verdict paired with the evidence that re-validates it.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A maximising branch prefix.
    Branch { branch: Node },
    /// A maximising correct chain.
    Chain { chain: CorrectChain },
    /// A maximising run: chosen block per phase and the decoded nodes.
    Run {
        blocks: Vec<usize>,
        nodes: Vec<Node>,
        accepting_phases: Vec<usize>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessReport {
    pub value: usize,
    #[serde(flatten)]
    pub witness: Witness,
}

impl WitnessReport {
    pub fn branch(value: usize, branch: Node) -> Self {
        WitnessReport {
            value,
            witness: Witness::Branch { branch },
        }
    }

    pub fn chain(value: usize, chain: CorrectChain) -> Self {
        WitnessReport {
            value,
            witness: Witness::Chain { chain },
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("no run survives the word")]
    NoSurvivingRun,
    #[error("cannot decode levels deeper than 63")]
    LevelTooDeep,
    #[error("block {block} of phase {phase} does not decode: {reason}")]
    MalformedBlock {
        phase: usize,
        block: usize,
        reason: String,
    },
    #[error("decoded nodes break the chain law at step {0}")]
    DecodedChainInvalid(usize),
    #[error(transparent)]
    Word(#[from] crate::blocks::WordError),
}

/// Decode the node a phase-`n` block encodes: the parent it charges for and
/// the child it pays out, which must be the parent's own child.
pub fn decode_block<T: Nat>(
    kind: MachineKind,
    level: usize,
    block: &Block<T>,
) -> Result<(Node, Dir), String> {
    if level >= 63 {
        return Err("level too deep".into());
    }
    let to_node = |v: &T, at: usize| -> Result<Node, String> {
        let limit = two_pow::<T>(at);
        if *v >= limit {
            return Err(format!("value {v} out of range for level {at}"));
        }
        Ok(Node::from_level_index(
            at,
            v.to_u64().expect("bounded by 2^63"),
        ))
    };
    let (parent, child) = match kind {
        MachineKind::A2 => {
            let parent = to_node(&block.dec[0], level)?;
            let child = to_node(&block.inc[0], level + 1)?;
            let full = |node: &Node, co: &T, at: usize| -> Result<(), String> {
                let expect = two_pow::<T>(at)
                    .checked_sub(&crate::tree::binary_value::<T>(node))
                    .and_then(|t| t.checked_sub(&T::one()))
                    .expect("in range");
                if *co != expect {
                    return Err(format!("complement {co} does not match node {node}"));
                }
                Ok(())
            };
            full(&parent, &block.dec[1], level)?;
            full(&child, &block.inc[1], level + 1)?;
            (parent, child)
        }
        MachineKind::A1 => {
            let from_weight = |w: &T, at: usize| -> Result<Node, String> {
                let unit: T = growth(at as i64 - 1);
                let q = w.clone() / unit.clone();
                let r = w.clone() % unit;
                if r != T::zero() {
                    return Err(format!("weight {w} is not a multiple of the level unit"));
                }
                to_node(&q, at)
            };
            (
                from_weight(&block.dec[0], level)?,
                from_weight(&block.inc[0], level + 1)?,
            )
        }
    };
    match child.parent() {
        Some(p) if p == parent => Ok((parent, child.last_dir().expect("non-root"))),
        _ => Err(format!("child {child} does not extend parent {parent}")),
    }
}

/// Extract a maximising run of the symbolic executor and decode its chosen
/// blocks into the node sequence they encode. One-counter runs must decode
/// to a correct chain (with the left-child bound at every accepting phase);
/// two-counter runs must follow a single branch, each node the previous
/// block's child. Both laws are checked here rather than assumed.
pub fn chosen_block_trace<T: Nat>(
    kind: MachineKind,
    word: &SymbolicWord<T>,
    phases: usize,
    cap: usize,
) -> Result<WitnessReport, TraceError> {
    let run = symbolic_run(kind, word, phases, cap)?;
    let blocks = match (&run.visits, run.chosen_blocks) {
        (Some(_), Some(blocks)) => blocks,
        _ => return Err(TraceError::NoSurvivingRun),
    };
    let value = run.visits.expect("checked above");

    let mut nodes: Vec<Node> = Vec::with_capacity(phases + 1);
    let mut dirs: Vec<Dir> = Vec::with_capacity(phases);
    let mut accepting_phases = Vec::new();
    for (n, &bi) in blocks.iter().enumerate() {
        let block = &word.phases[n][bi];
        let (parent, dir) =
            decode_block(kind, n, block).map_err(|reason| TraceError::MalformedBlock {
                phase: n,
                block: bi,
                reason,
            })?;
        nodes.push(parent);
        dirs.push(dir);
        if block.sign == Sign::Plus {
            accepting_phases.push(n);
        }
    }
    match (nodes.last(), dirs.last()) {
        (Some(parent), Some(&dir)) => nodes.push(parent.child(dir)),
        _ => nodes.push(Node::root()),
    }

    for n in 0..nodes.len() - 1 {
        let ok = match kind {
            // Chain law: within the right-child bound, and within the
            // left-child bound where the block was accepting.
            MachineKind::A1 => {
                infix_leq(&nodes[n + 1], &nodes[n].child(Dir::R))
                    && (!accepting_phases.contains(&n)
                        || infix_leq(&nodes[n + 1], &nodes[n].child(Dir::L)))
            }
            // Branch law: the run pays exactly for the child it chose.
            MachineKind::A2 => nodes[n + 1] == nodes[n].child(dirs[n]),
        };
        if !ok {
            return Err(TraceError::DecodedChainInvalid(n));
        }
    }

    Ok(WitnessReport {
        value,
        witness: Witness::Run {
            blocks,
            nodes,
            accepting_phases,
        },
    })
}
