//! Finite tree sets, finite linear orders, and the continuous encodings:
//! tree set to block word (one per machine) and linear order to tree set.

use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::blocks::{Block, MachineKind, Phase, Sign, SymbolicWord};
use crate::scalar::Nat;
use crate::tree::{binary_value, co_value, infix_leq, weight, Dir, Node};

/// A level-complete truncation of a subset of the binary tree: membership is
/// tracked for every node up to `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSet {
    depth: usize,
    /// `levels[n][b(v)]` is the membership of the level-`n` node `v`.
    levels: Vec<Vec<bool>>,
}

impl TreeSet {
    /// The empty set tracked to `depth`.
    pub fn new(depth: usize) -> Self {
        assert!(depth < 26, "tree set too deep to materialise");
        TreeSet {
            depth,
            levels: (0..=depth).map(|n| vec![false; 1 << n]).collect(),
        }
    }

    /// Every node up to `depth`.
    pub fn full(depth: usize) -> Self {
        let mut set = TreeSet::new(depth);
        for level in &mut set.levels {
            level.fill(true);
        }
        set
    }

    /// The leftmost path: all of `L^n` for `n <= depth`.
    pub fn left_comb(depth: usize) -> Self {
        let mut set = TreeSet::new(depth);
        for n in 0..=depth {
            set.levels[n][0] = true;
        }
        set
    }

    /// The rightmost path: all of `R^n` for `n <= depth`.
    pub fn right_comb(depth: usize) -> Self {
        let mut set = TreeSet::new(depth);
        for n in 0..=depth {
            set.levels[n][(1 << n) - 1] = true;
        }
        set
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of tracked nodes: `2^(depth+1) - 1`.
    pub fn tracked_nodes(&self) -> usize {
        (1 << (self.depth + 1)) - 1
    }

    /// Membership. Panics for nodes deeper than the truncation.
    pub fn contains(&self, v: &Node) -> bool {
        assert!(
            v.depth() <= self.depth,
            "node {v} deeper than the tracked depth {}",
            self.depth
        );
        self.levels[v.depth()][v.index_in_level()]
    }

    pub fn set(&mut self, v: &Node, member: bool) {
        assert!(v.depth() <= self.depth);
        self.levels[v.depth()][v.index_in_level()] = member;
    }

    pub fn insert(&mut self, v: &Node) {
        self.set(v, true);
    }

    /// Members of one level, in lexicographic order.
    pub fn members_at_level(&self, n: usize) -> Vec<Node> {
        self.levels[n]
            .iter()
            .enumerate()
            .filter(|&(_i, &m)| m)
            .map(|(i, &_m)| Node::from_level_index(n, i as u64))
            .collect()
    }

    /// All members, level by level.
    pub fn members(&self) -> Vec<Node> {
        (0..=self.depth)
            .flat_map(|n| self.members_at_level(n))
            .collect()
    }
}

impl fmt::Display for TreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v:?}")?;
        }
        write!(f, "}} to depth {}", self.depth)
    }
}

#[derive(Serialize, Deserialize)]
struct TreeSetRepr {
    depth: usize,
    nodes: Vec<Node>,
}

impl Serialize for TreeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TreeSetRepr {
            depth: self.depth,
            nodes: self.members(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TreeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = TreeSetRepr::deserialize(deserializer)?;
        if repr.depth >= 26 {
            return Err(de::Error::custom("tree set too deep to materialise"));
        }
        let mut set = TreeSet::new(repr.depth);
        for v in &repr.nodes {
            if v.depth() > repr.depth {
                return Err(de::Error::custom(format!(
                    "node {v} deeper than the declared depth {}",
                    repr.depth
                )));
            }
            set.insert(v);
        }
        Ok(set)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("{phases} phases requested but the tree set only supports {max} (depth {depth})")]
    PhasesExceedDepth {
        phases: usize,
        depth: usize,
        max: usize,
    },
}

/// Encode a tree set as a block word for the chosen machine, with one phase
/// per level `0..phases`. Phase `n` contains one block per level-`(n+1)`
/// node `v·d`, in lexicographic order of `v·d`:
///
/// * two counters: decrements `(b(v), b'(v))`, increments `(b(vd), b'(vd))`,
///   sign `+` iff `v` is a member;
/// * one counter: decrement `e(v)`, increment `e(vd)`, sign `+` iff `v` is a
///   member and `d = L`.
///
/// Phase `n` depends only on membership at level `n`, which is what makes
/// the whole map continuous.
pub fn encode<T: Nat>(
    kind: MachineKind,
    x: &TreeSet,
    phases: usize,
) -> Result<SymbolicWord<T>, EncodeError> {
    if phases > x.depth() + 1 {
        return Err(EncodeError::PhasesExceedDepth {
            phases,
            depth: x.depth(),
            max: x.depth() + 1,
        });
    }
    let mut out: Vec<Phase<T>> = Vec::with_capacity(phases);
    for n in 0..phases {
        let mut phase: Phase<T> = Vec::with_capacity(1 << (n + 1));
        for v in Node::level(n) {
            for d in Dir::BOTH {
                let child = v.child(d);
                let member = x.contains(&v);
                let block = match kind {
                    MachineKind::A2 => {
                        let sign = if member { Sign::Plus } else { Sign::Minus };
                        Block::new(
                            sign,
                            vec![binary_value(&v), co_value(&v)],
                            vec![binary_value(&child), co_value(&child)],
                        )
                    }
                    MachineKind::A1 => {
                        let sign = if member && d == Dir::L {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        };
                        Block::new(sign, vec![weight(&v)], vec![weight(&child)])
                    }
                };
                phase.push(block);
            }
        }
        out.push(phase);
    }
    Ok(SymbolicWord::new(kind.counters(), out))
}

/// A finite linear order on `{0, .., size-1}` given by its full relation
/// matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteOrder {
    size: usize,
    leq: Vec<Vec<bool>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("matrix is {found}x{width}, expected {size}x{size}")]
    Shape {
        size: usize,
        found: usize,
        width: usize,
    },
    #[error("reflexivity violated at {0}")]
    Reflexivity(usize),
    #[error("antisymmetry violated at ({0}, {1})")]
    Antisymmetry(usize, usize),
    #[error("transitivity violated at ({0}, {1}, {2})")]
    Transitivity(usize, usize, usize),
    #[error("totality violated at ({0}, {1})")]
    Totality(usize, usize),
}

impl FiniteOrder {
    /// Validate the matrix as a linear order; errors name the failing axiom.
    pub fn from_matrix(leq: Vec<Vec<bool>>) -> Result<Self, OrderError> {
        let size = leq.len();
        if let Some(row) = leq.iter().find(|row| row.len() != size) {
            return Err(OrderError::Shape {
                size,
                found: leq.len(),
                width: row.len(),
            });
        }
        let order = FiniteOrder { size, leq };
        order.validate()?;
        Ok(order)
    }

    pub fn validate(&self) -> Result<(), OrderError> {
        let n = self.size;
        for i in 0..n {
            if !self.leq[i][i] {
                return Err(OrderError::Reflexivity(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq[i][j] && self.leq[j][i] {
                    return Err(OrderError::Antisymmetry(i, j));
                }
                if !self.leq[i][j] && !self.leq[j][i] {
                    return Err(OrderError::Totality(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.leq[i][j] {
                    continue;
                }
                for k in 0..n {
                    if self.leq[j][k] && !self.leq[i][k] {
                        return Err(OrderError::Transitivity(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// The order in which `ranks[p]` is the p-th smallest element.
    pub fn from_ranking(ranking: &[usize]) -> Self {
        let size = ranking.len();
        let mut position = vec![0usize; size];
        for (p, &elem) in ranking.iter().enumerate() {
            position[elem] = p;
        }
        let leq = (0..size)
            .map(|i| (0..size).map(|j| position[i] <= position[j]).collect())
            .collect();
        FiniteOrder { size, leq }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }
}

impl<'de> Deserialize<'de> for FiniteOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            size: usize,
            leq: Vec<Vec<bool>>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.leq.len() != repr.size {
            return Err(de::Error::custom(format!(
                "leq matrix has {} rows, size says {}",
                repr.leq.len(),
                repr.size
            )));
        }
        FiniteOrder::from_matrix(repr.leq).map_err(de::Error::custom)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("no level-{level} node realises the required infix constraints (internal consistency failure)")]
    NoCandidate { level: usize },
}

/// The image of a finite linear order inside the tree.
#[derive(Clone, Debug, Serialize)]
pub struct OrderEmbedding {
    /// `nodes[k]` sits at depth `k`; `k -> nodes[k]` is an isomorphism onto
    /// the infix order of the image.
    pub nodes: Vec<Node>,
    /// The image as a level-complete tree set of depth `size - 1`.
    pub tree: TreeSet,
}

/// Embed a linear order into the tree: node `k` goes to depth `k`, and each
/// new node is placed so that its infix comparisons with all earlier nodes
/// mirror the order. Candidates are searched exhaustively with a
/// lexicographic tie-break, so a missing candidate is detected rather than
/// assumed away.
pub fn embed_order(order: &FiniteOrder) -> Result<OrderEmbedding, ReduceError> {
    assert!(order.size() > 0, "cannot embed the empty order");
    let mut nodes = vec![Node::root()];
    for k in 1..order.size() {
        let candidate = Node::level(k).into_iter().find(|x| {
            nodes
                .iter()
                .enumerate()
                .all(|(j, xj)| infix_leq(x, xj) == order.leq(k, j))
        });
        match candidate {
            Some(x) => nodes.push(x),
            None => return Err(ReduceError::NoCandidate { level: k }),
        }
    }
    let mut tree = TreeSet::new(order.size() - 1);
    for v in &nodes {
        tree.insert(v);
    }
    Ok(OrderEmbedding { nodes, tree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::symbolic_max_visits;

    fn node(s: &str) -> Node {
        s.parse().unwrap()
    }

    fn natural(n: usize) -> FiniteOrder {
        FiniteOrder::from_ranking(&(0..n).collect::<Vec<_>>())
    }

    fn reversed(n: usize) -> FiniteOrder {
        FiniteOrder::from_ranking(&(0..n).rev().collect::<Vec<_>>())
    }

    #[test]
    fn tree_set_basics() {
        let mut x = TreeSet::new(2);
        assert_eq!(x.tracked_nodes(), 7);
        assert!(!x.contains(&node("RL")));
        x.insert(&node("RL"));
        x.insert(&Node::root());
        assert!(x.contains(&node("RL")));
        assert_eq!(x.members(), vec![Node::root(), node("RL")]);
        assert_eq!(x.members_at_level(1), vec![]);
    }

    #[test]
    fn tree_set_json_round_trip() {
        let mut x = TreeSet::new(2);
        x.insert(&node("L"));
        x.insert(&node("RL"));
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"depth":2,"nodes":["L","RL"]}"#);
        let back: TreeSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<TreeSet>(r#"{"depth":1,"nodes":["RLL"]}"#).is_err());
    }

    #[test]
    fn encode_two_counter_examples() {
        let mut x = TreeSet::new(0);
        x.insert(&Node::root());
        let word = encode::<u64>(MachineKind::A2, &x, 1).unwrap();
        assert_eq!(word.counters, 2);
        assert_eq!(
            word.phases[0],
            vec![
                Block::new(Sign::Plus, vec![0, 0], vec![0, 1]),
                Block::new(Sign::Plus, vec![0, 0], vec![1, 0]),
            ]
        );

        let empty = TreeSet::new(0);
        let word = encode::<u64>(MachineKind::A2, &empty, 1).unwrap();
        assert!(word.phases[0].iter().all(|b| b.sign == Sign::Minus));
        assert_eq!(
            word.phases[0]
                .iter()
                .map(|b| b.dec.clone())
                .collect::<Vec<_>>(),
            vec![vec![0, 0], vec![0, 0]]
        );
    }

    #[test]
    fn encode_phase_sizes() {
        let x = TreeSet::full(3);
        let word = encode::<u64>(MachineKind::A2, &x, 4).unwrap();
        for (n, phase) in word.phases.iter().enumerate() {
            assert_eq!(phase.len(), 1 << (n + 1));
        }
        assert!(matches!(
            encode::<u64>(MachineKind::A2, &x, 5),
            Err(EncodeError::PhasesExceedDepth { .. })
        ));
    }

    #[test]
    fn encode_one_counter_examples() {
        let mut x = TreeSet::new(0);
        x.insert(&Node::root());
        let word = encode::<u64>(MachineKind::A1, &x, 1).unwrap();
        assert_eq!(
            word.phases[0],
            vec![
                Block::new(Sign::Plus, vec![0], vec![0]),
                Block::new(Sign::Minus, vec![0], vec![1]),
            ]
        );

        let empty = TreeSet::new(0);
        let word = encode::<u64>(MachineKind::A1, &empty, 1).unwrap();
        assert_eq!(
            word.phases[0],
            vec![
                Block::new(Sign::Minus, vec![0], vec![0]),
                Block::new(Sign::Minus, vec![0], vec![1]),
            ]
        );
    }

    #[test]
    fn encode_one_counter_level_one_phase() {
        // Members on the whole of level 1 drive phase 1 through all four
        // level-2 children.
        let mut x = TreeSet::new(1);
        x.insert(&node("L"));
        x.insert(&node("R"));
        let word = encode::<u64>(MachineKind::A1, &x, 2).unwrap();
        let phase = &word.phases[1];
        let decs: Vec<u64> = phase.iter().map(|b| b.dec[0]).collect();
        let incs: Vec<u64> = phase.iter().map(|b| b.inc[0]).collect();
        let signs: Vec<Sign> = phase.iter().map(|b| b.sign).collect();
        assert_eq!(decs, vec![0, 0, 1, 1]);
        assert_eq!(incs, vec![0, 2, 4, 6]);
        assert_eq!(
            signs,
            vec![Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus]
        );
    }

    #[test]
    fn encoded_left_comb_accepts_every_phase() {
        let mut x = TreeSet::new(2);
        x.insert(&Node::root());
        x.insert(&node("L"));
        x.insert(&node("LL"));
        let word = encode::<u64>(MachineKind::A1, &x, 3).unwrap();
        assert_eq!(
            symbolic_max_visits(MachineKind::A1, &word, 3, 5),
            Ok(Some(3))
        );
        // Same count through the letter-level engine.
        let letters = word.render(3, 100_000).unwrap();
        let a1 = MachineKind::A1.build();
        assert_eq!(a1.max_accepting_visits::<u64>(&letters, 5), Ok(Some(3)));
        assert_eq!(a1.brute_force_visits::<u64>(&letters, 5), Ok(Some(3)));
    }

    #[test]
    fn phase_depends_only_on_its_level() {
        let mut x = TreeSet::new(3);
        x.insert(&node("L"));
        x.insert(&node("RL"));
        let before = encode::<u64>(MachineKind::A1, &x, 4).unwrap();
        // Flip membership everywhere except level 1.
        let mut y = x.clone();
        y.insert(&Node::root());
        y.insert(&node("RRL"));
        y.set(&node("RL"), false);
        let after = encode::<u64>(MachineKind::A1, &y, 4).unwrap();
        assert_eq!(before.phases[1], after.phases[1]);
        assert_ne!(before.phases[0], after.phases[0]);
        assert_ne!(before.phases[2], after.phases[2]);
    }

    #[test]
    fn order_axioms_are_validated() {
        assert!(natural(4).validate().is_ok());
        // 2-cycle
        let err = FiniteOrder::from_matrix(vec![vec![true, true], vec![true, true]]).unwrap_err();
        assert_eq!(err, OrderError::Antisymmetry(0, 1));
        // incomparable pair
        let err = FiniteOrder::from_matrix(vec![vec![true, false], vec![false, true]]).unwrap_err();
        assert_eq!(err, OrderError::Totality(0, 1));
        // missing reflexivity
        let err = FiniteOrder::from_matrix(vec![vec![false]]).unwrap_err();
        assert_eq!(err, OrderError::Reflexivity(0));
    }

    #[test]
    fn embed_order_examples() {
        let emb = embed_order(&natural(3)).unwrap();
        assert_eq!(emb.nodes, vec![Node::root(), node("R"), node("RR")]);
        let emb = embed_order(&reversed(3)).unwrap();
        assert_eq!(emb.nodes, vec![Node::root(), node("L"), node("LL")]);
        let emb = embed_order(&natural(1)).unwrap();
        assert_eq!(emb.nodes, vec![Node::root()]);
        assert!(emb.tree.contains(&Node::root()));
    }

    #[test]
    fn embedding_is_an_isomorphism() {
        // All rankings of size 4.
        let mut rankings = vec![vec![0usize]];
        for _ in 1..4 {
            let mut next = Vec::new();
            for r in &rankings {
                for pos in 0..=r.len() {
                    let mut n = r.clone();
                    n.insert(pos, r.len());
                    next.push(n);
                }
            }
            rankings = next;
        }
        for ranking in rankings {
            let order = FiniteOrder::from_ranking(&ranking);
            let emb = embed_order(&order).unwrap();
            for (k, x) in emb.nodes.iter().enumerate() {
                assert_eq!(x.depth(), k);
                for (j, y) in emb.nodes.iter().enumerate() {
                    assert_eq!(infix_leq(x, y), order.leq(k, j), "{ranking:?} {k} {j}");
                }
            }
        }
    }

    #[test]
    fn embedding_prefix_is_stable_under_suffix_edits() {
        let a = FiniteOrder::from_ranking(&[2, 0, 1, 3, 4]);
        let b = FiniteOrder::from_ranking(&[2, 0, 1, 4, 3]);
        // Both agree on {0,1,2}^2.
        let ea = embed_order(&a).unwrap();
        let eb = embed_order(&b).unwrap();
        assert_eq!(ea.nodes[..3], eb.nodes[..3]);
    }
}
