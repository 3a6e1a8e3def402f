//! Seeded generators for tree sets, linear orders, random automata and
//! deep sparse block words. Everything is deterministic in the seed.

use rand_chacha::ChaCha8Rng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::blocks::{Block, MachineKind, Phase, Sign, SymbolicWord};
use crate::encode::{FiniteOrder, TreeSet};
use crate::tree::{binary_value, co_value, weight, Dir, Node};
use crate::vass::Vass;
use crate::BigNat;

/// Deterministic RNG for a (seed, stream) pair, so suites can derive
/// independent per-case generators from one master seed.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Independent per-node membership with probability `p`.
pub fn random_tree_set(depth: usize, p: f64, rng: &mut ChaCha8Rng) -> TreeSet {
    let mut set = TreeSet::new(depth);
    for n in 0..=depth {
        for v in Node::level(n) {
            if rng.gen_bool(p) {
                set.insert(&v);
            }
        }
    }
    set
}

/// The fixed adversarial families: empty, full, and the two combs, which
/// are the extremal inputs for good-step counting.
pub fn adversarial_tree_sets(depth: usize) -> Vec<(&'static str, TreeSet)> {
    vec![
        ("empty", TreeSet::new(depth)),
        ("full", TreeSet::full(depth)),
        ("left-comb", TreeSet::left_comb(depth)),
        ("right-comb", TreeSet::right_comb(depth)),
    ]
}

/// All tree sets of the given depth, enumerated by the bitmask over their
/// tracked nodes in level order. Only sensible for tiny depths.
pub fn all_tree_sets(depth: usize) -> Vec<TreeSet> {
    let nodes: Vec<Node> = (0..=depth).flat_map(Node::level).collect();
    assert!(nodes.len() <= 20, "too many nodes to enumerate all subsets");
    (0..1usize << nodes.len())
        .map(|mask| {
            let mut set = TreeSet::new(depth);
            for (i, v) in nodes.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    set.insert(v);
                }
            }
            set
        })
        .collect()
}

/// A uniformly random linear order on `{0, .., size-1}`.
pub fn random_linear_order(size: usize, rng: &mut ChaCha8Rng) -> FiniteOrder {
    let mut ranking: Vec<usize> = (0..size).collect();
    ranking.shuffle(rng);
    FiniteOrder::from_ranking(&ranking)
}

/// All linear orders of the given size, via all rankings.
pub fn all_linear_orders(size: usize) -> Vec<FiniteOrder> {
    assert!((1..=8).contains(&size), "factorially many orders");
    let mut rankings: Vec<Vec<usize>> = vec![vec![0]];
    for elem in 1..size {
        let mut next = Vec::new();
        for r in &rankings {
            for pos in 0..=r.len() {
                let mut n = r.clone();
                n.insert(pos, elem);
                next.push(n);
            }
        }
        rankings = next;
    }
    rankings
        .iter()
        .map(|r| FiniteOrder::from_ranking(r))
        .collect()
}

/// Shape of a random automaton for engine cross-validation.
#[derive(Clone, Copy, Debug)]
pub struct RandomVassSpec {
    pub max_states: usize,
    pub counters: usize,
    pub letters: usize,
    /// Probability that a (state, letter) pair gets a second transition;
    /// kept low so brute-force enumeration stays feasible.
    pub double_edge_p: f64,
}

impl Default for RandomVassSpec {
    fn default() -> Self {
        RandomVassSpec {
            max_states: 4,
            counters: 2,
            letters: 2,
            double_edge_p: 0.10,
        }
    }
}

/// Random small automaton: around one transition per (state, letter), with
/// effects in -1..=1 and a random accepting set.
pub fn random_vass(spec: &RandomVassSpec, rng: &mut ChaCha8Rng) -> Vass {
    let alphabet: Vec<char> = (0..spec.letters)
        .map(|i| (b'a' + i as u8) as char)
        .collect();
    let states = rng.gen_range(1..=spec.max_states);
    let mut vass = Vass::new(spec.counters, alphabet.clone());
    let ids: Vec<_> = (0..states)
        .map(|i| vass.add_state(&format!("s{i}")))
        .collect();
    for &q in &ids {
        if rng.gen_bool(0.4) {
            vass.mark_accepting(q);
        }
    }
    for &q in &ids {
        for &a in &alphabet {
            let count = if rng.gen_bool(0.15) {
                0
            } else if rng.gen_bool(spec.double_edge_p) {
                2
            } else {
                1
            };
            for _ in 0..count {
                let effect: Vec<i64> = (0..spec.counters).map(|_| rng.gen_range(-1..=1)).collect();
                let to = ids[rng.gen_range(0..states)];
                vass.add_transition(q, a, &effect, to);
            }
        }
    }
    vass
}

/// A random word over the automaton's alphabet.
pub fn random_word(vass: &Vass, len: usize, rng: &mut ChaCha8Rng) -> String {
    let letters: Vec<char> = vass.alphabet().iter().copied().collect();
    (0..len)
        .map(|_| letters[rng.gen_range(0..letters.len())])
        .collect()
}

/// A deep but narrow block word: the canonical encoding restricted to a few
/// branches, so phase counts can reach the dozens while each phase stays
/// small. Decrements and increments are genuine level weights, which is what
/// pushes counter magnitudes to thousands of bits.
pub fn sparse_branch_word(
    kind: MachineKind,
    phases: usize,
    branches: usize,
    membership_p: f64,
    rng: &mut ChaCha8Rng,
) -> SymbolicWord<BigNat> {
    assert!(phases < 62, "levels beyond 61 overflow the node index");
    let mut level: Vec<Node> = vec![Node::root()];
    let mut word: Vec<Phase<BigNat>> = Vec::with_capacity(phases);
    for _ in 0..phases {
        let mut phase: Phase<BigNat> = Vec::new();
        let mut next: Vec<Node> = Vec::new();
        for v in &level {
            let member = rng.gen_bool(membership_p);
            for d in Dir::BOTH {
                let child = v.child(d);
                let block = match kind {
                    MachineKind::A2 => {
                        let sign = if member { Sign::Plus } else { Sign::Minus };
                        Block::new(
                            sign,
                            vec![binary_value(v), co_value(v)],
                            vec![binary_value(&child), co_value(&child)],
                        )
                    }
                    MachineKind::A1 => {
                        let sign = if member && d == Dir::L {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        };
                        Block::new(sign, vec![weight(v)], vec![weight(&child)])
                    }
                };
                phase.push(block);
                next.push(child);
            }
        }
        next.sort();
        next.dedup();
        while next.len() > branches {
            let drop = rng.gen_range(0..next.len());
            next.remove(drop);
        }
        level = next;
        word.push(phase);
    }
    SymbolicWord::new(kind.counters(), word)
}
