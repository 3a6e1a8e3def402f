//! Block-structured words and the two concrete machines that read them.
//!
//! A block is rendered as `< d^n1 e^n2 | i^m1 j^m2 s >` (one-counter blocks
//! use only `d`/`i`); phases are block sequences separated by `#`. The
//! letter table is fixed so words stay plain ASCII. Besides the letter-level
//! engine in [`crate::vass`], this module has a symbolic executor that
//! steps a whole block at a time, which is the only feasible route once
//! increments reach magnitudes like 2^800.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Nat;
use crate::vass::{pareto_max_by, Vass};

/// Letters shared by both machines.
pub const SEPARATOR: char = '#';
/// Decrement letters by counter index.
pub const DEC_LETTERS: [char; 2] = ['d', 'e'];
/// Increment letters by counter index.
pub const INC_LETTERS: [char; 2] = ['i', 'j'];

/// Default cap on the number of letters a single rendered word may use.
pub const DEFAULT_LETTER_BUDGET: usize = 1_000_000;

/// Which of the two hard-coded machines a word is meant for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MachineKind {
    /// One blind counter.
    A1,
    /// Two blind counters.
    A2,
}

impl MachineKind {
    pub fn counters(self) -> usize {
        match self {
            MachineKind::A1 => 1,
            MachineKind::A2 => 2,
        }
    }

    /// The in-phase alphabet (everything except the phase separator).
    pub fn base_letters(self) -> Vec<char> {
        match self {
            MachineKind::A1 => vec!['<', 'd', '|', 'i', '+', '-', '>'],
            MachineKind::A2 => vec!['<', 'd', 'e', '|', 'i', 'j', '+', '-', '>'],
        }
    }

    /// Build the machine. Both machines share the same skeleton: a run may
    /// skip letters in `q0`/`q3`, and committing to a block at its `<`
    /// forces it through decrements, increments and the block sign, visiting
    /// the accepting state exactly on `+` blocks.
    pub fn build(self) -> Vass {
        let base = self.base_letters();
        let k = self.counters();
        let mut alphabet = base.clone();
        alphabet.push(SEPARATOR);
        let mut vass = Vass::new(k, alphabet);
        let q0 = vass.add_state("q0");
        let q1 = vass.add_state("q1");
        let q2 = vass.add_state("q2");
        let qa = vass.add_state("qa");
        let qr = vass.add_state("qr");
        let q3 = vass.add_state("q3");
        vass.set_initial(q0);
        vass.mark_accepting(qa);

        let zero = vec![0i64; k];
        for &a in &base {
            vass.add_transition(q0, a, &zero, q0);
            vass.add_transition(q3, a, &zero, q3);
        }
        vass.add_transition(q0, '<', &zero, q1);
        for c in 0..k {
            let mut dec = zero.clone();
            dec[c] = -1;
            vass.add_transition(q1, DEC_LETTERS[c], &dec, q1);
            let mut inc = zero.clone();
            inc[c] = 1;
            vass.add_transition(q2, INC_LETTERS[c], &inc, q2);
        }
        vass.add_transition(q1, '|', &zero, q2);
        vass.add_transition(q2, '+', &zero, qa);
        vass.add_transition(q2, '-', &zero, qr);
        vass.add_transition(qa, '>', &zero, q3);
        vass.add_transition(qr, '>', &zero, q3);
        vass.add_transition(q3, SEPARATOR, &zero, q0);
        vass
    }
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineKind::A1 => write!(f, "a1"),
            MachineKind::A2 => write!(f, "a2"),
        }
    }
}

impl FromStr for MachineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a1" | "A1" => Ok(MachineKind::A1),
            "a2" | "A2" => Ok(MachineKind::A2),
            other => Err(format!("unknown automaton {other:?} (expected a1 or a2)")),
        }
    }
}

/// Sign of a block: `+` blocks are the accepting ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One block: per-counter decrements, then per-counter increments, then the
/// sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block<T> {
    pub sign: Sign,
    pub dec: Vec<T>,
    pub inc: Vec<T>,
}

impl<T: Nat> Block<T> {
    pub fn new(sign: Sign, dec: Vec<T>, inc: Vec<T>) -> Self {
        assert_eq!(dec.len(), inc.len(), "dec/inc arity mismatch");
        Block { sign, dec, inc }
    }

    pub fn counters(&self) -> usize {
        self.dec.len()
    }

    /// Number of letters of the rendered block, or `None` when a repetition
    /// count does not fit a machine integer.
    pub fn letter_len(&self) -> Option<usize> {
        let mut total = 4usize; // '<', '|', sign, '>'
        for v in self.dec.iter().chain(self.inc.iter()) {
            total = total.checked_add(v.to_usize()?)?;
        }
        Some(total)
    }

    /// Render to letters, refusing words beyond the letter budget.
    pub fn render(&self, budget: usize) -> Result<String, RenderError> {
        let len = self.letter_len().ok_or(RenderError::LetterBudget {
            needed: None,
            budget,
        })?;
        if len > budget {
            return Err(RenderError::LetterBudget {
                needed: Some(len),
                budget,
            });
        }
        let mut s = String::with_capacity(len);
        s.push('<');
        for (c, v) in self.dec.iter().enumerate() {
            let reps = v.to_usize().expect("checked by letter_len");
            for _ in 0..reps {
                s.push(DEC_LETTERS[c]);
            }
        }
        s.push('|');
        for (c, v) in self.inc.iter().enumerate() {
            let reps = v.to_usize().expect("checked by letter_len");
            for _ in 0..reps {
                s.push(INC_LETTERS[c]);
            }
        }
        s.push(self.sign.as_char());
        s.push('>');
        Ok(s)
    }
}

/// A phase: the blocks between two separators.
pub type Phase<T> = Vec<Block<T>>;

/// A run-length structured word: phases of blocks, each phase rendered and
/// then terminated by `#`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicWord<T> {
    pub counters: usize,
    pub phases: Vec<Phase<T>>,
}

impl<T: Nat> SymbolicWord<T> {
    pub fn new(counters: usize, phases: Vec<Phase<T>>) -> Self {
        SymbolicWord { counters, phases }
    }

    pub fn phase_count(&self) -> usize {
        self.phases.len()
    }

    /// Check that every block matches the declared counter count.
    pub fn validate(&self) -> Result<(), WordError> {
        for (n, phase) in self.phases.iter().enumerate() {
            for (b, block) in phase.iter().enumerate() {
                if block.counters() != self.counters {
                    return Err(WordError::BlockArity {
                        phase: n,
                        block: b,
                        expected: self.counters,
                        found: block.counters(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Render phases `0..phases` to letters, each phase followed by `#`.
    pub fn render(&self, phases: usize, budget: usize) -> Result<String, RenderError> {
        if phases > self.phases.len() {
            return Err(RenderError::NotEnoughPhases {
                requested: phases,
                available: self.phases.len(),
            });
        }
        let mut out = String::new();
        for phase in &self.phases[..phases] {
            for block in phase {
                let remaining = budget.saturating_sub(out.len());
                let rendered = block.render(remaining)?;
                out.push_str(&rendered);
            }
            if out.len() + 1 > budget {
                return Err(RenderError::LetterBudget {
                    needed: Some(out.len() + 1),
                    budget,
                });
            }
            out.push(SEPARATOR);
        }
        Ok(out)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("rendered word needs {needed:?} letters, over the budget of {budget}")]
    LetterBudget {
        needed: Option<usize>,
        budget: usize,
    },
    #[error("word has only {available} phases, {requested} requested")]
    NotEnoughPhases { requested: usize, available: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("block {block} of phase {phase} has {found} counters, word declares {expected}")]
    BlockArity {
        phase: usize,
        block: usize,
        expected: usize,
        found: usize,
    },
    #[error("word declares {found} counters but automaton {kind} has {expected}")]
    CounterMismatch {
        kind: MachineKind,
        expected: usize,
        found: usize,
    },
    #[error("word has only {available} phases, {requested} requested")]
    NotEnoughPhases { requested: usize, available: usize },
}

/// A frontier point of the phase-level executor: the counters and the capped
/// accepting-visit count at a phase boundary (state implicitly `q0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePoint<T> {
    pub counters: Vec<T>,
    pub visits: usize,
}

/// Full result of a symbolic execution.
#[derive(Clone, Debug)]
pub struct SymbolicRun<T> {
    /// Max capped visits over all runs, `None` when no run survives.
    pub visits: Option<usize>,
    /// Frontier before phase `n`, for `n = 0 ..= phases`.
    pub frontiers: Vec<Vec<PhasePoint<T>>>,
    /// Block index chosen in each phase by one maximising run.
    pub chosen_blocks: Option<Vec<usize>>,
}

struct TracedPoint<T> {
    point: PhasePoint<T>,
    /// Index into the previous frontier and the block taken.
    parent: Option<(usize, usize)>,
}

/// Execute the word a phase at a time: each run picks exactly one block per
/// phase, needs counters at least the block's decrements, then gains its
/// increments; `+` blocks bump the visit count (capped). Equivalent to the
/// letter-level engine on the rendered word.
pub fn symbolic_run<T: Nat>(
    kind: MachineKind,
    word: &SymbolicWord<T>,
    phases: usize,
    cap: usize,
) -> Result<SymbolicRun<T>, WordError> {
    if word.counters != kind.counters() {
        return Err(WordError::CounterMismatch {
            kind,
            expected: kind.counters(),
            found: word.counters,
        });
    }
    word.validate()?;
    if phases > word.phases.len() {
        return Err(WordError::NotEnoughPhases {
            requested: phases,
            available: word.phases.len(),
        });
    }

    let mut frontiers: Vec<Vec<PhasePoint<T>>> = Vec::with_capacity(phases + 1);
    // History of traced frontiers for backtracking the chosen blocks.
    let mut history: Vec<Vec<TracedPoint<T>>> = Vec::with_capacity(phases + 1);
    history.push(vec![TracedPoint {
        point: PhasePoint {
            counters: vec![T::zero(); word.counters],
            visits: 0,
        },
        parent: None,
    }]);
    frontiers.push(history[0].iter().map(|t| t.point.clone()).collect());

    for n in 0..phases {
        let current = &history[n];
        let mut next: Vec<TracedPoint<T>> = Vec::new();
        for (pi, tp) in current.iter().enumerate() {
            'blocks: for (bi, block) in word.phases[n].iter().enumerate() {
                let mut counters = Vec::with_capacity(word.counters);
                for (c, d) in tp.point.counters.iter().zip(&block.dec) {
                    match c.checked_sub(d) {
                        Some(v) => counters.push(v),
                        None => continue 'blocks,
                    }
                }
                for (c, i) in counters.iter_mut().zip(&block.inc) {
                    *c = c.checked_add(i).expect("counter overflow");
                }
                let visits = match block.sign {
                    Sign::Plus => (tp.point.visits + 1).min(cap),
                    Sign::Minus => tp.point.visits,
                };
                next.push(TracedPoint {
                    point: PhasePoint { counters, visits },
                    parent: Some((pi, bi)),
                });
            }
        }
        let pruned = pareto_max_by(next, |tp| (tp.point.counters.as_slice(), tp.point.visits));
        frontiers.push(pruned.iter().map(|t| t.point.clone()).collect());
        history.push(pruned);
        if history[n + 1].is_empty() {
            return Ok(SymbolicRun {
                visits: None,
                frontiers,
                chosen_blocks: None,
            });
        }
    }

    let last = &history[phases];
    let best_idx = last
        .iter()
        .enumerate()
        .max_by_key(|(_, tp)| tp.point.visits)
        .map(|(i, _)| i)
        .expect("non-empty frontier");
    let visits = last[best_idx].point.visits;

    let mut blocks_rev = Vec::with_capacity(phases);
    let mut idx = best_idx;
    for n in (1..=phases).rev() {
        let (parent, block) = history[n][idx]
            .parent
            .expect("non-initial point has a parent");
        blocks_rev.push(block);
        idx = parent;
    }
    blocks_rev.reverse();

    Ok(SymbolicRun {
        visits: Some(visits),
        frontiers,
        chosen_blocks: Some(blocks_rev),
    })
}

/// Max capped accepting visits of the phase-level executor.
pub fn symbolic_max_visits<T: Nat>(
    kind: MachineKind,
    word: &SymbolicWord<T>,
    phases: usize,
    cap: usize,
) -> Result<Option<usize>, WordError> {
    Ok(symbolic_run(kind, word, phases, cap)?.visits)
}

// JSON wire format: integers as decimal strings so arbitrary precision
// survives the trip.
#[derive(Serialize, Deserialize)]
struct BlockRepr {
    sign: String,
    dec: Vec<String>,
    inc: Vec<String>,
}

impl<T: Nat> Serialize for Block<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BlockRepr {
            sign: self.sign.as_char().to_string(),
            dec: self.dec.iter().map(|v| v.to_string()).collect(),
            inc: self.inc.iter().map(|v| v.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Nat> Deserialize<'de> for Block<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = BlockRepr::deserialize(deserializer)?;
        let sign = match repr.sign.as_str() {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            other => {
                return Err(serde::de::Error::custom(format!(
                    "invalid sign {other:?} (expected \"+\" or \"-\")"
                )))
            }
        };
        let parse = |v: &Vec<String>| {
            v.iter()
                .map(|s| crate::scalar::parse_decimal::<T>(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(serde::de::Error::custom)
        };
        let dec = parse(&repr.dec)?;
        let inc = parse(&repr.inc)?;
        if dec.len() != inc.len() {
            return Err(serde::de::Error::custom("dec/inc arity mismatch"));
        }
        Ok(Block { sign, dec, inc })
    }
}

#[derive(Serialize, Deserialize)]
struct WordRepr<T: Nat> {
    counters: usize,
    #[serde(bound(serialize = "T: Nat", deserialize = "T: Nat"))]
    phases: Vec<Vec<Block<T>>>,
}

impl<T: Nat> Serialize for SymbolicWord<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WordRepr {
            counters: self.counters,
            phases: self.phases.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Nat> Deserialize<'de> for SymbolicWord<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = WordRepr::<T>::deserialize(deserializer)?;
        let word = SymbolicWord {
            counters: repr.counters,
            phases: repr.phases,
        };
        word.validate().map_err(serde::de::Error::custom)?;
        Ok(word)
    }
}
