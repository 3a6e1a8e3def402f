//! Letter-level Büchi VASS and bounded-prefix run exploration.
//!
//! Acceptance over a finite word prefix is truncated to the maximal number
//! of accepting-state visits over all runs that read the whole prefix,
//! counted at every position including the initial configuration and capped
//! at a query bound. Exploration is breadth-synchronous: one frontier of
//! search points per word position, kept an antichain under the simulation
//! order (same state, componentwise smaller-or-equal counters, no more
//! accepting visits).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use smallvec::SmallVec;
use thiserror::Error;

use crate::scalar::{from_u64, Nat};

/// Counter vector; inline up to the two counters the block machines use.
pub type Counters<T> = SmallVec<[T; 2]>;

/// Index of a state inside its automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// One transition: reading `letter` in `from` adds `effect` to the counters
/// and moves to `to`. It is applicable only if every counter stays
/// non-negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: StateId,
    pub letter: char,
    pub effect: Vec<i64>,
    pub to: StateId,
}

/// A Büchi VASS over single-character letters.
#[derive(Clone, Debug)]
pub struct Vass {
    counters: usize,
    alphabet: BTreeSet<char>,
    state_names: Vec<String>,
    initial: StateId,
    accepting: Vec<bool>,
    transitions: Vec<Transition>,
    outgoing: HashMap<(usize, char), Vec<usize>>,
}

impl Vass {
    /// Empty automaton; the first added state becomes the initial state
    /// unless [`Vass::set_initial`] overrides it.
    pub fn new(counters: usize, alphabet: impl IntoIterator<Item = char>) -> Self {
        Vass {
            counters,
            alphabet: alphabet.into_iter().collect(),
            state_names: Vec::new(),
            initial: StateId(0),
            accepting: Vec::new(),
            transitions: Vec::new(),
            outgoing: HashMap::new(),
        }
    }

    pub fn add_state(&mut self, name: &str) -> StateId {
        self.state_names.push(name.to_string());
        self.accepting.push(false);
        StateId(self.state_names.len() - 1)
    }

    pub fn set_initial(&mut self, q: StateId) {
        assert!(q.0 < self.state_names.len(), "unknown state");
        self.initial = q;
    }

    pub fn mark_accepting(&mut self, q: StateId) {
        self.accepting[q.0] = true;
    }

    pub fn add_transition(&mut self, from: StateId, letter: char, effect: &[i64], to: StateId) {
        assert!(from.0 < self.state_names.len() && to.0 < self.state_names.len());
        assert!(
            self.alphabet.contains(&letter),
            "letter {letter:?} not in alphabet"
        );
        assert_eq!(effect.len(), self.counters, "effect arity mismatch");
        self.transitions.push(Transition {
            from,
            letter,
            effect: effect.to_vec(),
            to,
        });
        self.outgoing
            .entry((from.0, letter))
            .or_default()
            .push(self.transitions.len() - 1);
    }

    pub fn counters(&self) -> usize {
        self.counters
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name).map(StateId)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q.0]
    }

    pub fn accepting_states(&self) -> Vec<StateId> {
        (0..self.state_names.len())
            .filter(|&i| self.accepting[i])
            .map(StateId)
            .collect()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transitions_from(&self, q: StateId, letter: char) -> impl Iterator<Item = &Transition> {
        self.outgoing
            .get(&(q.0, letter))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&i| &self.transitions[i])
    }

    fn check_word(&self, word: &str) -> Result<(), VassError> {
        for (position, letter) in word.chars().enumerate() {
            if !self.alphabet.contains(&letter) {
                return Err(VassError::UnknownLetter { letter, position });
            }
        }
        Ok(())
    }

    /// Flat (state, letter) -> transition indices table for the hot loop.
    fn dense_index(&self) -> (Vec<char>, Vec<Vec<usize>>) {
        let letters: Vec<char> = self.alphabet.iter().copied().collect();
        let mut table = vec![Vec::new(); self.state_names.len() * letters.len()];
        for (ti, t) in self.transitions.iter().enumerate() {
            let li = letters.binary_search(&t.letter).expect("validated letter");
            table[t.from.0 * letters.len() + li].push(ti);
        }
        (letters, table)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VassError {
    #[error("unknown letter {letter:?} at position {position}")]
    UnknownLetter { letter: char, position: usize },
    #[error("run enumeration exceeded its budget; the word is too branchy to brute-force")]
    EnumerationBudget,
}

/// Linked trace of word positions at which an accepting state was entered.
#[derive(Debug)]
struct VisitTrace {
    position: usize,
    prev: Option<Rc<VisitTrace>>,
}

fn trace_positions(trace: &Option<Rc<VisitTrace>>) -> Vec<usize> {
    let mut out = Vec::new();
    let mut cur = trace.as_ref();
    while let Some(t) = cur {
        out.push(t.position);
        cur = t.prev.as_ref();
    }
    out.reverse();
    out
}

/// A configuration paired with its capped accepting-visit count.
#[derive(Clone, Debug)]
pub struct SearchPoint<T> {
    pub state: StateId,
    pub counters: Counters<T>,
    pub visits: usize,
    trace: Option<Rc<VisitTrace>>,
}

impl<T: Nat> SearchPoint<T> {
    pub fn new(state: StateId, counters: impl IntoIterator<Item = T>, visits: usize) -> Self {
        SearchPoint {
            state,
            counters: counters.into_iter().collect(),
            visits,
            trace: None,
        }
    }

    /// Positions where this point's best-known run visited an accepting
    /// state (only populated when tracking was requested).
    pub fn accepting_positions(&self) -> Vec<usize> {
        trace_positions(&self.trace)
    }
}

impl<T: PartialEq> PartialEq for SearchPoint<T> {
    fn eq(&self, other: &Self) -> bool {
        self.state == other.state && self.visits == other.visits && self.counters == other.counters
    }
}

impl<T: Eq> Eq for SearchPoint<T> {}

/// `a` simulates `b`: same state, componentwise at least the counters, at
/// least the visits.
fn simulates<T: Nat>(a: &SearchPoint<T>, b: &SearchPoint<T>) -> bool {
    a.state == b.state
        && a.visits >= b.visits
        && a.counters
            .iter()
            .zip(b.counters.iter())
            .all(|(x, y)| x >= y)
}

/// Insert a candidate into an antichain, dropping whichever side is
/// dominated (a candidate equal to a present point is dropped).
fn insert_into_antichain<T: Nat>(points: &mut Vec<SearchPoint<T>>, cand: SearchPoint<T>) {
    let mut i = 0;
    while i < points.len() {
        if points[i].state == cand.state {
            if simulates(&points[i], &cand) {
                return;
            }
            if simulates(&cand, &points[i]) {
                points.swap_remove(i);
                continue;
            }
        }
        i += 1;
    }
    points.push(cand);
}

/// Keep only the maximal items of `items` under the product order
/// (coordinates componentwise, then the score); exact duplicates collapse
/// to one representative. `coords` extracts the counter vector and the
/// score from an item.
pub(crate) fn pareto_max_by<T: Nat, X>(
    items: Vec<X>,
    coords: impl Fn(&X) -> (&[T], usize),
) -> Vec<X> {
    let n = items.len();
    if n <= 1 {
        return items;
    }
    let dim = coords(&items[0]).0.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Sort descending so that a dominator precedes everything it dominates.
    order.sort_by(|&a, &b| {
        let (ca, va) = coords(&items[a]);
        let (cb, vb) = coords(&items[b]);
        cb.cmp(ca).then(vb.cmp(&va))
    });

    let mut keep = vec![false; n];
    match dim {
        0 => {
            // Only the best score survives.
            keep[order[0]] = true;
        }
        1 => {
            // Scan by decreasing counter; a point survives iff its score
            // strictly improves on everything with a larger-or-equal counter.
            let mut best: Option<usize> = None;
            for &i in &order {
                let (_, v) = coords(&items[i]);
                if best.is_none_or(|b| v > b) {
                    keep[i] = true;
                    best = Some(v);
                }
            }
        }
        2 => {
            // Skyline on (second counter, score) while sweeping the first
            // counter downwards: keys ascending, scores strictly descending.
            let mut skyline: BTreeMap<T, usize> = BTreeMap::new();
            for &i in &order {
                let (c, v) = coords(&items[i]);
                let c2 = &c[1];
                let dominated = skyline
                    .range(c2.clone()..)
                    .next()
                    .is_some_and(|(_, &sv)| sv >= v);
                if dominated {
                    continue;
                }
                keep[i] = true;
                while let Some((k, &sv)) = skyline.range(..=c2.clone()).next_back() {
                    if sv <= v {
                        let k = k.clone();
                        skyline.remove(&k);
                    } else {
                        break;
                    }
                }
                skyline.insert(c2.clone(), v);
            }
        }
        _ => {
            // Pairwise fallback for higher dimensions.
            for (pos, &i) in order.iter().enumerate() {
                let (ci, vi) = coords(&items[i]);
                let dominated = order[..pos].iter().any(|&j| {
                    if !keep[j] {
                        return false;
                    }
                    let (cj, vj) = coords(&items[j]);
                    vj >= vi && cj.iter().zip(ci.iter()).all(|(a, b)| a >= b)
                });
                keep[i] = !dominated;
            }
        }
    }

    let mut out: Vec<X> = items
        .into_iter()
        .zip(keep)
        .filter_map(|(item, k)| k.then_some(item))
        .collect();
    out.sort_by(|a, b| {
        let (ca, va) = coords(a);
        let (cb, vb) = coords(b);
        ca.cmp(cb).then(va.cmp(&vb))
    });
    out
}

/// Prune a set of search points to its Pareto frontier under the simulation
/// order. Points in different states never compare.
pub fn prune<T: Nat>(points: Vec<SearchPoint<T>>) -> Vec<SearchPoint<T>> {
    let mut by_state: BTreeMap<usize, Vec<SearchPoint<T>>> = BTreeMap::new();
    for p in points {
        by_state.entry(p.state.0).or_default().push(p);
    }
    let mut out = Vec::new();
    for (_, group) in by_state {
        out.extend(pareto_max_by(group, |p| (p.counters.as_slice(), p.visits)));
    }
    out
}

/// An antichain of search points reachable after some input prefix.
#[derive(Clone, Debug)]
pub struct Frontier<T> {
    points: Vec<SearchPoint<T>>,
}

impl<T: Nat> Frontier<T> {
    pub fn from_points(points: Vec<SearchPoint<T>>) -> Self {
        Frontier {
            points: prune(points),
        }
    }

    pub fn points(&self) -> &[SearchPoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_visits(&self) -> Option<usize> {
        self.points.iter().map(|p| p.visits).max()
    }
}

/// Result of exploring one finite word: `visits` is `None` when no run
/// reads the entire word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exploration {
    pub visits: Option<usize>,
    /// Accepting positions of one maximising run, when tracking was on.
    pub accepting_positions: Option<Vec<usize>>,
}

impl Vass {
    /// The search point for the empty prefix. Position 0 counts as a visit
    /// when the initial state is accepting.
    pub fn initial_point<T: Nat>(&self, cap: usize) -> SearchPoint<T> {
        let visits = usize::from(self.is_accepting(self.initial)).min(cap);
        let mut point =
            SearchPoint::new(self.initial, (0..self.counters).map(|_| T::zero()), visits);
        if visits > 0 {
            point.trace = Some(Rc::new(VisitTrace {
                position: 0,
                prev: None,
            }));
        }
        point
    }

    fn apply<T: Nat>(
        &self,
        point: &SearchPoint<T>,
        t: &Transition,
        cap: usize,
        position: usize,
        track: bool,
    ) -> Option<SearchPoint<T>> {
        let mut counters = Counters::with_capacity(self.counters);
        for (c, &delta) in point.counters.iter().zip(&t.effect) {
            let next = if delta >= 0 {
                c.checked_add(&from_u64::<T>(delta as u64))?
            } else {
                c.checked_sub(&from_u64::<T>((-delta) as u64))?
            };
            counters.push(next);
        }
        let accepting = self.is_accepting(t.to);
        let visits = if accepting && point.visits < cap {
            point.visits + 1
        } else {
            point.visits
        };
        let trace = if track && accepting {
            Some(Rc::new(VisitTrace {
                position,
                prev: point.trace.clone(),
            }))
        } else if track {
            point.trace.clone()
        } else {
            None
        };
        Some(SearchPoint {
            state: t.to,
            counters,
            visits,
            trace,
        })
    }

    /// One successor per applicable transition over `letter`. The letter
    /// must belong to the alphabet.
    pub fn successors<T: Nat>(
        &self,
        point: &SearchPoint<T>,
        letter: char,
        cap: usize,
    ) -> Vec<SearchPoint<T>> {
        assert!(
            self.alphabet.contains(&letter),
            "letter {letter:?} not in alphabet"
        );
        self.transitions_from(point.state, letter)
            .filter_map(|t| self.apply(point, t, cap, 0, false))
            .collect()
    }

    /// Breadth-synchronous exploration of the whole word with per-position
    /// antichain maintenance.
    pub fn explore<T: Nat>(
        &self,
        word: &str,
        cap: usize,
        track: bool,
    ) -> Result<Exploration, VassError> {
        self.check_word(word)?;
        let (letters, table) = self.dense_index();
        let width = letters.len();
        // A letter is simple when every state has at most one transition
        // over it and no two states share a target. Applying such a letter
        // maps an antichain to an antichain (minus blocked points), so the
        // dominance scan can be skipped. On block words this covers every
        // letter except '<' and '>'.
        let simple: Vec<bool> = (0..width)
            .map(|li| {
                let mut targets = Vec::new();
                for s in 0..self.state_names.len() {
                    match table[s * width + li].as_slice() {
                        [] => {}
                        [ti] => targets.push(self.transitions[*ti].to.0),
                        _ => return false,
                    }
                }
                let len = targets.len();
                targets.sort_unstable();
                targets.dedup();
                targets.len() == len
            })
            .collect();
        let mut frontier: Vec<SearchPoint<T>> = vec![self.initial_point(cap)];
        let mut next: Vec<SearchPoint<T>> = Vec::new();
        for (i, letter) in word.chars().enumerate() {
            let li = letters.binary_search(&letter).expect("validated letter");
            next.clear();
            if simple[li] {
                for point in &frontier {
                    if let [ti] = table[point.state.0 * width + li].as_slice() {
                        if let Some(succ) =
                            self.apply(point, &self.transitions[*ti], cap, i + 1, track)
                        {
                            next.push(succ);
                        }
                    }
                }
            } else {
                for point in &frontier {
                    for &ti in &table[point.state.0 * width + li] {
                        if let Some(succ) =
                            self.apply(point, &self.transitions[ti], cap, i + 1, track)
                        {
                            insert_into_antichain(&mut next, succ);
                        }
                    }
                }
            }
            std::mem::swap(&mut frontier, &mut next);
            if frontier.is_empty() {
                return Ok(Exploration {
                    visits: None,
                    accepting_positions: None,
                });
            }
        }
        let best = frontier
            .iter()
            .max_by(|a, b| a.visits.cmp(&b.visits))
            .expect("frontier is non-empty");
        Ok(Exploration {
            visits: Some(best.visits),
            accepting_positions: track.then(|| best.accepting_positions()),
        })
    }

    /// Maximum number of accepting-state visits over all runs on `word`,
    /// capped at `cap`; `None` when no run reads the entire word.
    pub fn max_accepting_visits<T: Nat>(
        &self,
        word: &str,
        cap: usize,
    ) -> Result<Option<usize>, VassError> {
        Ok(self.explore::<T>(word, cap, false)?.visits)
    }

    /// Independent oracle: plain depth-first enumeration of all runs, no
    /// pruning. Same contract as [`Vass::max_accepting_visits`]. Intended
    /// for short words with small branching; gives up with
    /// [`VassError::EnumerationBudget`] beyond an internal step budget.
    pub fn brute_force_visits<T: Nat>(
        &self,
        word: &str,
        cap: usize,
    ) -> Result<Option<usize>, VassError> {
        const BUDGET: u64 = 50_000_000;
        self.check_word(word)?;
        let letters: Vec<char> = word.chars().collect();
        let mut best: Option<usize> = None;
        let mut steps: u64 = 0;
        let mut counters = vec![T::zero(); self.counters];
        let initial_visits = usize::from(self.is_accepting(self.initial)).min(cap);
        self.brute_rec(
            &letters,
            0,
            self.initial,
            &mut counters,
            initial_visits,
            cap,
            &mut best,
            &mut steps,
            BUDGET,
        )?;
        Ok(best)
    }

    #[allow(clippy::too_many_arguments)]
    fn brute_rec<T: Nat>(
        &self,
        letters: &[char],
        pos: usize,
        state: StateId,
        counters: &mut Vec<T>,
        visits: usize,
        cap: usize,
        best: &mut Option<usize>,
        steps: &mut u64,
        budget: u64,
    ) -> Result<(), VassError> {
        *steps += 1;
        if *steps > budget {
            return Err(VassError::EnumerationBudget);
        }
        if pos == letters.len() {
            *best = Some((*best).map_or(visits, |b| b.max(visits)));
            return Ok(());
        }
        let indices: Vec<usize> = self
            .outgoing
            .get(&(state.0, letters[pos]))
            .cloned()
            .unwrap_or_default();
        for ti in indices {
            let effect = self.transitions[ti].effect.clone();
            let to = self.transitions[ti].to;
            let (ok, applied) = apply_in_place(counters, &effect);
            if ok {
                let bump = usize::from(self.is_accepting(to) && visits < cap);
                self.brute_rec(
                    letters,
                    pos + 1,
                    to,
                    counters,
                    visits + bump,
                    cap,
                    best,
                    steps,
                    budget,
                )?;
            }
            undo_in_place(counters, &effect, applied);
        }
        Ok(())
    }

    /// All complete runs over the word as state sequences (including the
    /// initial state). Fails with [`VassError::EnumerationBudget`] when more
    /// than `max_runs` complete runs exist.
    pub fn enumerate_runs<T: Nat>(
        &self,
        word: &str,
        max_runs: usize,
    ) -> Result<Vec<Vec<StateId>>, VassError> {
        self.check_word(word)?;
        let letters: Vec<char> = word.chars().collect();
        let mut runs = Vec::new();
        let mut path = vec![self.initial];
        let mut counters = vec![T::zero(); self.counters];
        self.enum_rec(&letters, 0, &mut counters, &mut path, &mut runs, max_runs)?;
        Ok(runs)
    }

    fn enum_rec<T: Nat>(
        &self,
        letters: &[char],
        pos: usize,
        counters: &mut Vec<T>,
        path: &mut Vec<StateId>,
        runs: &mut Vec<Vec<StateId>>,
        max_runs: usize,
    ) -> Result<(), VassError> {
        if pos == letters.len() {
            if runs.len() >= max_runs {
                return Err(VassError::EnumerationBudget);
            }
            runs.push(path.clone());
            return Ok(());
        }
        let state = *path.last().expect("path starts at the initial state");
        let indices: Vec<usize> = self
            .outgoing
            .get(&(state.0, letters[pos]))
            .cloned()
            .unwrap_or_default();
        for ti in indices {
            let effect = self.transitions[ti].effect.clone();
            let to = self.transitions[ti].to;
            let (ok, applied) = apply_in_place(counters, &effect);
            if ok {
                path.push(to);
                self.enum_rec(letters, pos + 1, counters, path, runs, max_runs)?;
                path.pop();
            }
            undo_in_place(counters, &effect, applied);
        }
        Ok(())
    }
}

/// Apply an effect vector in place; returns whether it stayed non-negative
/// and how many components were touched (for undoing).
fn apply_in_place<T: Nat>(counters: &mut [T], effect: &[i64]) -> (bool, usize) {
    let mut applied = 0;
    for (c, &delta) in counters.iter_mut().zip(effect) {
        let next = if delta >= 0 {
            c.checked_add(&from_u64::<T>(delta as u64))
        } else {
            c.checked_sub(&from_u64::<T>((-delta) as u64))
        };
        match next {
            Some(v) => {
                *c = v;
                applied += 1;
            }
            None => return (false, applied),
        }
    }
    (true, applied)
}

fn undo_in_place<T: Nat>(counters: &mut [T], effect: &[i64], applied: usize) {
    for (c, &delta) in counters.iter_mut().zip(effect).take(applied) {
        if delta >= 0 {
            *c = c.checked_sub(&from_u64::<T>(delta as u64)).expect("undo");
        } else {
            *c = c
                .checked_add(&from_u64::<T>((-delta) as u64))
                .expect("undo");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_vass, random_word, rng_for, RandomVassSpec};

    fn point(state: usize, counters: &[u64], visits: usize) -> SearchPoint<u64> {
        SearchPoint::new(StateId(state), counters.iter().copied(), visits)
    }

    /// Reference prune: quadratic pairwise dominance.
    fn prune_pairwise(points: Vec<SearchPoint<u64>>) -> Vec<SearchPoint<u64>> {
        let mut keep = Vec::new();
        'outer: for (i, p) in points.iter().enumerate() {
            for (j, q) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let q_dominates = simulates(q, p);
                let p_dominates = simulates(p, q);
                if q_dominates && (!p_dominates || j < i) {
                    continue 'outer;
                }
            }
            keep.push(p.clone());
        }
        keep.sort_by(|a, b| {
            (a.state.0, a.counters.as_slice(), a.visits).cmp(&(
                b.state.0,
                b.counters.as_slice(),
                b.visits,
            ))
        });
        keep
    }

    #[test]
    fn single_loop_successor() {
        let mut vass = Vass::new(1, ['a']);
        let q = vass.add_state("q");
        vass.mark_accepting(q);
        vass.add_transition(q, 'a', &[1], q);
        let succ = vass.successors(&point(0, &[0], 0), 'a', 5);
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].counters.as_slice(), [1]);
        assert_eq!(succ[0].visits, 1);
    }

    #[test]
    fn blocked_decrement_has_no_successor() {
        let mut vass = Vass::new(1, ['a']);
        let q = vass.add_state("q");
        vass.add_transition(q, 'a', &[-1], q);
        assert!(vass.successors(&point(0, &[0], 0), 'a', 5).is_empty());
        assert_eq!(vass.max_accepting_visits::<u64>("a", 5), Ok(None));
    }

    #[test]
    fn prune_examples() {
        // Full dominance.
        let out = prune(vec![point(0, &[2], 1), point(0, &[1], 0)]);
        assert_eq!(out, vec![point(0, &[2], 1)]);
        // Incomparable via the visit count.
        let out = prune(vec![point(0, &[2], 0), point(0, &[1], 1)]);
        assert_eq!(out.len(), 2);
        // Componentwise incomparable counters.
        let out = prune(vec![point(0, &[3, 0], 0), point(0, &[0, 3], 0)]);
        assert_eq!(out.len(), 2);
        // Different states never compare.
        let out = prune(vec![point(0, &[1], 0), point(1, &[2], 1)]);
        assert_eq!(out.len(), 2);
        // Duplicates collapse.
        let out = prune(vec![point(0, &[1], 1), point(0, &[1], 1)]);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn prune_matches_pairwise_reference() {
        let mut rng = rng_for(41, 0);
        use rand::Rng;
        for dim in 1..=3usize {
            for _ in 0..300 {
                let n = rng.gen_range(0..20);
                let points: Vec<SearchPoint<u64>> = (0..n)
                    .map(|_| {
                        let state = rng.gen_range(0..3);
                        let counters: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..5)).collect();
                        point(state, &counters, rng.gen_range(0..4))
                    })
                    .collect();
                let fast = prune(points.clone());
                let slow = prune_pairwise(points.clone());
                assert_eq!(fast, slow, "dim {dim}: {points:?}");
                // Insertion-based maintenance agrees as well.
                let mut incremental: Vec<SearchPoint<u64>> = Vec::new();
                for p in points {
                    insert_into_antichain(&mut incremental, p);
                }
                let mut incremental = prune(incremental);
                incremental.sort_by(|a, b| {
                    (a.state.0, a.counters.as_slice(), a.visits).cmp(&(
                        b.state.0,
                        b.counters.as_slice(),
                        b.visits,
                    ))
                });
                assert_eq!(incremental, slow);
            }
        }
    }

    #[test]
    fn deterministic_vass_counts_its_single_run() {
        let mut vass = Vass::new(1, ['a', 'b']);
        let q0 = vass.add_state("q0");
        let q1 = vass.add_state("q1");
        vass.mark_accepting(q1);
        vass.add_transition(q0, 'a', &[1], q1);
        vass.add_transition(q1, 'a', &[0], q0);
        vass.add_transition(q1, 'b', &[-1], q1);
        for (word, expect) in [
            ("a", Some(1)),
            ("ab", Some(2)),
            ("aa", Some(1)),
            ("abb", None),
            ("b", None),
        ] {
            assert_eq!(vass.max_accepting_visits::<u64>(word, 9), Ok(expect));
            assert_eq!(vass.brute_force_visits::<u64>(word, 9), Ok(expect));
        }
    }

    #[test]
    fn empty_word_counts_the_initial_position() {
        let mut plain = Vass::new(1, ['a']);
        plain.add_state("q");
        assert_eq!(plain.max_accepting_visits::<u64>("", 3), Ok(Some(0)));

        let mut accepting = Vass::new(1, ['a']);
        let q = accepting.add_state("q");
        accepting.mark_accepting(q);
        assert_eq!(accepting.max_accepting_visits::<u64>("", 3), Ok(Some(1)));
        assert_eq!(accepting.max_accepting_visits::<u64>("", 0), Ok(Some(0)));
        assert_eq!(accepting.brute_force_visits::<u64>("", 3), Ok(Some(1)));
    }

    #[test]
    fn unknown_letters_are_rejected() {
        let mut vass = Vass::new(1, ['a']);
        vass.add_state("q");
        assert_eq!(
            vass.max_accepting_visits::<u64>("ax", 1),
            Err(VassError::UnknownLetter {
                letter: 'x',
                position: 1
            })
        );
        assert_eq!(
            vass.brute_force_visits::<u64>("x", 1),
            Err(VassError::UnknownLetter {
                letter: 'x',
                position: 0
            })
        );
    }

    #[test]
    fn pruned_engine_matches_brute_force_on_random_instances() {
        let mut checked = 0;
        let mut stream = 0;
        while checked < 500 {
            stream += 1;
            let mut rng = rng_for(1009, stream);
            let vass = random_vass(&RandomVassSpec::default(), &mut rng);
            use rand::Rng;
            let len = rng.gen_range(0..=25);
            let word = random_word(&vass, len, &mut rng);
            let cap = rng.gen_range(0..=6);
            let brute = match vass.brute_force_visits::<u64>(&word, cap) {
                Ok(v) => v,
                Err(VassError::EnumerationBudget) => continue,
                Err(e) => panic!("{e}"),
            };
            let fast = vass.max_accepting_visits::<u64>(&word, cap).unwrap();
            assert_eq!(fast, brute, "word {word:?} cap {cap}");
            checked += 1;
        }
    }

    #[test]
    fn adding_a_transition_never_hurts() {
        use rand::Rng;
        for stream in 0..200 {
            let mut rng = rng_for(77, stream);
            let mut vass = random_vass(&RandomVassSpec::default(), &mut rng);
            let word = random_word(&vass, rng.gen_range(0..=20), &mut rng);
            let cap = 5;
            let before = vass.max_accepting_visits::<u64>(&word, cap).unwrap();
            let from = StateId(rng.gen_range(0..vass.state_count()));
            let to = StateId(rng.gen_range(0..vass.state_count()));
            let letters: Vec<char> = vass.alphabet().iter().copied().collect();
            let letter = letters[rng.gen_range(0..letters.len())];
            let effect: Vec<i64> = (0..vass.counters())
                .map(|_| rng.gen_range(-1..=1))
                .collect();
            vass.add_transition(from, letter, &effect, to);
            let after = vass.max_accepting_visits::<u64>(&word, cap).unwrap();
            let rank = |v: Option<usize>| v.map_or(-1i64, |x| x as i64);
            assert!(
                rank(after) >= rank(before),
                "before {before:?} after {after:?}"
            );
        }
    }

    #[test]
    fn tracked_positions_revalidate() {
        let mut vass = Vass::new(1, ['a', 'b']);
        let q0 = vass.add_state("q0");
        let q1 = vass.add_state("q1");
        vass.mark_accepting(q1);
        vass.add_transition(q0, 'a', &[1], q1);
        vass.add_transition(q1, 'a', &[0], q0);
        vass.add_transition(q1, 'b', &[-1], q1);
        let out = vass.explore::<u64>("ab", 9, true).unwrap();
        assert_eq!(out.visits, Some(2));
        assert_eq!(out.accepting_positions, Some(vec![1, 2]));
    }
}
