//! Cross-validation suites: every suite pits an engine against an
//! independent oracle (or two engines against each other) over a seeded
//! corpus and produces a machine-readable [`Report`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde_json::{json, Value};

use crate::blocks::{
    symbolic_max_visits, symbolic_run, MachineKind, SymbolicRun, DEFAULT_LETTER_BUDGET,
};
use crate::encode::{embed_order, encode, FiniteOrder, TreeSet};
use crate::oracle::{branch_hits, max_branch_hits, max_good_steps};
use crate::report::{digest_of, CaseRecord, Report};
use crate::sample::{
    adversarial_tree_sets, all_linear_orders, all_tree_sets, random_linear_order, random_tree_set,
    rng_for,
};
use crate::tree::{binary_value, co_value, growth, infix_leq, infix_less, lex_leq, weight, Node};
use crate::vass::Vass;
use crate::BigNat;

/// The named verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Two-counter machine vs the branch-hit oracle.
    T1,
    /// One-counter machine vs the good-step oracle.
    T2,
    /// Symbolic vs letter-level vs brute-force engines on encoded words.
    Cross,
    /// Order and weight laws of the tree structure.
    Invariants,
    /// Linear-order embedding: isomorphism, depth law, continuity.
    Orders,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::T1,
        Suite::T2,
        Suite::Cross,
        Suite::Invariants,
        Suite::Orders,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::T1 => "t1",
            Suite::T2 => "t2",
            Suite::Cross => "cross",
            Suite::Invariants => "invariants",
            Suite::Orders => "orders",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "t1" => Ok(Suite::T1),
            "t2" => Ok(Suite::T2),
            "cross" => Ok(Suite::Cross),
            "invariants" => Ok(Suite::Invariants),
            "orders" => Ok(Suite::Orders),
            other => Err(format!(
                "unknown suite {other:?} (expected t1, t2, cross, invariants or orders)"
            )),
        }
    }
}

/// Scale knobs shared by the suites. The seed fully determines every
/// generated input.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub max_depth: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub letter_budget: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            max_depth: None,
            samples: None,
            seed: 1,
            letter_budget: DEFAULT_LETTER_BUDGET,
        }
    }
}

impl ExperimentConfig {
    fn to_json(&self, suite: &str) -> Value {
        json!({
            "suite": suite,
            "max_depth": self.max_depth,
            "samples": self.samples,
            "seed": self.seed,
            "letter_budget": self.letter_budget,
        })
    }
}

/// Run one suite to a finished report.
pub fn run(suite: Suite, cfg: &ExperimentConfig) -> Report {
    match suite {
        Suite::T1 => run_t_suite(MachineKind::A2, cfg),
        Suite::T2 => run_t_suite(MachineKind::A1, cfg),
        Suite::Cross => run_cross(cfg),
        Suite::Invariants => run_invariants(cfg),
        Suite::Orders => run_orders(cfg),
    }
}

fn tree_corpus(cfg: &ExperimentConfig, default_depth: usize) -> Vec<(String, TreeSet)> {
    let depth = cfg.max_depth.unwrap_or(default_depth);
    let samples = cfg.samples.unwrap_or(500);
    let mut corpus: Vec<(String, TreeSet)> = Vec::new();
    for (i, set) in all_tree_sets(2).into_iter().enumerate() {
        corpus.push((format!("exhaustive-{i:03}"), set));
    }
    for (name, set) in adversarial_tree_sets(depth) {
        corpus.push((format!("adversarial-{name}"), set));
    }
    for i in 0..samples {
        let mut rng = rng_for(cfg.seed, 0x1000 + i as u64);
        corpus.push((
            format!("random-{i:03}"),
            random_tree_set(depth, 0.5, &mut rng),
        ));
    }
    corpus
}

/// The engine-vs-oracle biconditional for one input at one phase count:
/// for every bound `K <= phases`, the machine attains `K` accepting visits
/// iff the combinatorial oracle value is at least `K`. On encoded words the
/// two maxima agree exactly, and the capped engine obeys the saturation law.
fn check_t_case(kind: MachineKind, label: &str, x: &TreeSet, phases: usize) -> CaseRecord {
    let input = json!({"tree": x, "phases": phases});
    let digest = digest_of(&input);
    let word = encode::<BigNat>(kind, x, phases).expect("phases bounded by corpus depth");

    let (oracle_value, witness, witness_ok) = match kind {
        MachineKind::A1 => {
            let (value, chain) = max_good_steps(x, phases).expect("phases in range");
            let ok = chain.check(x).is_ok()
                && chain.good_steps.len() == value
                && chain.nodes.len() == phases + 1;
            (value, json!({"chain": chain}), ok)
        }
        MachineKind::A2 => {
            let (value, branch) = max_branch_hits(x, phases).expect("phases in range");
            let ok = branch_hits(x, &branch) == value && branch.depth() == phases;
            (value, json!({"branch": branch}), ok)
        }
    };

    let engine_max = symbolic_max_visits(kind, &word, phases, phases).expect("well-formed word");
    let mut pass = witness_ok && engine_max == Some(oracle_value);
    for cap in 0..=phases {
        let capped = symbolic_max_visits(kind, &word, phases, cap).expect("well-formed word");
        let engine_reaches = matches!(capped, Some(v) if v >= cap);
        pass &= engine_reaches == (oracle_value >= cap);
        pass &= capped == engine_max.map(|v| v.min(cap));
    }

    CaseRecord {
        digest,
        label: format!("{label}/phases-{phases}"),
        engine: json!({"visits": engine_max}),
        oracle: json!({"value": oracle_value}),
        witness: Some(witness),
        pass,
        repro: (!pass).then_some(input),
    }
}

fn run_t_suite(kind: MachineKind, cfg: &ExperimentConfig) -> Report {
    let suite = match kind {
        MachineKind::A2 => Suite::T1,
        MachineKind::A1 => Suite::T2,
    };
    let start = Instant::now();
    let mut report = Report::new(suite.name(), cfg.to_json(suite.name()));
    for (label, x) in tree_corpus(cfg, 4) {
        for phases in 0..=x.depth() + 1 {
            report.push(check_t_case(kind, &label, &x, phases));
        }
    }
    report.finalize(start.elapsed().as_millis());
    report
}

/// Frontier law of the two-counter machine on encoded words: before phase
/// `n` every point's counters are `(b(v), b'(v))` for some level-`n` node
/// `v`, so in particular they sum to `2^n - 1`.
pub fn two_counter_frontier_law(run: &SymbolicRun<BigNat>) -> bool {
    run.frontiers.iter().enumerate().all(|(n, frontier)| {
        frontier.iter().all(|point| {
            let total = point.counters[0].clone() + point.counters[1].clone();
            if total + BigNat::from(1u8) != (BigNat::from(1u8) << n) {
                return false;
            }
            match point.counters[0].to_u64_digits().first().copied() {
                Some(b) if n < 64 => {
                    let v = Node::from_level_index(n, b);
                    binary_value::<BigNat>(&v) == point.counters[0]
                        && co_value::<BigNat>(&v) == point.counters[1]
                }
                None => {
                    let v = Node::from_level_index(n, 0);
                    co_value::<BigNat>(&v) == point.counters[1]
                }
                _ => false,
            }
        })
    })
}

fn cross_depth_counts(samples: usize, max_depth: usize) -> Vec<usize> {
    // Rendered words grow steeply with depth, so deep cases are sampled
    // sparsely: weight 2^(max-d), at least four cases per depth.
    let weights: Vec<usize> = (0..=max_depth).map(|d| 1 << (max_depth - d)).collect();
    let total: usize = weights.iter().sum();
    weights
        .iter()
        .map(|w| (samples * w / total).max(4))
        .collect()
}

fn check_cross_case(
    kind: MachineKind,
    label: &str,
    x: &TreeSet,
    machine: &Vass,
    budget: usize,
) -> CaseRecord {
    let phases = x.depth() + 1;
    let input = json!({"tree": x, "phases": phases, "automaton": kind.to_string()});
    let digest = digest_of(&input);
    let word = encode::<BigNat>(kind, x, phases).expect("phases bounded by depth");

    let mut pass = true;
    let mut failure: Option<String> = None;

    let run = symbolic_run(kind, &word, phases, phases).expect("well-formed word");
    let symbolic = run.visits;
    if kind == MachineKind::A2 && !two_counter_frontier_law(&run) {
        pass = false;
        failure = Some("two-counter frontier law violated".into());
    }

    let letters = match word.render(phases, budget) {
        Ok(letters) => letters,
        Err(e) => {
            return CaseRecord {
                digest,
                label: label.to_string(),
                engine: json!({"symbolic": symbolic}),
                oracle: json!({"error": e.to_string()}),
                witness: None,
                pass: false,
                repro: Some(input),
            }
        }
    };

    let letter_full = machine
        .max_accepting_visits::<u64>(&letters, phases)
        .expect("letters from the fixed table");
    if letter_full != symbolic {
        pass = false;
        failure = Some(format!(
            "letter engine {letter_full:?} vs symbolic {symbolic:?}"
        ));
    }

    // Capping must bind identically on both engines; the tight cap is the
    // interesting extreme.
    let tight = phases.min(1);
    let letter_tight = machine
        .max_accepting_visits::<u64>(&letters, tight)
        .expect("letters from the fixed table");
    let symbolic_tight = symbolic_max_visits(kind, &word, phases, tight).expect("well-formed");
    if letter_tight != symbolic_tight || symbolic_tight != symbolic.map(|v| v.min(tight)) {
        pass = false;
        failure = Some("cap saturation mismatch".into());
    }
    for cap in 0..=phases {
        let capped = symbolic_max_visits(kind, &word, phases, cap).expect("well-formed");
        if capped != symbolic.map(|v| v.min(cap)) {
            pass = false;
            failure = Some(format!("symbolic cap law fails at {cap}"));
        }
    }

    let brute = if x.depth() <= 2 {
        // Short words are cheap enough to compare the engines at every cap
        // and against plain run enumeration.
        for cap in 0..=phases {
            let letter_cap = machine
                .max_accepting_visits::<u64>(&letters, cap)
                .expect("letters from the fixed table");
            let symbolic_cap = symbolic_max_visits(kind, &word, phases, cap).expect("well-formed");
            if letter_cap != symbolic_cap {
                pass = false;
                failure = Some(format!("engines disagree at cap {cap}"));
            }
        }
        let value = machine
            .brute_force_visits::<u64>(&letters, phases)
            .expect("tiny words enumerate");
        if value != letter_full {
            pass = false;
            failure = Some(format!("brute force {value:?} vs letters {letter_full:?}"));
        }
        Some(value)
    } else {
        None
    };

    CaseRecord {
        digest,
        label: label.to_string(),
        engine: json!({"symbolic": symbolic, "letters": letter_full, "letters_len": letters.len()}),
        oracle: json!({"brute": brute, "failure": failure}),
        witness: None,
        pass,
        repro: (!pass).then_some(input),
    }
}

fn run_cross(cfg: &ExperimentConfig) -> Report {
    let start = Instant::now();
    let mut report = Report::new(Suite::Cross.name(), cfg.to_json(Suite::Cross.name()));
    for (kind, default_cap) in [(MachineKind::A1, 4), (MachineKind::A2, 6)] {
        let machine = kind.build();
        let max_depth = cfg.max_depth.unwrap_or(default_cap).min(default_cap);
        let samples = cfg.samples.unwrap_or(200);
        let counts = cross_depth_counts(samples, max_depth);
        let mut stream = match kind {
            MachineKind::A1 => 0x2000u64,
            MachineKind::A2 => 0x3000u64,
        };
        for (depth, &count) in counts.iter().enumerate() {
            for i in 0..count {
                stream += 1;
                let mut rng = rng_for(cfg.seed, stream);
                let x = random_tree_set(depth, 0.5, &mut rng);
                let label = format!("{kind}/depth-{depth}/random-{i:03}");
                report.push(check_cross_case(
                    kind,
                    &label,
                    &x,
                    &machine,
                    cfg.letter_budget,
                ));
            }
        }
        for (name, x) in adversarial_tree_sets(max_depth) {
            let label = format!("{kind}/depth-{max_depth}/adversarial-{name}");
            report.push(check_cross_case(
                kind,
                &label,
                &x,
                &machine,
                cfg.letter_budget,
            ));
        }
    }
    report.finalize(start.elapsed().as_millis());
    report
}

fn law_record(label: &str, checked: usize, violations: usize, detail: Value) -> CaseRecord {
    let input = json!({"law": label});
    CaseRecord {
        digest: digest_of(&input),
        label: label.to_string(),
        engine: json!({"checked": checked}),
        oracle: json!({"violations": violations}),
        witness: None,
        pass: violations == 0,
        repro: (violations > 0).then_some(detail),
    }
}

fn run_invariants(cfg: &ExperimentConfig) -> Report {
    let start = Instant::now();
    let mut report = Report::new(
        Suite::Invariants.name(),
        cfg.to_json(Suite::Invariants.name()),
    );
    let max_level = cfg.max_depth.unwrap_or(10);

    // Weight order mirrors the infix order on every level.
    let mut checked = 0;
    let mut violations = 0;
    let mut detail = json!(null);
    for n in 0..=max_level {
        let level = Node::level(n);
        let weights: Vec<BigNat> = level.iter().map(weight).collect();
        for (i, u) in level.iter().enumerate() {
            for (j, v) in level.iter().enumerate() {
                checked += 1;
                if infix_leq(u, v) != (weights[i] <= weights[j]) {
                    violations += 1;
                    detail = json!({"u": u, "v": v});
                }
            }
        }
    }
    report.push(law_record(
        "weight-mirrors-infix",
        checked,
        violations,
        detail,
    ));

    // Weight plus the previous budget never exceeds the level budget.
    let mut checked = 0;
    let mut violations = 0;
    let mut detail = json!(null);
    for n in 0..=max_level {
        let budget: BigNat = growth(n as i64);
        let prev: BigNat = growth(n as i64 - 1);
        for v in Node::level(n) {
            checked += 1;
            if weight::<BigNat>(&v) + prev.clone() > budget {
                violations += 1;
                detail = json!({"v": v});
            }
        }
    }
    report.push(law_record("weight-budget", checked, violations, detail));

    // Lexicographic and infix orders coincide on equal depth.
    let mut checked = 0;
    let mut violations = 0;
    let mut detail = json!(null);
    for n in 0..=max_level {
        let level = Node::level(n);
        for u in &level {
            for v in &level {
                checked += 1;
                if lex_leq(u, v) != infix_leq(u, v) {
                    violations += 1;
                    detail = json!({"u": u, "v": v});
                }
            }
        }
    }
    report.push(law_record(
        "lex-infix-coincidence",
        checked,
        violations,
        detail,
    ));

    // Binary value and its complement are level bijections that reverse
    // each other.
    let mut checked = 0;
    let mut violations = 0;
    let mut detail = json!(null);
    for n in 0..=max_level {
        let level = Node::level(n);
        let bs: Vec<u64> = level.iter().map(binary_value).collect();
        let cs: Vec<u64> = level.iter().map(co_value).collect();
        let mut seen_b = bs.clone();
        let mut seen_c = cs.clone();
        seen_b.sort_unstable();
        seen_c.sort_unstable();
        let expect: Vec<u64> = (0..1u64 << n).collect();
        checked += 1;
        if seen_b != expect || seen_c != expect {
            violations += 1;
            detail = json!({"level": n});
        }
        for i in 0..level.len() {
            for j in 0..level.len() {
                if i == j {
                    continue;
                }
                checked += 1;
                let swapped = (bs[i] < bs[j] && cs[i] > cs[j]) || (bs[i] > bs[j] && cs[i] < cs[j]);
                if !swapped {
                    violations += 1;
                    detail = json!({"u": level[i], "v": level[j]});
                }
            }
        }
    }
    report.push(law_record("value-bijections", checked, violations, detail));

    // The infix order is total on all nodes up to depth 8: sorting by it
    // yields ranks that agree with every pairwise comparison.
    let totality_depth = max_level.min(8);
    let mut all: Vec<Node> = (0..=totality_depth).flat_map(Node::level).collect();
    all.sort_by(|a, b| a.infix_cmp(b));
    let mut checked = 0;
    let mut violations = 0;
    let mut detail = json!(null);
    for (i, u) in all.iter().enumerate() {
        for (j, v) in all.iter().enumerate() {
            checked += 1;
            if infix_leq(u, v) != (i <= j) {
                violations += 1;
                detail = json!({"u": u, "v": v});
            }
        }
    }
    report.push(law_record("infix-totality", checked, violations, detail));

    // Density at desk scale: strictly ordered nodes of depth <= 6 have a
    // strictly intermediate node within two more levels.
    let shallow_depth = max_level.min(6);
    let shallow: Vec<Node> = (0..=shallow_depth).flat_map(Node::level).collect();
    let deep: Vec<Node> = (0..=shallow_depth + 2).flat_map(Node::level).collect();
    let mut checked = 0;
    let mut violations = 0;
    let mut detail = json!(null);
    for u in &shallow {
        for w in &shallow {
            if !infix_less(u, w) {
                continue;
            }
            checked += 1;
            let found = deep.iter().any(|z| infix_less(u, z) && infix_less(z, w));
            if !found {
                violations += 1;
                detail = json!({"u": u, "w": w});
            }
        }
    }
    report.push(law_record("infix-density", checked, violations, detail));

    report.finalize(start.elapsed().as_millis());
    report
}

fn embedding_ok(order: &FiniteOrder) -> bool {
    match embed_order(order) {
        Ok(emb) => {
            emb.nodes.len() == order.size()
                && emb.nodes.iter().enumerate().all(|(k, x)| {
                    x.depth() == k
                        && emb
                            .nodes
                            .iter()
                            .enumerate()
                            .all(|(j, y)| infix_leq(x, y) == order.leq(k, j))
                })
                && emb.nodes.iter().all(|x| emb.tree.contains(x))
        }
        Err(_) => false,
    }
}

fn run_orders(cfg: &ExperimentConfig) -> Report {
    let start = Instant::now();
    let mut report = Report::new(Suite::Orders.name(), cfg.to_json(Suite::Orders.name()));

    // Exhaustive isomorphism check on the small sizes plus all 5040 orders
    // of size 7.
    for size in [1, 2, 3, 4, 5, 7] {
        let mut checked = 0;
        let mut violations = 0;
        let mut detail = json!(null);
        for order in all_linear_orders(size) {
            checked += 1;
            if !embedding_ok(&order) {
                violations += 1;
                detail = json!({"order": order});
            }
        }
        report.push(law_record(
            &format!("embedding-isomorphism-size-{size}"),
            checked,
            violations,
            detail,
        ));
    }

    // Continuity: edits outside the window {0..n}^2 leave the first n+1
    // nodes unchanged.
    let samples = cfg.samples.unwrap_or(200);
    let mut checked = 0;
    let mut violations = 0;
    let mut detail = json!(null);
    for i in 0..samples {
        let mut rng = rng_for(cfg.seed, 0x4000 + i as u64);
        use rand::Rng;
        let size = rng.gen_range(2..=7);
        let order = random_linear_order(size, &mut rng);
        let window = rng.gen_range(0..size - 1);
        // Rebuild a ranking that keeps the relative order of 0..=window and
        // scatters the rest.
        let mut ranking: Vec<usize> = Vec::with_capacity(size);
        for elem in order_ranking(&order) {
            if elem <= window {
                ranking.push(elem);
            }
        }
        for elem in window + 1..size {
            let pos = rng.gen_range(0..=ranking.len());
            ranking.insert(pos, elem);
        }
        let edited = FiniteOrder::from_ranking(&ranking);
        checked += 1;
        let a = embed_order(&order).expect("embedding exists");
        let b = embed_order(&edited).expect("embedding exists");
        if a.nodes[..=window] != b.nodes[..=window] {
            violations += 1;
            detail = json!({"order": order, "edited": edited, "window": window});
        }
    }
    report.push(law_record(
        "embedding-continuity",
        checked,
        violations,
        detail,
    ));

    report.finalize(start.elapsed().as_millis());
    report
}

/// Elements sorted ascending by the order.
fn order_ranking(order: &FiniteOrder) -> Vec<usize> {
    let mut elems: Vec<usize> = (0..order.size()).collect();
    elems.sort_by(|&a, &b| {
        if order.leq(a, b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    elems
}

/// One benchmark row.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub family: String,
    pub phases: usize,
    pub blocks: usize,
    pub elapsed_ms: u128,
    pub visits: Option<usize>,
    pub max_counter_bits: u64,
}

/// Configuration for the timing runs.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub seed: u64,
    /// Phase counts for the symbolic engines (sparse deep words).
    pub symbolic_phases: Vec<usize>,
    /// Phase counts for the oracle dynamic programs (full tree sets).
    pub oracle_phases: Vec<usize>,
    pub branches: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 1,
            symbolic_phases: vec![0, 10, 20, 30, 40],
            oracle_phases: vec![4, 8, 12],
            branches: 8,
        }
    }
}

/// Time the symbolic engines on deep sparse words and the witness oracles
/// on full tree sets.
pub fn run_bench(cfg: &BenchConfig) -> Vec<BenchRow> {
    use crate::sample::sparse_branch_word;
    let mut rows = Vec::new();

    for kind in [MachineKind::A1, MachineKind::A2] {
        for &phases in &cfg.symbolic_phases {
            let mut rng = rng_for(cfg.seed, 0x5000 + phases as u64);
            let word = sparse_branch_word(kind, phases, cfg.branches, 0.6, &mut rng);
            let blocks = word.phases.iter().map(|p| p.len()).sum();
            let start = Instant::now();
            let run = symbolic_run(kind, &word, phases, phases).expect("well-formed word");
            let elapsed_ms = start.elapsed().as_millis();
            let max_counter_bits = run
                .frontiers
                .iter()
                .flat_map(|f| f.iter())
                .flat_map(|p| p.counters.iter())
                .map(|c| c.bits())
                .max()
                .unwrap_or(0);
            rows.push(BenchRow {
                family: format!("symbolic-{kind}"),
                phases,
                blocks,
                elapsed_ms,
                visits: run.visits,
                max_counter_bits,
            });
        }
    }

    for &phases in &cfg.oracle_phases {
        let mut rng = rng_for(cfg.seed, 0x6000 + phases as u64);
        let x = random_tree_set(phases, 0.5, &mut rng);

        let start = Instant::now();
        let (good, _) = max_good_steps(&x, phases).expect("phases in range");
        rows.push(BenchRow {
            family: "oracle-good-steps".into(),
            phases,
            blocks: x.tracked_nodes(),
            elapsed_ms: start.elapsed().as_millis(),
            visits: Some(good),
            max_counter_bits: 0,
        });

        let start = Instant::now();
        let (hits, _) = max_branch_hits(&x, phases).expect("phases in range");
        rows.push(BenchRow {
            family: "oracle-branch-hits".into(),
            phases,
            blocks: x.tracked_nodes(),
            elapsed_ms: start.elapsed().as_millis(),
            visits: Some(hits),
            max_counter_bits: 0,
        });
    }

    rows
}

/// Render benchmark rows as CSV.
pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("family,phases,blocks,elapsed_ms,visits,max_counter_bits\n");
    for r in rows {
        let visits = r.visits.map_or(String::from("none"), |v| v.to_string());
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.family, r.phases, r.blocks, r.elapsed_ms, visits, r.max_counter_bits
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ExperimentConfig {
        ExperimentConfig {
            max_depth: Some(3),
            samples: Some(8),
            seed: 7,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn t_suites_pass_at_smoke_scale() {
        for suite in [Suite::T1, Suite::T2] {
            let report = run(suite, &tiny());
            assert!(report.all_passed(), "{}", report.to_json_string());
            assert!(report.cases.len() > 500);
        }
    }

    #[test]
    fn cross_suite_passes_at_smoke_scale() {
        let cfg = ExperimentConfig {
            max_depth: Some(3),
            samples: Some(12),
            seed: 7,
            ..ExperimentConfig::default()
        };
        let report = run(Suite::Cross, &cfg);
        assert!(report.all_passed(), "{}", report.to_json_string());
    }

    #[test]
    fn invariants_pass_at_reduced_depth() {
        let cfg = ExperimentConfig {
            max_depth: Some(6),
            ..ExperimentConfig::default()
        };
        let report = run(Suite::Invariants, &cfg);
        assert!(report.all_passed(), "{}", report.to_json_string());
        assert_eq!(report.cases.len(), 6);
    }

    #[test]
    fn orders_pass_at_smoke_scale() {
        let cfg = ExperimentConfig {
            samples: Some(25),
            seed: 3,
            ..ExperimentConfig::default()
        };
        let report = run(Suite::Orders, &cfg);
        assert!(report.all_passed(), "{}", report.to_json_string());
    }

    #[test]
    fn reports_are_deterministic_up_to_timing() {
        let a = run(Suite::T2, &tiny());
        let b = run(Suite::T2, &tiny());
        assert_eq!(a.timeless_json(), b.timeless_json());
    }

    #[test]
    fn bench_emits_csv() {
        let cfg = BenchConfig {
            symbolic_phases: vec![0, 6],
            oracle_phases: vec![4],
            ..BenchConfig::default()
        };
        let rows = run_bench(&cfg);
        let csv = bench_csv(&rows);
        assert!(csv.starts_with("family,phases,"));
        assert_eq!(csv.lines().count(), 1 + rows.len());
        assert!(rows
            .iter()
            .any(|r| r.family == "symbolic-a1" && r.phases == 0));
    }
}
