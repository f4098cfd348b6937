//! Exact generation of the rank-ordered word list `p(t)`, the counting
//! function `Q(q)`, the set of words with nonrepeating states, and an
//! exhaustive brute-force oracle.
//!
//! Ordering: words are compared by log-probability. Probabilities closer than
//! [`TIE_BAND`] in log space form a tie group: the group led by the most
//! probable remaining word `x` holds every remaining word with
//! `log Pr ≥ log Pr(x) − TIE_BAND`, and inside a group words are ordered by
//! length, then lexicographically by state sequence.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::chain::{ChainSpec, Word};
use crate::error::{Error, Result};

/// Width of a tie group in log space.
pub const TIE_BAND: f64 = 1e-12;

/// Default cap on heap pops per enumeration.
pub const DEFAULT_EXPANSION_CAP: u64 = 100_000_000;

/// Default cap on the size of the nonrepeating word set.
pub const DEFAULT_WORD_SET_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RankedWord {
    /// 1-based rank.
    pub rank: u64,
    pub word: Word,
}

impl RankedWord {
    pub fn log_prob(&self) -> f64 {
        self.word.log_prob
    }

    pub fn prob(&self) -> f64 {
        self.word.prob
    }
}

/// Deterministic order inside a tie group.
fn tie_order(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

const NO_PARENT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    parent: u32,
    state: u32,
}

#[derive(Debug, Clone, Copy)]
struct Item {
    log_prob: f64,
    prob: f64,
    node: u32,
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        self.log_prob
            .total_cmp(&other.log_prob)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Best-first stream of ranked words.
///
/// The frontier holds open prefixes and completed words keyed by
/// log-probability. A prefix bounds every completion, so a completed word at
/// the top of the heap is at least as probable as anything still hidden.
pub struct WordEnumerator<'a> {
    spec: &'a ChainSpec,
    /// `(successor, p)` per state.
    arcs: Vec<Vec<(usize, f64)>>,
    arena: Vec<Node>,
    heap: BinaryHeap<Item>,
    pending: VecDeque<RankedWord>,
    emitted: u64,
    pops: u64,
    cap: u64,
    band: f64,
    failed: bool,
}

impl<'a> WordEnumerator<'a> {
    pub fn new(spec: &'a ChainSpec) -> Self {
        Self::with_cap(spec, DEFAULT_EXPANSION_CAP)
    }

    pub fn with_cap(spec: &'a ChainSpec, cap: u64) -> Self {
        let arcs = (0..=spec.n())
            .map(|i| spec.successors(i).map(|j| (j, spec.prob(i, j))).collect())
            .collect();
        let mut e = WordEnumerator {
            spec,
            arcs,
            arena: Vec::new(),
            heap: BinaryHeap::new(),
            pending: VecDeque::new(),
            emitted: 0,
            pops: 0,
            cap,
            band: TIE_BAND,
            failed: false,
        };
        let a0 = spec.empty_word_probability();
        if a0 > 0.0 {
            e.push(NO_PARENT, 0, a0, a0.ln());
        }
        for s in spec.support() {
            let a = spec.initial(s);
            e.push(NO_PARENT, s, a, a.ln());
        }
        e
    }

    /// Heap pops performed so far.
    pub fn expansions(&self) -> u64 {
        self.pops
    }

    fn push(&mut self, parent: u32, state: usize, prob: f64, log_prob: f64) {
        let id = u32::try_from(self.arena.len()).expect("arena exceeds u32 indices");
        self.arena.push(Node {
            parent,
            state: state as u32,
        });
        self.heap.push(Item {
            log_prob,
            prob,
            node: id,
        });
    }

    fn pop(&mut self) -> Result<Option<Item>> {
        if self.heap.is_empty() {
            return Ok(None);
        }
        if self.pops >= self.cap {
            return Err(Error::ExpansionCap {
                cap: self.cap,
                words: self.emitted,
            });
        }
        self.pops += 1;
        Ok(self.heap.pop())
    }

    fn is_complete(&self, item: &Item) -> bool {
        self.arena[item.node as usize].state == 0
    }

    fn expand(&mut self, item: Item) {
        let state = self.arena[item.node as usize].state as usize;
        for k in 0..self.arcs[state].len() {
            let (j, p) = self.arcs[state][k];
            self.push(item.node, j, item.prob * p, item.log_prob + p.ln());
        }
    }

    fn states_of(&self, node: u32) -> Vec<usize> {
        let mut out = Vec::new();
        let mut at = node;
        while at != NO_PARENT {
            let n = self.arena[at as usize];
            out.push(n.state as usize);
            at = n.parent;
        }
        out.reverse();
        out
    }

    fn next_group(&mut self) -> Result<()> {
        let leader = loop {
            let Some(item) = self.pop()? else {
                return Ok(());
            };
            if self.is_complete(&item) {
                break item;
            }
            self.expand(item);
        };
        let floor = leader.log_prob - self.band;
        let mut group = vec![leader];
        while self.heap.peek().is_some_and(|top| top.log_prob >= floor) {
            let item = self.pop()?.expect("peeked");
            if self.is_complete(&item) {
                group.push(item);
            } else {
                self.expand(item);
            }
        }
        let mut words: Vec<Word> = group
            .into_iter()
            .map(|it| Word {
                states: self.states_of(it.node),
                prob: it.prob,
                log_prob: it.log_prob,
            })
            .collect();
        words.sort_by(|a, b| tie_order(&a.states, &b.states));
        for word in words {
            self.emitted += 1;
            self.pending.push_back(RankedWord {
                rank: self.emitted,
                word,
            });
        }
        Ok(())
    }

    /// Next word in rank order; `Ok(None)` when the word list is finite and
    /// exhausted.
    pub fn next_word(&mut self) -> Result<Option<RankedWord>> {
        if self.pending.is_empty() && !self.failed {
            if let Err(e) = self.next_group() {
                self.failed = true;
                return Err(e);
            }
        }
        Ok(self.pending.pop_front())
    }

    pub fn spec(&self) -> &ChainSpec {
        self.spec
    }
}

impl Iterator for WordEnumerator<'_> {
    type Item = Result<RankedWord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        self.next_word().transpose()
    }
}

/// Words emitted before the expansion cap stopped the enumeration.
#[derive(Debug)]
pub struct PartialEnumeration {
    pub words: Vec<RankedWord>,
    pub error: Error,
}

impl std::fmt::Display for PartialEnumeration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (after {} words)", self.error, self.words.len())
    }
}

impl std::error::Error for PartialEnumeration {}

/// The first `top` words in rank order (fewer if the list is finite).
pub fn enumerate_words(
    spec: &ChainSpec,
    top: usize,
    expansion_cap: u64,
) -> std::result::Result<Vec<RankedWord>, PartialEnumeration> {
    let mut out = Vec::with_capacity(top.min(1 << 20));
    let mut e = WordEnumerator::with_cap(spec, expansion_cap);
    while out.len() < top {
        match e.next_word() {
            Ok(Some(w)) => out.push(w),
            Ok(None) => break,
            Err(error) => return Err(PartialEnumeration { words: out, error }),
        }
    }
    Ok(out)
}

/// `(rank, ln p(rank))` for the first `top` ranks, without keeping words.
pub fn enumerate_log_probs(
    spec: &ChainSpec,
    top: usize,
    expansion_cap: u64,
) -> Result<Vec<(u64, f64)>> {
    let mut out = Vec::with_capacity(top.min(1 << 24));
    let mut e = WordEnumerator::with_cap(spec, expansion_cap);
    while out.len() < top {
        match e.next_word()? {
            Some(w) => out.push((w.rank, w.word.log_prob)),
            None => break,
        }
    }
    Ok(out)
}

/// Exhaustive word list up to a length, for cross-checking.
#[derive(Debug, Clone)]
pub struct BruteForce {
    /// Every word inside the search bound, in rank order.
    pub words: Vec<RankedWord>,
    pub max_length: usize,
    /// Upper bound on the log-probability of any word outside the bound.
    pub horizon: f64,
}

impl BruteForce {
    /// Length of the rank prefix that no word outside the bound can disturb.
    pub fn certified_len(&self) -> usize {
        let mut end = 0;
        let mut i = 0;
        let w = &self.words;
        while i < w.len() {
            let leader = w[i].word.log_prob;
            if leader - TIE_BAND <= self.horizon {
                break;
            }
            let mut j = i + 1;
            while j < w.len() && w[j].word.log_prob >= leader - TIE_BAND {
                j += 1;
            }
            end = j;
            i = j;
        }
        end
    }
}

/// Every word with at most `max_length` transient states, by depth-first
/// generation followed by a full sort. Fails when more than `guard` words
/// would be produced.
pub fn brute_force_words(spec: &ChainSpec, max_length: usize, guard: usize) -> Result<BruteForce> {
    // (log-prob, prob, states)
    let mut found: Vec<(f64, f64, Vec<usize>)> = Vec::new();
    let a0 = spec.empty_word_probability();
    if a0 > 0.0 {
        found.push((a0.ln(), a0, vec![0]));
    }
    let mut horizon = f64::NEG_INFINITY;
    let mut stack: Vec<(Vec<usize>, f64, f64)> = Vec::new();
    for s in spec.support().into_iter().rev() {
        let a = spec.initial(s);
        if max_length == 0 {
            horizon = horizon.max(a.ln());
        } else {
            stack.push((vec![s], a.ln(), a));
        }
    }
    while let Some((path, lp, pr)) = stack.pop() {
        let last = *path.last().expect("nonempty");
        for j in spec.successors(last) {
            let step = spec.prob(last, j);
            let child = lp + step.ln();
            if j == 0 {
                if found.len() >= guard {
                    return Err(Error::BruteForceGuard { cap: guard });
                }
                let mut w = path.clone();
                w.push(0);
                found.push((child, pr * step, w));
            } else if path.len() < max_length {
                let mut p = path.clone();
                p.push(j);
                stack.push((p, child, pr * step));
            } else {
                horizon = horizon.max(child);
            }
        }
    }

    Ok(BruteForce {
        words: rank_found(found),
        max_length,
        horizon,
    })
}

/// Every word with log-probability at least `min_log_prob`, by depth-first
/// generation with pruning followed by a full sort. Words left out all lie
/// strictly below the threshold, so `horizon` is the threshold itself.
pub fn brute_force_above(spec: &ChainSpec, min_log_prob: f64, guard: usize) -> Result<BruteForce> {
    let mut found: Vec<(f64, f64, Vec<usize>)> = Vec::new();
    let a0 = spec.empty_word_probability();
    if a0 > 0.0 && a0.ln() >= min_log_prob {
        found.push((a0.ln(), a0, vec![0]));
    }
    let mut stack: Vec<(Vec<usize>, f64, f64)> = Vec::new();
    let mut max_length = 0;
    for s in spec.support().into_iter().rev() {
        let a = spec.initial(s);
        if a.ln() >= min_log_prob {
            stack.push((vec![s], a.ln(), a));
        }
    }
    while let Some((path, lp, pr)) = stack.pop() {
        let last = *path.last().expect("nonempty");
        for j in spec.successors(last) {
            let step = spec.prob(last, j);
            let child = lp + step.ln();
            if child < min_log_prob {
                continue;
            }
            if found.len() + stack.len() >= guard {
                return Err(Error::BruteForceGuard { cap: guard });
            }
            let mut w = path.clone();
            w.push(j);
            if j == 0 {
                max_length = max_length.max(path.len());
                found.push((child, pr * step, w));
            } else {
                stack.push((w, child, pr * step));
            }
        }
    }
    Ok(BruteForce {
        words: rank_found(found),
        max_length,
        horizon: min_log_prob,
    })
}

/// Sort `(log-prob, prob, states)` triples into ranked order.
fn rank_found(mut found: Vec<(f64, f64, Vec<usize>)>) -> Vec<RankedWord> {
    found.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut ordered = Vec::with_capacity(found.len());
    let mut i = 0;
    while i < found.len() {
        let floor = found[i].0 - TIE_BAND;
        let mut j = i + 1;
        while j < found.len() && found[j].0 >= floor {
            j += 1;
        }
        let mut group = found[i..j].to_vec();
        group.sort_by(|a, b| tie_order(&a.2, &b.2));
        ordered.extend(group);
        i = j;
    }
    ordered
        .into_iter()
        .enumerate()
        .map(|(k, (lp, prob, states))| RankedWord {
            rank: k as u64 + 1,
            word: Word {
                states,
                prob,
                log_prob: lp,
            },
        })
        .collect()
}

/// Number of words with at most `max_length` transient states (as a float,
/// since it grows exponentially).
pub fn count_words_up_to_length(spec: &ChainSpec, max_length: usize) -> f64 {
    let n = spec.n();
    let mut total = if spec.empty_word_probability() > 0.0 {
        1.0
    } else {
        0.0
    };
    let mut paths: Vec<f64> = (0..=n)
        .map(|i| {
            if i > 0 && spec.initial(i) > 0.0 {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for _ in 0..max_length {
        total += (1..=n)
            .filter(|&i| spec.prob(i, 0) > 0.0)
            .map(|i| paths[i])
            .sum::<f64>();
        let mut next = vec![0.0; n + 1];
        for i in 1..=n {
            if paths[i] == 0.0 {
                continue;
            }
            for j in 1..=n {
                if spec.prob(i, j) > 0.0 {
                    next[j] += paths[i];
                }
            }
        }
        paths = next;
    }
    total
}

/// `Q(q)`: the number of words with `Pr(w) ≥ q` (up to the tie band), by
/// depth-first search pruning every prefix below the threshold. The count of
/// words below `q` is infinite for any cyclic chain, so only this side is
/// offered.
pub fn count_q(spec: &ChainSpec, q: f64) -> Result<u64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold {q} not in (0, 1]"
        )));
    }
    count_q_log(spec, q.ln())
}

/// [`count_q`] with the threshold given as `ln q`, for thresholds below the
/// smallest positive float.
pub fn count_q_log(spec: &ChainSpec, log_q: f64) -> Result<u64> {
    if !(log_q <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "log threshold {log_q} not in (-inf, 0]"
        )));
    }
    let floor = log_q - TIE_BAND;
    let mut count = 0u64;
    let a0 = spec.empty_word_probability();
    if a0 > 0.0 && a0.ln() >= floor {
        count += 1;
    }
    let arcs: Vec<Vec<(usize, f64)>> = (0..=spec.n())
        .map(|i| {
            spec.successors(i)
                .map(|j| (j, spec.prob(i, j).ln()))
                .collect()
        })
        .collect();
    let mut stack: Vec<(usize, f64)> = spec
        .support()
        .into_iter()
        .map(|s| (s, spec.initial(s).ln()))
        .filter(|&(_, lp)| lp >= floor)
        .collect();
    while let Some((state, lp)) = stack.pop() {
        for &(j, step) in &arcs[state] {
            let child = lp + step;
            if child < floor {
                continue;
            }
            if j == 0 {
                count += 1;
            } else {
                stack.push((j, child));
            }
        }
    }
    Ok(count)
}

/// `W`: all words whose states do not repeat (simple paths from the initial
/// support to the absorbing state).
pub fn words_with_nonrepeating_states(spec: &ChainSpec, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = spec.n();
    let mut out = Vec::new();
    if spec.empty_word_probability() > 0.0 {
        out.push(vec![0]);
    }
    let mut on_path = vec![false; n + 1];
    for start in spec.support() {
        // iterative DFS: (path, next successor index)
        let succ: Vec<Vec<usize>> = (0..=n).map(|i| spec.successors(i).collect()).collect();
        let mut path = vec![start];
        let mut cursor = vec![0usize];
        on_path[start] = true;
        while let Some(pos) = cursor.last_mut() {
            let v = *path.last().expect("path");
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if w == 0 {
                    if out.len() >= cap {
                        return Err(Error::WordSetCap { cap });
                    }
                    let mut word = path.clone();
                    word.push(0);
                    out.push(word);
                } else if !on_path[w] {
                    on_path[w] = true;
                    path.push(w);
                    cursor.push(0);
                }
            } else {
                on_path[v] = false;
                path.pop();
                cursor.pop();
            }
        }
    }
    Ok(out)
}

/// `k(c)`: words of `W` passing through at least one state of the cycle.
pub fn k_of_cycle(words: &[Vec<usize>], cycle_states: &[usize]) -> usize {
    words
        .iter()
        .filter(|w| w.iter().any(|s| cycle_states.contains(s)))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::from_letter_probabilities;
    use crate::figures;

    fn probs(words: &[RankedWord]) -> Vec<f64> {
        words.iter().map(|w| w.prob()).collect()
    }

    #[test]
    fn half_letter_chain_is_geometric() {
        let spec = from_letter_probabilities(&[0.5, 0.5]).unwrap();
        let words = enumerate_words(&spec, 40, DEFAULT_EXPANSION_CAP).unwrap();
        for w in &words {
            assert_eq!(w.prob(), 0.5f64.powi(w.rank as i32));
            assert_eq!(w.word.len() as u64, w.rank);
        }
        let total: f64 = probs(&words).iter().sum();
        assert_eq!(total, 1.0 - 0.5f64.powi(40));
    }

    #[test]
    fn parallel_loops_pairs() {
        let words = enumerate_words(&figures::parallel_loops(), 8, DEFAULT_EXPANSION_CAP).unwrap();
        assert_eq!(
            probs(&words),
            vec![0.25, 0.25, 0.125, 0.125, 0.0625, 0.0625, 0.03125, 0.03125]
        );
        assert_eq!(words[0].word.states, vec![1, 0]);
        assert_eq!(words[1].word.states, vec![2, 0]);
    }

    #[test]
    fn two_cycle_from_state_one() {
        let spec = figures::two_cycle().with_initial(vec![1.0, 0.0]).unwrap();
        let words = enumerate_words(&spec, 30, DEFAULT_EXPANSION_CAP).unwrap();
        for w in &words {
            assert_eq!(w.prob(), 0.5f64.powi(w.rank as i32));
        }
        assert_eq!(words[1].word.states, vec![1, 2, 0]);
        assert_eq!(words[2].word.states, vec![1, 2, 1, 0]);
    }

    #[test]
    fn acyclic_list_is_finite() {
        let words = enumerate_words(&figures::acyclic(), 100, DEFAULT_EXPANSION_CAP).unwrap();
        let states: Vec<_> = words.iter().map(|w| w.word.states.clone()).collect();
        assert_eq!(states, vec![vec![2, 0], vec![1, 0], vec![1, 2, 0]]);
        let bf = brute_force_words(&figures::acyclic(), 2, 1000).unwrap();
        assert_eq!(bf.words, words);
    }

    #[test]
    fn brute_force_short_two_cycle() {
        let bf = brute_force_words(&figures::two_cycle(), 2, 1000).unwrap();
        let states: Vec<_> = bf.words.iter().map(|w| w.word.states.clone()).collect();
        assert_eq!(
            states,
            vec![vec![1, 0], vec![2, 0], vec![1, 2, 0], vec![2, 1, 0]]
        );
        assert!(matches!(
            brute_force_words(&figures::two_cycle(), 10, 5),
            Err(Error::BruteForceGuard { .. })
        ));
    }

    #[test]
    fn threshold_search_matches_enumeration() {
        let spec = figures::parallel_loops();
        let floor = (2f64.powi(-30)).ln() - 2.0 * TIE_BAND;
        let bf = brute_force_above(&spec, floor, 10_000).unwrap();
        assert_eq!(bf.words.len(), 58);
        assert_eq!(bf.certified_len(), 58);
        let words = enumerate_words(&spec, 58, DEFAULT_EXPANSION_CAP).unwrap();
        assert_eq!(words, bf.words);
        assert!(matches!(
            brute_force_above(&spec, floor, 10),
            Err(Error::BruteForceGuard { .. })
        ));
    }

    #[test]
    fn single_state_has_one_word() {
        let bf = brute_force_words(&figures::single_state(), 3, 100).unwrap();
        assert_eq!(bf.words.len(), 1);
        assert_eq!(bf.words[0].word.states, vec![1, 0]);
        assert_eq!(bf.words[0].prob(), 1.0);
    }

    #[test]
    fn empty_word_is_ranked_by_its_probability() {
        let spec = figures::parallel_loops()
            .with_initial(vec![0.3, 0.3])
            .unwrap();
        let words = enumerate_words(&spec, 3, DEFAULT_EXPANSION_CAP).unwrap();
        assert_eq!(words[0].word.states, vec![0]);
        assert!((words[0].prob() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn count_q_examples() {
        let spec = from_letter_probabilities(&[0.5, 0.5]).unwrap();
        assert_eq!(count_q(&spec, 0.125).unwrap(), 3);
        assert_eq!(count_q(&spec, 1.0).unwrap(), 0);
        assert_eq!(count_q(&figures::parallel_loops(), 0.25).unwrap(), 2);
        assert_eq!(count_q(&figures::single_state(), 1.0).unwrap(), 1);
        assert!(count_q(&spec, 0.0).is_err());
    }

    #[test]
    fn nonrepeating_words_and_k() {
        let e = figures::two_cycle();
        let w = words_with_nonrepeating_states(&e, 100).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(k_of_cycle(&w, &[1, 2]), 4);

        let e10 = e.with_initial(vec![1.0, 0.0]).unwrap();
        let w = words_with_nonrepeating_states(&e10, 100).unwrap();
        assert_eq!(w, vec![vec![1, 0], vec![1, 2, 0]]);
        assert_eq!(k_of_cycle(&w, &[1, 2]), 2);

        let d = words_with_nonrepeating_states(&figures::parallel_loops(), 100).unwrap();
        assert_eq!(k_of_cycle(&d, &[1]), 1);
        assert_eq!(k_of_cycle(&d, &[2]), 1);
    }

    #[test]
    fn word_count_dp_matches_brute_force() {
        for (_, spec) in figures::bundled() {
            for len in 0..8 {
                let bf = brute_force_words(&spec, len, 1 << 20).unwrap();
                assert_eq!(count_words_up_to_length(&spec, len), bf.words.len() as f64);
            }
        }
    }

    #[test]
    fn expansion_cap_returns_partial_words() {
        let err = enumerate_words(&figures::shared_vertex(), 1000, 50).unwrap_err();
        assert!(matches!(err.error, Error::ExpansionCap { cap: 50, .. }));
        assert!(!err.words.is_empty());
        assert!(err.words.len() < 1000);
    }
}
