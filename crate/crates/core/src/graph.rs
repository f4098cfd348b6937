//! Arc graphs of a chain, strongly connected components, the condensation
//! and the simple-cycle catalog.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};

/// Default cap on the number of enumerated simple cycles.
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

/// Directed graph whose arcs are the strictly positive matrix entries.
///
/// Vertices are dense indices `0..len()`; `states[v]` is the chain state a
/// vertex stands for, so subgraphs keep their original numbering.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    states: Vec<usize>,
    succ: Vec<Vec<usize>>,
    weight: Vec<Vec<f64>>,
}

impl DirectedGraph {
    /// Graph of a square nonnegative matrix; vertex `i` is state `i`.
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let states: Vec<usize> = (0..m.nrows()).collect();
        Self::from_entries(states, |i, j| m[(i, j)])
    }

    fn from_entries(states: Vec<usize>, entry: impl Fn(usize, usize) -> f64) -> Self {
        let k = states.len();
        let mut succ = vec![Vec::new(); k];
        let mut weight = vec![Vec::new(); k];
        for u in 0..k {
            for v in 0..k {
                let p = entry(states[u], states[v]);
                if p > 0.0 {
                    succ[u].push(v);
                    weight[u].push(p);
                }
            }
        }
        DirectedGraph {
            states,
            succ,
            weight,
        }
    }

    /// `G0`: all states including the absorbing one.
    pub fn full(spec: &ChainSpec) -> Self {
        Self::from_entries((0..=spec.n()).collect(), |i, j| spec.prob(i, j))
    }

    /// `G`: the subgraph generated by the transient states.
    pub fn transient(spec: &ChainSpec) -> Self {
        Self::from_entries((1..=spec.n()).collect(), |i, j| spec.prob(i, j))
    }

    /// Subgraph generated by the given chain states.
    pub fn induced(spec: &ChainSpec, states: &[usize]) -> Self {
        Self::from_entries(states.to_vec(), |i, j| spec.prob(i, j))
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Chain state of vertex `v`.
    pub fn state(&self, v: usize) -> usize {
        self.states[v]
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn arc_weight(&self, u: usize, v: usize) -> Option<f64> {
        self.succ[u]
            .binary_search(&v)
            .ok()
            .map(|k| self.weight[u][k])
    }

    pub fn arc_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
    }
}

/// Structural type of a strongly connected component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentTag {
    /// A single vertex without a self-loop.
    Trivial,
    /// Exactly one simple cycle (a self-loop or a ring).
    Cycle,
    /// Contains a vertex lying on two different simple cycles.
    Complex,
}

impl ComponentTag {
    pub fn has_cycle(self) -> bool {
        !matches!(self, ComponentTag::Trivial)
    }
}

/// Strongly connected components and the acyclic graph between them.
///
/// Component ids are in reverse topological order: every arc of `dag`
/// goes from a larger id to a smaller one.
#[derive(Debug, Clone, PartialEq)]
pub struct Condensation {
    pub component: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    pub dag: Vec<Vec<usize>>,
    pub tags: Vec<ComponentTag>,
}

impl Condensation {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Components reachable from `c` (including `c`).
    pub fn descendants(&self, c: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![c];
        seen[c] = true;
        while let Some(x) = stack.pop() {
            for &y in &self.dag[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Components with no incoming arcs.
    pub fn sources(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.len()];
        for out in &self.dag {
            for &y in out {
                has_in[y] = true;
            }
        }
        (0..self.len()).filter(|&c| !has_in[c]).collect()
    }

    /// Components with no outgoing arcs.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| self.dag[c].is_empty())
            .collect()
    }

    /// True when some path of the condensation visits two marked components.
    pub fn path_meets_two(&self, marked: &[bool]) -> bool {
        (0..self.len()).filter(|&c| marked[c]).any(|c| {
            self.descendants(c)
                .iter()
                .enumerate()
                .any(|(d, &reach)| reach && d != c && marked[d])
        })
    }
}

/// Iterative Tarjan decomposition.
pub fn strongly_connected_components(g: &DirectedGraph) -> Condensation {
    let k = g.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; k];
    let mut low = vec![0; k];
    let mut on_stack = vec![false; k];
    let mut stack = Vec::new();
    let mut component = vec![UNSEEN; k];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..k {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = g.succ[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = members.len();
                let mut scc = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    component[w] = id;
                    scc.push(w);
                    if w == v {
                        break;
                    }
                }
                scc.sort_unstable();
                members.push(scc);
            }
        }
    }

    let mut dag = vec![Vec::new(); members.len()];
    let mut internal = vec![0usize; members.len()];
    for (u, v) in g.arcs() {
        let (cu, cv) = (component[u], component[v]);
        if cu == cv {
            internal[cu] += 1;
        } else {
            dag[cu].push(cv);
        }
    }
    for out in &mut dag {
        out.sort_unstable();
        out.dedup();
    }
    let tags = members
        .iter()
        .zip(&internal)
        .map(|(m, &arcs)| match (m.len(), arcs) {
            (_, 0) => ComponentTag::Trivial,
            (size, arcs) if arcs == size => ComponentTag::Cycle,
            _ => ComponentTag::Complex,
        })
        .collect();
    Condensation {
        component,
        members,
        dag,
        tags,
    }
}

/// A simple cycle as a sequence of chain states, with the product of its
/// arc probabilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cycle {
    pub states: Vec<usize>,
    pub weight: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CycleCatalog {
    pub cycles: Vec<Cycle>,
}

impl CycleCatalog {
    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    /// Cycle of maximal weight; the first one in catalog order on ties.
    pub fn heaviest(&self) -> Option<&Cycle> {
        self.cycles
            .iter()
            .fold(None, |best: Option<&Cycle>, c| match best {
                Some(b) if b.weight >= c.weight => Some(b),
                _ => Some(c),
            })
    }
}

/// Johnson's enumeration of elementary circuits, iterative form.
///
/// Each cycle starts at its smallest vertex; the catalog is sorted by that
/// vertex sequence. Fails once more than `cap` cycles are found.
pub fn simple_cycles(g: &DirectedGraph, cap: usize) -> Result<CycleCatalog> {
    let k = g.len();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let push = |c: Vec<usize>, found: &mut Vec<Vec<usize>>| -> Result<()> {
        if found.len() >= cap {
            return Err(Error::CycleCap { cap });
        }
        found.push(c);
        Ok(())
    };

    for v in 0..k {
        if g.arc_weight(v, v).is_some() {
            push(vec![v], &mut found)?;
        }
    }

    for start in 0..k {
        // Component of `start` in the subgraph induced by vertices >= start.
        let allowed: Vec<bool> = (0..k).map(|v| v >= start).collect();
        let comp = component_of(g, start, &allowed);
        if comp.iter().filter(|&&b| b).count() < 2 {
            continue;
        }
        let mut blocked = vec![false; k];
        let mut b_sets: Vec<Vec<usize>> = vec![Vec::new(); k];
        let mut closed = vec![false; k];
        let mut path = vec![start];
        blocked[start] = true;
        let nbrs = |v: usize| -> Vec<usize> {
            g.succ[v]
                .iter()
                .rev()
                .copied()
                .filter(|&w| comp[w] && w != v)
                .collect()
        };
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(start, nbrs(start))];
        while let Some((this, list)) = stack.last_mut() {
            let this = *this;
            if let Some(next) = list.pop() {
                if next == start {
                    push(path.clone(), &mut found)?;
                    for &p in &path {
                        closed[p] = true;
                    }
                } else if !blocked[next] {
                    path.push(next);
                    closed[next] = false;
                    blocked[next] = true;
                    stack.push((next, nbrs(next)));
                    continue;
                }
            }
            if stack.last().is_some_and(|(_, l)| l.is_empty()) {
                if closed[this] {
                    unblock(this, &mut blocked, &mut b_sets);
                } else {
                    for &w in &g.succ[this] {
                        if comp[w] && w != this && !b_sets[w].contains(&this) {
                            b_sets[w].push(this);
                        }
                    }
                }
                stack.pop();
                path.pop();
            }
        }
    }

    let mut cycles: Vec<Cycle> = found
        .into_iter()
        .map(|vs| {
            let weight = vs
                .iter()
                .zip(vs.iter().cycle().skip(1))
                .map(|(&u, &v)| g.arc_weight(u, v).expect("cycle arc"))
                .product();
            Cycle {
                states: vs.iter().map(|&v| g.states[v]).collect(),
                weight,
            }
        })
        .collect();
    cycles.sort_by(|a, b| a.states.cmp(&b.states));
    Ok(CycleCatalog { cycles })
}

fn unblock(v: usize, blocked: &mut [bool], b_sets: &mut [Vec<usize>]) {
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        if blocked[u] {
            blocked[u] = false;
            stack.append(&mut b_sets[u]);
        }
    }
}

/// Vertices in the strong component of `v` within the `allowed` subgraph.
fn component_of(g: &DirectedGraph, v: usize, allowed: &[bool]) -> Vec<bool> {
    let k = g.len();
    let mut fwd = vec![false; k];
    let mut stack = vec![v];
    fwd[v] = true;
    while let Some(u) = stack.pop() {
        for &w in &g.succ[u] {
            if allowed[w] && !fwd[w] {
                fwd[w] = true;
                stack.push(w);
            }
        }
    }
    let mut pred = vec![Vec::new(); k];
    for (u, w) in g.arcs() {
        if allowed[u] && allowed[w] {
            pred[w].push(u);
        }
    }
    let mut bwd = vec![false; k];
    stack.push(v);
    bwd[v] = true;
    while let Some(u) = stack.pop() {
        for &w in &pred[u] {
            if !bwd[w] {
                bwd[w] = true;
                stack.push(w);
            }
        }
    }
    (0..k).map(|u| fwd[u] && bwd[u]).collect()
}

/// Returns a chain state lying on two different simple cycles, if any.
///
/// Decided per component: a strongly connected component with more internal
/// arcs than vertices is not a single ring, and any of its vertices with
/// internal out-degree at least two starts two distinct cycles.
pub fn vertex_on_two_cycles(g: &DirectedGraph, cond: &Condensation) -> Option<usize> {
    cond.tags
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == ComponentTag::Complex)
        .filter_map(|(c, _)| {
            cond.members[c]
                .iter()
                .copied()
                .find(|&v| {
                    g.succ[v]
                        .iter()
                        .filter(|&&w| cond.component[w] == c)
                        .count()
                        >= 2
                })
                .map(|v| g.states[v])
        })
        .min()
}

/// True iff no component carrying a cycle can reach another such component.
pub fn paths_touch_at_most_one_cycle(cond: &Condensation) -> bool {
    let marked: Vec<bool> = cond.tags.iter().map(|t| t.has_cycle()).collect();
    !cond.path_meets_two(&marked)
}

/// Graphs and components of a chain restricted to the states reachable
/// from its initial support.
#[derive(Debug, Clone)]
pub struct GraphAnalysis {
    /// `G0` over all states.
    pub full: DirectedGraph,
    /// `G` over reachable transient states.
    pub transient: DirectedGraph,
    pub condensation: Condensation,
    /// Transient states ignored because they are never visited.
    pub ignored: Vec<usize>,
}

impl GraphAnalysis {
    pub fn new(spec: &ChainSpec) -> Self {
        let reachable = spec.reachable_states();
        let ignored = (1..=spec.n())
            .filter(|s| reachable.binary_search(s).is_err())
            .collect();
        let transient = DirectedGraph::induced(spec, &reachable);
        let condensation = strongly_connected_components(&transient);
        GraphAnalysis {
            full: DirectedGraph::full(spec),
            transient,
            condensation,
            ignored,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures;

    fn g(spec: &ChainSpec) -> DirectedGraph {
        DirectedGraph::transient(spec)
    }

    fn state_sets(g: &DirectedGraph, c: &Condensation) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = c
            .members
            .iter()
            .map(|m| m.iter().map(|&x| g.state(x)).collect())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn scc_examples() {
        let b = g(&figures::shared_vertex());
        assert_eq!(
            state_sets(&b, &strongly_connected_components(&b)),
            vec![vec![1, 2]]
        );

        let f2 = g(&figures::coupled_pairs());
        let c = strongly_connected_components(&f2);
        assert_eq!(state_sets(&f2, &c), vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(c.tags, vec![ComponentTag::Complex, ComponentTag::Complex]);

        let edgeless = DirectedGraph::from_matrix(&DMatrix::zeros(3, 3));
        let c = strongly_connected_components(&edgeless);
        assert_eq!(c.len(), 3);
        assert!(c.tags.iter().all(|&t| t == ComponentTag::Trivial));
    }

    #[test]
    fn scc_ids_are_reverse_topological() {
        let f2 = g(&figures::coupled_pairs());
        let c = strongly_connected_components(&f2);
        for (from, out) in c.dag.iter().enumerate() {
            for &to in out {
                assert!(to < from);
            }
        }
    }

    #[test]
    fn absorbing_state_is_unique_sink_of_g0() {
        for (_, spec) in figures::bundled() {
            let full = DirectedGraph::full(&spec);
            let c = strongly_connected_components(&full);
            assert_eq!(c.sinks(), vec![c.component[0]]);
        }
    }

    #[test]
    fn cycle_examples() {
        let b = simple_cycles(&g(&figures::shared_vertex()), DEFAULT_CYCLE_CAP).unwrap();
        let states: Vec<_> = b.cycles.iter().map(|c| c.states.clone()).collect();
        assert_eq!(states, vec![vec![1], vec![1, 2]]);

        let e = simple_cycles(&g(&figures::two_cycle()), DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(
            e.cycles,
            vec![Cycle {
                states: vec![1, 2],
                weight: 0.25
            }]
        );

        assert!(simple_cycles(&g(&figures::acyclic()), DEFAULT_CYCLE_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn complete_graph_cycle_count() {
        // K4 with loops: 4 loops + 6 two-cycles + 8 three-cycles + 6 four-cycles
        let m = DMatrix::from_element(4, 4, 0.25);
        let cat = simple_cycles(&DirectedGraph::from_matrix(&m), DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(cat.len(), 24);
        assert!(matches!(
            simple_cycles(&DirectedGraph::from_matrix(&m), 10),
            Err(Error::CycleCap { cap: 10 })
        ));
    }

    #[test]
    fn two_cycle_vertex() {
        let b = g(&figures::shared_vertex());
        assert_eq!(
            vertex_on_two_cycles(&b, &strongly_connected_components(&b)),
            Some(1)
        );
        let c = g(&figures::loops_in_series());
        assert_eq!(
            vertex_on_two_cycles(&c, &strongly_connected_components(&c)),
            None
        );
        let lp = g(&figures::loop_chain());
        assert_eq!(
            vertex_on_two_cycles(&lp, &strongly_connected_components(&lp)),
            None
        );
    }

    #[test]
    fn path_touches_cycles() {
        let check =
            |s: ChainSpec| paths_touch_at_most_one_cycle(&strongly_connected_components(&g(&s)));
        assert!(!check(figures::loops_in_series()));
        assert!(check(figures::parallel_loops()));
        assert!(check(figures::two_cycle()));
    }
}
