//! Dependency, pair and triple graphs of a matrix family, plus the graph
//! algorithms behind every decision procedure: strongly connected
//! components, breadth-first reachability and longest paths in DAGs.
//!
//! Node identifiers are dense `usize` indices. Pair and triple graphs encode
//! tuples into a single index via [`pair_index`] and [`triple_index`].

use crate::matrix::MatrixSet;
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// Raised when an operation that requires an acyclic input meets a cycle.
    #[error("cycle detected in a graph required to be acyclic")]
    CycleDetected,
}

/// Minimal read-only digraph interface. `successors` must return targets in
/// ascending order; every traversal in this crate relies on that for
/// determinism.
pub trait Digraph {
    fn node_count(&self) -> usize;
    fn successors(&self, node: usize) -> Vec<usize>;
}

/// Digraph with one positive integer weight per ordered node pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    n: usize,
    adj: Vec<Vec<(usize, BigUint)>>, // sorted by target
}

impl WeightedDigraph {
    pub fn new(node_count: usize) -> Self {
        WeightedDigraph {
            n: node_count,
            adj: vec![Vec::new(); node_count],
        }
    }

    /// Inserts the edge, keeping the adjacency list sorted. At most one edge
    /// per ordered pair: re-inserting replaces the weight.
    pub fn add_edge(&mut self, from: usize, to: usize, weight: BigUint) {
        debug_assert!(!weight.is_zero(), "edge weights are positive");
        let list = &mut self.adj[from];
        match list.binary_search_by_key(&to, |(t, _)| *t) {
            Ok(pos) => list[pos].1 = weight,
            Err(pos) => list.insert(pos, (to, weight)),
        }
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<&BigUint> {
        let list = &self.adj[from];
        list.binary_search_by_key(&to, |(t, _)| *t)
            .ok()
            .map(|pos| &list[pos].1)
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.weight(from, to).is_some()
    }

    pub fn out_edges(&self, from: usize) -> &[(usize, BigUint)] {
        &self.adj[from]
    }

    /// All edges in (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &BigUint)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |(v, w)| (u, *v, w)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

impl Digraph for WeightedDigraph {
    fn node_count(&self) -> usize {
        self.n
    }

    fn successors(&self, node: usize) -> Vec<usize> {
        self.adj[node].iter().map(|(t, _)| *t).collect()
    }
}

/// Unweighted digraph whose edges carry the set of matrix indices realizing
/// them. The labels let a graph path be decoded back into a matrix word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledDigraph {
    n: usize,
    adj: Vec<Vec<(usize, Vec<usize>)>>, // sorted by target, labels ascending
}

impl LabelledDigraph {
    pub fn new(node_count: usize) -> Self {
        LabelledDigraph {
            n: node_count,
            adj: vec![Vec::new(); node_count],
        }
    }

    pub fn add_label(&mut self, from: usize, to: usize, label: usize) {
        let list = &mut self.adj[from];
        match list.binary_search_by_key(&to, |(t, _)| *t) {
            Ok(pos) => {
                let labels = &mut list[pos].1;
                if let Err(ins) = labels.binary_search(&label) {
                    labels.insert(ins, label);
                }
            }
            Err(pos) => list.insert(pos, (to, vec![label])),
        }
    }

    pub fn labels(&self, from: usize, to: usize) -> Option<&[usize]> {
        let list = &self.adj[from];
        list.binary_search_by_key(&to, |(t, _)| *t)
            .ok()
            .map(|pos| list[pos].1.as_slice())
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.labels(from, to).is_some()
    }

    pub fn out_edges(&self, from: usize) -> &[(usize, Vec<usize>)] {
        &self.adj[from]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

impl Digraph for LabelledDigraph {
    fn node_count(&self) -> usize {
        self.n
    }

    fn successors(&self, node: usize) -> Vec<usize> {
        self.adj[node].iter().map(|(t, _)| *t).collect()
    }
}

/// Partition into strongly connected components.
///
/// Components are listed in a topological order: a node in a later component
/// never reaches a node in an earlier one. A singleton component is trivial
/// unless its node has a self-loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub trivial: Vec<bool>,
}

impl SccDecomposition {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn has_nontrivial(&self) -> bool {
        self.trivial.iter().any(|t| !t)
    }

    /// True when the node lies in a nontrivial component, i.e. on some cycle.
    pub fn on_cycle(&self, node: usize) -> bool {
        !self.trivial[self.component_of[node]]
    }
}

/// Iterative Tarjan; linear in nodes plus edges, no recursion so product
/// graphs with tens of thousands of nodes are safe.
pub fn scc<G: Digraph + ?Sized>(graph: &G) -> SccDecomposition {
    let n = graph.node_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next = 0usize;
    let mut comps_rev: Vec<Vec<usize>> = Vec::new();

    struct Frame {
        node: usize,
        succs: Vec<usize>,
        cursor: usize,
    }
    let mut call: Vec<Frame> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push(Frame {
            node: root,
            succs: graph.successors(root),
            cursor: 0,
        });
        while let Some(frame) = call.last_mut() {
            let u = frame.node;
            if frame.cursor < frame.succs.len() {
                let v = frame.succs[frame.cursor];
                frame.cursor += 1;
                if disc[v] == usize::MAX {
                    disc[v] = next;
                    low[v] = next;
                    next += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push(Frame {
                        node: v,
                        succs: graph.successors(v),
                        cursor: 0,
                    });
                } else if on_stack[v] {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                if low[u] == disc[u] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == u {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps_rev.push(comp);
                }
                let low_u = low[u];
                call.pop();
                if let Some(parent) = call.last() {
                    let p = parent.node;
                    low[p] = low[p].min(low_u);
                }
            }
        }
    }

    comps_rev.reverse(); // Tarjan emits sinks first; reverse for topological order
    let mut component_of = vec![0usize; n];
    let mut trivial = Vec::with_capacity(comps_rev.len());
    for (cid, comp) in comps_rev.iter().enumerate() {
        for &v in comp {
            component_of[v] = cid;
        }
        let is_trivial = comp.len() == 1 && {
            let v = comp[0];
            graph.successors(v).binary_search(&v).is_err()
        };
        trivial.push(is_trivial);
    }
    SccDecomposition {
        component_of,
        components: comps_rev,
        trivial,
    }
}

/// Shortest path as a node sequence, breadth-first with neighbors scanned in
/// ascending order. With `allow_empty_path`, `from == to` yields the
/// single-node path even when no cycle exists; without it, `from == to`
/// demands a genuine closed walk of at least one edge.
pub fn reachable<G: Digraph + ?Sized>(
    graph: &G,
    from: usize,
    to: usize,
    allow_empty_path: bool,
) -> Option<Vec<usize>> {
    if allow_empty_path && from == to {
        return Some(vec![from]);
    }
    let n = graph.node_count();
    let mut parent = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    let mut queue = VecDeque::new();
    for v in graph.successors(from) {
        if !visited[v] {
            visited[v] = true;
            parent[v] = from;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![u];
            let mut cur = u;
            loop {
                let p = parent[cur];
                path.push(p);
                if p == from {
                    break;
                }
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for v in graph.successors(u) {
            if !visited[v] {
                visited[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

/// Longest path (by node count) in a DAG, ties broken toward the
/// lexicographically smallest node sequence.
pub fn longest_path<G: Digraph + ?Sized>(graph: &G) -> Result<Vec<usize>, GraphError> {
    let n = graph.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    // Kahn's algorithm doubles as the cycle check.
    let mut indegree = vec![0usize; n];
    for u in 0..n {
        for v in graph.successors(u) {
            indegree[v] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&u| indegree[u] == 0).collect();
    let mut topo = Vec::with_capacity(n);
    while let Some(u) = queue.pop_front() {
        topo.push(u);
        for v in graph.successors(u) {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    if topo.len() < n {
        return Err(GraphError::CycleDetected);
    }

    // length[u] = node count of the longest path starting at u
    let mut length = vec![1usize; n];
    for &u in topo.iter().rev() {
        for v in graph.successors(u) {
            length[u] = length[u].max(1 + length[v]);
        }
    }
    let best = *length.iter().max().expect("nonempty graph");
    let start = (0..n)
        .find(|&u| length[u] == best)
        .expect("some node attains the maximum");

    let mut path = vec![start];
    let mut cur = start;
    while length[cur] > 1 {
        let want = length[cur] - 1;
        let next = graph
            .successors(cur)
            .into_iter()
            .find(|&v| length[v] == want)
            .expect("successor continuing the longest path");
        path.push(next);
        cur = next;
    }
    Ok(path)
}

/// Dependency graph of a family: edge i -> j when some member has a positive
/// (i, j) entry, weighted by the largest such entry.
pub fn dependency_graph(set: &MatrixSet) -> WeightedDigraph {
    let n = set.dim();
    let mut g = WeightedDigraph::new(n);
    for i in 0..n {
        for j in 0..n {
            let mut best: Option<&BigUint> = None;
            for m in set.iter() {
                let e = m.entry(i, j);
                if !e.is_zero() && best.map_or(true, |b| e > b) {
                    best = Some(e);
                }
            }
            if let Some(w) = best {
                g.add_edge(i, j, w.clone());
            }
        }
    }
    g
}

/// Per-matrix row supports: `supports[m][i]` lists the columns j with a
/// positive (i, j) entry in matrix m, ascending.
fn row_supports(set: &MatrixSet) -> Vec<Vec<Vec<usize>>> {
    let n = set.dim();
    set.iter()
        .map(|m| {
            (0..n)
                .map(|i| (0..n).filter(|&j| !m.entry(i, j).is_zero()).collect())
                .collect()
        })
        .collect()
}

pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

pub fn pair_of_index(n: usize, index: usize) -> (usize, usize) {
    (index / n, index % n)
}

pub fn triple_index(n: usize, i: usize, j: usize, k: usize) -> usize {
    (i * n + j) * n + k
}

pub fn triple_of_index(n: usize, index: usize) -> (usize, usize, usize) {
    (index / (n * n), (index / n) % n, index % n)
}

/// Pair graph on n^2 nodes: (i, i') -> (j, j') when one matrix realizes both
/// coordinate transitions.
pub fn pair_graph(set: &MatrixSet) -> LabelledDigraph {
    let n = set.dim();
    let sup = row_supports(set);
    let mut g = LabelledDigraph::new(n * n);
    for i in 0..n {
        for i2 in 0..n {
            let src = pair_index(n, i, i2);
            let mut targets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (m, sup_m) in sup.iter().enumerate() {
                for &j in &sup_m[i] {
                    for &j2 in &sup_m[i2] {
                        targets.entry(pair_index(n, j, j2)).or_default().push(m);
                    }
                }
            }
            for (dst, labels) in targets {
                for m in labels {
                    g.add_label(src, dst, m);
                }
            }
        }
    }
    g
}

/// Triple graph explored lazily: successors are generated on demand, so
/// reachability queries never materialize all n^3 nodes' edges at once.
pub struct TripleGraph<'a> {
    n: usize,
    supports: Vec<Vec<Vec<usize>>>,
    _set: &'a MatrixSet,
}

impl<'a> TripleGraph<'a> {
    pub fn new(set: &'a MatrixSet) -> Self {
        TripleGraph {
            n: set.dim(),
            supports: row_supports(set),
            _set: set,
        }
    }

    /// Materializes the full labelled graph; intended for small dimensions.
    pub fn materialize(&self) -> LabelledDigraph {
        let n = self.n;
        let mut g = LabelledDigraph::new(n * n * n);
        for src in 0..n * n * n {
            let (a, b, c) = triple_of_index(n, src);
            for (m, sup_m) in self.supports.iter().enumerate() {
                for &x in &sup_m[a] {
                    for &y in &sup_m[b] {
                        for &z in &sup_m[c] {
                            g.add_label(src, triple_index(n, x, y, z), m);
                        }
                    }
                }
            }
        }
        g
    }
}

impl Digraph for TripleGraph<'_> {
    fn node_count(&self) -> usize {
        self.n * self.n * self.n
    }

    fn successors(&self, node: usize) -> Vec<usize> {
        let n = self.n;
        let (a, b, c) = triple_of_index(n, node);
        let mut out = Vec::new();
        for sup_m in &self.supports {
            for &x in &sup_m[a] {
                for &y in &sup_m[b] {
                    for &z in &sup_m[c] {
                        out.push(triple_index(n, x, y, z));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Triple graph on n^3 nodes, materialized.
pub fn triple_graph(set: &MatrixSet) -> LabelledDigraph {
    TripleGraph::new(set).materialize()
}

/// Permutation that brings every matrix of the family to block
/// upper-triangular form, blocks being the strongly connected components of
/// the dependency graph in topological order. Entry p of the result is the
/// original node placed at position p.
pub fn block_triangular_permutation(set: &MatrixSet) -> Vec<usize> {
    let g = dependency_graph(set);
    let dec = scc(&g);
    let mut perm = Vec::with_capacity(set.dim());
    for comp in &dec.components {
        perm.extend_from_slice(comp); // nodes within a component stay ascending
    }
    perm
}
