//! The decision procedures: four-way growth classification of a matrix
//! family, exact polynomial degree, and witness extraction.
//!
//! The pipeline decides, in order:
//!  1. dependency graph acyclic            -> products vanish (Zero, with t0);
//!  2. a diagonal entry >= 2 is reachable  -> exponential growth;
//!  3. no growth pair exists               -> products stay bounded;
//!  4. otherwise                           -> polynomial of exactly the
//!     longest chain length in the growth-pair DAG.
//!
//! Every positive verdict carries a witness that re-multiplies to a matrix
//! exhibiting the claimed entries, so results can be checked independently
//! of the graph machinery that produced them.

use crate::digraph::{
    dependency_graph, longest_path, pair_graph, pair_of_index, reachable, scc, triple_index,
    Digraph, GraphError, SccDecomposition, TripleGraph, WeightedDigraph,
};
use crate::matrix::{MatrixSet, Word};
use num_bigint::BigUint;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Growth regime of the maximal product norm, with the exact data each case
/// carries: the vanishing length for nilpotent families and the degree for
/// polynomially growing ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthClass {
    Zero { t0: usize },
    Bounded,
    Polynomial { degree: usize },
    Exponential,
}

impl GrowthClass {
    pub fn name(&self) -> &'static str {
        match self {
            GrowthClass::Zero { .. } => "zero",
            GrowthClass::Bounded => "bounded",
            GrowthClass::Polynomial { .. } => "polynomial",
            GrowthClass::Exponential => "exponential",
        }
    }
}

/// An ordered pair (i, j) together with a word whose product has positive
/// (i,i), (i,j) and (j,j) entries; the atomic source of linear growth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthPair {
    pub i: usize,
    pub j: usize,
    pub word: Word,
}

/// Checkable evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Zero,
    Bounded,
    /// A word whose product has a diagonal entry of at least two at `index`.
    Exponential { word: Word, index: usize },
    /// A chain of growth pairs with connector words joining consecutive
    /// pairs; its length equals the polynomial degree.
    Polynomial {
        chain: Vec<GrowthPair>,
        connectors: Vec<Word>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthVerdict {
    pub class: GrowthClass,
    pub witness: Witness,
}

impl GrowthVerdict {
    pub fn degree(&self) -> Option<usize> {
        match self.class {
            GrowthClass::Polynomial { degree } => Some(degree),
            _ => None,
        }
    }

    pub fn t0(&self) -> Option<usize> {
        match self.class {
            GrowthClass::Zero { t0 } => Some(t0),
            _ => None,
        }
    }
}

/// Result of the cycle test on the dependency graph: either the radius is at
/// least one, or every product of length `t0` (and beyond) vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadiusCheck {
    Positive,
    Zero { t0: usize },
}

/// DAG on growth pairs; an edge means some product (possibly the identity)
/// carries weight from the first pair's sink to the second pair's source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDag {
    pairs: Vec<GrowthPair>,
    adj: Vec<Vec<(usize, Word)>>, // sorted by target
}

impl PairDag {
    pub fn pairs(&self) -> &[GrowthPair] {
        &self.pairs
    }

    pub fn connector(&self, from: usize, to: usize) -> Option<&Word> {
        let list = &self.adj[from];
        list.binary_search_by_key(&to, |(t, _)| *t)
            .ok()
            .map(|pos| &list[pos].1)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

impl Digraph for PairDag {
    fn node_count(&self) -> usize {
        self.pairs.len()
    }

    fn successors(&self, node: usize) -> Vec<usize> {
        self.adj[node].iter().map(|(t, _)| *t).collect()
    }
}

/// Growth lower bound implied by an exponential witness of the given length:
/// the witness word repeats freely, so the radius is at least 2^(1/len).
pub fn exponential_radius_lower_bound(witness_len: usize) -> f64 {
    2f64.powf(1.0 / witness_len as f64)
}

/// Positive radius holds exactly when the dependency graph has a cycle.
/// Otherwise every product of length `t0` = longest path length vanishes.
pub fn check_positive_radius(set: &MatrixSet) -> RadiusCheck {
    let g = dependency_graph(set);
    let dec = scc(&g);
    radius_check_with(&g, &dec)
}

fn radius_check_with(g: &WeightedDigraph, dec: &SccDecomposition) -> RadiusCheck {
    if dec.has_nontrivial() {
        RadiusCheck::Positive
    } else {
        let path = longest_path(g).expect("graph without nontrivial components is acyclic");
        RadiusCheck::Zero { t0: path.len() }
    }
}

/// Decides radius > 1, returning a verified witness word. Returns `None`
/// when the radius is at most one.
pub fn check_exponential(set: &MatrixSet) -> Option<Witness> {
    let g = dependency_graph(set);
    exponential_witness(set, &g)
}

fn exponential_witness(set: &MatrixSet, g: &WeightedDigraph) -> Option<Witness> {
    let two = BigUint::from(2u32);

    // Condition 1: an edge of weight >= 2 lying on a cycle. The witness word
    // takes the heavy edge once and returns along a shortest path.
    for (u, v, w) in g.edges() {
        if w >= &two {
            if let Some(path) = reachable(g, v, u, true) {
                let mut word = Word::new(vec![smallest_heavy_label(set, u, v)]);
                for step in path.windows(2) {
                    word.push(smallest_label(set, step[0], step[1]));
                }
                return Some(Witness::Exponential { word, index: u });
            }
        }
    }

    // Condition 2: a cycle of the pair graph through a diagonal and an
    // off-diagonal node, i.e. a component of the pair graph containing both.
    let n = set.dim();
    let pg = pair_graph(set);
    let dec = scc(&pg);
    for comp in &dec.components {
        let diag = comp
            .iter()
            .copied()
            .find(|&c| {
                let (a, b) = pair_of_index(n, c);
                a == b
            });
        let off = comp
            .iter()
            .copied()
            .find(|&c| {
                let (a, b) = pair_of_index(n, c);
                a != b
            });
        if let (Some(d), Some(o)) = (diag, off) {
            let first = reachable(&pg, d, o, false).expect("nodes share a component");
            let back = reachable(&pg, o, d, false).expect("nodes share a component");
            let mut cycle = first;
            cycle.extend_from_slice(&back[1..]);
            let cycle = shrink_pair_cycle(cycle, n);
            debug_assert!(cycle.len() - 1 <= n * n, "witness cycle exceeds n^2 edges");
            let cycle = rotate_to_diagonal(cycle, n);
            let (i, _) = pair_of_index(n, cycle[0]);
            let mut word = Word::empty();
            for step in cycle.windows(2) {
                word.push(smallest_pair_label(set, n, step[0], step[1]));
            }
            return Some(Witness::Exponential { word, index: i });
        }
    }
    None
}

/// Smallest matrix index with a positive (a, b) entry.
fn smallest_label(set: &MatrixSet, a: usize, b: usize) -> usize {
    use num_traits::Zero;
    set.iter()
        .position(|m| !m.entry(a, b).is_zero())
        .expect("edge realized by some matrix")
}

/// Smallest matrix index with an (a, b) entry of at least two.
fn smallest_heavy_label(set: &MatrixSet, a: usize, b: usize) -> usize {
    let two = BigUint::from(2u32);
    set.iter()
        .position(|m| m.entry(a, b) >= &two)
        .expect("heavy edge realized by some matrix")
}

/// Smallest matrix index realizing a pair-graph edge.
fn smallest_pair_label(set: &MatrixSet, n: usize, from: usize, to: usize) -> usize {
    use num_traits::Zero;
    let (a, b) = pair_of_index(n, from);
    let (c, d) = pair_of_index(n, to);
    set.iter()
        .position(|m| !m.entry(a, c).is_zero() && !m.entry(b, d).is_zero())
        .expect("pair edge realized by some matrix")
}

/// Smallest matrix index realizing a triple-graph edge.
fn smallest_triple_label(set: &MatrixSet, n: usize, from: usize, to: usize) -> usize {
    use num_traits::Zero;
    let a = crate::digraph::triple_of_index(n, from);
    let b = crate::digraph::triple_of_index(n, to);
    set.iter()
        .position(|m| {
            !m.entry(a.0, b.0).is_zero()
                && !m.entry(a.1, b.1).is_zero()
                && !m.entry(a.2, b.2).is_zero()
        })
        .expect("triple edge realized by some matrix")
}

fn pair_cycle_qualifies(cycle: &[usize], n: usize) -> bool {
    let instants = &cycle[..cycle.len() - 1];
    let mut has_diag = false;
    let mut has_off = false;
    for &c in instants {
        let (a, b) = pair_of_index(n, c);
        if a == b {
            has_diag = true;
        } else {
            has_off = true;
        }
    }
    has_diag && has_off
}

/// Excises repeated nodes from a closed walk while it keeps visiting a
/// diagonal and an off-diagonal node. Splitting at any repeated node leaves
/// at least one qualifying part, so the result has at most n^2 edges.
fn shrink_pair_cycle(mut cycle: Vec<usize>, n: usize) -> Vec<usize> {
    debug_assert!(pair_cycle_qualifies(&cycle, n));
    loop {
        let len = cycle.len();
        let count = len - 1;
        let mut best: Option<Vec<usize>> = None;
        for p1 in 0..count {
            for p2 in (p1 + 1)..count {
                if cycle[p1] != cycle[p2] {
                    continue;
                }
                let sub1 = cycle[p1..=p2].to_vec();
                let mut sub2 = cycle[p2..len].to_vec();
                sub2.extend_from_slice(&cycle[1..p1 + 1]);
                for cand in [sub1, sub2] {
                    if cand.len() < len
                        && pair_cycle_qualifies(&cand, n)
                        && best.as_ref().map_or(true, |b| cand.len() < b.len())
                    {
                        best = Some(cand);
                    }
                }
            }
        }
        match best {
            Some(b) => cycle = b,
            None => break,
        }
    }
    cycle
}

/// Rotates a closed walk so that its smallest diagonal node comes first.
fn rotate_to_diagonal(cycle: Vec<usize>, n: usize) -> Vec<usize> {
    let count = cycle.len() - 1;
    let pos = (0..count)
        .filter(|&p| {
            let (a, b) = pair_of_index(n, cycle[p]);
            a == b
        })
        .min_by_key(|&p| cycle[p])
        .expect("cycle contains a diagonal node");
    let mut rotated: Vec<usize> = Vec::with_capacity(cycle.len());
    rotated.extend_from_slice(&cycle[pos..count]);
    rotated.extend_from_slice(&cycle[..pos]);
    rotated.push(cycle[pos]);
    rotated
}

/// Nodes reachable from `from` by at least one edge.
fn forward_reachable<G: Digraph + ?Sized>(graph: &G, from: usize) -> Vec<bool> {
    let mut visited = vec![false; graph.node_count()];
    let mut queue: Vec<usize> = Vec::new();
    for v in graph.successors(from) {
        if !visited[v] {
            visited[v] = true;
            queue.push(v);
        }
    }
    while let Some(u) = queue.pop() {
        for v in graph.successors(u) {
            if !visited[v] {
                visited[v] = true;
                queue.push(v);
            }
        }
    }
    visited
}

/// All growth pairs of a family with radius exactly one, each carrying a
/// word decoded from a shortest triple-graph path.
pub fn growth_pairs(set: &MatrixSet) -> Result<Vec<GrowthPair>, ClassifyError> {
    let g = dependency_graph(set);
    let dec = scc(&g);
    if !dec.has_nontrivial() || exponential_witness(set, &g).is_some() {
        return Err(ClassifyError::PreconditionViolated(
            "growth pairs are defined only for families of radius one",
        ));
    }
    Ok(growth_pairs_with(set, &g, &dec))
}

fn growth_pairs_with(
    set: &MatrixSet,
    g: &WeightedDigraph,
    dec: &SccDecomposition,
) -> Vec<GrowthPair> {
    let n = set.dim();
    let tg = TripleGraph::new(set);
    let mut pairs = Vec::new();
    for i in 0..n {
        if !dec.on_cycle(i) {
            continue;
        }
        let reach = forward_reachable(g, i);
        for j in 0..n {
            if i == j || !dec.on_cycle(j) || !reach[j] {
                continue;
            }
            let from = triple_index(n, i, i, j);
            let to = triple_index(n, i, j, j);
            if let Some(path) = reachable(&tg, from, to, false) {
                let mut word = Word::empty();
                for step in path.windows(2) {
                    word.push(smallest_triple_label(set, n, step[0], step[1]));
                }
                pairs.push(GrowthPair { i, j, word });
            }
        }
    }
    pairs
}

/// Chains growth pairs: edge s -> s' when the sink of s equals or reaches
/// the source of s'. A cycle here would contradict radius one, so it is
/// reported as an internal inconsistency.
pub fn pair_dag(set: &MatrixSet, pairs: &[GrowthPair]) -> Result<PairDag, ClassifyError> {
    let g = dependency_graph(set);
    pair_dag_with(set, &g, pairs)
}

fn pair_dag_with(
    _set: &MatrixSet,
    g: &WeightedDigraph,
    pairs: &[GrowthPair],
) -> Result<PairDag, ClassifyError> {
    use crate::matrix::Word;
    let k = pairs.len();
    let sources: BTreeSet<usize> = pairs.iter().map(|p| p.j).collect();
    let mut trees = std::collections::BTreeMap::new();
    for &s in &sources {
        trees.insert(s, bfs_tree(g, s));
    }
    let mut adj: Vec<Vec<(usize, Word)>> = vec![Vec::new(); k];
    for (s, pair) in pairs.iter().enumerate() {
        let (visited, parent) = &trees[&pair.j];
        for (s2, next) in pairs.iter().enumerate() {
            let word = if pair.j == next.i {
                Some(Word::empty())
            } else if visited[next.i] {
                let mut nodes = vec![next.i];
                let mut cur = next.i;
                loop {
                    let p = parent[cur];
                    nodes.push(p);
                    if p == pair.j {
                        break;
                    }
                    cur = p;
                }
                nodes.reverse();
                let mut w = Word::empty();
                for step in nodes.windows(2) {
                    w.push(smallest_label(_set, step[0], step[1]));
                }
                Some(w)
            } else {
                None
            };
            if let Some(word) = word {
                adj[s].push((s2, word));
            }
        }
    }
    let dag = PairDag {
        pairs: pairs.to_vec(),
        adj,
    };
    // a cycle (including a self-edge) means the input was not a radius-one family
    if has_cycle(&dag) {
        return Err(ClassifyError::Graph(GraphError::CycleDetected));
    }
    Ok(dag)
}

fn has_cycle<G: Digraph + ?Sized>(graph: &G) -> bool {
    let n = graph.node_count();
    let mut indegree = vec![0usize; n];
    for u in 0..n {
        for v in graph.successors(u) {
            indegree[v] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&u| indegree[u] == 0).collect();
    let mut seen = 0usize;
    while let Some(u) = queue.pop() {
        seen += 1;
        for v in graph.successors(u) {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                queue.push(v);
            }
        }
    }
    seen < n
}

/// BFS tree with at-least-one-edge semantics, mirroring [`reachable`].
fn bfs_tree(g: &WeightedDigraph, source: usize) -> (Vec<bool>, Vec<usize>) {
    let n = g.node_count();
    let mut visited = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for v in g.successors(source) {
        if !visited[v] {
            visited[v] = true;
            parent[v] = source;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for v in g.successors(u) {
            if !visited[v] {
                visited[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    (visited, parent)
}

/// Exact polynomial degree for a radius-one family with unbounded products:
/// the longest chain in the growth-pair DAG, with the realizing witness.
pub fn growth_degree(set: &MatrixSet) -> Result<(usize, Witness), ClassifyError> {
    let g = dependency_graph(set);
    let dec = scc(&g);
    if !dec.has_nontrivial() || exponential_witness(set, &g).is_some() {
        return Err(ClassifyError::PreconditionViolated(
            "growth degree is defined only for families of radius one",
        ));
    }
    let pairs = growth_pairs_with(set, &g, &dec);
    if pairs.is_empty() {
        return Err(ClassifyError::PreconditionViolated(
            "growth degree is defined only for families with unbounded products",
        ));
    }
    let dag = pair_dag_with(set, &g, &pairs)?;
    degree_from_dag(&dag)
}

fn degree_from_dag(dag: &PairDag) -> Result<(usize, Witness), ClassifyError> {
    let path = longest_path(dag)?;
    let chain: Vec<GrowthPair> = path.iter().map(|&s| dag.pairs[s].clone()).collect();
    let connectors: Vec<Word> = path
        .windows(2)
        .map(|w| {
            dag.connector(w[0], w[1])
                .expect("consecutive chain nodes are joined by an edge")
                .clone()
        })
        .collect();
    Ok((path.len(), Witness::Polynomial { chain, connectors }))
}

/// Full deterministic classification.
pub fn classify(set: &MatrixSet) -> Result<GrowthVerdict, ClassifyError> {
    let g = dependency_graph(set);
    let dec = scc(&g);
    if let RadiusCheck::Zero { t0 } = radius_check_with(&g, &dec) {
        return Ok(GrowthVerdict {
            class: GrowthClass::Zero { t0 },
            witness: Witness::Zero,
        });
    }
    if let Some(witness) = exponential_witness(set, &g) {
        return Ok(GrowthVerdict {
            class: GrowthClass::Exponential,
            witness,
        });
    }
    let pairs = growth_pairs_with(set, &g, &dec);
    if pairs.is_empty() {
        return Ok(GrowthVerdict {
            class: GrowthClass::Bounded,
            witness: Witness::Bounded,
        });
    }
    let dag = pair_dag_with(set, &g, &pairs)?;
    let (degree, witness) = degree_from_dag(&dag)?;
    debug_assert!(degree + 1 <= dec.count(), "degree exceeds component bound");
    Ok(GrowthVerdict {
        class: GrowthClass::Polynomial { degree },
        witness,
    })
}

/// Re-multiplies the stored words and checks the claimed entries. Returns
/// `false` on any malformed or unsupported claim; never panics on bad input.
pub fn verify_witness(set: &MatrixSet, witness: &Witness) -> bool {
    use num_traits::One;
    let n = set.dim();
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    match witness {
        Witness::Zero | Witness::Bounded => true,
        Witness::Exponential { word, index } => {
            if word.is_empty() || word.len() > n * n || *index >= n {
                return false;
            }
            match set.product_of_word(word) {
                Ok(p) => p.entry(*index, *index) >= &two,
                Err(_) => false,
            }
        }
        Witness::Polynomial { chain, connectors } => {
            if chain.is_empty() || connectors.len() + 1 != chain.len() {
                return false;
            }
            let mut seen = BTreeSet::new();
            for pair in chain {
                if pair.i == pair.j || pair.i >= n || pair.j >= n {
                    return false;
                }
                if !seen.insert((pair.i, pair.j)) {
                    return false;
                }
                let p = match set.product_of_word(&pair.word) {
                    Ok(p) => p,
                    Err(_) => return false,
                };
                if p.entry(pair.i, pair.i) < &one
                    || p.entry(pair.i, pair.j) < &one
                    || p.entry(pair.j, pair.j) < &one
                {
                    return false;
                }
            }
            for (s, connector) in connectors.iter().enumerate() {
                let b = match set.product_of_word(connector) {
                    Ok(b) => b,
                    Err(_) => return false,
                };
                if b.entry(chain[s].j, chain[s + 1].i) < &one {
                    return false;
                }
            }
            true
        }
    }
}

/// Strongly connected component count of the dependency graph; the degree of
/// any polynomial verdict is strictly below it.
pub fn scc_count(set: &MatrixSet) -> usize {
    scc(&dependency_graph(set)).count()
}
