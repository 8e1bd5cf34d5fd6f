//! Trackability of node-labelled digraphs.
//!
//! A labelled graph induces one binary matrix per label: entry (i, j) of the
//! matrix for label L is one exactly when (i, j) is an edge and node j
//! carries L (a path "produces" the label of every node it enters). The sum
//! norm of a word product then counts the paths compatible with that label
//! sequence, so the graph is trackable exactly when the induced family does
//! not grow exponentially.

use crate::classifier::{classify, ClassifyError, GrowthClass, GrowthVerdict};
use crate::matrix::{Matrix, MatrixSet};
use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrackError {
    #[error("labelled graph has no edges")]
    NoEdges,
    #[error("node {node} has an empty label")]
    EmptyLabel { node: usize },
    #[error("edge ({from},{to}) references a missing node (node count {nodes})")]
    InvalidEdge { from: usize, to: usize, nodes: usize },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Digraph with one label per node, nodes indexed 0..n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledGraph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl LabelledGraph {
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, TrackError> {
        let n = labels.len();
        if let Some(node) = labels.iter().position(String::is_empty) {
            return Err(TrackError::EmptyLabel { node });
        }
        if let Some(&(from, to)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(TrackError::InvalidEdge { from, to, nodes: n });
        }
        let mut edges = edges;
        edges.sort_unstable();
        edges.dedup();
        Ok(LabelledGraph { labels, edges })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Distinct labels in sorted order; the matrix family indexes by this.
    pub fn alphabet(&self) -> Vec<String> {
        let mut alpha: Vec<String> = self.labels.clone();
        alpha.sort_unstable();
        alpha.dedup();
        alpha
    }
}

/// Trackability outcome plus the full growth verdict of the induced family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackVerdict {
    pub trackable: bool,
    pub verdict: GrowthVerdict,
    /// Label for each matrix index of the induced family.
    pub alphabet: Vec<String>,
}

/// One binary matrix per distinct label, destination-label convention:
/// the matrix for label L holds the edges entering an L-labelled node.
pub fn matrices_from_labels(graph: &LabelledGraph) -> Result<(MatrixSet, Vec<String>), TrackError> {
    if graph.edges().is_empty() {
        return Err(TrackError::NoEdges);
    }
    let n = graph.node_count();
    let alphabet = graph.alphabet();
    let mut matrices: Vec<Matrix> = alphabet.iter().map(|_| Matrix::zero(n)).collect();
    for &(u, v) in graph.edges() {
        let idx = alphabet
            .binary_search_by(|l| l.as_str().cmp(graph.label(v)))
            .expect("alphabet covers every node label");
        matrices[idx].set_entry(u, v, BigUint::from(1u32));
    }
    let set = MatrixSet::new(matrices).expect("at least one label exists");
    Ok((set, alphabet))
}

/// Classifies the induced family; the graph is trackable exactly when the
/// path counts do not grow exponentially.
pub fn decide_trackable(graph: &LabelledGraph) -> Result<TrackVerdict, TrackError> {
    let (set, alphabet) = matrices_from_labels(graph)?;
    let verdict = classify(&set)?;
    let trackable = !matches!(verdict.class, GrowthClass::Exponential);
    Ok(TrackVerdict {
        trackable,
        verdict,
        alphabet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Word;

    fn two_node_graph() -> LabelledGraph {
        LabelledGraph::new(
            vec!["a".into(), "a".into()],
            vec![(0, 0), (0, 1), (1, 1)],
        )
        .unwrap()
    }

    fn three_node_graph() -> LabelledGraph {
        LabelledGraph::new(
            vec!["a".into(), "a".into(), "b".into()],
            vec![(0, 1), (1, 0), (0, 2), (2, 2)],
        )
        .unwrap()
    }

    fn cascade_graph() -> LabelledGraph {
        // node 1 labelled a, nodes 0 and 2 labelled b
        LabelledGraph::new(
            vec!["b".into(), "a".into(), "b".into()],
            vec![(1, 0), (1, 2), (0, 1), (2, 1)],
        )
        .unwrap()
    }

    #[test]
    fn induced_matrices_two_node() {
        let (set, alphabet) = matrices_from_labels(&two_node_graph()).unwrap();
        assert_eq!(alphabet, vec!["a"]);
        assert_eq!(set.matrix(0), &Matrix::from_u64_rows(&[&[1, 1], &[0, 1]]));
    }

    #[test]
    fn induced_matrices_three_node() {
        let (set, alphabet) = matrices_from_labels(&three_node_graph()).unwrap();
        assert_eq!(alphabet, vec!["a", "b"]);
        assert_eq!(
            set.matrix(0),
            &Matrix::from_u64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]])
        );
        assert_eq!(
            set.matrix(1),
            &Matrix::from_u64_rows(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 1]])
        );
    }

    #[test]
    fn distinct_labels_give_single_column_matrices() {
        let g = LabelledGraph::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![(0, 1), (1, 2), (2, 0), (0, 2)],
        )
        .unwrap();
        let (set, _) = matrices_from_labels(&g).unwrap();
        for m in set.iter() {
            let nonzero_cols: Vec<usize> = (0..3)
                .filter(|&j| (0..3).any(|i| !num_traits::Zero::is_zero(m.entry(i, j))))
                .collect();
            assert!(nonzero_cols.len() <= 1);
        }
    }

    #[test]
    fn trackable_verdicts() {
        let v = decide_trackable(&two_node_graph()).unwrap();
        assert!(v.trackable);
        assert_eq!(v.verdict.class, GrowthClass::Polynomial { degree: 1 });

        let v = decide_trackable(&three_node_graph()).unwrap();
        assert!(v.trackable);
        assert_eq!(v.verdict.class, GrowthClass::Bounded);

        let v = decide_trackable(&cascade_graph()).unwrap();
        assert!(!v.trackable);
        assert_eq!(v.verdict.class, GrowthClass::Exponential);
    }

    #[test]
    fn label_matrices_partition_adjacency() {
        for g in [two_node_graph(), three_node_graph(), cascade_graph()] {
            let (set, _) = matrices_from_labels(&g).unwrap();
            let n = g.node_count();
            let mut sum = Matrix::zero(n);
            for m in set.iter() {
                for i in 0..n {
                    for j in 0..n {
                        let v = sum.entry(i, j) + m.entry(i, j);
                        sum.set_entry(i, j, v);
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let expected = u32::from(g.edges().contains(&(i, j)));
                    assert_eq!(sum.entry(i, j), &BigUint::from(expected));
                }
            }
        }
    }

    #[test]
    fn path_counts_match_word_norms() {
        // enumerate every walk of length t and bucket by produced label string
        for g in [two_node_graph(), three_node_graph(), cascade_graph()] {
            let (set, alphabet) = matrices_from_labels(&g).unwrap();
            let n = g.node_count();
            for t in 1..=4 {
                let mut counts: std::collections::HashMap<Vec<usize>, u64> =
                    std::collections::HashMap::new();
                let mut stack: Vec<(usize, Vec<usize>)> =
                    (0..n).map(|v| (v, Vec::new())).collect();
                while let Some((node, word)) = stack.pop() {
                    if word.len() == t {
                        *counts.entry(word).or_insert(0) += 1;
                        continue;
                    }
                    for &(u, v) in g.edges() {
                        if u == node {
                            let mut w = word.clone();
                            let idx = alphabet
                                .binary_search_by(|l| l.as_str().cmp(g.label(v)))
                                .unwrap();
                            w.push(idx);
                            stack.push((v, w));
                        }
                    }
                }
                // compare against every label word of length t
                let mut words = vec![Vec::new()];
                for _ in 0..t {
                    words = words
                        .into_iter()
                        .flat_map(|w| {
                            (0..alphabet.len()).map(move |c| {
                                let mut x = w.clone();
                                x.push(c);
                                x
                            })
                        })
                        .collect();
                }
                for w in words {
                    let norm = set
                        .product_of_word(&Word::new(w.clone()))
                        .unwrap()
                        .sum_norm();
                    let expected = counts.get(&w).copied().unwrap_or(0);
                    assert_eq!(norm, BigUint::from(expected), "word {w:?}");
                }
            }
        }
    }

    #[test]
    fn errors() {
        let g = LabelledGraph::new(vec!["a".into()], vec![]).unwrap();
        assert!(matches!(matrices_from_labels(&g), Err(TrackError::NoEdges)));

        assert!(matches!(
            LabelledGraph::new(vec!["".into()], vec![(0, 0)]),
            Err(TrackError::EmptyLabel { node: 0 })
        ));
        assert!(matches!(
            LabelledGraph::new(vec!["a".into()], vec![(0, 3)]),
            Err(TrackError::InvalidEdge { .. })
        ));
    }
}
