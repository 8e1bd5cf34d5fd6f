//! Exact growth classification for products of nonnegative integer matrices.
//!
//! Given a finite family of n-by-n matrices with nonnegative integer
//! entries, the maximal sum-norm over all products of length t falls into
//! exactly one of four regimes: it vanishes from some length on, stays
//! bounded, grows polynomially with an integer degree, or grows
//! exponentially. This crate decides the regime in polynomial time, computes
//! the exact degree in the polynomial case, and emits witnesses that can be
//! re-verified by plain multiplication. A brute-force oracle cross-validates
//! the decision procedures at desk scale, and a trackability front-end maps
//! node-labelled digraphs onto matrix families.

pub mod classifier;
pub mod digraph;
pub mod matrix;
pub mod oracle;
pub mod trackability;

pub use classifier::{
    check_exponential, check_positive_radius, classify, exponential_radius_lower_bound,
    growth_degree, growth_pairs, pair_dag, scc_count, verify_witness, ClassifyError, GrowthClass,
    GrowthPair, GrowthVerdict, PairDag, RadiusCheck, Witness,
};
pub use digraph::{
    block_triangular_permutation, dependency_graph, longest_path, pair_graph, reachable, scc,
    triple_graph, Digraph, GraphError, LabelledDigraph, SccDecomposition, TripleGraph,
    WeightedDigraph,
};
pub use matrix::{validate_set, Matrix, MatrixError, MatrixSet, Word};
pub use oracle::{
    classify_bruteforce, degree_bracket, max_t_exact, max_t_table, semigroup_closure,
    BruteForceConfig, ClosureResult, DegreeBracket, OracleClass, OracleError, OracleVerdict,
};
pub use trackability::{
    decide_trackable, matrices_from_labels, LabelledGraph, TrackError, TrackVerdict,
};
