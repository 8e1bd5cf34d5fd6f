//! Exact nonnegative-integer matrices, matrix families and word products.
//!
//! All arithmetic is unbounded-precision: products of a family with growth
//! rate above one overflow 64-bit integers within a few dozen factors, and
//! the brute-force oracle depends on exact values. Entries are stored as
//! [`BigUint`]; signed input is rejected during validation.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

/// Errors raised by matrix construction and arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix {matrix}: row {row} has {found} entries, expected {expected}")]
    NonSquare {
        matrix: usize,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix {matrix}: entry ({row},{col}) is negative: {value}")]
    NegativeEntry {
        matrix: usize,
        row: usize,
        col: usize,
        value: BigInt,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix set is empty")]
    EmptySet,
    #[error("matrix {matrix} has no rows")]
    EmptyMatrix { matrix: usize },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("node subset is empty")]
    EmptySubset,
}

/// A square matrix with nonnegative integer entries of unbounded magnitude.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    n: usize,
    entries: Vec<BigUint>, // row-major, n * n values
}

impl Matrix {
    /// The n-by-n zero matrix.
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Matrix {
            n,
            entries: vec![BigUint::zero(); n * n],
        }
    }

    /// The n-by-n identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = BigUint::one();
        }
        m
    }

    /// Builds a matrix from rows, checking squareness.
    pub fn from_rows(rows: Vec<Vec<BigUint>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::EmptyMatrix { matrix: 0 });
        }
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::NonSquare {
                    matrix: 0,
                    row: r,
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Matrix { n, entries })
    }

    /// Convenience constructor for literals in tests and benchmarks.
    ///
    /// Panics on ragged input.
    pub fn from_u64_rows(rows: &[&[u64]]) -> Self {
        let converted = rows
            .iter()
            .map(|row| row.iter().map(|&v| BigUint::from(v)).collect())
            .collect();
        Matrix::from_rows(converted).expect("square row grid")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigUint {
        &self.entries[row * self.n + col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, value: BigUint) {
        self.entries[row * self.n + col] = value;
    }

    /// Exact matrix product; the only failure mode is a dimension mismatch.
    pub fn multiply(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[i * n + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Sum of all entries. Entries are nonnegative, so this is the entrywise
    /// one-norm used for every growth statement in this crate.
    pub fn sum_norm(&self) -> BigUint {
        self.entries.iter().sum()
    }

    /// Principal submatrix on the given node subset, in ascending node order.
    pub fn restrict(&self, nodes: &[usize]) -> Result<Matrix, MatrixError> {
        if nodes.is_empty() {
            return Err(MatrixError::EmptySubset);
        }
        let mut picked: Vec<usize> = nodes.to_vec();
        picked.sort_unstable();
        picked.dedup();
        if let Some(&bad) = picked.iter().find(|&&v| v >= self.n) {
            return Err(MatrixError::IndexOutOfRange {
                index: bad,
                limit: self.n,
            });
        }
        let m = picked.len();
        let mut out = Matrix::zero(m);
        for (r, &i) in picked.iter().enumerate() {
            for (c, &j) in picked.iter().enumerate() {
                out.entries[r * m + c] = self.entry(i, j).clone();
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entry(i, j).clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BigUint::is_zero)
    }

    /// Relabels rows and columns: entry (p, q) of the result is entry
    /// (perm[p], perm[q]) of `self`.
    pub fn permute(&self, perm: &[usize]) -> Matrix {
        assert_eq!(perm.len(), self.n, "permutation length must match dimension");
        let n = self.n;
        let mut out = Matrix::zero(n);
        for p in 0..n {
            for q in 0..n {
                out.entries[p * n + q] = self.entry(perm[p], perm[q]).clone();
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A finite, ordered family of matrices sharing one dimension. Words index
/// into the family by position, so the order is part of the value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSet {
    n: usize,
    matrices: Vec<Matrix>,
}

impl MatrixSet {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self, MatrixError> {
        let first = matrices.first().ok_or(MatrixError::EmptySet)?;
        let n = first.dim();
        for m in &matrices {
            if m.dim() != n {
                return Err(MatrixError::DimensionMismatch {
                    expected: n,
                    found: m.dim(),
                });
            }
        }
        Ok(MatrixSet { n, matrices })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of matrices in the family.
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a validated set always holds at least one matrix
    }

    pub fn matrix(&self, index: usize) -> &Matrix {
        &self.matrices[index]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Matrix> {
        self.matrices.iter()
    }

    /// Left-to-right product of the word's matrices; the empty word yields
    /// the identity.
    pub fn product_of_word(&self, word: &Word) -> Result<Matrix, MatrixError> {
        let mut acc = Matrix::identity(self.n);
        for &idx in word.indices() {
            let m = self
                .matrices
                .get(idx)
                .ok_or(MatrixError::IndexOutOfRange {
                    index: idx,
                    limit: self.matrices.len(),
                })?;
            acc = acc.multiply(m)?;
        }
        Ok(acc)
    }
}

/// Validates raw signed grids into a [`MatrixSet`], reporting the first
/// offending entry precisely. This is the single place where signed input
/// crosses into the unsigned representation.
pub fn validate_set(grids: &[Vec<Vec<BigInt>>]) -> Result<MatrixSet, MatrixError> {
    if grids.is_empty() {
        return Err(MatrixError::EmptySet);
    }
    let mut matrices = Vec::with_capacity(grids.len());
    let mut expected_dim: Option<usize> = None;
    for (idx, grid) in grids.iter().enumerate() {
        let n = grid.len();
        if n == 0 {
            return Err(MatrixError::EmptyMatrix { matrix: idx });
        }
        if let Some(expected) = expected_dim {
            if n != expected {
                return Err(MatrixError::DimensionMismatch { expected, found: n });
            }
        } else {
            expected_dim = Some(n);
        }
        let mut rows = Vec::with_capacity(n);
        for (r, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::NonSquare {
                    matrix: idx,
                    row: r,
                    expected: n,
                    found: row.len(),
                });
            }
            let mut converted = Vec::with_capacity(n);
            for (c, value) in row.iter().enumerate() {
                match value.to_biguint() {
                    Some(v) => converted.push(v),
                    None => {
                        return Err(MatrixError::NegativeEntry {
                            matrix: idx,
                            row: r,
                            col: c,
                            value: value.clone(),
                        })
                    }
                }
            }
            rows.push(converted);
        }
        let matrix = Matrix::from_rows(rows).map_err(|e| match e {
            MatrixError::NonSquare { row, expected, found, .. } => MatrixError::NonSquare {
                matrix: idx,
                row,
                expected,
                found,
            },
            other => other,
        })?;
        matrices.push(matrix);
    }
    MatrixSet::new(matrices)
}

/// A finite sequence of matrix indices; the empty word denotes the identity
/// element of the product semigroup.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(indices: Vec<usize>) -> Self {
        Word(indices)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn push(&mut self, index: usize) {
        self.0.push(index);
    }

    /// Concatenation, used by tests to cross-check associativity.
    pub fn concat(&self, other: &Word) -> Word {
        let mut indices = self.0.clone();
        indices.extend_from_slice(&other.0);
        Word(indices)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl From<Vec<usize>> for Word {
    fn from(indices: Vec<usize>) -> Self {
        Word(indices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(mats: &[&[&[u64]]]) -> MatrixSet {
        MatrixSet::new(mats.iter().map(|m| Matrix::from_u64_rows(m)).collect()).unwrap()
    }

    #[test]
    fn validate_accepts_well_formed_singleton() {
        let grids = vec![vec![
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(0)],
        ]];
        let s = validate_set(&grids).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn validate_accepts_pair() {
        let grids = vec![
            vec![
                vec![BigInt::from(1), BigInt::from(0)],
                vec![BigInt::from(0), BigInt::from(1)],
            ],
            vec![
                vec![BigInt::from(1), BigInt::from(1)],
                vec![BigInt::from(1), BigInt::from(1)],
            ],
        ];
        let s = validate_set(&grids).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn validate_rejects_negative_entry() {
        let grids = vec![vec![
            vec![BigInt::from(1), BigInt::from(-1)],
            vec![BigInt::from(0), BigInt::from(1)],
        ]];
        match validate_set(&grids) {
            Err(MatrixError::NegativeEntry { row, col, value, .. }) => {
                assert_eq!((row, col), (0, 1));
                assert_eq!(value, BigInt::from(-1));
            }
            other => panic!("expected NegativeEntry, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_non_square_and_mismatch_and_empty() {
        let ragged = vec![vec![vec![BigInt::from(1), BigInt::from(2)]]];
        assert!(matches!(
            validate_set(&ragged),
            Err(MatrixError::NonSquare { .. })
        ));

        let mismatched = vec![
            vec![vec![BigInt::from(1)]],
            vec![
                vec![BigInt::from(1), BigInt::from(0)],
                vec![BigInt::from(0), BigInt::from(1)],
            ],
        ];
        assert!(matches!(
            validate_set(&mismatched),
            Err(MatrixError::DimensionMismatch { expected: 1, found: 2 })
        ));

        assert!(matches!(validate_set(&[]), Err(MatrixError::EmptySet)));
    }

    #[test]
    fn multiply_cascade_pair_doubles_middle_entry() {
        // Entry (1,1) of A0*A1 counts the two cascade paths through nodes 0 and 2.
        let a0 = Matrix::from_u64_rows(&[&[0, 0, 0], &[1, 0, 1], &[0, 0, 0]]);
        let a1 = Matrix::from_u64_rows(&[&[0, 1, 0], &[0, 0, 0], &[0, 1, 0]]);
        let p = a0.multiply(&a1).unwrap();
        assert_eq!(p.entry(1, 1), &BigUint::from(2u32));
    }

    #[test]
    fn multiply_identity_is_neutral() {
        let a = Matrix::from_u64_rows(&[&[3, 7], &[0, 2]]);
        let id = Matrix::identity(2);
        assert_eq!(id.multiply(&a).unwrap(), a);
        assert_eq!(a.multiply(&id).unwrap(), a);
    }

    #[test]
    fn multiply_all_ones_square() {
        let a = Matrix::from_u64_rows(&[&[1, 1], &[1, 1]]);
        let sq = a.multiply(&a).unwrap();
        assert_eq!(sq, Matrix::from_u64_rows(&[&[2, 2], &[2, 2]]));
    }

    #[test]
    fn multiply_rejects_dimension_mismatch() {
        let a = Matrix::identity(2);
        let b = Matrix::identity(3);
        assert!(matches!(
            a.multiply(&b),
            Err(MatrixError::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn word_products() {
        let s = set(&[&[&[0, 0, 0], &[1, 0, 1], &[0, 0, 0]], &[&[0, 1, 0], &[0, 0, 0], &[0, 1, 0]]]);
        assert_eq!(
            s.product_of_word(&Word::empty()).unwrap(),
            Matrix::identity(3)
        );
        let p = s.product_of_word(&Word::new(vec![0, 1])).unwrap();
        assert_eq!(p.entry(1, 1), &BigUint::from(2u32));

        let upper = set(&[&[&[1, 1], &[0, 1]]]);
        let cube = upper.product_of_word(&Word::new(vec![0, 0, 0])).unwrap();
        assert_eq!(cube, Matrix::from_u64_rows(&[&[1, 3], &[0, 1]]));
    }

    #[test]
    fn word_product_rejects_bad_index() {
        let s = set(&[&[&[1]]]);
        assert!(matches!(
            s.product_of_word(&Word::new(vec![1])),
            Err(MatrixError::IndexOutOfRange { index: 1, limit: 1 })
        ));
    }

    #[test]
    fn sum_norm_values() {
        assert_eq!(
            Matrix::from_u64_rows(&[&[1, 1], &[1, 1]]).sum_norm(),
            BigUint::from(4u32)
        );
        assert_eq!(Matrix::zero(3).sum_norm(), BigUint::zero());
        // square of the first quadratic-example generator
        let a1 = Matrix::from_u64_rows(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 0]]);
        let sq = a1.multiply(&a1).unwrap();
        assert_eq!(sq, Matrix::from_u64_rows(&[&[1, 2, 0], &[0, 1, 0], &[0, 0, 0]]));
        assert_eq!(sq.sum_norm(), BigUint::from(4u32));
    }

    #[test]
    fn restrict_examples() {
        let a = Matrix::from_u64_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(a.restrict(&[0]).unwrap(), Matrix::from_u64_rows(&[&[1]]));

        let id3 = Matrix::identity(3);
        assert_eq!(id3.restrict(&[0, 2]).unwrap(), Matrix::identity(2));

        let a1 = Matrix::from_u64_rows(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 0]]);
        assert_eq!(
            a1.restrict(&[0, 1]).unwrap(),
            Matrix::from_u64_rows(&[&[1, 1], &[0, 1]])
        );

        assert!(matches!(a.restrict(&[]), Err(MatrixError::EmptySubset)));
        assert!(matches!(
            a.restrict(&[5]),
            Err(MatrixError::IndexOutOfRange { index: 5, limit: 2 })
        ));
    }

    #[test]
    fn permute_swaps_labels() {
        let a = Matrix::from_u64_rows(&[&[1, 0], &[1, 1]]);
        let b = a.permute(&[1, 0]);
        assert_eq!(b, Matrix::from_u64_rows(&[&[1, 1], &[0, 1]]));
    }
}
