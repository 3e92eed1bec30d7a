//! Exact integer matrix algebra.
//!
//! Everything here works over arbitrary-precision integers. The normal forms
//! follow the usual row/column reduction by Euclidean steps; pivots are chosen
//! as the entry of least absolute value to keep coefficient growth small.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("matrix of shape {rows}x{cols} needs {expected} entries, got {actual}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },
    #[error("row {row} has length {len}, expected {expected}")]
    RaggedRow { row: usize, len: usize, expected: usize },
    #[error("rows are linearly dependent over the rationals (rank {rank} < {rows})")]
    DependentRows { rank: usize, rows: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Dense integer matrix stored in row-major order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatrixRepr", try_from = "MatrixRepr")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LinAlgError> {
        if entries.len() != rows * cols {
            return Err(LinAlgError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from a list of rows. An empty list yields a `0 x cols`
    /// matrix where `cols` is supplied by the caller.
    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Result<Self, LinAlgError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinAlgError::RaggedRow {
                    row: i,
                    len: row.len(),
                    expected: cols,
                });
            }
            entries.extend(row.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Convenience constructor from small integers, mostly for tests and
    /// catalog data. Panics if `values.len() != rows * cols`.
    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "entry count mismatch");
        Self {
            rows,
            cols,
            entries: values.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Matrix with the selected rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let rows: Vec<Vec<BigInt>> = indices.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(&rows, self.cols).expect("rows taken from a rectangular matrix")
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LinAlgError> {
        if v.len() != self.rows {
            return Err(LinAlgError::Shape(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += x * &self[(i, j)];
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let (h, _) = hermite_normal_form(self);
        (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::Shape(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square()
            && self
                .determinant()
                .map(|d| d.abs().is_one())
                .unwrap_or(false)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.entries[source * self.cols + j] * factor;
            self.entries[target * self.cols + j] += s;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.entries[i * self.cols + source] * factor;
            self.entries[i * self.cols + target] += s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.entries[idx] = -std::mem::take(&mut self.entries[idx]);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Serialized shape: explicit dimensions plus a list of rows, so that
/// `0 x n` and `n x 0` matrices survive a round trip.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    #[serde(with = "crate::bigjson::rows")]
    data: Vec<Vec<BigInt>>,
}

impl From<IntMatrix> for MatrixRepr {
    fn from(m: IntMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            data: m.to_rows(),
        }
    }
}

impl TryFrom<MatrixRepr> for IntMatrix {
    type Error = LinAlgError;

    fn try_from(r: MatrixRepr) -> Result<Self, Self::Error> {
        if r.data.len() != r.rows {
            return Err(LinAlgError::Shape(format!(
                "declared {} rows, found {}",
                r.rows,
                r.data.len()
            )));
        }
        IntMatrix::from_rows(&r.data, r.cols)
    }
}

/// `left * input * right = diagonal`, with `left` and `right` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    /// The diagonal entries `d_1, ..., d_min(rows, cols)`, zeros included.
    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        let k = self.diagonal.rows().min(self.diagonal.cols());
        (0..k).map(|i| self.diagonal[(i, i)].clone()).collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.diagonal_entries().iter().filter(|d| !d.is_zero()).count()
    }
}

fn min_abs_position(
    a: &IntMatrix,
    rows: impl Iterator<Item = usize> + Clone,
    cols: impl Iterator<Item = usize> + Clone,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                best = Some((i, j, abs));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_position(&d, t..rows, t..cols) else {
            break;
        };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let pivot = d[(t, t)].clone();
            let mut residue = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                residue |= !d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                residue |= !d[(t, j)].is_zero();
            }

            if residue {
                // A remainder smaller than the pivot survived; move it into place.
                let (pi, pj) = min_abs_position(&d, t..rows, t..t + 1)
                    .into_iter()
                    .chain(min_abs_position(&d, t..t + 1, t..cols))
                    .min_by_key(|&(i, j)| d[(i, j)].abs())
                    .expect("pivot row/column is nonzero");
                d.swap_rows(t, pi);
                left.swap_rows(t, pi);
                d.swap_cols(t, pj);
                right.swap_cols(t, pj);
                continue;
            }

            // Row and column are cleared; enforce divisibility of the remainder.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    left.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }

    SmithDecomposition {
        left,
        diagonal: d,
        right,
    }
}

/// Row-style Hermite normal form: returns `(h, u)` with `h = u * a`.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)`, and zero
/// rows sit at the bottom.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;

    for j in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let Some((pi, _)) = min_abs_position(&h, r..rows, j..j + 1) else {
                break;
            };
            h.swap_rows(r, pi);
            u.swap_rows(r, pi);
            let pivot = h[(r, j)].clone();
            let mut residue = false;
            for i in r + 1..rows {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = -h[(i, j)].div_floor(&pivot);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                residue |= !h[(i, j)].is_zero();
            }
            if !residue {
                break;
            }
        }
        if h[(r, j)].is_zero() {
            continue;
        }
        if h[(r, j)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h[(r, j)].clone();
        for i in 0..r {
            let q = -h[(i, j)].div_floor(&pivot);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Basis (as rows, in Hermite normal form) of the left kernel
/// `{x : x * a = 0}`. The result has `a.rows()` columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let (h, u) = hermite_normal_form(a);
    let zero_rows: Vec<usize> = (0..h.rows())
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .collect();
    let basis = u.select_rows(&zero_rows);
    hermite_normal_form(&basis).0
}

/// Structure of a finitely generated abelian group `Z^free_rank x prod Z/t_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(with = "crate::bigjson::vec")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Invariants of `Z^rows / a Z^cols`, where `a` acts on column vectors.
pub fn cokernel_invariants(a: &IntMatrix) -> AbelianGroup {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal_entries();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    AbelianGroup {
        free_rank: a.rows() - nonzero,
        torsion: diag.into_iter().filter(|d| *d > BigInt::one()).collect(),
    }
}

/// Index of the lattice spanned by the rows of `b` inside its saturation.
pub fn saturation_index(b: &IntMatrix) -> Result<BigInt, LinAlgError> {
    let snf = smith_normal_form(b);
    let rank = snf.nonzero_count();
    if rank < b.rows() {
        return Err(LinAlgError::DependentRows {
            rank,
            rows: b.rows(),
        });
    }
    Ok(snf.diagonal_entries().into_iter().product())
}

pub fn gcd_of(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, v)
    }

    fn diag(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_smith(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(s.left.mul(a).unwrap().mul(&s.right).unwrap(), s.diagonal);
        assert!(s.left.is_unimodular());
        assert!(s.right.is_unimodular());
        s
    }

    #[test]
    fn smith_identity() {
        let s = check_smith(&IntMatrix::identity(3));
        assert_eq!(s.diagonal, IntMatrix::identity(3));
    }

    #[test]
    fn smith_diag_2_3() {
        // gcd of entries is 1 and |det| = 6
        let s = check_smith(&m(2, 2, &[2, 0, 0, 3]));
        assert_eq!(s.diagonal_entries(), diag(&[1, 6]));
    }

    #[test]
    fn smith_sum_difference() {
        let s = check_smith(&m(2, 2, &[1, 1, 1, -1]));
        assert_eq!(s.diagonal_entries(), diag(&[1, 2]));
    }

    #[test]
    fn smith_empty_shapes() {
        for (r, c) in [(0, 0), (0, 3), (3, 0)] {
            let s = check_smith(&IntMatrix::zeros(r, c));
            assert_eq!(s.left, IntMatrix::identity(r));
            assert_eq!(s.right, IntMatrix::identity(c));
        }
    }

    #[test]
    fn smith_rectangular_with_zero_tail() {
        // d1 = gcd of entries = 2; d1*d2 = gcd of 2x2 minors (-8, -12, -20) = 4
        let s = check_smith(&m(3, 2, &[2, 4, 6, 8, 4, 2]));
        assert_eq!(s.diagonal_entries(), diag(&[2, 2]));
    }

    #[test]
    fn hermite_identity() {
        let (h, u) = hermite_normal_form(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
    }

    #[test]
    fn hermite_two_by_two() {
        // Row lattice of [[2,4],[1,3]] contains (1,3) and (0,2); reducing the
        // entry above the pivot 2 into [0,2) gives (1,1).
        let a = m(2, 2, &[2, 4, 1, 3]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(h, m(2, 2, &[1, 1, 0, 2]));
        assert_eq!(u.mul(&a).unwrap(), h);
        assert!(u.is_unimodular());
    }

    #[test]
    fn hermite_zero() {
        let (h, u) = hermite_normal_form(&IntMatrix::zeros(2, 2));
        assert_eq!(h, IntMatrix::zeros(2, 2));
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn kernel_of_projective_plane_rays() {
        let k = kernel_basis(&m(3, 2, &[1, 0, 0, 1, -1, -1]));
        assert_eq!(k, m(1, 3, &[1, 1, 1]));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = kernel_basis(&IntMatrix::identity(4));
        assert_eq!((k.rows(), k.cols()), (0, 4));
    }

    #[test]
    fn kernel_of_zero_row() {
        assert_eq!(kernel_basis(&IntMatrix::zeros(1, 2)), m(1, 1, &[1]));
    }

    #[test]
    fn cokernel_examples() {
        let p2 = cokernel_invariants(&m(3, 2, &[1, 0, 0, 1, -1, -1]));
        assert_eq!((p2.free_rank, p2.torsion.len()), (1, 0));
        let z2 = cokernel_invariants(&m(2, 2, &[1, 1, 1, -1]));
        assert_eq!(z2.free_rank, 0);
        assert_eq!(z2.torsion, diag(&[2]));
        assert!(cokernel_invariants(&IntMatrix::identity(3)).is_trivial());
    }

    #[test]
    fn saturation_examples() {
        assert_eq!(saturation_index(&m(2, 2, &[1, 0, 0, 1])).unwrap(), BigInt::from(1));
        assert_eq!(saturation_index(&m(2, 2, &[1, 0, 1, 2])).unwrap(), BigInt::from(2));
        assert_eq!(saturation_index(&m(1, 2, &[2, 4])).unwrap(), BigInt::from(2));
        assert_eq!(saturation_index(&IntMatrix::zeros(0, 3)).unwrap(), BigInt::from(1));
    }

    #[test]
    fn saturation_rejects_dependent_rows() {
        let err = saturation_index(&m(2, 2, &[1, 2, 2, 4])).unwrap_err();
        assert_eq!(err, LinAlgError::DependentRows { rank: 1, rows: 2 });
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(2, 2, &[2, 4, 1, 3]).determinant().unwrap(), BigInt::from(2));
        assert_eq!(
            m(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 1]).determinant().unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(m(2, 2, &[1, 2, 2, 4]).determinant().unwrap(), BigInt::zero());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![diag(&[1, 2]), diag(&[3])];
        assert!(matches!(
            IntMatrix::from_rows(&rows, 2),
            Err(LinAlgError::RaggedRow { row: 1, .. })
        ));
    }

    #[test]
    fn large_entries_stay_exact() {
        let big = BigInt::from(i64::MAX) * BigInt::from(i64::MAX);
        let a = IntMatrix::new(2, 2, vec![big.clone(), BigInt::one(), BigInt::zero(), big.clone()])
            .unwrap();
        let s = check_smith(&a);
        assert_eq!(s.diagonal_entries(), vec![BigInt::one(), &big * &big]);
    }
}
