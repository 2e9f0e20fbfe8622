//! Dense exact matrices over ℚ(i).
//!
//! Rank and echelon forms come from fraction-free (Bareiss) elimination. The
//! pivot in each column is the first nonzero entry at or below the current row,
//! so results are reproducible run to run.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of [`ExactMatrix::rank_profile`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: usize,
    /// Reduced row echelon form (zero rows kept at the bottom).
    pub rref: ExactMatrix,
    pub pivot_columns: Vec<usize>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Convenience constructor for integer test data.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect())
    }

    /// Matrix with the given row count and zero columns is allowed; `cols` fixes the width.
    pub fn from_row_slices(rows: &[Vec<Scalar>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row width mismatch");
            m.data[i * cols..(i + 1) * cols].clone_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
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

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
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
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, c: &Scalar) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Sub-matrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Fraction-free forward elimination. Returns the echelon matrix, the pivot
    /// columns and the sign of the row permutation used.
    fn bareiss(&self) -> (ExactMatrix, Vec<usize>, bool) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut prev = Scalar::one();
        let mut swapped = false;
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
            if p != r {
                a.swap_rows(p, r);
                swapped = !swapped;
            }
            let piv = a[(r, c)].clone();
            for i in r + 1..a.rows {
                let f = a[(i, c)].clone();
                for j in c + 1..a.cols {
                    let v = &(&piv * &a[(i, j)]) - &(&f * &a[(r, j)]);
                    a[(i, j)] = &v / &prev;
                }
                a[(i, c)] = Scalar::zero();
            }
            // entries left of the pivot in lower rows are already zero; rows
            // above stay as they were
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (a, pivots, swapped)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.bareiss().1.len()
    }

    /// Rank, unique reduced row echelon form, and pivot columns.
    pub fn rank_profile(&self) -> RankProfile {
        let (mut a, pivots, _) = self.bareiss();
        let rank = pivots.len();
        for (r, &c) in pivots.iter().enumerate() {
            let inv = a[(r, c)].inv().expect("pivot is nonzero");
            for j in c..a.cols {
                if !a[(r, j)].is_zero() {
                    a[(r, j)] = &a[(r, j)] * &inv;
                }
            }
        }
        for (r, &c) in pivots.iter().enumerate().rev() {
            for i in 0..r {
                let f = a[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    if !a[(r, j)].is_zero() {
                        let v = &f * &a[(r, j)];
                        a[(i, j)] -= &v;
                    }
                }
            }
        }
        RankProfile { rank, rref: a, pivot_columns: pivots }
    }

    /// Determinant of a square matrix (Bareiss: the last pivot is the determinant).
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return Scalar::one();
        }
        let (a, pivots, swapped) = self.bareiss();
        if pivots.len() < self.rows {
            return Scalar::zero();
        }
        let d = a[(self.rows - 1, self.cols - 1)].clone();
        if swapped {
            -d
        } else {
            d
        }
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        let prof = aug.rank_profile();
        if prof.pivot_columns.iter().take(n).copied().ne(0..n) {
            return None;
        }
        let idx: Vec<usize> = (0..n).collect();
        let right: Vec<usize> = (n..2 * n).collect();
        Some(prof.rref.select(&idx, &right))
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let prof = self.rank_profile();
        let free: Vec<usize> = (0..self.cols).filter(|c| !prof.pivot_columns.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (r, &p) in prof.pivot_columns.iter().enumerate() {
                    v[p] = -&prof.rref[(r, f)];
                }
                v
            })
            .collect()
    }

    /// One solution of `A x = b`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let prof = aug.rank_profile();
        if prof.pivot_columns.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &p) in prof.pivot_columns.iter().enumerate() {
            x[p] = prof.rref[(r, self.cols)].clone();
        }
        Some(x)
    }
}

/// Rank of a list of vectors of a common length.
pub fn vectors_rank(vs: &[Vec<Scalar>], dim: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    ExactMatrix::from_row_slices(vs, dim).rank()
}

/// Basis (as RREF rows) of the span of the given vectors.
pub fn span_basis(vs: &[Vec<Scalar>], dim: usize) -> Vec<Vec<Scalar>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let prof = ExactMatrix::from_row_slices(vs, dim).rank_profile();
    (0..prof.rank).map(|i| prof.rref.row(i).to_vec()).collect()
}

/// Indices of a maximal independent subset, chosen greedily in input order.
pub fn independent_subset(vs: &[Vec<Scalar>], dim: usize) -> Vec<usize> {
    let prof = ExactMatrix::from_row_slices(vs, dim).transpose().rank_profile();
    prof.pivot_columns
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_proportional_rows() {
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
        assert_eq!(ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(ExactMatrix::zeros(2, 3).rank(), 0);
    }

    #[test]
    fn rref_is_reduced() {
        let m = ExactMatrix::from_i64(&[&[0, 2, 4, 2], &[1, 1, 1, 1], &[2, 4, 6, 4]]);
        let p = m.rank_profile();
        assert_eq!(p.rank, 2);
        assert_eq!(p.pivot_columns, vec![0, 1]);
        let expect = ExactMatrix::from_i64(&[&[1, 0, -1, 0], &[0, 1, 2, 1], &[0, 0, 0, 0]]);
        assert_eq!(p.rref, expect);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = ExactMatrix::from_i64(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]);
        assert_eq!(m.det(), Scalar::from_int(-3));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ExactMatrix::identity(3));
        assert!(ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_and_nullspace() {
        let m = ExactMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        let x = m.solve(&[Scalar::from_int(1), Scalar::from_int(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![Scalar::from_int(1), Scalar::from_int(2)]);
        assert!(m.solve(&[Scalar::from_int(1), Scalar::from_int(3)]).is_none());
    }

    #[test]
    fn gaussian_entries() {
        // rows (1, i) and (i, -1) are proportional over ℚ(i)
        let m = ExactMatrix::from_rows(vec![vec![Scalar::one(), Scalar::i()], vec![Scalar::i(), Scalar::from_int(-1)]]);
        assert_eq!(m.rank(), 1);
    }
}
