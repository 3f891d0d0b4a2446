//! Dense exact linear algebra over [`Scalar`].
//!
//! Matrices here are small (at most a few hundred rows), so everything is a
//! straightforward Gauss-Jordan elimination.

use num_traits::Zero;

use crate::scalar::{one, zero, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

/// Reduced row echelon form of a matrix.
#[derive(Clone, Debug)]
pub struct Rref {
    /// Nonzero rows only, each with a leading 1 in its pivot column.
    pub rows: Vec<Vec<Scalar>>,
    /// Pivot column of each row in `rows`.
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, data: Vec<Vec<Scalar>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in apply");
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Matrix::from_rows(self.cols, data)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|x| x * c).collect())
            .collect();
        Matrix::from_rows(self.cols, data)
    }

    /// Row reduction, choosing pivots in natural column order.
    pub fn rref(&self) -> Rref {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref_with_order(&order)
    }

    /// Row reduction where pivot columns are searched in `order`.
    ///
    /// Columns early in `order` are preferred as pivots, so the columns that
    /// end up free (and thus index kernel and quotient bases) are the late ones.
    pub fn rref_with_order(&self, order: &[usize]) -> Rref {
        assert_eq!(order.len(), self.cols, "column order must be a permutation");
        let mut rows: Vec<Vec<Scalar>> = self
            .data
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        let mut pivots = Vec::new();
        let mut done = 0;
        for &c in order {
            if done == rows.len() {
                break;
            }
            let Some(p) = (done..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(done, p);
            let inv = one() / &rows[done][c];
            for x in rows[done].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = rows[done].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == done || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            done += 1;
        }
        rows.truncate(done);
        Rref {
            rows,
            pivots,
            cols: self.cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        self.rref().kernel()
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = self.data.clone();
        for (r, x) in aug.iter_mut().zip(b) {
            r.push(x.clone());
        }
        let red = Matrix::from_rows(self.cols + 1, aug).rref();
        if red.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![zero(); self.cols];
        for (row, &p) in red.rows.iter().zip(&red.pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Kernel basis; the vector for free column `f` has a 1 at `f` and zeros
    /// at the other free columns.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![zero(); self.cols];
                v[f] = one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }

    /// Reduces `v` modulo the row space: pivot entries are eliminated and the
    /// result is supported on free columns.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            a.solve(&[int(1), int(1)]).unwrap(),
            vec![ratio(1, 2), ratio(1, 3)]
        );
        let b = m(&[&[1, 1], &[1, 1]]);
        assert!(b.solve(&[int(1), int(2)]).is_none());
    }

    #[test]
    fn column_order_controls_free_columns() {
        let a = m(&[&[1, 1, 0]]);
        assert_eq!(a.rref().free_columns(), vec![1, 2]);
        assert_eq!(a.rref_with_order(&[2, 1, 0]).free_columns(), vec![0, 2]);
    }

    #[test]
    fn reduce_lands_on_free_columns() {
        let a = m(&[&[1, 0, 2], &[0, 1, -1]]);
        let r = a.rref();
        let v = r.reduce(&[int(3), int(1), int(0)]);
        assert_eq!(v, vec![int(0), int(0), int(-5)]);
    }

    #[test]
    fn empty_matrix() {
        let a = Matrix::zeros(0, 3);
        assert_eq!(a.rank(), 0);
        assert_eq!(a.kernel().len(), 3);
    }
}
