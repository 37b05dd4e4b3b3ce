//! Dense square integer matrices and a fraction-free determinant.

use std::fmt;

use crate::scalar::Exact;

#[derive(Clone, PartialEq, Eq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Exact> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Panics if the rows are ragged or not square.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix is not square");
            data.extend(row);
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Principal submatrix on the given (sorted, distinct) indices.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let rows = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    /// Bareiss elimination: every intermediate entry is a minor of the
    /// input, so all divisions are exact. The empty matrix has determinant 1.
    pub fn determinant(&self) -> T {
        let n = self.n;
        if n == 0 {
            return T::one();
        }
        let mut a = self.data.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return T::zero();
                };
                for c in 0..n {
                    a.swap(k * n + c, swap * n + c);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j].clone() * pivot.clone()
                        - a[i * n + k].clone() * a[k * n + j].clone();
                    a[i * n + j] = v / prev.clone();
                }
                a[i * n + k] = T::zero();
            }
            prev = pivot;
        }
        sign * a[n * n - 1].clone()
    }
}

impl<T: Exact> fmt::Debug for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}
