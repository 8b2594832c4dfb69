//! Dense exact matrices over the Gaussian rationals.
//!
//! Elimination always pivots on the leftmost column with a nonzero entry
//! below the current row, taking the smallest such row index, so that every
//! basis produced here is reproducible bit for bit.

use super::scalar::Scalar;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Column vectors are plain `Vec<Scalar>`.
pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer shorthand used heavily in tests and examples.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::int(x)).collect())
                .collect(),
        )
    }

    /// Builds an `nrows × columns.len()` matrix from column vectors.
    pub fn from_columns(nrows: usize, columns: &[Vector]) -> Self {
        assert!(columns.iter().all(|c| c.len() == nrows), "column length mismatch");
        Matrix::from_fn(nrows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn column_vector(v: &[Scalar]) -> Self {
        Matrix::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    pub fn diagonal(d: &[Scalar]) -> Self {
        let n = d.len();
        Matrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { Scalar::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose `M*`.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn conj(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).conj())
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i..self.cols).all(|j| *self.get(i, j) == self.get(j, i).conj()))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn columns_range(&self, start: usize, end: usize) -> Matrix {
        Matrix::from_fn(self.rows, end - start, |i, j| self.get(i, start + j).clone())
    }

    pub fn rows_range(&self, start: usize, end: usize) -> Matrix {
        Matrix::from_fn(end - start, self.cols, |i, j| self.get(start + i, j).clone())
    }

    /// `[A B ...]`; all blocks share the row count `nrows`.
    pub fn hstack(nrows: usize, blocks: &[&Matrix]) -> Matrix {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(nrows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, nrows, "hstack row mismatch");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(i, off + j, b.get(i, j).clone());
                }
            }
            off += b.cols;
        }
        m
    }

    /// `[A; B; ...]`; all blocks share the column count `ncols`.
    pub fn vstack(ncols: usize, blocks: &[&Matrix]) -> Matrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(rows, ncols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, ncols, "vstack column mismatch");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(ro + i, co + j, b.get(i, j).clone());
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    /// Row-reduces in place using only the first `pivot_cols` columns as
    /// pivot candidates; returns the pivot columns.
    fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let prow = self.get(r, j);
                    if prow.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &(&f * prow);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Exact rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        self.bareiss().0
    }

    /// Determinant of a square matrix by Bareiss elimination.
    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of non-square matrix");
        if self.rows == 0 {
            return Scalar::one();
        }
        let (rank, det) = self.bareiss();
        if rank < self.rows {
            Scalar::zero()
        } else {
            det
        }
    }

    /// Returns (rank, signed last pivot). For square full-rank input the
    /// second value is the determinant.
    fn bareiss(&self) -> (usize, Scalar) {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut prev = Scalar::one();
        let mut sign = Scalar::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    m.data.swap(p * cols + j, r * cols + j);
                }
                sign = -sign;
            }
            let piv = m.get(r, c).clone();
            for i in (r + 1)..rows {
                let f = m.get(i, c).clone();
                for j in (c + 1)..cols {
                    let v = &(&(&piv * m.get(i, j)) - &(&f * m.get(r, j))) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, c, Scalar::zero());
            }
            prev = piv;
            r += 1;
        }
        (r, &sign * &prev)
    }

    /// Basis of the null space in canonical (reduced echelon) form.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(k, f);
            }
            basis.push(v);
        }
        canonical_basis(self.cols, &basis)
    }

    /// Some solution `X` of `self · X = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "solve dimension mismatch");
        let mut aug = Matrix::hstack(self.rows, &[self, b]);
        let pivots = aug.rref_in_place(self.cols);
        for i in pivots.len()..self.rows {
            if (self.cols..aug.cols).any(|j| !aug.get(i, j).is_zero()) {
                return None;
            }
        }
        let mut x = Matrix::zeros(self.cols, b.cols);
        for (k, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, aug.get(k, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn solve_vec(&self, b: &[Scalar]) -> Option<Vector> {
        self.solve(&Matrix::column_vector(b)).map(|x| x.col(0))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::hstack(n, &[self, &Matrix::identity(n)]);
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return None;
        }
        Some(aug.columns_range(n, 2 * n))
    }

    /// Linearly independent columns chosen by pivot order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rref().1
    }
}

/// Canonical basis of `span(vectors)` in `ℂⁿ`: the nonzero rows of the reduced
/// row echelon form of the matrix whose rows are the vectors.
pub fn canonical_basis(n: usize, vectors: &[Vector]) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec());
    debug_assert_eq!(m.cols(), n);
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// `y* x`, the Euclidean inner product conjugate-linear in `y`.
pub fn dot(x: &[Scalar], y: &[Scalar]) -> Scalar {
    assert_eq!(x.len(), y.len(), "dot dimension mismatch");
    let mut acc = Scalar::zero();
    for (a, b) in x.iter().zip(y) {
        if !a.is_zero() && !b.is_zero() {
            acc += &(a * &b.conj());
        }
    }
    acc
}

pub fn vec_add(x: &[Scalar], y: &[Scalar]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn vec_sub(x: &[Scalar], y: &[Scalar]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn vec_scale(x: &[Scalar], s: &Scalar) -> Vector {
    x.iter().map(|a| a * s).collect()
}

pub fn vec_is_zero(x: &[Scalar]) -> bool {
    x.iter().all(Scalar::is_zero)
}

pub fn unit_vector(n: usize, k: usize) -> Vector {
    let mut v = vec![Scalar::zero(); n];
    v[k] = Scalar::one();
    v
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut m = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    m.data[idx] += &(a * b);
                }
            }
        }
        m
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum dimension mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix difference dimension mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(2).rank(), 2);
        assert_eq!(Matrix::from_ints(&[&[1, 1], &[1, 1]]).rank(), 1);
        let stacked = Matrix::from_ints(&[&[0, 1], &[1, 0], &[0, -1], &[-1, 0]]);
        assert_eq!(stacked.rank(), 2);
        assert_eq!(Matrix::zeros(0, 3).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        let k = Matrix::from_ints(&[&[1, 1], &[1, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![s(1), s(-1)]]);
        assert!(Matrix::identity(3).kernel_basis().is_empty());
        let i = Scalar::i();
        let m = Matrix::from_rows(vec![vec![s(1), i.clone()], vec![-&i, s(1)]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // (−i, 1) scaled to a leading one is (1, i).
        assert_eq!(k[0], vec![s(1), i.clone()]);
        assert!(vec_is_zero(&m.mul_vec(&k[0])));
        assert!(vec_is_zero(&m.mul_vec(&vec_scale(&k[0], &-&i))));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.determinant(), s(18));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(3));
        let swap = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.determinant(), s(-1));
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_reports_inconsistency() {
        let m = Matrix::from_ints(&[&[1, 1], &[2, 2]]);
        assert!(m.solve_vec(&[s(1), s(3)]).is_none());
        let x = m.solve_vec(&[s(1), s(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![s(1), s(2)]);
    }
}
