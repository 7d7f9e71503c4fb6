//! Dense exact matrices and subspaces.

use std::collections::HashMap;
use std::fmt;

use crate::scalar::{Field, Ring};

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Ring> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: Vec<Vec<F>>) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<G: Ring, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Matrix<G>, E> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    /// Determinant by expansion along rows, memoized over column subsets.
    /// Uses only ring operations, so it works for t-expressions.
    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.minor_det(&rows, &cols)
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor_det(&self, rows: &[usize], cols: &[usize]) -> F {
        assert_eq!(rows.len(), cols.len());
        let k = rows.len();
        if k == 0 {
            return F::one();
        }
        // memo[mask] = det of rows[k - |mask| ..] against the columns in mask
        let mut memo: HashMap<u32, F> = HashMap::new();
        memo.insert(0, F::one());
        for size in 1..=k {
            let r = rows[k - size];
            for mask in 0u32..(1 << k) {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let mut acc = F::zero();
                let mut sign_neg = false;
                for (p, &c) in cols.iter().enumerate() {
                    if mask & (1 << p) == 0 {
                        continue;
                    }
                    let a = self.get(r, c);
                    if !a.is_zero() {
                        let sub = &memo[&(mask & !(1 << p))];
                        if !sub.is_zero() {
                            let term = a.mul(sub);
                            acc = if sign_neg { acc.sub(&term) } else { acc.add(&term) };
                        }
                    }
                    sign_neg = !sign_neg;
                }
                memo.insert(mask, acc);
            }
        }
        memo.remove(&((1u32 << k) - 1)).expect("full mask")
    }

    /// Classical adjugate, so that `adj * M = det * I`.
    pub fn adjugate(&self) -> Self {
        assert!(self.is_square(), "adjugate of a non-square matrix");
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let m = self.minor_det(&rows, &cols);
                out.set(i, j, if (i + j) % 2 == 1 { m.neg() } else { m });
            }
        }
        out
    }
}

impl<F: Field> Matrix<F> {
    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = r.get(i, f).neg();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(out)
    }

    /// One solution of `M x = b`, if any.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }
}

impl<F: Ring> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Subspace of F^n stored as the nonzero rows of a reduced echelon basis,
/// so equal subspaces compare equal.
#[derive(Clone, PartialEq)]
pub struct Subspace<F> {
    n: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn span(n: usize, vectors: &[Vec<F>]) -> Self {
        let rows: Vec<Vec<F>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
        if rows.is_empty() {
            return Self::zero(n);
        }
        for v in &rows {
            assert_eq!(v.len(), n, "vector of the wrong length");
        }
        let (r, pivots) = Matrix::from_rows(rows).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { n, basis, pivots }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn whole(n: usize) -> Self {
        let id = Matrix::<F>::identity(n);
        Subspace { n, basis: (0..n).map(|i| id.row(i).to_vec()).collect(), pivots: (0..n).collect() }
    }

    /// `<e_k, ..., e_n>` for 1-based k; `k = n + 1` gives zero.
    pub fn tail(n: usize, k: usize) -> Self {
        let id = Matrix::<F>::identity(n);
        let idx: Vec<usize> = (k.saturating_sub(1)..n).collect();
        Subspace { n, basis: idx.iter().map(|&i| id.row(i).to_vec()).collect(), pivots: idx }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    /// Subtract the pivot components, giving the canonical representative
    /// of `v` modulo the subspace.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let f = out[p].clone();
            if f.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                *o = o.sub(&f.mul(r));
            }
        }
        out
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn contains_space(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::span(self.n, &all)
    }

    /// Vectors orthogonal to every basis vector under the plain dot product.
    pub fn orthogonal(&self) -> Self {
        if self.basis.is_empty() {
            return Self::whole(self.n);
        }
        Self::span(self.n, &Matrix::from_rows(self.basis.clone()).kernel())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.orthogonal().sum(&other.orthogonal()).orthogonal()
    }
}

impl<F: Ring> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", row.join(", "))?;
        }
        write!(f, ">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    fn m(rows: &[&[i64]]) -> Matrix<GaussRat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| GaussRat::from_i64(x)).collect()).collect())
    }

    #[test]
    fn determinant_and_adjugate() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), GaussRat::from_i64(18));
        let prod = a.adjugate().mul(&a);
        assert_eq!(prod, Matrix::<GaussRat>::identity(3).map(|x| x.mul(&GaussRat::from_i64(18))));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn subspaces_are_canonical() {
        let one = GaussRat::one;
        let z = GaussRat::zero;
        let u = Subspace::span(3, &[vec![one(), one(), z()], vec![z(), one(), z()]]);
        let w = Subspace::span(3, &[vec![one(), z(), z()], vec![one(), GaussRat::from_i64(5), z()]]);
        assert_eq!(u, w);
        let x = Subspace::span(3, &[vec![z(), one(), one()]]);
        assert_eq!(u.intersect(&x).dim(), 0);
        assert_eq!(u.sum(&x), Subspace::whole(3));
        assert_eq!(Subspace::<GaussRat>::tail(3, 2).dim(), 2);
    }
}
