//! Algebras given by structure constants.

use std::fmt;

use serde::Serialize;

use crate::linalg::{Matrix, Subspace};
use crate::scalar::{Coeff, Field, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Commutative,
    Anticommutative,
    Neither,
}

impl Flavor {
    pub fn parse(s: &str) -> Option<Flavor> {
        match s.trim() {
            "commutative" => Some(Flavor::Commutative),
            "anticommutative" => Some(Flavor::Anticommutative),
            "neither" | "general" => Some(Flavor::Neither),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Commutative => "commutative",
            Flavor::Anticommutative => "anticommutative",
            Flavor::Neither => "neither",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `e_i e_j = sum_k c[i][j][k] e_k`, indices 0-based in code and 1-based in
/// text.
#[derive(Clone, PartialEq)]
pub struct Algebra<F> {
    n: usize,
    c: Vec<F>,
}

impl<F: Ring> Algebra<F> {
    pub fn new(n: usize, c: Vec<F>) -> Self {
        assert_eq!(c.len(), n * n * n, "need n^3 structure constants");
        Algebra { n, c }
    }

    pub fn zero(n: usize) -> Self {
        Algebra { n, c: vec![F::zero(); n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &F {
        &self.c[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, x: F) {
        let p = self.idx(i, j, k);
        self.c[p] = x;
    }

    pub fn constants(&self) -> &[F] {
        &self.c
    }

    /// Coordinates of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<F> {
        (0..self.n).map(|k| self.c(i, j, k).clone()).collect()
    }

    pub fn multiply(&self, x: &[F], y: &[F]) -> Vec<F> {
        assert!(x.len() == self.n && y.len() == self.n, "vector length differs from the dimension");
        let mut out = vec![F::zero(); self.n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = xi.mul(yj);
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o = o.add(&s.mul(c));
                    }
                }
            }
        }
        out
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Algebra<G> {
        Algebra { n: self.n, c: self.c.iter().map(f).collect() }
    }

    pub fn try_map<G: Ring, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Algebra<G>, E> {
        Ok(Algebra { n: self.n, c: self.c.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.c(i, j, k) == self.c(j, i, k))))
    }

    pub fn is_anticommutative(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| *self.c(i, j, k) == self.c(j, i, k).neg()))
                && (0..n).all(|k| self.c(i, i, k).is_zero())
        })
    }

    /// The zero product counts as commutative.
    pub fn flavor(&self) -> Flavor {
        if self.is_commutative() {
            Flavor::Commutative
        } else if self.is_anticommutative() {
            Flavor::Anticommutative
        } else {
            Flavor::Neither
        }
    }

    pub fn satisfies(&self, flavor: Flavor) -> bool {
        match flavor {
            Flavor::Commutative => self.is_commutative(),
            Flavor::Anticommutative => self.is_anticommutative(),
            Flavor::Neither => true,
        }
    }

    /// Structure constants in the basis given by the columns of `p`, as
    /// numerators over the common denominator `det p`. Ring operations only.
    pub fn transport(&self, p: &Matrix<F>) -> (Algebra<F>, F) {
        assert!(p.rows() == self.n && p.cols() == self.n, "basis matrix has the wrong size");
        let adj = p.adjugate();
        let det = p.det();
        let cols: Vec<Vec<F>> = (0..self.n).map(|j| p.col(j)).collect();
        let mut out = Algebra::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let prod = self.multiply(&cols[i], &cols[j]);
                let num = adj.mul_vec(&prod);
                for (k, x) in num.into_iter().enumerate() {
                    out.set(i, j, k, x);
                }
            }
        }
        (out, det)
    }
}

impl<F: Field> Algebra<F> {
    /// `P^{-1} mu(P e_i, P e_j)`; `None` when `p` is singular.
    pub fn change_basis(&self, p: &Matrix<F>) -> Option<Algebra<F>> {
        let inv = p.inverse()?;
        let cols: Vec<Vec<F>> = (0..self.n).map(|j| p.col(j)).collect();
        let mut out = Algebra::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let v = inv.mul_vec(&self.multiply(&cols[i], &cols[j]));
                for (k, x) in v.into_iter().enumerate() {
                    out.set(i, j, k, x);
                }
            }
        }
        Some(out)
    }

    /// Matrix of `y -> x y` (`left = true`) or `y -> y x`.
    pub fn mult_matrix(&self, x: &[F], left: bool) -> Matrix<F> {
        let cols: Vec<Vec<F>> = (0..self.n)
            .map(|j| {
                let mut e = vec![F::zero(); self.n];
                e[j] = F::one();
                if left {
                    self.multiply(x, &e)
                } else {
                    self.multiply(&e, x)
                }
            })
            .collect();
        Matrix::from_cols(cols)
    }

    pub fn annihilator(&self) -> Subspace<F> {
        let n = self.n;
        // x e_j = 0 and e_j x = 0 for all j: 2 n^2 linear equations in x
        let mut rows = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|i| self.c(i, j, k).clone()).collect::<Vec<F>>());
                rows.push((0..n).map(|i| self.c(j, i, k).clone()).collect::<Vec<F>>());
            }
        }
        Subspace::span(n, &Matrix::from_rows(rows).kernel())
    }

    pub fn subspace_product(&self, u: &Subspace<F>, w: &Subspace<F>) -> Subspace<F> {
        let mut vs = Vec::new();
        for x in u.basis() {
            for y in w.basis() {
                vs.push(self.multiply(x, y));
            }
        }
        Subspace::span(self.n, &vs)
    }

    /// `A^1, A^2, ...` with `A^k` the sum of `A^p A^q` over `p + q = k`,
    /// stopping at the first zero power. `None` if no power vanishes within
    /// the bound.
    pub fn powers(&self) -> Option<Vec<Subspace<F>>> {
        let mut pw = vec![Subspace::whole(self.n)];
        let bound = 1usize << self.n.min(10);
        while !pw.last().expect("nonempty").is_zero() {
            let k = pw.len() + 1;
            if k > bound + 1 {
                return None;
            }
            let mut acc = Subspace::zero(self.n);
            for p in 1..k {
                let q = k - p;
                acc = acc.sum(&self.subspace_product(&pw[p - 1], &pw[q - 1]));
            }
            pw.push(acc);
        }
        Some(pw)
    }

    /// Smallest k with `A^k = 0`.
    pub fn nilpotency_index(&self) -> Option<usize> {
        self.powers().map(|p| p.len())
    }

    /// Span of all squares `x x`, by polarization.
    pub fn squares(&self) -> Subspace<F> {
        let mut vs = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                let mut v = self.basis_product(i, j);
                if i != j {
                    v = v.iter().zip(self.basis_product(j, i)).map(|(a, b)| a.add(&b)).collect();
                }
                vs.push(v);
            }
        }
        Subspace::span(self.n, &vs)
    }
}

/// Render `sum x_k e_k`.
pub fn vector_text<F: Coeff>(v: &[F], basis: &str) -> String {
    let names: Vec<String> = (1..=v.len()).map(|k| format!("{basis}_{k}")).collect();
    combination_text(v, &names)
}

/// Render `sum x_k name_k`, skipping zero coefficients.
pub fn combination_text<F: Coeff>(coords: &[F], names: &[String]) -> String {
    let mut out = String::new();
    for (x, name) in coords.iter().zip(names) {
        if x.is_zero() {
            continue;
        }
        let neg = x.is_negative_looking();
        let a = if neg { x.neg() } else { x.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            if a.is_compound() {
                out.push_str(&format!("({a}) "));
            } else {
                out.push_str(&format!("{a} "));
            }
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl<F: Coeff> Algebra<F> {
    /// Nonzero products as `e_i e_j = ...` lines.
    pub fn table_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.basis_product(i, j);
                if v.iter().any(|x| !x.is_zero()) {
                    out.push(format!("e_{} e_{} = {}", i + 1, j + 1, vector_text(&v, "e")));
                }
            }
        }
        out
    }
}

impl<F: Coeff> fmt::Display for Algebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines = self.table_lines();
        if lines.is_empty() {
            return write!(f, "zero product in dimension {}", self.n);
        }
        write!(f, "{}", lines.join(", "))
    }
}

impl<F: Coeff> fmt::Debug for Algebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
