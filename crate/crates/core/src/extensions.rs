//! Central extensions by bilinear forms and the second cohomology.
//!
//! A form θ on an m-dimensional algebra is an m×m matrix with
//! `θ(e_i, e_j) = θ[i][j]`. Forms of a given flavor are compared as flattened
//! vectors of length m².

use std::fmt;

use crate::algebra::{combination_text, Algebra, Flavor};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{Coeff, Field};

#[derive(Clone, PartialEq)]
pub struct Cocycle<F> {
    pub matrix: Matrix<F>,
    pub flavor: Flavor,
}

impl<F: Field> Cocycle<F> {
    pub fn new(matrix: Matrix<F>, flavor: Flavor) -> Self {
        assert!(matrix.is_square(), "a bilinear form needs a square matrix");
        Cocycle { matrix, flavor }
    }

    pub fn zero(m: usize, flavor: Flavor) -> Self {
        Cocycle { matrix: Matrix::zeros(m, m), flavor }
    }

    /// `Δ_ij` (1-based): symmetric `e_i*e_j + e_j*e_i` (just `e_i*e_i` on the
    /// diagonal), antisymmetric `e_i*e_j - e_j*e_i`, or the single entry.
    pub fn delta(m: usize, i: usize, j: usize, flavor: Flavor) -> Self {
        assert!((1..=m).contains(&i) && (1..=m).contains(&j), "Δ index out of range");
        let (i, j) = (i - 1, j - 1);
        let mut mat = Matrix::zeros(m, m);
        mat.set(i, j, F::one());
        match flavor {
            Flavor::Commutative => mat.set(j, i, F::one()),
            Flavor::Anticommutative => {
                assert!(i != j, "antisymmetric Δ_ii vanishes");
                mat.set(j, i, F::one().neg());
            }
            Flavor::Neither => {}
        }
        Cocycle { matrix: mat, flavor }
    }

    /// Parse `D12` or `D1_2`.
    pub fn parse_delta(m: usize, s: &str, flavor: Flavor) -> Option<Self> {
        let rest = s.trim().strip_prefix('D')?;
        let (i, j) = if let Some((a, b)) = rest.split_once('_') {
            (a.parse().ok()?, b.parse().ok()?)
        } else if rest.len() == 2 {
            (rest[..1].parse().ok()?, rest[1..].parse().ok()?)
        } else {
            return None;
        };
        if !(1..=m).contains(&i) || !(1..=m).contains(&j) || (flavor == Flavor::Anticommutative && i == j) {
            return None;
        }
        Some(Self::delta(m, i, j, flavor))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn flat(&self) -> Vec<F> {
        self.matrix.entries().to_vec()
    }

    pub fn from_flat(m: usize, v: Vec<F>, flavor: Flavor) -> Self {
        Cocycle { matrix: Matrix::new(m, m, v), flavor }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let v = self.flat().iter().zip(rhs.flat()).map(|(a, b)| a.add(&b)).collect();
        Self::from_flat(self.dim(), v, self.flavor)
    }

    pub fn scale(&self, c: &F) -> Self {
        Cocycle { matrix: self.matrix.map(|x| x.mul(c)), flavor: self.flavor }
    }

    pub fn eval(&self, x: &[F], y: &[F]) -> F {
        let my = self.matrix.mul_vec(y);
        x.iter().zip(&my).fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
    }

    /// Whether the matrix has the symmetry of the flavor flag.
    pub fn is_consistent(&self) -> bool {
        let m = &self.matrix;
        let t = m.transpose();
        match self.flavor {
            Flavor::Commutative => *m == t,
            Flavor::Anticommutative => *m == t.map(|x| x.neg()),
            Flavor::Neither => true,
        }
    }

    /// `(φθ)(x, y) = θ(φx, φy)`, i.e. `φᵀ θ φ`.
    pub fn act(&self, phi: &Matrix<F>) -> Self {
        Cocycle { matrix: phi.transpose().mul(&self.matrix).mul(phi), flavor: self.flavor }
    }

    /// `θ^⊥ = {x : θ(x, A) = θ(A, x) = 0}`.
    pub fn perp(&self) -> Subspace<F> {
        let m = self.dim();
        let mut rows: Vec<Vec<F>> = (0..m).map(|i| self.matrix.row(i).to_vec()).collect();
        rows.extend((0..m).map(|j| self.matrix.col(j)));
        Subspace::span(m, &Matrix::from_rows(rows).kernel())
    }
}

impl<F: Coeff> Cocycle<F> {
    /// Sum of `D_ij` symbols.
    pub fn text(&self) -> String {
        let m = self.dim();
        let mut coords = Vec::new();
        let mut names = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let keep = match self.flavor {
                    Flavor::Commutative | Flavor::Anticommutative => i < j || (i == j && self.flavor == Flavor::Commutative),
                    Flavor::Neither => true,
                };
                if keep {
                    coords.push(self.matrix.get(i, j).clone());
                    names.push(format!("D{}{}", i + 1, j + 1));
                }
            }
        }
        combination_text(&coords, &names)
    }
}

impl<F: Coeff> fmt::Debug for Cocycle<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

/// All bilinear forms of the flavor, in the order `D11, D12, ..., Dmm`
/// restricted to `i <= j` (symmetric) or `i < j` (antisymmetric).
pub fn form_basis<F: Field>(m: usize, flavor: Flavor) -> Vec<Cocycle<F>> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in 1..=m {
            let keep = match flavor {
                Flavor::Commutative => i <= j,
                Flavor::Anticommutative => i < j,
                Flavor::Neither => true,
            };
            if keep {
                out.push(Cocycle::delta(m, i, j, flavor));
            }
        }
    }
    out
}

/// `δf(x, y) = f(xy)` for f running over the dual basis, reduced to a basis.
pub fn coboundary_basis<F: Field>(a: &Algebra<F>) -> Vec<Cocycle<F>> {
    let m = a.dim();
    let flavor = a.flavor();
    let forms: Vec<Vec<F>> = (0..m)
        .map(|k| {
            let mut v = Vec::with_capacity(m * m);
            for i in 0..m {
                for j in 0..m {
                    v.push(a.c(i, j, k).clone());
                }
            }
            v
        })
        .collect();
    Subspace::span(m * m, &forms)
        .basis()
        .iter()
        .map(|v| Cocycle::from_flat(m, v.clone(), flavor))
        .collect()
}

/// B² as a subspace of flattened forms.
pub fn coboundaries<F: Field>(a: &Algebra<F>) -> Subspace<F> {
    let m = a.dim();
    let flat: Vec<Vec<F>> = coboundary_basis(a).iter().map(|c| c.flat()).collect();
    Subspace::span(m * m, &flat)
}

/// Representatives of a basis of `H² = Z²_flavor / B²`, chosen greedily
/// among the `Δ_ij` in order.
pub fn h2_basis<F: Field>(a: &Algebra<F>, flavor: Flavor) -> Vec<Cocycle<F>> {
    let m = a.dim();
    let b2 = coboundaries(a);
    let mut span = b2;
    let mut out = Vec::new();
    for d in form_basis::<F>(m, flavor) {
        let v = d.flat();
        if !span.contains(&v) {
            span = span.sum(&Subspace::span(m * m, &[v]));
            out.push(d);
        }
    }
    out
}

/// Canonical representative of `[θ]`.
pub fn class_rep<F: Field>(b2: &Subspace<F>, theta: &Cocycle<F>) -> Cocycle<F> {
    Cocycle::from_flat(theta.dim(), b2.reduce(&theta.flat()), theta.flavor)
}

pub fn same_class<F: Field>(b2: &Subspace<F>, x: &Cocycle<F>, y: &Cocycle<F>) -> bool {
    class_rep(b2, x) == class_rep(b2, y)
}

/// Coordinates of `[θ]` in the basis `[∇_1], ..., [∇_s]` of a cohomology
/// space; `None` if θ is not in the span of the ∇ and B².
pub fn h2_coordinates<F: Field>(b2: &Subspace<F>, nabla: &[Cocycle<F>], theta: &Cocycle<F>) -> Option<Vec<F>> {
    let mut cols: Vec<Vec<F>> = nabla.iter().map(|c| c.flat()).collect();
    cols.extend(b2.basis().iter().cloned());
    let x = Matrix::from_cols(cols).solve(&theta.flat())?;
    Some(x[..nabla.len()].to_vec())
}

/// `A ⊕ V` with `(x + x')(y + y') = xy + Σ θ_r(x, y) e_{m+r}`.
pub fn central_extension<F: Field>(a: &Algebra<F>, thetas: &[Cocycle<F>]) -> Algebra<F> {
    let m = a.dim();
    let n = m + thetas.len();
    let mut out = Algebra::zero(n);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                out.set(i, j, k, a.c(i, j, k).clone());
            }
            for (r, th) in thetas.iter().enumerate() {
                assert_eq!(th.dim(), m, "cocycle over a different base");
                out.set(i, j, m + r, th.matrix.get(i, j).clone());
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsVerdict {
    Ok,
    AnnihilatorOverlap,
    DependentClasses,
}

/// `∩ θ_r^⊥ ∩ Ann(A) = 0` and the classes are independent in H².
pub fn ts_check<F: Field>(a: &Algebra<F>, thetas: &[Cocycle<F>]) -> TsVerdict {
    let m = a.dim();
    let b2 = coboundaries(a);
    let reps: Vec<Vec<F>> = thetas.iter().map(|t| class_rep(&b2, t).flat()).collect();
    if Subspace::span(m * m, &reps).dim() < thetas.len() {
        return TsVerdict::DependentClasses;
    }
    if !joint_perp(a, thetas).intersect(&a.annihilator()).is_zero() {
        return TsVerdict::AnnihilatorOverlap;
    }
    TsVerdict::Ok
}

fn joint_perp<F: Field>(a: &Algebra<F>, thetas: &[Cocycle<F>]) -> Subspace<F> {
    thetas.iter().fold(Subspace::whole(a.dim()), |acc, t| acc.intersect(&t.perp()))
}

/// `Ann(A_θ) = (θ^⊥ ∩ Ann(A)) ⊕ V`, both sides computed.
pub fn annihilator_formula_check<F: Field>(a: &Algebra<F>, thetas: &[Cocycle<F>]) -> bool {
    let m = a.dim();
    let n = m + thetas.len();
    let lhs = central_extension(a, thetas).annihilator();
    let base = joint_perp(a, thetas).intersect(&a.annihilator());
    let mut vs: Vec<Vec<F>> = base
        .basis()
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.resize(n, F::zero());
            w
        })
        .collect();
    for r in m..n {
        let mut e = vec![F::zero(); n];
        e[r] = F::one();
        vs.push(e);
    }
    lhs == Subspace::span(n, &vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussRat, Ring};

    fn c01() -> Algebra<GaussRat> {
        let mut a = Algebra::zero(3);
        a.set(0, 0, 1, GaussRat::one());
        a
    }

    #[test]
    fn cohomology_of_a_square() {
        let a = c01();
        assert_eq!(coboundary_basis(&a).len(), 1);
        let h = h2_basis(&a, Flavor::Commutative);
        let names: Vec<String> = h.iter().map(|c| c.text()).collect();
        assert_eq!(names, ["D12", "D13", "D22", "D23", "D33"]);
    }

    #[test]
    fn perp_overlap() {
        let a = c01();
        let d22 = Cocycle::delta(3, 2, 2, Flavor::Commutative);
        assert_eq!(ts_check(&a, &[d22]), TsVerdict::AnnihilatorOverlap);
        let d11 = Cocycle::delta(3, 1, 1, Flavor::Commutative);
        let d33 = Cocycle::delta(3, 3, 3, Flavor::Commutative);
        assert_eq!(ts_check(&a, &[d33.clone(), d33.add(&d11)]), TsVerdict::DependentClasses);
    }

    #[test]
    fn text_names_forms() {
        let d = Cocycle::<GaussRat>::delta(4, 1, 2, Flavor::Anticommutative)
            .add(&Cocycle::delta(4, 3, 4, Flavor::Anticommutative).scale(&GaussRat::from_i64(-2)));
        assert_eq!(d.text(), "D12 - 2 D34");
        assert_eq!(Cocycle::<GaussRat>::parse_delta(4, "D34", Flavor::Anticommutative).unwrap().text(), "D34");
    }
}
