#![allow(dead_code)]

use rand::Rng as _;

use nildegen::algebra::{Algebra, Flavor};
use nildegen::catalog::Corpus;
use nildegen::extensions::{coboundary_basis, form_basis, Cocycle};
use nildegen::linalg::{Matrix, Subspace};
use nildegen::rng::{self, SeededRng};
use nildegen::scalar::{Field, GaussRat, Ring};

pub fn corpus() -> Corpus {
    Corpus::embedded()
}

/// A catalog algebra at a random default sample, with its variety flavor.
pub fn catalog_algebra(c: &Corpus, r: &mut SeededRng) -> (String, Algebra<GaussRat>, Flavor) {
    let e = &c.algebras[r.gen_range(0..c.algebras.len())];
    let p = if e.is_family() {
        let s = e.default_samples();
        Some(s[r.gen_range(0..s.len())].clone())
    } else {
        None
    };
    (e.id.clone(), e.algebra(p.as_ref()).expect("catalog entry evaluates"), e.flavor)
}

/// Random structure constants of the flavor, small entries, mostly zero.
pub fn random_algebra(r: &mut SeededRng, n: usize, flavor: Flavor) -> Algebra<GaussRat> {
    let mut a = Algebra::zero(n);
    for i in 0..n {
        for j in 0..n {
            let lower = match flavor {
                Flavor::Neither => false,
                _ => j < i,
            };
            if lower || (flavor == Flavor::Anticommutative && i == j) {
                continue;
            }
            for k in 0..n {
                if r.gen_bool(0.3) {
                    let x = rng::small(r);
                    a.set(i, j, k, x.clone());
                    match flavor {
                        Flavor::Commutative => a.set(j, i, k, x),
                        Flavor::Anticommutative => a.set(j, i, k, x.neg()),
                        Flavor::Neither => {}
                    }
                }
            }
        }
    }
    a
}

pub fn random_form(r: &mut SeededRng, m: usize, flavor: Flavor) -> Cocycle<GaussRat> {
    form_basis::<GaussRat>(m, flavor)
        .iter()
        .fold(Cocycle::zero(m, flavor), |acc, d| if r.gen_bool(0.4) { acc.add(&d.scale(&rng::small(r))) } else { acc })
}

/// A random coboundary `δf` of `a`.
pub fn random_coboundary(r: &mut SeededRng, a: &Algebra<GaussRat>, flavor: Flavor) -> Cocycle<GaussRat> {
    let m = a.dim();
    coboundary_basis(a)
        .iter()
        .fold(Cocycle::zero(m, flavor), |acc, b| acc.add(&Cocycle::from_flat(m, b.scale(&rng::entry(r)).flat(), flavor)))
}

/// Elements killed by every form on both sides, by a direct kernel.
pub fn joint_perp(m: usize, thetas: &[Cocycle<GaussRat>]) -> Subspace<GaussRat> {
    let mut rows = Vec::new();
    for t in thetas {
        for i in 0..m {
            rows.push(t.matrix.row(i).to_vec());
            rows.push(t.matrix.col(i));
        }
    }
    if rows.is_empty() {
        return Subspace::whole(m);
    }
    Subspace::span(m, &Matrix::from_rows(rows).kernel())
}

/// `x` with `x e_j = e_j x = 0` for all j, from the structure constants.
pub fn annihilator_oracle<F: Field>(a: &Algebra<F>) -> Subspace<F> {
    let n = a.dim();
    let mut rows = Vec::new();
    for j in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|i| a.c(i, j, k).clone()).collect());
            rows.push((0..n).map(|i| a.c(j, i, k).clone()).collect());
        }
    }
    Subspace::span(n, &Matrix::from_rows(rows).kernel())
}

pub fn seeds() -> [u64; 3] {
    [11, 23, 47]
}
