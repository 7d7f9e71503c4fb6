//! Isomorphism invariants and a bounded isomorphism search.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Algebra, Flavor};
use crate::linalg::{Matrix, Subspace};
use crate::rng::{self, SeededRng};
use crate::scalar::{Coeff, Field, GaussRat, Ring};

/// Dimension of the space of derivations `D(xy) = D(x) y + x D(y)`.
pub fn derivation_dim<F: Field>(a: &Algebra<F>) -> usize {
    let n = a.dim();
    // unknown d[l][m] is the e_l coordinate of D(e_m), column index l * n + m
    let var = |l: usize, m: usize| l * n + m;
    let mut rows = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = vec![F::zero(); n * n];
                for l in 0..n {
                    // D(e_i e_j)_k
                    let c = a.c(i, j, l);
                    if !c.is_zero() {
                        row[var(k, l)] = row[var(k, l)].add(c);
                    }
                    // D(e_i) e_j
                    let c = a.c(l, j, k);
                    if !c.is_zero() {
                        row[var(l, i)] = row[var(l, i)].sub(c);
                    }
                    // e_i D(e_j)
                    let c = a.c(i, l, k);
                    if !c.is_zero() {
                        row[var(l, j)] = row[var(l, j)].sub(c);
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return n * n;
    }
    n * n - Matrix::from_rows(rows).rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub flavor: Flavor,
    pub der: usize,
    pub ann: usize,
    /// dims of A^2, A^3, ... down to the first zero
    pub powers: Vec<usize>,
    pub squares: usize,
    pub nilpotency: Option<usize>,
}

pub fn fingerprint<F: Field>(a: &Algebra<F>) -> Fingerprint {
    let powers = a.powers();
    Fingerprint {
        dim: a.dim(),
        flavor: a.flavor(),
        der: derivation_dim(a),
        ann: a.annihilator().dim(),
        powers: powers.as_ref().map_or(Vec::new(), |p| p.iter().skip(1).map(|s| s.dim()).collect()),
        squares: a.squares().dim(),
        nilpotency: powers.map(|p| p.len()),
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pw: Vec<String> = self.powers.iter().map(|d| d.to_string()).collect();
        write!(
            f,
            "dim={} flavor={} der={} ann={} powers={} squares={} nil={}",
            self.dim,
            self.flavor,
            self.der,
            self.ann,
            pw.join(","),
            self.squares,
            self.nilpotency.map_or("none".to_string(), |k| k.to_string())
        )
    }
}

/// How an isomorphism was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoMethod {
    Identity,
    PermutationScaling,
    RandomWords,
}

/// A verified isomorphism: `change_basis(a, p) == b`.
#[derive(Clone, Debug)]
pub struct Isomorphism {
    pub p: Matrix<GaussRat>,
    pub method: IsoMethod,
}

/// Search for `P` with `change_basis(a, P) = b`. Every returned map has been
/// checked exactly; `None` only means the budget ran out.
pub fn find_isomorphism(
    a: &Algebra<GaussRat>,
    b: &Algebra<GaussRat>,
    budget: usize,
    seed: u64,
) -> Option<Isomorphism> {
    assert_eq!(a.dim(), b.dim(), "isomorphism search between different dimensions");
    let n = a.dim();
    let verified = |p: &Matrix<GaussRat>| a.change_basis(p).as_ref() == Some(b);
    let id = Matrix::identity(n);
    if verified(&id) {
        return Some(Isomorphism { p: id, method: IsoMethod::Identity });
    }
    if n <= 6 {
        for perm in permutations(n) {
            if let Some(p) = scaled_permutation(a, b, &perm) {
                if verified(&p) {
                    return Some(Isomorphism { p, method: IsoMethod::PermutationScaling });
                }
            }
        }
    }
    let mut rng = rng::seeded(seed);
    let words = WordBasis::new(b)?;
    let slots = aligned_subspaces(a, b, words.generators());
    for _ in 0..budget {
        if let Some(p) = words.candidate(a, &slots, &mut rng) {
            if verified(&p) {
                return Some(Isomorphism { p, method: IsoMethod::RandomWords });
            }
        }
    }
    None
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Try `P e_i = l_i e_{perm(i)}`, solving for the scalings.
fn scaled_permutation(a: &Algebra<GaussRat>, b: &Algebra<GaussRat>, perm: &[usize]) -> Option<Matrix<GaussRat>> {
    let n = a.dim();
    // l_i l_j ca[perm i][perm j][perm k] = l_k cb[i][j][k]
    let mut eqs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let ca = a.c(perm[i], perm[j], perm[k]);
                let cb = b.c(i, j, k);
                if ca.is_zero() != cb.is_zero() {
                    return None;
                }
                if !ca.is_zero() {
                    eqs.push((i, j, k, ca.div(cb).expect("nonzero")));
                }
            }
        }
    }
    let lam = solve_scalings(n, &eqs, &mut vec![None; n], 0)?;
    let mut p = Matrix::zeros(n, n);
    for i in 0..n {
        p.set(perm[i], i, lam[i].clone());
    }
    Some(p)
}

/// Depth-first solution of `l_i l_j r = l_k` with nonzero unknowns.
fn solve_scalings(
    n: usize,
    eqs: &[(usize, usize, usize, GaussRat)],
    lam: &mut Vec<Option<GaussRat>>,
    depth: usize,
) -> Option<Vec<GaussRat>> {
    if depth > 3 * n {
        return None;
    }
    let mut progress = true;
    let saved = lam.clone();
    let fail = |lam: &mut Vec<Option<GaussRat>>| {
        *lam = saved.clone();
        None
    };
    while progress {
        progress = false;
        for (i, j, k, r) in eqs {
            let (i, j, k) = (*i, *j, *k);
            match (&lam[i], &lam[j], &lam[k]) {
                (Some(x), Some(y), Some(z)) => {
                    if x.mul(y).mul(r) != *z {
                        return fail(lam);
                    }
                }
                (Some(x), Some(y), None) => {
                    lam[k] = Some(x.mul(y).mul(r));
                    progress = true;
                }
                (Some(x), None, Some(z)) if i != j => {
                    lam[j] = Some(z.div(&x.mul(r)).expect("nonzero"));
                    progress = true;
                }
                (None, Some(y), Some(z)) if i != j => {
                    lam[i] = Some(z.div(&y.mul(r)).expect("nonzero"));
                    progress = true;
                }
                _ => {}
            }
        }
    }
    // a square l_i^2 r = l_k with l_k known: branch on the two roots
    for (i, j, k, r) in eqs {
        if i == j && lam[*i].is_none() {
            if let Some(z) = &lam[*k] {
                let Some(root) = z.div(r).expect("nonzero").root(2) else {
                    return fail(lam);
                };
                for s in [root.clone(), root.neg()] {
                    let mut next = lam.clone();
                    next[*i] = Some(s);
                    if let Some(sol) = solve_scalings(n, eqs, &mut next, depth + 1) {
                        return Some(sol);
                    }
                }
                return fail(lam);
            }
        }
    }
    match lam.iter().position(|x| x.is_none()) {
        None => Some(lam.iter().map(|x| x.clone().expect("assigned")).collect()),
        Some(free) => {
            for v in [GaussRat::one(), GaussRat::from_i64(-1), GaussRat::i(), GaussRat::i().neg()] {
                let mut next = lam.clone();
                next[free] = Some(v);
                if let Some(sol) = solve_scalings(n, eqs, &mut next, depth + 1) {
                    return Some(sol);
                }
            }
            fail(lam)
        }
    }
}

/// A spanning set of words in generators of `b`, reduced to a basis.
struct WordBasis {
    gens: Vec<usize>,
    /// word r is either generator `gens[g]` or the product of words (l, r)
    words: Vec<Word>,
    /// indices of the words forming a basis, and the inverse of their
    /// coordinate matrix in `b`
    basis: Vec<usize>,
    inv: Matrix<GaussRat>,
}

#[derive(Clone, Copy)]
enum Word {
    Gen(usize),
    Prod(usize, usize),
}

impl WordBasis {
    fn new(b: &Algebra<GaussRat>) -> Option<Self> {
        let n = b.dim();
        let sq = b.subspace_product(&Subspace::whole(n), &Subspace::whole(n));
        let mut gens = Vec::new();
        let mut span = sq.clone();
        for k in 0..n {
            let mut e = vec![GaussRat::zero(); n];
            e[k] = GaussRat::one();
            if !span.contains(&e) {
                span = span.sum(&Subspace::span(n, &[e]));
                gens.push(k);
            }
        }
        let mut words: Vec<Word> = (0..gens.len()).map(Word::Gen).collect();
        let mut vals: Vec<Vec<GaussRat>> = gens
            .iter()
            .map(|&k| {
                let mut e = vec![GaussRat::zero(); n];
                e[k] = GaussRat::one();
                e
            })
            .collect();
        let mut basis: Vec<usize> = (0..gens.len()).collect();
        let mut cur = Subspace::span(n, &vals);
        let mut frontier = 0;
        while cur.dim() < n {
            let len = words.len();
            if frontier == len {
                return None;
            }
            for l in 0..len {
                for r in 0..len {
                    if l < frontier && r < frontier {
                        continue;
                    }
                    let v = b.multiply(&vals[l], &vals[r]);
                    if !cur.contains(&v) {
                        cur = cur.sum(&Subspace::span(n, std::slice::from_ref(&v)));
                        basis.push(words.len());
                        words.push(Word::Prod(l, r));
                        vals.push(v);
                    }
                }
            }
            frontier = len;
        }
        let m = Matrix::from_cols(basis.iter().map(|&w| vals[w].clone()).collect());
        let inv = m.inverse()?;
        Some(WordBasis { gens, words, basis, inv })
    }

    fn generators(&self) -> &[usize] {
        &self.gens
    }

    fn candidate(
        &self,
        a: &Algebra<GaussRat>,
        slots: &[Subspace<GaussRat>],
        rng: &mut SeededRng,
    ) -> Option<Matrix<GaussRat>> {
        let n = a.dim();
        let mut vals: Vec<Vec<GaussRat>> = Vec::with_capacity(self.words.len());
        for w in &self.words {
            let v = match *w {
                Word::Gen(g) => {
                    let s = &slots[g];
                    let mut v = vec![GaussRat::zero(); n];
                    for b in s.basis() {
                        let c = rng::entry(rng);
                        for (x, y) in v.iter_mut().zip(b) {
                            *x = x.add(&c.mul(y));
                        }
                    }
                    v
                }
                Word::Prod(l, r) => a.multiply(&vals[l], &vals[r]),
            };
            vals.push(v);
        }
        let w = Matrix::from_cols(self.basis.iter().map(|&i| vals[i].clone()).collect());
        let p = w.mul(&self.inv);
        if p.det().is_zero() {
            return None;
        }
        Some(p)
    }
}

/// For each generator of `b`, the characteristic subspace of `a` matching
/// the smallest listed characteristic subspace of `b` that contains it.
fn aligned_subspaces(a: &Algebra<GaussRat>, b: &Algebra<GaussRat>, gens: &[usize]) -> Vec<Subspace<GaussRat>> {
    let n = a.dim();
    let chars = |x: &Algebra<GaussRat>| -> Vec<Subspace<GaussRat>> {
        let ann = x.annihilator();
        let mut out = vec![Subspace::whole(n), ann.clone()];
        if let Some(p) = x.powers() {
            for s in p.iter().skip(1) {
                out.push(s.clone());
                out.push(s.intersect(&ann));
                out.push(s.sum(&ann));
            }
        }
        out
    };
    let ca = chars(a);
    let cb = chars(b);
    let mut slots = vec![Subspace::whole(n); n];
    for &g in gens {
        let mut e = vec![GaussRat::zero(); n];
        e[g] = GaussRat::one();
        let mut best = 0;
        for (idx, s) in cb.iter().enumerate() {
            if s.contains(&e) && s.dim() < cb[best].dim() && ca[idx].dim() == s.dim() {
                best = idx;
            }
        }
        slots[g] = ca[best].clone();
    }
    // slots are indexed by generator position in the word basis
    gens.iter().map(|&g| slots[g].clone()).collect()
}

/// Dimension of `Der`, as in the printed tables, and the level `n^2 - der`.
pub fn level<F: Coeff>(a: &Algebra<F>) -> usize {
    a.dim() * a.dim() - derivation_dim(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize, prods: &[(usize, usize, usize, i64)]) -> Algebra<GaussRat> {
        let mut a = Algebra::zero(n);
        for &(i, j, k, c) in prods {
            a.set(i - 1, j - 1, k - 1, GaussRat::from_i64(c));
        }
        a
    }

    #[test]
    fn derivations_of_small_algebras() {
        assert_eq!(derivation_dim(&Algebra::<GaussRat>::zero(4)), 16);
        // e1 e1 = e2 in dimension 3
        assert_eq!(derivation_dim(&alg(3, &[(1, 1, 2, 1)])), 5);
    }

    #[test]
    fn rescaled_copies_are_found() {
        let a = alg(4, &[(1, 2, 3, 1), (2, 1, 3, 1)]);
        let b = alg(4, &[(2, 1, 4, 3), (1, 2, 4, 3)]);
        let iso = find_isomorphism(&a, &b, 100, 7).expect("isomorphic");
        assert_eq!(a.change_basis(&iso.p).unwrap(), b);
    }
}
