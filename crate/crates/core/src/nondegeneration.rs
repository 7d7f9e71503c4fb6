//! Certificates that a degeneration is impossible.
//!
//! A chain certificate names a closed set ℛ of structures (zeros forced by
//! `A_p A_q ⊂ A_r` and polynomial equations) that contains the source and is
//! stable under lower-triangular base change. The source must lie in ℛ and
//! the target must admit no basis putting it in ℛ. The last step is only a
//! randomized search, so a passing chain certificate is a semi-decision.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{Algebra, Flavor};
use crate::catalog::{eval_const, instance_name, AlgRef, CatalogError, CertKind, Certificate, Constraint, Corpus};
use crate::invariants::derivation_dim;
use crate::linalg::{Matrix, Subspace};
use crate::par;
use crate::rng::{self, SeededRng};
use crate::scalar::{Expr, Field, Fp, GaussRat, Ring, ScalarError};

pub const DEFAULT_SEARCH_BUDGET: usize = 10_000;
pub const DEFAULT_BOREL_TRIALS: usize = 100;
const SAMPLE_ATTEMPTS: usize = 200;

/// `A_p A_q ⊂ A_r` with `A_k = <e_k, ..., e_n>`, 1-based.
pub type Chain = (usize, usize, usize);

/// A closed subset of the variety of nilpotent algebras of one flavor.
#[derive(Clone, Debug)]
pub struct ClosedSet {
    pub n: usize,
    pub flavor: Flavor,
    pub chains: Vec<Chain>,
    /// `lhs = rhs` in the constants `c[i][j][k]` and the parameter `a`.
    pub polys: Vec<(Expr, Expr)>,
    pub a: Option<GaussRat>,
}

impl ClosedSet {
    pub fn new(n: usize, flavor: Flavor, chains: Vec<Chain>, polys: Vec<(Expr, Expr)>, a: Option<GaussRat>) -> Self {
        ClosedSet { n, flavor, chains, polys, a }
    }

    /// Whether a chain forces `c[i][j][k] = 0` (0-based).
    pub fn forced_zero(&self, i: usize, j: usize, k: usize) -> bool {
        self.chains.iter().any(|&(p, q, r)| i + 1 >= p && j + 1 >= q && k + 1 < r)
    }

    pub fn zero_positions(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.forced_zero(i, j, k) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    fn poly_values<F: Field>(
        &self,
        alg: &Algebra<F>,
        lift: &dyn Fn(&GaussRat) -> Option<F>,
    ) -> Option<Vec<F>> {
        let a = match &self.a {
            Some(a) => Some(lift(a)?),
            None => None,
        };
        let leaf = |e: &Expr| -> Option<F> {
            match e {
                Expr::Coef(i, j, k) if (1..=self.n).contains(i) && (1..=self.n).contains(j) && (1..=self.n).contains(k) => {
                    Some(alg.c(i - 1, j - 1, k - 1).clone())
                }
                Expr::Sym(s) if s == "a" => a.clone(),
                _ => None,
            }
        };
        self.polys
            .iter()
            .map(|(l, r)| Some(eval_ring(l, &leaf, lift)?.sub(&eval_ring(r, &leaf, lift)?)))
            .collect()
    }

    /// Exact membership: flavor, nilpotency, forced zeros and equations.
    pub fn contains(&self, alg: &Algebra<GaussRat>) -> bool {
        alg.dim() == self.n
            && alg.satisfies(self.flavor)
            && self.zero_positions().into_iter().all(|(i, j, k)| alg.c(i, j, k).is_zero())
            && self
                .poly_values(alg, &|z| Some(z.clone()))
                .is_some_and(|v| v.iter().all(|x| x.is_zero()))
            && alg.nilpotency_index().is_some()
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self
            .chains
            .iter()
            .map(|(p, q, r)| {
                if *r > self.n {
                    format!("A{p}A{q} = 0")
                } else {
                    format!("A{p}A{q} ⊂ A{r}")
                }
            })
            .collect();
        parts.extend(self.polys.iter().map(|(l, r)| format!("{l} = {r}")));
        parts.join(", ")
    }
}

/// Evaluate a polynomial expression in any field, with numbers mapped by
/// `lift`. Radicals and fractional powers are not supported.
fn eval_ring<F: Field>(
    e: &Expr,
    leaf: &dyn Fn(&Expr) -> Option<F>,
    lift: &dyn Fn(&GaussRat) -> Option<F>,
) -> Option<F> {
    Some(match e {
        Expr::Num(z) => lift(z)?,
        Expr::Sym(_) | Expr::Coef(..) | Expr::Basis(..) => leaf(e)?,
        Expr::Neg(a) => eval_ring(a, leaf, lift)?.neg(),
        Expr::Add(a, b) => eval_ring(a, leaf, lift)?.add(&eval_ring(b, leaf, lift)?),
        Expr::Sub(a, b) => eval_ring(a, leaf, lift)?.sub(&eval_ring(b, leaf, lift)?),
        Expr::Mul(a, b) => eval_ring(a, leaf, lift)?.mul(&eval_ring(b, leaf, lift)?),
        Expr::Div(a, b) => eval_ring(a, leaf, lift)?.div(&eval_ring(b, leaf, lift)?)?,
        Expr::Pow(a, q) if *q.denom() == 1 => eval_ring(a, leaf, lift)?.powi(*q.numer())?,
        Expr::Pow(..) | Expr::Rad(..) => return None,
    })
}

pub fn r_membership(set: &ClosedSet, alg: &Algebra<GaussRat>) -> bool {
    set.contains(alg)
}

/// Free structure constants of a strictly triangular algebra in the set:
/// `c[i][j][k]` with `k > max(i, j)`, one representative per mirror pair.
fn free_slots(set: &ClosedSet) -> Vec<(usize, usize, usize)> {
    let n = set.n;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let canonical = match set.flavor {
                Flavor::Commutative => i <= j,
                Flavor::Anticommutative => i < j,
                Flavor::Neither => true,
            };
            if !canonical {
                continue;
            }
            for k in (i.max(j) + 1)..n {
                let mirror_zero = set.flavor != Flavor::Neither && set.forced_zero(j, i, k);
                if !set.forced_zero(i, j, k) && !mirror_zero {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

fn set_slot(alg: &mut Algebra<GaussRat>, flavor: Flavor, (i, j, k): (usize, usize, usize), x: GaussRat) {
    if i != j {
        match flavor {
            Flavor::Commutative => alg.set(j, i, k, x.clone()),
            Flavor::Anticommutative => alg.set(j, i, k, x.neg()),
            Flavor::Neither => {}
        }
    }
    alg.set(i, j, k, x);
}

fn canonical_slot(flavor: Flavor, (i, j, k): (usize, usize, usize)) -> (usize, usize, usize) {
    match flavor {
        Flavor::Neither => (i, j, k),
        _ => (i.min(j), i.max(j), k),
    }
}

/// A random strictly triangular member of the set. Each equation is solved
/// for a constant in which it is affine.
pub fn sample_member(set: &ClosedSet, rng: &mut SeededRng) -> Option<Algebra<GaussRat>> {
    let slots = free_slots(set);
    for _ in 0..SAMPLE_ATTEMPTS {
        let mut alg = Algebra::zero(set.n);
        let density = rng.gen_range(0.3..1.0);
        for &s in &slots {
            if rng.gen_bool(density) {
                set_slot(&mut alg, set.flavor, s, rng::nonzero(rng));
            }
        }
        let mut ok = true;
        for idx in 0..set.polys.len() {
            let f = |alg: &Algebra<GaussRat>| -> Option<GaussRat> {
                let v = set.poly_values(alg, &|z| Some(z.clone()))?;
                Some(v[idx].clone())
            };
            if f(&alg).is_some_and(|x| x.is_zero()) {
                continue;
            }
            let mut vars: Vec<(usize, usize, usize)> = set.polys[idx]
                .0
                .coefs()
                .into_iter()
                .chain(set.polys[idx].1.coefs())
                .map(|(i, j, k)| canonical_slot(set.flavor, (i - 1, j - 1, k - 1)))
                .filter(|s| slots.contains(s))
                .collect();
            vars.sort();
            vars.dedup();
            vars.shuffle(rng);
            let mut solved = false;
            for v in vars {
                let at = |x: i64, alg: &Algebra<GaussRat>| -> Option<GaussRat> {
                    let mut b = alg.clone();
                    set_slot(&mut b, set.flavor, v, GaussRat::from_i64(x));
                    f(&b)
                };
                let vals: Option<Vec<GaussRat>> = (0..=16).map(|x| at(x, &alg)).collect();
                let Some(vals) = vals else { continue };
                let slope = vals[1].sub(&vals[0]);
                let affine = vals.windows(2).all(|w| w[1].sub(&w[0]) == slope);
                if !affine || slope.is_zero() {
                    continue;
                }
                let root = vals[0].neg().div(&slope).expect("nonzero slope");
                set_slot(&mut alg, set.flavor, v, root);
                solved = true;
                break;
            }
            if !solved {
                ok = false;
                break;
            }
        }
        if ok && set.contains(&alg) {
            return Some(alg);
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct BorelEvidence {
    pub trials: usize,
    pub stable: usize,
    /// Trials where no member could be sampled.
    pub unsampled: usize,
    pub first_failure: Option<String>,
}

impl BorelEvidence {
    pub fn passed(&self) -> bool {
        self.trials > 0 && self.stable == self.trials
    }
}

/// Apply random lower-triangular base changes to random members and check
/// that the result stays in the set.
pub fn borel_stability_evidence(set: &ClosedSet, trials: usize, seed: u64) -> BorelEvidence {
    let mut rng = rng::substream(seed, &format!("borel {}", set.describe()));
    let mut ev = BorelEvidence { trials, stable: 0, unsampled: 0, first_failure: None };
    for _ in 0..trials {
        let Some(a) = sample_member(set, &mut rng) else {
            ev.unsampled += 1;
            ev.first_failure.get_or_insert_with(|| "could not sample a member".to_string());
            continue;
        };
        let l = rng::lower_triangular(&mut rng, set.n);
        let b = a.change_basis(&l).expect("invertible lower-triangular matrix");
        if set.contains(&b) {
            ev.stable += 1;
        } else {
            ev.first_failure.get_or_insert_with(|| format!("{a} leaves the set under {l:?}"));
        }
    }
    ev
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub trials: usize,
    /// A basis putting the algebra into the set, checked exactly.
    pub found: Option<Matrix<GaussRat>>,
}

/// Characteristic subspaces: powers, annihilator, their sums and
/// intersections.
fn characteristic_subspaces(b: &Algebra<GaussRat>) -> Vec<Subspace<GaussRat>> {
    let ann = b.annihilator();
    let mut out = vec![ann.clone()];
    for p in b.powers().unwrap_or_default() {
        out.push(p.intersect(&ann));
        out.push(p.sum(&ann));
        out.push(p);
    }
    let mut uniq: Vec<Subspace<GaussRat>> = Vec::new();
    for s in out {
        if !s.is_zero() && !uniq.contains(&s) {
            uniq.push(s);
        }
    }
    uniq
}

/// Every chain `0 ⊂ W_1 ⊂ ... ⊂ k^n` that climbs through the smallest
/// characteristic subspaces containing the previous step.
fn characteristic_chains(subs: &[Subspace<GaussRat>], n: usize) -> Vec<Vec<Subspace<GaussRat>>> {
    fn grow(
        subs: &[Subspace<GaussRat>],
        n: usize,
        chain: &mut Vec<Subspace<GaussRat>>,
        out: &mut Vec<Vec<Subspace<GaussRat>>>,
    ) {
        let cur = chain.last().cloned().unwrap_or_else(|| Subspace::zero(n));
        if cur.dim() == n {
            out.push(chain.clone());
            return;
        }
        let bigger: Vec<&Subspace<GaussRat>> =
            subs.iter().filter(|s| s.dim() > cur.dim() && s.contains_space(&cur)).collect();
        match bigger.iter().map(|s| s.dim()).min() {
            Some(d) => {
                for s in bigger.into_iter().filter(|s| s.dim() == d) {
                    chain.push(s.clone());
                    grow(subs, n, chain, out);
                    chain.pop();
                }
            }
            None => {
                chain.push(Subspace::whole(n));
                grow(subs, n, chain, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(subs, n, &mut Vec::new(), &mut out);
    out
}

/// A candidate basis as random combinations of fixed vectors, kept as
/// small integer draws until it survives the modular filter.
struct Candidate {
    /// Column j is `sum_s draw * vecs[s]`.
    cols: Vec<Vec<(rng::Draw, usize)>>,
}

struct SearchSpace {
    n: usize,
    vecs: Vec<(Vec<GaussRat>, Vec<Fp>)>,
    /// Per chain: for each step, the vector indices spanning it and the
    /// number of new columns it contributes.
    chains: Vec<Vec<(Vec<usize>, usize)>>,
}

impl SearchSpace {
    fn new(b: &Algebra<GaussRat>) -> Option<Self> {
        let n = b.dim();
        let mut vecs: Vec<(Vec<GaussRat>, Vec<Fp>)> = Vec::new();
        let index = |v: &Vec<GaussRat>, vecs: &mut Vec<(Vec<GaussRat>, Vec<Fp>)>| -> Option<usize> {
            if let Some(p) = vecs.iter().position(|(w, _)| w == v) {
                return Some(p);
            }
            let f = v.iter().map(Fp::from_gauss).collect::<Option<Vec<_>>>()?;
            vecs.push((v.clone(), f));
            Some(vecs.len() - 1)
        };
        for k in 0..n {
            let mut e = vec![GaussRat::zero(); n];
            e[k] = GaussRat::one();
            index(&e, &mut vecs)?;
        }
        let subs = characteristic_subspaces(b);
        let mut chains = Vec::new();
        for chain in characteristic_chains(&subs, n) {
            let mut steps = Vec::new();
            let mut prev = 0;
            for w in &chain {
                let ids = w.basis().iter().map(|v| index(v, &mut vecs)).collect::<Option<Vec<_>>>()?;
                steps.push((ids, w.dim() - prev));
                prev = w.dim();
            }
            chains.push(steps);
        }
        Some(SearchSpace { n, vecs, chains })
    }

    fn draw(rng: &mut SeededRng, sparse: bool) -> rng::Draw {
        if sparse || rng.gen_bool(0.5) {
            rng::small_draw(rng)
        } else {
            rng::dense_draw(rng)
        }
    }

    fn random(&self, rng: &mut SeededRng) -> Candidate {
        let sparse = rng.gen_bool(0.5);
        let cols = (0..self.n).map(|_| (0..self.n).map(|s| (Self::draw(rng, sparse), s)).collect()).collect();
        Candidate { cols }
    }

    /// Trailing columns span the steps of a random characteristic chain.
    fn adapted(&self, rng: &mut SeededRng) -> Candidate {
        let sparse = rng.gen_bool(0.5);
        let chain = self.chains.choose(rng).expect("at least one chain");
        let mut cols = Vec::new();
        for (ids, count) in chain {
            for _ in 0..*count {
                cols.push(ids.iter().map(|&s| (Self::draw(rng, sparse), s)).collect());
            }
        }
        cols.reverse();
        Candidate { cols }
    }

    fn fp_matrix(&self, c: &Candidate) -> Matrix<Fp> {
        let cols = c
            .cols
            .iter()
            .map(|terms| {
                let mut v = vec![Fp::zero(); self.n];
                for (d, s) in terms {
                    if d.is_zero() {
                        continue;
                    }
                    let x = d.fp();
                    for (acc, y) in v.iter_mut().zip(&self.vecs[*s].1) {
                        *acc = acc.add(&x.mul(y));
                    }
                }
                v
            })
            .collect();
        Matrix::from_cols(cols)
    }

    fn exact_matrix(&self, c: &Candidate) -> Matrix<GaussRat> {
        let cols = c
            .cols
            .iter()
            .map(|terms| {
                let mut v = vec![GaussRat::zero(); self.n];
                for (d, s) in terms {
                    if d.is_zero() {
                        continue;
                    }
                    let x = d.gauss();
                    for (acc, y) in v.iter_mut().zip(&self.vecs[*s].0) {
                        *acc = acc.add(&x.mul(y));
                    }
                }
                v
            })
            .collect();
        Matrix::from_cols(cols)
    }
}

struct FastFilter {
    groups: BTreeMap<(usize, usize), Vec<usize>>,
    b: Option<Algebra<Fp>>,
}

enum Screen {
    Outside,
    Singular,
    Maybe,
}

impl FastFilter {
    fn new(set: &ClosedSet, b: &Algebra<GaussRat>) -> Self {
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, j, k) in set.zero_positions() {
            groups.entry((i, j)).or_default().push(k);
        }
        FastFilter { groups, b: b.try_map(|x| Fp::from_gauss(x).ok_or(())).ok() }
    }

    /// `Outside` only when the transported algebra is certainly not in the
    /// set.
    fn screen(&self, set: &ClosedSet, pp: &Matrix<Fp>) -> Screen {
        let Some(b) = &self.b else { return Screen::Maybe };
        let Some(inv) = pp.inverse() else { return Screen::Singular };
        let cols: Vec<Vec<Fp>> = (0..set.n).map(|j| pp.col(j)).collect();
        for (&(i, j), ks) in &self.groups {
            let v = b.multiply(&cols[i], &cols[j]);
            for &k in ks {
                let x = inv.row(k).iter().zip(&v).fold(Fp::zero(), |acc, (a, b)| acc.add(&a.mul(b)));
                if !x.is_zero() {
                    return Screen::Outside;
                }
            }
        }
        if set.polys.is_empty() {
            return Screen::Maybe;
        }
        let Some(t) = b.change_basis(pp) else { return Screen::Maybe };
        match set.poly_values(&t, &Fp::from_gauss) {
            Some(v) if v.iter().any(|x| !x.is_zero()) => Screen::Outside,
            _ => Screen::Maybe,
        }
    }
}

/// Randomized search for a basis putting `b` into the set: the identity,
/// random bases and bases adapted to the characteristic flag of `b`.
/// Candidates are screened modulo a prime and confirmed exactly. Finding
/// none is evidence, not proof.
pub fn search_basis_into_r(b: &Algebra<GaussRat>, set: &ClosedSet, budget: usize, seed: u64) -> SearchOutcome {
    let n = b.dim();
    if budget == 0 {
        return SearchOutcome { trials: 0, found: None };
    }
    if let Some(t) = b.change_basis(&Matrix::identity(n)) {
        if set.contains(&t) {
            return SearchOutcome { trials: 1, found: Some(Matrix::identity(n)) };
        }
    }
    let mut rng = rng::substream(seed, &format!("search {b} in {}", set.describe()));
    let space = SearchSpace::new(b);
    let filter = FastFilter::new(set, b);
    for trial in 1..budget {
        let Some(space) = &space else { break };
        let cand = if trial % 2 == 1 { space.random(&mut rng) } else { space.adapted(&mut rng) };
        let screen = filter.screen(set, &space.fp_matrix(&cand));
        if matches!(screen, Screen::Outside) {
            continue;
        }
        let p = space.exact_matrix(&cand);
        if let Some(t) = b.change_basis(&p) {
            if set.contains(&t) {
                return SearchOutcome { trials: trial + 1, found: Some(p) };
            }
        }
    }
    if space.is_none() {
        // denominators divisible by the prime: fall back to exact trials
        for trial in 1..budget {
            let p = rng::invertible(&mut rng, n);
            if b.change_basis(&p).is_some_and(|t| set.contains(&t)) {
                return SearchOutcome { trials: trial + 1, found: Some(p) };
            }
        }
    }
    SearchOutcome { trials: budget, found: None }
}

/// Flavor of the ambient variety: shared by every algebra of the class, or
/// no symmetry at all.
pub fn variety_flavor(corpus: &Corpus, class: &str) -> Flavor {
    let members = corpus.class(class);
    if members.iter().all(|e| e.flavor == Flavor::Commutative) {
        Flavor::Commutative
    } else if members.iter().all(|e| e.flavor == Flavor::Anticommutative) {
        Flavor::Anticommutative
    } else {
        Flavor::Neither
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    /// Decided exactly by the flavor or dimension argument.
    Proved(String),
    /// Chain certificate: source in ℛ, Borel evidence complete, no basis
    /// found within the budget.
    NotFound { trials: usize },
    /// The certificate does not apply or is refuted.
    Refuted(String),
}

#[derive(Clone, Debug)]
pub struct CertInstance {
    pub label: String,
    pub source: String,
    pub target: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug)]
pub struct CertReport {
    pub id: String,
    pub kind: CertKind,
    pub set: Option<String>,
    pub instances: Vec<CertInstance>,
    pub borel: Vec<(String, BorelEvidence)>,
    pub skipped: Vec<String>,
    pub error: Option<String>,
}

impl CertReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && !self.instances.is_empty()
            && self.instances.iter().all(|i| !matches!(i.outcome, Outcome::Refuted(_)))
    }

    pub fn semi_decision(&self) -> bool {
        self.instances.iter().any(|i| matches!(i.outcome, Outcome::NotFound { .. }))
    }

    pub fn details(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(s) = &self.set {
            out.push(format!("R: {s}"));
        }
        for (label, ev) in &self.borel {
            let mut line = format!("{label}Borel stability {}/{}", ev.stable, ev.trials);
            if let Some(f) = &ev.first_failure {
                line.push_str(&format!(" ({f})"));
            }
            out.push(line);
        }
        for i in &self.instances {
            let head = if i.label.is_empty() { String::new() } else { format!("{}: ", i.label) };
            let what = match &i.outcome {
                Outcome::Proved(why) => format!("proved ({why})"),
                Outcome::NotFound { trials } => format!("no basis into R in {trials} trials (semi-decision)"),
                Outcome::Refuted(why) => format!("FAILED: {why}"),
            };
            out.push(format!("{head}{} -/-> {}: {what}", i.source, i.target));
        }
        out.extend(self.skipped.iter().map(|s| format!("skipped {s}")));
        if let Some(e) = &self.error {
            out.push(format!("error: {e}"));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub budget: usize,
    pub borel_trials: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { budget: DEFAULT_SEARCH_BUDGET, borel_trials: DEFAULT_BOREL_TRIALS, seed: 0 }
    }
}

fn arg_is_constant(r: &AlgRef) -> bool {
    r.arg.as_ref().is_some_and(|e| e.symbols().is_empty())
}

fn check(c: &Option<Constraint>, vars: &HashMap<String, GaussRat>) -> Result<bool, ScalarError> {
    match c {
        Some(c) => c.holds(vars),
        None => Ok(true),
    }
}

/// Source parameter samples: the constant in the row, or the catalog
/// defaults allowed by the domain and the source constraint.
fn source_samples(corpus: &Corpus, cert: &Certificate, skipped: &mut Vec<String>) -> Result<Vec<Option<GaussRat>>, CatalogError> {
    let entry = corpus.get(&cert.source.id)?;
    if !entry.is_family() {
        return Ok(vec![None]);
    }
    if arg_is_constant(&cert.source) {
        return Ok(vec![cert.source.param_value(&HashMap::new())?]);
    }
    let mut out = Vec::new();
    for a in entry.default_samples() {
        let vars = HashMap::from([("a".to_string(), a.clone())]);
        match check(&cert.source_constraint, &vars) {
            Ok(true) => out.push(Some(a)),
            Ok(false) => skipped.push(format!("a = {a}: violates {}", cert.source_constraint.as_ref().expect("checked"))),
            Err(e) => skipped.push(format!("a = {a}: {e}")),
        }
    }
    Ok(out)
}

pub fn verify_certificate(corpus: &Corpus, cert: &Certificate, opts: &Options) -> CertReport {
    let mut report = CertReport {
        id: cert.id.clone(),
        kind: cert.kind,
        set: None,
        instances: Vec::new(),
        borel: Vec::new(),
        skipped: Vec::new(),
        error: None,
    };
    if let Err(e) = run_certificate(corpus, cert, opts, &mut report) {
        report.error = Some(e.to_string());
    }
    report
}

fn run_certificate(corpus: &Corpus, cert: &Certificate, opts: &Options, report: &mut CertReport) -> Result<(), CatalogError> {
    let src_entry = corpus.get(&cert.source.id)?;
    let flavor = variety_flavor(corpus, &src_entry.class);
    let samples = source_samples(corpus, cert, &mut report.skipped)?;
    for a in samples {
        let src = src_entry.algebra(a.as_ref())?;
        let src_name = instance_name(&src_entry.id, a.as_ref());
        let a_label = a.as_ref().map(|x| format!("a = {x}")).unwrap_or_default();
        let set = ClosedSet::new(src.dim(), flavor, cert.chains.clone(), cert.polys.clone(), a.clone());
        if cert.kind == CertKind::Chain {
            report.set.get_or_insert_with(|| {
                let generic = ClosedSet { a: None, ..set.clone() };
                generic.describe()
            });
            if !set.contains(&src) {
                report.instances.push(CertInstance {
                    label: a_label.clone(),
                    source: src_name.clone(),
                    target: "R".to_string(),
                    outcome: Outcome::Refuted(format!("{src_name} is not in R")),
                });
                continue;
            }
            let ev = borel_stability_evidence(&set, opts.borel_trials, opts.seed);
            let prefix = if a_label.is_empty() { String::new() } else { format!("{a_label}: ") };
            let borel_ok = ev.passed();
            report.borel.push((prefix, ev));
            if !borel_ok {
                report.instances.push(CertInstance {
                    label: a_label.clone(),
                    source: src_name.clone(),
                    target: "R".to_string(),
                    outcome: Outcome::Refuted("R failed the Borel stability check".to_string()),
                });
                continue;
            }
        }
        for (tref, constraint) in &cert.targets {
            let tentry = corpus.get(&tref.id)?;
            let mut bs: Vec<Option<GaussRat>> = if tentry.is_family() && !arg_is_constant(tref) {
                tentry.default_samples().into_iter().map(Some).collect()
            } else if tentry.is_family() {
                vec![tref.param_value(&HashMap::new())?]
            } else {
                vec![None]
            };
            bs.dedup();
            for b in bs {
                let mut vars = HashMap::new();
                if let Some(a) = &a {
                    vars.insert("a".to_string(), a.clone());
                }
                if let Some(b) = &b {
                    vars.insert("b".to_string(), b.clone());
                }
                let tname = instance_name(&tentry.id, b.as_ref());
                let label = [a_label.clone(), b.as_ref().map(|x| format!("b = {x}")).unwrap_or_default()]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join(", ");
                match check(constraint, &vars) {
                    Ok(true) => {}
                    Ok(false) => {
                        report.skipped.push(format!("{label}: {tname} violates {}", constraint.as_ref().expect("checked")));
                        continue;
                    }
                    Err(e) => {
                        report.skipped.push(format!("{label}: {e}"));
                        continue;
                    }
                }
                let tgt = tentry.algebra(b.as_ref())?;
                let outcome = match cert.kind {
                    CertKind::Flavor => {
                        if src.is_commutative() && !tgt.is_commutative() {
                            Outcome::Proved("commutativity is a closed condition".to_string())
                        } else {
                            Outcome::Refuted(format!("{src_name} is {}, {tname} is {}", src.flavor(), tgt.flavor()))
                        }
                    }
                    CertKind::DimDer => {
                        let (ds, dt) = (derivation_dim(&src), derivation_dim(&tgt));
                        if ds >= dt {
                            Outcome::Proved(format!("dim Der {ds} >= {dt}"))
                        } else {
                            Outcome::Refuted(format!("dim Der {ds} < {dt}"))
                        }
                    }
                    CertKind::Chain => {
                        let seed = opts.seed ^ eval_seed(&cert.id, &tname);
                        let s = search_basis_into_r(&tgt, &set, opts.budget, seed);
                        match s.found {
                            Some(p) => Outcome::Refuted(format!("{tname} lies in R in the basis {p:?}")),
                            None => Outcome::NotFound { trials: s.trials },
                        }
                    }
                };
                report.instances.push(CertInstance { label, source: src_name.clone(), target: tname, outcome });
            }
        }
    }
    Ok(())
}

fn eval_seed(id: &str, target: &str) -> u64 {
    id.bytes().chain(target.bytes()).fold(0u64, |h, b| h.rotate_left(5) ^ b as u64)
}

pub fn verify_all(corpus: &Corpus, certs: &[&Certificate], opts: &Options, parallel: bool) -> Vec<CertReport> {
    par::map(certs, parallel, |c| verify_certificate(corpus, c, opts))
}

/// Evaluate a constraint-free parameter expression, for callers holding a
/// reference like `C19(0)`.
pub fn constant_param(r: &AlgRef) -> Result<Option<GaussRat>, ScalarError> {
    r.arg.as_ref().map(|e| eval_const(e, &HashMap::new())).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus() -> Corpus {
        Corpus::embedded()
    }

    #[test]
    fn chain_convention() {
        // A1A2 = 0 in dimension 3 kills c[i][j][k] for i >= 1, j >= 2, every k
        let s = ClosedSet::new(3, Flavor::Neither, vec![(1, 2, 4)], vec![], None);
        assert!(s.forced_zero(0, 1, 2));
        assert!(!s.forced_zero(1, 0, 2));
        // A1A1 ⊂ A3 leaves only the e_3 component
        let s = ClosedSet::new(3, Flavor::Neither, vec![(1, 1, 3)], vec![], None);
        assert!(s.forced_zero(0, 0, 1));
        assert!(!s.forced_zero(0, 0, 2));
    }

    #[test]
    fn source_in_r_and_target_not_found() {
        let c = corpus();
        let cert = c.certificates.iter().find(|x| x.id == "nil3-non.02").unwrap();
        let r = verify_certificate(&c, cert, &Options { budget: 300, borel_trials: 20, seed: 1 });
        assert!(r.passed(), "{:?}", r.details());
        assert!(r.semi_decision());
    }

    #[test]
    fn search_finds_a_member_up_to_basis_change() {
        // N3 in a scrambled basis still has a basis putting it into A1A2 = 0
        let c = corpus();
        let n3 = c.get("N3").unwrap().algebra(None).unwrap();
        let set = ClosedSet::new(3, Flavor::Neither, vec![(1, 2, 4)], vec![], None);
        assert!(set.contains(&n3));
        let mut rng = rng::seeded(5);
        let p = rng::invertible(&mut rng, 3);
        let scrambled = n3.change_basis(&p).unwrap();
        let s = search_basis_into_r(&scrambled, &set, 2000, 3);
        assert!(s.found.is_some());
    }

    #[test]
    fn sampled_members_satisfy_equations() {
        let c = corpus();
        let cert = c.certificates.iter().find(|x| x.id == "comm4-non.08").unwrap();
        let set = ClosedSet::new(4, Flavor::Commutative, cert.chains.clone(), cert.polys.clone(), Some(GaussRat::from_i64(2)));
        let mut rng = rng::seeded(9);
        for _ in 0..5 {
            let a = sample_member(&set, &mut rng).expect("sample");
            assert!(set.contains(&a));
        }
    }

    #[test]
    fn flavor_certificate() {
        let c = corpus();
        let cert = c.certificates.iter().find(|x| x.id == "nil3-non.01").unwrap();
        let r = verify_certificate(&c, cert, &Options::default());
        assert!(r.passed(), "{:?}", r.details());
        assert!(!r.semi_decision());
    }
}
