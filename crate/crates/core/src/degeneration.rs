//! Checking degenerations through parametric bases.
//!
//! The source structure constants are transported into the basis `E(t)`
//! with ring operations only (adjugate over determinant) and the limit at
//! `t -> 0+` is read off from valuations. Rows whose bases contain radicals
//! are also evaluated numerically at `t = 1e-4, 1e-6, 1e-8`.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::catalog::{eval_const, instance_name, AlgRef, CatalogError, Corpus, Witness};
use crate::invariants::find_isomorphism;
use crate::linalg::Matrix;
use crate::par;
use crate::scalar::numeric::{abs_sci, eval_at, ten_to_minus};
use crate::scalar::{Coeff, Env, Field, GaussRat, Ring, ScalarError, SeriesLimit, TExpr};

/// Sample points `t = 10^-k`.
pub const NUMERIC_EXPONENTS: [u32; 3] = [4, 6, 8];
/// Deviation bound at the smallest sample point, as a power of ten.
pub const NUMERIC_TOLERANCE_EXP: u32 = 10;
pub const DEFAULT_DIGITS: u32 = 50;
const MAX_SERIES_LEN: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Series,
    Numeric,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Series => "series",
            Mode::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DegenError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("the parametric basis is singular")]
    Singular,
    #[error("source has dimension {source_dim}, target {target_dim}, basis has {basis} vectors")]
    Dimension { source_dim: usize, target_dim: usize, basis: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConstLimit<C> {
    Value(C),
    Diverges,
    Undetermined,
}

/// A structure constant whose limit differs from the target, 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub got: String,
    pub want: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c[{}][{}][{}]: limit {}, target {}", self.i, self.j, self.k, self.got, self.want)
    }
}

/// Transported constants as numerators over a common denominator.
#[derive(Clone, Debug)]
pub struct Transported<C: Coeff> {
    pub num: Algebra<TExpr<C>>,
    pub det: TExpr<C>,
}

impl<C: Coeff> fmt::Debug for Algebra<TExpr<C>> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.table_lines_generic().join(", "))
    }
}

impl<C: Coeff> Algebra<TExpr<C>> {
    fn table_lines_generic(&self) -> Vec<String> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let x = self.c(i, j, k);
                    if !x.is_zero() {
                        out.push(format!("c[{}][{}][{}] = {x}", i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        out
    }
}

/// Substitute `t = s^L` with `L` the common denominator of all exponents,
/// so every entry has integer powers. The limit at zero is unchanged.
pub fn clear_fractional_powers<C: Coeff>(
    src: &Algebra<TExpr<C>>,
    p: &Matrix<TExpr<C>>,
) -> (Algebra<TExpr<C>>, Matrix<TExpr<C>>, i64) {
    let l = src.constants().iter().chain(p.entries()).fold(1i64, |acc, x| acc.lcm(&x.exponent_lcm()));
    if l == 1 {
        return (src.clone(), p.clone(), 1);
    }
    (src.map(|x| x.inflate(l)), p.map(|x| x.inflate(l)), l)
}

pub fn transport<C: Coeff>(src: &Algebra<TExpr<C>>, p: &Matrix<TExpr<C>>) -> Result<Transported<C>, DegenError> {
    if p.rows() != src.dim() || p.cols() != src.dim() {
        return Err(DegenError::Dimension { source_dim: src.dim(), target_dim: src.dim(), basis: p.cols() });
    }
    let (num, det) = src.transport(p);
    if det.is_zero() {
        return Err(DegenError::Singular);
    }
    Ok(Transported { num, det })
}

impl<C: Coeff> Transported<C> {
    /// Exact limits of every constant, or `None` when constant radicals make
    /// the valuations undecidable here. Exponents must be integers.
    pub fn limits(&self) -> Option<(Mode, Vec<ConstLimit<C>>)> {
        let all = || self.num.constants().iter().chain(std::iter::once(&self.det));
        if all().any(|x| x.has_constant_radicals() || x.exponent_lcm() != 1) {
            return None;
        }
        if all().all(|x| !x.has_radicals()) {
            let det = self.det.to_laurent()?;
            let v = det.valuation()?;
            let d = det.coeff(v);
            let out = self
                .num
                .constants()
                .iter()
                .map(|x| {
                    let l = x.to_laurent().expect("no radicals");
                    match l.valuation() {
                        None => ConstLimit::Value(C::zero()),
                        Some(w) if w < v => ConstLimit::Diverges,
                        Some(_) => ConstLimit::Value(l.coeff(v).div(&d).expect("nonzero leading coefficient")),
                    }
                })
                .collect();
            return Some((Mode::Exact, out));
        }
        let mut len = 8;
        loop {
            let det = self.det.to_series(len)?;
            let out: Vec<ConstLimit<C>> = self
                .num
                .constants()
                .iter()
                .map(|x| match x.to_series(len).map(|s| s.ratio_limit(&det)) {
                    Some(SeriesLimit::Value(c)) => ConstLimit::Value(c),
                    Some(SeriesLimit::Diverges) => ConstLimit::Diverges,
                    _ => ConstLimit::Undetermined,
                })
                .collect();
            if len >= MAX_SERIES_LEN || !out.iter().any(|c| matches!(c, ConstLimit::Undetermined)) {
                return Some((Mode::Series, out));
            }
            len *= 2;
        }
    }
}

pub fn compare_limits<C: Coeff>(limits: &[ConstLimit<C>], target: &Algebra<C>) -> Vec<Discrepancy> {
    let n = target.dim();
    let mut out = Vec::new();
    for (idx, l) in limits.iter().enumerate() {
        let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
        let want = target.c(i, j, k);
        let got = match l {
            ConstLimit::Value(c) if c == want => continue,
            ConstLimit::Value(c) => c.to_string(),
            ConstLimit::Diverges => "diverges".to_string(),
            ConstLimit::Undetermined => "undetermined".to_string(),
        };
        out.push(Discrepancy { i: i + 1, j: j + 1, k: k + 1, got, want: want.to_string() });
    }
    out
}

#[derive(Clone, Debug)]
pub struct NumericPoint {
    /// `t = 10^-k`.
    pub k: u32,
    /// Largest |c(t) - c_target| over all constants.
    pub deviation: GaussRat,
    /// The constant attaining it, 1-based.
    pub worst: (usize, usize, usize),
}

#[derive(Clone, Debug)]
pub struct NumericTrace {
    pub points: Vec<NumericPoint>,
    pub monotone: bool,
    pub below_tolerance: bool,
}

impl NumericTrace {
    pub fn passed(&self) -> bool {
        self.monotone && self.below_tolerance
    }

    pub fn summary(&self) -> String {
        let pts: Vec<String> =
            self.points.iter().map(|p| format!("t=1e-{}: {}", p.k, abs_sci(&p.deviation))).collect();
        let last = self.points.last().map(|p| p.worst).unwrap_or((0, 0, 0));
        format!(
            "deviation {} (worst c[{}][{}][{}]){}{}",
            pts.join(", "),
            last.0,
            last.1,
            last.2,
            if self.monotone { "" } else { "; not monotone" },
            if self.below_tolerance { "" } else { "; above 1e-10 at t=1e-8" }
        )
    }
}

/// Evaluate the transported constants at `t = 10^-k` for each sample
/// exponent and measure the distance to the target.
pub fn numeric_check(
    tr: &Transported<GaussRat>,
    target: &Algebra<GaussRat>,
    digits: u32,
) -> Result<NumericTrace, DegenError> {
    let n = target.dim();
    // large powers of t need extra digits to survive cancellation
    let span = tr
        .num
        .constants()
        .iter()
        .chain(std::iter::once(&tr.det))
        .flat_map(|x| x.terms().iter().map(|t| t.exp.numer().unsigned_abs().div_ceil(t.exp.denom().unsigned_abs())))
        .max()
        .unwrap_or(0) as u32;
    let mut points = Vec::new();
    for &k in &NUMERIC_EXPONENTS {
        let t0 = GaussRat::from_rational(ten_to_minus(k));
        let work = digits + k * span;
        let d = eval_at(&tr.det, &t0, work)?;
        if d.is_zero() {
            return Err(DegenError::Singular);
        }
        let mut worst = (BigRational::zero(), GaussRat::zero(), (1, 1, 1));
        for (idx, x) in tr.num.constants().iter().enumerate() {
            let (i, j, kk) = (idx / (n * n), (idx / n) % n, idx % n);
            let v = eval_at(x, &t0, work)?.div(&d).expect("nonzero");
            let dev = v.sub(target.c(i, j, kk));
            let size = dev.norm_sq();
            if size > worst.0 {
                worst = (size, dev, (i + 1, j + 1, kk + 1));
            }
        }
        points.push(NumericPoint { k, deviation: worst.1, worst: worst.2 });
    }
    let sizes: Vec<BigRational> = points.iter().map(|p| p.deviation.norm_sq()).collect();
    let monotone = sizes.windows(2).all(|w| w[1] < w[0] || (w[1].is_zero() && w[0].is_zero()));
    let tol = ten_to_minus(NUMERIC_TOLERANCE_EXP);
    let below_tolerance = sizes.last().is_some_and(|s| *s < &tol * &tol);
    Ok(NumericTrace { points, monotone, below_tolerance })
}

/// Result of checking one parameter sample of a witness.
#[derive(Clone, Debug)]
pub struct SampleCheck {
    /// `a = 2`, or empty when the row has no free variables.
    pub label: String,
    pub source: String,
    pub target: String,
    /// The source instance, absent for a parametric index.
    pub source_alg: Option<Algebra<GaussRat>>,
    pub target_alg: Algebra<GaussRat>,
    pub exact: Option<(Mode, Vec<Discrepancy>)>,
    pub numeric: Option<NumericTrace>,
    /// Set when the limit exists, differs from the target and is isomorphic
    /// to it.
    pub isomorphic_limit: bool,
}

impl SampleCheck {
    /// Rows with radicals are decided numerically, the rest exactly.
    pub fn deciding_mode(&self) -> Mode {
        match (&self.numeric, &self.exact) {
            (Some(_), _) => Mode::Numeric,
            (None, Some((m, _))) => *m,
            (None, None) => Mode::Numeric,
        }
    }

    pub fn literal_pass(&self) -> bool {
        match self.deciding_mode() {
            Mode::Numeric => self.numeric.as_ref().is_some_and(|t| t.passed()),
            _ => self.exact_pass(),
        }
    }

    pub fn exact_pass(&self) -> bool {
        self.exact.as_ref().is_some_and(|(_, d)| d.is_empty())
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        let head = if self.label.is_empty() {
            format!("{} -> {}", self.source, self.target)
        } else {
            format!("{}: {} -> {}", self.label, self.source, self.target)
        };
        parts.push(head);
        if let Some((m, d)) = &self.exact {
            if d.is_empty() {
                parts.push(format!("{} limit matches", m.as_str()));
            } else {
                let shown: Vec<String> = d.iter().take(4).map(|x| x.to_string()).collect();
                let more = if d.len() > 4 { format!(" (+{} more)", d.len() - 4) } else { String::new() };
                parts.push(format!("{} mismatch {}{}", m.as_str(), shown.join("; "), more));
            }
        }
        if let Some(t) = &self.numeric {
            parts.push(format!("numeric {}", t.summary()));
        }
        if self.isomorphic_limit {
            parts.push("the limit is isomorphic to the target but not equal to it".to_string());
        }
        parts.join("; ")
    }
}

#[derive(Clone, Debug)]
pub struct DegenReport {
    pub id: String,
    pub source: String,
    pub target: String,
    pub samples: Vec<SampleCheck>,
    pub skipped: Vec<String>,
    pub error: Option<String>,
}

impl DegenReport {
    pub fn literal_pass(&self) -> bool {
        self.error.is_none() && !self.samples.is_empty() && self.samples.iter().all(|s| s.literal_pass())
    }

    pub fn exact_pass(&self) -> bool {
        self.error.is_none() && !self.samples.is_empty() && self.samples.iter().all(|s| s.exact_pass())
    }

    pub fn mode(&self) -> Mode {
        if self.samples.iter().any(|s| s.deciding_mode() == Mode::Numeric) {
            Mode::Numeric
        } else if self.samples.iter().any(|s| s.deciding_mode() == Mode::Series) {
            Mode::Series
        } else {
            Mode::Exact
        }
    }

    pub fn details(&self) -> Vec<String> {
        let mut out: Vec<String> = self.samples.iter().map(|s| s.describe()).collect();
        out.extend(self.skipped.iter().map(|s| format!("skipped {s}")));
        if let Some(e) = &self.error {
            out.push(format!("error: {e}"));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub digits: u32,
    /// Budget for the isomorphic-limit diagnostic; 0 disables it.
    pub iso_budget: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { digits: DEFAULT_DIGITS, iso_budget: 200, seed: 0 }
    }
}

/// Parameter values tried for a free variable without a `sample:` line.
pub fn default_family_samples() -> Vec<GaussRat> {
    vec![
        GaussRat::from_i64(-1),
        GaussRat::from_i64(2),
        GaussRat::from_i64(3),
        GaussRat::from_ratio(1, 2),
        GaussRat::i(),
    ]
}

fn assignment_label(vars: &[(String, GaussRat)]) -> String {
    vars.iter().map(|(k, v)| format!("{k} = {v}")).collect::<Vec<_>>().join(", ")
}

/// All variable assignments of a witness, with the rejected ones and the
/// reason for each.
pub fn sample_assignments(
    corpus: &Corpus,
    w: &Witness,
) -> (Vec<(Vec<(String, GaussRat)>, HashMap<String, GaussRat>)>, Vec<String>) {
    let vars = w.free_vars();
    let mut combos: Vec<Vec<(String, GaussRat)>> = vec![Vec::new()];
    let mut skipped = Vec::new();
    for v in &vars {
        let values: Vec<GaussRat> = match w.samples.iter().find(|(s, _)| s == v) {
            Some((_, es)) => {
                let mut out = Vec::new();
                for e in es {
                    match eval_const(e, &HashMap::new()) {
                        Ok(z) => out.push(z),
                        Err(err) => skipped.push(format!("{v} = {e}: {err}")),
                    }
                }
                out
            }
            None => default_family_samples(),
        };
        combos = combos
            .into_iter()
            .flat_map(|c| {
                values.iter().map(move |x| {
                    let mut c = c.clone();
                    c.push((v.clone(), x.clone()));
                    c
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    'combo: for c in combos {
        let label = assignment_label(&c);
        let mut map: HashMap<String, GaussRat> = c.iter().cloned().collect();
        for (name, e) in &w.lets {
            match eval_const(e, &map) {
                Ok(z) => {
                    map.insert(name.clone(), z);
                }
                Err(err) => {
                    skipped.push(format!("{label}: let {name}: {err}"));
                    continue 'combo;
                }
            }
        }
        for r in &w.requires {
            match r.holds(&map) {
                Ok(true) => {}
                Ok(false) => {
                    skipped.push(format!("{label}: violates {r}"));
                    continue 'combo;
                }
                Err(err) => {
                    skipped.push(format!("{label}: {r}: {err}"));
                    continue 'combo;
                }
            }
        }
        let refs: Vec<&AlgRef> = if w.index.is_some() { vec![&w.target] } else { vec![&w.source, &w.target] };
        for r in refs {
            let entry = match corpus.get(&r.id) {
                Ok(e) => e,
                Err(err) => {
                    skipped.push(format!("{label}: {err}"));
                    continue 'combo;
                }
            };
            match (r.param_value(&map), entry.param) {
                (Ok(Some(z)), Some(dom)) if !dom.contains(&z) => {
                    skipped.push(format!("{label}: {} outside the domain of {}", z, r.id));
                    continue 'combo;
                }
                (Err(ScalarError::DivisionByZero), _) => {
                    skipped.push(format!("{label}: parameter of {} is undefined", r.id));
                    continue 'combo;
                }
                (Err(err), _) => {
                    skipped.push(format!("{label}: parameter of {}: {err}", r.id));
                    continue 'combo;
                }
                _ => {}
            }
        }
        let mut bound: Vec<(String, GaussRat)> = c.clone();
        for (name, _) in &w.lets {
            bound.push((name.clone(), map[name].clone()));
        }
        out.push((bound, map));
    }
    (out, skipped)
}

/// The parametric basis of `w` and its source constants under `vars`.
pub fn instantiate(
    corpus: &Corpus,
    w: &Witness,
    vars: &HashMap<String, GaussRat>,
) -> Result<(Algebra<TExpr<GaussRat>>, Matrix<TExpr<GaussRat>>), DegenError> {
    let entry = corpus.get(&w.source.id)?;
    let n = entry.dim;
    let mut env = Env::<GaussRat>::with_dim(n);
    for (k, v) in vars {
        env.set_const(k, v.clone());
    }
    let param = match (&w.index, &w.source.arg) {
        (Some((_, e)), _) => Some(e.eval_scalar(&env)?),
        (None, Some(e)) => Some(e.eval_scalar(&env)?),
        (None, None) => None,
    };
    let src = entry.table(param.as_ref())?;
    for (j, e) in &w.vecs {
        let v = e.eval_vector(&env)?;
        env.vectors.insert(('f', *j), v);
    }
    let cols = w.basis.iter().map(|e| e.eval_vector(&env)).collect::<Result<Vec<_>, _>>()?;
    if cols.len() != n || cols.iter().any(|c| c.len() != n) {
        return Err(DegenError::Dimension { source_dim: n, target_dim: n, basis: cols.len() });
    }
    Ok((src, Matrix::from_cols(cols)))
}

/// Check a source table and basis against a target algebra.
pub fn check_basis(
    src: &Algebra<TExpr<GaussRat>>,
    p: &Matrix<TExpr<GaussRat>>,
    target: &Algebra<GaussRat>,
    opts: &Options,
) -> Result<(Option<(Mode, Vec<Discrepancy>)>, Option<NumericTrace>, bool), DegenError> {
    if src.dim() != target.dim() {
        return Err(DegenError::Dimension { source_dim: src.dim(), target_dim: target.dim(), basis: p.cols() });
    }
    let radicals = src.constants().iter().chain(p.entries()).any(|x| x.has_radicals());
    let (csrc, cp, _) = clear_fractional_powers(src, p);
    let cleared = transport(&csrc, &cp)?;
    let limits = cleared.limits();
    let mut iso = false;
    let exact = limits.map(|(mode, l)| {
        let d = compare_limits(&l, target);
        if !d.is_empty() && opts.iso_budget > 0 && l.iter().all(|x| matches!(x, ConstLimit::Value(_))) {
            let lim = Algebra::new(
                target.dim(),
                l.into_iter()
                    .map(|x| match x {
                        ConstLimit::Value(c) => c,
                        _ => unreachable!(),
                    })
                    .collect(),
            );
            iso = find_isomorphism(&lim, target, opts.iso_budget, opts.seed).is_some();
        }
        (mode, d)
    });
    let numeric = if radicals {
        let raw = transport(src, p)?;
        Some(numeric_check(&raw, target, opts.digits)?)
    } else {
        None
    };
    Ok((exact, numeric, iso))
}

pub fn verify_witness(corpus: &Corpus, w: &Witness, opts: &Options) -> DegenReport {
    let mut report = DegenReport {
        id: w.id.clone(),
        source: w.source.to_string(),
        target: w.target.to_string(),
        samples: Vec::new(),
        skipped: Vec::new(),
        error: None,
    };
    let (assignments, skipped) = sample_assignments(corpus, w);
    report.skipped = skipped;
    for (bound, vars) in assignments {
        let label = assignment_label(&bound);
        let run = || -> Result<SampleCheck, DegenError> {
            let target_alg = corpus.instance(&w.target, &vars)?;
            let source_alg = match w.index {
                Some(_) => None,
                None => Some(corpus.instance(&w.source, &vars)?),
            };
            let (src, p) = instantiate(corpus, w, &vars)?;
            let (exact, numeric, isomorphic_limit) = check_basis(&src, &p, &target_alg, opts)?;
            let name = |r: &AlgRef| -> Result<String, DegenError> {
                Ok(instance_name(&r.id, r.param_value(&vars)?.as_ref()))
            };
            let source = match &w.index {
                Some((v, e)) => format!("{}({v} = {e})", w.source.id),
                None => name(&w.source)?,
            };
            Ok(SampleCheck {
                label: label.clone(),
                source,
                target: name(&w.target)?,
                source_alg,
                target_alg,
                exact,
                numeric,
                isomorphic_limit,
            })
        };
        match run() {
            Ok(s) => report.samples.push(s),
            Err(e) => {
                let msg = if label.is_empty() { e.to_string() } else { format!("{label}: {e}") };
                report.error = Some(match report.error.take() {
                    Some(prev) => format!("{prev}; {msg}"),
                    None => msg,
                });
            }
        }
    }
    if report.samples.is_empty() && report.error.is_none() {
        report.error = Some("no admissible parameter sample".to_string());
    }
    report
}

pub fn verify_all(corpus: &Corpus, witnesses: &[&Witness], opts: &Options, parallel: bool) -> Vec<DegenReport> {
    par::map(witnesses, parallel, |w| verify_witness(corpus, w, opts))
}

/// `t`-free basis change of an exact algebra, as a witness of `A -> A'`.
pub fn constant_basis(p: &Matrix<GaussRat>) -> Matrix<TExpr<GaussRat>> {
    p.map(|x| TExpr::constant(x.clone()))
}

pub fn lift<C: Coeff>(a: &Algebra<C>) -> Algebra<TExpr<C>> {
    a.map(|x| TExpr::constant(x.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Expr;

    fn texpr_matrix(n: usize, rows: &[&str]) -> Matrix<TExpr<GaussRat>> {
        let env = Env::<GaussRat>::with_dim(n);
        let cols = rows.iter().map(|s| Expr::parse(s).unwrap().eval_vector(&env).unwrap()).collect();
        Matrix::from_cols(cols)
    }

    #[test]
    fn n2_to_n3_is_exact() {
        let c = Corpus::embedded();
        let r = verify_witness(&c, c.witness("nil3.03").unwrap(), &Options::default());
        assert!(r.literal_pass(), "{:?}", r.details());
        assert_eq!(r.mode(), Mode::Exact);
    }

    #[test]
    fn flipped_sign_names_the_constant() {
        let c = Corpus::embedded();
        let src = lift(&c.get("N2").unwrap().algebra(None).unwrap());
        let target = c.get("N3").unwrap().algebra(None).unwrap();
        let p = texpr_matrix(3, &["t e_1", "-t^2 e_2", "t^3 e_3"]);
        let (exact, _, _) = check_basis(&src, &p, &target, &Options::default()).unwrap();
        let (_, d) = exact.unwrap();
        assert!(!d.is_empty());
        assert!(d.iter().any(|x| (x.i, x.j, x.k) == (1, 1, 2)), "{d:?}");
    }

    #[test]
    fn diverging_constant_is_reported() {
        let c = Corpus::embedded();
        let src = lift(&c.get("N2").unwrap().algebra(None).unwrap());
        let target = c.get("N3").unwrap().algebra(None).unwrap();
        let p = texpr_matrix(3, &["t^(-1) e_1", "t^2 e_2", "t^3 e_3"]);
        let (exact, _, _) = check_basis(&src, &p, &target, &Options::default()).unwrap();
        assert!(exact.unwrap().1.iter().any(|d| d.got == "diverges"));
    }

    #[test]
    fn singular_basis_is_an_error() {
        let c = Corpus::embedded();
        let src = lift(&c.get("N2").unwrap().algebra(None).unwrap());
        let target = c.get("N3").unwrap().algebra(None).unwrap();
        let p = texpr_matrix(3, &["t e_1", "t e_1", "t^3 e_3"]);
        assert_eq!(check_basis(&src, &p, &target, &Options::default()).unwrap_err(), DegenError::Singular);
    }

    #[test]
    fn fractional_powers_are_cleared() {
        let c = Corpus::embedded();
        let src = lift(&c.get("N2").unwrap().algebra(None).unwrap());
        let target = c.get("N3").unwrap().algebra(None).unwrap();
        let p = texpr_matrix(3, &["t^(1/2) e_1", "t e_2", "t^(3/2) e_3"]);
        let (exact, _, _) = check_basis(&src, &p, &target, &Options::default()).unwrap();
        assert_eq!(exact.unwrap().1, Vec::new());
    }

    #[test]
    fn family_sample_outside_constraint_is_skipped() {
        let c = Corpus::embedded();
        let w = c.witness("nil3.04").unwrap();
        let (ok, skipped) = sample_assignments(&c, w);
        assert!(ok.iter().all(|(_, m)| m["a"] != GaussRat::one()));
        let r = verify_witness(&c, w, &Options::default());
        assert!(r.literal_pass(), "{:?}", r.details());
        assert!(skipped.is_empty() || skipped.iter().all(|s| s.contains("violates")));
    }

    #[test]
    fn parametric_index_row() {
        let c = Corpus::embedded();
        let r = verify_witness(&c, c.witness("comm4-index.01").unwrap(), &Options::default());
        assert!(r.literal_pass(), "{:?}", r.details());
    }
}
