//! The classification tables, witness corpus, non-degeneration
//! certificates, drawn graphs and automorphism data, parsed from the text
//! files under `data/`.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::algebra::{Algebra, Flavor};
use crate::scalar::{Coeff, Env, Expr, GaussRat, Ring, ScalarError, TExpr};

pub const DATA_FILES: &[(&str, &str)] = &[
    ("algebras.txt", include_str!("../data/algebras.txt")),
    ("witnesses_nil3.txt", include_str!("../data/witnesses_nil3.txt")),
    ("witnesses_comm4.txt", include_str!("../data/witnesses_comm4.txt")),
    ("witnesses_comm4_index.txt", include_str!("../data/witnesses_comm4_index.txt")),
    ("witnesses_anti5.txt", include_str!("../data/witnesses_anti5.txt")),
    ("witnesses_extra.txt", include_str!("../data/witnesses_extra.txt")),
    ("nondegen_nil3.txt", include_str!("../data/nondegen_nil3.txt")),
    ("nondegen_comm4.txt", include_str!("../data/nondegen_comm4.txt")),
    ("figures.txt", include_str!("../data/figures.txt")),
    ("automorphisms.txt", include_str!("../data/automorphisms.txt")),
    ("errata.txt", include_str!("../data/errata.txt")),
];

const EMBEDDED_SUMS: &str = include_str!("../data/SHA256SUMS");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error("unknown algebra `{0}`")]
    UnknownId(String),
    #[error("{0} needs a parameter")]
    MissingParam(String),
    #[error("{0} takes no parameter")]
    UnexpectedParam(String),
    #[error("parameter {value} of {id} is outside its domain")]
    OutOfDomain { id: String, value: String },
    #[error("cannot read {0}")]
    Io(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn parse_err(file: &str, line: usize, msg: impl Into<String>) -> CatalogError {
    CatalogError::Parse { file: file.to_string(), line, msg: msg.into() }
}

/// A `[id]` section with its numbered lines, comments removed.
#[derive(Clone, Debug)]
pub struct Block {
    pub id: String,
    pub line: usize,
    pub lines: Vec<(usize, String)>,
}

impl Block {
    /// Value of every `key: value` line with this key.
    pub fn values(&self, key: &str) -> Vec<(usize, &str)> {
        self.lines
            .iter()
            .filter_map(|(n, l)| {
                let (k, v) = l.split_once(':')?;
                (k.trim() == key).then(|| (*n, v.trim()))
            })
            .collect()
    }

    pub fn value(&self, key: &str) -> Option<(usize, &str)> {
        self.values(key).into_iter().next()
    }
}

pub fn parse_blocks(file: &str, text: &str) -> Result<Vec<Block>, CatalogError> {
    let mut blocks: Vec<Block> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let n = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if let Some(rest) = l.strip_prefix('[') {
            let id = rest.strip_suffix(']').ok_or_else(|| parse_err(file, n, "unclosed `[`"))?;
            blocks.push(Block { id: id.trim().to_string(), line: n, lines: Vec::new() });
            continue;
        }
        match blocks.last_mut() {
            Some(b) => b.lines.push((n, l.to_string())),
            None => return Err(parse_err(file, n, "line outside a block")),
        }
    }
    Ok(blocks)
}

fn expr_at(file: &str, line: usize, src: &str) -> Result<Expr, CatalogError> {
    Expr::parse(src).map_err(|e| parse_err(file, line, format!("{e} in `{src}`")))
}

fn basis_index(file: &str, line: usize, s: &str, prefix: &str) -> Result<usize, CatalogError> {
    s.trim()
        .strip_prefix(prefix)
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&j| j > 0)
        .ok_or_else(|| parse_err(file, line, format!("expected {prefix}<index>, found `{s}`")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamDomain {
    Complex,
    /// Re(a) > 0, or Re(a) = 0 and Im(a) >= 0.
    HalfPlane,
}

impl ParamDomain {
    pub fn contains(self, z: &GaussRat) -> bool {
        use num_traits::Signed;
        match self {
            ParamDomain::Complex => true,
            ParamDomain::HalfPlane => {
                z.re().is_positive() || (num_traits::Zero::is_zero(z.re()) && !z.im().is_negative())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub class: String,
    pub dim: usize,
    pub flavor: Flavor,
    pub param: Option<ParamDomain>,
    pub der: Option<usize>,
    /// `e_i e_j = expr` with 1-based i, j as written.
    pub products: Vec<(usize, usize, Expr)>,
    pub line: usize,
}

impl CatalogEntry {
    fn parse(file: &str, b: &Block) -> Result<Self, CatalogError> {
        let class = b.value("class").map(|(_, v)| v.to_string()).unwrap_or_default();
        let mut dim = None;
        let mut flavor = None;
        let mut param = None;
        let mut der = None;
        let mut products = Vec::new();
        for (n, l) in &b.lines {
            let n = *n;
            if let Some(rest) = l.strip_prefix("dim ") {
                let mut parts = rest.split(';').map(str::trim);
                dim = parts.next().and_then(|d| d.parse::<usize>().ok());
                flavor = parts.next().and_then(Flavor::parse);
                if dim.is_none() || flavor.is_none() {
                    return Err(parse_err(file, n, format!("bad header `{l}`")));
                }
            } else if let Some(rest) = l.strip_prefix("param:") {
                param = Some(match rest.trim() {
                    "a in C" => ParamDomain::Complex,
                    "a in C>=0" => ParamDomain::HalfPlane,
                    other => return Err(parse_err(file, n, format!("unknown domain `{other}`"))),
                });
            } else if let Some(rest) = l.strip_prefix("der:") {
                der = Some(rest.trim().parse().map_err(|_| parse_err(file, n, "bad der"))?);
            } else if l.starts_with("e_") {
                let (lhs, rhs) = l.split_once('=').ok_or_else(|| parse_err(file, n, "missing `=`"))?;
                let mut f = lhs.split_whitespace();
                let (Some(x), Some(y), None) = (f.next(), f.next(), f.next()) else {
                    return Err(parse_err(file, n, format!("bad product `{lhs}`")));
                };
                let i = basis_index(file, n, x, "e_")?;
                let j = basis_index(file, n, y, "e_")?;
                products.push((i, j, expr_at(file, n, rhs.trim())?));
            } else if !l.starts_with("class:") {
                return Err(parse_err(file, n, format!("unrecognized line `{l}`")));
            }
        }
        let dim = dim.ok_or_else(|| parse_err(file, b.line, "missing `dim` header"))?;
        for (i, j, _) in &products {
            if *i > dim || *j > dim {
                return Err(parse_err(file, b.line, format!("index out of range in {}", b.id)));
            }
        }
        Ok(CatalogEntry {
            id: b.id.clone(),
            class,
            dim,
            flavor: flavor.expect("set with dim"),
            param,
            der,
            products,
            line: b.line,
        })
    }

    pub fn is_family(&self) -> bool {
        self.param.is_some()
    }

    /// Structure constants as t-expressions, with the parameter (if any)
    /// bound to `param`.
    pub fn table<C: Coeff>(&self, param: Option<&TExpr<C>>) -> Result<Algebra<TExpr<C>>, CatalogError> {
        let n = self.dim;
        let mut env = Env::<C>::with_dim(n);
        match (self.param, param) {
            (Some(_), Some(a)) => env.set("a", a.clone()),
            (Some(_), None) => return Err(CatalogError::MissingParam(self.id.clone())),
            (None, Some(_)) => return Err(CatalogError::UnexpectedParam(self.id.clone())),
            (None, None) => {}
        }
        let mut alg = Algebra::zero(n);
        for (i, j, rhs) in &self.products {
            let v = rhs.eval_vector(&env)?;
            for (k, x) in v.into_iter().enumerate() {
                alg.set(i - 1, j - 1, k, x.clone());
                if i != j {
                    match self.flavor {
                        Flavor::Commutative => alg.set(j - 1, i - 1, k, x),
                        Flavor::Anticommutative => alg.set(j - 1, i - 1, k, x.neg()),
                        Flavor::Neither => {}
                    }
                }
            }
        }
        Ok(alg)
    }

    /// The algebra at a parameter value inside the domain.
    pub fn algebra(&self, param: Option<&GaussRat>) -> Result<Algebra<GaussRat>, CatalogError> {
        if let (Some(dom), Some(a)) = (self.param, param) {
            if !dom.contains(a) {
                return Err(CatalogError::OutOfDomain { id: self.id.clone(), value: a.to_string() });
            }
        }
        let p = param.map(|a| TExpr::constant(a.clone()));
        let t = self.table::<GaussRat>(p.as_ref())?;
        t.try_map(|x| {
            x.as_constant()
                .ok_or_else(|| CatalogError::Scalar(ScalarError::Type(format!("non-constant entry in {}", self.id))))
        })
    }

    /// Parameter samples used when no other values are given.
    pub fn default_samples(&self) -> Vec<GaussRat> {
        let Some(dom) = self.param else {
            return Vec::new();
        };
        let mut v = vec![
            GaussRat::zero(),
            GaussRat::one(),
            GaussRat::from_i64(-1),
            GaussRat::from_i64(2),
            GaussRat::i(),
            GaussRat::from_ratio(1, 2),
        ];
        if self.id == "N8" {
            v.push(GaussRat::from_ratio(1, 4));
        }
        v.retain(|z| dom.contains(z));
        v
    }
}

/// `ID` or `ID(expr)`.
#[derive(Clone, Debug)]
pub struct AlgRef {
    pub id: String,
    pub arg: Option<Expr>,
}

impl AlgRef {
    pub fn parse(s: &str) -> Result<AlgRef, ScalarError> {
        let s = s.trim();
        match s.find('(') {
            Some(p) if s.ends_with(')') => {
                Ok(AlgRef { id: s[..p].trim().to_string(), arg: Some(Expr::parse(&s[p + 1..s.len() - 1])?) })
            }
            _ => Ok(AlgRef { id: s.to_string(), arg: None }),
        }
    }

    /// Parameter value under the given variable assignment.
    pub fn param_value(&self, vars: &HashMap<String, GaussRat>) -> Result<Option<GaussRat>, ScalarError> {
        self.arg.as_ref().map(|e| eval_const(e, vars)).transpose()
    }
}

impl fmt::Display for AlgRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.arg {
            Some(e) => write!(f, "{}({})", self.id, e),
            None => f.write_str(&self.id),
        }
    }
}

/// Evaluate a constant expression in the given variables. Roots must be
/// exact.
pub fn eval_const(e: &Expr, vars: &HashMap<String, GaussRat>) -> Result<GaussRat, ScalarError> {
    e.eval_field::<GaussRat>(&|leaf| match leaf {
        Expr::Sym(s) => vars.get(s).cloned().ok_or_else(|| ScalarError::UnknownSymbol(s.clone())),
        other => Err(ScalarError::UnknownSymbol(other.to_string())),
    })
}

/// `lhs != rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub lhs: Expr,
    pub rhs: Expr,
    pub text: String,
}

impl Constraint {
    pub fn parse(s: &str) -> Result<Constraint, ScalarError> {
        let (l, r) = s.split_once("!=").ok_or_else(|| ScalarError::Parse { pos: 0, msg: "expected `!=`".into() })?;
        Ok(Constraint { lhs: Expr::parse(l.trim())?, rhs: Expr::parse(r.trim())?, text: s.trim().to_string() })
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut s = self.lhs.symbols();
        for x in self.rhs.symbols() {
            if !s.contains(&x) {
                s.push(x);
            }
        }
        s
    }

    /// Whether the constraint holds. A division by zero on either side
    /// counts as a violation.
    pub fn holds(&self, vars: &HashMap<String, GaussRat>) -> Result<bool, ScalarError> {
        let l = eval_const(&self.lhs, vars);
        let r = eval_const(&self.rhs, vars);
        match (l, r) {
            (Ok(l), Ok(r)) => Ok(l != r),
            (Err(ScalarError::DivisionByZero), _) | (_, Err(ScalarError::DivisionByZero)) => Ok(false),
            (Err(e), _) | (_, Err(e)) => Err(e),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// A parametric basis `E_i(t)` exhibiting `source -> target`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub id: String,
    pub file: String,
    pub line: usize,
    pub source: AlgRef,
    pub target: AlgRef,
    pub requires: Vec<Constraint>,
    pub samples: Vec<(String, Vec<Expr>)>,
    pub lets: Vec<(String, Expr)>,
    pub vecs: Vec<(usize, Expr)>,
    pub index: Option<(String, Expr)>,
    pub basis: Vec<Expr>,
}

impl Witness {
    fn parse(file: &str, b: &Block) -> Result<Self, CatalogError> {
        let mut w = Witness {
            id: b.id.clone(),
            file: file.to_string(),
            line: b.line,
            source: AlgRef { id: String::new(), arg: None },
            target: AlgRef { id: String::new(), arg: None },
            requires: Vec::new(),
            samples: Vec::new(),
            lets: Vec::new(),
            vecs: Vec::new(),
            index: None,
            basis: Vec::new(),
        };
        let mut basis: Vec<(usize, Expr)> = Vec::new();
        let wrap = |n: usize| move |e: ScalarError| parse_err(file, n, e.to_string());
        for (n, l) in &b.lines {
            let n = *n;
            if l.starts_with("E_") {
                let (lhs, rhs) = l.split_once('=').ok_or_else(|| parse_err(file, n, "missing `=`"))?;
                basis.push((basis_index(file, n, lhs, "E_")?, expr_at(file, n, rhs.trim())?));
                continue;
            }
            let (key, val) = l.split_once(':').ok_or_else(|| parse_err(file, n, format!("unrecognized line `{l}`")))?;
            let val = val.trim();
            match key.trim() {
                "source" => w.source = AlgRef::parse(val).map_err(wrap(n))?,
                "target" => w.target = AlgRef::parse(val).map_err(wrap(n))?,
                "require" => w.requires.push(Constraint::parse(val).map_err(wrap(n))?),
                "sample" => {
                    let (var, vals) = val.split_once('=').ok_or_else(|| parse_err(file, n, "missing `=`"))?;
                    let vals = vals.split(',').map(|v| expr_at(file, n, v.trim())).collect::<Result<_, _>>()?;
                    w.samples.push((var.trim().to_string(), vals));
                }
                "let" | "index" => {
                    let (var, e) = val.split_once('=').ok_or_else(|| parse_err(file, n, "missing `=`"))?;
                    let pair = (var.trim().to_string(), expr_at(file, n, e.trim())?);
                    if key.trim() == "let" {
                        w.lets.push(pair);
                    } else {
                        w.index = Some(pair);
                    }
                }
                "vec" => {
                    let (lhs, e) = val.split_once('=').ok_or_else(|| parse_err(file, n, "missing `=`"))?;
                    w.vecs.push((basis_index(file, n, lhs, "f_")?, expr_at(file, n, e.trim())?));
                }
                other => return Err(parse_err(file, n, format!("unknown key `{other}`"))),
            }
        }
        if w.source.id.is_empty() || w.target.id.is_empty() {
            return Err(parse_err(file, b.line, format!("{} needs a source and a target", b.id)));
        }
        basis.sort_by_key(|(i, _)| *i);
        for (k, (i, _)) in basis.iter().enumerate() {
            if *i != k + 1 {
                return Err(parse_err(file, b.line, format!("{}: E_{} missing or repeated", b.id, k + 1)));
            }
        }
        w.basis = basis.into_iter().map(|(_, e)| e).collect();
        Ok(w)
    }

    /// Free variables other than `t` and names bound by `let`.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |e: &Expr| {
            for s in e.symbols() {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        };
        if let Some(a) = &self.source.arg {
            push(a);
        }
        if let Some(a) = &self.target.arg {
            push(a);
        }
        for c in &self.requires {
            push(&c.lhs);
            push(&c.rhs);
        }
        let exprs = self.lets.iter().map(|(_, e)| e).chain(self.vecs.iter().map(|(_, e)| e)).chain(&self.basis);
        for e in exprs {
            push(e);
        }
        let index_var = self.index.as_ref().map(|(v, _)| v.clone());
        out.retain(|s| s != "t" && !self.lets.iter().any(|(v, _)| v == s) && Some(s) != index_var.as_ref());
        for (v, _) in &self.samples {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertKind {
    Flavor,
    DimDer,
    Chain,
}

impl CertKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertKind::Flavor => "flavor",
            CertKind::DimDer => "dimder",
            CertKind::Chain => "chain",
        }
    }
}

/// A certificate that `source` does not degenerate to each target.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub id: String,
    pub file: String,
    pub line: usize,
    pub source: AlgRef,
    pub source_constraint: Option<Constraint>,
    pub targets: Vec<(AlgRef, Option<Constraint>)>,
    pub kind: CertKind,
    /// `(p, q, r)`, 1-based as written.
    pub chains: Vec<(usize, usize, usize)>,
    pub polys: Vec<(Expr, Expr)>,
}

fn ref_with_constraint(s: &str) -> Result<(AlgRef, Option<Constraint>), ScalarError> {
    match s.split_once('|') {
        Some((r, c)) => Ok((AlgRef::parse(r)?, Some(Constraint::parse(c)?))),
        None => Ok((AlgRef::parse(s)?, None)),
    }
}

impl Certificate {
    fn parse(file: &str, b: &Block) -> Result<Self, CatalogError> {
        let wrap = |n: usize| move |e: ScalarError| parse_err(file, n, e.to_string());
        let (sn, src) = b.value("source").ok_or_else(|| parse_err(file, b.line, "missing source"))?;
        let (source, source_constraint) = ref_with_constraint(src).map_err(wrap(sn))?;
        let targets = b
            .values("target")
            .into_iter()
            .map(|(n, v)| ref_with_constraint(v).map_err(wrap(n)))
            .collect::<Result<Vec<_>, _>>()?;
        let (kn, kind) = b.value("kind").ok_or_else(|| parse_err(file, b.line, "missing kind"))?;
        let kind = match kind {
            "flavor" => CertKind::Flavor,
            "dimder" => CertKind::DimDer,
            "chain" => CertKind::Chain,
            other => return Err(parse_err(file, kn, format!("unknown kind `{other}`"))),
        };
        let mut chains = Vec::new();
        for (n, v) in b.values("chain") {
            let nums: Vec<usize> = v.split_whitespace().filter_map(|x| x.parse().ok()).collect();
            if nums.len() != 3 || nums.contains(&0) {
                return Err(parse_err(file, n, format!("bad chain `{v}`")));
            }
            chains.push((nums[0], nums[1], nums[2]));
        }
        let mut polys = Vec::new();
        for (n, v) in b.values("poly") {
            let (l, r) = v.split_once('=').ok_or_else(|| parse_err(file, n, "missing `=`"))?;
            polys.push((expr_at(file, n, l.trim())?, expr_at(file, n, r.trim())?));
        }
        for (n, l) in &b.lines {
            let key = l.split_once(':').map(|(k, _)| k.trim()).unwrap_or("");
            if !matches!(key, "source" | "target" | "kind" | "chain" | "poly") {
                return Err(parse_err(file, *n, format!("unrecognized line `{l}`")));
            }
        }
        Ok(Certificate {
            id: b.id.clone(),
            file: file.to_string(),
            line: b.line,
            source,
            source_constraint,
            targets,
            kind,
            chains,
            polys,
        })
    }
}

#[derive(Clone, Debug)]
pub struct FigureEdge {
    pub from: String,
    pub to: String,
    pub note: Option<String>,
}

/// One drawn degeneration graph.
#[derive(Clone, Debug)]
pub struct Figure {
    pub name: String,
    pub levels: Vec<usize>,
    pub rigid: Vec<String>,
    pub nodes: Vec<(String, String)>,
    pub edges: Vec<FigureEdge>,
}

impl Figure {
    fn parse(file: &str, b: &Block) -> Result<Self, CatalogError> {
        let mut f = Figure { name: b.id.clone(), levels: Vec::new(), rigid: Vec::new(), nodes: Vec::new(), edges: Vec::new() };
        for (n, l) in &b.lines {
            let (key, val) = l.split_once(':').ok_or_else(|| parse_err(file, *n, format!("unrecognized line `{l}`")))?;
            let val = val.trim();
            match key.trim() {
                "levels" => {
                    f.levels = val
                        .split_whitespace()
                        .map(|x| x.parse().map_err(|_| parse_err(file, *n, format!("bad level `{x}`"))))
                        .collect::<Result<_, _>>()?
                }
                "rigid" => f.rigid = val.split_whitespace().map(str::to_string).collect(),
                "node" => {
                    let (id, label) = val.split_once('|').unwrap_or((val, val));
                    f.nodes.push((id.trim().to_string(), label.trim().to_string()));
                }
                "edge" => {
                    let (arrow, note) = match val.split_once('|') {
                        Some((a, t)) => (a, Some(t.trim().to_string())),
                        None => (val, None),
                    };
                    let (from, to) = arrow.split_once("->").ok_or_else(|| parse_err(file, *n, "missing `->`"))?;
                    f.edges.push(FigureEdge { from: from.trim().to_string(), to: to.trim().to_string(), note });
                }
                other => return Err(parse_err(file, *n, format!("unknown key `{other}`"))),
            }
        }
        Ok(f)
    }
}

/// A generic automorphism with the induced action on cohomology
/// coordinates.
#[derive(Clone, Debug)]
pub struct AutComponent {
    /// Row-major entries; column j is the image of e_j.
    pub rows: Vec<Vec<Expr>>,
    pub actions: Vec<(usize, Expr)>,
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub combo: Expr,
    pub target: AlgRef,
}

#[derive(Clone, Debug)]
pub struct AutFamily {
    pub base: String,
    pub components: Vec<AutComponent>,
    pub nabla: Vec<String>,
    pub orbits: Vec<Orbit>,
}

impl AutFamily {
    fn parse(file: &str, b: &Block) -> Result<Self, CatalogError> {
        let mut f = AutFamily { base: b.id.clone(), components: Vec::new(), nabla: Vec::new(), orbits: Vec::new() };
        for (n, l) in &b.lines {
            let n = *n;
            let (key, val) = l.split_once(':').ok_or_else(|| parse_err(file, n, format!("unrecognized line `{l}`")))?;
            let val = val.trim();
            match key.trim() {
                "aut" => {
                    let rows = val
                        .split(';')
                        .map(|r| r.split(',').map(|x| expr_at(file, n, x.trim())).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    if rows.iter().any(|r| r.len() != rows.len()) {
                        return Err(parse_err(file, n, "automorphism is not square"));
                    }
                    f.components.push(AutComponent { rows, actions: Vec::new() });
                }
                "nabla" => f.nabla = val.split_whitespace().map(str::to_string).collect(),
                "action" => {
                    let (k, e) = val.split_once('=').ok_or_else(|| parse_err(file, n, "missing `=`"))?;
                    let k: usize = k.trim().parse().map_err(|_| parse_err(file, n, "bad action index"))?;
                    let comp = f.components.last_mut().ok_or_else(|| parse_err(file, n, "action before aut"))?;
                    comp.actions.push((k, expr_at(file, n, e.trim())?));
                }
                "orbit" => {
                    let (e, t) = val.split_once("->").ok_or_else(|| parse_err(file, n, "missing `->`"))?;
                    f.orbits.push(Orbit {
                        combo: expr_at(file, n, e.trim())?,
                        target: AlgRef::parse(t).map_err(|e| parse_err(file, n, e.to_string()))?,
                    });
                }
                other => return Err(parse_err(file, n, format!("unknown key `{other}`"))),
            }
        }
        Ok(f)
    }
}

/// Known misprints in the tables and the rows that replace broken
/// witnesses.
#[derive(Clone, Debug, Default)]
pub struct Errata {
    /// Printed dim Der that does not match the table, with the computed value.
    pub der: HashMap<String, usize>,
    /// Broken witness id and the id of the row that replaces it.
    pub replaced: Vec<(String, String)>,
    /// Degenerations claimed elsewhere that should be refuted.
    pub disputed: Vec<(String, String)>,
}

impl Errata {
    fn parse(file: &str, text: &str) -> Result<Self, CatalogError> {
        let mut e = Errata::default();
        for b in parse_blocks(file, text)? {
            for (n, l) in &b.lines {
                let mut f = l.split_whitespace();
                match b.id.as_str() {
                    "der" => {
                        let (Some(id), Some(v)) = (f.next(), f.next().and_then(|v| v.parse().ok())) else {
                            return Err(parse_err(file, *n, "expected `ID value`"));
                        };
                        e.der.insert(id.to_string(), v);
                    }
                    "replaced" => {
                        let (Some(old), Some("->"), Some(new)) = (f.next(), f.next(), f.next()) else {
                            return Err(parse_err(file, *n, "expected `old -> new`"));
                        };
                        e.replaced.push((old.to_string(), new.to_string()));
                    }
                    "disputed" => {
                        let (Some(x), Some("->"), Some(y)) = (f.next(), f.next(), f.next()) else {
                            return Err(parse_err(file, *n, "expected `X -> Y`"));
                        };
                        e.disputed.push((x.to_string(), y.to_string()));
                    }
                    other => return Err(parse_err(file, b.line, format!("unknown errata section `{other}`"))),
                }
            }
        }
        Ok(e)
    }

    pub fn replacement(&self, witness: &str) -> Option<&str> {
        self.replaced.iter().find(|(o, _)| o == witness).map(|(_, n)| n.as_str())
    }
}

/// Everything under `data/`.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub algebras: Vec<CatalogEntry>,
    pub witnesses: Vec<Witness>,
    pub certificates: Vec<Certificate>,
    pub figures: Vec<Figure>,
    pub automorphisms: Vec<AutFamily>,
    pub errata: Errata,
    /// Checksum mismatches; the data still loads.
    pub notes: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn check_sums(sums: &str, files: &[(String, String)]) -> Vec<String> {
    let mut expected = HashMap::new();
    for l in sums.lines() {
        let mut f = l.split_whitespace();
        if let (Some(h), Some(name)) = (f.next(), f.next()) {
            expected.insert(name.trim_start_matches('*').to_string(), h.to_string());
        }
    }
    let mut notes = Vec::new();
    for (name, text) in files {
        match expected.get(name) {
            Some(h) if *h == sha256_hex(text.as_bytes()) => {}
            Some(_) => notes.push(format!("checksum mismatch for {name}")),
            None => notes.push(format!("no checksum recorded for {name}")),
        }
    }
    notes
}

impl Corpus {
    /// The data compiled into the library.
    pub fn embedded() -> Corpus {
        let files: Vec<(String, String)> = DATA_FILES.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect();
        let mut c = Corpus::from_files(&files).expect("embedded data parses");
        c.notes = check_sums(EMBEDDED_SUMS, &files);
        c
    }

    /// Load the same file set from a directory, e.g. an edited copy.
    pub fn from_dir(dir: &Path) -> Result<Corpus, CatalogError> {
        let read = |name: &str| {
            std::fs::read_to_string(dir.join(name)).map_err(|e| CatalogError::Io(format!("{}: {e}", dir.join(name).display())))
        };
        let mut files = Vec::new();
        for (name, _) in DATA_FILES {
            files.push((name.to_string(), read(name)?));
        }
        let mut c = Corpus::from_files(&files)?;
        c.notes = match read("SHA256SUMS") {
            Ok(sums) => check_sums(&sums, &files),
            Err(_) => vec!["no SHA256SUMS in corpus directory".to_string()],
        };
        Ok(c)
    }

    pub fn from_files(files: &[(String, String)]) -> Result<Corpus, CatalogError> {
        let mut c = Corpus {
            algebras: Vec::new(),
            witnesses: Vec::new(),
            certificates: Vec::new(),
            figures: Vec::new(),
            automorphisms: Vec::new(),
            errata: Errata::default(),
            notes: Vec::new(),
        };
        for (name, text) in files {
            let name = name.as_str();
            if name == "errata.txt" {
                c.errata = Errata::parse(name, text)?;
                continue;
            }
            let blocks = parse_blocks(name, text)?;
            for b in &blocks {
                match name {
                    "algebras.txt" => c.algebras.push(CatalogEntry::parse(name, b)?),
                    "figures.txt" => c.figures.push(Figure::parse(name, b)?),
                    "automorphisms.txt" => c.automorphisms.push(AutFamily::parse(name, b)?),
                    n if n.starts_with("witnesses_") => c.witnesses.push(Witness::parse(name, b)?),
                    n if n.starts_with("nondegen_") => c.certificates.push(Certificate::parse(name, b)?),
                    _ => {}
                }
            }
        }
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CatalogError> {
        let mut seen = std::collections::HashSet::new();
        for a in &self.algebras {
            if !seen.insert(a.id.as_str()) {
                return Err(parse_err("algebras.txt", a.line, format!("duplicate id {}", a.id)));
            }
        }
        for w in &self.witnesses {
            for r in [&w.source, &w.target] {
                self.check_ref(r).map_err(|e| parse_err(&w.file, w.line, format!("{}: {e}", w.id)))?;
            }
        }
        for c in &self.certificates {
            for r in std::iter::once(&c.source).chain(c.targets.iter().map(|(r, _)| r)) {
                self.check_ref(r).map_err(|e| parse_err(&c.file, c.line, format!("{}: {e}", c.id)))?;
            }
        }
        Ok(())
    }

    fn check_ref(&self, r: &AlgRef) -> Result<(), CatalogError> {
        let e = self.get(&r.id)?;
        match (e.is_family(), r.arg.is_some()) {
            (true, false) => Err(CatalogError::MissingParam(r.id.clone())),
            (false, true) => Err(CatalogError::UnexpectedParam(r.id.clone())),
            _ => Ok(()),
        }
    }

    pub fn get(&self, id: &str) -> Result<&CatalogEntry, CatalogError> {
        self.algebras.iter().find(|a| a.id == id).ok_or_else(|| CatalogError::UnknownId(id.to_string()))
    }

    pub fn class(&self, class: &str) -> Vec<&CatalogEntry> {
        self.algebras.iter().filter(|a| a.class == class).collect()
    }

    pub fn witness(&self, id: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.id == id)
    }

    pub fn figure(&self, name: &str) -> Option<&Figure> {
        self.figures.iter().find(|f| f.name == name)
    }

    /// Instantiate `r` under a variable assignment.
    pub fn instance(&self, r: &AlgRef, vars: &HashMap<String, GaussRat>) -> Result<Algebra<GaussRat>, CatalogError> {
        let e = self.get(&r.id)?;
        let p = r.param_value(vars)?;
        e.algebra(p.as_ref())
    }
}

/// Name of an algebra instance, e.g. `C20(1/2)`.
pub fn instance_name(id: &str, param: Option<&GaussRat>) -> String {
    match param {
        Some(p) => format!("{id}({p})"),
        None => id.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_corpus_loads() {
        let c = Corpus::embedded();
        assert_eq!(c.class("nil3").len() + 1, 9 + 1);
        assert_eq!(c.class("comm4").len(), 31);
        assert!(c.notes.is_empty(), "{:?}", c.notes);
        assert!(c.witness("comm4.42").is_some_and(|w| w.lets.len() == 1 && w.vecs.len() == 4));
    }

    #[test]
    fn mirrored_products() {
        let c = Corpus::embedded();
        let n7 = c.get("N7").unwrap().algebra(None).unwrap();
        assert_eq!(*n7.c(1, 0, 2), GaussRat::from_i64(-1));
        let n8 = c.get("N8").unwrap().algebra(Some(&GaussRat::from_i64(3))).unwrap();
        assert_eq!(*n8.c(0, 0, 2), GaussRat::from_i64(3));
        assert!(n8.c(0, 1, 2).is_zero());
    }

    #[test]
    fn half_plane_domain() {
        let c = Corpus::embedded();
        let c19 = c.get("C19").unwrap();
        assert!(c19.algebra(Some(&GaussRat::i())).is_ok());
        assert!(matches!(c19.algebra(Some(&GaussRat::from_i64(-1))), Err(CatalogError::OutOfDomain { .. })));
        assert!(!c19.default_samples().contains(&GaussRat::from_i64(-1)));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let files = vec![("algebras.txt".to_string(), "[X]\ndim 2; commutative;\ne_1 e_3 = e_2\n".to_string())];
        match Corpus::from_files(&files) {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        let files = vec![("algebras.txt".to_string(), "[X]\ndim 2; commutative;\ne_1 e_1 = e_2 +\n".to_string())];
        match Corpus::from_files(&files) {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
