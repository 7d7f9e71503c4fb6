//! Expression language shared by every data file.
//!
//! Juxtaposition multiplies and binds like `*`. A leading minus negates the
//! whole term, so `-a/(a-1)^2` is `-(a/(a-1)^2)`. After `^` only an integer,
//! `-INT` or a parenthesized `(p/q)` is accepted; `a^3/8` is `(a^3)/8`.
//! A number followed directly by `i` is imaginary: `1/2i` is `i/2`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::{Coeff, Field};
use super::gauss::GaussRat;
use super::texpr::{TExpr, Q};
use super::ScalarError;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(GaussRat),
    Sym(String),
    /// `e_j` or `f_j`.
    Basis(char, usize),
    /// `c[i][j][k]`, 1-based.
    Coef(usize, usize, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Q),
    Rad(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(GaussRat),
    Ident(String),
    Basis(char, usize),
    Coef(usize, usize, usize),
    Op(char),
}

fn err(pos: usize, msg: impl Into<String>) -> ScalarError {
    ScalarError::Parse { pos, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ScalarError> {
    let b = src.as_bytes();
    let mut out: Vec<(usize, Tok)> = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let s = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        &src[s..*i]
    };
    while i < b.len() {
        let ch = b[i];
        let start = i;
        if ch.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let after_caret = matches!(out.last(), Some((_, Tok::Op('^'))));
            let p: BigInt = digits(&mut i).parse().expect("digits");
            let mut q = BigInt::from(1);
            if !after_caret && i + 1 < b.len() && b[i] == b'/' && b[i + 1].is_ascii_digit() {
                i += 1;
                q = digits(&mut i).parse().expect("digits");
                if q == BigInt::from(0) {
                    return Err(err(start, "zero denominator"));
                }
            }
            let r = BigRational::new(p, q);
            let imag = !after_caret
                && i < b.len()
                && b[i] == b'i'
                && !(i + 1 < b.len() && (b[i + 1].is_ascii_alphanumeric() || b[i + 1] == b'_'));
            if imag {
                i += 1;
                out.push((start, Tok::Num(GaussRat::new(BigRational::from_integer(0.into()), r))));
            } else {
                out.push((start, Tok::Num(GaussRat::from_rational(r))));
            }
            continue;
        }
        if ch.is_ascii_alphabetic() {
            if (ch == b'e' || ch == b'f') && i + 1 < b.len() && b[i + 1] == b'_' {
                i += 2;
                let d = digits(&mut i);
                let j: usize = d.parse().map_err(|_| err(start, "expected an index after `_`"))?;
                out.push((start, Tok::Basis(ch as char, j)));
                continue;
            }
            if ch == b'c' && i + 1 < b.len() && b[i + 1] == b'[' {
                i += 1;
                let mut idx = [0usize; 3];
                for slot in idx.iter_mut() {
                    if i >= b.len() || b[i] != b'[' {
                        return Err(err(i, "expected `[` in c[i][j][k]"));
                    }
                    i += 1;
                    *slot = digits(&mut i).parse().map_err(|_| err(i, "expected an index"))?;
                    if i >= b.len() || b[i] != b']' {
                        return Err(err(i, "expected `]`"));
                    }
                    i += 1;
                }
                out.push((start, Tok::Coef(idx[0], idx[1], idx[2])));
                continue;
            }
            while i < b.len() && b[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
            continue;
        }
        if "+-*/^();,".contains(ch as char) {
            out.push((start, Tok::Op(ch as char)));
            i += 1;
            continue;
        }
        return Err(err(start, format!("unexpected character `{}`", ch as char)));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ScalarError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.at(), format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ScalarError> {
        let mut lhs = self.signed()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.signed()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.signed()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn signed(&mut self) -> Result<Expr, ScalarError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.signed()?)));
        }
        if self.eat('+') {
            return self.signed();
        }
        self.term()
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_) | Tok::Ident(_) | Tok::Basis(..) | Tok::Coef(..) | Tok::Op('('))
        )
    }

    fn term(&mut self) -> Result<Expr, ScalarError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else if self.starts_factor() {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ScalarError> {
        let base = self.atom()?;
        if self.eat('^') {
            let q = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), q));
        }
        Ok(base)
    }

    fn int(&mut self) -> Result<i64, ScalarError> {
        let at = self.at();
        match self.peek().cloned() {
            Some(Tok::Num(z)) if z.is_real() && z.re().is_integer() => {
                self.pos += 1;
                i64::try_from(z.re().to_integer()).map_err(|_| err(at, "exponent too large"))
            }
            _ => Err(err(at, "expected an integer")),
        }
    }

    fn exponent(&mut self) -> Result<Q, ScalarError> {
        if self.eat('-') {
            return Ok(Q::from(-self.int()?));
        }
        if !self.eat('(') {
            return Ok(Q::from(self.int()?));
        }
        let neg = self.eat('-');
        let at = self.at();
        let q = match self.peek().cloned() {
            Some(Tok::Num(z)) if z.is_real() => {
                self.pos += 1;
                let r = z.re();
                let p = i64::try_from(r.numer().clone()).map_err(|_| err(at, "exponent too large"))?;
                let d = i64::try_from(r.denom().clone()).map_err(|_| err(at, "exponent too large"))?;
                let mut q = Q::new(p, d);
                if *r.denom() == BigInt::from(1) && self.eat('/') {
                    q /= Q::from(self.int()?);
                }
                q
            }
            _ => return Err(err(at, "expected a rational exponent")),
        };
        self.expect(')')?;
        Ok(if neg { -q } else { q })
    }

    fn atom(&mut self) -> Result<Expr, ScalarError> {
        let at = self.at();
        let Some(tok) = self.peek().cloned() else {
            return Err(err(at, "unexpected end of expression"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(z) => Ok(Expr::Num(z)),
            Tok::Basis(c, j) => Ok(Expr::Basis(c, j)),
            Tok::Coef(i, j, k) => Ok(Expr::Coef(i, j, k)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "rad" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(';')?;
                let m = self.int()?;
                if m < 1 {
                    return Err(err(at, "radical index must be positive"));
                }
                self.expect(')')?;
                Ok(Expr::Rad(Box::new(e), m as u32))
            }
            Tok::Ident(name) if name == "sqrt" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Rad(Box::new(e), 2))
            }
            Tok::Ident(name) if name == "i" => Ok(Expr::Num(GaussRat::i())),
            Tok::Ident(name) => Ok(Expr::Sym(name)),
            Tok::Op(c) => Err(err(at, format!("unexpected `{c}`"))),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ScalarError> {
        let mut p = Parser { toks: lex(src)?, pos: 0, end: src.len() };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(err(p.at(), "unexpected trailing input"));
        }
        Ok(e)
    }

    /// Names of the free symbols, without duplicates.
    pub fn symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Sym(s) = e {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        });
        out
    }

    pub fn coefs(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Coef(i, j, k) = e {
                if !out.contains(&(*i, *j, *k)) {
                    out.push((*i, *j, *k));
                }
            }
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Rad(a, _) => a.walk(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            _ => {}
        }
    }

    /// Evaluate in a field where every leaf is supplied by `leaf`. Radicals
    /// must have exact roots.
    pub fn eval_field<F: Field + Coeff>(
        &self,
        leaf: &dyn Fn(&Expr) -> Result<F, ScalarError>,
    ) -> Result<F, ScalarError> {
        Ok(match self {
            Expr::Num(z) => F::from_gauss(z),
            Expr::Sym(_) | Expr::Basis(..) | Expr::Coef(..) => leaf(self)?,
            Expr::Neg(a) => a.eval_field(leaf)?.neg(),
            Expr::Add(a, b) => a.eval_field(leaf)?.add(&b.eval_field(leaf)?),
            Expr::Sub(a, b) => a.eval_field(leaf)?.sub(&b.eval_field(leaf)?),
            Expr::Mul(a, b) => a.eval_field(leaf)?.mul(&b.eval_field(leaf)?),
            Expr::Div(a, b) => a.eval_field(leaf)?.div(&b.eval_field(leaf)?).ok_or(ScalarError::DivisionByZero)?,
            Expr::Pow(a, q) => {
                let x = a.eval_field(leaf)?;
                let p = x.powi(*q.numer()).ok_or(ScalarError::DivisionByZero)?;
                if *q.denom() == 1 {
                    p
                } else {
                    p.root(*q.denom() as u32)
                        .ok_or_else(|| ScalarError::Unsupported(format!("no exact root of {p}")))?
                }
            }
            Expr::Rad(a, m) => {
                let x = a.eval_field(leaf)?;
                x.root(*m).ok_or_else(|| ScalarError::Unsupported(format!("no exact root of {x}")))?
            }
        })
    }

    /// Evaluate to a scalar or vector t-expression.
    pub fn eval<C: Coeff>(&self, env: &Env<C>) -> Result<Value<C>, ScalarError> {
        use Value::{Scalar, Vector};
        Ok(match self {
            Expr::Num(z) => Scalar(TExpr::constant(C::from_gauss(z))),
            Expr::Sym(s) => env
                .symbols
                .get(s)
                .cloned()
                .ok_or_else(|| ScalarError::UnknownSymbol(s.clone()))?,
            Expr::Basis(c, j) => Vector(env.basis(*c, *j)?),
            Expr::Coef(i, j, k) => Scalar(
                env.coefs
                    .get(&(*i, *j, *k))
                    .cloned()
                    .ok_or_else(|| ScalarError::UnknownSymbol(format!("c[{i}][{j}][{k}]")))?,
            ),
            Expr::Neg(a) => match a.eval(env)? {
                Scalar(x) => Scalar(x.neg()),
                Vector(v) => Vector(v.iter().map(|x| x.neg()).collect()),
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let sub = matches!(self, Expr::Sub(..));
                let op = |x: &TExpr<C>, y: &TExpr<C>| if sub { x.sub(y) } else { x.add(y) };
                match (a.eval(env)?, b.eval(env)?) {
                    (Scalar(x), Scalar(y)) => Scalar(op(&x, &y)),
                    (Vector(x), Vector(y)) if x.len() == y.len() => {
                        Vector(x.iter().zip(&y).map(|(p, q)| op(p, q)).collect())
                    }
                    _ => return Err(ScalarError::Type("cannot add a scalar and a vector".into())),
                }
            }
            Expr::Mul(a, b) => match (a.eval(env)?, b.eval(env)?) {
                (Scalar(x), Scalar(y)) => Scalar(x.mul(&y)),
                (Scalar(x), Vector(v)) | (Vector(v), Scalar(x)) => {
                    Vector(v.iter().map(|y| x.mul(y)).collect())
                }
                _ => return Err(ScalarError::Type("cannot multiply two vectors".into())),
            },
            Expr::Div(a, b) => {
                let Scalar(d) = b.eval(env)? else {
                    return Err(ScalarError::Type("cannot divide by a vector".into()));
                };
                match a.eval(env)? {
                    Scalar(x) => Scalar(x.div(&d)?),
                    Vector(v) => {
                        let di = d.inv()?;
                        Vector(v.iter().map(|y| y.mul(&di)).collect())
                    }
                }
            }
            Expr::Pow(a, q) => match a.eval(env)? {
                Scalar(x) => Scalar(x.pow_q(*q)?),
                Vector(_) => return Err(ScalarError::Type("cannot raise a vector to a power".into())),
            },
            Expr::Rad(a, m) => match a.eval(env)? {
                Scalar(x) => Scalar(x.rad(*m)?),
                Vector(_) => return Err(ScalarError::Type("cannot take a root of a vector".into())),
            },
        })
    }

    pub fn eval_scalar<C: Coeff>(&self, env: &Env<C>) -> Result<TExpr<C>, ScalarError> {
        match self.eval(env)? {
            Value::Scalar(x) => Ok(x),
            Value::Vector(_) => Err(ScalarError::Type("expected a scalar, found a vector".into())),
        }
    }

    pub fn eval_vector<C: Coeff>(&self, env: &Env<C>) -> Result<Vec<TExpr<C>>, ScalarError> {
        match self.eval(env)? {
            Value::Vector(v) => Ok(v),
            Value::Scalar(x) if x.is_zero() && env.dim.is_some() => {
                Ok(vec![TExpr::zero(); env.dim.expect("checked")])
            }
            Value::Scalar(_) => Err(ScalarError::Type("expected a vector, found a scalar".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value<C: Coeff> {
    Scalar(TExpr<C>),
    Vector(Vec<TExpr<C>>),
}

/// Bindings for evaluation: named scalars, the dimension for `e_j`, extra
/// vectors `f_j` and structure constants `c[i][j][k]`.
#[derive(Clone)]
pub struct Env<C: Coeff> {
    pub symbols: HashMap<String, Value<C>>,
    pub dim: Option<usize>,
    pub vectors: HashMap<(char, usize), Vec<TExpr<C>>>,
    pub coefs: HashMap<(usize, usize, usize), TExpr<C>>,
}

impl<C: Coeff> Default for Env<C> {
    fn default() -> Self {
        Env { symbols: HashMap::new(), dim: None, vectors: HashMap::new(), coefs: HashMap::new() }
    }
}

impl<C: Coeff> Env<C> {
    /// Environment with `t` bound and `e_1..e_n` as unit vectors.
    pub fn with_dim(n: usize) -> Self {
        let mut env = Env { dim: Some(n), ..Default::default() };
        env.symbols.insert("t".into(), Value::Scalar(TExpr::t()));
        env
    }

    pub fn set(&mut self, name: &str, x: TExpr<C>) {
        self.symbols.insert(name.to_string(), Value::Scalar(x));
    }

    pub fn set_const(&mut self, name: &str, c: C) {
        self.set(name, TExpr::constant(c));
    }

    fn basis(&self, c: char, j: usize) -> Result<Vec<TExpr<C>>, ScalarError> {
        if let Some(v) = self.vectors.get(&(c, j)) {
            return Ok(v.clone());
        }
        match (c, self.dim) {
            ('e', Some(n)) if (1..=n).contains(&j) => {
                Ok((1..=n).map(|k| if k == j { TExpr::one() } else { TExpr::zero() }).collect())
            }
            _ => Err(ScalarError::UnknownSymbol(format!("{c}_{j}"))),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(z) => write!(f, "({z})"),
            Expr::Sym(s) => write!(f, "{s}"),
            Expr::Basis(c, j) => write!(f, "{c}_{j}"),
            Expr::Coef(i, j, k) => write!(f, "c[{i}][{j}][{k}]"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} {b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(a, q) if *q.denom() == 1 && *q.numer() >= 0 => write!(f, "{a}^{}", q.numer()),
            Expr::Pow(a, q) => write!(f, "{a}^({})", q),
            Expr::Rad(a, m) => write!(f, "rad({a};{m})"),
        }
    }
}

/// Parse a constant expression into a Gaussian rational.
pub fn parse_gauss(src: &str) -> Result<GaussRat, ScalarError> {
    Expr::parse(src)?.eval_field::<GaussRat>(&|e| Err(ScalarError::UnknownSymbol(e.to_string())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ring;

    fn g(s: &str) -> GaussRat {
        parse_gauss(s).unwrap()
    }

    #[test]
    fn caret_does_not_swallow_a_fraction() {
        assert_eq!(g("2^3/8"), GaussRat::one());
        assert_eq!(g("4^(1/2)"), GaussRat::from_i64(2));
    }

    #[test]
    fn imaginary_literals() {
        assert_eq!(g("1/2i"), GaussRat::from_ratio(1, 2).mul(&GaussRat::i()));
        assert_eq!(g("3/2+1/2i").to_string(), "3/2+1/2i");
        assert_eq!(g("2 i"), g("2i"));
    }

    #[test]
    fn unary_minus_covers_the_term() {
        let mut env = Env::<GaussRat>::default();
        env.set_const("a", GaussRat::from_i64(3));
        let e = Expr::parse("-a/(a-1)^2").unwrap();
        let v = e.eval_scalar(&env).unwrap().as_constant().unwrap();
        assert_eq!(v, GaussRat::from_ratio(-3, 4));
    }

    #[test]
    fn vectors() {
        let mut env = Env::<GaussRat>::with_dim(3);
        env.set_const("a", GaussRat::from_i64(2));
        let v = Expr::parse("t e_1 + a t^2 e_3").unwrap().eval_vector(&env).unwrap();
        assert_eq!(v[0].to_string(), "t");
        assert!(v[1].is_zero());
        assert_eq!(v[2].to_string(), "2 t^2");
    }

    #[test]
    fn errors_carry_positions() {
        match Expr::parse("t + * 2") {
            Err(ScalarError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
    }
}
