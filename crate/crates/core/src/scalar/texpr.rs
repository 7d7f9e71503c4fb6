use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use super::field::{Coeff, Ring};
use super::gauss::GaussRat;
use super::laurent::Laurent;
use super::poly::{monomial_text, power_text, Poly};
use super::series::{Series, SeriesLimit};
use super::ScalarError;

/// Rational exponent of t.
pub type Q = Ratio<i64>;

/// Radical symbol `rad(f; m)`, the principal m-th root of f.
///
/// A non-constant radicand is normalized to constant term 1 and is not a
/// perfect power. A constant radicand has no exact m-th root in the field.
#[derive(Clone, PartialEq)]
pub struct RadKey<C> {
    radicand: Poly<C>,
    m: u32,
    text: String,
}

impl<C: Coeff> RadKey<C> {
    fn new(radicand: Poly<C>, m: u32) -> Self {
        let text = format!("rad({};{})", radicand.fmt_var("t"), m);
        RadKey { radicand, m, text }
    }

    pub fn radicand(&self) -> &Poly<C> {
        &self.radicand
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_constant(&self) -> bool {
        self.radicand.is_constant()
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

/// `coef * t^exp * prod rad^e`.
#[derive(Clone, PartialEq)]
pub struct Term<C> {
    pub coef: C,
    pub exp: Q,
    pub rads: Vec<(RadKey<C>, i32)>,
}

/// Finite sum of terms in t with rational exponents and radical factors.
#[derive(Clone, PartialEq)]
pub struct TExpr<C> {
    terms: Vec<Term<C>>,
}

/// Limit at t -> 0+.
#[derive(Clone, Debug, PartialEq)]
pub enum Limit<C> {
    Value(C),
    Diverges,
    /// The expression contains radicals the exact machinery cannot expand.
    NotExact,
}

fn shape_cmp<C: Coeff>(a: &Term<C>, b: &Term<C>) -> Ordering {
    a.exp.cmp(&b.exp).then_with(|| {
        let ka = a.rads.iter().map(|(k, e)| (k.text.as_str(), *e));
        let kb = b.rads.iter().map(|(k, e)| (k.text.as_str(), *e));
        ka.cmp(kb)
    })
}

fn merge_rads<C: Coeff>(mut rads: Vec<(RadKey<C>, i32)>) -> Vec<(RadKey<C>, i32)> {
    rads.sort_by(|a, b| a.0.text.cmp(&b.0.text).then(a.0.m.cmp(&b.0.m)));
    let mut out: Vec<(RadKey<C>, i32)> = Vec::with_capacity(rads.len());
    for (k, e) in rads {
        match out.last_mut() {
            Some((lk, le)) if lk.text == k.text => *le += e,
            _ => out.push((k, e)),
        }
    }
    out.retain(|(_, e)| *e != 0);
    out
}

/// Fold whole powers of a radical back into the coefficient or into a
/// polynomial factor.
fn reduce_term<C: Coeff>(t: Term<C>) -> Vec<Term<C>> {
    let mut coef = t.coef;
    let mut poly = Poly::<C>::one();
    let mut rads = Vec::new();
    for (k, e) in merge_rads(t.rads) {
        let m = k.m as i32;
        if k.is_constant() {
            let c = k.radicand.coeff(0);
            let (q, r) = (e.div_euclid(m), e.rem_euclid(m));
            coef = coef.mul(&c.powi(q as i64).expect("nonzero radicand"));
            if r != 0 {
                rads.push((k, r));
            }
        } else if e >= m {
            poly = poly.mul(&k.radicand.pow((e / m) as u32));
            if e % m != 0 {
                rads.push((k, e % m));
            }
        } else {
            rads.push((k, e));
        }
    }
    poly.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| Term { coef: coef.mul(c), exp: t.exp + Q::from(j as i64), rads: rads.clone() })
        .filter(|t| !t.coef.is_zero())
        .collect()
}

fn arg_of(z: &GaussRat) -> f64 {
    let (re, im) = z.to_f64();
    im.atan2(re)
}

impl<C: Coeff> TExpr<C> {
    fn normalize(mut terms: Vec<Term<C>>) -> Self {
        terms.retain(|t| !t.coef.is_zero());
        terms.sort_by(shape_cmp);
        let mut out: Vec<Term<C>> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if shape_cmp(last, &t) == Ordering::Equal => {
                    last.coef = last.coef.add(&t.coef);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coef.is_zero());
        TExpr { terms: out }
    }

    pub fn zero() -> Self {
        TExpr { terms: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, Q::from(0))
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    /// The variable t.
    pub fn t() -> Self {
        Self::monomial(C::one(), Q::from(1))
    }

    pub fn monomial(c: C, exp: Q) -> Self {
        Self::normalize(vec![Term { coef: c, exp, rads: Vec::new() }])
    }

    pub fn from_laurent(l: &Laurent<C>) -> Self {
        Self::normalize(l.terms().map(|(e, c)| Term { coef: c.clone(), exp: Q::from(e), rads: Vec::new() }).collect())
    }

    pub fn terms(&self) -> &[Term<C>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the expression does not involve t or radicals.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::zero()),
            [t] if t.exp == Q::from(0) && t.rads.is_empty() => Some(t.coef.clone()),
            _ => None,
        }
    }

    pub fn has_radicals(&self) -> bool {
        self.terms.iter().any(|t| !t.rads.is_empty())
    }

    pub fn has_constant_radicals(&self) -> bool {
        self.terms.iter().any(|t| t.rads.iter().any(|(k, _)| k.is_constant()))
    }

    pub fn has_t_radicals(&self) -> bool {
        self.terms.iter().any(|t| t.rads.iter().any(|(k, _)| !k.is_constant()))
    }

    /// Least common denominator of the exponents of t.
    pub fn exponent_lcm(&self) -> i64 {
        self.terms.iter().fold(1, |acc, t| acc.lcm(t.exp.denom()))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::normalize(self.terms.iter().chain(&rhs.terms).cloned().collect())
    }

    pub fn neg(&self) -> Self {
        TExpr {
            terms: self.terms.iter().map(|t| Term { coef: t.coef.neg(), ..t.clone() }).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::normalize(self.terms.iter().map(|t| Term { coef: t.coef.mul(c), ..t.clone() }).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &rhs.terms {
                let mut rads = a.rads.clone();
                rads.extend(b.rads.iter().cloned());
                out.extend(reduce_term(Term { coef: a.coef.mul(&b.coef), exp: a.exp + b.exp, rads }));
            }
        }
        Self::normalize(out)
    }

    /// Inverse of a single term.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        match self.terms.as_slice() {
            [] => Err(ScalarError::DivisionByZero),
            [t] => Ok(Self::normalize(reduce_term(Term {
                coef: t.coef.inv().ok_or(ScalarError::DivisionByZero)?,
                exp: -t.exp,
                rads: t.rads.iter().map(|(k, e)| (k.clone(), -e)).collect(),
            }))),
            _ => Err(ScalarError::Unsupported(format!(
                "division by the sum `{self}`; only single terms can be inverted"
            ))),
        }
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if let Some(c) = rhs.as_constant() {
            let ci = c.inv().ok_or(ScalarError::DivisionByZero)?;
            return Ok(self.scale(&ci));
        }
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn powi(&self, e: i64) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// `self^(p/q)` on the principal branch.
    pub fn pow_q(&self, q: Q) -> Result<Self, ScalarError> {
        if *q.denom() == 1 {
            return self.powi(*q.numer());
        }
        if let [t] = self.terms.as_slice() {
            if t.rads.is_empty() && t.coef.is_one() {
                return Ok(Self::monomial(C::one(), t.exp * q));
            }
        }
        self.rad(*q.denom() as u32)?.powi(*q.numer())
    }

    /// Principal m-th root.
    pub fn rad(&self, m: u32) -> Result<Self, ScalarError> {
        if m == 0 {
            return Err(ScalarError::Unsupported("rad with index 0".into()));
        }
        match self.terms.as_slice() {
            [] => Ok(Self::zero()),
            [t] => root_term(t, m).map(Self::normalize),
            _ => self.root_sum(m),
        }
    }

    fn root_sum(&self, m: u32) -> Result<Self, ScalarError> {
        if self.has_radicals() {
            return Err(ScalarError::Unsupported(format!("radical of `{self}`, a sum containing radicals")));
        }
        if self.exponent_lcm() != 1 {
            return Err(ScalarError::Unsupported(format!(
                "radical of `{self}`, a sum with fractional powers of t"
            )));
        }
        let v = self.terms.iter().map(|t| *t.exp.numer()).min().expect("nonempty");
        let hi = self.terms.iter().map(|t| *t.exp.numer()).max().expect("nonempty");
        let mut c = vec![C::zero(); (hi - v + 1) as usize];
        for t in &self.terms {
            c[(*t.exp.numer() - v) as usize] = t.coef.clone();
        }
        let f = Poly::from_coeffs(c);
        let c0 = f.coeff(0);
        let h = f.scale(&c0.inv().expect("nonzero constant term"));
        if c0.is_negative_real() && !h.coeffs().iter().all(|x| x.is_real()) {
            return Err(ScalarError::Unsupported(format!(
                "radical of `{self}`: the branch near t = 0 is not determined"
            )));
        }
        let (k, g) = h.max_power();
        let d = (k as i64).gcd(&(m as i64)) as u32;
        let radpart = Self::normalize(reduce_term(Term {
            coef: C::one(),
            exp: Q::new(v, m as i64),
            rads: vec![(RadKey::new(g, m / d), (k / d) as i32)],
        }));
        Ok(const_root(&c0, m).mul(&radpart))
    }

    pub fn map_radicands<D: Coeff>(
        &self,
        f: &impl Fn(&C) -> Result<D, ScalarError>,
    ) -> Result<TExpr<D>, ScalarError> {
        let mut acc = TExpr::<D>::zero();
        for t in &self.terms {
            let mut x = TExpr::monomial(f(&t.coef)?, t.exp);
            for (k, e) in &t.rads {
                let p = k.radicand.coeffs().iter().map(f).collect::<Result<Vec<_>, _>>()?;
                let base = TExpr::<D>::from_poly(&Poly::from_coeffs(p));
                x = x.mul(&base.rad(k.m)?.powi(*e as i64)?);
            }
            acc = acc.add(&x);
        }
        Ok(acc)
    }

    pub fn from_poly(p: &Poly<C>) -> Self {
        Self::normalize(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(j, c)| Term { coef: c.clone(), exp: Q::from(j as i64), rads: Vec::new() })
                .collect(),
        )
    }

    /// Substitute t = s^n.
    pub fn inflate(&self, n: i64) -> Self {
        Self::normalize(
            self.terms
                .iter()
                .map(|t| Term {
                    coef: t.coef.clone(),
                    exp: t.exp * n,
                    rads: t
                        .rads
                        .iter()
                        .map(|(k, e)| (RadKey::new(k.radicand.inflate(n as usize), k.m), *e))
                        .collect(),
                })
                .collect(),
        )
    }

    /// Exact Laurent polynomial, when there are no radicals and no
    /// fractional exponents.
    pub fn to_laurent(&self) -> Option<Laurent<C>> {
        let mut acc = Laurent::zero();
        for t in &self.terms {
            if !t.rads.is_empty() || *t.exp.denom() != 1 {
                return None;
            }
            acc = acc.add(&Laurent::monomial(t.coef.clone(), *t.exp.numer()));
        }
        Some(acc)
    }

    /// Series expansion keeping `len` coefficients of every radical factor.
    /// Needs integer exponents and no constant radicals.
    pub fn to_series(&self, len: usize) -> Option<Series<C>> {
        let mut acc = Series::zero();
        for t in &self.terms {
            if *t.exp.denom() != 1 {
                return None;
            }
            let mut s = Series::exact(Laurent::monomial(t.coef.clone(), *t.exp.numer()));
            for (k, e) in &t.rads {
                if k.is_constant() {
                    return None;
                }
                let alpha = C::from_i64(*e as i64).div(&C::from_i64(k.m as i64)).expect("nonzero");
                let g = k.radicand.series_pow(&alpha, len);
                s = s.mul(&Series::with_prec(Laurent::new(0, g), len as i64));
            }
            acc = acc.add(&s);
        }
        Some(acc)
    }

    pub fn limit_at_zero(&self) -> Limit<C> {
        if !self.has_radicals() {
            let low = self.terms.first();
            return match low {
                None => Limit::Value(C::zero()),
                Some(t) if t.exp < Q::from(0) => Limit::Diverges,
                Some(t) if t.exp == Q::from(0) => Limit::Value(t.coef.clone()),
                Some(_) => Limit::Value(C::zero()),
            };
        }
        if self.terms.iter().all(|t| t.exp > Q::from(0)) {
            return Limit::Value(C::zero());
        }
        if self.has_constant_radicals() {
            return Limit::NotExact;
        }
        let n = self.exponent_lcm();
        let x = self.inflate(n);
        let mut len = 8;
        while len <= 256 {
            let s = x.to_series(len).expect("integer exponents after inflation");
            match s.ratio_limit(&Series::one()) {
                SeriesLimit::Value(v) => return Limit::Value(v),
                SeriesLimit::Diverges => return Limit::Diverges,
                SeriesLimit::Undetermined => len *= 2,
            }
        }
        Limit::NotExact
    }
}

/// Principal m-th root of a constant: exact when possible, otherwise a
/// constant radical with the smallest index.
pub fn const_root<C: Coeff>(c: &C, m: u32) -> TExpr<C> {
    if let Some(r) = c.root(m) {
        return TExpr::constant(r);
    }
    if c.is_zero() {
        return TExpr::zero();
    }
    let mut base = c.clone();
    let mut idx = m;
    // rad(r^d; m) = rad(r; m/d) on the principal branch
    'outer: loop {
        for d in (2..=idx).rev() {
            if idx.is_multiple_of(d) {
                if let Some(r) = base.root(d) {
                    base = r;
                    idx /= d;
                    continue 'outer;
                }
            }
        }
        break;
    }
    if idx == 1 {
        return TExpr::constant(base);
    }
    TExpr { terms: vec![Term { coef: C::one(), exp: Q::from(0), rads: vec![(RadKey::new(Poly::constant(base), idx), 1)] }] }
}

fn root_term<C: Coeff>(t: &Term<C>, m: u32) -> Result<Vec<Term<C>>, ScalarError> {
    check_branch(t)?;
    let head = const_root(&t.coef, m);
    let mut rads = Vec::new();
    for (k, e) in &t.rads {
        let mm = k.m * m;
        let g = (e.unsigned_abs()).gcd(&mm);
        rads.push((RadKey::new(k.radicand.clone(), mm / g), e / g as i32));
    }
    let tail = TExpr::normalize(reduce_term(Term { coef: C::one(), exp: t.exp / m as i64, rads }));
    Ok(head.mul(&tail).terms)
}

/// The product of principal roots equals the principal root of the product
/// only if the arguments add up without wrapping past the negative axis.
fn check_branch<C: Coeff>(t: &Term<C>) -> Result<(), ScalarError> {
    let Some(z) = t.coef.as_gauss() else {
        return Ok(());
    };
    let mut arg = arg_of(&z);
    let mut complex_t = false;
    for (k, e) in &t.rads {
        if k.is_constant() {
            match k.radicand.coeff(0).as_gauss() {
                Some(c) => arg += *e as f64 * arg_of(&c) / k.m as f64,
                None => return Ok(()),
            }
        } else if !k.radicand.coeffs().iter().all(|c| c.is_real()) {
            complex_t = true;
        }
    }
    // complex t-radicals move the argument slightly away from its limit
    let (lo, hi) = if complex_t { (-PI + 1e-6, PI - 1e-6) } else { (-PI + 1e-12, PI + 1e-12) };
    if arg > lo && arg <= hi {
        Ok(())
    } else {
        Err(ScalarError::Unsupported(format!(
            "radical of a term with argument {arg:.6}; the principal branch does not factor"
        )))
    }
}

impl<C: Coeff> Ring for TExpr<C> {
    fn zero() -> Self {
        TExpr::zero()
    }

    fn one() -> Self {
        TExpr::one()
    }

    fn from_i64(n: i64) -> Self {
        TExpr::constant(C::from_i64(n))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        TExpr::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        TExpr::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        TExpr::mul(self, rhs)
    }

    fn neg(&self) -> Self {
        TExpr::neg(self)
    }
}

fn term_text<C: Coeff>(t: &Term<C>, coef: &C) -> String {
    let mut parts = Vec::new();
    let tp = power_text("t", *t.exp.numer(), *t.exp.denom());
    let rads: Vec<String> = t
        .rads
        .iter()
        .map(|(k, e)| match *e {
            1 => k.text.clone(),
            e if e > 0 => format!("{}^{}", k.text, e),
            e => format!("{}^({})", k.text, e),
        })
        .collect();
    if tp.is_empty() && rads.is_empty() {
        return monomial_text(coef, "t", 0, 1);
    }
    if !coef.is_one() {
        parts.push(monomial_text(coef, "t", 0, 1));
    }
    if !tp.is_empty() {
        parts.push(tp);
    }
    parts.extend(rads);
    parts.join(" ")
}

impl<C: Coeff> fmt::Display for TExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coef.is_negative_looking();
            let c = if neg { t.coef.neg() } else { t.coef.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            write!(f, "{}", term_text(t, &c))?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for TExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type T = TExpr<GaussRat>;

    fn c(n: i64) -> T {
        T::from_i64(n)
    }

    #[test]
    fn radical_normal_form() {
        // (t+1)^2 under a fifth root becomes rad(1 + t;5)^2
        let x = T::t().add(&c(1));
        let r = x.mul(&x).rad(5).unwrap();
        assert_eq!(r.to_string(), "rad(1 + t;5)^2");
        // rad(1+t;5)^5 folds back into the polynomial
        let r1 = x.rad(5).unwrap();
        assert_eq!(r1.powi(5).unwrap(), x);
    }

    #[test]
    fn perfect_powers_leave_no_radical() {
        let x = T::t().add(&c(1));
        let sq = x.mul(&x).rad(2).unwrap();
        assert_eq!(sq, x);
        assert_eq!(c(-4).rad(2).unwrap().to_string(), "2i");
        assert_eq!(c(4).rad(4).unwrap().to_string(), "rad(2;2)");
    }

    #[test]
    fn fractional_powers() {
        let x = T::t().mul(&c(9)).rad(2).unwrap();
        assert_eq!(x.to_string(), "3 t^(1/2)");
        assert_eq!(x.exponent_lcm(), 2);
        assert_eq!(x.inflate(2).to_string(), "3 t");
    }

    #[test]
    fn limits() {
        let x = T::t().add(&c(1));
        let r = x.rad(5).unwrap();
        // (rad(1+t;5) - 1)/t -> 1/5
        let q = r.sub(&c(1)).mul(&T::t().inv().unwrap());
        assert_eq!(q.limit_at_zero(), Limit::Value(GaussRat::from_ratio(1, 5)));
        assert_eq!(T::t().inv().unwrap().limit_at_zero(), Limit::Diverges);
        assert_eq!(c(2).rad(2).unwrap().limit_at_zero(), Limit::NotExact);
    }

    #[test]
    fn sums_cannot_be_inverted() {
        assert!(T::t().add(&c(1)).inv().is_err());
    }
}
