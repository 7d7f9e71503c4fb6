use std::fmt;

use super::field::{Coeff, Field, Ring};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    c: Vec<F>,
}

impl<F: Ring> Poly<F> {
    pub fn from_coeffs(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(x: F) -> Self {
        Self::from_coeffs(vec![x])
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    /// The polynomial `x`.
    pub fn var() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(x: F, k: usize) -> Self {
        let mut c = vec![F::zero(); k + 1];
        c[k] = x;
        Self::from_coeffs(c)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> F {
        self.c.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lead(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }

    /// Order of vanishing at zero; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k).add(&rhs.coeff(k))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k).sub(&rhs.coeff(k))).collect())
    }

    pub fn neg(&self) -> Self {
        Poly { c: self.c.iter().map(|x| x.neg()).collect() }
    }

    pub fn scale(&self, x: &F) -> Self {
        Self::from_coeffs(self.c.iter().map(|y| y.mul(x)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut c = vec![F::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![F::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    /// Divide by x^k, dropping the low coefficients.
    pub fn unshift(&self, k: usize) -> Self {
        Self::from_coeffs(self.c.iter().skip(k).cloned().collect())
    }

    pub fn eval(&self, x: &F) -> F {
        self.c.iter().rev().fold(F::zero(), |acc, a| acc.mul(x).add(a))
    }

    /// f(x^k).
    pub fn inflate(&self, k: usize) -> Self {
        let mut c = vec![F::zero(); self.degree().map_or(0, |d| d * k + 1)];
        for (i, a) in self.c.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::from_coeffs(c)
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_coeffs(self.c.iter().map(f).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a.mul(&F::from_i64(k as i64)))
                .collect(),
        )
    }
}

impl<F: Field> Poly<F> {
    /// Euclidean division, `None` when dividing by zero.
    pub fn divrem(&self, d: &Self) -> Option<(Self, Self)> {
        let dl = d.lead().inv()?;
        let dd = d.degree()?;
        let mut r = self.c.clone();
        let mut q = vec![F::zero(); self.c.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let f = r[r.len() - 1].mul(&dl);
            if !f.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] = r[k + j].sub(&f.mul(b));
                }
            }
            q[k] = f;
            r.pop();
        }
        Some((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    pub fn monic(&self) -> Self {
        match self.lead().inv() {
            Some(l) => self.scale(&l),
            None => Self::zero(),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// First `len` coefficients of self^alpha for a series with constant
    /// term one.
    pub fn series_pow(&self, alpha: &F, len: usize) -> Vec<F> {
        assert!(self.coeff(0).is_one(), "series_pow needs constant term 1");
        let mut g: Vec<F> = Vec::with_capacity(len);
        if len == 0 {
            return g;
        }
        g.push(F::one());
        for n in 1..len {
            let mut s = F::zero();
            for j in 1..=n.min(self.c.len().saturating_sub(1)) {
                let w = alpha.mul(&F::from_i64(j as i64)).sub(&F::from_i64((n - j) as i64));
                s = s.add(&w.mul(&self.c[j]).mul(&g[n - j]));
            }
            g.push(s.div(&F::from_i64(n as i64)).expect("nonzero"));
        }
        g
    }

    /// g with g^k = self and g(0) = 1, for self(0) = 1.
    pub fn perfect_root(&self, k: u32) -> Option<Self> {
        let d = self.degree()?;
        if k == 0 || d % k as usize != 0 || !self.coeff(0).is_one() {
            return None;
        }
        let alpha = F::one().div(&F::from_i64(k as i64))?;
        let g = Self::from_coeffs(self.series_pow(&alpha, d / k as usize + 1));
        if g.pow(k) == *self {
            Some(g)
        } else {
            None
        }
    }

    /// Largest k with self = g^k, together with g. Needs self(0) = 1.
    pub fn max_power(&self) -> (u32, Self) {
        let d = self.degree().unwrap_or(0) as u32;
        for k in (2..=d).rev() {
            if let Some(g) = self.perfect_root(k) {
                return (k, g);
            }
        }
        (1, self.clone())
    }
}

impl<F: Coeff> Poly<F> {
    /// Print with the given variable name, lowest degree first.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.c.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative_looking();
            let a = if neg { a.neg() } else { a.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&monomial_text(&a, var, k as i64, 1));
        }
        out
    }
}

/// `coef var^(p/q)` with the conventions shared by every printer.
pub(crate) fn monomial_text<F: Coeff>(a: &F, var: &str, p: i64, q: i64) -> String {
    let vpart = power_text(var, p, q);
    if vpart.is_empty() {
        return if a.is_compound() { format!("({a})") } else { a.to_string() };
    }
    if a.is_one() {
        vpart
    } else if a.is_compound() {
        format!("({a}) {vpart}")
    } else {
        format!("{a} {vpart}")
    }
}

pub(crate) fn power_text(var: &str, p: i64, q: i64) -> String {
    match (p, q) {
        (0, _) => String::new(),
        (1, 1) => var.to_string(),
        (p, 1) if p > 0 => format!("{var}^{p}"),
        (p, 1) => format!("{var}^({p})"),
        (p, q) => format!("{var}^({p}/{q})"),
    }
}

impl<F: Coeff> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("t"))
    }
}

impl<F: Coeff> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.fmt_var("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    fn p(c: &[i64]) -> Poly<GaussRat> {
        Poly::from_coeffs(c.iter().map(|&x| GaussRat::from_i64(x)).collect())
    }

    #[test]
    fn gcd_and_division() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn perfect_powers() {
        let g = p(&[1, 2, 1]);
        assert_eq!(g.perfect_root(2), Some(p(&[1, 1])));
        assert_eq!(g.pow(2).max_power(), (4, p(&[1, 1])));
        assert_eq!(p(&[1, 1]).perfect_root(2), None);
    }

    #[test]
    fn printing() {
        assert_eq!(p(&[1, -2, 1]).fmt_var("t"), "1 - 2 t + t^2");
        assert_eq!(p(&[0, 0, -1]).fmt_var("a"), "-a^2");
    }
}
