use std::fmt;

use super::field::{Coeff, Field, Ring};
use super::poly::monomial_text;

/// Finite Laurent polynomial `sum c[k] t^(low + k)`.
///
/// Normal form: `c` has no zero at either end; zero is the empty vector with
/// `low = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent<F> {
    low: i64,
    c: Vec<F>,
}

impl<F: Ring> Laurent<F> {
    pub fn new(low: i64, c: Vec<F>) -> Self {
        let start = c.iter().position(|x| !x.is_zero());
        match start {
            None => Laurent { low: 0, c: Vec::new() },
            Some(s) => {
                let end = c.iter().rposition(|x| !x.is_zero()).expect("nonzero entry") + 1;
                Laurent { low: low + s as i64, c: c[s..end].to_vec() }
            }
        }
    }

    pub fn monomial(x: F, e: i64) -> Self {
        Self::new(e, vec![x])
    }

    pub fn constant(x: F) -> Self {
        Self::monomial(x, 0)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.low)
        }
    }

    pub fn high(&self) -> Option<i64> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.low + self.c.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, e: i64) -> F {
        let k = e - self.low;
        if k < 0 {
            return F::zero();
        }
        self.c.get(k as usize).cloned().unwrap_or_else(F::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(move |(k, x)| (self.low + k as i64, x))
    }

    fn combine(&self, rhs: &Self, f: impl Fn(&F, &F) -> F) -> Self {
        if self.c.is_empty() && rhs.c.is_empty() {
            return self.clone();
        }
        let lo = match (self.valuation(), rhs.valuation()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => 0,
        };
        let hi = self.high().unwrap_or(lo).max(rhs.high().unwrap_or(lo));
        Self::new(lo, (lo..=hi).map(|e| f(&self.coeff(e), &rhs.coeff(e))).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a.add(b))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        Laurent { low: self.low, c: self.c.iter().map(|x| x.neg()).collect() }
    }

    pub fn scale(&self, x: &F) -> Self {
        Self::new(self.low, self.c.iter().map(|y| y.mul(x)).collect())
    }

    pub fn shift(&self, k: i64) -> Self {
        Laurent { low: if self.c.is_empty() { 0 } else { self.low + k }, c: self.c.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.c.is_empty() || rhs.c.is_empty() {
            return Laurent { low: 0, c: Vec::new() };
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
        Self::new(self.low + rhs.low, c)
    }

    /// Keep only exponents below `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if self.c.is_empty() || prec <= self.low {
            return Laurent { low: 0, c: Vec::new() };
        }
        let keep = ((prec - self.low) as usize).min(self.c.len());
        Self::new(self.low, self.c[..keep].to_vec())
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Laurent<G> {
        Laurent::new(self.low, self.c.iter().map(f).collect())
    }
}

impl<F: Field> Laurent<F> {
    pub fn eval(&self, t: &F) -> Option<F> {
        let base = t.powi(self.low)?;
        let mut acc = F::zero();
        let mut p = base;
        for x in &self.c {
            acc = acc.add(&x.mul(&p));
            p = p.mul(t);
        }
        Some(acc)
    }
}

impl<F: Coeff> Ring for Laurent<F> {
    fn zero() -> Self {
        Laurent { low: 0, c: Vec::new() }
    }

    fn one() -> Self {
        Self::constant(F::one())
    }

    fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        Laurent::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Laurent::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Laurent::mul(self, rhs)
    }

    fn neg(&self) -> Self {
        Laurent::neg(self)
    }
}

impl<F: Coeff> fmt::Display for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, x) in self.terms() {
            let neg = x.is_negative_looking();
            let x = if neg { x.neg() } else { x.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            write!(f, "{}", monomial_text(&x, "t", e, 1))?;
            first = false;
        }
        Ok(())
    }
}

impl<F: Coeff> fmt::Debug for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    fn l(low: i64, c: &[i64]) -> Laurent<GaussRat> {
        Laurent::new(low, c.iter().map(|&x| GaussRat::from_i64(x)).collect())
    }

    #[test]
    fn cancellation_moves_valuation() {
        let a = l(-2, &[1, 3]);
        let b = l(-2, &[-1, 0, 5]);
        let s = a.add(&b);
        assert_eq!(s.valuation(), Some(-1));
        assert_eq!(s.to_string(), "3 t^(-1) + 5");
    }

    #[test]
    fn products() {
        let a = l(-1, &[1, 1]);
        assert_eq!(a.mul(&a), l(-2, &[1, 2, 1]));
    }
}
