use std::fmt;

use super::field::{Coeff, Ring};
use super::laurent::Laurent;

/// Laurent series known up to (excluding) `t^prec`; `prec = None` means the
/// value is exact.
#[derive(Clone, PartialEq, Eq)]
pub struct Series<F> {
    known: Laurent<F>,
    prec: Option<i64>,
}

/// Outcome of reading the constant term of a quotient of series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesLimit<F> {
    Value(F),
    Diverges,
    /// The known terms do not decide the limit.
    Undetermined,
}

impl<F: Coeff> Series<F> {
    pub fn exact(l: Laurent<F>) -> Self {
        Series { known: l, prec: None }
    }

    pub fn with_prec(l: Laurent<F>, prec: i64) -> Self {
        Series { known: l.truncate(prec), prec: Some(prec) }
    }

    pub fn known(&self) -> &Laurent<F> {
        &self.known
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    /// Lowest exponent whose coefficient is known to be nonzero.
    pub fn valuation(&self) -> Option<i64> {
        self.known.valuation()
    }

    /// Lower bound for the true valuation.
    fn order_bound(&self) -> Option<i64> {
        match (self.known.valuation(), self.prec) {
            (Some(v), _) => Some(v),
            (None, p) => p,
        }
    }

    /// Limit at zero of `self / den`.
    pub fn ratio_limit(&self, den: &Self) -> SeriesLimit<F> {
        let Some(v) = den.valuation() else {
            return SeriesLimit::Undetermined;
        };
        let d = den.known.coeff(v);
        match self.known.valuation() {
            Some(w) if w < v => SeriesLimit::Diverges,
            Some(w) if w == v => SeriesLimit::Value(self.known.coeff(w).div(&d).expect("nonzero")),
            _ => match self.prec {
                Some(p) if p <= v => SeriesLimit::Undetermined,
                _ => SeriesLimit::Value(F::zero()),
            },
        }
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<F: Coeff> Ring for Series<F> {
    fn zero() -> Self {
        Series::exact(Laurent::zero())
    }

    fn one() -> Self {
        Series::exact(Laurent::one())
    }

    fn from_i64(n: i64) -> Self {
        Series::exact(Laurent::from_i64(n))
    }

    /// Only an exact zero counts; an unknown remainder is not zero.
    fn is_zero(&self) -> bool {
        self.known.is_zero() && self.prec.is_none()
    }

    fn add(&self, rhs: &Self) -> Self {
        let prec = min_opt(self.prec, rhs.prec);
        let s = self.known.add(&rhs.known);
        match prec {
            Some(p) => Series::with_prec(s, p),
            None => Series::exact(s),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        let pa = match (rhs.prec, self.order_bound()) {
            (Some(p), Some(v)) => Some(p + v),
            _ => None,
        };
        let pb = match (self.prec, rhs.order_bound()) {
            (Some(p), Some(v)) => Some(p + v),
            _ => None,
        };
        // an exact zero factor makes the product exactly zero
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let prod = self.known.mul(&rhs.known);
        match min_opt(pa, pb) {
            Some(p) => Series::with_prec(prod, p),
            None => Series::exact(prod),
        }
    }

    fn neg(&self) -> Self {
        Series { known: self.known.neg(), prec: self.prec }
    }
}

impl<F: Coeff> fmt::Display for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.prec {
            None => write!(f, "{}", self.known),
            Some(p) => write!(f, "{} + O(t^{})", self.known, p),
        }
    }
}

impl<F: Coeff> fmt::Debug for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    fn s(low: i64, c: &[i64], prec: Option<i64>) -> Series<GaussRat> {
        let l = Laurent::new(low, c.iter().map(|&x| GaussRat::from_i64(x)).collect());
        match prec {
            Some(p) => Series::with_prec(l, p),
            None => Series::exact(l),
        }
    }

    #[test]
    fn precision_of_products() {
        // (1 + t + O(t^3)) * t^2 = t^2 + t^3 + O(t^5)
        let a = s(0, &[1, 1], Some(3));
        let b = s(2, &[1], None);
        let p = a.mul(&b);
        assert_eq!(p.prec(), Some(5));
        assert_eq!(p.known().coeff(3), GaussRat::one());
    }

    #[test]
    fn limits_of_ratios() {
        let den = s(2, &[2], None);
        assert_eq!(s(2, &[4, 1], Some(4)).ratio_limit(&den), SeriesLimit::Value(GaussRat::from_i64(2)));
        assert_eq!(s(1, &[1], Some(4)).ratio_limit(&den), SeriesLimit::Diverges);
        assert_eq!(s(0, &[], Some(2)).ratio_limit(&den), SeriesLimit::Undetermined);
        assert_eq!(s(0, &[], Some(3)).ratio_limit(&den), SeriesLimit::Value(GaussRat::zero()));
    }
}
