use std::fmt;

use super::field::{Coeff, Field, Ring};
use super::gauss::GaussRat;
use super::poly::Poly;

/// Degree bound for numerator and denominator. Exceeding it means an
/// expression has escaped the intended symbolic regime.
pub const DEGREE_CAP: usize = 16;

/// Reduced quotient of polynomials in the family parameter `a`, with a
/// monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

/// Rational functions of one parameter over Q(i).
pub type ParamRat = RatFunc<GaussRat>;

impl<F: Field> RatFunc<F> {
    /// `None` when the denominator is zero.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_zero() || g.is_constant() {
            (num, den)
        } else {
            (num.divrem(&g)?.0, den.divrem(&g)?.0)
        };
        let l = den.lead().inv()?;
        num = num.scale(&l);
        den = den.scale(&l);
        if num.is_zero() {
            den = Poly::one();
        }
        let deg = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
        if deg > DEGREE_CAP {
            panic!("rational function degree {deg} exceeds the cap of {DEGREE_CAP}");
        }
        Some(RatFunc { num, den })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        Self::new(p, Poly::one()).expect("unit denominator")
    }

    pub fn constant(x: F) -> Self {
        Self::from_poly(Poly::constant(x))
    }

    /// The parameter itself.
    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Value at a point, `None` at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        self.num.eval(x).div(&self.den.eval(x))
    }
}

impl<F: Coeff> Ring for RatFunc<F> {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::new(self.num.add(&rhs.num), self.den.clone()).expect("nonzero");
        }
        Self::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
        .expect("nonzero")
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("nonzero")
    }

    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
}

impl<F: Coeff> Field for RatFunc<F> {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Self::new(self.den.clone(), self.num.clone())
    }
}

impl Coeff for ParamRat {
    fn from_gauss(z: &GaussRat) -> Self {
        Self::constant(z.clone())
    }

    fn as_gauss(&self) -> Option<GaussRat> {
        self.constant_value()
    }

    fn root(&self, m: u32) -> Option<Self> {
        self.constant_value()?.exact_root(m).map(Self::constant)
    }

    fn is_real(&self) -> bool {
        self.num.coeffs().iter().chain(self.den.coeffs()).all(|c| c.is_real())
    }

    fn is_negative_real(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_negative_real())
    }

    fn is_compound(&self) -> bool {
        !self.is_monomial() || self.num.lead().is_compound()
    }

    fn is_negative_looking(&self) -> bool {
        self.is_monomial() && self.num.lead().is_negative_looking()
    }
}

impl ParamRat {
    fn is_monomial(&self) -> bool {
        self.den.is_constant() && self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
    }
}

impl<F: Coeff> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num.fmt_var("a"))
        } else {
            write!(f, "({})/({})", self.num.fmt_var("a"), self.den.fmt_var("a"))
        }
    }
}

impl<F: Coeff> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let a = ParamRat::var();
        let one = ParamRat::one();
        // (a^2 - 1)/(a - 1) = a + 1
        let q = a.mul(&a).sub(&one).div(&a.sub(&one)).unwrap();
        assert_eq!(q, a.add(&one));
        assert_eq!(q.to_string(), "1 + a");
    }

    #[test]
    fn evaluation_and_poles() {
        let a = ParamRat::var();
        let f = ParamRat::one().div(&a.sub(&ParamRat::one())).unwrap();
        assert_eq!(f.eval(&GaussRat::from_i64(3)), Some(GaussRat::from_ratio(1, 2)));
        assert_eq!(f.eval(&GaussRat::one()), None);
    }

    #[test]
    #[should_panic(expected = "exceeds the cap")]
    fn degree_cap_panics() {
        ParamRat::var().pow(17);
    }
}
