use std::fmt;

use super::gauss::GaussRat;

/// Commutative ring with exact equality.
///
/// Arithmetic is spelled out as named methods rather than operator traits so
/// generic code does not need higher-ranked bounds on references.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

pub trait Field: Ring {
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn powi(&self, e: i64) -> Option<Self> {
        let p = self.pow(e.unsigned_abs() as u32);
        if e < 0 {
            p.inv()
        } else {
            Some(p)
        }
    }
}

/// Coefficient field of a t-expression: either a plain Gaussian rational or
/// a rational function of the family parameter.
pub trait Coeff: Field {
    fn from_gauss(z: &GaussRat) -> Self;

    /// The value as a Gaussian rational when it does not depend on a parameter.
    fn as_gauss(&self) -> Option<GaussRat>;

    /// Exact principal m-th root, when it lies in the field.
    fn root(&self, m: u32) -> Option<Self>;

    /// True when every coefficient is real.
    fn is_real(&self) -> bool;

    /// True for a negative real constant.
    fn is_negative_real(&self) -> bool;

    /// Whether a printed value must be parenthesized as a factor.
    fn is_compound(&self) -> bool;

    /// Whether the printed value starts with a minus sign that can be pulled
    /// out of a sum.
    fn is_negative_looking(&self) -> bool;
}
