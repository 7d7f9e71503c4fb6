use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{Coeff, Field, Ring};

/// Element of Q(i), kept as two reduced rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GaussRat { re: &self.re * r, im: &self.im * r }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Exact principal m-th root in Q(i), if there is one.
    pub fn exact_root(&self, m: u32) -> Option<Self> {
        if m == 0 {
            return None;
        }
        if m == 1 || self.is_zero() {
            return Some(self.clone());
        }
        if self.is_real() && self.re.is_positive() {
            return rational_root(&self.re, m).map(Self::from_rational);
        }
        let (gr, gi) = principal_root_f64(self.to_f64(), m);
        let cand = GaussRat::new(rationalize(gr)?, rationalize(gi)?);
        if cand.pow(m) == *self {
            Some(cand)
        } else {
            None
        }
    }
}

/// Exact m-th root of a positive rational.
pub fn rational_root(r: &BigRational, m: u32) -> Option<BigRational> {
    let root = |n: &BigInt| {
        let k = n.nth_root(m);
        if num_traits::pow(k.clone(), m as usize) == *n {
            Some(k)
        } else {
            None
        }
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

/// Principal branch of z^(1/m) in double precision.
pub fn principal_root_f64((re, im): (f64, f64), m: u32) -> (f64, f64) {
    let r = re.hypot(im).powf(1.0 / m as f64);
    let th = im.atan2(re) / m as f64;
    (r * th.cos(), r * th.sin())
}

/// Best rational approximation of `x` whose error is at the f64 noise level.
fn rationalize(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x.abs() < 1e-12 {
        return Some(BigRational::zero());
    }
    let tol = 1e-9 * x.abs().max(1.0);
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i128;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if k1 > 1_000_000_000_000 {
            return None;
        }
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = y - a;
        if frac.abs() < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    None
}

impl Ring for GaussRat {
    fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn one() -> Self {
        GaussRat { re: BigRational::one(), im: BigRational::zero() }
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }

    fn sub(&self, rhs: &Self) -> Self {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }

    fn mul(&self, rhs: &Self) -> Self {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn neg(&self) -> Self {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Field for GaussRat {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(GaussRat { re: &self.re / &n, im: -(&self.im / &n) })
    }
}

impl Coeff for GaussRat {
    fn from_gauss(z: &GaussRat) -> Self {
        z.clone()
    }

    fn as_gauss(&self) -> Option<GaussRat> {
        Some(self.clone())
    }

    fn root(&self, m: u32) -> Option<Self> {
        self.exact_root(m)
    }

    fn is_real(&self) -> bool {
        GaussRat::is_real(self)
    }

    fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }

    fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }

    fn is_negative_looking(&self) -> bool {
        if self.im.is_zero() {
            self.re.is_negative()
        } else {
            self.re.is_zero() && self.im.is_negative()
        }
    }
}

fn fmt_imag(f: &mut fmt::Formatter<'_>, im: &BigRational) -> fmt::Result {
    if im.is_one() {
        write!(f, "i")
    } else if *im == -BigRational::one() {
        write!(f, "-i")
    } else {
        write!(f, "{im}i")
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return fmt_imag(f, &self.im);
        }
        write!(f, "{}", self.re)?;
        if self.im.is_positive() {
            write!(f, "+")?;
        }
        fmt_imag(f, &self.im)
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_one_plus_i() {
        let z = GaussRat::one().add(&GaussRat::i());
        let w = z.inv().unwrap();
        assert_eq!(w.to_string(), "1/2-1/2i");
        assert!(z.mul(&w).is_one());
    }

    #[test]
    fn exact_roots() {
        assert_eq!(GaussRat::from_i64(-4).exact_root(2), Some(GaussRat::from_i64(2).mul(&GaussRat::i())));
        assert_eq!(GaussRat::from_ratio(9, 4).exact_root(2), Some(GaussRat::from_ratio(3, 2)));
        assert_eq!(GaussRat::from_i64(2).exact_root(2), None);
        // (1+i)^2 = 2i
        let two_i = GaussRat::from_i64(2).mul(&GaussRat::i());
        assert_eq!(two_i.exact_root(2), Some(GaussRat::one().add(&GaussRat::i())));
        // the principal fourth root of -4 is 1+i
        assert_eq!(GaussRat::from_i64(-4).exact_root(4), Some(GaussRat::one().add(&GaussRat::i())));
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussRat::i().neg().to_string(), "-i");
        assert_eq!(GaussRat::from_ratio(-3, 6).to_string(), "-1/2");
        let z = GaussRat::new(BigRational::from_integer(1.into()), BigRational::new((-5).into(), 7.into()));
        assert_eq!(z.to_string(), "1-5/7i");
    }
}
