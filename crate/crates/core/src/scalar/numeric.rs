//! High-precision evaluation of t-expressions at a sample point.
//!
//! Values are Gaussian rationals rounded to a decimal grid, so every
//! arithmetic step is exact and the only error comes from the radical
//! approximations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{Field, Ring};
use super::gauss::{principal_root_f64, GaussRat};
use super::texpr::TExpr;
use super::ScalarError;

/// Guard digits kept beyond the requested precision. Sample points of size
/// 1e-8 raised to the powers found in witnesses lose up to ~100 digits.
pub const GUARD_DIGITS: u32 = 150;

pub fn pow10(d: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), d as usize)
}

/// Round to the nearest multiple of 1/scale.
pub fn round_rational(x: &BigRational, scale: &BigInt) -> BigRational {
    let y = x * BigRational::from_integer(scale.clone());
    let n = (y + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    BigRational::new(n, scale.clone())
}

pub fn round_gauss(z: &GaussRat, scale: &BigInt) -> GaussRat {
    GaussRat::new(round_rational(z.re(), scale), round_rational(z.im(), scale))
}

/// Principal m-th root to `digits` decimal digits, by Newton iteration from
/// the double-precision guess.
pub fn root_approx(z: &GaussRat, m: u32, digits: u32) -> Result<GaussRat, ScalarError> {
    if z.is_zero() || m == 1 {
        return Ok(z.clone());
    }
    let (gr, gi) = principal_root_f64(z.to_f64(), m);
    if !gr.is_finite() || !gi.is_finite() || (gr == 0.0 && gi == 0.0) {
        return Err(ScalarError::Unsupported(format!("radicand {z} is out of double range")));
    }
    let scale = pow10(digits + 10);
    let from_f64 = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    let mut w = GaussRat::new(from_f64(gr), from_f64(gi));
    let mm = GaussRat::from_i64(m as i64);
    let m1 = GaussRat::from_i64(m as i64 - 1);
    let tol = BigRational::new(BigInt::one(), pow10(2 * digits + 4));
    for _ in 0..200 {
        let wm1 = w.pow(m - 1);
        let next = m1.mul(&w).add(&z.div(&wm1).ok_or(ScalarError::DivisionByZero)?).div(&mm).expect("m > 0");
        let next = round_gauss(&next, &scale);
        let done = next.sub(&w).norm_sq() < tol.clone() * z.norm_sq().max(BigRational::one());
        w = next;
        if done {
            return Ok(w);
        }
    }
    Err(ScalarError::Unsupported(format!("root iteration for {z} did not converge")))
}

/// Value of `x` at the real point `t0 > 0`, accurate to about `digits`
/// decimal digits.
pub fn eval_at(x: &TExpr<GaussRat>, t0: &GaussRat, digits: u32) -> Result<GaussRat, ScalarError> {
    let work = digits + GUARD_DIGITS;
    let scale = pow10(work);
    let mut acc = GaussRat::zero();
    for term in x.terms() {
        let (p, q) = (*term.exp.numer(), *term.exp.denom());
        let tp = t0.powi(p).ok_or(ScalarError::DivisionByZero)?;
        let mut v = term.coef.mul(&root_approx(&tp, q as u32, work)?);
        for (k, e) in &term.rads {
            let r = root_approx(&k.radicand().eval(t0), k.m(), work)?;
            let r = r.powi(*e as i64).ok_or(ScalarError::DivisionByZero)?;
            v = v.mul(&r);
        }
        acc = acc.add(&round_gauss(&v, &scale));
    }
    Ok(acc)
}

/// |z| < eps, compared exactly through squares.
pub fn abs_below(z: &GaussRat, eps: &BigRational) -> bool {
    z.norm_sq() < eps * eps
}

/// Short scientific rendering of |z| for reports.
pub fn abs_sci(z: &GaussRat) -> String {
    let n = z.norm_sq();
    if n.is_zero() {
        return "0".to_string();
    }
    // decimal exponent of sqrt(n), then three significant digits
    let num_digits = n.numer().abs().to_string().len() as i64;
    let den_digits = n.denom().to_string().len() as i64;
    let mut e = (num_digits - den_digits) / 2;
    let ten = BigRational::from_integer(BigInt::from(10));
    let scaled = |e: i64| -> BigRational {
        let p = BigRational::from_integer(pow10(e.unsigned_abs() as u32 * 2));
        if e >= 0 {
            &n / p
        } else {
            &n * p
        }
    };
    while scaled(e) >= ten.clone() * ten.clone() {
        e += 1;
    }
    while scaled(e) < BigRational::one() {
        e -= 1;
    }
    let mant2 = scaled(e);
    let mant = num_traits::ToPrimitive::to_f64(&mant2).unwrap_or(1.0).sqrt();
    format!("{mant:.2}e{e}")
}

/// 10^(-k) as a rational.
pub fn ten_to_minus(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), pow10(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_of_two() {
        let r = root_approx(&GaussRat::from_i64(2), 2, 60).unwrap();
        let err = r.mul(&r).sub(&GaussRat::from_i64(2));
        assert!(abs_below(&err, &ten_to_minus(55)));
    }

    #[test]
    fn complex_principal_root() {
        // principal square root of -2i is 1 - i
        let z = GaussRat::new(BigRational::zero(), BigRational::from_integer((-2).into()));
        let r = root_approx(&z, 2, 40).unwrap();
        let want = GaussRat::one().sub(&GaussRat::i());
        assert!(abs_below(&r.sub(&want), &ten_to_minus(35)));
    }

    #[test]
    fn scientific_rendering() {
        assert_eq!(abs_sci(&GaussRat::from_ratio(3, 1000)), "3.00e-3");
        assert_eq!(abs_sci(&GaussRat::from_i64(250)), "2.50e2");
    }
}
