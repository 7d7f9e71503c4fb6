//! The prime field F_p with p = 998244353. Since p = 1 mod 4 it contains a
//! square root of -1, so Gaussian rationals with denominators prime to p
//! reduce into it. Used as a fast filter: an identity that fails mod p
//! fails over Q(i).

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::field::{Field, Ring};
use super::gauss::GaussRat;

pub const P: u64 = 998_244_353;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

/// The square root of -1 used as the image of i; 3 generates F_p^*.
fn imag_unit() -> u64 {
    static I: OnceLock<u64> = OnceLock::new();
    *I.get_or_init(|| pow_mod(3, (P - 1) / 4))
}

fn reduce_big(x: &BigInt) -> u64 {
    x.mod_floor(&BigInt::from(P)).to_u64().expect("reduced below p")
}

impl Fp {
    pub fn new(x: u64) -> Self {
        Fp(x % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn i() -> Self {
        Fp(imag_unit())
    }

    /// `None` when a denominator vanishes mod p.
    pub fn from_gauss(z: &GaussRat) -> Option<Fp> {
        let part = |r: &num_rational::BigRational| -> Option<Fp> {
            let d = reduce_big(r.denom());
            if d == 0 {
                return None;
            }
            Some(Fp(reduce_big(r.numer()) * pow_mod(d, P - 2) % P))
        };
        Some(part(z.re())?.add(&part(z.im())?.mul(&Fp::i())))
    }
}

impl Ring for Fp {
    fn zero() -> Self {
        Fp(0)
    }

    fn one() -> Self {
        Fp(1)
    }

    fn from_i64(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u64)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }

    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        (self.0 != 0).then(|| Fp(pow_mod(self.0, P - 2)))
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {P}", self.0)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squares_to_minus_one() {
        assert_eq!(Fp::i().mul(&Fp::i()), Fp::one().neg());
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let x = GaussRat::from_ratio(3, 7).add(&GaussRat::i().mul(&GaussRat::from_ratio(-5, 2)));
        let y = GaussRat::from_ratio(-11, 4).add(&GaussRat::i());
        let h = |z: &GaussRat| Fp::from_gauss(z).unwrap();
        assert_eq!(h(&x.mul(&y)), h(&x).mul(&h(&y)));
        assert_eq!(h(&x.div(&y).unwrap()), h(&x).div(&h(&y)).unwrap());
        assert_eq!(h(&x.sub(&y)), h(&x).sub(&h(&y)));
    }
}
