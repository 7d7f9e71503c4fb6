//! Seeded random scalars and matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Matrix;
use crate::scalar::{Field, Fp, GaussRat, Ring};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent stream for a labelled sub-task.
pub fn substream(seed: u64, label: &str) -> SeededRng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// A random scalar `re_n/re_d + (im_n/im_d) i` kept as small integers so it
/// can be reduced into other fields cheaply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Draw {
    pub re: (i64, i64),
    pub im: (i64, i64),
}

impl Draw {
    pub fn gauss(self) -> GaussRat {
        GaussRat::from_ratio(self.re.0, self.re.1).add(&GaussRat::from_ratio(self.im.0, self.im.1).mul(&GaussRat::i()))
    }

    pub fn fp(self) -> Fp {
        let q = |(n, d): (i64, i64)| Fp::from_i64(n).div(&Fp::from_i64(d)).expect("denominator below p");
        q(self.re).add(&q(self.im).mul(&Fp::i()))
    }

    pub fn is_zero(self) -> bool {
        self.re.0 == 0 && self.im.0 == 0
    }
}

/// One of 0, ±1, ±2, ±1/2, ±i.
pub fn small_draw(rng: &mut SeededRng) -> Draw {
    let (re, im) = match rng.gen_range(0..9) {
        0 => ((0, 1), (0, 1)),
        1 => ((1, 1), (0, 1)),
        2 => ((-1, 1), (0, 1)),
        3 => ((2, 1), (0, 1)),
        4 => ((-2, 1), (0, 1)),
        5 => ((1, 2), (0, 1)),
        6 => ((-1, 2), (0, 1)),
        7 => ((0, 1), (1, 1)),
        _ => ((0, 1), (-1, 1)),
    };
    Draw { re, im }
}

/// Gaussian rational with small numerators and denominators.
pub fn dense_draw(rng: &mut SeededRng) -> Draw {
    Draw {
        re: (rng.gen_range(-9..=9), rng.gen_range(1..=5)),
        im: (rng.gen_range(-9..=9), rng.gen_range(1..=5)),
    }
}

pub fn small(rng: &mut SeededRng) -> GaussRat {
    small_draw(rng).gauss()
}

pub fn dense(rng: &mut SeededRng) -> GaussRat {
    dense_draw(rng).gauss()
}

/// Nonzero entry: dense or small with equal odds.
pub fn nonzero(rng: &mut SeededRng) -> GaussRat {
    loop {
        let x = if rng.gen_bool(0.5) { small(rng) } else { dense(rng) };
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn entry(rng: &mut SeededRng) -> GaussRat {
    if rng.gen_bool(0.5) {
        small(rng)
    } else {
        dense(rng)
    }
}

pub fn invertible(rng: &mut SeededRng, n: usize) -> Matrix<GaussRat> {
    loop {
        let m = Matrix::new(n, n, (0..n * n).map(|_| entry(rng)).collect());
        if !m.det().is_zero() {
            return m;
        }
    }
}

pub fn lower_triangular(rng: &mut SeededRng, n: usize) -> Matrix<GaussRat> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            m.set(i, j, if i == j { nonzero(rng) } else { entry(rng) });
        }
    }
    m
}
