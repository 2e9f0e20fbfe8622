//! Seeded randomness. All randomized routines draw from ChaCha8 seeded with
//! `seed_from_u64`, so every run is reproducible from its seed.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::quadratic::{LinearForm, QuadraticForm};
use crate::scalar::Scalar;

pub type Prng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent stream for sub-task `index` of a seeded run.
pub fn substream(seed: u64, index: u64) -> Prng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index.wrapping_add(1));
    r
}

pub fn small_int(rng: &mut Prng, bound: i64) -> Scalar {
    Scalar::from_int(rng.gen_range(-bound..=bound))
}

/// Nonzero rational `p/q` with `p, q` uniform in `1..=2^31-1`.
pub fn projection_multiplier(rng: &mut Prng) -> Scalar {
    let p: i64 = rng.gen_range(1..=i64::from(i32::MAX));
    let q: i64 = rng.gen_range(1..=i64::from(i32::MAX));
    Scalar::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
}

pub fn random_vector(rng: &mut Prng, n: usize, bound: i64) -> Vec<Scalar> {
    (0..n).map(|_| small_int(rng, bound)).collect()
}

/// Random nonzero linear form with integer coefficients in `[-bound, bound]`.
pub fn random_linear_form(rng: &mut Prng, n: usize, bound: i64) -> LinearForm {
    loop {
        let l = LinearForm::new(random_vector(rng, n, bound));
        if !l.is_zero() {
            return l;
        }
    }
}

/// Random quadratic form with integer monomial coefficients in `[-bound, bound]`.
pub fn random_quadratic(rng: &mut Prng, n: usize, bound: i64) -> QuadraticForm {
    let k = n * (n + 1) / 2;
    QuadraticForm::from_coefficients(n, &random_vector(rng, k, bound))
}

/// `Σ_{i<t} a_i·b_i` with random small integer linear forms.
pub fn random_product_sum(rng: &mut Prng, n: usize, terms: usize, bound: i64) -> QuadraticForm {
    let mut q = QuadraticForm::zero(n);
    for _ in 0..terms {
        let a = random_linear_form(rng, n, bound);
        let b = random_linear_form(rng, n, bound);
        q = q.add(&QuadraticForm::product(&a, &b));
    }
    q
}
