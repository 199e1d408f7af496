#![allow(dead_code)]

use ncprob::moments::random_scalar;
use ncprob::{Alphabet, MomentFunctional, Scalar, Word};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn w(s: &str) -> Word {
    Word::from_chars(s)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(generators: usize, max_degree: usize, seed: u64) -> MomentFunctional {
    MomentFunctional::random(Alphabet::letters(generators), max_degree, &mut rng(seed))
}

/// Random rationals on every word of length at least 2; single letters vanish.
pub fn random_centered(generators: usize, max_degree: usize, seed: u64) -> MomentFunctional {
    let mut r = rng(seed);
    MomentFunctional::from_fn(Alphabet::letters(generators), max_degree, |u| {
        if u.len() == 1 {
            Scalar::zero()
        } else {
            random_scalar(&mut r)
        }
    })
}
