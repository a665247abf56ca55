//! Seeded ordinal corpora.
//!
//! A corpus starts with a fixed list of landmark ordinals and is filled up
//! with random normal forms drawn from a ChaCha8 stream. Random principals
//! use Veblen levels 0 to 4, `w` and `w+1`; index and summand depth is at
//! most 3 and coefficients are at most 4.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ordinal::Ordinal;

pub const DEFAULT_SEED: u64 = 0x5eed_0001;

const LANDMARKS: &[&str] = &[
    "0", "1", "2", "5", "w", "w+1", "w*2", "w^2", "w^2+w", "w^3", "w^w", "w^w+1", "w^(w+1)",
    "w^(w*2)", "w^w^2", "w^(w^2+1)", "w^(w^2*2)", "w^w^3", "w^w^w", "w^(w^w+w^2)", "e(0)",
    "e(0)*2", "e(0)+w", "e(1)", "e(w)", "e(w+1)", "e(w^2)", "e(e(0))", "w^(e(0)+w)",
    "phi(2,0)", "phi(2,1)", "phi(2,w)", "phi(3,0)", "phi(3,w^w)", "phi(4,e(0))", "phi(w,0)",
    "phi(w,1)", "phi(w+1,0)", "phi(w,0)+e(0)",
];

pub fn landmarks() -> Vec<Ordinal> {
    LANDMARKS.iter().map(|s| s.parse().unwrap()).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_level<R: Rng>(rng: &mut R) -> Ordinal {
    match rng.gen_range(0..100) {
        0..=49 => Ordinal::zero(),
        50..=71 => Ordinal::one(),
        72..=81 => Ordinal::nat(2),
        82..=87 => Ordinal::nat(3),
        88..=92 => Ordinal::nat(4),
        93..=97 => Ordinal::omega(),
        _ => Ordinal::omega().succ(),
    }
}

/// A random additively principal ordinal of nesting depth at most `depth`.
pub fn random_principal<R: Rng>(rng: &mut R, depth: u32) -> Ordinal {
    loop {
        let level = if depth == 0 {
            Ordinal::zero()
        } else {
            random_level(rng)
        };
        let index = if depth == 0 || rng.gen_bool(0.25) {
            Ordinal::nat(rng.gen_range(0..4))
        } else {
            random_ordinal(rng, depth - 1)
        };
        let p = Ordinal::phi(&level, &index);
        if p.is_additive_principal() {
            return p;
        }
    }
}

/// A random ordinal: a principal with probability 0.4, otherwise a sum of
/// up to three random principals with small coefficients.
pub fn random_ordinal<R: Rng>(rng: &mut R, depth: u32) -> Ordinal {
    if depth > 0 && rng.gen_bool(0.4) {
        return random_principal(rng, depth);
    }
    let mut acc = Ordinal::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let term = if depth == 0 || rng.gen_bool(0.3) {
            Ordinal::nat(rng.gen_range(1..5))
        } else {
            random_principal(rng, depth).nat_mul(rng.gen_range(1..5))
        };
        acc = acc.add(&term);
    }
    acc
}

/// `count` distinct ordinals: the landmarks, then random ones.
pub fn ordinals(seed: u64, count: usize) -> Vec<Ordinal> {
    let mut rng = rng(seed);
    let mut out = landmarks();
    out.truncate(count);
    while out.len() < count {
        let x = random_ordinal(&mut rng, 3);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// `count` distinct additive principals: principal landmarks, then random ones.
pub fn principals(seed: u64, count: usize) -> Vec<Ordinal> {
    let mut rng = rng(seed ^ 0x9e37_79b9);
    let mut out: Vec<Ordinal> = landmarks()
        .into_iter()
        .filter(Ordinal::is_additive_principal)
        .collect();
    out.truncate(count);
    while out.len() < count {
        let x = random_principal(&mut rng, 3);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// A random element of `xs` below `bound`, if there is one.
pub fn pick_below<R: Rng>(rng: &mut R, xs: &[Ordinal], bound: &Ordinal) -> Option<Ordinal> {
    let below: Vec<&Ordinal> = xs.iter().filter(|x| *x < bound).collect();
    below.choose(rng).map(|x| (*x).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(ordinals(7, 120), ordinals(7, 120));
        assert_ne!(ordinals(7, 120), ordinals(8, 120));
        assert!(principals(1, 80).iter().all(Ordinal::is_additive_principal));
        for x in ordinals(3, 200) {
            assert_eq!(x.to_string().parse::<Ordinal>().unwrap(), x);
        }
    }
}
