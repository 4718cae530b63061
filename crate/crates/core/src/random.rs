//! Seeded generators of random instances for property checks.

use rand::Rng;

use crate::rational::Rational;
use crate::refinement::RefinementModel;
use crate::scenario::PredictionModel;

/// Largest denominator used for random prediction values.
const MAX_DENOM: i64 = 24;
/// Largest raw integer weight before normalization.
const MAX_WEIGHT: i64 = 30;

pub fn random_probability<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let den = rng.random_range(1..=MAX_DENOM);
    let num = rng.random_range(0..=den);
    Rational::new(num, den)
}

fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.random_range(1..=MAX_WEIGHT)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| Rational::new(w, total)).collect()
}

/// A model with `1..=max_support` distinct support points and random
/// positive weights. The mean may be 0 or 1.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, max_support: usize) -> PredictionModel {
    let size = rng.random_range(1..=max_support.max(1));
    let mut omegas: Vec<Rational> = Vec::with_capacity(size);
    while omegas.len() < size {
        let w = random_probability(rng);
        if !omegas.contains(&w) {
            omegas.push(w);
        }
    }
    let weights = random_weights(rng, size);
    PredictionModel::new(omegas.into_iter().zip(weights)).expect("valid by construction")
}

/// A random model whose mean lies strictly inside `(0, 1)`.
pub fn random_imperfect_model<R: Rng + ?Sized>(rng: &mut R, max_support: usize) -> PredictionModel {
    loop {
        let m = random_model(rng, max_support);
        if m.has_imperfect_knowledge() {
            return m;
        }
    }
}

/// A random model with a random partition of its support.
pub fn random_refinement<R: Rng + ?Sized>(rng: &mut R, max_support: usize) -> RefinementModel {
    let fine = random_model(rng, max_support);
    let n = fine.len();
    let k = rng.random_range(1..=n);
    let mut blocks = vec![Vec::new(); k];
    for i in 0..n {
        blocks[rng.random_range(0..k)].push(i);
    }
    blocks.retain(|b| !b.is_empty());
    RefinementModel::new(fine, blocks).expect("valid by construction")
}

/// A strictly positive belief vector over `n >= 2` boxes, none equal to one.
pub fn random_beliefs<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    random_weights(rng, n.max(2))
}

/// A positive reward ratio `r / R` drawn from a small log-spread grid.
pub fn random_ratio<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let num = rng.random_range(1..=20);
    let den = [1, 4, 10, 100, 1000][rng.random_range(0..5)];
    Rational::new(num, den)
}
