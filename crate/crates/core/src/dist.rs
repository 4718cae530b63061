//! Finite discrete distributions with exact rational weights.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A probability distribution over finitely many distinct outcomes.
///
/// Atoms are kept sorted by outcome with zero-weight atoms dropped, so two
/// distributions are equal exactly when they assign the same mass to every
/// outcome. Weights always sum to exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDist<T> {
    atoms: Vec<(T, Rational)>,
}

/// Mean and variance of a random variable under a [`FiniteDist`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments {
    pub mean: Rational,
    pub variance: Rational,
}

/// Builds a distribution from unnormalized weights.
///
/// Duplicate outcomes are merged by summing their weights and the result is
/// divided by the exact total.
///
/// ```
/// use newcomb::{normalize_dist, q};
///
/// let d = normalize_dist(vec![('a', q("2")), ('b', q("3")), ('c', q("5"))]).unwrap();
/// assert_eq!(d.prob_of(&'b'), q("3/10"));
/// ```
pub fn normalize_dist<T: Ord>(atoms: impl IntoIterator<Item = (T, Rational)>) -> Result<FiniteDist<T>> {
    let mut merged: BTreeMap<T, Rational> = BTreeMap::new();
    let mut seen_any = false;
    for (outcome, weight) in atoms {
        seen_any = true;
        if weight.is_negative() {
            return Err(Error::NegativeWeight(weight));
        }
        let slot = merged.entry(outcome).or_default();
        *slot = &*slot + weight;
    }
    if !seen_any {
        return Err(Error::EmptyDistribution);
    }
    let total: Rational = merged.values().sum();
    if total.is_zero() {
        return Err(Error::ZeroTotalWeight);
    }
    let atoms = merged.into_iter().filter(|(_, w)| !w.is_zero()).map(|(x, w)| (x, w / &total)).collect();
    Ok(FiniteDist { atoms })
}

impl<T: Ord> FiniteDist<T> {
    /// Builds a distribution whose weights must already sum to one.
    pub fn from_probabilities(atoms: impl IntoIterator<Item = (T, Rational)>) -> Result<Self> {
        let atoms: Vec<_> = atoms.into_iter().collect();
        if atoms.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let total: Rational = atoms.iter().map(|(_, w)| w).sum();
        if let Some((_, w)) = atoms.iter().find(|(_, w)| w.is_negative()) {
            return Err(Error::NegativeWeight(w.clone()));
        }
        if !total.is_one() {
            return Err(Error::NotNormalized(total));
        }
        let mut merged: BTreeMap<T, Rational> = BTreeMap::new();
        for (outcome, weight) in atoms {
            let slot = merged.entry(outcome).or_default();
            *slot = &*slot + weight;
        }
        let atoms = merged.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Ok(FiniteDist { atoms })
    }

    pub fn point(outcome: T) -> Self {
        FiniteDist { atoms: vec![(outcome, Rational::one())] }
    }

    /// Equal mass on each distinct outcome.
    pub fn uniform(outcomes: impl IntoIterator<Item = T>) -> Result<Self> {
        normalize_dist(outcomes.into_iter().map(|x| (x, Rational::one())))
    }

    /// Restricts the distribution to `event` and renormalizes.
    ///
    /// Fails with [`Error::ZeroProbabilityEvent`] when the event carries no
    /// mass.
    pub fn condition<F>(&self, event: F) -> Result<Self>
    where
        T: Clone,
        F: Fn(&T) -> bool,
    {
        let mass = self.prob(&event);
        if mass.is_zero() {
            return Err(Error::ZeroProbabilityEvent);
        }
        let atoms = self.atoms.iter().filter(|(x, _)| event(x)).map(|(x, w)| (x.clone(), w / &mass)).collect();
        Ok(FiniteDist { atoms })
    }

    /// Pushes the distribution forward through `f`, merging collisions.
    pub fn map<U: Ord, F: Fn(&T) -> U>(&self, f: F) -> FiniteDist<U> {
        normalize_dist(self.atoms.iter().map(|(x, w)| (f(x), w.clone())))
            .expect("image of a distribution is a distribution")
    }
}

impl<T> FiniteDist<T> {
    pub fn atoms(&self) -> &[(T, Rational)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Rational)> {
        self.atoms.iter().map(|(x, w)| (x, w))
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    /// Exact probability of `event`.
    pub fn prob<F: Fn(&T) -> bool>(&self, event: F) -> Rational {
        self.atoms.iter().filter(|(x, _)| event(x)).map(|(_, w)| w).sum()
    }

    pub fn prob_of(&self, outcome: &T) -> Rational
    where
        T: PartialEq,
    {
        self.prob(|x| x == outcome)
    }

    pub fn expectation<F: Fn(&T) -> Rational>(&self, f: F) -> Rational {
        self.atoms.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// Mean and variance of `f`, with variance computed as `E[f^2] - E[f]^2`.
    pub fn moments<F: Fn(&T) -> Rational>(&self, f: F) -> Moments {
        let mut mean = Rational::zero();
        let mut second = Rational::zero();
        for (x, w) in &self.atoms {
            let v = f(x);
            second = second + w * v.square();
            mean = mean + w * v;
        }
        let variance = second - mean.square();
        debug_assert!(!variance.is_negative());
        Moments { mean, variance }
    }
}

/// Free-function form of [`FiniteDist::condition`].
pub fn condition<T: Ord + Clone, F: Fn(&T) -> bool>(dist: &FiniteDist<T>, event: F) -> Result<FiniteDist<T>> {
    dist.condition(event)
}

/// Free-function form of [`FiniteDist::moments`].
pub fn moments<T, F: Fn(&T) -> Rational>(dist: &FiniteDist<T>, f: F) -> Moments {
    dist.moments(f)
}
