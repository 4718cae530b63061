//! Problem instances: the predictor's prediction model and the rewards.

use crate::dist::{FiniteDist, Moments};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// One point of the prediction support: the predictor announces `omega`
/// (its probability that the player one-boxes) with prior mass `weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPoint {
    pub omega: Rational,
    pub weight: Rational,
}

/// The player's prior over the predictor's prediction `omega`.
///
/// Support order is preserved as given; refinement partitions refer to it by
/// index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictionModel {
    support: Vec<SupportPoint>,
}

impl PredictionModel {
    /// Validates `(omega, weight)` pairs: omegas distinct and in `[0, 1]`,
    /// weights strictly positive and summing to exactly one.
    pub fn new(points: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let support: Vec<SupportPoint> =
            points.into_iter().map(|(omega, weight)| SupportPoint { omega, weight }).collect();
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        for (index, pt) in support.iter().enumerate() {
            if !pt.omega.is_probability() {
                return Err(Error::OmegaOutOfRange { index, omega: pt.omega.clone() });
            }
            if !pt.weight.is_positive() {
                return Err(Error::NonPositiveWeight { index, weight: pt.weight.clone() });
            }
            if support[..index].iter().any(|prev| prev.omega == pt.omega) {
                return Err(Error::DuplicateOmega { index, omega: pt.omega.clone() });
            }
        }
        let total: Rational = support.iter().map(|pt| &pt.weight).sum();
        if !total.is_one() {
            return Err(Error::NotNormalized(total));
        }
        Ok(PredictionModel { support })
    }

    /// Like [`PredictionModel::new`], but merges repeated omegas and rescales
    /// positive weights to sum to one. Zero-weight points are dropped.
    pub fn from_unnormalized(points: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let mut merged: Vec<(Rational, Rational)> = Vec::new();
        for (index, (omega, weight)) in points.into_iter().enumerate() {
            if !omega.is_probability() {
                return Err(Error::OmegaOutOfRange { index, omega });
            }
            if weight.is_negative() {
                return Err(Error::NegativeWeight(weight));
            }
            if weight.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(o, _)| *o == omega) {
                Some((_, w)) => *w = &*w + weight,
                None => merged.push((omega, weight)),
            }
        }
        if merged.is_empty() {
            return Err(Error::EmptySupport);
        }
        let total: Rational = merged.iter().map(|(_, w)| w).sum();
        PredictionModel::new(merged.into_iter().map(|(o, w)| (o, w / &total)))
    }

    /// Point mass: the player expects the predictor to know nothing beyond
    /// the player's own data.
    pub fn point(omega: Rational) -> Result<Self> {
        PredictionModel::new([(omega, Rational::one())])
    }

    /// Equal-weight model on `{p - spread, p + spread}`, so that the mean is
    /// `p` and the variance is `spread^2`. A zero spread gives a point mass.
    pub fn two_point(p: &Rational, spread: &Rational) -> Result<Self> {
        let half = Rational::new(1, 2);
        PredictionModel::from_unnormalized([(p - spread, half.clone()), (p + spread, half)])
    }

    pub fn support(&self) -> &[SupportPoint] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn omegas(&self) -> impl Iterator<Item = &Rational> {
        self.support.iter().map(|pt| &pt.omega)
    }

    /// Prior over support indices.
    pub fn index_dist(&self) -> FiniteDist<usize> {
        FiniteDist::from_probabilities(self.support.iter().enumerate().map(|(i, pt)| (i, pt.weight.clone())))
            .expect("validated weights")
    }

    /// Prior over prediction values.
    pub fn omega_dist(&self) -> FiniteDist<Rational> {
        FiniteDist::from_probabilities(self.support.iter().map(|pt| (pt.omega.clone(), pt.weight.clone())))
            .expect("validated weights")
    }

    pub fn moments(&self) -> Moments {
        let mean = self.mean();
        let variance = self.second_moment() - mean.square();
        Moments { mean, variance }
    }

    /// Mean prediction `E[omega]`.
    pub fn mean(&self) -> Rational {
        self.support.iter().map(|pt| &pt.weight * &pt.omega).sum()
    }

    /// Prior variance of the prediction.
    pub fn variance(&self) -> Rational {
        self.moments().variance
    }

    /// `E[omega^2]`.
    pub fn second_moment(&self) -> Rational {
        self.support.iter().map(|pt| &pt.weight * pt.omega.square()).sum()
    }

    /// True when the mean prediction lies strictly between 0 and 1, i.e. both
    /// decisions carry positive prior probability.
    pub fn has_imperfect_knowledge(&self) -> bool {
        self.mean().is_strict_probability()
    }
}

/// A full problem instance: prediction model plus the two rewards.
///
/// `small_reward` sits in the transparent box; `large_reward` is what the
/// predictor may place in the opaque box. No ordering between them is
/// required.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewcombScenario {
    prediction: PredictionModel,
    small_reward: Rational,
    large_reward: Rational,
}

impl NewcombScenario {
    pub fn new(prediction: PredictionModel, small_reward: Rational, large_reward: Rational) -> Result<Self> {
        if !small_reward.is_positive() {
            return Err(Error::NonPositiveReward { name: "r", value: small_reward });
        }
        if !large_reward.is_positive() {
            return Err(Error::NonPositiveReward { name: "R", value: large_reward });
        }
        Ok(NewcombScenario { prediction, small_reward, large_reward })
    }

    pub fn prediction(&self) -> &PredictionModel {
        &self.prediction
    }

    pub fn small_reward(&self) -> &Rational {
        &self.small_reward
    }

    pub fn large_reward(&self) -> &Rational {
        &self.large_reward
    }

    /// `r / R`.
    pub fn reward_ratio(&self) -> Rational {
        &self.small_reward / &self.large_reward
    }

    /// Same prediction model, rewards multiplied by `factor`.
    pub fn scale_rewards(&self, factor: &Rational) -> Result<Self> {
        NewcombScenario::new(self.prediction.clone(), &self.small_reward * factor, &self.large_reward * factor)
    }

    pub fn with_rewards(&self, small_reward: Rational, large_reward: Rational) -> Result<Self> {
        NewcombScenario::new(self.prediction.clone(), small_reward, large_reward)
    }
}
