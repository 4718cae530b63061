//! Data refinement between two predictors and delta-omniscience.
//!
//! A predictor holding strictly more data has a *fine* prediction model; a
//! predictor holding a subset of that data sees only which block of a
//! partition the fine outcome fell in. Its prediction for a block is the
//! weighted mean of the fine predictions inside the block.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scenario::PredictionModel;

/// A fine prediction model and a partition of its support indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementModel {
    fine: PredictionModel,
    blocks: Vec<Vec<usize>>,
}

/// Law-of-total-variance terms for a [`RefinementModel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarianceDecomposition {
    pub fine_var: Rational,
    pub coarse_var: Rational,
    pub expected_conditional_var: Rational,
}

impl RefinementModel {
    /// `blocks` holds 0-based fine support indices. Every index must appear
    /// in exactly one block and no block may be empty.
    pub fn new(fine: PredictionModel, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = fine.len();
        let mut owner = vec![None; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {} is empty", b + 1)));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidPartition(format!(
                        "block {} names index {} but the support has {n} points",
                        b + 1,
                        i + 1
                    )));
                }
                if let Some(prev) = owner[i].replace(b) {
                    return Err(Error::InvalidPartition(format!(
                        "index {} appears in blocks {} and {}",
                        i + 1,
                        prev + 1,
                        b + 1
                    )));
                }
            }
        }
        if let Some(i) = owner.iter().position(Option::is_none) {
            return Err(Error::InvalidPartition(format!("index {} is not in any block", i + 1)));
        }
        Ok(RefinementModel { fine, blocks })
    }

    /// Each support point in its own block.
    pub fn identity(fine: PredictionModel) -> Self {
        let blocks = (0..fine.len()).map(|i| vec![i]).collect();
        RefinementModel { fine, blocks }
    }

    /// All support points in one block.
    pub fn trivial(fine: PredictionModel) -> Self {
        let blocks = vec![(0..fine.len()).collect()];
        RefinementModel { fine, blocks }
    }

    pub fn fine(&self) -> &PredictionModel {
        &self.fine
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `(block weight, block mean prediction)` in block order.
    fn block_stats(&self) -> impl Iterator<Item = (Rational, Rational, &[usize])> + '_ {
        let support = self.fine.support();
        self.blocks.iter().map(move |block| {
            let weight: Rational = block.iter().map(|&i| &support[i].weight).sum();
            let mass: Rational = block.iter().map(|&i| &support[i].weight * &support[i].omega).sum();
            (weight.clone(), mass / weight, block.as_slice())
        })
    }
}

/// The coarse prediction model induced by the partition. Blocks whose mean
/// predictions coincide are merged.
pub fn coarsen(model: &RefinementModel) -> PredictionModel {
    PredictionModel::from_unnormalized(model.block_stats().map(|(w, mean, _)| (mean, w)))
        .expect("coarsening a valid model yields a valid model")
}

/// Computes the three terms of `Var(fine) = Var(coarse) + E[Var(fine | block)]`,
/// each from its own definition.
pub fn variance_decomposition(model: &RefinementModel) -> VarianceDecomposition {
    let support = model.fine.support();
    let fine_var = model.fine.variance();

    let blocks: Vec<_> = model.block_stats().collect();
    let coarse_mean: Rational = blocks.iter().map(|(w, m, _)| w * m).sum();
    let coarse_var: Rational = blocks.iter().map(|(w, m, _)| w * (m - &coarse_mean).square()).sum();
    let expected_conditional_var: Rational = blocks
        .iter()
        .map(|(w, m, members)| {
            let within: Rational =
                members.iter().map(|&i| &support[i].weight / w * (&support[i].omega - m).square()).sum();
            w * within
        })
        .sum();

    VarianceDecomposition { fine_var, coarse_var, expected_conditional_var }
}

/// Result of a delta-omniscience check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmniscienceReport {
    pub delta: Rational,
    /// No support point lies strictly inside `(delta, 1 - delta)`.
    pub is_omniscient: bool,
    /// `(1 - delta)^2 (p - delta) - p^2`: a lower bound on the prediction
    /// variance that holds whenever the model is delta-omniscient.
    pub variance_lower_bound: Rational,
    pub actual_variance: Rational,
}

/// Checks whether the prior rules out every uncertain prediction in the open
/// interval `(delta, 1 - delta)`, and reports the variance bound that
/// delta-omniscience implies.
///
/// Requires `0 <= delta < min(p, 1 - p)`.
pub fn check_delta_omniscience(model: &PredictionModel, delta: &Rational) -> Result<OmniscienceReport> {
    let p = model.mean();
    let limit = std::cmp::min(p.clone(), p.complement());
    if delta.is_negative() || *delta >= limit {
        return Err(Error::DeltaOutOfRange { delta: delta.clone(), limit });
    }
    let upper = delta.complement();
    let is_omniscient = !model.omegas().any(|w| w > delta && *w < upper);
    let variance_lower_bound = upper.square() * (&p - delta) - p.square();
    let actual_variance = model.variance();
    if is_omniscient {
        assert!(actual_variance >= variance_lower_bound, "delta-omniscient model violates its variance bound");
    }
    Ok(OmniscienceReport { delta: delta.clone(), is_omniscient, variance_lower_bound, actual_variance })
}

/// The two-point delta-omniscient model `{delta, 1 - delta}` with mean `p`.
///
/// Requires `0 <= delta < min(p, 1 - p)`.
pub fn extremal_model(p: &Rational, delta: &Rational) -> Result<PredictionModel> {
    let limit = std::cmp::min(p.clone(), p.complement());
    if delta.is_negative() || *delta >= limit {
        return Err(Error::DeltaOutOfRange { delta: delta.clone(), limit });
    }
    let high = (p - delta) / (Rational::one() - delta - delta);
    PredictionModel::new([(delta.clone(), high.complement()), (delta.complement(), high)])
}
