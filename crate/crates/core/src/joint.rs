//! The exact joint law of (predictor data, player decision, opaque box).
//!
//! Given data outcome `d` with prediction `omega_d`, the predictor fills the
//! opaque box by a coin of bias `omega_d`, and the player one-boxes with
//! probability `omega_d` as well: an honest, better-informed Bayesian
//! predictor's credence is the player's own credence once that data is
//! known. The two draws are conditionally independent given `d`.

use std::fmt;

use crate::dist::FiniteDist;
use crate::error::Result;
use crate::rational::Rational;
use crate::scenario::NewcombScenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Decision {
    OneBox,
    TwoBox,
}

impl Decision {
    pub const ALL: [Decision; 2] = [Decision::OneBox, Decision::TwoBox];
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::OneBox => "onebox",
            Decision::TwoBox => "twobox",
        })
    }
}

/// Content of the opaque box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoxContent {
    Full,
    Empty,
}

impl BoxContent {
    pub const ALL: [BoxContent; 2] = [BoxContent::Full, BoxContent::Empty];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    /// Index into the prediction support.
    pub data: usize,
    pub decision: Decision,
    pub box_a: BoxContent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    dist: FiniteDist<Atom>,
}

/// Expands a scenario into its joint distribution over [`Atom`]s.
///
/// Each support point contributes four atoms with weight
/// `q_d * P(decision | d) * P(box | d)`; zero-weight atoms are pruned.
pub fn build_joint(scenario: &NewcombScenario) -> JointDistribution {
    let mut atoms = Vec::with_capacity(4 * scenario.prediction().len());
    for (data, pt) in scenario.prediction().support().iter().enumerate() {
        let not_omega = pt.omega.complement();
        for decision in Decision::ALL {
            let p_decision = match decision {
                Decision::OneBox => &pt.omega,
                Decision::TwoBox => &not_omega,
            };
            for box_a in BoxContent::ALL {
                let p_box = match box_a {
                    BoxContent::Full => &pt.omega,
                    BoxContent::Empty => &not_omega,
                };
                atoms.push((Atom { data, decision, box_a }, &pt.weight * p_decision * p_box));
            }
        }
    }
    let dist = FiniteDist::from_probabilities(atoms).expect("joint weights sum to one");
    JointDistribution { dist }
}

impl JointDistribution {
    pub fn dist(&self) -> &FiniteDist<Atom> {
        &self.dist
    }

    pub fn prob_decision(&self, decision: Decision) -> Rational {
        self.dist.prob(|a| a.decision == decision)
    }

    pub fn prob_box_full(&self) -> Rational {
        self.dist.prob(|a| a.box_a == BoxContent::Full)
    }

    /// `P(box full | decision)` by conditioning the joint.
    pub fn conditional_box_full(&self, decision: Decision) -> Result<Rational> {
        Ok(self.dist.condition(|a| a.decision == decision)?.prob(|a| a.box_a == BoxContent::Full))
    }

    /// `P(decision | data in indices)` by conditioning the joint.
    pub fn conditional_decision_given_data<F: Fn(usize) -> bool>(
        &self,
        decision: Decision,
        data: F,
    ) -> Result<Rational> {
        Ok(self.dist.condition(|a| data(a.data))?.prob(|a| a.decision == decision))
    }
}
