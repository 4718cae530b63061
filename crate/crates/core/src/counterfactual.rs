//! Counterfactual quantities of a [`NewcombScenario`], in closed form.
//!
//! With `p = E[omega]` and `sigma2 = Var(omega)`:
//!
//! * `P(one-box) = P(box full) = p`
//! * `P(box full | one-box) = p + sigma2 / p`
//! * `P(box full | two-box) = p - sigma2 / (1 - p)`
//! * one-boxing is counterfactually preferred iff `r / R <= sigma2 / (p (1 - p))`
//!
//! Every closed form here is checked against conditioning of the joint
//! distribution in the test suites and in [`crate::verify`].

use std::fmt;

use crate::error::{Error, Result};
use crate::joint::{build_joint, Decision};
use crate::rational::Rational;
use crate::scenario::NewcombScenario;

/// Summary statistics of a scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioSummary {
    /// Prior probability of one-boxing, `E[omega]`.
    pub p: Rational,
    /// Prior variance of the prediction.
    pub sigma2: Rational,
    /// Prior probability that the opaque box is full, read off the joint.
    pub prior_box_full: Rational,
    /// `sigma2 / (p (1 - p))`.
    pub threshold: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Choice {
    OneBox,
    TwoBox,
    Indifferent,
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Choice::OneBox => "onebox",
            Choice::TwoBox => "twobox",
            Choice::Indifferent => "indifferent",
        })
    }
}

/// The counterfactually preferred decision and both expectations behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preference {
    pub choice: Choice,
    pub expected_onebox: Rational,
    pub expected_twobox: Rational,
}

/// Returns `p` if both decisions have positive prior probability.
fn imperfect_p(scenario: &NewcombScenario) -> Result<Rational> {
    let p = scenario.prediction().mean();
    if p.is_strict_probability() {
        Ok(p)
    } else {
        Err(Error::PerfectKnowledge(p))
    }
}

pub fn scenario_summary(scenario: &NewcombScenario) -> Result<ScenarioSummary> {
    let p = imperfect_p(scenario)?;
    let sigma2 = scenario.prediction().variance();
    let prior_box_full = build_joint(scenario).prob_box_full();
    let threshold = &sigma2 / (&p * p.complement());
    Ok(ScenarioSummary { p, sigma2, prior_box_full, threshold })
}

/// `P(box full | decision)` from the closed forms.
pub fn posterior_box_full(scenario: &NewcombScenario, decision: Decision) -> Result<Rational> {
    let p = imperfect_p(scenario)?;
    let sigma2 = scenario.prediction().variance();
    Ok(match decision {
        Decision::OneBox => &p + &sigma2 / &p,
        Decision::TwoBox => &p - sigma2 / p.complement(),
    })
}

/// Expected total reward given the decision: the opaque box alone for
/// one-boxing, both boxes for two-boxing.
pub fn counterfactual_expected_reward(scenario: &NewcombScenario, decision: Decision) -> Result<Rational> {
    let posterior = posterior_box_full(scenario, decision)?;
    let from_opaque = scenario.large_reward() * posterior;
    Ok(match decision {
        Decision::OneBox => from_opaque,
        Decision::TwoBox => from_opaque + scenario.small_reward(),
    })
}

/// Compares the two counterfactual expectations exactly. Ties are
/// [`Choice::Indifferent`].
pub fn preferred_decision(scenario: &NewcombScenario) -> Result<Preference> {
    let expected_onebox = counterfactual_expected_reward(scenario, Decision::OneBox)?;
    let expected_twobox = counterfactual_expected_reward(scenario, Decision::TwoBox)?;
    let choice = match expected_onebox.cmp(&expected_twobox) {
        std::cmp::Ordering::Greater => Choice::OneBox,
        std::cmp::Ordering::Less => Choice::TwoBox,
        std::cmp::Ordering::Equal => Choice::Indifferent,
    };
    Ok(Preference { choice, expected_onebox, expected_twobox })
}

/// The preference predicted by comparing `r / R` with the threshold
/// `sigma2 / (p (1 - p))`, without computing any expectation.
pub fn threshold_choice(scenario: &NewcombScenario) -> Result<Choice> {
    let summary = scenario_summary(scenario)?;
    Ok(match scenario.reward_ratio().cmp(&summary.threshold) {
        std::cmp::Ordering::Less => Choice::OneBox,
        std::cmp::Ordering::Greater => Choice::TwoBox,
        std::cmp::Ordering::Equal => Choice::Indifferent,
    })
}

/// Conditions the joint on the predictor announcing `omega_value` and returns
/// the resulting probability of one-boxing. A better-informed honest
/// predictor is an authority: the answer is `omega_value` itself.
pub fn authority_check(scenario: &NewcombScenario, omega_value: &Rational) -> Result<Rational> {
    let support = scenario.prediction().support();
    if !support.iter().any(|pt| &pt.omega == omega_value) {
        return Err(Error::UnknownOmegaValue(omega_value.clone()));
    }
    build_joint(scenario).conditional_decision_given_data(Decision::OneBox, |d| &support[d].omega == omega_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::scenario::PredictionModel;

    fn scenario(points: &[(&str, &str)], r: &str, big_r: &str) -> NewcombScenario {
        let model = PredictionModel::new(points.iter().map(|(o, w)| (q(o), q(w)))).unwrap();
        NewcombScenario::new(model, q(r), q(big_r)).unwrap()
    }

    fn s1() -> NewcombScenario {
        scenario(&[("1/10", "1/2"), ("9/10", "1/2")], "1000", "1000000")
    }

    fn s2() -> NewcombScenario {
        scenario(&[("1/2", "1")], "1000", "1000000")
    }

    fn s3(r: &str, big_r: &str) -> NewcombScenario {
        scenario(&[("1/4", "1/2"), ("3/4", "1/2")], r, big_r)
    }

    #[test]
    fn summaries() {
        assert_eq!(
            scenario_summary(&s1()).unwrap(),
            ScenarioSummary { p: q("1/2"), sigma2: q("4/25"), prior_box_full: q("1/2"), threshold: q("16/25") }
        );
        assert_eq!(
            scenario_summary(&s2()).unwrap(),
            ScenarioSummary { p: q("1/2"), sigma2: q("0"), prior_box_full: q("1/2"), threshold: q("0") }
        );
        assert_eq!(
            scenario_summary(&s3("1", "4")).unwrap(),
            ScenarioSummary { p: q("1/2"), sigma2: q("1/16"), prior_box_full: q("1/2"), threshold: q("1/4") }
        );
    }

    #[test]
    fn posteriors() {
        assert_eq!(posterior_box_full(&s1(), Decision::OneBox).unwrap(), q("41/50"));
        assert_eq!(posterior_box_full(&s1(), Decision::TwoBox).unwrap(), q("9/50"));
        assert_eq!(posterior_box_full(&s2(), Decision::OneBox).unwrap(), q("1/2"));
        assert_eq!(posterior_box_full(&s2(), Decision::TwoBox).unwrap(), q("1/2"));
    }

    #[test]
    fn expectations() {
        assert_eq!(counterfactual_expected_reward(&s1(), Decision::OneBox).unwrap(), q("820000"));
        assert_eq!(counterfactual_expected_reward(&s1(), Decision::TwoBox).unwrap(), q("181000"));
        assert_eq!(counterfactual_expected_reward(&s2(), Decision::OneBox).unwrap(), q("500000"));
        assert_eq!(counterfactual_expected_reward(&s2(), Decision::TwoBox).unwrap(), q("501000"));
    }

    #[test]
    fn preferences() {
        assert_eq!(preferred_decision(&s1()).unwrap().choice, Choice::OneBox);
        assert_eq!(preferred_decision(&s2()).unwrap().choice, Choice::TwoBox);
        let tie = preferred_decision(&s3("1", "4")).unwrap();
        assert_eq!(tie.choice, Choice::Indifferent);
        assert_eq!(tie.expected_onebox, q("5/2"));
        assert_eq!(tie.expected_twobox, q("5/2"));
        assert_eq!(threshold_choice(&s3("1", "4")).unwrap(), Choice::Indifferent);
    }

    #[test]
    fn perfect_knowledge_is_refused() {
        let certain = scenario(&[("1", "1")], "1", "2");
        assert_eq!(scenario_summary(&certain), Err(Error::PerfectKnowledge(q("1"))));
        assert_eq!(posterior_box_full(&certain, Decision::OneBox), Err(Error::PerfectKnowledge(q("1"))));
        let never = scenario(&[("0", "1")], "1", "2");
        assert_eq!(preferred_decision(&never), Err(Error::PerfectKnowledge(q("0"))));
    }

    #[test]
    fn authority() {
        assert_eq!(authority_check(&s1(), &q("9/10")).unwrap(), q("9/10"));
        assert_eq!(authority_check(&s2(), &q("1/2")).unwrap(), q("1/2"));
        assert_eq!(authority_check(&s1(), &q("1/3")), Err(Error::UnknownOmegaValue(q("1/3"))));
    }
}
