//! The adversarial n-box game.
//!
//! A predictor who knows the player's credences `pi_1..pi_n` over `n` boxes
//! puts a unit reward in the first box whose credence is at most `1/n` and
//! nothing anywhere else. Only that box is counterfactually optimal, yet the
//! player assigns it probability at most `1/n`, so the player expects to
//! decide badly with probability at least `1 - 1/n`.
//!
//! Box numbers are 1-based in every user-facing accessor.

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NBoxGame {
    beliefs: Vec<Rational>,
    target: usize,
    rewards: Vec<Rational>,
}

/// Builds the adversarial game for a strictly positive belief vector.
///
/// ```
/// use newcomb::{build_adversarial_game, bad_decision_probability, q};
///
/// let game = build_adversarial_game(&[q("1/2"), q("3/10"), q("1/5")]).unwrap();
/// assert_eq!(game.target_box(), 2);
/// assert_eq!(bad_decision_probability(&game), q("7/10"));
/// ```
pub fn build_adversarial_game(beliefs: &[Rational]) -> Result<NBoxGame> {
    let n = beliefs.len();
    if n < 2 {
        if let [only] = beliefs {
            return Err(Error::PerfectKnowledge(only.clone()));
        }
        return Err(Error::NotADistribution("no boxes".into()));
    }
    if let Some(neg) = beliefs.iter().find(|b| b.is_negative()) {
        return Err(Error::NotADistribution(format!("negative belief {neg}")));
    }
    let total: Rational = beliefs.iter().sum();
    if !total.is_one() {
        return Err(Error::NotADistribution(format!("beliefs sum to {total}")));
    }
    if let Some(b) = beliefs.iter().find(|b| b.is_zero() || b.is_one()) {
        return Err(Error::PerfectKnowledge(b.clone()));
    }

    let share = Rational::new(1, n as i64);
    let target =
        beliefs.iter().position(|b| *b <= share).expect("some belief is at most 1/n when n beliefs sum to one");
    let rewards = (0..n).map(|i| if i == target { Rational::one() } else { Rational::zero() }).collect();
    Ok(NBoxGame { beliefs: beliefs.to_vec(), target, rewards })
}

impl NBoxGame {
    pub fn n(&self) -> usize {
        self.beliefs.len()
    }

    pub fn beliefs(&self) -> &[Rational] {
        &self.beliefs
    }

    /// 1-based number of the rewarded box.
    pub fn target_box(&self) -> usize {
        self.target + 1
    }

    pub fn target_index(&self) -> usize {
        self.target
    }

    pub fn rewards(&self) -> &[Rational] {
        &self.rewards
    }

    /// `1 - 1/n`.
    pub fn bound(&self) -> Rational {
        Rational::new(1, self.n() as i64).complement()
    }

    /// Counterfactual expected reward of taking each box: the reward is
    /// fixed before the choice, so it is just the reward vector.
    pub fn expected_rewards(&self) -> &[Rational] {
        &self.rewards
    }

    /// 0-based indices of the boxes whose expected reward is strictly below
    /// the best alternative.
    pub fn bad_choices(&self) -> Vec<usize> {
        let best = self.rewards.iter().max().expect("n >= 2");
        (0..self.n()).filter(|&i| self.rewards[i] < *best).collect()
    }
}

/// Probability the player assigns to choosing a counterfactually bad box,
/// `1 - pi_target`. Always at least `1 - 1/n`.
pub fn bad_decision_probability(game: &NBoxGame) -> Rational {
    let bad = game.beliefs[game.target].complement();
    assert!(bad >= game.bound(), "bad-decision probability below 1 - 1/n");
    bad
}
