//! Exact Bayesian counterfactuals for the generalized Newcomb problem.
//!
//! A predictor holding more data than the player announces `omega`, its
//! probability that the player takes only the opaque box, and fills that box
//! with the large reward `R` by a coin of bias `omega`. The transparent box
//! always holds `r`. The player's prior over `omega` is a
//! [`PredictionModel`]; everything downstream is computed in exact rational
//! arithmetic.
//!
//! ```
//! use newcomb::{q, preferred_decision, Choice, NewcombScenario, PredictionModel};
//!
//! let model = PredictionModel::new([(q("1/10"), q("1/2")), (q("9/10"), q("1/2"))]).unwrap();
//! let scenario = NewcombScenario::new(model, q("1000"), q("1000000")).unwrap();
//! let pref = preferred_decision(&scenario).unwrap();
//! assert_eq!(pref.choice, Choice::OneBox);
//! assert_eq!(pref.expected_onebox, q("820000"));
//! assert_eq!(pref.expected_twobox, q("181000"));
//! ```
//!
//! Modules:
//!
//! * [`rational`], [`dist`]: exact scalars and finite distributions
//! * [`scenario`], [`joint`], [`counterfactual`]: the problem and its
//!   counterfactual expectations
//! * [`refinement`]: variance under data refinement, delta-omniscience
//! * [`impossibility`]: the adversarial n-box game
//! * [`montecarlo`]: seeded simulation cross-checking the exact values
//! * [`verify`]: the self-verification suite behind `newcomb verify`
//!
//! A guide with worked examples lives in the repository's `book/`
//! directory; its code listings are compiled and run as doc-tests of this
//! crate.

#![allow(clippy::result_large_err)]

pub mod counterfactual;
pub mod dist;
pub mod error;
pub mod impossibility;
pub mod joint;
pub mod montecarlo;
pub mod random;
pub mod rational;
pub mod refinement;
pub mod scenario;
pub mod verify;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use counterfactual::{
    authority_check, counterfactual_expected_reward, posterior_box_full, preferred_decision, scenario_summary,
    threshold_choice, Choice, Preference, ScenarioSummary,
};
pub use dist::{condition, moments, normalize_dist, FiniteDist, Moments};
pub use error::{Error, ParseRationalError, Result};
pub use impossibility::{bad_decision_probability, build_adversarial_game, NBoxGame};
pub use joint::{build_joint, Atom, BoxContent, Decision, JointDistribution};
pub use montecarlo::{compare_to_exact, simulate, simulate_with, Comparison, SimConfig, SimulationReport};
pub use rational::{q, Rational};
pub use refinement::{
    check_delta_omniscience, coarsen, extremal_model, variance_decomposition, OmniscienceReport, RefinementModel,
    VarianceDecomposition,
};
pub use scenario::{NewcombScenario, PredictionModel, SupportPoint};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/counterfactuals.md")]
    mod counterfactuals {}
    #[doc = include_str!("../../../book/src/refinement.md")]
    mod refinement {}
    #[doc = include_str!("../../../book/src/omniscience.md")]
    mod omniscience {}
    #[doc = include_str!("../../../book/src/impossibility.md")]
    mod impossibility {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
