//! Self-verification suite.
//!
//! Every identity the engine relies on is re-checked here on built-in worked
//! examples and on seeded random instances, comparing each closed form with
//! an independent computation (conditioning of the joint distribution,
//! direct summation over blocks, and so on).
//!
//! A [`Fault`] can be injected to perturb one closed form; a correct suite
//! must then fail. This is how the suite itself is tested.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::counterfactual::{
    authority_check, posterior_box_full, preferred_decision, scenario_summary, threshold_choice, Choice,
};
use crate::dist::normalize_dist;
use crate::impossibility::{bad_decision_probability, build_adversarial_game};
use crate::joint::{build_joint, BoxContent, Decision};
use crate::random;
use crate::rational::Rational;
use crate::refinement::{check_delta_omniscience, coarsen, extremal_model, variance_decomposition, RefinementModel};
use crate::scenario::{NewcombScenario, PredictionModel};

/// Reward ratios `r / R` crossed with every random model.
pub const REWARD_RATIOS: [(i64, i64); 10] =
    [(1, 1000), (1, 100), (1, 20), (1, 10), (1, 4), (1, 2), (3, 4), (1, 1), (2, 1), (10, 1)];

/// A deliberate corruption of one closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fault {
    PriorOneBox,
    PriorBoxFull,
    PosteriorOneBox,
    PosteriorTwoBox,
    Threshold,
    Decomposition,
    Impossibility,
}

impl Fault {
    pub const ALL: [Fault; 7] = [
        Fault::PriorOneBox,
        Fault::PriorBoxFull,
        Fault::PosteriorOneBox,
        Fault::PosteriorTwoBox,
        Fault::Threshold,
        Fault::Decomposition,
        Fault::Impossibility,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fault::PriorOneBox => "prior-onebox",
            Fault::PriorBoxFull => "prior-box-full",
            Fault::PosteriorOneBox => "posterior-onebox",
            Fault::PosteriorTwoBox => "posterior-twobox",
            Fault::Threshold => "threshold",
            Fault::Decomposition => "decomposition",
            Fault::Impossibility => "impossibility",
        }
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Fault::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            let names: Vec<_> = Fault::ALL.iter().map(|f| f.name()).collect();
            format!("unknown fault {s:?}; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Random instances per check.
    pub instances: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { instances: 1000, seed: 0, fault: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "PASS {} ({} cases)", self.name, self.cases)
        } else {
            write!(
                f,
                "FAIL {} ({} of {} cases): {}",
                self.name,
                self.failures,
                self.cases,
                self.first_failure.as_deref().unwrap_or("")
            )
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Runs `case` on every instance in parallel and tallies failures. A case
/// returns `Err(description)` on failure.
fn check<T: Sync>(name: &'static str, instances: &[T], case: impl Fn(&T) -> Result<(), String> + Sync) -> CheckResult {
    let outcomes: Vec<Result<(), String>> = instances.par_iter().map(&case).collect();
    let failures = outcomes.iter().filter(|o| o.is_err()).count();
    let first_failure = outcomes.into_iter().find_map(Result::err);
    CheckResult { name, cases: instances.len(), failures, first_failure }
}

fn expect_eq(what: &str, left: &Rational, right: &Rational) -> Result<(), String> {
    if left == right {
        Ok(())
    } else {
        Err(format!("{what}: {left} != {right}"))
    }
}

struct Perturb(Option<Fault>);

impl Perturb {
    fn apply(&self, fault: Fault, value: Rational) -> Rational {
        if self.0 == Some(fault) {
            value + Rational::new(1, 1000)
        } else {
            value
        }
    }

    fn active(&self, fault: Fault) -> bool {
        self.0 == Some(fault)
    }
}

fn unit_scenario(model: &PredictionModel, ratio: &Rational) -> NewcombScenario {
    NewcombScenario::new(model.clone(), ratio.clone(), Rational::one()).expect("positive rewards")
}

fn worked_examples(perturb: &Perturb) -> Vec<CheckResult> {
    let q = |s: &str| s.parse::<Rational>().expect("literal");
    let model =
        |pts: &[(&str, &str)]| PredictionModel::new(pts.iter().map(|(o, w)| (q(o), q(w)))).expect("literal model");
    let s1 =
        NewcombScenario::new(model(&[("1/10", "1/2"), ("9/10", "1/2")]), q("1000"), q("1000000")).expect("literal");
    let s2 = NewcombScenario::new(model(&[("1/2", "1")]), q("1000"), q("1000000")).expect("literal");
    let s3 = NewcombScenario::new(model(&[("1/4", "1/2"), ("3/4", "1/2")]), q("1"), q("4")).expect("literal");

    type Case = (&'static str, NewcombScenario, [&'static str; 6], Choice);
    let cases: Vec<Case> = vec![
        ("spread", s1, ["1/2", "4/25", "16/25", "41/50", "9/50", "820000"], Choice::OneBox),
        ("point", s2, ["1/2", "0", "0", "1/2", "1/2", "500000"], Choice::TwoBox),
        ("tie", s3, ["1/2", "1/16", "1/4", "5/8", "3/8", "5/2"], Choice::Indifferent),
    ];

    let result = check("worked-examples", &cases, |(label, s, expected, choice)| {
        let summary = scenario_summary(s).map_err(|e| e.to_string())?;
        let one =
            perturb.apply(Fault::PosteriorOneBox, posterior_box_full(s, Decision::OneBox).map_err(|e| e.to_string())?);
        let two =
            perturb.apply(Fault::PosteriorTwoBox, posterior_box_full(s, Decision::TwoBox).map_err(|e| e.to_string())?);
        let pref = preferred_decision(s).map_err(|e| e.to_string())?;
        let got = [summary.p, summary.sigma2, summary.threshold, one, two, pref.expected_onebox];
        for (g, e) in got.iter().zip(expected) {
            expect_eq(label, g, &q(e))?;
        }
        if pref.choice != *choice {
            return Err(format!("{label}: preference {} != {}", pref.choice, choice));
        }
        Ok(())
    });
    vec![result]
}

/// Runs the full suite.
pub fn run(config: &VerifyConfig) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.instances.max(1);
    let perturb = Perturb(config.fault);

    let models: Vec<PredictionModel> = (0..n).map(|_| random::random_model(&mut rng, 8)).collect();
    let imperfect: Vec<PredictionModel> = (0..n).map(|_| random::random_imperfect_model(&mut rng, 8)).collect();
    let refinements: Vec<RefinementModel> = (0..n).map(|_| random::random_refinement(&mut rng, 8)).collect();
    let beliefs: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let boxes = 2 + i % 9;
            if i % 10 == 0 {
                vec![Rational::new(1, boxes as i64); boxes]
            } else {
                random::random_beliefs(&mut rng, boxes)
            }
        })
        .collect();
    let scaling: Vec<(PredictionModel, Rational, Rational)> =
        imperfect.iter().map(|m| (m.clone(), random::random_ratio(&mut rng), random::random_ratio(&mut rng))).collect();
    let deltas: Vec<(PredictionModel, Rational)> = imperfect
        .iter()
        .map(|m| {
            let p = m.mean();
            let limit = std::cmp::min(p.clone(), p.complement());
            let frac = random::random_probability(&mut rng);
            // Strictly below the limit.
            let delta = &limit * frac * Rational::new(99, 100);
            (m.clone(), delta)
        })
        .collect();

    let mut checks = worked_examples(&perturb);

    checks.push(check("dist-normalization", &models, |m| {
        let raw: Vec<(usize, Rational)> = m
            .support()
            .iter()
            .enumerate()
            .map(|(i, pt)| (i % 3, &pt.weight * Rational::from_integer(7) + &pt.omega))
            .collect();
        let d = normalize_dist(raw).map_err(|e| e.to_string())?;
        expect_eq("total mass", &d.total_mass(), &Rational::one())?;
        let mo = d.moments(|&i| Rational::from_integer(i as i64));
        if mo.variance.is_negative() {
            return Err(format!("negative variance {}", mo.variance));
        }
        Ok(())
    }));

    checks.push(check("conditioning-composition", &models, |m| {
        let joint = build_joint(&unit_scenario(m, &Rational::one()));
        let d = joint.dist();
        let e = |a: &crate::joint::Atom| a.decision == Decision::OneBox || a.data % 2 == 0;
        let f = |a: &crate::joint::Atom| a.box_a == BoxContent::Full;
        match (d.condition(e), d.condition(|a| e(a) && f(a))) {
            (Ok(de), Ok(def)) => match de.condition(f) {
                Ok(twice) if twice == def => Ok(()),
                Ok(_) => Err("condition(E) then F differs from condition(E and F)".into()),
                Err(err) => Err(format!("E and F defined but F given E is not: {err}")),
            },
            (_, Err(_)) => Ok(()),
            (Err(err), Ok(_)) => Err(format!("E and F defined but E is not: {err}")),
        }
    }));

    checks.push(check("total-probability", &models, |m| {
        let joint = build_joint(&unit_scenario(m, &Rational::one()));
        let d = joint.dist();
        let full = |a: &crate::joint::Atom| {
            if a.box_a == BoxContent::Full {
                Rational::one()
            } else {
                Rational::zero()
            }
        };
        let mut total = Rational::zero();
        for data in 0..m.len() {
            let mass = d.prob(|a| a.data == data);
            let cond = d.condition(|a| a.data == data).map_err(|e| e.to_string())?;
            total = total + mass * cond.expectation(full);
        }
        expect_eq("sum of block means", &total, &d.expectation(full))
    }));

    checks.push(check("prior-onebox-is-mean-prediction", &models, |m| {
        let joint = build_joint(&unit_scenario(m, &Rational::one()));
        let closed = perturb.apply(Fault::PriorOneBox, m.mean());
        expect_eq("P(onebox) vs E[omega]", &joint.prob_decision(Decision::OneBox), &closed)
    }));

    checks.push(check("prior-box-full-is-p", &models, |m| {
        let joint = build_joint(&unit_scenario(m, &Rational::one()));
        let closed = perturb.apply(Fault::PriorBoxFull, m.mean());
        expect_eq("P(full) vs p", &joint.prob_box_full(), &closed)
    }));

    checks.push(check("posterior-given-onebox", &imperfect, |m| {
        let s = unit_scenario(m, &Rational::one());
        let closed = posterior_box_full(&s, Decision::OneBox).map_err(|e| e.to_string())?;
        let closed = perturb.apply(Fault::PosteriorOneBox, closed);
        let conditioned = build_joint(&s).conditional_box_full(Decision::OneBox).map_err(|e| e.to_string())?;
        expect_eq("p + sigma2/p vs conditioning", &closed, &conditioned)
    }));

    checks.push(check("posterior-given-twobox", &imperfect, |m| {
        let s = unit_scenario(m, &Rational::one());
        let closed = posterior_box_full(&s, Decision::TwoBox).map_err(|e| e.to_string())?;
        let closed = perturb.apply(Fault::PosteriorTwoBox, closed);
        let conditioned = build_joint(&s).conditional_box_full(Decision::TwoBox).map_err(|e| e.to_string())?;
        expect_eq("p - sigma2/(1-p) vs conditioning", &closed, &conditioned)
    }));

    checks.push(check("posterior-mixture", &imperfect, |m| {
        let s = unit_scenario(m, &Rational::one());
        let p = m.mean();
        let one = posterior_box_full(&s, Decision::OneBox).map_err(|e| e.to_string())?;
        let two = posterior_box_full(&s, Decision::TwoBox).map_err(|e| e.to_string())?;
        expect_eq("mixture", &(one * &p + two * p.complement()), &p)
    }));

    checks.push(check("posterior-ordering-and-range", &imperfect, |m| {
        let s = unit_scenario(m, &Rational::one());
        let p = m.mean();
        let one = posterior_box_full(&s, Decision::OneBox).map_err(|e| e.to_string())?;
        let two = posterior_box_full(&s, Decision::TwoBox).map_err(|e| e.to_string())?;
        if !(one >= p && p >= two) {
            return Err(format!("ordering violated: {one} >= {p} >= {two}"));
        }
        let flat = m.variance().is_zero();
        if flat != (one == p) || flat != (two == p) {
            return Err("equality must hold iff the variance is zero".into());
        }
        if !one.is_probability() || !two.is_probability() {
            return Err(format!("posteriors {one}, {two} outside [0, 1]"));
        }
        if m.variance() > &p * p.complement() {
            return Err("variance exceeds p(1-p)".into());
        }
        Ok(())
    }));

    checks.push(check("threshold-equivalence", &imperfect, |m| {
        let summary = scenario_summary(&unit_scenario(m, &Rational::one())).map_err(|e| e.to_string())?;
        let mut ratios: Vec<Rational> = REWARD_RATIOS.iter().map(|&(a, b)| Rational::new(a, b)).collect();
        if summary.threshold.is_positive() {
            ratios.push(summary.threshold.clone());
        }
        for ratio in ratios {
            let s = unit_scenario(m, &ratio);
            let by_expectation = preferred_decision(&s).map_err(|e| e.to_string())?.choice;
            let by_threshold = if perturb.active(Fault::Threshold) {
                let shifted = &summary.threshold + Rational::new(1, 2);
                match ratio.cmp(&shifted) {
                    std::cmp::Ordering::Less => Choice::OneBox,
                    std::cmp::Ordering::Greater => Choice::TwoBox,
                    std::cmp::Ordering::Equal => Choice::Indifferent,
                }
            } else {
                threshold_choice(&s).map_err(|e| e.to_string())?
            };
            if by_expectation != by_threshold {
                return Err(format!("r/R = {ratio}: expectations say {by_expectation}, threshold says {by_threshold}"));
            }
            if ratio >= Rational::one() && by_expectation == Choice::OneBox {
                return Err(format!("r/R = {ratio} >= 1 but one-boxing strictly preferred"));
            }
        }
        Ok(())
    }));

    checks.push(check("reward-scaling", &scaling, |(m, ratio, factor)| {
        let s = unit_scenario(m, ratio);
        let scaled = s.scale_rewards(factor).map_err(|e| e.to_string())?;
        let a = preferred_decision(&s).map_err(|e| e.to_string())?;
        let b = preferred_decision(&scaled).map_err(|e| e.to_string())?;
        if a.choice != b.choice {
            return Err(format!("scaling by {factor} changed {} to {}", a.choice, b.choice));
        }
        expect_eq("scaled onebox expectation", &(a.expected_onebox * factor), &b.expected_onebox)
    }));

    checks.push(check("authority", &models, |m| {
        let s = unit_scenario(m, &Rational::one());
        for omega in m.omegas() {
            let got = authority_check(&s, omega).map_err(|e| e.to_string())?;
            expect_eq("P(onebox | omega)", &got, omega)?;
        }
        Ok(())
    }));

    checks.push(check("coarsening-preserves-mean", &refinements, |r| {
        expect_eq("coarse p vs fine p", &coarsen(r).mean(), &r.fine().mean())
    }));

    checks.push(check("variance-decomposition", &refinements, |r| {
        let v = variance_decomposition(r);
        let rhs = perturb.apply(Fault::Decomposition, &v.coarse_var + &v.expected_conditional_var);
        expect_eq("fine = coarse + expected conditional", &v.fine_var, &rhs)?;
        expect_eq("coarse variance vs coarsened model", &v.coarse_var, &coarsen(r).variance())?;
        if v.fine_var < v.coarse_var {
            return Err("refinement decreased the variance".into());
        }
        Ok(())
    }));

    checks.push(check("omniscience-bound", &deltas, |(m, delta)| {
        let report = check_delta_omniscience(m, delta).map_err(|e| e.to_string())?;
        if report.is_omniscient && report.actual_variance < report.variance_lower_bound {
            return Err(format!("omniscient model below bound at delta {delta}"));
        }
        let p = m.mean();
        let extremal = extremal_model(&p, delta).map_err(|e| e.to_string())?;
        let ext = check_delta_omniscience(&extremal, delta).map_err(|e| e.to_string())?;
        if !ext.is_omniscient || ext.actual_variance < ext.variance_lower_bound {
            return Err(format!("extremal model fails bound at p = {p}, delta = {delta}"));
        }
        let linear = &p * p.complement() - Rational::from_integer(3) * delta;
        if ext.variance_lower_bound < linear {
            return Err(format!("exact bound below p(1-p) - 3 delta at p = {p}, delta = {delta}"));
        }
        Ok(())
    }));

    checks.push(check("impossibility-bound", &beliefs, |b| {
        let game = build_adversarial_game(b).map_err(|e| e.to_string())?;
        let n = b.len();
        let bad = if perturb.active(Fault::Impossibility) {
            b.iter().max().expect("n >= 2").complement()
        } else {
            bad_decision_probability(&game)
        };
        if bad < game.bound() {
            return Err(format!("bad-decision probability {bad} below 1 - 1/{n}"));
        }
        let uniform = b.iter().all(|x| *x == b[0]);
        if uniform && bad != game.bound() {
            return Err("uniform beliefs must attain the bound".into());
        }
        if game.bad_choices().len() != n - 1 || game.bad_choices().contains(&game.target_index()) {
            return Err("bad choices must be exactly the non-target boxes".into());
        }
        if let Some(early) = b[..game.target_index()].iter().find(|x| **x <= game.bound().complement()) {
            return Err(format!("earlier box with belief {early} <= 1/n was skipped"));
        }
        Ok(())
    }));

    VerifyReport { checks }
}
