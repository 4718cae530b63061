#![allow(dead_code)]

use newcomb::{NewcombScenario, PredictionModel, Rational};
use proptest::prelude::*;

pub fn model(points: &[(&str, &str)]) -> PredictionModel {
    PredictionModel::new(points.iter().map(|(o, w)| (newcomb::q(o), newcomb::q(w)))).unwrap()
}

pub fn s1() -> NewcombScenario {
    NewcombScenario::new(model(&[("1/10", "1/2"), ("9/10", "1/2")]), newcomb::q("1000"), newcomb::q("1000000")).unwrap()
}

pub fn s2() -> NewcombScenario {
    NewcombScenario::new(model(&[("1/2", "1")]), newcomb::q("1000"), newcomb::q("1000000")).unwrap()
}

pub fn points(m: &PredictionModel) -> Vec<(Rational, Rational)> {
    m.support().iter().map(|pt| (pt.omega.clone(), pt.weight.clone())).collect()
}

/// Random prediction models with 1..=8 support points.
pub fn arb_model() -> impl Strategy<Value = PredictionModel> {
    prop::collection::vec((1i64..=40, 0i64..=40, 1i64..=50), 1..=8).prop_map(|raw| {
        let pts = raw.into_iter().map(|(den, num, w)| (Rational::new(num.min(den), den), Rational::from_integer(w)));
        PredictionModel::from_unnormalized(pts).unwrap()
    })
}

pub fn arb_imperfect_model() -> impl Strategy<Value = PredictionModel> {
    arb_model().prop_filter("mean strictly inside (0, 1)", |m| m.has_imperfect_knowledge())
}

pub fn arb_ratio() -> impl Strategy<Value = Rational> {
    (1i64..=200, 1i64..=200).prop_map(|(a, b)| Rational::new(a, b))
}
