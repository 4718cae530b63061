//! JSON scenario files.
//!
//! ```json
//! {
//!   "prediction": [
//!     { "omega": "1/10", "weight": "1/2" },
//!     { "omega": "9/10", "weight": "1/2" }
//!   ],
//!   "rewards": { "r": "1000", "R": "1000000" },
//!   "partition": [[1], [2]]
//! }
//! ```
//!
//! Every number is a rational string. `partition` is optional and lists
//! blocks of 1-based indices into `prediction`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use newcomb::{Error as CoreError, NewcombScenario, PredictionModel, Rational, RefinementModel};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    omega: String,
    weight: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRewards {
    r: String,
    #[serde(rename = "R")]
    big_r: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    prediction: Vec<RawPoint>,
    rewards: RawRewards,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    partition: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("parse error in field {field}: {message}")]
    Field { field: String, message: String },
    #[error("invalid scenario: {field}: {message}")]
    InvalidScenario { field: String, message: String },
}

/// A parsed scenario file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioFile {
    pub scenario: NewcombScenario,
    pub refinement: Option<RefinementModel>,
}

fn rational(field: String, text: &str) -> Result<Rational, LoadError> {
    text.parse().map_err(|e: newcomb::ParseRationalError| LoadError::Field { field, message: e.to_string() })
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> LoadError {
    LoadError::InvalidScenario { field: field.into(), message: message.into() }
}

fn model_error(err: CoreError) -> LoadError {
    match err {
        CoreError::EmptySupport => invalid("prediction", "must list at least one point"),
        CoreError::OmegaOutOfRange { index, omega } => {
            invalid(format!("prediction[{}].omega", index + 1), format!("{omega} is outside [0, 1]"))
        }
        CoreError::NonPositiveWeight { index, weight } => {
            invalid(format!("prediction[{}].weight", index + 1), format!("{weight} must be positive"))
        }
        CoreError::DuplicateOmega { index, omega } => {
            invalid(format!("prediction[{}].omega", index + 1), format!("{omega} repeats an earlier point"))
        }
        CoreError::NotNormalized(sum) => invalid("prediction", format!("weights sum to {sum}, not 1")),
        CoreError::NonPositiveReward { name, value } => {
            invalid(format!("rewards.{name}"), format!("{value} must be positive"))
        }
        CoreError::InvalidPartition(msg) => invalid("partition", msg),
        other => invalid("scenario", other.to_string()),
    }
}

impl ScenarioFile {
    /// Parses a scenario document. Positions in `prediction` are reported
    /// 1-based.
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        let raw: RawScenario = serde_json::from_str(text).map_err(|e| LoadError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;

        let mut points = Vec::with_capacity(raw.prediction.len());
        for (i, pt) in raw.prediction.iter().enumerate() {
            let omega = rational(format!("prediction[{}].omega", i + 1), &pt.omega)?;
            let weight = rational(format!("prediction[{}].weight", i + 1), &pt.weight)?;
            points.push((omega, weight));
        }
        let small = rational("rewards.r".into(), &raw.rewards.r)?;
        let large = rational("rewards.R".into(), &raw.rewards.big_r)?;

        let model = PredictionModel::new(points).map_err(model_error)?;
        let refinement = match raw.partition {
            None => None,
            Some(blocks) => {
                let mut zero_based = Vec::with_capacity(blocks.len());
                for (b, block) in blocks.into_iter().enumerate() {
                    let mut out = Vec::with_capacity(block.len());
                    for i in block {
                        if i == 0 {
                            return Err(invalid(
                                format!("partition[{}]", b + 1),
                                "indices are 1-based; 0 is not allowed",
                            ));
                        }
                        out.push(i - 1);
                    }
                    zero_based.push(out);
                }
                Some(RefinementModel::new(model.clone(), zero_based).map_err(model_error)?)
            }
        };
        let scenario = NewcombScenario::new(model, small, large).map_err(model_error)?;
        Ok(ScenarioFile { scenario, refinement })
    }

    pub fn load(path: &Path) -> Result<Self, LoadError> {
        let text = fs::read_to_string(path).map_err(|source| {
            if source.kind() == io::ErrorKind::NotFound {
                LoadError::FileNotFound(path.to_owned())
            } else {
                LoadError::Io { path: path.to_owned(), source }
            }
        })?;
        ScenarioFile::parse(&text)
    }

    /// Canonical JSON rendering; [`ScenarioFile::parse`] inverts it exactly.
    pub fn to_json(&self) -> String {
        let raw = RawScenario {
            prediction: self
                .scenario
                .prediction()
                .support()
                .iter()
                .map(|pt| RawPoint { omega: pt.omega.to_string(), weight: pt.weight.to_string() })
                .collect(),
            rewards: RawRewards {
                r: self.scenario.small_reward().to_string(),
                big_r: self.scenario.large_reward().to_string(),
            },
            partition: self
                .refinement
                .as_ref()
                .map(|r| r.blocks().iter().map(|b| b.iter().map(|i| i + 1).collect()).collect()),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use newcomb::q;

    const S1: &str = r#"{
        "prediction": [{"omega": "1/10", "weight": "1/2"}, {"omega": "9/10", "weight": "1/2"}],
        "rewards": {"r": "1000", "R": "1000000"}
    }"#;

    #[test]
    fn parses_spread_scenario() {
        let f = ScenarioFile::parse(S1).unwrap();
        assert_eq!(f.scenario.prediction().mean(), q("1/2"));
        assert_eq!(f.scenario.large_reward(), &q("1000000"));
        assert!(f.refinement.is_none());
    }

    #[test]
    fn weights_must_sum_to_one() {
        let text = S1.replace(r#""weight": "1/2"}]"#, r#""weight": "1/3"}]"#);
        let err = ScenarioFile::parse(&text).unwrap_err();
        assert_eq!(err.to_string(), "invalid scenario: prediction: weights sum to 5/6, not 1");
    }

    #[test]
    fn zero_denominator_is_a_parse_error() {
        let text = S1.replace(r#""omega": "1/10""#, r#""omega": "1/0""#);
        match ScenarioFile::parse(&text).unwrap_err() {
            LoadError::Field { field, .. } => assert_eq!(field, "prediction[1].omega"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        match ScenarioFile::parse("{\n  \"prediction\": [,]\n}").unwrap_err() {
            LoadError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = S1.replace("\"rewards\"", "\"extra\": 1, \"rewards\"");
        assert!(matches!(ScenarioFile::parse(&text), Err(LoadError::Syntax { .. })));
    }

    #[test]
    fn partition_is_one_based() {
        let text = r#"{
            "prediction": [
                {"omega": "1/10", "weight": "1/4"}, {"omega": "3/10", "weight": "1/4"},
                {"omega": "7/10", "weight": "1/4"}, {"omega": "9/10", "weight": "1/4"}
            ],
            "rewards": {"r": "1", "R": "10"},
            "partition": [[1, 2], [3, 4]]
        }"#;
        let f = ScenarioFile::parse(text).unwrap();
        assert_eq!(f.refinement.as_ref().unwrap().blocks(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(ScenarioFile::parse(&f.to_json()).unwrap(), f);

        let bad = text.replace("[3, 4]", "[3, 5]");
        assert!(matches!(
            ScenarioFile::parse(&bad),
            Err(LoadError::InvalidScenario { ref field, .. }) if field == "partition"
        ));
        let zero = text.replace("[3, 4]", "[0, 3, 4]");
        assert!(matches!(ScenarioFile::parse(&zero), Err(LoadError::InvalidScenario { .. })));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(ScenarioFile::load(Path::new("/nonexistent/scenario.json")), Err(LoadError::FileNotFound(_))));
    }
}
