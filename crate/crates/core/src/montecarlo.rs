//! Monte Carlo simulation of the Newcomb game.
//!
//! Each sample draws a data outcome `d` from the prediction prior, then the
//! player's decision and the opaque box independently, each with success
//! probability `omega_d`.
//!
//! # Random stream
//!
//! The generator is ChaCha with 8 rounds. For seed `s` the 256-bit key is
//! `s` as 8 little-endian bytes followed by 24 zero bytes; chunk `k` uses
//! stream id `k` and starts at word position 0. Every sample consumes three
//! 64-bit outputs `u` in order (data, decision, box). A draw with success
//! probability `x` succeeds iff `u < floor(x * 2^64)`; the data outcome is
//! the first index whose cumulative weight `c` satisfies
//! `u < floor(c * 2^64)`. Samples are split over chunks as evenly as
//! possible, earlier chunks taking the remainder.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::counterfactual::{counterfactual_expected_reward, posterior_box_full};
use crate::error::{Error, Result};
use crate::joint::{build_joint, Decision};
use crate::rational::Rational;
use crate::scenario::NewcombScenario;

pub const GENERATOR: &str =
    "ChaCha8 (key = seed u64 LE + 24 zero bytes, stream = chunk index, 3 x u64 per sample, u < floor(x*2^64))";
pub const DEFAULT_CHUNKS: u32 = 64;
pub const DEFAULT_FLAG_THRESHOLD: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub samples: u64,
    pub seed: u64,
    pub chunks: u32,
}

impl SimConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        SimConfig { samples, seed, chunks: DEFAULT_CHUNKS }
    }
}

/// Counts per (decision, box) cell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CellCounts {
    pub onebox_full: u64,
    pub onebox_empty: u64,
    pub twobox_full: u64,
    pub twobox_empty: u64,
}

impl CellCounts {
    pub fn total(&self) -> u64 {
        self.onebox_full + self.onebox_empty + self.twobox_full + self.twobox_empty
    }

    pub fn onebox(&self) -> u64 {
        self.onebox_full + self.onebox_empty
    }

    pub fn twobox(&self) -> u64 {
        self.twobox_full + self.twobox_empty
    }

    pub fn full(&self) -> u64 {
        self.onebox_full + self.twobox_full
    }

    fn add(&mut self, other: &CellCounts) {
        self.onebox_full += other.onebox_full;
        self.onebox_empty += other.onebox_empty;
        self.twobox_full += other.twobox_full;
        self.twobox_empty += other.twobox_empty;
    }
}

/// Draws and one-box counts for a single support point.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportCounts {
    pub omega: Rational,
    pub draws: u64,
    pub onebox: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    /// Sample proportion `hits / n` with binomial standard error.
    fn proportion(hits: u64, n: u64) -> Option<Self> {
        if n == 0 {
            return None;
        }
        let value = hits as f64 / n as f64;
        let std_error = (value * (1.0 - value) / n as f64).sqrt();
        Some(Estimate { value, std_error })
    }

    fn affine(self, scale: f64, offset: f64) -> Self {
        Estimate { value: self.value * scale + offset, std_error: self.std_error * scale.abs() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    pub samples: u64,
    pub seed: u64,
    pub chunks: u32,
    pub generator: &'static str,
    pub cells: CellCounts,
    pub per_support: Vec<SupportCounts>,
    pub est_p: Estimate,
    pub est_prior_full: Estimate,
    /// `None` when no sample one-boxed.
    pub est_post_full_given_onebox: Option<Estimate>,
    /// `None` when no sample two-boxed.
    pub est_post_full_given_twobox: Option<Estimate>,
    pub est_reward_onebox: Option<Estimate>,
    pub est_reward_twobox: Option<Estimate>,
}

/// `floor(x * 2^64)` for `x` in `[0, 1]`.
fn fixed_point_threshold(x: &Rational) -> u128 {
    let scaled: BigInt = (x.numer() << 64u32) / x.denom();
    scaled.to_u128().expect("probability in [0, 1]")
}

struct Sampler {
    cumulative: Vec<u128>,
    omega: Vec<u128>,
}

impl Sampler {
    fn new(scenario: &NewcombScenario) -> Self {
        let support = scenario.prediction().support();
        let mut acc = Rational::zero();
        let mut cumulative = Vec::with_capacity(support.len());
        for pt in support {
            acc = acc + &pt.weight;
            cumulative.push(fixed_point_threshold(&acc));
        }
        let omega = support.iter().map(|pt| fixed_point_threshold(&pt.omega)).collect();
        Sampler { cumulative, omega }
    }

    fn run_chunk(&self, seed: u64, chunk: u32, samples: u64) -> (CellCounts, Vec<(u64, u64)>) {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(u64::from(chunk));

        let mut cells = CellCounts::default();
        let mut per = vec![(0u64, 0u64); self.omega.len()];
        let last = self.cumulative.len() - 1;
        for _ in 0..samples {
            let u_data = u128::from(rng.next_u64());
            let u_decision = u128::from(rng.next_u64());
            let u_box = u128::from(rng.next_u64());
            let d = self.cumulative.iter().position(|&c| u_data < c).unwrap_or(last);
            let threshold = self.omega[d];
            let onebox = u_decision < threshold;
            let full = u_box < threshold;
            per[d].0 += 1;
            match (onebox, full) {
                (true, true) => cells.onebox_full += 1,
                (true, false) => cells.onebox_empty += 1,
                (false, true) => cells.twobox_full += 1,
                (false, false) => cells.twobox_empty += 1,
            }
            if onebox {
                per[d].1 += 1;
            }
        }
        (cells, per)
    }
}

/// Simulates with the default chunk plan.
pub fn simulate(scenario: &NewcombScenario, samples: u64, seed: u64) -> Result<SimulationReport> {
    simulate_with(scenario, &SimConfig::new(samples, seed))
}

/// Simulates with an explicit chunk plan. Chunks run in parallel; counts are
/// summed as integers so the report depends only on `config`.
pub fn simulate_with(scenario: &NewcombScenario, config: &SimConfig) -> Result<SimulationReport> {
    if config.samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if config.chunks == 0 {
        return Err(Error::ZeroChunks);
    }
    let sampler = Sampler::new(scenario);
    let chunks = u64::from(config.chunks);
    let base = config.samples / chunks;
    let extra = config.samples % chunks;

    let results: Vec<_> = (0..config.chunks)
        .into_par_iter()
        .map(|k| {
            let n = base + u64::from(u64::from(k) < extra);
            sampler.run_chunk(config.seed, k, n)
        })
        .collect();

    let support = scenario.prediction().support();
    let mut cells = CellCounts::default();
    let mut per_support: Vec<SupportCounts> =
        support.iter().map(|pt| SupportCounts { omega: pt.omega.clone(), draws: 0, onebox: 0 }).collect();
    for (c, per) in &results {
        cells.add(c);
        for (acc, &(draws, onebox)) in per_support.iter_mut().zip(per) {
            acc.draws += draws;
            acc.onebox += onebox;
        }
    }
    debug_assert_eq!(cells.total(), config.samples);

    let n = config.samples;
    let large = scenario.large_reward().to_f64();
    let small = scenario.small_reward().to_f64();
    let post_one = Estimate::proportion(cells.onebox_full, cells.onebox());
    let post_two = Estimate::proportion(cells.twobox_full, cells.twobox());

    Ok(SimulationReport {
        samples: n,
        seed: config.seed,
        chunks: config.chunks,
        generator: GENERATOR,
        cells,
        per_support,
        est_p: Estimate::proportion(cells.onebox(), n).expect("n > 0"),
        est_prior_full: Estimate::proportion(cells.full(), n).expect("n > 0"),
        est_post_full_given_onebox: post_one,
        est_post_full_given_twobox: post_two,
        est_reward_onebox: post_one.map(|e| e.affine(large, 0.0)),
        est_reward_twobox: post_two.map(|e| e.affine(large, small)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    P,
    PriorBoxFull,
    PostFullGivenOneBox,
    PostFullGivenTwoBox,
    RewardOneBox,
    RewardTwoBox,
    /// One-box frequency among samples with this 0-based support index.
    OneBoxGivenOmega(usize),
}

impl Quantity {
    pub fn name(&self) -> String {
        match self {
            Quantity::P => "p".into(),
            Quantity::PriorBoxFull => "prior_box_full".into(),
            Quantity::PostFullGivenOneBox => "post_full_given_onebox".into(),
            Quantity::PostFullGivenTwoBox => "post_full_given_twobox".into(),
            Quantity::RewardOneBox => "reward_onebox".into(),
            Quantity::RewardTwoBox => "reward_twobox".into(),
            Quantity::OneBoxGivenOmega(i) => format!("onebox_given_omega[{}]", i + 1),
        }
    }
}

/// One row of [`compare_to_exact`].
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub quantity: Quantity,
    /// `None` when the exact value is undefined (perfect knowledge).
    pub exact: Option<Rational>,
    /// `None` when the conditioning cell was empty.
    pub estimate: Option<Estimate>,
    /// `|estimate - exact| / std_error`.
    pub deviation: Option<f64>,
    pub flagged: bool,
}

/// Lines up every estimate with its exact value and flags deviations above
/// `threshold` standard errors.
pub fn compare_to_exact(report: &SimulationReport, scenario: &NewcombScenario, threshold: f64) -> Vec<Comparison> {
    let joint = build_joint(scenario);
    let mut rows = vec![
        (Quantity::P, Some(scenario.prediction().mean()), Some(report.est_p)),
        (Quantity::PriorBoxFull, Some(joint.prob_box_full()), Some(report.est_prior_full)),
        (
            Quantity::PostFullGivenOneBox,
            posterior_box_full(scenario, Decision::OneBox).ok(),
            report.est_post_full_given_onebox,
        ),
        (
            Quantity::PostFullGivenTwoBox,
            posterior_box_full(scenario, Decision::TwoBox).ok(),
            report.est_post_full_given_twobox,
        ),
        (
            Quantity::RewardOneBox,
            counterfactual_expected_reward(scenario, Decision::OneBox).ok(),
            report.est_reward_onebox,
        ),
        (
            Quantity::RewardTwoBox,
            counterfactual_expected_reward(scenario, Decision::TwoBox).ok(),
            report.est_reward_twobox,
        ),
    ];
    for (i, counts) in report.per_support.iter().enumerate() {
        rows.push((
            Quantity::OneBoxGivenOmega(i),
            Some(counts.omega.clone()),
            Estimate::proportion(counts.onebox, counts.draws),
        ));
    }

    rows.into_iter()
        .map(|(quantity, exact, estimate)| {
            let deviation = match (&exact, &estimate) {
                (Some(x), Some(e)) => {
                    let gap = (e.value - x.to_f64()).abs();
                    Some(if e.std_error > 0.0 {
                        gap / e.std_error
                    } else if gap == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    })
                }
                _ => None,
            };
            let flagged = deviation.is_some_and(|d| d > threshold);
            Comparison { quantity, exact, estimate, deviation, flagged }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::scenario::PredictionModel;

    fn s1() -> NewcombScenario {
        let m = PredictionModel::new([(q("1/10"), q("1/2")), (q("9/10"), q("1/2"))]).unwrap();
        NewcombScenario::new(m, q("1000"), q("1000000")).unwrap()
    }

    #[test]
    fn fixed_point_thresholds() {
        assert_eq!(fixed_point_threshold(&q("0")), 0);
        assert_eq!(fixed_point_threshold(&q("1")), 1u128 << 64);
        assert_eq!(fixed_point_threshold(&q("1/2")), 1u128 << 63);
        assert_eq!(fixed_point_threshold(&q("1/3")), (1u128 << 64) / 3);
    }

    #[test]
    fn zero_samples() {
        assert_eq!(simulate(&s1(), 0, 1), Err(Error::ZeroSamples));
        let cfg = SimConfig { samples: 10, seed: 0, chunks: 0 };
        assert_eq!(simulate_with(&s1(), &cfg), Err(Error::ZeroChunks));
    }

    #[test]
    fn cells_sum_to_samples_and_chunking_is_exact() {
        let cfg = SimConfig { samples: 1001, seed: 9, chunks: 7 };
        let r = simulate_with(&s1(), &cfg).unwrap();
        assert_eq!(r.cells.total(), 1001);
        assert_eq!(r.per_support.iter().map(|c| c.draws).sum::<u64>(), 1001);
        assert_eq!(r, simulate_with(&s1(), &cfg).unwrap());
    }

    #[test]
    fn degenerate_predictor_leaves_conditionals_unavailable() {
        let m = PredictionModel::point(q("1")).unwrap();
        let s = NewcombScenario::new(m, q("1"), q("2")).unwrap();
        let r = simulate(&s, 100, 3).unwrap();
        assert_eq!(r.cells.onebox_full, 100);
        assert!(r.est_post_full_given_twobox.is_none());
        assert!(r.est_reward_twobox.is_none());
        let rows = compare_to_exact(&r, &s, DEFAULT_FLAG_THRESHOLD);
        assert!(rows.iter().all(|row| !row.flagged));
        let two = rows.iter().find(|row| row.quantity == Quantity::PostFullGivenTwoBox).unwrap();
        assert_eq!(two.deviation, None);
    }

    #[test]
    fn corrupted_report_is_flagged() {
        let s = s1();
        let mut r = simulate(&s, 100_000, 5).unwrap();
        r.est_p.value += 0.1;
        let rows = compare_to_exact(&r, &s, DEFAULT_FLAG_THRESHOLD);
        let p = rows.iter().find(|row| row.quantity == Quantity::P).unwrap();
        assert!(p.flagged);
    }
}
