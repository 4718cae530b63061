//! Parameter sweeps over symmetric two-point prediction models.
//!
//! A grid point `(p, spread, ratio)` is the model `{p - spread, p + spread}`
//! with equal weights (mean `p`, variance `spread^2`) and rewards
//! `r = ratio * R`.

use std::io::Write;

use newcomb::{preferred_decision, scenario_summary, NewcombScenario, PredictionModel, Rational};
use rayon::prelude::*;

pub const CSV_HEADER: [&str; 8] =
    ["p", "spread", "sigma2", "threshold", "r_over_R", "preference", "e_onebox", "e_twobox"];

#[derive(Clone, Debug)]
pub struct SweepGrid {
    ps: Vec<Rational>,
    spreads: Vec<Rational>,
    ratios: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub p: Rational,
    pub spread: Rational,
    pub sigma2: Rational,
    pub threshold: Rational,
    pub ratio: Rational,
    pub preference: newcomb::Choice,
    pub e_onebox: Rational,
    pub e_twobox: Rational,
}

impl SweepGrid {
    /// Every `(p, spread)` pair must satisfy `0 < p < 1`, `spread >= 0`,
    /// `p - spread >= 0` and `p + spread <= 1`; every ratio must be positive.
    pub fn new(ps: Vec<Rational>, spreads: Vec<Rational>, ratios: Vec<Rational>) -> Result<Self, String> {
        if ps.is_empty() || spreads.is_empty() || ratios.is_empty() {
            return Err("p, spread and ratio lists must all be nonempty".into());
        }
        for p in &ps {
            if !p.is_strict_probability() {
                return Err(format!("p = {p} must lie strictly between 0 and 1"));
            }
            for a in &spreads {
                if a.is_negative() {
                    return Err(format!("spread = {a} must be nonnegative"));
                }
                if (p - a).is_negative() || p + a > Rational::one() {
                    return Err(format!("p = {p}, spread = {a}: support {{p - spread, p + spread}} leaves [0, 1]"));
                }
            }
        }
        if let Some(r) = ratios.iter().find(|r| !r.is_positive()) {
            return Err(format!("ratio = {r} must be positive"));
        }
        Ok(SweepGrid { ps, spreads, ratios })
    }

    pub fn len(&self) -> usize {
        self.ps.len() * self.spreads.len() * self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in row-major order: p, then spread, then ratio.
    pub fn points(&self) -> Vec<(Rational, Rational, Rational)> {
        let mut out = Vec::with_capacity(self.len());
        for p in &self.ps {
            for a in &self.spreads {
                for r in &self.ratios {
                    out.push((p.clone(), a.clone(), r.clone()));
                }
            }
        }
        out
    }
}

fn evaluate(p: &Rational, spread: &Rational, ratio: &Rational, large_reward: &Rational) -> SweepRow {
    let model = PredictionModel::two_point(p, spread).expect("grid validated");
    let scenario = NewcombScenario::new(model, ratio * large_reward, large_reward.clone()).expect("grid validated");
    let summary = scenario_summary(&scenario).expect("0 < p < 1");
    let pref = preferred_decision(&scenario).expect("0 < p < 1");
    SweepRow {
        p: p.clone(),
        spread: spread.clone(),
        sigma2: summary.sigma2,
        threshold: summary.threshold,
        ratio: ratio.clone(),
        preference: pref.choice,
        e_onebox: pref.expected_onebox,
        e_twobox: pref.expected_twobox,
    }
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn run_sweep(grid: &SweepGrid, large_reward: &Rational) -> Vec<SweepRow> {
    grid.points().par_iter().map(|(p, a, r)| evaluate(p, a, r, large_reward)).collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record([
            row.p.to_fraction_string(),
            row.spread.to_fraction_string(),
            row.sigma2.to_fraction_string(),
            row.threshold.to_fraction_string(),
            row.ratio.to_fraction_string(),
            row.preference.to_string(),
            row.e_onebox.to_fraction_string(),
            row.e_twobox.to_fraction_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
