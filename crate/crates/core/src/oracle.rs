//! Brute-force enumeration oracle (test builds and the `oracle` feature only).
//!
//! Works on raw `BigRational`s and plain nested loops over every
//! `(data, decision, coin)` triple, sharing nothing with the engine's
//! distribution or closed-form code.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::rational::Rational;

/// One enumerated outcome: support index, one-boxed?, box full?, mass.
pub type OracleAtom = (usize, bool, bool, BigRational);

/// Enumerates all `4 * n` triples, including zero-mass ones.
pub fn enumerate(points: &[(Rational, Rational)]) -> Vec<OracleAtom> {
    let mut out = Vec::new();
    for (d, (omega, weight)) in points.iter().enumerate() {
        let w = omega.as_big().clone();
        let q = weight.as_big().clone();
        for onebox in [true, false] {
            let p_dec = if onebox { w.clone() } else { BigRational::one() - &w };
            for full in [true, false] {
                let p_coin = if full { w.clone() } else { BigRational::one() - &w };
                out.push((d, onebox, full, &q * &p_dec * &p_coin));
            }
        }
    }
    out
}

fn mass(atoms: &[OracleAtom], pred: impl Fn(&OracleAtom) -> bool) -> BigRational {
    let mut total = BigRational::zero();
    for a in atoms {
        if pred(a) {
            total += &a.3;
        }
    }
    total
}

pub fn total(points: &[(Rational, Rational)]) -> Rational {
    mass(&enumerate(points), |_| true).into()
}

pub fn prob_onebox(points: &[(Rational, Rational)]) -> Rational {
    mass(&enumerate(points), |a| a.1).into()
}

pub fn prob_full(points: &[(Rational, Rational)]) -> Rational {
    mass(&enumerate(points), |a| a.2).into()
}

/// `P(full | decision)`, or `None` if the decision has zero mass.
pub fn posterior_full(points: &[(Rational, Rational)], onebox: bool) -> Option<Rational> {
    let atoms = enumerate(points);
    let given = mass(&atoms, |a| a.1 == onebox);
    if given.is_zero() {
        return None;
    }
    Some((mass(&atoms, |a| a.1 == onebox && a.2) / given).into())
}

/// Expected reward: `R` if the box is full, plus `r` when two-boxing.
pub fn expected_reward(
    points: &[(Rational, Rational)],
    onebox: bool,
    small: &Rational,
    large: &Rational,
) -> Option<Rational> {
    let atoms = enumerate(points);
    let given = mass(&atoms, |a| a.1 == onebox);
    if given.is_zero() {
        return None;
    }
    let mut acc = BigRational::zero();
    for a in atoms.iter().filter(|a| a.1 == onebox) {
        let mut reward = if a.2 { large.as_big().clone() } else { BigRational::zero() };
        if !onebox {
            reward += small.as_big();
        }
        acc += &a.3 * reward;
    }
    Some((acc / given).into())
}

/// `P(onebox | omega = omega_value)`, or `None` for a zero-mass value.
pub fn onebox_given_omega(points: &[(Rational, Rational)], omega_value: &Rational) -> Option<Rational> {
    let atoms = enumerate(points);
    let in_block = |a: &OracleAtom| points[a.0].0 == *omega_value;
    let given = mass(&atoms, in_block);
    if given.is_zero() {
        return None;
    }
    Some((mass(&atoms, |a| in_block(a) && a.1) / given).into())
}

/// Mean and variance of omega by direct summation.
pub fn omega_moments(points: &[(Rational, Rational)]) -> (Rational, Rational) {
    let mut m1 = BigRational::zero();
    let mut m2 = BigRational::zero();
    for (omega, weight) in points {
        let w = omega.as_big();
        m1 += weight.as_big() * w;
        m2 += weight.as_big() * w * w;
    }
    let var = &m2 - &m1 * &m1;
    (m1.into(), var.into())
}
