//! Oracles shared by the integration suites. Nothing here calls into the
//! crate's growth or utility code paths.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// Decimal digits carried by the fixed-point square root.
const SQRT_DIGITS: u32 = 80;

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// sqrt(r) to SQRT_DIGITS digits via an integer square root.
fn sqrt_rat(r: &BigRational) -> BigRational {
    let scale = BigInt::from(10u32).pow(SQRT_DIGITS);
    let radicand = r.numer() * r.denom() * &scale * &scale;
    BigRational::new(radicand.sqrt(), r.denom() * scale)
}

/// `rel_diff(1, growth_ratio(1, ratio_from_rel_diff(d)))` at alpha = 1/2,
/// evaluated with exact rationals and an 80-digit square root.
pub fn pct_du_pipeline_exact(d: f64) -> f64 {
    let one = BigRational::one();
    let two = &one + &one;
    let d = rat(d);
    let r = (&two + &d) / (&two - &d);
    let g = (&one + &r) / (&two * sqrt_rat(&r));
    (&two * (&g - &one) / (&g + &one)).to_f64().unwrap()
}

/// `p1 / p0` for the relative difference `d`, exactly.
pub fn price_ratio_exact(d: f64) -> f64 {
    let two = BigRational::from_integer(2.into());
    let d = rat(d);
    ((&two + &d) / (&two - &d)).to_f64().unwrap()
}

/// Utility ratio from a hand-rolled rebalance: start on target at `p0`,
/// revalue at `p1`, re-split, and compare `A m^alpha q^beta` before and after.
pub fn rebalance_ratio_by_hand(p0: f64, p1: f64, alpha: f64, wealth: f64) -> f64 {
    let beta = 1.0 - alpha;
    let efficiency = p0.powf(beta) / (alpha.powf(alpha) * beta.powf(beta));
    let u = |m: f64, q: f64| efficiency * m.powf(alpha) * q.powf(beta);

    let (m0, q0) = (alpha * wealth, beta * wealth / p0);
    let wealth1 = m0 + p1 * q0;
    let (m1, q1) = (alpha * wealth1, beta * wealth1 / p1);
    u(m1, q1) / u(m0, q0)
}

pub fn rel_err(actual: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        actual.abs()
    } else {
        ((actual - expected) / expected).abs()
    }
}
