//! Supply and demand curves induced by rebalancing.
//!
//! Anchored at a price `p0` with `q0` goods on hand, the agent sells `qs`
//! goods when the price rises to `p_s(qs)` and buys `qd` goods when it falls
//! to `p_d(qd)`:
//!
//! ```text
//! p_s = p0 * (q0 / (q0 - qs))^(1/alpha)      0 <= qs < q0
//! p_d = p0 * (q0 / (q0 + qd))^(1/alpha)      qd >= 0
//! ```
//!
//! Supply is bounded by the goods on hand (vertical asymptote at `qs = q0`)
//! and the area under the demand curve is the money on hand.

use std::io::Write;

use crate::quad::simpson;
use crate::rule::Weights;
use crate::{Error, Result, Scalar};

/// Upper quadrature limit for [`demand_area`], as a multiple of `q0`.
pub const AREA_QUADRATURE_SPAN: f64 = 1e6;
const AREA_QUADRATURE_PANELS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveAnchor<S> {
    p0: S,
    q0: S,
    weights: Weights<S>,
}

impl<S: Scalar> CurveAnchor<S> {
    pub fn new(p0: S, q0: S, weights: Weights<S>) -> Result<Self> {
        Error::ensure(p0 > S::zero() && p0.is_finite(), "p0", p0, "finite p0 > 0")?;
        Error::ensure(q0 > S::zero() && q0.is_finite(), "q0", q0, "finite q0 > 0")?;
        Ok(Self { p0, q0, weights })
    }

    pub fn p0(&self) -> S {
        self.p0
    }

    pub fn q0(&self) -> S {
        self.q0
    }

    pub fn weights(&self) -> Weights<S> {
        self.weights
    }

    /// Money on hand at the anchor, `(alpha / beta) * p0 * q0`.
    pub fn m0(&self) -> S {
        self.weights.alpha() / self.weights.beta() * self.p0 * self.q0
    }

    fn exponent(&self) -> S {
        self.weights.alpha().recip()
    }
}

/// Price at which the agent has sold `qs` of its `q0` goods.
pub fn supply_price<S: Scalar>(qs: S, a: &CurveAnchor<S>) -> Result<S> {
    Error::ensure(
        qs >= S::zero() && qs < a.q0(),
        "qs",
        qs,
        "0 <= qs < q0 (supply asymptote at q0)",
    )?;
    Ok(a.p0() * (a.q0() / (a.q0() - qs)).powf(a.exponent()))
}

/// Price at which the agent has bought `qd` goods on top of its `q0`.
pub fn demand_price<S: Scalar>(qd: S, a: &CurveAnchor<S>) -> Result<S> {
    Error::ensure(
        qd >= S::zero() && qd.is_finite(),
        "qd",
        qd,
        "finite qd >= 0",
    )?;
    Ok(a.p0() * (a.q0() / (a.q0() + qd)).powf(a.exponent()))
}

/// Area under the demand curve, analytic and numeric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandArea<S> {
    /// `(alpha / beta) * p0 * q0`, the money on hand.
    pub analytic: S,
    /// Quadrature over `[0, Q]` plus the closed-form tail beyond `Q`.
    pub numeric: S,
    /// The tail part of `numeric`.
    pub tail: S,
}

impl<S: Scalar> DemandArea<S> {
    pub fn relative_gap(&self) -> S {
        (self.numeric - self.analytic).abs() / self.analytic
    }
}

/// Integrates the demand curve over `[0, inf)`.
///
/// The finite part, up to `Q = 1e6 * q0`, is integrated with Simpson's rule
/// after the change of variable `qd = q0 * (e^t - 1)`, which turns the
/// power-law decay into a smooth exponential. Beyond `Q` the exact tail
/// `p0 * q0^(1/alpha) * (q0 + Q)^(1 - 1/alpha) * alpha / beta` is added.
pub fn demand_area<S: Scalar>(a: &CurveAnchor<S>) -> DemandArea<S> {
    let q0 = a.q0();
    let upper = q0 * S::lit(AREA_QUADRATURE_SPAN);
    let t_max = (upper / q0).ln_1p();
    let integrand = |t: S| {
        let qd = q0 * t.exp_m1();
        let jacobian = q0 * t.exp();
        demand_price(qd, a).expect("qd >= 0 on the quadrature grid") * jacobian
    };
    let body = simpson(integrand, S::zero(), t_max, AREA_QUADRATURE_PANELS);

    let (alpha, beta) = (a.weights().alpha(), a.weights().beta());
    let k = a.exponent();
    let tail = a.p0() * q0.powf(k) * (q0 + upper).powf(S::one() - k) * alpha / beta;

    DemandArea {
        analytic: a.m0(),
        numeric: body + tail,
        tail,
    }
}

/// Slopes `(dp_s/dqs, dp_d/dqd)` at the anchor: `(+p0/(alpha q0), -p0/(alpha q0))`.
pub fn marginal_slopes<S: Scalar>(a: &CurveAnchor<S>) -> (S, S) {
    let slope = a.p0() / (a.weights().alpha() * a.q0());
    (slope, -slope)
}

/// One row of a sampled supply/demand table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample<S> {
    pub q: S,
    /// `None` beyond the supply cutoff.
    pub p_supply: Option<S>,
    pub p_demand: S,
}

/// Samples both curves at `n` evenly spaced quantities on `[0, qmax_fraction * q0]`.
pub fn sample_curves<S: Scalar>(
    a: &CurveAnchor<S>,
    n: usize,
    qmax_fraction: S,
) -> Result<Vec<CurveSample<S>>> {
    sample_curves_over(a, n, qmax_fraction * a.q0(), qmax_fraction)
}

/// Samples both curves at `n` evenly spaced quantities on `[0, q_end]`.
///
/// Demand is reported on every row; supply only where `q <= qmax_fraction * q0`,
/// which keeps the table finite near the asymptote.
pub fn sample_curves_over<S: Scalar>(
    a: &CurveAnchor<S>,
    n: usize,
    q_end: S,
    qmax_fraction: S,
) -> Result<Vec<CurveSample<S>>> {
    if n < 2 {
        return Err(Error::domain("n", S::lit(n as f64), "n >= 2"));
    }
    Error::ensure(
        qmax_fraction > S::zero() && qmax_fraction < S::one(),
        "qmax_fraction",
        qmax_fraction,
        "0 < qmax_fraction < 1",
    )?;
    Error::ensure(
        q_end > S::zero() && q_end.is_finite(),
        "q_end",
        q_end,
        "finite q_end > 0",
    )?;

    let cutoff = qmax_fraction * a.q0();
    let last = S::lit((n - 1) as f64);
    (0..n)
        .map(|i| {
            let q = q_end * S::lit(i as f64) / last;
            let p_supply = if q <= cutoff {
                Some(supply_price(q, a)?)
            } else {
                None
            };
            Ok(CurveSample {
                q,
                p_supply,
                p_demand: demand_price(q, a)?,
            })
        })
        .collect()
}

/// Writes `q,p_supply,p_demand` rows; a missing supply value is an empty field.
pub fn write_curves_csv<S: Scalar, W: Write>(rows: &[CurveSample<S>], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["q", "p_supply", "p_demand"])?;
    for row in rows {
        let supply = row.p_supply.map(|p| p.to_string()).unwrap_or_default();
        wtr.write_record([row.q.to_string(), supply, row.p_demand.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Budget `4 p0^2 |dq/dp|` an equal-weight agent needs to match a depth slope.
///
/// Only the equal-weight form is known, so this takes no weights.
pub fn budget_from_depth<S: Scalar>(p0: S, abs_dq_dp: S) -> Result<S> {
    Error::ensure(p0 > S::zero() && p0.is_finite(), "p0", p0, "finite p0 > 0")?;
    Error::ensure(
        abs_dq_dp >= S::zero() && abs_dq_dp.is_finite(),
        "abs_dq_dp",
        abs_dq_dp,
        "finite slope >= 0",
    )?;
    Ok(S::lit(4.0) * p0 * p0 * abs_dq_dp)
}
