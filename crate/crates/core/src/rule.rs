//! Utility, rebalancing and per-transaction growth under the weighted rule.
//!
//! The rule keeps value split `alpha : beta` between money and goods. Its
//! cardinal utility, measured in money units and scaled so that a portfolio
//! built at the reference price `p0` is worth exactly its budget, is the
//! Cobb-Douglas function
//!
//! ```text
//! u(m, q) = p0^beta / (alpha^alpha * beta^beta) * m^alpha * q^beta
//! ```
//!
//! Rebalancing after a finite move `p0 -> p1` multiplies utility by the
//! weighted arithmetic mean of the two prices over their weighted geometric
//! mean, which is never below one.

use crate::{Error, Result, Scalar};

/// Value proportion kept in money (`alpha`) and in goods (`beta`).
///
/// Only `alpha` is stored; `beta` is always `1 - alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights<S> {
    alpha: S,
}

impl<S: Scalar> Weights<S> {
    pub fn new(alpha: S) -> Result<Self> {
        let alpha = Error::ensure(
            alpha > S::zero() && alpha < S::one(),
            "alpha",
            alpha,
            "0 < alpha < 1",
        )?;
        Ok(Self { alpha })
    }

    /// The unweighted rule, `alpha = beta = 1/2`.
    pub fn equal() -> Self {
        Self { alpha: S::lit(0.5) }
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn beta(&self) -> S {
        S::one() - self.alpha
    }

    /// Leading coefficient of the small-move growth, `alpha * beta / 2`.
    pub fn small_move_coefficient(&self) -> S {
        self.alpha * self.beta() / S::two()
    }
}

impl<S: Scalar> Default for Weights<S> {
    fn default() -> Self {
        Self::equal()
    }
}

/// Money `m` and goods `q` in possession.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Holdings<S> {
    m: S,
    q: S,
}

impl<S: Scalar> Holdings<S> {
    pub fn new(m: S, q: S) -> Result<Self> {
        Error::ensure(m >= S::zero() && m.is_finite(), "m", m, "finite m >= 0")?;
        Error::ensure(q >= S::zero() && q.is_finite(), "q", q, "finite q >= 0")?;
        Ok(Self { m, q })
    }

    pub fn m(&self) -> S {
        self.m
    }

    pub fn q(&self) -> S {
        self.q
    }

    /// Market value `m + price * q`.
    pub fn wealth_at(&self, price: S) -> S {
        self.m + price * self.q
    }

    /// Fraction of value held in money at `price`.
    pub fn money_fraction_at(&self, price: S) -> S {
        self.m / self.wealth_at(price)
    }
}

/// Reference price and weights; together they fix the utility's scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityContext<S> {
    p0: S,
    weights: Weights<S>,
}

impl<S: Scalar> UtilityContext<S> {
    pub fn new(p0: S, weights: Weights<S>) -> Result<Self> {
        check_price("p0", p0)?;
        Ok(Self { p0, weights })
    }

    pub fn p0(&self) -> S {
        self.p0
    }

    pub fn weights(&self) -> Weights<S> {
        self.weights
    }

    /// Efficiency coefficient `A = p0^beta / (alpha^alpha * beta^beta)`.
    pub fn efficiency(&self) -> S {
        let (a, b) = (self.weights.alpha(), self.weights.beta());
        self.p0.powf(b) / (a.powf(a) * b.powf(b))
    }
}

/// One rebalancing transaction.
///
/// `delta_q > 0` is a purchase of goods. `delta_m` is the full change of the
/// money leg, fee included, so `delta_m = -exec_price * delta_q - fee_paid`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trade<S> {
    pub exec_price: S,
    pub delta_q: S,
    pub delta_m: S,
    pub fee_paid: S,
}

impl<S: Scalar> Trade<S> {
    pub fn is_noop(&self) -> bool {
        self.delta_q == S::zero()
    }
}

/// Utility ratio and the symmetric relative differences of a price move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFigures<S> {
    /// `u1 / u0`.
    pub ratio: S,
    pub pct_du: S,
    pub pct_dp: S,
}

fn check_price<S: Scalar>(name: &'static str, p: S) -> Result<S> {
    Error::ensure(p > S::zero() && p.is_finite(), name, p, "finite price > 0")
}

/// Cardinal utility of `h`, in money units.
///
/// Evaluated as the weighted geometric mean of `m / alpha` and
/// `p0 * q / beta`, which is algebraically `A * m^alpha * q^beta` and returns
/// exactly the budget for holdings that sit on target at `p0`.
pub fn utility_value<S: Scalar>(h: &Holdings<S>, ctx: &UtilityContext<S>) -> S {
    let w = ctx.weights();
    let money_side = h.m() / w.alpha();
    let goods_side = ctx.p0() * h.q() / w.beta();
    if money_side == S::zero() || goods_side == S::zero() {
        return S::zero();
    }
    (w.alpha() * money_side.ln() + w.beta() * goods_side.ln()).exp()
}

/// Holdings that split `wealth` into `alpha` money and `beta` goods at `price`.
pub fn target_holdings<S: Scalar>(wealth: S, price: S, w: Weights<S>) -> Result<Holdings<S>> {
    Error::ensure(
        wealth >= S::zero() && wealth.is_finite(),
        "wealth",
        wealth,
        "finite wealth >= 0",
    )?;
    check_price("price", price)?;
    Holdings::new(w.alpha() * wealth, w.beta() * wealth / price)
}

/// Trades `h` back onto target at `exec_price`.
///
/// The target is computed on pre-fee wealth `m + exec_price * q`. The fee,
/// `fee_rate * exec_price * |delta_q|`, is then taken from the money leg.
pub fn rebalance<S: Scalar>(
    h: &Holdings<S>,
    exec_price: S,
    w: Weights<S>,
    fee_rate: S,
) -> Result<(Trade<S>, Holdings<S>)> {
    check_price("exec_price", exec_price)?;
    check_fee_rate(fee_rate)?;
    let target = target_holdings(h.wealth_at(exec_price), exec_price, w)?;

    let delta_q = target.q() - h.q();
    let fee_paid = fee_rate * exec_price * delta_q.abs();
    let delta_m = -(exec_price * delta_q) - fee_paid;
    let m = h.m() + delta_m;
    // Rounding can leave a zero-fee money leg a hair below zero when alpha is tiny.
    let m = if fee_paid == S::zero() && m < S::zero() {
        S::zero()
    } else {
        Error::ensure(
            m >= S::zero(),
            "money after fee",
            m,
            "fee covered by money leg",
        )?
    };

    let trade = Trade {
        exec_price,
        delta_q,
        delta_m,
        fee_paid,
    };
    Ok((trade, Holdings::new(m, target.q())?))
}

pub(crate) fn check_fee_rate<S: Scalar>(fee_rate: S) -> Result<S> {
    Error::ensure(
        fee_rate >= S::zero() && fee_rate < S::one(),
        "fee_rate",
        fee_rate,
        "0 <= fee_rate < 1",
    )
}

/// Utility multiplier for rebalancing after a move from `p0` to `p1`:
/// `(alpha * p0 + beta * p1) / (p0^alpha * p1^beta)`.
pub fn growth_ratio<S: Scalar>(p0: S, p1: S, w: Weights<S>) -> Result<S> {
    check_price("p0", p0)?;
    check_price("p1", p1)?;
    // In terms of x = p1 / p0 the numerator is 1 + beta * (x - 1), exactly 1 at x = 1.
    let x = p1 / p0;
    let beta = w.beta();
    Ok((S::one() + beta * (x - S::one())) / (beta * x.ln()).exp())
}

/// Ratio and relative differences for the move `p0 -> p1`.
pub fn growth_figures<S: Scalar>(p0: S, p1: S, w: Weights<S>) -> Result<GrowthFigures<S>> {
    let ratio = growth_ratio(p0, p1, w)?;
    Ok(GrowthFigures {
        ratio,
        pct_du: rel_diff(S::one(), ratio)?,
        pct_dp: rel_diff(p0, p1)?,
    })
}

/// Symmetric relative difference `2 |a - b| / (a + b)`, in `[0, 2)`.
pub fn rel_diff<S: Scalar>(a: S, b: S) -> Result<S> {
    Error::ensure(a > S::zero() && a.is_finite(), "a", a, "finite a > 0")?;
    Error::ensure(b > S::zero() && b.is_finite(), "b", b, "finite b > 0")?;
    Ok(S::two() * (a - b).abs() / (a + b))
}

/// Inverse of [`rel_diff`] for the larger-over-smaller ratio: `(2 + d) / (2 - d)`.
pub fn ratio_from_rel_diff<S: Scalar>(d: S) -> Result<S> {
    check_rel_diff("d", d)?;
    Ok((S::two() + d) / (S::two() - d))
}

fn check_rel_diff<S: Scalar>(name: &'static str, d: S) -> Result<S> {
    Error::ensure(d >= S::zero() && d < S::two(), name, d, "0 <= d < 2")
}

/// Exact utility growth `%du` for an equal-weight rebalance after a `%dp` move.
///
/// The textbook form `(16 - 8 sqrt(4 - d^2)) / d^2 - 2` cancels
/// catastrophically for small `d`; multiplying through by the conjugate gives
/// the identical `2 d^2 / (2 + sqrt(4 - d^2))^2`, which is accurate to a few
/// ulps over the whole range and tends to 0 at `d = 0`.
pub fn pct_du_exact<S: Scalar>(pct_dp: S) -> Result<S> {
    let d = check_rel_diff("pct_dp", pct_dp)?;
    let root = (S::lit(4.0) - d * d).sqrt();
    let denom = S::two() + root;
    Ok(S::two() * d * d / (denom * denom))
}

/// Leading-order growth `alpha * beta / 2 * pct_dp^2`.
pub fn pct_du_quadratic<S: Scalar>(pct_dp: S, w: Weights<S>) -> Result<S> {
    let d = check_rel_diff("pct_dp", pct_dp)?;
    Ok(w.small_move_coefficient() * d * d)
}

/// Grid value of `alpha` with the largest small-move coefficient `alpha (1 - alpha) / 2`.
///
/// Coefficients within a few ulps of each other count as tied (the pair
/// `alpha`, `1 - alpha` rarely rounds to identical products); ties go to the
/// smallest `alpha`.
pub fn optimal_alpha_scan<S: Scalar>(grid: &[S]) -> Result<S> {
    if grid.is_empty() {
        return Err(Error::Empty("alpha grid"));
    }
    let tie = S::lit(8.0) * S::epsilon();
    let mut best = (grid[0], Weights::new(grid[0])?.small_move_coefficient());
    for &alpha in &grid[1..] {
        let coefficient = Weights::new(alpha)?.small_move_coefficient();
        let slack = tie * coefficient.max(best.1);
        let better = coefficient > best.1 + slack;
        let tied_lower = (coefficient - best.1).abs() <= slack && alpha < best.0;
        if better || tied_lower {
            best = (alpha, coefficient);
        }
    }
    Ok(best.0)
}
