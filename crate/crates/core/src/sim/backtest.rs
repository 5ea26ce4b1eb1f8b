use rayon::prelude::*;

use super::PricePath;
use crate::rule::{
    check_fee_rate, ratio_from_rel_diff, rebalance, rel_diff, target_holdings, utility_value,
    Trade, UtilityContext, Weights,
};
use crate::{Error, Result, Scalar};

/// Starting wealth used by [`threshold_scan`]; growth ratios do not depend on it.
pub const SCAN_WEALTH: f64 = 1.0;

/// Rebalance once the price has moved at least `threshold` (in relative
/// difference terms) away from the last rebalance price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriggerPolicy<S> {
    threshold: S,
}

impl<S: Scalar> TriggerPolicy<S> {
    pub fn new(threshold: S) -> Result<Self> {
        let threshold = Error::ensure(
            threshold > S::zero() && threshold < S::two(),
            "threshold",
            threshold,
            "0 < threshold < 2",
        )?;
        Ok(Self { threshold })
    }

    pub fn threshold(&self) -> S {
        self.threshold
    }

    /// `rel_diff` carries a few ulps of absolute error, so a move built to
    /// be exactly `threshold` must not miss the trigger by rounding.
    fn fires(&self, moved: S) -> bool {
        moved > S::zero() && moved + S::lit(16.0) * S::epsilon() >= self.threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestReport<S> {
    pub trades: Vec<Trade<S>>,
    /// Path index of the tick at which each trade executed.
    pub trade_ticks: Vec<usize>,
    /// Utility right after each trade, measured against the path's start price.
    pub utility_series: Vec<S>,
    pub initial_utility: S,
    pub final_utility: S,
    /// `final_utility / initial_utility`.
    pub growth_ratio_total: S,
    pub trade_count: usize,
}

impl<S: Scalar> BacktestReport<S> {
    /// Geometric-mean utility ratio per executed trade, 1 without trades.
    pub fn mean_trade_ratio(&self) -> S {
        if self.trade_count == 0 {
            return S::one();
        }
        (self.growth_ratio_total.ln() / S::lit(self.trade_count as f64)).exp()
    }
}

/// Walks `path`, rebalancing whenever the trigger fires.
///
/// Holdings start on target at the first price; every trade executes at the
/// tick that crossed the threshold, at that tick's price. Utilities use the
/// context anchored at the path's first price.
pub fn run_backtest<S: Scalar>(
    path: &PricePath<S>,
    w: Weights<S>,
    policy: TriggerPolicy<S>,
    fee_rate: S,
    initial_wealth: S,
) -> Result<BacktestReport<S>> {
    check_fee_rate(fee_rate)?;
    Error::ensure(
        initial_wealth > S::zero() && initial_wealth.is_finite(),
        "initial_wealth",
        initial_wealth,
        "finite wealth > 0",
    )?;
    let ctx = UtilityContext::new(path.start(), w)?;
    let mut holdings = target_holdings(initial_wealth, path.start(), w)?;
    let initial_utility = utility_value(&holdings, &ctx);

    let mut anchor = path.start();
    let mut trades = Vec::new();
    let mut trade_ticks = Vec::new();
    let mut utility_series = Vec::new();
    for (tick, &price) in path.prices().iter().enumerate().skip(1) {
        if !policy.fires(rel_diff(anchor, price)?) {
            continue;
        }
        let (trade, next) = rebalance(&holdings, price, w, fee_rate)?;
        holdings = next;
        anchor = price;
        trades.push(trade);
        trade_ticks.push(tick);
        utility_series.push(utility_value(&holdings, &ctx));
    }

    let final_utility = utility_series.last().copied().unwrap_or(initial_utility);
    Ok(BacktestReport {
        trade_count: trades.len(),
        trades,
        trade_ticks,
        utility_series,
        initial_utility,
        final_utility,
        growth_ratio_total: final_utility / initial_utility,
    })
}

/// Compounds a per-trade utility growth over `trades_per_year` trades:
/// `ratio_from_rel_diff(per_trade_pct_du)^trades_per_year - 1`.
pub fn annualize<S: Scalar>(per_trade_pct_du: S, trades_per_year: u32) -> Result<S> {
    let ratio = ratio_from_rel_diff(per_trade_pct_du)?;
    Ok((ratio.ln() * S::lit(f64::from(trades_per_year))).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow<S> {
    pub threshold: S,
    pub trade_count: usize,
    pub growth_ratio_total: S,
}

/// One backtest per threshold over the same path, rows in input order.
/// Runs are independent and execute in parallel.
pub fn threshold_scan<S: Scalar>(
    path: &PricePath<S>,
    w: Weights<S>,
    thresholds: &[S],
    fee_rate: S,
) -> Result<Vec<ScanRow<S>>> {
    if thresholds.is_empty() {
        return Err(Error::Empty("threshold list"));
    }
    let policies = thresholds
        .iter()
        .map(|&t| TriggerPolicy::new(t))
        .collect::<Result<Vec<_>>>()?;
    policies
        .par_iter()
        .map(|&policy| {
            let report = run_backtest(path, w, policy, fee_rate, S::lit(SCAN_WEALTH))?;
            Ok(ScanRow {
                threshold: policy.threshold(),
                trade_count: report.trade_count,
                growth_ratio_total: report.growth_ratio_total,
            })
        })
        .collect()
}
